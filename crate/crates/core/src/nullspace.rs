//! The augmented configuration matrix, codimension, cores, Dziobek trees,
//! explicit kernel bases from oriented volumes, membership identities, and
//! the Pluecker relation.
//!
//! For a configuration `X` of `n` points, the augmented configuration matrix
//! has a top row of ones and the point coordinates below, one column per
//! point. Its kernel is the space of weight vectors with zero total weight
//! and identically zero first moment; its dimension equals the codimension
//! `c = (n - 1) - dim(X)`.

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::moments::WeightVector;
use crate::residual::{Residual, ResidualGrid, ScaleTracker};
use crate::scalar::{Mode, Scalar};

/// Augmented configuration matrix: `(N+1) x n`, first row all ones, column
/// `j` equal to `(1, x_j)`.
pub fn config_matrix(x: &Configuration) -> Mat {
    let mode = x.mode();
    let mut rows = vec![vec![mode.one(); x.n()]];
    for coord in 0..x.ambient_dim() {
        rows.push((0..x.n()).map(|j| x.point(j)[coord].clone()).collect());
    }
    Mat::from_rows(rows).expect("configuration is non-empty")
}

/// Kernel of the augmented configuration matrix, by direct row reduction.
/// This is the oracle route to the same space the volume bases span.
pub fn config_matrix_kernel(x: &Configuration, eps: f64) -> Vec<Vec<Scalar>> {
    config_matrix(x).kernel_basis(eps)
}

/// Dimension of the affine closure and codimension `c = (n-1) - d`.
pub fn dimension_codimension(x: &Configuration, eps: f64) -> (usize, usize) {
    let d = config_matrix(x).rank(eps) - 1;
    (d, (x.n() - 1) - d)
}

fn affinely_independent(x: &Configuration, indices: &[usize], eps: f64) -> bool {
    let sub = x.subconfiguration(indices).expect("valid indices");
    config_matrix(&sub).rank(eps) == indices.len()
}

/// Lexicographically smallest index set of `d+1` points spanning the affine
/// closure, found by greedy rank extension. The successive prefixes form an
/// ascending chain of simplexes.
pub fn find_core(x: &Configuration, eps: f64) -> Vec<usize> {
    let (d, _) = dimension_codimension(x, eps);
    let mut core: Vec<usize> = Vec::with_capacity(d + 1);
    for i in 0..x.n() {
        let mut candidate = core.clone();
        candidate.push(i);
        if affinely_independent(x, &candidate, eps) {
            core = candidate;
            if core.len() == d + 1 {
                break;
            }
        }
    }
    core
}

/// A core simplex chain plus the codimension-one subconfigurations that
/// contain the core, one per point outside it.
#[derive(Debug, Clone)]
pub struct DziobekTree {
    core: Vec<usize>,
    chain: Vec<Vec<usize>>,
    extras: Vec<usize>,
    leaves: Vec<Vec<usize>>,
}

impl DziobekTree {
    pub fn core(&self) -> &[usize] {
        &self.core
    }

    /// Ascending chain `S_0 subset ... subset S_d` of simplex index sets.
    pub fn chain(&self) -> &[Vec<usize>] {
        &self.chain
    }

    /// The point added to the core by each leaf, in ascending order.
    pub fn extras(&self) -> &[usize] {
        &self.extras
    }

    /// Index sets of the Dziobek subconfigurations; one per extra point.
    pub fn leaves(&self) -> &[Vec<usize>] {
        &self.leaves
    }
}

/// Build the Dziobek tree over a given core.
pub fn dziobek_tree(x: &Configuration, core: &[usize], eps: f64) -> Result<DziobekTree> {
    let (d, _) = dimension_codimension(x, eps);
    let mut core: Vec<usize> = core.to_vec();
    core.sort_unstable();
    core.dedup();
    if core.len() != d + 1
        || core.iter().any(|&i| i >= x.n())
        || !affinely_independent(x, &core, eps)
    {
        return Err(Error::NotACore(core));
    }
    let chain: Vec<Vec<usize>> = (0..=d).map(|k| core[..=k].to_vec()).collect();
    for s in &chain {
        debug_assert!(affinely_independent(x, s, eps));
    }
    let extras: Vec<usize> = (0..x.n()).filter(|i| !core.contains(i)).collect();
    let leaves = extras
        .iter()
        .map(|&j| {
            let mut leaf = core.clone();
            leaf.push(j);
            leaf.sort_unstable();
            leaf
        })
        .collect();
    Ok(DziobekTree {
        core,
        chain,
        extras,
        leaves,
    })
}

/// Oriented volume of the subconfiguration on `indices` (taken in ascending
/// order): the determinant of its augmented configuration matrix. The frame
/// must make that matrix square, i.e. ambient dimension = points - 1.
pub fn volume(x: &Configuration, indices: &[usize]) -> Result<Scalar> {
    let mut idx: Vec<usize> = indices.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if idx.len() != indices.len() {
        return Err(Error::OutOfRange("duplicate indices in volume".into()));
    }
    if idx.len() != x.ambient_dim() + 1 {
        return Err(Error::FrameMismatch {
            points: idx.len(),
            ambient: x.ambient_dim(),
        });
    }
    let sub = x.subconfiguration(&idx)?;
    config_matrix(&sub).det()
}

/// `Delta_{j_1...j_b}`: the volume after deleting the listed indices.
pub fn delta(x: &Configuration, deleted: &[usize]) -> Result<Scalar> {
    let kept: Vec<usize> = (0..x.n()).filter(|i| !deleted.contains(i)).collect();
    volume(x, &kept)
}

/// Spanning weight vector of a codimension-one configuration:
/// `((-1)^1 Delta_1, ..., (-1)^n Delta_n)` with `Delta_j` the volume of the
/// configuration minus its `j`-th point.
pub fn codim1_generator(x: &Configuration, eps: f64) -> Result<WeightVector> {
    let (_, c) = dimension_codimension(x, eps);
    if c != 1 {
        return Err(Error::WrongCodimension {
            expected: 1,
            got: c,
        });
    }
    let entries = (0..x.n())
        .map(|j| {
            let v = delta(x, &[j])?;
            // 1-based sign convention: entry j+1 carries (-1)^(j+1)
            Ok(if j % 2 == 0 { -v } else { v })
        })
        .collect::<Result<Vec<_>>>()?;
    WeightVector::new(entries)
}

/// A volume-coordinate basis of the kernel of the configuration matrix.
#[derive(Debug, Clone)]
pub struct W0Basis {
    core: Vec<usize>,
    extras: Vec<usize>,
    vectors: Vec<WeightVector>,
    leaf_volumes: Vec<Vec<Scalar>>,
}

impl W0Basis {
    /// The empty basis of a simplex (codimension zero).
    pub fn trivial(core: Vec<usize>) -> W0Basis {
        W0Basis {
            core,
            extras: Vec::new(),
            vectors: Vec::new(),
            leaf_volumes: Vec::new(),
        }
    }

    /// Number of basis vectors, equal to the codimension.
    pub fn c(&self) -> usize {
        self.vectors.len()
    }

    pub fn n(&self) -> usize {
        self.vectors.first().map_or(0, |v| v.len())
    }

    pub fn core(&self) -> &[usize] {
        &self.core
    }

    /// Extra point index of each leaf, ascending; vector `k` has its unique
    /// nonzero entry outside the core at `extras()[k]`.
    pub fn extras(&self) -> &[usize] {
        &self.extras
    }

    pub fn vectors(&self) -> &[WeightVector] {
        &self.vectors
    }

    /// Per leaf, the unsigned deleted-point volumes that populate the vector.
    pub fn leaf_volumes(&self) -> &[Vec<Scalar>] {
        &self.leaf_volumes
    }

    /// The `n x c` matrix whose columns are the basis vectors.
    pub fn matrix(&self) -> Mat {
        Mat::from_columns(
            &self
                .vectors
                .iter()
                .map(|w| w.entries().to_vec())
                .collect::<Vec<_>>(),
        )
        .expect("basis is non-empty")
    }
}

/// Basis of the kernel of the configuration matrix built from a Dziobek
/// tree: one zero-padded codimension-one generator per leaf.
pub fn w0_basis(x: &Configuration, core: &[usize], eps: f64) -> Result<W0Basis> {
    let tree = dziobek_tree(x, core, eps)?;
    let (_, c) = dimension_codimension(x, eps);
    if c == 0 {
        return Err(Error::WrongCodimension {
            expected: 1,
            got: 0,
        });
    }
    let mode = x.mode();
    let mut vectors = Vec::with_capacity(c);
    let mut leaf_volumes = Vec::with_capacity(c);
    for leaf in tree.leaves() {
        let sub = x.subconfiguration(leaf)?;
        let gen = codim1_generator(&sub, eps)?;
        let mut embedded = vec![mode.zero(); x.n()];
        for (local, &global) in leaf.iter().enumerate() {
            embedded[global] = gen.entry(local).clone();
        }
        vectors.push(WeightVector::new(embedded)?);
        leaf_volumes.push(
            (0..sub.n())
                .map(|j| delta(&sub, &[j]))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(W0Basis {
        core: tree.core().to_vec(),
        extras: tree.extras().to_vec(),
        vectors,
        leaf_volumes,
    })
}

/// Membership identities for the kernel, relative to an explicit core: the
/// `d+1` residuals
/// `(-1)^(i-d) w_i Delta_ref - sum_l w_l Delta_(i, others-without-l)`,
/// all zero iff the weight vector lies in the kernel. Points and weights are
/// reindexed so the core comes first (in ascending order).
pub fn membership_identities_with_core(
    x: &Configuration,
    w: &WeightVector,
    core: &[usize],
    eps: f64,
) -> Result<ResidualGrid> {
    if w.len() != x.n() {
        return Err(Error::ShapeMismatch(format!(
            "{} weights for {} points",
            w.len(),
            x.n()
        )));
    }
    let tree = dziobek_tree(x, core, eps)?;
    let perm: Vec<usize> = tree
        .core()
        .iter()
        .chain(tree.extras().iter())
        .copied()
        .collect();
    let xp = x.subconfiguration(&perm)?;
    let wp: Vec<Scalar> = perm.iter().map(|&i| w.entry(i).clone()).collect();
    let n = xp.n();
    let d = tree.core().len() - 1;
    let delta_ref = volume(&xp, &(0..=d).collect::<Vec<_>>())?;
    if delta_ref.is_zero() {
        return Err(Error::DegenerateFrame);
    }
    let mode = x.mode();
    let mut scale = ScaleTracker::new(mode);
    let mut residuals = Vec::with_capacity(d + 1);
    for i in 0..=d {
        // sign (-1)^((i+1) - d) in 1-based indexing
        let lhs_mag = &wp[i] * &delta_ref;
        let lhs = if (i + 1 + d) % 2 == 0 {
            lhs_mag.clone()
        } else {
            -lhs_mag.clone()
        };
        scale.observe(&lhs);
        let mut rhs = mode.zero();
        for l in (d + 1)..n {
            // keep the core minus point i, plus point l
            let kept: Vec<usize> = (0..=d).filter(|&k| k != i).chain([l]).collect();
            let term = &wp[l] * volume(&xp, &kept)?;
            scale.observe(&term);
            rhs = rhs + term;
        }
        residuals.push(lhs - rhs);
    }
    Ok(ResidualGrid::new(
        Mat::from_rows(vec![residuals])?,
        scale.finish(),
    ))
}

/// Membership identities using the lexicographically smallest core.
pub fn membership_identities(
    x: &Configuration,
    w: &WeightVector,
    eps: f64,
) -> Result<ResidualGrid> {
    let core = find_core(x, eps);
    membership_identities_with_core(x, w, &core, eps)
}

/// Index sets and value of a non-vanishing minor.
#[derive(Debug, Clone)]
pub struct MinorWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: Scalar,
}

/// Outcome of checking that all `(c+1) x (c+1)` minors vanish.
#[derive(Debug, Clone)]
pub struct MinorTest {
    pub all_vanish: bool,
    pub witness: Option<MinorWitness>,
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance the rightmost index that can still move
        let mut i = k;
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if idx[i] != i + n - k {
                idx[i] += 1;
                for j in (i + 1)..k {
                    idx[j] = idx[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            return out;
        }
    }
}

/// True iff every `(c+1) x (c+1)` minor of the matrix whose columns are the
/// given vectors vanishes, i.e. the vectors span at most `c` dimensions.
/// Returns the first offending minor otherwise.
pub fn minor_vanishing_test(vectors: &[Vec<Scalar>], c: usize, eps: f64) -> Result<MinorTest> {
    if vectors.is_empty() {
        return Ok(MinorTest {
            all_vanish: true,
            witness: None,
        });
    }
    let m = Mat::from_columns(vectors)?;
    minor_vanishing_test_mat(&m, c, eps)
}

pub(crate) fn minor_vanishing_test_mat(m: &Mat, c: usize, eps: f64) -> Result<MinorTest> {
    let k = c + 1;
    if k > m.nrows() || k > m.ncols() {
        return Ok(MinorTest {
            all_vanish: true,
            witness: None,
        });
    }
    let entry_scale = m.max_abs_entry();
    let mut minor_scale = m.mode().one();
    for _ in 0..k {
        minor_scale = minor_scale * &entry_scale;
    }
    for rows in combinations(m.nrows(), k) {
        for cols in combinations(m.ncols(), k) {
            let d = m.submatrix(&rows, &cols).det()?;
            if !d.is_zero_within(eps, &minor_scale) {
                return Ok(MinorTest {
                    all_vanish: false,
                    witness: Some(MinorWitness {
                        rows,
                        cols,
                        value: d,
                    }),
                });
            }
        }
    }
    Ok(MinorTest {
        all_vanish: true,
        witness: None,
    })
}

/// The six two-point-deletion volumes of a planar five-point configuration,
/// named by the deleted pair (1-based).
#[derive(Debug, Clone)]
pub struct PluckerDeltas {
    pub d23: Scalar,
    pub d24: Scalar,
    pub d25: Scalar,
    pub d34: Scalar,
    pub d35: Scalar,
    pub d45: Scalar,
}

/// `d23 d45 - d24 d35 + d25 d34`, the unique Pluecker relation for the
/// Grassmannian of planes in 4-space. Zero whenever the deltas come from an
/// actual planar configuration; generally nonzero for free values.
pub fn plucker_residual_from_deltas(d: &PluckerDeltas) -> Residual {
    let t1 = &d.d23 * &d.d45;
    let t2 = &d.d24 * &d.d35;
    let t3 = &d.d25 * &d.d34;
    let mut scale = ScaleTracker::new(d.d23.mode());
    scale.observe(&t1);
    scale.observe(&t2);
    scale.observe(&t3);
    Residual::new(t1 - t2 + t3, scale.finish())
}

/// Pluecker deltas of a five-point configuration in the plane.
pub fn plucker_deltas(x: &Configuration) -> Result<PluckerDeltas> {
    if x.n() != 5 || x.ambient_dim() != 2 {
        return Err(Error::WrongShape(format!(
            "Pluecker relation needs 5 points in the plane, got {} in dimension {}",
            x.n(),
            x.ambient_dim()
        )));
    }
    Ok(PluckerDeltas {
        d23: delta(x, &[1, 2])?,
        d24: delta(x, &[1, 3])?,
        d25: delta(x, &[1, 4])?,
        d34: delta(x, &[2, 3])?,
        d35: delta(x, &[2, 4])?,
        d45: delta(x, &[3, 4])?,
    })
}

/// Pluecker relation residual of a planar five-point configuration; always
/// zero for genuine configurations.
pub fn plucker_residual(x: &Configuration) -> Result<Residual> {
    Ok(plucker_residual_from_deltas(&plucker_deltas(x)?))
}

/// Isometric reduction of a float-mode configuration to coordinates in its
/// affine closure (Gram-Schmidt on edge vectors from the first point).
/// Rational inputs are rejected: an exact isometry would need square roots.
pub fn reduce_to_span(x: &Configuration, eps: f64) -> Result<Configuration> {
    if x.mode() != Mode::Float {
        return Err(Error::ModeUnsupported {
            mode: "rational",
            reason: "isometric frame reduction needs square roots".into(),
        });
    }
    let n = x.n();
    let dim = x.ambient_dim();
    let origin: Vec<f64> = x.point(0).iter().map(|s| s.to_f64()).collect();
    let edges: Vec<Vec<f64>> = (1..n)
        .map(|i| {
            x.point(i)
                .iter()
                .zip(&origin)
                .map(|(s, o)| s.to_f64() - o)
                .collect()
        })
        .collect();
    let max_norm = edges
        .iter()
        .map(|e| e.iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0f64, f64::max);
    let threshold = eps * max_norm.max(1.0);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for e in &edges {
        let mut v = e.clone();
        for q in &basis {
            let proj: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > threshold {
            basis.push(v.into_iter().map(|a| a / norm).collect());
        }
        if basis.len() == dim {
            break;
        }
    }
    let out_dim = basis.len().max(1);
    let points = (0..n)
        .map(|i| {
            let e: Vec<f64> = x
                .point(i)
                .iter()
                .zip(&origin)
                .map(|(s, o)| s.to_f64() - o)
                .collect();
            (0..out_dim)
                .map(|k| {
                    let coord = basis
                        .get(k)
                        .map_or(0.0, |q| e.iter().zip(q).map(|(a, b)| a * b).sum());
                    Scalar::float(coord)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Configuration::new(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::dist2;

    fn unit_square() -> Configuration {
        Configuration::from_ints(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]])
    }

    #[test]
    fn config_matrix_layout() {
        let m = config_matrix(&unit_square());
        assert_eq!((m.nrows(), m.ncols()), (3, 4));
        for j in 0..4 {
            assert_eq!(*m.at(0, j), Scalar::int(1));
        }
        assert_eq!(*m.at(1, 1), Scalar::int(1));
        assert_eq!(*m.at(2, 3), Scalar::int(1));

        let single = Configuration::from_ints(&[&[7]]);
        let m = config_matrix(&single);
        assert_eq!((m.nrows(), m.ncols()), (2, 1));
    }

    #[test]
    fn collinear_rank() {
        let line = Configuration::from_ints(&[&[0, 0], &[1, 0], &[2, 0]]);
        assert_eq!(config_matrix(&line).rank(0.0), 2);
        assert_eq!(dimension_codimension(&line, 0.0), (1, 1));
    }

    #[test]
    fn dimension_codimension_examples() {
        let triangle = Configuration::from_ints(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(dimension_codimension(&triangle, 0.0), (2, 0));
        assert_eq!(dimension_codimension(&unit_square(), 0.0), (2, 1));
        // five coplanar points, three collinear (nongeneric of type 1)
        let five = Configuration::from_ints(&[&[0, 0], &[1, 0], &[2, 0], &[0, 1], &[1, 2]]);
        assert_eq!(dimension_codimension(&five, 0.0), (2, 2));
    }

    #[test]
    fn find_core_examples() {
        let triangle = Configuration::from_ints(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(find_core(&triangle, 0.0), vec![0, 1, 2]);
        assert_eq!(find_core(&unit_square(), 0.0), vec![0, 1, 2]);
        // first three collinear: the scan skips index 2
        let five = Configuration::from_ints(&[&[0, 0], &[1, 0], &[2, 0], &[0, 1], &[1, 2]]);
        assert_eq!(find_core(&five, 0.0), vec![0, 1, 3]);
    }

    #[test]
    fn dziobek_tree_examples() {
        let square = unit_square();
        let tree = dziobek_tree(&square, &[0, 1, 2], 0.0).unwrap();
        assert_eq!(tree.leaves(), &[vec![0, 1, 2, 3]]);
        assert_eq!(tree.chain().len(), 3);

        let triangle = Configuration::from_ints(&[&[0, 0], &[1, 0], &[0, 1]]);
        let tree = dziobek_tree(&triangle, &[0, 1, 2], 0.0).unwrap();
        assert!(tree.leaves().is_empty());

        let seven = Configuration::from_ints(&[
            &[0, 0],
            &[1, 0],
            &[0, 1],
            &[2, 3],
            &[-1, 4],
            &[5, 1],
            &[2, -2],
        ]);
        let tree = dziobek_tree(&seven, &[0, 1, 2], 0.0).unwrap();
        assert_eq!(tree.leaves().len(), 4);
        assert_eq!(tree.leaves()[0], vec![0, 1, 2, 3]);
        assert_eq!(tree.leaves()[3], vec![0, 1, 2, 6]);

        // a collinear triple is not a core of a planar configuration
        let five = Configuration::from_ints(&[&[0, 0], &[1, 0], &[2, 0], &[0, 1], &[1, 2]]);
        assert!(matches!(
            dziobek_tree(&five, &[0, 1, 2], 0.0),
            Err(Error::NotACore(_))
        ));
    }

    #[test]
    fn volume_examples() {
        let square = unit_square();
        assert_eq!(volume(&square, &[0, 1, 2]).unwrap(), Scalar::int(1));

        let line = Configuration::from_ints(&[&[0], &[1], &[2]]);
        assert_eq!(volume(&line, &[0, 2]).unwrap(), Scalar::int(2));

        // degenerate subset: zero volume
        let five = Configuration::from_ints(&[&[0, 0], &[1, 0], &[2, 0], &[0, 1], &[1, 2]]);
        assert_eq!(volume(&five, &[0, 1, 2]).unwrap(), Scalar::int(0));

        // frame mismatch: two points in the plane
        assert!(matches!(
            volume(&square, &[0, 1]),
            Err(Error::FrameMismatch { .. })
        ));
    }

    #[test]
    fn codim1_generator_examples() {
        let square = unit_square();
        let w = codim1_generator(&square, 0.0).unwrap();
        assert_eq!(
            w.entries(),
            &[
                Scalar::int(-1),
                Scalar::int(1),
                Scalar::int(-1),
                Scalar::int(1)
            ]
        );
        let prod = config_matrix(&square).mul_vec(w.entries()).unwrap();
        assert!(prod.iter().all(|s| s.is_zero()));

        let line = Configuration::from_ints(&[&[0], &[1], &[2]]);
        let w = codim1_generator(&line, 0.0).unwrap();
        assert_eq!(
            w.entries(),
            &[Scalar::int(-1), Scalar::int(2), Scalar::int(-1)]
        );

        let triangle = Configuration::from_ints(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert!(matches!(
            codim1_generator(&triangle, 0.0),
            Err(Error::WrongCodimension { .. })
        ));
    }

    #[test]
    fn w0_basis_square() {
        let square = unit_square();
        let basis = w0_basis(&square, &[0, 1, 2], 0.0).unwrap();
        assert_eq!(basis.c(), 1);
        assert_eq!(
            basis.vectors()[0].entries(),
            &[
                Scalar::int(-1),
                Scalar::int(1),
                Scalar::int(-1),
                Scalar::int(1)
            ]
        );
    }

    #[test]
    fn w0_basis_planar_five_points() {
        let x = Configuration::from_ints(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1], &[2, 3]]);
        let basis = w0_basis(&x, &[0, 1, 2], 0.0).unwrap();
        assert_eq!(basis.c(), 2);
        assert_eq!(basis.extras(), &[3, 4]);
        let xmat = config_matrix(&x);
        for w in basis.vectors() {
            let prod = xmat.mul_vec(w.entries()).unwrap();
            assert!(prod.iter().all(|s| s.is_zero()));
        }
        // volume pattern: the entry at a vector's own extra point is the core
        // volume, and it vanishes at the other extra point
        let w4 = basis.vectors()[0].entries();
        let w5 = basis.vectors()[1].entries();
        let core_vol = volume(&x, &[0, 1, 2]).unwrap();
        assert_eq!(w4[3], core_vol);
        assert!(w4[4].is_zero());
        assert_eq!(w5[4], core_vol);
        assert!(w5[3].is_zero());
        // independence: rank of the 5x2 matrix is 2
        assert_eq!(basis.matrix().rank(0.0), 2);
    }

    #[test]
    fn w0_basis_matches_kernel_oracle() {
        let x = Configuration::from_ints(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1], &[2, 3]]);
        let core = find_core(&x, 0.0);
        let basis = w0_basis(&x, &core, 0.0).unwrap();
        let oracle = config_matrix_kernel(&x, 0.0);
        assert_eq!(basis.c(), oracle.len());
        // both span the same space: stacking them keeps rank c
        let mut cols: Vec<Vec<Scalar>> = basis
            .vectors()
            .iter()
            .map(|w| w.entries().to_vec())
            .collect();
        cols.extend(oracle);
        let stacked = Mat::from_columns(&cols).unwrap();
        assert_eq!(stacked.rank(0.0), basis.c());
    }

    #[test]
    fn w0_basis_simplex_is_empty() {
        let triangle = Configuration::from_ints(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert!(matches!(
            w0_basis(&triangle, &[0, 1, 2], 0.0),
            Err(Error::WrongCodimension { .. })
        ));
    }

    #[test]
    fn membership_identities_examples() {
        let square = unit_square();
        let member = WeightVector::from_ints(&[-1, 1, -1, 1]);
        let res = membership_identities(&square, &member, 0.0).unwrap();
        assert!(res.is_exact_zero());

        let non_member = WeightVector::from_ints(&[1, 0, 0, 0]);
        let res = membership_identities(&square, &non_member, 0.0).unwrap();
        assert!(!res.is_exact_zero());

        let zero = WeightVector::from_ints(&[0, 0, 0, 0]);
        let res = membership_identities(&square, &zero, 0.0).unwrap();
        assert!(res.is_exact_zero());
    }

    #[test]
    fn membership_agrees_with_kernel_product() {
        let x = Configuration::from_ints(&[&[0, 0], &[2, 1], &[1, 3], &[-1, 2], &[4, 4], &[0, 5]]);
        let xmat = config_matrix(&x);
        let candidates = [
            WeightVector::from_ints(&[1, -2, 3, 0, -1, -1]),
            WeightVector::from_ints(&[0, 0, 1, 0, 0, 0]),
        ];
        for w in &candidates {
            let in_kernel = xmat
                .mul_vec(w.entries())
                .unwrap()
                .iter()
                .all(|s| s.is_zero());
            let res = membership_identities(&x, w, 0.0).unwrap();
            assert_eq!(res.is_exact_zero(), in_kernel);
        }
        // actual kernel members
        for v in config_matrix_kernel(&x, 0.0) {
            let w = WeightVector::new(v).unwrap();
            let res = membership_identities(&x, &w, 0.0).unwrap();
            assert!(res.is_exact_zero());
        }
    }

    #[test]
    fn minor_test_examples() {
        let x = Configuration::from_ints(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1], &[2, 3]]);
        let basis = w0_basis(&x, &[0, 1, 2], 0.0).unwrap();
        let mut vecs: Vec<Vec<Scalar>> = basis
            .vectors()
            .iter()
            .map(|w| w.entries().to_vec())
            .collect();
        // one more kernel member: the sum of the basis vectors
        let extra: Vec<Scalar> = (0..5).map(|i| &vecs[0][i] + &vecs[1][i]).collect();
        vecs.push(extra);
        let t = minor_vanishing_test(&vecs, 2, 0.0).unwrap();
        assert!(t.all_vanish);

        // generic vectors exceed rank c
        let generic = vec![
            vec![
                Scalar::int(1),
                Scalar::int(0),
                Scalar::int(0),
                Scalar::int(2),
                Scalar::int(5),
            ],
            vec![
                Scalar::int(0),
                Scalar::int(1),
                Scalar::int(0),
                Scalar::int(3),
                Scalar::int(7),
            ],
            vec![
                Scalar::int(0),
                Scalar::int(0),
                Scalar::int(1),
                Scalar::int(4),
                Scalar::int(2),
            ],
        ];
        let t = minor_vanishing_test(&generic, 2, 0.0).unwrap();
        assert!(!t.all_vanish);
        let w = t.witness.unwrap();
        assert!(!w.value.is_zero());

        // a single zero vector with c = 0
        let t = minor_vanishing_test(&[vec![Scalar::int(0); 4]], 0, 0.0).unwrap();
        assert!(t.all_vanish);
    }

    #[test]
    fn plucker_residual_on_configurations() {
        let x = Configuration::from_ints(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1], &[2, 3]]);
        assert!(plucker_residual(&x).unwrap().value.is_zero());

        // rational approximation of a regular pentagon
        let pentagon = Configuration::new(vec![
            vec![Scalar::int(1), Scalar::int(0)],
            vec![Scalar::rational(309, 1000), Scalar::rational(951, 1000)],
            vec![Scalar::rational(-809, 1000), Scalar::rational(588, 1000)],
            vec![Scalar::rational(-809, 1000), Scalar::rational(-588, 1000)],
            vec![Scalar::rational(309, 1000), Scalar::rational(-951, 1000)],
        ])
        .unwrap();
        assert!(plucker_residual(&pentagon).unwrap().value.is_zero());

        let triangle = Configuration::from_ints(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert!(matches!(
            plucker_residual(&triangle),
            Err(Error::WrongShape(_))
        ));
    }

    #[test]
    fn plucker_residual_free_deltas() {
        let d = PluckerDeltas {
            d23: Scalar::int(1),
            d24: Scalar::int(2),
            d25: Scalar::int(3),
            d34: Scalar::int(5),
            d35: Scalar::int(7),
            d45: Scalar::int(11),
        };
        // 1*11 - 2*7 + 3*5 = 12
        assert_eq!(plucker_residual_from_deltas(&d).value, Scalar::int(12));
    }

    #[test]
    fn combinations_enumerate() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(2, 3).len(), 0);
    }

    #[test]
    fn reduce_to_span_is_isometric() {
        let x = Configuration::from_floats(&[
            &[1.0, 2.0, 3.0],
            &[2.0, 3.0, 4.0],
            &[0.0, 1.0, 5.0],
            &[1.5, 2.5, 3.5],
        ])
        .unwrap();
        let r = reduce_to_span(&x, 1e-9).unwrap();
        assert_eq!(r.ambient_dim(), 2);
        for i in 0..4 {
            for j in (i + 1)..4 {
                let before = dist2(x.point(i), x.point(j)).to_f64();
                let after = dist2(r.point(i), r.point(j)).to_f64();
                assert!((before - after).abs() < 1e-9);
            }
        }
        let rational = Configuration::from_ints(&[&[0, 0], &[1, 1]]);
        assert!(matches!(
            reduce_to_span(&rational, 0.0),
            Err(Error::ModeUnsupported { .. })
        ));
    }
}
