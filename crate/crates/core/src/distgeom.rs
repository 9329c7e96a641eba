//! Distance geometry: the relative configuration matrix `B(X)` of squared
//! mutual distances, the bordered Cayley-Menger matrix `C(X)`, the bridge
//! between their kernels and the zero-first-moment space, co-sphericity,
//! mutual-distance constraint sets for a prescribed dimension, and the
//! extended Leibniz bilinear form.

use crate::config::{dist2, dot, max_abs, sub, Configuration};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::moments::WeightVector;
use crate::nullspace::{config_matrix, dimension_codimension, minor_vanishing_test_mat};
use crate::scalar::Scalar;

/// `B(X)`: the symmetric grid of squared mutual distances, zero diagonal.
#[derive(Debug, Clone)]
pub struct RelConfigMatrix {
    b: Mat,
}

impl RelConfigMatrix {
    pub fn grid(&self) -> &Mat {
        &self.b
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        self.b.at(i, j)
    }
}

pub fn rel_config_matrix(x: &Configuration) -> RelConfigMatrix {
    let n = x.n();
    let mut b = Mat::zeros(n, n, x.mode());
    for i in 0..n {
        for j in (i + 1)..n {
            let s = x.squared_distance(i, j);
            *b.at_mut(i, j) = s.clone();
            *b.at_mut(j, i) = s;
        }
    }
    RelConfigMatrix { b }
}

/// `C(X)`: `B(X)` bordered by a ones row and column with a zero corner.
#[derive(Debug, Clone)]
pub struct CayleyMengerMatrix {
    c: Mat,
}

impl CayleyMengerMatrix {
    pub fn grid(&self) -> &Mat {
        &self.c
    }
}

pub fn cayley_menger_matrix(x: &Configuration) -> CayleyMengerMatrix {
    let n = x.n();
    let mode = x.mode();
    let b = rel_config_matrix(x);
    let mut c = Mat::zeros(n + 1, n + 1, mode);
    for i in 0..n {
        *c.at_mut(0, i + 1) = mode.one();
        *c.at_mut(i + 1, 0) = mode.one();
        for j in 0..n {
            *c.at_mut(i + 1, j + 1) = b.at(i, j).clone();
        }
    }
    CayleyMengerMatrix { c }
}

/// Cayley-Menger determinant of the whole configuration.
pub fn cayley_menger_det(x: &Configuration) -> Result<Scalar> {
    cayley_menger_matrix(x).c.det()
}

/// Cayley-Menger determinant of the subconfiguration on `indices`.
pub fn cayley_menger_det_subset(x: &Configuration, indices: &[usize]) -> Result<Scalar> {
    let sub = x.subconfiguration(indices)?;
    cayley_menger_det(&sub)
}

/// How the kernels of `B(X)` and `C(X)` relate to the zero-first-moment
/// space of the configuration.
#[derive(Debug, Clone)]
pub struct KernelBridgeReport {
    pub codimension: usize,
    /// Dimension of the kernel of `C(X)`; equals the codimension.
    pub ker_c_dim: usize,
    /// Max-abs residual of `C(X) (w_0, W) = 0` over a kernel basis of the
    /// configuration matrix, with `w_0 = -sum_j w_j s_ij`.
    pub iso_residual: Scalar,
    /// Max-abs deviation of `-sum_j w_j s_ij` across choices of `i`.
    pub w0_consistency: Scalar,
    /// The `w_0` of each basis vector; all zero iff the second moment
    /// vanishes on the kernel (e.g. for co-spherical configurations).
    pub w0_values: Vec<Scalar>,
    /// Dimension of `Ker B(X)` intersected with the zero-total-weight space.
    pub ker_b0_dim: usize,
    /// Max-abs residual of the configuration matrix on that intersection:
    /// zero means the inclusion into the zero-first-moment space holds.
    pub inclusion_residual: Scalar,
    /// Whether the inclusion is an equality.
    pub equality: bool,
    pub scale: Scalar,
}

/// Verify `Ker B(X) meet mu0^-1(0) <= W0(X) ~ Ker C(X)` and report whether
/// the inclusion is an equality (equivalent to `mu2 = 0` on a kernel basis).
pub fn kernel_correspondence(x: &Configuration, eps: f64) -> Result<KernelBridgeReport> {
    let n = x.n();
    let mode = x.mode();
    let (_, c) = dimension_codimension(x, eps);
    let b = rel_config_matrix(x);
    let cm = cayley_menger_matrix(x);
    let ker_c = cm.c.kernel_basis(eps);
    let w0_kernel = config_matrix(x).kernel_basis(eps);
    let scale = {
        let s = b.grid().max_abs_entry();
        if s.is_zero() {
            mode.one()
        } else {
            s
        }
    };

    let mut iso_residual = mode.zero();
    let mut w0_consistency = mode.zero();
    let mut w0_values = Vec::with_capacity(w0_kernel.len());
    for w in &w0_kernel {
        // w0 = -sum_j w_j s_ij, independent of the row i used
        let per_row: Vec<Scalar> = (0..n)
            .map(|i| {
                let mut acc = mode.zero();
                for j in 0..n {
                    acc = acc + b.at(i, j) * &w[j];
                }
                -acc
            })
            .collect();
        for v in &per_row[1..] {
            let dev = (v - &per_row[0]).abs();
            if dev.cmp_abs(&w0_consistency) == std::cmp::Ordering::Greater {
                w0_consistency = dev;
            }
        }
        let mut tilde = Vec::with_capacity(n + 1);
        tilde.push(per_row[0].clone());
        tilde.extend(w.iter().cloned());
        let prod = cm.c.mul_vec(&tilde)?;
        let m = max_abs(&prod);
        if m.cmp_abs(&iso_residual) == std::cmp::Ordering::Greater {
            iso_residual = m;
        }
        w0_values.push(per_row[0].clone());
    }

    // kernel of B restricted to zero-sum vectors: stack a ones row on B
    let mut stacked_rows: Vec<Vec<Scalar>> = vec![vec![mode.one(); n]];
    for i in 0..n {
        stacked_rows.push(b.grid().row(i).to_vec());
    }
    let b0 = Mat::from_rows(stacked_rows)?;
    let ker_b0 = b0.kernel_basis(eps);
    let xmat = config_matrix(x);
    let mut inclusion_residual = mode.zero();
    for v in &ker_b0 {
        let prod = xmat.mul_vec(v)?;
        let m = max_abs(&prod);
        if m.cmp_abs(&inclusion_residual) == std::cmp::Ordering::Greater {
            inclusion_residual = m;
        }
    }
    let equality = ker_b0.len() == c && w0_values.iter().all(|v| v.is_zero_within(eps, &scale));
    Ok(KernelBridgeReport {
        codimension: c,
        ker_c_dim: ker_c.len(),
        iso_residual,
        w0_consistency,
        w0_values,
        ker_b0_dim: ker_b0.len(),
        inclusion_residual,
        equality,
        scale,
    })
}

/// Result of the co-sphericity test.
#[derive(Debug, Clone)]
pub struct CosphericalReport {
    pub cospherical: bool,
    /// A point equidistant from all points, when one exists (free directions
    /// resolved to zero).
    pub center: Option<Vec<Scalar>>,
    pub radius2: Option<Scalar>,
    /// `det B(X)`; vanishes whenever a positive-codimension configuration is
    /// co-spherical.
    pub det_b: Scalar,
}

/// Solve `|x_i - p|^2 = R^2` for a common center by linearizing differences
/// against the first point.
pub fn cospherical_test(x: &Configuration, eps: f64) -> Result<CosphericalReport> {
    let n = x.n();
    let mode = x.mode();
    let det_b = rel_config_matrix(x).b.det()?;
    if n == 1 {
        return Ok(CosphericalReport {
            cospherical: true,
            center: Some(x.point(0).to_vec()),
            radius2: Some(mode.zero()),
            det_b,
        });
    }
    let two = mode.from_i64(2);
    let rows: Vec<Vec<Scalar>> = (1..n)
        .map(|i| {
            sub(x.point(i), x.point(0))
                .into_iter()
                .map(|v| &two * v)
                .collect()
        })
        .collect();
    let rhs: Vec<Scalar> = (1..n)
        .map(|i| {
            let xi = x.point(i);
            let x0 = x.point(0);
            dot(xi, xi) - dot(x0, x0)
        })
        .collect();
    let a = Mat::from_rows(rows)?;
    match a.solve_consistent(&rhs, eps)? {
        Some(p) => {
            let r2 = dist2(x.point(0), &p);
            Ok(CosphericalReport {
                cospherical: true,
                center: Some(p),
                radius2: Some(r2),
                det_b,
            })
        }
        None => Ok(CosphericalReport {
            cospherical: false,
            center: None,
            radius2: None,
            det_b,
        }),
    }
}

/// `(c+1 choose 2)` with `c = (n-1) - d`: the number of mutual-distance
/// constraints that pin the dimension of an `n`-point configuration at `d`.
pub fn constraint_count(n: usize, d: usize) -> Result<usize> {
    if d == 0 || d > n - 1 {
        return Err(Error::OutOfRange(format!(
            "need 1 <= d <= n-1; got n={n}, d={d}"
        )));
    }
    let c = (n - 1) - d;
    Ok((c + 1) * c / 2)
}

/// The inductive family of `(c+1 choose 2)` subsets of size `d+2` whose
/// Cayley-Menger determinants must vanish: the first `d+2` points, then for
/// each later point `k` the sets `{0..d-1} + {j} + {k}` over the points `j`
/// between `d` and `k`. Indices are 0-based.
pub fn constraint_set(n: usize, d: usize) -> Result<Vec<Vec<usize>>> {
    let count = constraint_count(n, d)?;
    if count == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(count);
    out.push((0..d + 2).collect::<Vec<usize>>());
    for k in (d + 2)..n {
        for j in d..k {
            let mut subset: Vec<usize> = (0..d).collect();
            subset.push(j);
            subset.push(k);
            out.push(subset);
        }
    }
    debug_assert_eq!(out.len(), count);
    Ok(out)
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    // position of (i,j), i<j, in lexicographic pair order
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Jacobian of the constraint-set Cayley-Menger determinants with respect to
/// the squared mutual distances, evaluated at the given configuration. Rows
/// follow [`constraint_set`]; columns follow the pairs `(i,j)`, `i < j`, in
/// lexicographic order.
pub fn constraint_jacobian(x: &Configuration, subsets: &[Vec<usize>]) -> Result<Mat> {
    let n = x.n();
    let mode = x.mode();
    let pairs = n * (n - 1) / 2;
    let mut jac = Mat::zeros(subsets.len(), pairs, mode);
    for (row, subset) in subsets.iter().enumerate() {
        let sub_x = x.subconfiguration(subset)?;
        let cm = cayley_menger_matrix(&sub_x);
        let m = subset.len() + 1;
        for (a, &ga) in subset.iter().enumerate() {
            for (b, &gb) in subset.iter().enumerate().skip(a + 1) {
                // d det / d s_ab = 2 * cofactor at the (a+1, b+1) entry
                let rows_kept: Vec<usize> = (0..m).filter(|&r| r != a + 1).collect();
                let cols_kept: Vec<usize> = (0..m).filter(|&c| c != b + 1).collect();
                let minor = cm.grid().submatrix(&rows_kept, &cols_kept).det()?;
                let sign_exp = (a + 1) + (b + 1);
                let cof = if sign_exp % 2 == 0 { minor } else { -minor };
                let (gi, gj) = if ga < gb { (ga, gb) } else { (gb, ga) };
                *jac.at_mut(row, pair_index(n, gi, gj)) = mode.from_i64(2) * cof;
            }
        }
    }
    Ok(jac)
}

/// Certificate that the constraint-set determinants are functionally
/// independent at a sample configuration: the Jacobian with respect to the
/// mutual distances has full row rank there.
#[derive(Debug, Clone)]
pub struct IndependenceReport {
    pub jacobian_rank: usize,
    pub expected: usize,
    pub independent: bool,
}

pub fn certify_constraint_independence(x: &Configuration, eps: f64) -> Result<IndependenceReport> {
    let (d, _) = dimension_codimension(x, eps);
    let subsets = constraint_set(x.n(), d)?;
    if subsets.is_empty() {
        return Ok(IndependenceReport {
            jacobian_rank: 0,
            expected: 0,
            independent: true,
        });
    }
    let jac = constraint_jacobian(x, &subsets)?;
    let rank = jac.rank(eps);
    Ok(IndependenceReport {
        jacobian_rank: rank,
        expected: subsets.len(),
        independent: rank == subsets.len(),
    })
}

/// The bilinear form `W2^T B(X) W1`; zero whenever `W1` has vanishing first
/// moment and `W2` has zero total weight.
pub fn extended_leibniz_form(
    x: &Configuration,
    w1: &WeightVector,
    w2: &WeightVector,
) -> Result<Scalar> {
    let n = x.n();
    if w1.len() != n || w2.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "weight vectors of length {} and {} for {} points",
            w1.len(),
            w2.len(),
            n
        )));
    }
    let mode = x.mode();
    let mut acc = mode.zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = acc + w2.entry(i) * x.squared_distance(i, j) * w1.entry(j);
            }
        }
    }
    Ok(acc)
}

/// All `(n-c+2) x (n-c+2)` minors of the Cayley-Menger matrix vanish for a
/// configuration of codimension `c > 0`.
pub fn cayley_menger_rank_test(x: &Configuration, eps: f64) -> Result<crate::nullspace::MinorTest> {
    let (_, c) = dimension_codimension(x, eps);
    let cm = cayley_menger_matrix(x);
    // rank of C(X) is n - c + 1
    minor_vanishing_test_mat(&cm.c, x.n() - c + 1, eps)
}
