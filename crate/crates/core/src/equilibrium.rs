//! Interacting particles: pairwise force coefficients, the weight systems
//! they induce, equilibrium verification, the inverse interaction problem,
//! and the symmetric factorization `F = W S W^T`.
//!
//! The force the particle at `y` exerts on the particle at `x` is
//! `phi(x,y) (y - x)`. Reading the coefficients as weights gives, for each
//! `x`, a weighted system with zero total weight whose constant first moment
//! is the total force on `x`; equilibrium means all those first moments
//! vanish. Newton's third law is not assumed anywhere except in the
//! symmetric factorization.

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::moments::WeightVector;
use crate::nullspace::{find_core, w0_basis, W0Basis};
use crate::residual::{ResidualGrid, ScaleTracker};
use crate::scalar::Scalar;

/// Pairwise interaction coefficients `phi[x][y]`; the diagonal is unused and
/// kept at zero. The symmetric flag records Newton's third law.
#[derive(Debug, Clone)]
pub struct InteractionCoefficients {
    phi: Mat,
    symmetric: bool,
}

impl InteractionCoefficients {
    /// Build from an `n x n` grid; diagonal entries are discarded.
    pub fn new(grid: Mat) -> Result<InteractionCoefficients> {
        if grid.nrows() != grid.ncols() {
            return Err(Error::ShapeMismatch(format!(
                "interaction grid must be square, got {}x{}",
                grid.nrows(),
                grid.ncols()
            )));
        }
        let mode = grid.mode();
        let mut phi = grid;
        for i in 0..phi.nrows() {
            *phi.at_mut(i, i) = mode.zero();
        }
        let mut symmetric = true;
        'outer: for i in 0..phi.nrows() {
            for j in (i + 1)..phi.ncols() {
                if phi.at(i, j) != phi.at(j, i) {
                    symmetric = false;
                    break 'outer;
                }
            }
        }
        Ok(InteractionCoefficients { phi, symmetric })
    }

    pub fn zero(n: usize, mode: crate::scalar::Mode) -> InteractionCoefficients {
        InteractionCoefficients {
            phi: Mat::zeros(n, n, mode),
            symmetric: true,
        }
    }

    pub fn n(&self) -> usize {
        self.phi.nrows()
    }

    pub fn grid(&self) -> &Mat {
        &self.phi
    }

    /// `phi(x_i, x_j)`, the coefficient of the force on `x_i` from `x_j`.
    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        self.phi.at(i, j)
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }
}

/// Columnwise family of induced weight vectors: column `j` is the weight
/// system of particle `j`, so every column sums to zero.
#[derive(Debug, Clone)]
pub struct WeightMatrix {
    f: Mat,
}

impl WeightMatrix {
    pub fn new(f: Mat) -> Result<WeightMatrix> {
        if f.nrows() != f.ncols() {
            return Err(Error::ShapeMismatch(format!(
                "weight matrix must be square, got {}x{}",
                f.nrows(),
                f.ncols()
            )));
        }
        let mode = f.mode();
        for j in 0..f.ncols() {
            let sum = (0..f.nrows()).fold(mode.zero(), |acc, i| acc + f.at(i, j));
            if !sum.is_zero_within(crate::DEFAULT_TOLERANCE, &f.max_abs_entry()) {
                return Err(Error::PreconditionViolated(format!(
                    "column {j} does not sum to zero"
                )));
            }
        }
        Ok(WeightMatrix { f })
    }

    pub fn n(&self) -> usize {
        self.f.nrows()
    }

    pub fn matrix(&self) -> &Mat {
        &self.f
    }

    pub fn column(&self, j: usize) -> WeightVector {
        WeightVector::new(self.f.column(j)).expect("nonempty column")
    }

    pub fn is_symmetric(&self) -> bool {
        self.f.is_symmetric()
    }
}

/// Weight matrix induced by interaction coefficients: column `j` carries
/// `phi(x_j, x_i)` off the diagonal and minus their sum on it.
pub fn induced_weight_systems(
    x: &Configuration,
    phi: &InteractionCoefficients,
) -> Result<WeightMatrix> {
    if phi.n() != x.n() {
        return Err(Error::ShapeMismatch(format!(
            "{} interaction rows for {} points",
            phi.n(),
            x.n()
        )));
    }
    let n = x.n();
    let mode = x.mode();
    let mut f = Mat::zeros(n, n, mode);
    for j in 0..n {
        let mut diag = mode.zero();
        for i in 0..n {
            if i != j {
                let v = phi.at(j, i).clone();
                diag = diag - &v;
                *f.at_mut(i, j) = v;
            }
        }
        *f.at_mut(j, j) = diag;
    }
    WeightMatrix::new(f)
}

/// Total force on each particle: `F_j = sum_{i != j} phi(x_j, x_i) (x_i - x_j)`.
pub fn total_forces(x: &Configuration, phi: &InteractionCoefficients) -> Result<Vec<Vec<Scalar>>> {
    if phi.n() != x.n() {
        return Err(Error::ShapeMismatch(format!(
            "{} interaction rows for {} points",
            phi.n(),
            x.n()
        )));
    }
    let mode = x.mode();
    Ok((0..x.n())
        .map(|j| {
            let mut force = crate::config::zero_vec(x.ambient_dim(), mode);
            for i in 0..x.n() {
                if i != j {
                    let d = crate::config::sub(x.point(i), x.point(j));
                    force = crate::config::add(&force, &crate::config::scale_vec(phi.at(j, i), &d));
                }
            }
            force
        })
        .collect())
}

/// Albouy-Chenciner-type equilibrium residuals: entry `(x, y)` is
/// `sum_{z != x} phi(x,z) (s_xy - s_yz + s_zx)`.
/// The grid vanishes iff the configuration is an equilibrium of the system.
pub fn verify_equilibrium_ac(
    x: &Configuration,
    phi: &InteractionCoefficients,
) -> Result<ResidualGrid> {
    if phi.n() != x.n() {
        return Err(Error::ShapeMismatch(format!(
            "{} interaction rows for {} points",
            phi.n(),
            x.n()
        )));
    }
    let n = x.n();
    let mode = x.mode();
    let mut grid = Mat::zeros(n, n, mode);
    let mut scale = ScaleTracker::new(mode);
    for a in 0..n {
        for b in 0..n {
            let s_ab = x.squared_distance(a, b);
            let mut acc = mode.zero();
            for z in 0..n {
                if z == a {
                    continue;
                }
                let term =
                    phi.at(a, z) * (&s_ab - x.squared_distance(b, z) + x.squared_distance(z, a));
                scale.observe(&term);
                acc = acc + term;
            }
            *grid.at_mut(a, b) = acc;
        }
    }
    Ok(ResidualGrid::new(grid, scale.finish()))
}

/// Bilinear (extended-Leibniz) equilibrium residuals: entry `(x, y)` is the
/// squared-distance bilinear form of the induced weight vectors of `x` and
/// `y`. The diagonal alone already characterizes equilibrium.
pub fn verify_equilibrium_leibniz(
    x: &Configuration,
    phi: &InteractionCoefficients,
) -> Result<ResidualGrid> {
    let f = induced_weight_systems(x, phi)?;
    let n = x.n();
    let mode = x.mode();
    let mut grid = Mat::zeros(n, n, mode);
    let mut scale = ScaleTracker::new(mode);
    for a in 0..n {
        for b in 0..n {
            let mut acc = mode.zero();
            for p in 0..n {
                for q in 0..n {
                    if p == q {
                        continue;
                    }
                    let term = f.matrix().at(p, b) * x.squared_distance(p, q) * f.matrix().at(q, a);
                    scale.observe(&term);
                    acc = acc + term;
                }
            }
            *grid.at_mut(a, b) = acc;
        }
    }
    Ok(ResidualGrid::new(grid, scale.finish()))
}

/// The family of interaction coefficients under which a fixed configuration
/// is an equilibrium. Each particle's coefficient row ranges over the kernel
/// of the configuration matrix; symmetric members are parameterized by a
/// symmetric `c x c` matrix through `F = W S W^T`.
#[derive(Debug, Clone)]
pub struct InteractionFamily {
    basis: W0Basis,
    n: usize,
}

impl InteractionFamily {
    pub fn basis(&self) -> &W0Basis {
        &self.basis
    }

    pub fn codimension(&self) -> usize {
        self.basis.c()
    }

    /// Number of free parameters of the symmetric family: `c (c + 1) / 2`.
    pub fn parameter_count(&self) -> usize {
        let c = self.basis.c();
        c * (c + 1) / 2
    }

    /// Errors unless the family admits nonzero interactions.
    pub fn require_nontrivial(&self) -> Result<()> {
        if self.basis.c() == 0 {
            return Err(Error::WrongCodimension {
                expected: 1,
                got: 0,
            });
        }
        Ok(())
    }

    /// The symmetric member `F(S) = W S W^T` read back as coefficients.
    pub fn symmetric_member(&self, s: &Mat) -> Result<InteractionCoefficients> {
        let f = dziobek_synthesize(&self.basis, s)?;
        let phi = InteractionCoefficients::new(f.matrix().clone())?;
        debug_assert!(phi.is_symmetric());
        Ok(phi)
    }

    /// One coefficient row: the weight vector `sum_k coeffs[k] W_k` read as
    /// the interactions of particle `j`.
    pub fn member_row(&self, j: usize, coeffs: &[Scalar]) -> Result<Vec<Scalar>> {
        if j >= self.n {
            return Err(Error::OutOfRange(format!("particle index {j}")));
        }
        if coeffs.len() != self.basis.c() {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficients for codimension {}",
                coeffs.len(),
                self.basis.c()
            )));
        }
        let mode = self
            .basis
            .vectors()
            .first()
            .map(|w| w.mode())
            .unwrap_or(crate::scalar::Mode::Rational);
        let mut w = vec![mode.zero(); self.n];
        for (k, coeff) in coeffs.iter().enumerate() {
            for (i, wi) in w.iter_mut().enumerate() {
                *wi = &*wi + coeff * self.basis.vectors()[k].entry(i);
            }
        }
        Ok(w)
    }

    /// Assemble a full (generally non-symmetric) coefficient grid from one
    /// coefficient vector per particle.
    pub fn member(&self, coeffs_per_row: &[Vec<Scalar>]) -> Result<InteractionCoefficients> {
        if coeffs_per_row.len() != self.n {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficient rows for {} particles",
                coeffs_per_row.len(),
                self.n
            )));
        }
        let mode = self
            .basis
            .vectors()
            .first()
            .map(|w| w.mode())
            .unwrap_or(crate::scalar::Mode::Rational);
        let mut grid = Mat::zeros(self.n, self.n, mode);
        for (j, coeffs) in coeffs_per_row.iter().enumerate() {
            let row = self.member_row(j, coeffs)?;
            for i in 0..self.n {
                if i != j {
                    *grid.at_mut(j, i) = row[i].clone();
                }
            }
        }
        InteractionCoefficients::new(grid)
    }
}

/// Solve the inverse problem: all interactions making `x` an equilibrium.
/// A simplex admits only the trivial family.
pub fn inverse_interactions(x: &Configuration, eps: f64) -> Result<InteractionFamily> {
    let core = find_core(x, eps);
    let (_, c) = crate::nullspace::dimension_codimension(x, eps);
    if c == 0 {
        return Ok(InteractionFamily {
            basis: W0Basis::trivial(core),
            n: x.n(),
        });
    }
    let basis = w0_basis(x, &core, eps)?;
    Ok(InteractionFamily { basis, n: x.n() })
}

/// The factorization `F = W S W^T` of a symmetric weight matrix over a
/// kernel basis, together with `A = S W^T`.
#[derive(Debug, Clone)]
pub struct DziobekFactorization {
    s: Mat,
    a: Mat,
    reconstruction_residual: Scalar,
}

impl DziobekFactorization {
    pub fn s(&self) -> &Mat {
        &self.s
    }

    pub fn a(&self) -> &Mat {
        &self.a
    }

    /// Max-abs entry of `W S W^T - F`; exactly zero in rational mode.
    pub fn reconstruction_residual(&self) -> &Scalar {
        &self.reconstruction_residual
    }
}

/// `F = W S W^T` for a symmetric parameter matrix `S`.
pub fn dziobek_synthesize(basis: &W0Basis, s: &Mat) -> Result<WeightMatrix> {
    let c = basis.c();
    if s.nrows() != c || s.ncols() != c {
        return Err(Error::ShapeMismatch(format!(
            "S is {}x{}, basis has {} vectors",
            s.nrows(),
            s.ncols(),
            c
        )));
    }
    for i in 0..c {
        for j in (i + 1)..c {
            if s.at(i, j) != s.at(j, i) {
                return Err(Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    let w = basis.matrix();
    let f = w.mul(s)?.mul(&w.transpose())?;
    WeightMatrix::new(f)
}

/// Recover the unique `S` with `F = W S W^T` for the given basis. Every
/// column of `F` must lie in the span of the basis, and `F` must be
/// symmetric.
pub fn dziobek_factorize(
    f: &WeightMatrix,
    basis: &W0Basis,
    eps: f64,
) -> Result<DziobekFactorization> {
    if !f.is_symmetric() {
        return Err(Error::AsymmetricInput);
    }
    let n = f.n();
    if basis.n() != n {
        return Err(Error::ShapeMismatch(format!(
            "basis over {} points, weight matrix over {}",
            basis.n(),
            n
        )));
    }
    let c = basis.c();
    let w = basis.matrix();
    let scale = f.matrix().max_abs_entry();
    // F = W A, solved column by column
    let mut a_cols: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    for j in 0..n {
        let col = f.matrix().column(j);
        let (sol, residual) = w.least_squares(&col)?;
        if !residual.is_zero_within(eps, &scale) {
            return Err(Error::ColumnNotInKernel { column: j });
        }
        a_cols.push(sol);
    }
    let a = Mat::from_columns(&a_cols)?; // c x n
                                         // A = S W^T, i.e. A^T = W S^T, solved column by column of S^T
    let at = a.transpose();
    let mut s_rows: Vec<Vec<Scalar>> = Vec::with_capacity(c);
    for k in 0..c {
        let rhs = at.column(k);
        let (sol, residual) = w.least_squares(&rhs)?;
        if !residual.is_zero_within(eps, &scale) {
            return Err(Error::ColumnNotInKernel { column: k });
        }
        s_rows.push(sol);
    }
    let s = Mat::from_rows(s_rows)?;
    for i in 0..c {
        for j in (i + 1)..c {
            let dev = s.at(i, j) - s.at(j, i);
            if !dev.is_zero_within(eps, &s.max_abs_entry()) {
                return Err(Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    let rebuilt = w.mul(&s)?.mul(&w.transpose())?;
    let mut worst = f.matrix().mode().zero();
    for i in 0..n {
        for j in 0..n {
            let dev = (rebuilt.at(i, j) - f.matrix().at(i, j)).abs();
            if dev.cmp_abs(&worst) == std::cmp::Ordering::Greater {
                worst = dev;
            }
        }
    }
    Ok(DziobekFactorization {
        s,
        a,
        reconstruction_residual: worst,
    })
}
