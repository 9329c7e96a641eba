//! Central configurations: accelerations under a homogeneous interaction,
//! the S-matrix, the induced weight vectors `C_j`, four verification
//! families, and the zero-total-mass property checks.
//!
//! With masses `m_i`, exponent `a`, and `s_ij = |x_i - x_j|^2`, the
//! accelerations are `gamma_j = -sum_{i != j} m_i s_ij^a (x_j - x_i)`.
//! For nonzero total mass, centrality is equivalent to
//! `sum_{i != j} m_i S_ij (x_i - x_j) = 0` with
//! `S_ij = s_ij^a - lambda / mu0`, which makes each column
//! `C_j(x_i) = m_i S_ij` a weight vector with zero first moment. The lambda
//! of this convention satisfies `gamma_j = -lambda (x_j - G)`; the lambda of
//! the definitional equation `gamma_j - gamma_O = lambda (x_j - x_O)` is its
//! negative, and both are reported.

use crate::config::{add, max_abs, scale_vec, sub, zero_vec, Configuration};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::moments::{barycenter, second_moment, total_weight, WeightVector, WeightedSystem};
use crate::nullspace::{
    config_matrix, dimension_codimension, find_core, membership_identities_with_core,
    minor_vanishing_test_mat, MinorTest,
};
use crate::residual::{Residual, ResidualGrid, ScaleTracker};
use crate::scalar::Scalar;

/// A configuration of particles with nonvanishing masses, a homogeneity
/// exponent, and an optional multiplier `lambda`.
#[derive(Debug, Clone)]
pub struct CentralSystem {
    configuration: Configuration,
    masses: WeightVector,
    exponent_a: Scalar,
    lambda: Option<Scalar>,
}

impl CentralSystem {
    pub fn new(
        configuration: Configuration,
        masses: WeightVector,
        exponent_a: Scalar,
        lambda: Option<Scalar>,
    ) -> Result<CentralSystem> {
        if masses.len() != configuration.n() {
            return Err(Error::ShapeMismatch(format!(
                "{} masses for {} points",
                masses.len(),
                configuration.n()
            )));
        }
        if masses.mode() != configuration.mode() || exponent_a.mode() != configuration.mode() {
            return Err(Error::ShapeMismatch("mixed scalar modes".into()));
        }
        if let Some(l) = &lambda {
            if l.mode() != configuration.mode() {
                return Err(Error::ShapeMismatch("mixed scalar modes".into()));
            }
        }
        if let Some(i) = masses.entries().iter().position(|m| m.is_zero()) {
            return Err(Error::PreconditionViolated(format!(
                "mass {i} vanishes; masses must be nonzero"
            )));
        }
        Ok(CentralSystem {
            configuration,
            masses,
            exponent_a,
            lambda,
        })
    }

    pub fn configuration(&self) -> &Configuration {
        &self.configuration
    }

    pub fn masses(&self) -> &WeightVector {
        &self.masses
    }

    pub fn exponent(&self) -> &Scalar {
        &self.exponent_a
    }

    pub fn lambda(&self) -> Option<&Scalar> {
        self.lambda.as_ref()
    }

    pub fn with_lambda(&self, lambda: Scalar) -> CentralSystem {
        CentralSystem {
            lambda: Some(lambda),
            ..self.clone()
        }
    }

    pub fn n(&self) -> usize {
        self.configuration.n()
    }

    pub fn total_mass(&self) -> Scalar {
        let ws = self.mass_system();
        total_weight(&ws)
    }

    pub fn mass_system(&self) -> WeightedSystem {
        WeightedSystem::new(self.configuration.clone(), self.masses.clone())
            .expect("validated at construction")
    }

    /// `s_ij^a` for all pairs, with distinctness and exponent checks.
    fn s_power_grid(&self) -> Result<Mat> {
        if self.exponent_a.is_zero() {
            return Err(Error::PreconditionViolated(
                "exponent a must be nonzero".into(),
            ));
        }
        self.configuration.check_pairwise_distinct()?;
        let n = self.n();
        let mode = self.configuration.mode();
        let mut grid = Mat::zeros(n, n, mode);
        for i in 0..n {
            for j in (i + 1)..n {
                let p = self
                    .configuration
                    .squared_distance(i, j)
                    .pow_exponent(&self.exponent_a)?;
                *grid.at_mut(i, j) = p.clone();
                *grid.at_mut(j, i) = p;
            }
        }
        Ok(grid)
    }
}

/// Acceleration vectors `gamma_j = -sum_{i != j} m_i s_ij^a (x_j - x_i)`.
pub fn accelerations(cs: &CentralSystem) -> Result<Vec<Vec<Scalar>>> {
    let sp = cs.s_power_grid()?;
    let x = cs.configuration();
    let mode = x.mode();
    Ok((0..cs.n())
        .map(|j| {
            let mut acc = zero_vec(x.ambient_dim(), mode);
            for i in 0..cs.n() {
                if i != j {
                    let coeff = cs.masses().entry(i) * sp.at(i, j);
                    let d = sub(x.point(j), x.point(i));
                    acc = add(&acc, &scale_vec(&coeff, &d));
                }
            }
            acc.into_iter().map(|v| -v).collect()
        })
        .collect())
}

/// Least-squares fit of `lambda`, the center, and the residual of the
/// central-configuration equations.
#[derive(Debug, Clone)]
pub struct LambdaFit {
    /// Multiplier of the S-matrix convention: `gamma_j = -lambda (x_j - G)`.
    pub lambda: Scalar,
    /// Multiplier of the definitional equation
    /// `gamma_j - gamma_O = lambda_definitional (x_j - x_O)`; the negative
    /// of `lambda`.
    pub lambda_definitional: Scalar,
    /// `x_O`: the center of mass.
    pub center: Vec<Scalar>,
    /// `gamma_O`: the null vector for nonzero total mass.
    pub gamma_center: Vec<Scalar>,
    /// Max-abs residual of `gamma_j + lambda (x_j - G)` at the fitted lambda.
    pub residual: Scalar,
}

/// Fit the multiplier by ordinary least squares over all coordinate
/// equations; closed form since lambda is the only unknown.
pub fn fit_lambda(cs: &CentralSystem) -> Result<LambdaFit> {
    let mu0 = cs.total_mass();
    if mu0.is_zero() {
        return Err(Error::ZeroTotalWeight);
    }
    let mode = cs.configuration().mode();
    let g = barycenter(&cs.mass_system())?;
    let gamma = accelerations(cs)?;
    let mut num = mode.zero();
    let mut den = mode.zero();
    for j in 0..cs.n() {
        let r = sub(cs.configuration().point(j), &g);
        num = num - crate::config::dot(&gamma[j], &r);
        den = den + crate::config::dot(&r, &r);
    }
    let lambda = if den.is_zero() {
        mode.zero()
    } else {
        num / &den
    };
    let mut worst = mode.zero();
    for j in 0..cs.n() {
        let r = sub(cs.configuration().point(j), &g);
        let dev = add(&gamma[j], &scale_vec(&lambda, &r));
        let m = max_abs(&dev);
        if m.cmp_abs(&worst) == std::cmp::Ordering::Greater {
            worst = m;
        }
    }
    Ok(LambdaFit {
        lambda_definitional: -&lambda,
        lambda,
        center: g,
        gamma_center: zero_vec(cs.configuration().ambient_dim(), mode),
        residual: worst,
    })
}

fn require_lambda(cs: &CentralSystem) -> Result<Scalar> {
    cs.lambda()
        .cloned()
        .ok_or_else(|| Error::PreconditionViolated("lambda required; fit it or supply it".into()))
}

/// The system with its lambda filled in by [`fit_lambda`] when absent.
pub fn ensure_lambda(cs: &CentralSystem) -> Result<CentralSystem> {
    if cs.lambda().is_some() {
        return Ok(cs.clone());
    }
    let fit = fit_lambda(cs)?;
    Ok(cs.with_lambda(fit.lambda))
}

/// The grid `S_ij = s_ij^a - lambda / mu0` off the diagonal, with the
/// diagonal closing each column against the masses:
/// `sum_i m_i S_ij = 0`.
#[derive(Debug, Clone)]
pub struct SMatrix {
    s: Mat,
}

impl SMatrix {
    pub fn grid(&self) -> &Mat {
        &self.s
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        self.s.at(i, j)
    }
}

pub fn s_matrix(cs: &CentralSystem) -> Result<SMatrix> {
    let mu0 = cs.total_mass();
    if mu0.is_zero() {
        return Err(Error::ZeroTotalWeight);
    }
    let lambda = require_lambda(cs)?;
    let shift = &lambda / &mu0;
    let sp = cs.s_power_grid()?;
    let n = cs.n();
    let mode = cs.configuration().mode();
    let mut s = Mat::zeros(n, n, mode);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                *s.at_mut(i, j) = sp.at(i, j) - &shift;
            }
        }
    }
    for j in 0..n {
        let mut acc = mode.zero();
        for i in 0..n {
            if i != j {
                acc = acc + cs.masses().entry(i) * s.at(i, j);
            }
        }
        *s.at_mut(j, j) = -acc / cs.masses().entry(j);
    }
    Ok(SMatrix { s })
}

/// Columns `C_j(x_i) = m_i S_ij`: the candidate zero-first-moment systems.
#[derive(Debug, Clone)]
pub struct CCWeightVectors {
    c: Mat,
}

impl CCWeightVectors {
    pub fn grid(&self) -> &Mat {
        &self.c
    }

    pub fn column(&self, j: usize) -> WeightVector {
        WeightVector::new(self.c.column(j)).expect("nonempty column")
    }
}

pub fn cc_weight_vectors(cs: &CentralSystem) -> Result<CCWeightVectors> {
    let sm = s_matrix(cs)?;
    let n = cs.n();
    let mut c = Mat::zeros(n, n, cs.configuration().mode());
    for i in 0..n {
        for j in 0..n {
            *c.at_mut(i, j) = cs.masses().entry(i) * sm.at(i, j);
        }
    }
    Ok(CCWeightVectors { c })
}

/// The symmetric weight matrix `F = C M` (columns `m_j C_j`, entries
/// `m_i m_j S_ij`) that feeds a central system into the generalized
/// factorization `F = W S W^T`.
pub fn central_weight_matrix(cs: &CentralSystem) -> Result<crate::equilibrium::WeightMatrix> {
    let cw = cc_weight_vectors(cs)?;
    let n = cs.n();
    let mut f = Mat::zeros(n, n, cs.configuration().mode());
    for i in 0..n {
        for j in 0..n {
            *f.at_mut(i, j) = cw.grid().at(i, j) * cs.masses().entry(j);
        }
    }
    crate::equilibrium::WeightMatrix::new(f)
}

/// Residuals of the defining equations `gamma_j + lambda (x_j - G) = 0`
/// (S-matrix sign convention), one row per point.
pub fn definition_residuals(cs: &CentralSystem) -> Result<ResidualGrid> {
    let mu0 = cs.total_mass();
    if mu0.is_zero() {
        return Err(Error::ZeroTotalWeight);
    }
    let lambda = require_lambda(cs)?;
    let g = barycenter(&cs.mass_system())?;
    let gamma = accelerations(cs)?;
    let mode = cs.configuration().mode();
    let mut scale = ScaleTracker::new(mode);
    let rows = (0..cs.n())
        .map(|j| {
            let r = scale_vec(&lambda, &sub(cs.configuration().point(j), &g));
            for v in gamma[j].iter().chain(r.iter()) {
                scale.observe(v);
            }
            add(&gamma[j], &r)
        })
        .collect();
    Ok(ResidualGrid::new(Mat::from_rows(rows)?, scale.finish()))
}

/// Albouy-Chenciner residuals
/// `sum_{i != j} m_i S_ij (s_ij + s_jk - s_ki)` over all `(j, k)`;
/// the grid vanishes iff the system is central.
pub fn verify_central_ac(cs: &CentralSystem) -> Result<ResidualGrid> {
    let cs = ensure_lambda(cs)?;
    let sm = s_matrix(&cs)?;
    let x = cs.configuration();
    let n = cs.n();
    let mode = x.mode();
    let mut grid = Mat::zeros(n, n, mode);
    let mut scale = ScaleTracker::new(mode);
    for j in 0..n {
        for k in 0..n {
            let s_jk = x.squared_distance(j, k);
            let mut acc = mode.zero();
            for i in 0..n {
                if i == j {
                    continue;
                }
                let term = cs.masses().entry(i)
                    * sm.at(i, j)
                    * (x.squared_distance(i, j) + &s_jk - x.squared_distance(k, i));
                scale.observe(&term);
                acc = acc + term;
            }
            *grid.at_mut(j, k) = acc;
        }
    }
    Ok(ResidualGrid::new(grid, scale.finish()))
}

/// Dias-type residuals: the membership identities of every column `C_j`
/// relative to one core, assembled as a `(d+1) x n` grid. Requires
/// codimension at least one.
pub fn verify_central_dias(cs: &CentralSystem) -> Result<ResidualGrid> {
    let cs = ensure_lambda(cs)?;
    let x = cs.configuration();
    let (d, c) = dimension_codimension(x, crate::DEFAULT_TOLERANCE);
    if c == 0 {
        return Err(Error::WrongShape(
            "Dias identities need codimension at least 1".into(),
        ));
    }
    let core = find_core(x, crate::DEFAULT_TOLERANCE);
    let cw = cc_weight_vectors(&cs)?;
    let n = cs.n();
    let mode = x.mode();
    let mut grid = Mat::zeros(d + 1, n, mode);
    let mut scale = mode.zero();
    for j in 0..n {
        let col =
            membership_identities_with_core(x, &cw.column(j), &core, crate::DEFAULT_TOLERANCE)?;
        for i in 0..=d {
            *grid.at_mut(i, j) = col.values().at(0, i).clone();
        }
        if col.scale().cmp_abs(&scale) == std::cmp::Ordering::Greater {
            scale = col.scale().clone();
        }
    }
    Ok(ResidualGrid::new(grid, scale))
}

/// Dziobek-type minor test: all `(c+1) x (c+1)` minors of the matrix whose
/// columns are the `C_j` plus any caller-supplied kernel vectors must
/// vanish. Covers the vanishing of all `(c+1)`-minors of the `S_ij` grid,
/// since `C = diag(m) S` and the masses are nonzero.
pub fn verify_central_minors(
    cs: &CentralSystem,
    extra_kernel_vectors: &[WeightVector],
    eps: f64,
) -> Result<MinorTest> {
    let cs = ensure_lambda(cs)?;
    let (_, c) = dimension_codimension(cs.configuration(), crate::DEFAULT_TOLERANCE);
    let cw = cc_weight_vectors(&cs)?;
    let n = cs.n();
    let mut cols: Vec<Vec<Scalar>> = (0..n).map(|j| cw.grid().column(j)).collect();
    for w in extra_kernel_vectors {
        if w.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "kernel vector of length {} for {} points",
                w.len(),
                n
            )));
        }
        cols.push(w.entries().to_vec());
    }
    let m = Mat::from_columns(&cols)?;
    minor_vanishing_test_mat(&m, c, eps)
}

/// Extended-Leibniz residuals: entry `(j, l)` is the squared-distance
/// bilinear form of `C_j` and `C_l`; the grid vanishes iff the system is
/// central.
pub fn verify_central_extended_leibniz(cs: &CentralSystem) -> Result<ResidualGrid> {
    let cs = ensure_lambda(cs)?;
    let cw = cc_weight_vectors(&cs)?;
    let x = cs.configuration();
    let n = cs.n();
    let mode = x.mode();
    let mut grid = Mat::zeros(n, n, mode);
    let mut scale = ScaleTracker::new(mode);
    for j in 0..n {
        for l in 0..n {
            let mut acc = mode.zero();
            for p in 0..n {
                for q in 0..n {
                    if p == q {
                        continue;
                    }
                    let term = cw.grid().at(p, l) * x.squared_distance(p, q) * cw.grid().at(q, j);
                    scale.observe(&term);
                    acc = acc + term;
                }
            }
            *grid.at_mut(j, l) = acc;
        }
    }
    Ok(ResidualGrid::new(grid, scale.finish()))
}

/// The four verification families on one system, with the Dias family
/// omitted when it does not apply (simplex, or a frame where the volumes are
/// not defined).
#[derive(Debug, Clone)]
pub struct CentralCertificate {
    pub definition: ResidualGrid,
    pub ac: ResidualGrid,
    pub dias: Option<ResidualGrid>,
    pub minors: MinorTest,
    pub extended_leibniz: ResidualGrid,
}

impl CentralCertificate {
    pub fn passes(&self, eps: f64) -> bool {
        self.definition.passes(eps)
            && self.ac.passes(eps)
            && self.dias.as_ref().is_none_or(|g| g.passes(eps))
            && self.minors.all_vanish
            && self.extended_leibniz.passes(eps)
    }
}

/// Run every verification family at once.
pub fn verify_all(cs: &CentralSystem, eps: f64) -> Result<CentralCertificate> {
    let cs = ensure_lambda(cs)?;
    let dias = match verify_central_dias(&cs) {
        Ok(grid) => Some(grid),
        Err(Error::WrongShape(_)) | Err(Error::FrameMismatch { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(CentralCertificate {
        definition: definition_residuals(&cs)?,
        ac: verify_central_ac(&cs)?,
        dias,
        minors: verify_central_minors(&cs, &[], eps)?,
        extended_leibniz: verify_central_extended_leibniz(&cs)?,
    })
}

/// Outcome of the zero-total-mass property checks.
#[derive(Debug, Clone)]
pub struct ZeroMassReport {
    /// Item 1: the product of the configuration matrix with the mass vector.
    pub kernel_residuals: Vec<Scalar>,
    pub kernel_scale: Scalar,
    /// Item 2: per point, the max-abs deviation of `x_j` from the barycenter
    /// of the remaining points under the restricted masses.
    pub barycenter_deviations: Vec<Scalar>,
    /// Item 3a: second moment at every point of `X` followed by two probes;
    /// all equal when the first moment vanishes.
    pub mu2_values: Vec<Scalar>,
    pub mu2_spread: Scalar,
    /// Item 3b: `sum_{i<j} m_i m_j s_ij`.
    pub leibniz_sum: Residual,
    /// Item 3c: the `(s_ij - s_jk + s_ik)` family.
    pub ac_grid: ResidualGrid,
    /// Item 4: membership identities applied to the masses.
    pub membership: ResidualGrid,
    /// The codimension, at least one for a genuine zero-mass system.
    pub codimension: usize,
}

impl ZeroMassReport {
    pub fn item_passes(&self, item: usize, eps: f64) -> bool {
        match item {
            1 => self
                .kernel_residuals
                .iter()
                .all(|r| r.is_zero_within(eps, &self.kernel_scale)),
            2 => self
                .barycenter_deviations
                .iter()
                .all(|r| r.is_zero_within(eps, &self.kernel_scale)),
            3 => {
                let mu2_ok = self
                    .mu2_values
                    .first()
                    .map(|base| {
                        self.mu2_values
                            .iter()
                            .all(|v| (v - base).is_zero_within(eps, base))
                    })
                    .unwrap_or(true);
                mu2_ok && self.leibniz_sum.passes(eps) && self.ac_grid.passes(eps)
            }
            4 => self.membership.passes(eps),
            _ => false,
        }
    }

    pub fn all_pass(&self, eps: f64) -> bool {
        (1..=4).all(|i| self.item_passes(i, eps))
    }
}

/// Property checks for a candidate central configuration with zero total
/// mass and nonzero lambda: mass vector in the kernel, each point the
/// barycenter of the others, constant second moment with the Leibniz and
/// Albouy-Chenciner families, and the membership identities on the masses.
pub fn zero_total_mass_checks(cs: &CentralSystem) -> Result<ZeroMassReport> {
    let mu0 = cs.total_mass();
    if !mu0.is_zero() {
        return Err(Error::PreconditionViolated(format!(
            "total mass must be zero, got {mu0}"
        )));
    }
    match cs.lambda() {
        Some(l) if !l.is_zero() => {}
        Some(_) => return Err(Error::PreconditionViolated("lambda must be nonzero".into())),
        None => {
            return Err(Error::PreconditionViolated(
                "lambda required for the zero-total-mass checks".into(),
            ))
        }
    }
    let x = cs.configuration();
    let m = cs.masses();
    let n = cs.n();
    let mode = x.mode();

    // item 1: kernel membership of the mass vector
    let xmat = config_matrix(x);
    let kernel_residuals = xmat.mul_vec(m.entries())?;
    let kernel_scale = {
        let coord_scale = xmat.max_abs_entry();
        let mass_scale = max_abs(m.entries());
        coord_scale * mass_scale
    };

    // item 2: each point is the barycenter of the others
    let mut barycenter_deviations = Vec::with_capacity(n);
    for j in 0..n {
        let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
        let sub_x = x.subconfiguration(&others)?;
        let sub_m = WeightVector::new(others.iter().map(|&i| m.entry(i).clone()).collect())?;
        let ws = WeightedSystem::new(sub_x, sub_m)?;
        let g = barycenter(&ws)?;
        barycenter_deviations.push(max_abs(&sub(x.point(j), &g)));
    }

    // item 3: constant second moment, Leibniz sum, distance family
    let ws = cs.mass_system();
    let mut mu2_values: Vec<Scalar> = (0..n)
        .map(|i| second_moment(&ws, x.point(i)))
        .collect::<Result<Vec<_>>>()?;
    let origin = zero_vec(x.ambient_dim(), mode);
    mu2_values.push(second_moment(&ws, &origin)?);
    let mut shifted = x.point(0).to_vec();
    shifted[0] = &shifted[0] + mode.one();
    mu2_values.push(second_moment(&ws, &shifted)?);
    let base = mu2_values[0].clone();
    let mut mu2_spread = mode.zero();
    for v in &mu2_values {
        let dev = (v - &base).abs();
        if dev.cmp_abs(&mu2_spread) == std::cmp::Ordering::Greater {
            mu2_spread = dev;
        }
    }
    let mut leibniz = mode.zero();
    let mut leibniz_scale = ScaleTracker::new(mode);
    for i in 0..n {
        for j in (i + 1)..n {
            let term = m.entry(i) * m.entry(j) * x.squared_distance(i, j);
            leibniz_scale.observe(&term);
            leibniz = leibniz + term;
        }
    }
    let mut ac = Mat::zeros(n, n, mode);
    let mut ac_scale = ScaleTracker::new(mode);
    for i in 0..n {
        for j in 0..n {
            let s_ij = x.squared_distance(i, j);
            let mut acc = mode.zero();
            for k in 0..n {
                let term =
                    m.entry(k) * (&s_ij - x.squared_distance(j, k) + x.squared_distance(i, k));
                ac_scale.observe(&term);
                acc = acc + term;
            }
            *ac.at_mut(i, j) = acc;
        }
    }

    // item 4: membership identities on the masses
    let core = find_core(x, crate::DEFAULT_TOLERANCE);
    let membership = membership_identities_with_core(x, m, &core, crate::DEFAULT_TOLERANCE)?;

    let (_, c) = dimension_codimension(x, crate::DEFAULT_TOLERANCE);
    Ok(ZeroMassReport {
        kernel_residuals,
        kernel_scale,
        barycenter_deviations,
        mu2_values,
        mu2_spread,
        leibniz_sum: Residual::new(leibniz, leibniz_scale.finish()),
        ac_grid: ResidualGrid::new(ac, ac_scale.finish()),
        membership,
        codimension: c,
    })
}
