//! Damped Gauss-Newton search for central configurations on the
//! Albouy-Chenciner residuals.
//!
//! The unknowns are the point coordinates and the multiplier `lambda`; the
//! residual system stacks the `n(n-1)` Albouy-Chenciner equations with a
//! scale gauge `s_01 = 1` and the center-of-mass-at-origin equations. The
//! Albouy-Chenciner equations are isometry invariant, so rotations are left
//! ungauged and the normal equations carry a tiny ridge to absorb the
//! rotational null directions. Dimension constraints are imposed by solving
//! in the given frame: a collinear search runs in one coordinate.

use crate::central::{ensure_lambda, fit_lambda, verify_all, CentralCertificate, CentralSystem};
use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::moments::WeightVector;
use crate::scalar::{Mode, Scalar};

/// Iteration controls for [`solve_central`].
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub max_iterations: usize,
    /// Convergence threshold on the max-abs stacked residual.
    pub tolerance: f64,
    /// Initial trust factor on the Gauss-Newton step; halved on a residual
    /// increase, doubled on a decrease, capped at one.
    pub damping: f64,
}

impl Default for SolveOptions {
    fn default() -> SolveOptions {
        SolveOptions {
            max_iterations: 50,
            tolerance: 1e-12,
            damping: 1.0,
        }
    }
}

/// Outcome of a solve, with the verification certificate of the end point.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub configuration: Configuration,
    pub lambda: Scalar,
    /// Max-abs stacked residual after each accepted step, starting with the
    /// initial point.
    pub residual_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub certificate: CentralCertificate,
}

/// The stacked residual system: Albouy-Chenciner equations over all ordered
/// pairs, the scale gauge, and the center-of-mass gauge. Unknowns are the
/// flattened coordinates followed by lambda.
pub struct AcResidualSystem {
    masses: Vec<f64>,
    exponent: f64,
    mu0: f64,
    n: usize,
    dim: usize,
}

impl AcResidualSystem {
    pub fn new(masses: &[f64], exponent: f64, n: usize, dim: usize) -> Result<AcResidualSystem> {
        if masses.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "{} masses for {} points",
                masses.len(),
                n
            )));
        }
        if n < 2 || dim == 0 {
            return Err(Error::WrongShape("need at least two points".into()));
        }
        if exponent == 0.0 {
            return Err(Error::PreconditionViolated(
                "exponent a must be nonzero".into(),
            ));
        }
        let mu0: f64 = masses.iter().sum();
        if mu0 == 0.0 {
            return Err(Error::ZeroTotalWeight);
        }
        Ok(AcResidualSystem {
            masses: masses.to_vec(),
            exponent,
            mu0,
            n,
            dim,
        })
    }

    pub fn unknown_count(&self) -> usize {
        self.n * self.dim + 1
    }

    pub fn residual_count(&self) -> usize {
        self.n * (self.n - 1) + 1 + self.dim
    }

    pub fn pack(&self, points: &[Vec<f64>], lambda: f64) -> Vec<f64> {
        let mut z = Vec::with_capacity(self.unknown_count());
        for p in points {
            z.extend_from_slice(p);
        }
        z.push(lambda);
        z
    }

    pub fn unpack(&self, z: &[f64]) -> (Vec<Vec<f64>>, f64) {
        let points = (0..self.n)
            .map(|i| z[i * self.dim..(i + 1) * self.dim].to_vec())
            .collect();
        (points, z[self.n * self.dim])
    }

    fn coord(&self, z: &[f64], p: usize, t: usize) -> f64 {
        z[p * self.dim + t]
    }

    fn s(&self, z: &[f64], u: usize, v: usize) -> f64 {
        (0..self.dim)
            .map(|t| {
                let d = self.coord(z, u, t) - self.coord(z, v, t);
                d * d
            })
            .sum()
    }

    // d s_uv / d x_p[t]
    fn ds(&self, z: &[f64], u: usize, v: usize, p: usize, t: usize) -> f64 {
        if p == u {
            2.0 * (self.coord(z, u, t) - self.coord(z, v, t))
        } else if p == v {
            2.0 * (self.coord(z, v, t) - self.coord(z, u, t))
        } else {
            0.0
        }
    }

    fn check_separation(&self, z: &[f64]) -> Result<()> {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.s(z, i, j) < 1e-14 {
                    return Err(Error::CoincidentPoints { i, j });
                }
            }
        }
        Ok(())
    }

    pub fn residuals(&self, z: &[f64]) -> Result<Vec<f64>> {
        self.check_separation(z)?;
        let lambda = z[self.n * self.dim];
        let shift = lambda / self.mu0;
        let mut r = Vec::with_capacity(self.residual_count());
        for j in 0..self.n {
            for k in 0..self.n {
                if k == j {
                    continue;
                }
                let s_jk = self.s(z, j, k);
                let mut acc = 0.0;
                for i in 0..self.n {
                    if i == j {
                        continue;
                    }
                    let s_ij = self.s(z, i, j);
                    let s_ki = self.s(z, k, i);
                    acc +=
                        self.masses[i] * (s_ij.powf(self.exponent) - shift) * (s_ij + s_jk - s_ki);
                }
                r.push(acc);
            }
        }
        r.push(self.s(z, 0, 1) - 1.0);
        for t in 0..self.dim {
            r.push(
                (0..self.n)
                    .map(|p| self.masses[p] * self.coord(z, p, t))
                    .sum(),
            );
        }
        Ok(r)
    }

    /// Analytic Jacobian, row-aligned with [`Self::residuals`].
    pub fn jacobian(&self, z: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check_separation(z)?;
        let cols = self.unknown_count();
        let lambda = z[self.n * self.dim];
        let shift = lambda / self.mu0;
        let mut jac = Vec::with_capacity(self.residual_count());
        for j in 0..self.n {
            for k in 0..self.n {
                if k == j {
                    continue;
                }
                let s_jk = self.s(z, j, k);
                let mut row = vec![0.0; cols];
                for i in 0..self.n {
                    if i == j {
                        continue;
                    }
                    let s_ij = self.s(z, i, j);
                    let s_ki = self.s(z, k, i);
                    let sij_a = s_ij.powf(self.exponent);
                    let dsij_a = self.exponent * s_ij.powf(self.exponent - 1.0);
                    let bracket = s_ij + s_jk - s_ki;
                    // lambda column
                    row[cols - 1] += -self.masses[i] / self.mu0 * bracket;
                    // coordinate columns: only points i, j, k contribute
                    // (i may coincide with k; count it once)
                    let involved: &[usize] = if i == k { &[i, j] } else { &[i, j, k] };
                    for &p in involved {
                        for t in 0..self.dim {
                            let d_sij = self.ds(z, i, j, p, t);
                            let d_sjk = self.ds(z, j, k, p, t);
                            let d_ski = self.ds(z, k, i, p, t);
                            let v = self.masses[i]
                                * (dsij_a * d_sij * bracket
                                    + (sij_a - shift) * (d_sij + d_sjk - d_ski));
                            row[p * self.dim + t] += v;
                        }
                    }
                }
                jac.push(row);
            }
        }
        // gauge s_01 = 1
        let mut row = vec![0.0; cols];
        for t in 0..self.dim {
            row[t] = self.ds(z, 0, 1, 0, t);
            row[self.dim + t] = self.ds(z, 0, 1, 1, t);
        }
        jac.push(row);
        // center of mass
        for t in 0..self.dim {
            let mut row = vec![0.0; cols];
            for p in 0..self.n {
                row[p * self.dim + t] = self.masses[p];
            }
            jac.push(row);
        }
        Ok(jac)
    }
}

fn max_abs_f64(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Solve `(J^T J + ridge I) delta = -J^T r` by Gaussian elimination with
/// partial pivoting. The ridge absorbs the rotational null space.
fn gauss_newton_step(jac: &[Vec<f64>], r: &[f64]) -> Result<Vec<f64>> {
    let cols = jac[0].len();
    let mut ata = vec![vec![0.0; cols]; cols];
    let mut atb = vec![0.0; cols];
    for (row, &ri) in jac.iter().zip(r) {
        for a in 0..cols {
            if row[a] == 0.0 {
                continue;
            }
            for b in 0..cols {
                ata[a][b] += row[a] * row[b];
            }
            atb[a] -= row[a] * ri;
        }
    }
    let ridge = 1e-12
        * (0..cols)
            .map(|i| ata[i][i])
            .fold(0.0f64, f64::max)
            .max(1e-300);
    for (i, row) in ata.iter_mut().enumerate() {
        row[i] += ridge;
    }
    // forward elimination with partial pivoting
    let n = cols;
    let mut m = ata;
    let mut b = atb;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&a, &bb| m[a][col].abs().partial_cmp(&m[bb][col].abs()).unwrap())
            .unwrap();
        if m[piv][col].abs() < 1e-300 {
            return Err(Error::SingularJacobian);
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for row in (col + 1)..n {
            let f = m[row][col] / m[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in (col + 1)..n {
            acc -= m[col][k] * x[k];
        }
        x[col] = acc / m[col][col];
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularJacobian);
    }
    Ok(x)
}

/// Local search for a central configuration from an initial guess.
///
/// Converged results are re-verified by every verification family at ten
/// times the solve tolerance before being reported as converged.
pub fn solve_central(
    masses: &WeightVector,
    exponent: &Scalar,
    initial: &Configuration,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    if initial.mode() != Mode::Float || masses.mode() != Mode::Float {
        return Err(Error::ModeUnsupported {
            mode: "rational",
            reason: "the solver works in float mode".into(),
        });
    }
    initial.check_pairwise_distinct()?;
    let n = initial.n();
    let dim = initial.ambient_dim();
    let m_f64: Vec<f64> = masses.entries().iter().map(|m| m.to_f64()).collect();
    let system = AcResidualSystem::new(&m_f64, exponent.to_f64(), n, dim)?;

    // initial lambda from the closed-form fit
    let cs0 = CentralSystem::new(initial.clone(), masses.clone(), exponent.clone(), None)?;
    let lambda0 = fit_lambda(&cs0)?.lambda.to_f64();
    let points0: Vec<Vec<f64>> = (0..n)
        .map(|i| initial.point(i).iter().map(|s| s.to_f64()).collect())
        .collect();
    let mut z = system.pack(&points0, lambda0);

    let mut r = system.residuals(&z)?;
    let mut history = vec![max_abs_f64(&r)];
    let mut trust = opts.damping.clamp(f64::MIN_POSITIVE, 1.0);
    let mut iterations = 0;
    while iterations < opts.max_iterations && max_abs_f64(&r) > opts.tolerance {
        iterations += 1;
        let jac = system.jacobian(&z)?;
        let step = gauss_newton_step(&jac, &r)?;
        let base_norm = norm2(&r);
        let mut accepted = false;
        while trust > 1e-16 {
            let trial: Vec<f64> = z
                .iter()
                .zip(&step)
                .map(|(zi, si)| zi + trust * si)
                .collect();
            match system.residuals(&trial) {
                Ok(rt) if norm2(&rt) < base_norm => {
                    z = trial;
                    r = rt;
                    trust = (2.0 * trust).min(1.0);
                    accepted = true;
                    break;
                }
                _ => {
                    trust /= 2.0;
                }
            }
        }
        if !accepted {
            break;
        }
        history.push(max_abs_f64(&r));
    }

    let final_res = max_abs_f64(&r);
    if final_res > opts.tolerance {
        return Err(Error::MaxIterations {
            iterations,
            residual: final_res,
        });
    }

    let (points, lambda) = system.unpack(&z);
    let configuration = Configuration::new(
        points
            .iter()
            .map(|p| p.iter().map(|&v| Scalar::float(v)).collect())
            .collect::<Result<Vec<_>>>()?,
    )?;
    let lambda = Scalar::float(lambda)?;
    let solved = CentralSystem::new(
        configuration.clone(),
        masses.clone(),
        exponent.clone(),
        Some(lambda.clone()),
    )?;
    let verify_tol = 10.0 * opts.tolerance;
    let solved = ensure_lambda(&solved)?;
    let certificate = verify_all(&solved, verify_tol)?;
    let converged = certificate.passes(verify_tol);
    Ok(SolveResult {
        configuration,
        lambda,
        residual_history: history,
        iterations,
        converged,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fvec(vals: &[f64]) -> WeightVector {
        WeightVector::new(vals.iter().map(|&v| Scalar::float(v).unwrap()).collect()).unwrap()
    }

    fn sorted_squared_distances(x: &Configuration) -> Vec<f64> {
        let n = x.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                out.push(x.squared_distance(i, j).to_f64());
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }

    #[test]
    fn jacobian_matches_central_differences() {
        let system = AcResidualSystem::new(&[1.0, 2.0, 0.5], -1.5, 3, 2).unwrap();
        let z = vec![0.1, -0.3, 1.2, 0.4, -0.5, 0.9, 1.7];
        let jac = system.jacobian(&z).unwrap();
        let h = 1e-6;
        for col in 0..system.unknown_count() {
            let mut zp = z.clone();
            let mut zm = z.clone();
            zp[col] += h;
            zm[col] -= h;
            let rp = system.residuals(&zp).unwrap();
            let rm = system.residuals(&zm).unwrap();
            for row in 0..system.residual_count() {
                let fd = (rp[row] - rm[row]) / (2.0 * h);
                let an = jac[row][col];
                assert!(
                    (fd - an).abs() <= 1e-5 * an.abs().max(1.0),
                    "row {row} col {col}: fd {fd} vs analytic {an}"
                );
            }
        }
    }

    #[test]
    fn recovers_equilateral_from_perturbed_start() {
        let h = 3f64.sqrt() / 2.0;
        let start = Configuration::from_floats(&[&[0.02, -0.04], &[1.03, 0.01], &[0.52, h * 1.04]])
            .unwrap();
        let masses = fvec(&[1.0, 1.0, 1.0]);
        let result = solve_central(
            &masses,
            &Scalar::float(-1.5).unwrap(),
            &start,
            &SolveOptions::default(),
        )
        .unwrap();
        assert!(result.converged);
        assert!(result.iterations <= 50);
        assert!(*result.residual_history.last().unwrap() <= 1e-10);
        // all sides equal within 1e-8 of the gauged side
        let s = sorted_squared_distances(&result.configuration);
        for v in &s {
            assert!((v - 1.0).abs() < 1e-8, "side^2 {v}");
        }
        // lambda / mu0 = s^a at the gauged side = 1
        let ratio = result.lambda.to_f64() / 3.0;
        assert!((ratio - 1.0).abs() < 1e-8);
    }

    #[test]
    fn recovers_square_from_perturbed_start() {
        let start = Configuration::from_floats(&[
            &[0.01, -0.02],
            &[1.02, 0.0],
            &[0.99, 1.01],
            &[-0.01, 0.98],
        ])
        .unwrap();
        let masses = fvec(&[1.0, 1.0, 1.0, 1.0]);
        let result = solve_central(
            &masses,
            &Scalar::float(-1.5).unwrap(),
            &start,
            &SolveOptions::default(),
        )
        .unwrap();
        assert!(result.converged);
        let s = sorted_squared_distances(&result.configuration);
        // four sides of 1, two diagonals of 2
        for v in &s[..4] {
            assert!((v - 1.0).abs() < 1e-8);
        }
        for v in &s[4..] {
            assert!((v - 2.0).abs() < 1e-8);
        }
        let expect = 2.0 + 2f64.sqrt() / 2.0;
        assert!((result.lambda.to_f64() - expect).abs() < 1e-8);
    }

    #[test]
    fn collinear_frame_stays_collinear() {
        // one-coordinate frame imposes the dimension constraint
        let start = Configuration::from_floats(&[&[-1.05], &[0.02], &[1.0]]).unwrap();
        let masses = fvec(&[1.0, 1.0, 1.0]);
        let result = solve_central(
            &masses,
            &Scalar::float(-1.5).unwrap(),
            &start,
            &SolveOptions::default(),
        )
        .unwrap();
        assert!(result.converged);
        assert_eq!(result.configuration.ambient_dim(), 1);
        // the symmetric three-body line: gaps 1, 1, outer 2, and the
        // reference multiplier 5/4 at unit gap
        let s = sorted_squared_distances(&result.configuration);
        assert!((s[0] - 1.0).abs() < 1e-9);
        assert!((s[1] - 1.0).abs() < 1e-9);
        assert!((s[2] - 4.0).abs() < 1e-9);
        assert!((result.lambda.to_f64() - 1.25).abs() < 1e-9);
    }

    #[test]
    fn gauge_invariance_under_rotation_and_translation() {
        let masses = fvec(&[1.0, 1.0, 1.0, 1.0]);
        let base = [[0.01f64, -0.02], [1.02, 0.0], [0.99, 1.01], [-0.01, 0.98]];
        let start1 = Configuration::from_floats(&[&base[0], &base[1], &base[2], &base[3]]).unwrap();
        // rotate by 0.4 radians and translate by (3, -7)
        let (c, s) = (0.4f64.cos(), 0.4f64.sin());
        let moved: Vec<Vec<f64>> = base
            .iter()
            .map(|p| vec![c * p[0] - s * p[1] + 3.0, s * p[0] + c * p[1] - 7.0])
            .collect();
        let start2 = Configuration::new(
            moved
                .iter()
                .map(|p| p.iter().map(|&v| Scalar::float(v).unwrap()).collect())
                .collect(),
        )
        .unwrap();
        let opts = SolveOptions::default();
        let a = Scalar::float(-1.5).unwrap();
        let r1 = solve_central(&masses, &a, &start1, &opts).unwrap();
        let r2 = solve_central(&masses, &a, &start2, &opts).unwrap();
        let s1 = sorted_squared_distances(&r1.configuration);
        let s2 = sorted_squared_distances(&r2.configuration);
        for (a, b) in s1.iter().zip(&s2) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!((r1.lambda.to_f64() - r2.lambda.to_f64()).abs() < 1e-9);
    }

    #[test]
    fn rejects_rational_mode_and_zero_mass() {
        let start = Configuration::from_ints(&[&[0], &[1]]);
        let masses = WeightVector::from_ints(&[1, 1]);
        assert!(matches!(
            solve_central(&masses, &Scalar::int(-1), &start, &SolveOptions::default()),
            Err(Error::ModeUnsupported { .. })
        ));

        let start = Configuration::from_floats(&[&[0.0], &[1.0]]).unwrap();
        let masses = fvec(&[1.0, -1.0]);
        assert!(matches!(
            solve_central(
                &masses,
                &Scalar::float(-1.5).unwrap(),
                &start,
                &SolveOptions::default()
            ),
            Err(Error::ZeroTotalWeight)
        ));
    }

    #[test]
    fn coincident_start_is_rejected() {
        let start = Configuration::from_floats(&[&[0.0, 0.0], &[0.0, 0.0], &[1.0, 0.0]]).unwrap();
        let masses = fvec(&[1.0, 1.0, 1.0]);
        assert!(matches!(
            solve_central(
                &masses,
                &Scalar::float(-1.5).unwrap(),
                &start,
                &SolveOptions::default()
            ),
            Err(Error::CoincidentPoints { .. })
        ));
    }
}
