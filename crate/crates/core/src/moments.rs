//! Weighted systems and their first three moments.
//!
//! A weighted system pairs a configuration with one scalar weight per point.
//! The total weight, the first moment `mu1(p) = sum w(x) (x - p)`, and the
//! second moment `mu2(p) = sum w(x) |x - p|^2` satisfy classical identities
//! (Huygens-Leibniz-Koenig) that the residual operations here evaluate.

use crate::config::{add, dist2, dot, scale_vec, sub, zero_vec, Configuration};
use crate::error::{Error, Result};
use crate::residual::{Residual, ScaleTracker};
use crate::scalar::{Mode, Scalar};

/// Weights aligned index-for-index with a configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    entries: Vec<Scalar>,
}

impl WeightVector {
    pub fn new(entries: Vec<Scalar>) -> Result<WeightVector> {
        if entries.is_empty() {
            return Err(Error::WrongShape("empty weight vector".into()));
        }
        let mode = entries[0].mode();
        if entries.iter().any(|s| s.mode() != mode) {
            return Err(Error::ShapeMismatch("mixed scalar modes".into()));
        }
        Ok(WeightVector { entries })
    }

    pub fn from_ints(ws: &[i64]) -> WeightVector {
        WeightVector::new(ws.iter().map(|&w| Scalar::int(w)).collect()).expect("nonempty")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, i: usize) -> &Scalar {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn mode(&self) -> Mode {
        self.entries[0].mode()
    }
}

/// A configuration with one weight per point.
#[derive(Debug, Clone)]
pub struct WeightedSystem {
    configuration: Configuration,
    weights: WeightVector,
}

impl WeightedSystem {
    pub fn new(configuration: Configuration, weights: WeightVector) -> Result<WeightedSystem> {
        if weights.len() != configuration.n() {
            return Err(Error::ShapeMismatch(format!(
                "{} weights for {} points",
                weights.len(),
                configuration.n()
            )));
        }
        if weights.mode() != configuration.mode() {
            return Err(Error::ShapeMismatch("mixed scalar modes".into()));
        }
        Ok(WeightedSystem {
            configuration,
            weights,
        })
    }

    pub fn configuration(&self) -> &Configuration {
        &self.configuration
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn mode(&self) -> Mode {
        self.configuration.mode()
    }

    fn check_point(&self, p: &[Scalar]) -> Result<()> {
        if p.len() != self.configuration.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.configuration.ambient_dim(),
                got: p.len(),
            });
        }
        Ok(())
    }
}

/// Total weight `mu0 = sum w(x)`.
pub fn total_weight(ws: &WeightedSystem) -> Scalar {
    let mode = ws.mode();
    ws.weights()
        .entries()
        .iter()
        .fold(mode.zero(), |acc, w| acc + w)
}

/// First moment `mu1(p) = sum w(x) (x - p)`.
pub fn first_moment(ws: &WeightedSystem, p: &[Scalar]) -> Result<Vec<Scalar>> {
    ws.check_point(p)?;
    let mut acc = zero_vec(p.len(), ws.mode());
    for (i, w) in ws.weights().entries().iter().enumerate() {
        let d = sub(ws.configuration().point(i), p);
        acc = add(&acc, &scale_vec(w, &d));
    }
    Ok(acc)
}

/// Second moment `mu2(p) = sum w(x) |x - p|^2`.
pub fn second_moment(ws: &WeightedSystem, p: &[Scalar]) -> Result<Scalar> {
    ws.check_point(p)?;
    let mode = ws.mode();
    let mut acc = mode.zero();
    for (i, w) in ws.weights().entries().iter().enumerate() {
        acc = acc + w * dist2(ws.configuration().point(i), p);
    }
    Ok(acc)
}

/// The unique point `G` with `mu1(G) = 0`; requires nonzero total weight.
pub fn barycenter(ws: &WeightedSystem) -> Result<Vec<Scalar>> {
    let mu0 = total_weight(ws);
    if mu0.is_zero() {
        return Err(Error::ZeroTotalWeight);
    }
    let origin = zero_vec(ws.configuration().ambient_dim(), ws.mode());
    let m1 = first_moment(ws, &origin)?;
    Ok(scale_vec(&(ws.mode().one() / &mu0), &m1))
}

/// Residual of the Leibniz identity
/// `mu0 mu2(q) - mu1(q)^2 - sum_{pairs} w(x) w(y) |x - y|^2`,
/// which vanishes for every weighted system.
pub fn leibniz_identity_residual(ws: &WeightedSystem, q: &[Scalar]) -> Result<Residual> {
    ws.check_point(q)?;
    let mode = ws.mode();
    let mu0 = total_weight(ws);
    let mu2 = second_moment(ws, q)?;
    let m1 = first_moment(ws, q)?;
    let m1sq = dot(&m1, &m1);
    let mut pair_sum = mode.zero();
    let n = ws.configuration().n();
    let mut scale = ScaleTracker::new(mode);
    for i in 0..n {
        for j in (i + 1)..n {
            let term = ws.weights().entry(i)
                * ws.weights().entry(j)
                * ws.configuration().squared_distance(i, j);
            scale.observe(&term);
            pair_sum = pair_sum + term;
        }
    }
    let lhs = &mu0 * &mu2;
    scale.observe(&lhs);
    scale.observe(&m1sq);
    scale.observe(&pair_sum);
    Ok(Residual::new(lhs - m1sq - pair_sum, scale.finish()))
}

/// Residual of `mu2(p) - mu2(q) = (q - p) . (mu1(p) + mu1(q))`,
/// which vanishes for every weighted system and every pair of points.
pub fn hlk_difference_residual(
    ws: &WeightedSystem,
    p: &[Scalar],
    q: &[Scalar],
) -> Result<Residual> {
    let mu2p = second_moment(ws, p)?;
    let mu2q = second_moment(ws, q)?;
    let m1p = first_moment(ws, p)?;
    let m1q = first_moment(ws, q)?;
    let pq = sub(q, p);
    let rhs = dot(&pq, &add(&m1p, &m1q));
    let mut scale = ScaleTracker::new(ws.mode());
    scale.observe(&mu2p);
    scale.observe(&mu2q);
    scale.observe(&rhs);
    Ok(Residual::new(mu2p - mu2q - rhs, scale.finish()))
}

/// For two systems with equal nonzero total weight and a common barycenter,
/// the difference of second moments is the same at every point; returns that
/// constant (its value at the common barycenter) after verifying it at every
/// probe.
pub fn second_moment_difference_constant(
    ws1: &WeightedSystem,
    ws2: &WeightedSystem,
    probes: &[Vec<Scalar>],
    eps: f64,
) -> Result<Scalar> {
    let mu0_1 = total_weight(ws1);
    let mu0_2 = total_weight(ws2);
    if mu0_1.is_zero() || mu0_2.is_zero() {
        return Err(Error::ZeroTotalWeight);
    }
    let diff_mu0 = &mu0_1 - &mu0_2;
    if !diff_mu0.is_zero_within(eps, &mu0_1) {
        return Err(Error::PreconditionViolated(format!(
            "total weights differ: {mu0_1} vs {mu0_2}"
        )));
    }
    let g1 = barycenter(ws1)?;
    let g2 = barycenter(ws2)?;
    let gap = dist2(&g1, &g2);
    let span = crate::config::max_abs(&g1);
    if !gap.is_zero_within(eps, &span) {
        return Err(Error::PreconditionViolated(
            "barycenters do not coincide".into(),
        ));
    }
    let at_g = second_moment(ws1, &g1)? - second_moment(ws2, &g1)?;
    for p in probes {
        let d = second_moment(ws1, p)? - second_moment(ws2, p)?;
        let dev = &d - &at_g;
        if !dev.is_zero_within(eps, &at_g) {
            return Err(Error::PreconditionViolated(format!(
                "difference not constant: {d} at probe vs {at_g} at barycenter"
            )));
        }
    }
    Ok(at_g)
}

/// Moments of one system evaluated at a fixed list of probe points.
#[derive(Debug, Clone)]
pub struct MomentSummary {
    pub mu0: Scalar,
    pub barycenter: Option<Vec<Scalar>>,
    pub probes: Vec<Vec<Scalar>>,
    pub mu1_at: Vec<Vec<Scalar>>,
    pub mu2_at: Vec<Scalar>,
}

impl MomentSummary {
    /// Largest deviation of `mu1(p) - mu1(q) - mu0 (q - p)` over stored pairs.
    pub fn lemma_residual(&self) -> Scalar {
        let mode = self.mu0.mode();
        let mut worst = mode.zero();
        for a in 0..self.probes.len() {
            for b in (a + 1)..self.probes.len() {
                let lhs = sub(&self.mu1_at[a], &self.mu1_at[b]);
                let rhs = scale_vec(&self.mu0, &sub(&self.probes[b], &self.probes[a]));
                let dev = crate::config::max_abs(&sub(&lhs, &rhs));
                if dev.cmp_abs(&worst) == std::cmp::Ordering::Greater {
                    worst = dev;
                }
            }
        }
        worst
    }
}

/// Evaluate all three moments at the probes, plus the barycenter when defined.
pub fn summarize(ws: &WeightedSystem, probes: &[Vec<Scalar>]) -> Result<MomentSummary> {
    let mu0 = total_weight(ws);
    let bc = if mu0.is_zero() {
        None
    } else {
        Some(barycenter(ws)?)
    };
    let mut mu1_at = Vec::with_capacity(probes.len());
    let mut mu2_at = Vec::with_capacity(probes.len());
    for p in probes {
        mu1_at.push(first_moment(ws, p)?);
        mu2_at.push(second_moment(ws, p)?);
    }
    Ok(MomentSummary {
        mu0,
        barycenter: bc,
        probes: probes.to_vec(),
        mu1_at,
        mu2_at,
    })
}
