//! Residual values and grids with scale-aware zero tests.
//!
//! Identity checks in rational mode must be exactly zero. In float mode a
//! residual counts as zero when it is small relative to the largest term
//! magnitude that appeared while forming it.

use crate::linalg::Mat;
use crate::scalar::{Mode, Scalar};

/// A single identity residual together with the largest magnitude that
/// occurred in the identity being checked.
#[derive(Debug, Clone)]
pub struct Residual {
    pub value: Scalar,
    pub scale: Scalar,
}

impl Residual {
    pub fn new(value: Scalar, scale: Scalar) -> Residual {
        Residual { value, scale }
    }

    /// Exact zero in rational mode; `|value| <= eps * max(1, scale)` in float.
    pub fn passes(&self, eps: f64) -> bool {
        self.value.is_zero_within(eps, &self.scale)
    }
}

/// A grid of residuals from one verification family.
#[derive(Debug, Clone)]
pub struct ResidualGrid {
    values: Mat,
    scale: Scalar,
}

impl ResidualGrid {
    pub fn new(values: Mat, scale: Scalar) -> ResidualGrid {
        ResidualGrid { values, scale }
    }

    pub fn values(&self) -> &Mat {
        &self.values
    }

    pub fn scale(&self) -> &Scalar {
        &self.scale
    }

    pub fn mode(&self) -> Mode {
        self.values.mode()
    }

    pub fn max_abs(&self) -> Scalar {
        self.values.max_abs_entry()
    }

    /// Location and value of the entry with largest magnitude.
    pub fn worst(&self) -> (usize, usize, Scalar) {
        let mut loc = (0, 0);
        let mut best = self.values.at(0, 0).abs();
        for i in 0..self.values.nrows() {
            for j in 0..self.values.ncols() {
                let a = self.values.at(i, j).abs();
                if a.cmp_abs(&best) == std::cmp::Ordering::Greater {
                    best = a;
                    loc = (i, j);
                }
            }
        }
        (loc.0, loc.1, self.values.at(loc.0, loc.1).clone())
    }

    pub fn passes(&self, eps: f64) -> bool {
        for i in 0..self.values.nrows() {
            for j in 0..self.values.ncols() {
                if !self.values.at(i, j).is_zero_within(eps, &self.scale) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_exact_zero(&self) -> bool {
        (0..self.values.nrows())
            .all(|i| (0..self.values.ncols()).all(|j| self.values.at(i, j).is_zero()))
    }
}

/// Track the largest magnitude seen while accumulating identity terms.
#[derive(Debug, Clone)]
pub struct ScaleTracker {
    max: Scalar,
}

impl ScaleTracker {
    pub fn new(mode: Mode) -> ScaleTracker {
        ScaleTracker { max: mode.zero() }
    }

    pub fn observe(&mut self, term: &Scalar) {
        let a = term.abs();
        if a.cmp_abs(&self.max) == std::cmp::Ordering::Greater {
            self.max = a;
        }
    }

    pub fn finish(self) -> Scalar {
        self.max
    }
}
