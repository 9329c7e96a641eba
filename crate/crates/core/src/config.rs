//! Point configurations in Euclidean space and small vector helpers.

use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};

/// An ordered list of `n` points in an ambient space of dimension `N`.
///
/// The ambient dimension may exceed the dimension of the affine closure of
/// the points; operations that need a tight frame say so.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    points: Vec<Vec<Scalar>>,
}

impl Configuration {
    pub fn new(points: Vec<Vec<Scalar>>) -> Result<Configuration> {
        if points.is_empty() {
            return Err(Error::WrongShape(
                "configuration needs at least one point".into(),
            ));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::WrongShape(
                "points need at least one coordinate".into(),
            ));
        }
        let mode = points[0][0].mode();
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            for s in p {
                if s.mode() != mode {
                    return Err(Error::ShapeMismatch("mixed scalar modes".into()));
                }
                if let Scalar::Float(v) = s {
                    if !v.is_finite() {
                        return Err(Error::PreconditionViolated("non-finite coordinate".into()));
                    }
                }
            }
        }
        Ok(Configuration { points })
    }

    /// Rational-mode configuration from integer coordinates.
    pub fn from_ints(points: &[&[i64]]) -> Configuration {
        Configuration::new(
            points
                .iter()
                .map(|p| p.iter().map(|&v| Scalar::int(v)).collect())
                .collect(),
        )
        .expect("integer points are well formed")
    }

    /// Float-mode configuration from `f64` coordinates.
    pub fn from_floats(points: &[&[f64]]) -> Result<Configuration> {
        Configuration::new(
            points
                .iter()
                .map(|p| {
                    p.iter()
                        .map(|&v| Scalar::float(v))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn mode(&self) -> Mode {
        self.points[0][0].mode()
    }

    pub fn point(&self, i: usize) -> &[Scalar] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<Scalar>] {
        &self.points
    }

    /// Squared mutual distance `|x_i - x_j|^2`.
    pub fn squared_distance(&self, i: usize, j: usize) -> Scalar {
        dist2(self.point(i), self.point(j))
    }

    pub fn check_pairwise_distinct(&self) -> Result<()> {
        for i in 0..self.n() {
            for j in (i + 1)..self.n() {
                if self.squared_distance(i, j).is_zero() {
                    return Err(Error::CoincidentPoints { i, j });
                }
            }
        }
        Ok(())
    }

    /// Restriction to the given indices, columns kept in the given order.
    pub fn subconfiguration(&self, indices: &[usize]) -> Result<Configuration> {
        let points = indices
            .iter()
            .map(|&i| {
                self.points
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::OutOfRange(format!("point index {i}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Configuration::new(points)
    }
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale_vec(c: &Scalar, v: &[Scalar]) -> Vec<Scalar> {
    v.iter().map(|x| c * x).collect()
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    let mode = a[0].mode();
    a.iter().zip(b).fold(mode.zero(), |acc, (x, y)| acc + x * y)
}

/// Squared Euclidean distance between two points.
pub fn dist2(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let d = sub(a, b);
    dot(&d, &d)
}

pub fn zero_vec(len: usize, mode: Mode) -> Vec<Scalar> {
    vec![mode.zero(); len]
}

pub fn max_abs(v: &[Scalar]) -> Scalar {
    let mut best = v[0].abs();
    for s in &v[1..] {
        let a = s.abs();
        if a.cmp_abs(&best) == std::cmp::Ordering::Greater {
            best = a;
        }
    }
    best
}
