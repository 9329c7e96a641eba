//! Dual-mode scalars: exact rationals or finite floats.
//!
//! Every numeric entry in this crate is a [`Scalar`]. A whole computation runs
//! in a single mode fixed by its inputs: exact rational arithmetic for the
//! determinantal identities, `f64` for the numerical solver. Mixing modes in
//! one arithmetic expression is a programming error and panics.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arithmetic mode of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Exact arbitrary-precision rational arithmetic.
    Rational,
    /// IEEE-754 double precision.
    Float,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Rational => "rational",
            Mode::Float => "float",
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Mode::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Mode::Float => Scalar::Float(n as f64),
        }
    }
}

/// A number in one of the two arithmetic modes.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Rational(BigRational),
    Float(f64),
}

impl Scalar {
    /// Exact rational `p/q`. Panics if `q == 0`.
    pub fn rational(p: i64, q: i64) -> Scalar {
        assert!(q != 0, "zero denominator");
        Scalar::Rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// Exact integer in rational mode.
    pub fn int(n: i64) -> Scalar {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Finite float. Rejects NaN and infinities.
    pub fn float(v: f64) -> Result<Scalar> {
        if v.is_finite() {
            Ok(Scalar::Float(v))
        } else {
            Err(Error::PreconditionViolated(format!(
                "non-finite float {v} not admitted"
            )))
        }
    }

    pub fn from_big_rational(r: BigRational) -> Scalar {
        Scalar::Rational(r)
    }

    /// Parse `"p/q"` or a plain integer string into an exact rational.
    pub fn parse_rational(text: &str) -> Result<Scalar> {
        let bad = |_| Error::PreconditionViolated(format!("not a rational: {text:?}"));
        let (p, q) = match text.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (text.trim(), "1"),
        };
        let numer: BigInt = p.parse().map_err(bad)?;
        let denom: BigInt = q.parse().map_err(bad)?;
        if denom.is_zero() {
            return Err(Error::PreconditionViolated(format!(
                "zero denominator in {text:?}"
            )));
        }
        Ok(Scalar::Rational(BigRational::new(numer, denom)))
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Rational(_) => Mode::Rational,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Float(v) => *v == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Float(v) => *v < 0.0,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r.abs()),
            Scalar::Float(v) => Scalar::Float(v.abs()),
        }
    }

    /// Lossy conversion for reporting and float-mode thresholds.
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(v) => *v,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// `self^a`, where `a` is a scalar exponent of the same mode.
    ///
    /// In rational mode only integer exponents are exact, so anything else is
    /// rejected. In float mode this is `exp(a ln self)` and requires a
    /// positive base.
    pub fn pow_exponent(&self, a: &Scalar) -> Result<Scalar> {
        match (self, a) {
            (Scalar::Rational(s), Scalar::Rational(e)) => {
                if !e.is_integer() {
                    return Err(Error::ModeUnsupported {
                        mode: "rational",
                        reason: format!("non-integer exponent {e}"),
                    });
                }
                let k = e
                    .to_integer()
                    .to_i32()
                    .ok_or_else(|| Error::OutOfRange(format!("exponent {e} too large")))?;
                if s.is_zero() && k < 0 {
                    return Err(Error::PreconditionViolated(
                        "zero base with negative exponent".into(),
                    ));
                }
                Ok(Scalar::Rational(s.pow(k)))
            }
            (Scalar::Float(s), Scalar::Float(e)) => {
                if *s <= 0.0 {
                    return Err(Error::PreconditionViolated(format!(
                        "nonpositive base {s} for real exponent"
                    )));
                }
                Scalar::float(s.powf(*e))
            }
            _ => panic!("mixed scalar modes in pow_exponent"),
        }
    }

    /// Exact zero test in rational mode; relative test against `scale` in
    /// float mode: `|self| <= eps * max(1, |scale|)`.
    pub fn is_zero_within(&self, eps: f64, scale: &Scalar) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Float(v) => v.abs() <= eps * scale.to_f64().abs().max(1.0),
        }
    }

    /// Total order on absolute values of same-mode scalars.
    pub fn cmp_abs(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.abs().cmp(&b.abs()),
            (Scalar::Float(a), Scalar::Float(b)) => {
                a.abs().partial_cmp(&b.abs()).expect("finite floats")
            }
            _ => panic!("mixed scalar modes in cmp_abs"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Float(v) => write!(f, "{v}"),
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl std::ops::$trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a $op b),
                    (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a $op b),
                    _ => panic!("mixed scalar modes in {}", stringify!($method)),
                }
            }
        }
        impl std::ops::$trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl std::ops::$trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);

impl std::ops::Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => {
                assert!(!b.is_zero(), "rational division by zero");
                Scalar::Rational(a / b)
            }
            (Scalar::Float(a), Scalar::Float(b)) => {
                let v = a / b;
                assert!(v.is_finite(), "non-finite float in division");
                Scalar::Float(v)
            }
            _ => panic!("mixed scalar modes in div"),
        }
    }
}

impl std::ops::Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        (&self) / (&rhs)
    }
}

impl std::ops::Div<&Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        (&self) / rhs
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Float(v) => Scalar::Float(-v),
        }
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(&self)
    }
}
