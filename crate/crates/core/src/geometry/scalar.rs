use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A coordinate value, either an exact rational or a finite double.
///
/// Exact values are always kept in lowest terms (guaranteed by
/// `BigRational`). Arithmetic between the two representations is refused;
/// use [`Scalar::to_float`] or [`Scalar::from_f64_exact`] to convert.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn ratio(numer: i64, denom: i64) -> Scalar {
        Scalar::Exact(BigRational::new(numer.into(), denom.into()))
    }

    pub fn integer(value: i64) -> Scalar {
        Scalar::Exact(BigRational::from_integer(value.into()))
    }

    pub fn float(value: f64) -> Result<Scalar> {
        if value.is_finite() {
            Ok(Scalar::Float(value))
        } else {
            Err(Error::NotFinite(value))
        }
    }

    /// The exact dyadic rational carried by a double.
    pub fn from_f64_exact(value: f64) -> Result<Scalar> {
        BigRational::from_f64(value)
            .map(Scalar::Exact)
            .ok_or(Error::NotFinite(value))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => ratio_to_f64(r),
            Scalar::Float(x) => *x,
        }
    }

    pub fn to_float(&self) -> Scalar {
        Scalar::Float(self.to_f64())
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_exact(&self) -> Result<BigRational> {
        self.as_exact().cloned().ok_or(Error::RequiresExact)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Float(x) => *x > 0.0,
        }
    }

    /// Reduction into `[0, 1)`.
    pub fn circle_reduce(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(frac_exact(r)),
            Scalar::Float(x) => Scalar::Float(frac_f64(*x)),
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a + b)),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::float(a + b),
            _ => Err(Error::RepresentationMismatch),
        }
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a - b)),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::float(a - b),
            _ => Err(Error::RepresentationMismatch),
        }
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a * b)),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::float(a * b),
            _ => Err(Error::RepresentationMismatch),
        }
    }

    pub fn mul_int(&self, m: i64) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r * BigRational::from_integer(m.into())),
            Scalar::Float(x) => Scalar::Float(x * m as f64),
        }
    }

    pub fn half(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r / BigRational::from_integer(2.into())),
            Scalar::Float(x) => Scalar::Float(x / 2.0),
        }
    }

    /// Comparison across representations goes through `f64` for mixed pairs.
    pub fn cmp_value(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => self
                .to_f64()
                .partial_cmp(&other.to_f64())
                .unwrap_or(Ordering::Equal),
        }
    }

    pub fn lt(&self, other: &Scalar) -> bool {
        self.cmp_value(other) == Ordering::Less
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

impl std::str::FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scalar> {
        let s = s.trim();
        if s.contains('/') {
            s.parse::<BigRational>()
                .map(Scalar::Exact)
                .map_err(|_| Error::InvalidParameter(format!("bad rational `{s}`")))
        } else {
            let x: f64 = s
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad number `{s}`")))?;
            Scalar::float(x)
        }
    }
}

pub fn frac_exact(r: &BigRational) -> BigRational {
    r - r.floor()
}

pub fn frac_f64(x: f64) -> f64 {
    let f = x - x.floor();
    // x slightly below an integer can round up to exactly 1.0
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn rat(numer: i64, denom: i64) -> BigRational {
    BigRational::new(numer.into(), denom.into())
}
