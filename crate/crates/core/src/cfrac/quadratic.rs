use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact element `(a + b*sqrt(d)) / c` of a real quadratic field.
///
/// `c > 0`, `d > 1` is not a perfect square, and `gcd(a, b, c) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl QuadSurd {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<QuadSurd> {
        if c.is_zero() {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        if d <= BigInt::one() || d.sqrt().pow(2u32) == d {
            return Err(Error::InvalidParameter(format!("{d} is a perfect square or < 2")));
        }
        Ok(QuadSurd::normalized(a, b, c, d))
    }

    fn normalized(mut a: BigInt, mut b: BigInt, mut c: BigInt, d: BigInt) -> QuadSurd {
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() && !g.is_zero() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        QuadSurd { a, b, c, d }
    }

    pub fn from_rational(r: &BigRational, d: &BigInt) -> QuadSurd {
        QuadSurd::normalized(r.numer().clone(), BigInt::zero(), r.denom().clone(), d.clone())
    }

    pub fn from_integer(n: BigInt, d: &BigInt) -> QuadSurd {
        QuadSurd::normalized(n, BigInt::zero(), BigInt::one(), d.clone())
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    /// Rational part `a/c` and irrational coefficient `b/c`.
    pub fn parts(&self) -> (BigRational, BigRational) {
        (
            BigRational::new(self.a.clone(), self.c.clone()),
            BigRational::new(self.b.clone(), self.c.clone()),
        )
    }

    fn check_field(&self, other: &QuadSurd) {
        assert_eq!(self.d, other.d, "quadratic surds from different fields");
    }

    pub fn add(&self, other: &QuadSurd) -> QuadSurd {
        self.check_field(other);
        QuadSurd::normalized(
            &self.a * &other.c + &other.a * &self.c,
            &self.b * &other.c + &other.b * &self.c,
            &self.c * &other.c,
            self.d.clone(),
        )
    }

    pub fn sub(&self, other: &QuadSurd) -> QuadSurd {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QuadSurd {
        QuadSurd {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    pub fn mul(&self, other: &QuadSurd) -> QuadSurd {
        self.check_field(other);
        QuadSurd::normalized(
            &self.a * &other.a + &self.b * &other.b * &self.d,
            &self.a * &other.b + &self.b * &other.a,
            &self.c * &other.c,
            self.d.clone(),
        )
    }

    pub fn mul_int(&self, m: &BigInt) -> QuadSurd {
        QuadSurd::normalized(&self.a * m, &self.b * m, self.c.clone(), self.d.clone())
    }

    pub fn add_int(&self, m: &BigInt) -> QuadSurd {
        QuadSurd::normalized(&self.a + m * &self.c, self.b.clone(), self.c.clone(), self.d.clone())
    }

    pub fn div_int(&self, m: &BigInt) -> QuadSurd {
        QuadSurd::normalized(self.a.clone(), self.b.clone(), &self.c * m, self.d.clone())
    }

    pub fn signum(&self) -> Sign {
        sign_of(&self.a, &self.b, &self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact floor, using `floor(sqrt(b^2 d))`.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.div_floor(&self.c);
        }
        let r = (&self.b * &self.b * &self.d).sqrt();
        if self.b.is_positive() {
            (&self.a + r).div_floor(&self.c)
        } else {
            (&self.a - r - BigInt::one()).div_floor(&self.c)
        }
    }

    pub fn fract(&self) -> QuadSurd {
        self.add_int(&-self.floor())
    }

    /// Distance to the nearest integer.
    pub fn dist_to_integer(&self) -> QuadSurd {
        let f = self.fract();
        let other = f.neg().add_int(&BigInt::one());
        if other.cmp(&f) == Ordering::Less {
            other
        } else {
            f
        }
    }

    pub fn abs(&self) -> QuadSurd {
        if self.signum() == Sign::Minus {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        self.cmp(&QuadSurd::from_rational(r, &self.d))
    }

    /// Accurate double approximation; cancelling terms go through the conjugate.
    pub fn to_f64(&self) -> f64 {
        let sqrt_d = big_to_f64(&self.d).sqrt();
        let (a, b, c) = (big_to_f64(&self.a), big_to_f64(&self.b), big_to_f64(&self.c));
        if self.a.sign() == self.b.sign() || self.a.is_zero() || self.b.is_zero() {
            return (a + b * sqrt_d) / c;
        }
        let norm = &self.a * &self.a - &self.b * &self.b * &self.d;
        let norm = BigRational::new(norm, self.c.clone()).to_f64().unwrap_or(f64::NAN);
        norm / (a - b * sqrt_d)
    }
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn sign_of(a: &BigInt, b: &BigInt, d: &BigInt) -> Sign {
    match (a.sign(), b.sign()) {
        (Sign::NoSign, s) | (s, Sign::NoSign) => s,
        (Sign::Plus, Sign::Plus) => Sign::Plus,
        (Sign::Minus, Sign::Minus) => Sign::Minus,
        (sa, _) => {
            let lhs = a * a;
            let rhs = b * b * d;
            if lhs > rhs {
                sa
            } else {
                -sa
            }
        }
    }
}

impl Ord for QuadSurd {
    fn cmp(&self, other: &QuadSurd) -> Ordering {
        self.check_field(other);
        let diff_a = &self.a * &other.c - &other.a * &self.c;
        let diff_b = &self.b * &other.c - &other.b * &self.c;
        match sign_of(&diff_a, &diff_b, &self.d) {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

impl PartialOrd for QuadSurd {
    fn partial_cmp(&self, other: &QuadSurd) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QuadSurd {
    /// `a,b,d` with rational `a`, `b` such that the value is `a + b*sqrt(d)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.parts();
        write!(
            f,
            "{}/{},{}/{},{}",
            a.numer(),
            a.denom(),
            b.numer(),
            b.denom(),
            self.d
        )
    }
}

/// A quadratic irrational `(p + sqrt(d)) / q` with an exact periodic
/// continued-fraction expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticIrrational {
    p: BigInt,
    d: BigInt,
    q: BigInt,
}

impl QuadraticIrrational {
    pub fn new(p: BigInt, d: BigInt, q: BigInt) -> Result<QuadraticIrrational> {
        // validates d and q
        QuadSurd::new(p.clone(), BigInt::one(), q.clone(), d.clone())?;
        let (mut p, mut d, mut q) = (p, d, q);
        if !(&d - &p * &p).is_multiple_of(&q) {
            let qa = q.abs();
            p *= &qa;
            d *= &q * &q;
            q *= &qa;
        }
        Ok(QuadraticIrrational { p, d, q })
    }

    /// `(sqrt 5 - 1) / 2`.
    pub fn golden() -> QuadraticIrrational {
        QuadraticIrrational::new((-1).into(), 5.into(), 2.into()).expect("valid")
    }

    /// `sqrt 2 - 1`.
    pub fn silver() -> QuadraticIrrational {
        QuadraticIrrational::new((-1).into(), 2.into(), 1.into()).expect("valid")
    }

    pub fn value(&self) -> QuadSurd {
        QuadSurd::new(self.p.clone(), BigInt::one(), self.q.clone(), self.d.clone())
            .expect("validated at construction")
    }

    pub fn to_f64(&self) -> f64 {
        self.value().to_f64()
    }

    /// First `count` partial quotients `a_0, a_1, ...`, exact.
    pub fn partial_quotients(&self, count: usize) -> Vec<BigInt> {
        self.quotients().take(count).collect()
    }

    /// The infinite stream of partial quotients.
    pub fn quotients(&self) -> Quotients {
        Quotients {
            p: self.p.clone(),
            q: self.q.clone(),
            d: self.d.clone(),
        }
    }
}

/// Iterator over the partial quotients of a [`QuadraticIrrational`].
#[derive(Clone, Debug)]
pub struct Quotients {
    p: BigInt,
    q: BigInt,
    d: BigInt,
}

impl Iterator for Quotients {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let x = QuadSurd::normalized(self.p.clone(), BigInt::one(), self.q.clone(), self.d.clone());
        let a = x.floor();
        let p_next = &a * &self.q - &self.p;
        self.q = (&self.d - &p_next * &p_next) / &self.q;
        self.p = p_next;
        Some(a)
    }
}
