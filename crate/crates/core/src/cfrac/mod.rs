//! Continued fractions, convergents, `||q alpha||` and the rational
//! approximation search.

mod quadratic;

use std::cmp::Ordering;
use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{ratio_to_f64, Scalar};

pub use quadratic::{QuadSurd, QuadraticIrrational, Quotients};

/// Deepest coefficient a float input may request.
pub const FLOAT_DEPTH_LIMIT: usize = 40;
/// A float complete quotient this close to an integer ends the expansion.
pub const FLOAT_RESIDUAL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfSource {
    Exact,
    Float,
    Quadratic,
    Coefficients,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub a0: BigInt,
    /// Partial quotients `a_1, ..., a_K`, all positive.
    pub coeffs: Vec<BigInt>,
    pub source: CfSource,
    /// Whether the expansion ended (the value is the rational it evaluates to).
    pub terminated: bool,
}

impl ContinuedFraction {
    pub fn from_coefficients(a0: BigInt, coeffs: Vec<BigInt>) -> Result<ContinuedFraction> {
        if let Some(bad) = coeffs.iter().find(|a| !a.is_positive()) {
            return Err(Error::InvalidParameter(format!("partial quotient {bad} < 1")));
        }
        Ok(ContinuedFraction {
            a0,
            coeffs,
            source: CfSource::Coefficients,
            terminated: true,
        })
    }

    pub fn from_quadratic(alpha: &QuadraticIrrational, depth: usize) -> ContinuedFraction {
        let mut all = alpha.partial_quotients(depth + 1);
        let a0 = all.remove(0);
        ContinuedFraction {
            a0,
            coeffs: all,
            source: CfSource::Quadratic,
            terminated: false,
        }
    }

    pub fn depth(&self) -> usize {
        self.coeffs.len()
    }

    /// `a_k` for `k = 0..=depth`.
    pub fn coefficient(&self, k: usize) -> Option<&BigInt> {
        if k == 0 {
            Some(&self.a0)
        } else {
            self.coeffs.get(k - 1)
        }
    }

    /// `(p_k, q_k)` for `k = 0..=depth`.
    pub fn convergent_pairs(&self) -> Vec<(BigInt, BigInt)> {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        let (mut p2, mut q2) = (BigInt::zero(), BigInt::one());
        let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
        for a in std::iter::once(&self.a0).chain(&self.coeffs) {
            let p = a * &p1 + &p2;
            let q = a * &q1 + &q2;
            out.push((p.clone(), q.clone()));
            p2 = std::mem::replace(&mut p1, p);
            q2 = std::mem::replace(&mut q1, q);
        }
        out
    }

    /// Value of the (finite) expansion.
    pub fn evaluate(&self) -> BigRational {
        let (p, q) = self.convergent_pairs().pop().expect("a0 always present");
        BigRational::new(p, q)
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.a0)?;
        for (i, a) in self.coeffs.iter().enumerate() {
            write!(f, "{}{a}", if i == 0 { "; " } else { ", " })?;
        }
        write!(f, "]")
    }
}

/// Expansion to at most `depth` partial quotients after `a_0`.
///
/// Exact inputs use Euclid's algorithm. A float is taken as an approximation
/// known to half an ulp: `a_k` is kept only while the whole uncertainty
/// interval agrees on it, so deep requests fail instead of returning noise.
pub fn expand(alpha: &Scalar, depth: usize) -> Result<ContinuedFraction> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    match alpha {
        Scalar::Exact(r) => Ok(expand_exact(r, depth)),
        Scalar::Float(x) => expand_float(*x, depth),
    }
}

fn expand_exact(r: &BigRational, depth: usize) -> ContinuedFraction {
    let (mut num, mut den) = (r.numer().clone(), r.denom().clone());
    let (a0, rem) = num.div_mod_floor(&den);
    let mut coeffs = Vec::new();
    num = den;
    den = rem;
    while !den.is_zero() && coeffs.len() < depth {
        let (a, rem) = num.div_mod_floor(&den);
        coeffs.push(a);
        num = den;
        den = rem;
    }
    ContinuedFraction {
        a0,
        coeffs,
        source: CfSource::Exact,
        terminated: den.is_zero(),
    }
}

fn expand_float(x: f64, depth: usize) -> Result<ContinuedFraction> {
    if !x.is_finite() {
        return Err(Error::NotFinite(x));
    }
    if depth > FLOAT_DEPTH_LIMIT {
        return Err(Error::DepthPrecisionExceeded {
            depth,
            trusted: FLOAT_DEPTH_LIMIT,
        });
    }
    let exact = |v: f64| BigRational::from_f64(v).expect("finite");
    let half_ulp = exact(f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) / 2.0);
    let residual = exact(FLOAT_RESIDUAL);
    let mut c = exact(x);
    let mut lo = &c - &half_ulp;
    let mut hi = &c + &half_ulp;
    let mut quotients: Vec<BigInt> = Vec::new();
    let mut terminated = false;
    loop {
        let a = c.floor();
        let r = &c - &a;
        let near = if r < residual {
            Some(a.to_integer())
        } else if BigRational::one() - &r < residual {
            Some(a.to_integer() + 1)
        } else {
            None
        };
        if let Some(n) = near {
            quotients.push(n);
            terminated = true;
            break;
        }
        if lo.floor() != hi.floor() {
            break;
        }
        quotients.push(a.to_integer());
        if quotients.len() > depth {
            break;
        }
        c = r.recip();
        let (l, h) = ((&hi - &a).recip(), (&lo - &a).recip());
        lo = l;
        hi = h;
    }
    // a trailing 1 after rounding is folded into its predecessor
    if terminated && quotients.len() >= 2 && quotients.last().is_some_and(|a| a.is_one()) {
        quotients.pop();
        *quotients.last_mut().expect("len >= 1") += 1;
    }
    let trusted = quotients.len().saturating_sub(1);
    if !terminated && trusted < depth {
        return Err(Error::DepthPrecisionExceeded { depth, trusted });
    }
    let a0 = quotients.remove(0);
    quotients.truncate(depth);
    Ok(ContinuedFraction {
        a0,
        coeffs: quotients,
        source: CfSource::Float,
        terminated,
    })
}

/// A real number the convergent machinery can evaluate `||q alpha||` on.
#[derive(Clone, Debug, PartialEq)]
pub enum Alpha {
    Exact(BigRational),
    /// Treated as the double it is, i.e. an exact dyadic rational.
    Float(f64),
    Quadratic(QuadraticIrrational),
}

impl From<Scalar> for Alpha {
    fn from(s: Scalar) -> Alpha {
        match s {
            Scalar::Exact(r) => Alpha::Exact(r),
            Scalar::Float(x) => Alpha::Float(x),
        }
    }
}

impl From<QuadraticIrrational> for Alpha {
    fn from(q: QuadraticIrrational) -> Alpha {
        Alpha::Quadratic(q)
    }
}

impl Alpha {
    pub fn to_f64(&self) -> f64 {
        match self {
            Alpha::Exact(r) => ratio_to_f64(r),
            Alpha::Float(x) => *x,
            Alpha::Quadratic(q) => q.to_f64(),
        }
    }

    fn dyadic(x: f64) -> BigRational {
        BigRational::from_f64(x).unwrap_or_else(BigRational::zero)
    }

    /// `||q alpha||`, the distance from `q alpha` to the nearest integer.
    pub fn dist_multiple(&self, q: &BigInt) -> Dist {
        let nearest = |r: BigRational| {
            let f = &r - r.floor();
            let g = BigRational::one() - &f;
            if g < f {
                g
            } else {
                f
            }
        };
        let qr = BigRational::from_integer(q.clone());
        match self {
            Alpha::Exact(r) => Dist::Exact(nearest(r * qr)),
            Alpha::Float(x) => Dist::Float(ratio_to_f64(&nearest(Alpha::dyadic(*x) * qr))),
            Alpha::Quadratic(a) => Dist::Quadratic(a.value().mul_int(q).dist_to_integer()),
        }
    }

    /// Sign of `alpha - p/q`.
    pub fn cmp_fraction(&self, p: &BigInt, q: &BigInt) -> Ordering {
        let f = BigRational::new(p.clone(), q.clone());
        match self {
            Alpha::Exact(r) => r.cmp(&f),
            Alpha::Float(x) => Alpha::dyadic(*x).cmp(&f),
            Alpha::Quadratic(a) => a.value().cmp_rational(&f),
        }
    }

    /// Whether `|alpha - p/q| <= bound`, decided exactly.
    fn within(&self, p: &BigInt, q: &BigInt, bound: &BigRational) -> bool {
        let f = BigRational::new(p.clone(), q.clone());
        let (lo, hi) = (&f - bound, &f + bound);
        match self {
            Alpha::Exact(r) => &lo <= r && r <= &hi,
            Alpha::Float(x) => {
                let r = Alpha::dyadic(*x);
                lo <= r && r <= hi
            }
            Alpha::Quadratic(a) => {
                let v = a.value();
                v.cmp_rational(&lo) != Ordering::Less && v.cmp_rational(&hi) != Ordering::Greater
            }
        }
    }

    fn floor_multiple(&self, q: &BigInt) -> BigInt {
        let qr = BigRational::from_integer(q.clone());
        match self {
            Alpha::Exact(r) => (r * qr).floor().to_integer(),
            Alpha::Float(x) => (Alpha::dyadic(*x) * qr).floor().to_integer(),
            Alpha::Quadratic(a) => a.value().mul_int(q).floor(),
        }
    }
}

/// A distance value in whichever exact or float form the input allowed.
#[derive(Clone, Debug, PartialEq)]
pub enum Dist {
    Exact(BigRational),
    Float(f64),
    Quadratic(QuadSurd),
}

impl Dist {
    pub fn to_f64(&self) -> f64 {
        match self {
            Dist::Exact(r) => ratio_to_f64(r),
            Dist::Float(x) => *x,
            Dist::Quadratic(s) => s.to_f64(),
        }
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        match self {
            Dist::Exact(x) => x.cmp(r),
            Dist::Float(x) => x.partial_cmp(&ratio_to_f64(r)).unwrap_or(Ordering::Equal),
            Dist::Quadratic(s) => s.cmp_rational(r),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Dist::Exact(x) => x.is_zero(),
            Dist::Float(x) => *x == 0.0,
            Dist::Quadratic(s) => s.is_zero(),
        }
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Dist::Float(x) => write!(f, "{x:e}"),
            Dist::Quadratic(s) => write!(f, "{:e}", s.to_f64()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Convergent {
    pub k: usize,
    pub p: BigInt,
    pub q: BigInt,
    pub dist: Dist,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergentTable {
    pub cf: ContinuedFraction,
    pub rows: Vec<Convergent>,
}

impl ConvergentTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn denominators(&self) -> Vec<BigInt> {
        self.rows.iter().map(|r| r.q.clone()).collect()
    }

    /// `k,p,q,dist` with a header line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,p,q,dist\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{},{}", r.k, r.p, r.q, r.dist);
        }
        s
    }
}

pub fn convergents(cf: &ContinuedFraction, alpha: &Alpha) -> ConvergentTable {
    let rows = cf
        .convergent_pairs()
        .into_iter()
        .enumerate()
        .map(|(k, (p, q))| {
            let dist = alpha.dist_multiple(&q);
            Convergent { k, p, q, dist }
        })
        .collect();
    ConvergentTable {
        cf: cf.clone(),
        rows,
    }
}

/// Coprime `(p, q)` with `q` in `moduli`, `0 <= p <= q`, and
/// `|alpha - p/q| <= bound_fn(q) / q`, where `alpha` is reduced into `[0, 1)`.
pub fn approx_search<F>(alpha: &Alpha, moduli: &[u64], bound_fn: F) -> Vec<(BigInt, BigInt)>
where
    F: Fn(u64) -> f64,
{
    let shift = alpha.floor_multiple(&BigInt::one());
    let mut out = Vec::new();
    for &q in moduli {
        if q == 0 {
            continue;
        }
        let b = bound_fn(q);
        if !(b >= 0.0) {
            continue;
        }
        let qb = BigInt::from(q);
        let bound = match BigRational::from_f64(b) {
            Some(r) => r / BigRational::from_integer(qb.clone()),
            // an infinite bound admits every p
            None => BigRational::one(),
        };
        let reach: BigInt = BigInt::from_f64(b.min(q as f64).ceil()).unwrap_or_else(|| qb.clone()) + 1;
        let centre: BigInt = alpha.floor_multiple(&qb) - &shift * &qb;
        let lo: BigInt = (&centre - &reach).max(BigInt::zero());
        let hi = (&centre + &reach).min(qb.clone());
        let mut p = lo;
        while p <= hi {
            if p.gcd(&qb).is_one() && alpha.within(&(&p + &shift * &qb), &qb, &bound) {
                out.push((p.clone(), qb.clone()));
            }
            p += 1;
        }
    }
    out
}

/// `floor(q * alpha)` for a big `q`, exposed for orbit computations.
pub fn floor_multiple(alpha: &Alpha, q: &BigInt) -> BigInt {
    alpha.floor_multiple(q)
}
