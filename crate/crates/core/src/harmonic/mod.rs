//! Ramanujan-type sums `c_q(m)` over primitive residue vectors, Jordan
//! totients, bump functions and the Abel-summation tail bound.

mod abel;
mod bump;

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

pub use abel::{abel_tail_bound, AbelBound, AdmissibleSequence};
pub use bump::{build_bump, decay_csv, BumpFunction, DecayRecord, MIN_SUPPORT_SAMPLES};

/// Largest modulus for which the brute-force sum is reduced exactly in `Z[zeta_q]`.
pub const EXACT_MODULUS_MAX: u64 = 1000;

pub(crate) fn factorize(mut q: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut r = 0;
            while q % p == 0 {
                q /= p;
                r += 1;
            }
            out.push((p, r));
        }
        p += 1;
    }
    if q > 1 {
        out.push((q, 1));
    }
    out
}

fn divisors(q: u64) -> Vec<u64> {
    let mut d: Vec<u64> = (1..=q).take_while(|i| i * i <= q).filter(|i| q % i == 0).collect();
    let upper: Vec<u64> = d.iter().rev().map(|i| q / i).filter(|&j| j * j != q).collect();
    d.extend(upper);
    d
}

fn gcd_of(m: &[i64]) -> BigInt {
    m.iter().fold(BigInt::zero(), |g, &x| g.gcd(&BigInt::from(x)))
}

/// Histogram of `<m, k> mod q` over `k in [1, q]^n` with `gcd(k_1, .., k_n, q) = 1`.
///
/// Every such `k` is enumerated; equal partial states `(gcd(k_1..k_i, q),
/// <m, k>_i mod q)` are merged coordinate by coordinate.
fn primitive_histogram(m: &[i64], q: u64) -> Vec<u64> {
    let qs = q as usize;
    let divs = divisors(q);
    let mut index = HashMap::new();
    for (i, &d) in divs.iter().enumerate() {
        index.insert(d, i);
    }
    let nd = divs.len();
    // meet[g][k - 1] = index of gcd(divs[g], k)
    let meet: Vec<Vec<usize>> = divs
        .iter()
        .map(|&g| (1..=q).map(|k| index[&g.gcd(&k)]).collect())
        .collect();
    let top = index[&q];
    let mut state = vec![0u64; nd * qs];
    state[top * qs] = 1;
    for &mi in m {
        let a = mi.rem_euclid(q as i64) as usize;
        let mut next = vec![0u64; nd * qs];
        for g in 0..nd {
            for t in 0..qs {
                let c = state[g * qs + t];
                if c == 0 {
                    continue;
                }
                let mut u = t;
                for k in 0..qs {
                    u = (u + a) % qs;
                    next[meet[g][k] * qs + u] += c;
                }
            }
        }
        state = next;
    }
    state[index[&1] * qs..(index[&1] + 1) * qs].to_vec()
}

/// `Phi_q` as integer coefficients, constant term first.
fn cyclotomic(q: u64, memo: &mut HashMap<u64, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&q) {
        return p.clone();
    }
    // x^q - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i64; q as usize + 1];
    num[0] = -1;
    num[q as usize] = 1;
    for d in divisors(q).into_iter().filter(|&d| d < q) {
        let den = cyclotomic(d, memo);
        let dd = den.len() - 1;
        let mut quot = vec![0i64; num.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = num[i + dd];
            quot[i] = c;
            for (j, &dj) in den.iter().enumerate() {
                num[i + j] -= c * dj;
            }
        }
        debug_assert!(num.iter().all(|&c| c == 0));
        num = quot;
    }
    memo.insert(q, num.clone());
    num
}

/// Exact value of `sum_t h_t zeta_q^t`, which must be an integer.
fn reduce_to_integer(hist: &[u64], q: u64) -> Result<i128> {
    let phi = cyclotomic(q, &mut HashMap::new());
    let deg = phi.len() - 1;
    let mut poly: Vec<i128> = hist.iter().map(|&c| c as i128).collect();
    for i in (deg..poly.len()).rev() {
        let c = poly[i];
        if c == 0 {
            continue;
        }
        for (j, &pj) in phi.iter().enumerate() {
            poly[i - deg + j] = poly[i - deg + j]
                .checked_sub(c * pj as i128)
                .ok_or_else(|| Error::InvalidParameter("cyclotomic reduction overflow".into()))?;
        }
    }
    if poly[1..deg.max(1)].iter().any(|&c| c != 0) {
        return Err(Error::NonRealSum { imag: f64::NAN });
    }
    Ok(poly[0])
}

/// `c_q(m)` by the defining sum, reduced exactly in `Z[zeta_q]`.
pub fn ramanujan_bruteforce_exact(m: &[i64], q: u64) -> Result<i128> {
    check_modulus(m, q)?;
    if q > EXACT_MODULUS_MAX {
        return Err(Error::InvalidParameter(format!(
            "exact reduction limited to q <= {EXACT_MODULUS_MAX}"
        )));
    }
    reduce_to_integer(&primitive_histogram(m, q), q)
}

/// `c_q(m)` by the defining sum: exact for `q <= 1000`, otherwise a float sum
/// of the residue histogram against `e(t / q)`.
pub fn ramanujan_bruteforce(m: &[i64], q: u64) -> Result<Complex64> {
    check_modulus(m, q)?;
    if q <= EXACT_MODULUS_MAX {
        return Ok(Complex64::new(ramanujan_bruteforce_exact(m, q)? as f64, 0.0));
    }
    let hist = primitive_histogram(m, q);
    let total: f64 = hist.iter().map(|&c| c as f64).sum();
    let z: Complex64 = hist
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(t, &c)| Complex64::from_polar(c as f64, 2.0 * std::f64::consts::PI * t as f64 / q as f64))
        .sum();
    if z.im.abs() > 1e-9 * total.max(1.0) {
        return Err(Error::NonRealSum { imag: z.im });
    }
    Ok(Complex64::new(z.re, 0.0))
}

fn check_modulus(m: &[i64], q: u64) -> Result<()> {
    if q == 0 {
        return Err(Error::InvalidParameter("q must be positive".into()));
    }
    if m.is_empty() {
        return Err(Error::InvalidParameter("frequency vector has no entries".into()));
    }
    Ok(())
}

/// `c_q(m) = prod_{p^r || q} c_{p^r}(m)` with `g = gcd(m)`:
/// `p^{(r-1)n}(p^n - 1)` if `p^r | g`, `-p^{(r-1)n}` if `p^{r-1} || g`, and `0`
/// when `p^{r-1}` does not divide `g` (only possible for `r >= 2`).
pub fn ramanujan_formula(m: &[i64], q: u64) -> Result<BigInt> {
    check_modulus(m, q)?;
    let g = gcd_of(m);
    if g.is_zero() {
        return Err(Error::ZeroFrequency);
    }
    let n = m.len() as u32;
    let mut out = BigInt::one();
    for (p, r) in factorize(q) {
        let pb = BigInt::from(p);
        let mut v = 0;
        let mut rest = g.clone();
        while v < r && (&rest % &pb).is_zero() {
            rest /= &pb;
            v += 1;
        }
        let base: BigInt = Pow::pow(&pb, (r - 1) * n);
        let local = if v >= r {
            &base * (Pow::pow(&pb, n) - 1)
        } else if v == r - 1 {
            -base
        } else {
            BigInt::zero()
        };
        out *= local;
    }
    Ok(out)
}

/// `gcd(m)^n`, the bound on `|c_q(m)|`.
pub fn ramanujan_bound(m: &[i64]) -> BigInt {
    Pow::pow(&gcd_of(m), m.len() as u32)
}

/// Number of `k in [1, q]^n` with `gcd(k_1, .., k_n, q) = 1` (Jordan's totient).
pub fn jordan_count(n: u32, q: u64) -> BigInt {
    let out = factorize(q).into_iter().fold(BigInt::one(), |acc, (p, r)| {
        let pb = BigInt::from(p);
        acc * Pow::pow(&pb, (r - 1) * n) * (Pow::pow(&pb, n) - 1)
    });
    debug_assert!(
        q > 200 || n > 3 || out == BigInt::from(jordan_count_bruteforce(n, q)),
        "totient formula disagrees with enumeration at q = {q}"
    );
    out
}

/// The same count by enumeration.
pub fn jordan_count_bruteforce(n: u32, q: u64) -> u64 {
    primitive_histogram(&vec![0; n as usize], q).iter().sum()
}

/// `(argmin, min)` of `phi_q / q^{n-1}` over `1 <= q <= q_max`.
pub fn jordan_ratio_min(n: u32, q_max: u64) -> (u64, f64) {
    (1..=q_max)
        .map(|q| {
            let phi = jordan_count(n, q);
            let ratio = num_traits::ToPrimitive::to_f64(&phi).unwrap_or(f64::INFINITY)
                / (q as f64).powi(n as i32 - 1);
            (q, ratio)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((1, 1.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RamanujanRow {
    pub q: u64,
    pub m: Vec<i64>,
    pub brute: i128,
    pub formula: BigInt,
    pub bound: BigInt,
}

impl RamanujanRow {
    pub fn matches(&self) -> bool {
        BigInt::from(self.brute) == self.formula
    }

    pub fn within_bound(&self) -> bool {
        BigInt::from(self.brute).abs() <= self.bound
    }

    pub fn csv_header(n: usize) -> String {
        let ms: Vec<String> = (1..=n).map(|i| format!("m{i}")).collect();
        format!("q,{},c_brute,c_formula,bound", ms.join(","))
    }

    pub fn to_csv_line(&self) -> String {
        let mut s = format!("{}", self.q);
        for x in &self.m {
            let _ = write!(s, ",{x}");
        }
        let _ = write!(s, ",{},{},{}", self.brute, self.formula, self.bound);
        s
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RamanujanSummary {
    pub rows: usize,
    pub mismatches: usize,
    pub bound_violations: usize,
    /// Distinct brute-force evaluations after symmetry reduction.
    pub evaluations: usize,
}

/// Brute force against the formula for all `1 <= q <= q_max` and nonzero
/// `m in [-m_max, m_max]^n`, streaming each row to `visit`.
///
/// `c_q(m)` depends on `m` only through the multiset of `min(m_i mod q,
/// -m_i mod q)` (flip `k_i -> q - k_i`, permute coordinates), so the
/// defining sum is evaluated once per such class.
pub fn ramanujan_verify(
    n: usize,
    q_max: u64,
    m_max: i64,
    mut visit: impl FnMut(&RamanujanRow),
) -> Result<RamanujanSummary> {
    if n == 0 || m_max < 0 {
        return Err(Error::InvalidParameter("need n >= 1 and m_max >= 0".into()));
    }
    let mut summary = RamanujanSummary::default();
    let side = (2 * m_max + 1) as usize;
    for q in 1..=q_max {
        let mut cache: HashMap<Vec<i64>, i128> = HashMap::new();
        for idx in 0..side.pow(n as u32) {
            let m: Vec<i64> = (0..n)
                .map(|i| (idx / side.pow((n - 1 - i) as u32) % side) as i64 - m_max)
                .collect();
            if m.iter().all(|&x| x == 0) {
                continue;
            }
            let qi = q as i64;
            let mut key: Vec<i64> = m
                .iter()
                .map(|&x| {
                    let r = x.rem_euclid(qi);
                    r.min(qi - r)
                })
                .collect();
            key.sort_unstable();
            let brute = match cache.get(&key) {
                Some(&v) => v,
                None => {
                    let v = ramanujan_bruteforce_exact(&key, q)?;
                    cache.insert(key, v);
                    summary.evaluations += 1;
                    v
                }
            };
            let row = RamanujanRow {
                q,
                formula: ramanujan_formula(&m, q)?,
                bound: ramanujan_bound(&m),
                m,
                brute,
            };
            summary.rows += 1;
            summary.mismatches += usize::from(!row.matches());
            summary.bound_violations += usize::from(!row.within_bound());
            visit(&row);
        }
    }
    Ok(summary)
}
