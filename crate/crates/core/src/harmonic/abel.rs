use rand::Rng;

use crate::error::{Error, Result};

/// Nonnegative integers `s_2, s_3, ..` whose partial sums obey
/// `S_b <= min(k b^{n+1}, k^2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibleSequence {
    pub k: u64,
    pub n: u32,
    pub r: f64,
    /// `s[i]` is `s_{i+2}`.
    pub s: Vec<u64>,
}

fn cap(k: u64, n: u32, b: u64) -> u128 {
    let h = (b as u128)
        .checked_pow(n + 1)
        .and_then(|p| p.checked_mul(k as u128))
        .unwrap_or(u128::MAX);
    h.min(k as u128 * k as u128)
}

impl AdmissibleSequence {
    pub fn new(k: u64, n: u32, r: f64, s: Vec<u64>) -> Result<AdmissibleSequence> {
        if !(r > 1.0) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!("need r > 1, got {r}")));
        }
        let mut partial = 0u128;
        for (i, &x) in s.iter().enumerate() {
            let b = i as u64 + 2;
            partial += x as u128;
            let c = cap(k, n, b);
            if partial > c {
                return Err(Error::InadmissibleSequence {
                    b: b as usize,
                    partial,
                    cap: c,
                });
            }
        }
        Ok(AdmissibleSequence { k, n, r, s })
    }

    /// A random admissible sequence of `len` terms. Each term takes a random
    /// share of the room left under the cap; with probability 1/3 the
    /// sequence is instead kept tight, filling the room at every step.
    pub fn random(k: u64, n: u32, r: f64, len: usize, rng: &mut impl Rng) -> Result<AdmissibleSequence> {
        let tight = rng.gen_bool(1.0 / 3.0);
        let mut partial = 0u128;
        let mut s = Vec::with_capacity(len);
        for i in 0..len {
            let room = cap(k, n, i as u64 + 2) - partial;
            let x = if tight || room == 0 {
                room
            } else {
                rng.gen_range(0..=room)
            };
            partial += x;
            s.push(x as u64);
        }
        AdmissibleSequence::new(k, n, r, s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbelBound {
    /// `sum_b s_b b^{-r}`.
    pub lhs: f64,
    /// `sum_{b=2}^{B} r k b^{n-r} + k^{2 - r/(n+1)}` with `B = floor(k^{1/(n+1)})`.
    pub majorant: f64,
    /// The same chain without the factor `r` and with `2 k^{2 - r/(n+1)}`.
    pub literal_majorant: f64,
}

impl AbelBound {
    pub fn holds(&self) -> bool {
        self.lhs <= self.majorant
    }

    pub fn literal_holds(&self) -> bool {
        self.lhs <= self.literal_majorant
    }
}

/// Largest `B` with `B^{e} <= k`.
fn int_root(k: u64, e: u32) -> u64 {
    let mut b = (k as f64).powf(1.0 / e as f64) as u64;
    while b > 0 && (b as u128).checked_pow(e).is_none_or(|p| p > k as u128) {
        b -= 1;
    }
    while ((b + 1) as u128).checked_pow(e).is_some_and(|p| p <= k as u128) {
        b += 1;
    }
    b
}

/// Evaluates both sides of the summation-by-parts chain
/// `sum s_b b^{-r} = sum S_b (b^{-r} - (b+1)^{-r})`, split at `B`: below it
/// each difference is at most `r b^{-r-1}` and `S_b <= k b^{n+1}`; above it
/// the tail telescopes to at most `k^2 (B+1)^{-r} < k^{2 - r/(n+1)}`.
pub fn abel_tail_bound(seq: &AdmissibleSequence) -> AbelBound {
    let AdmissibleSequence { k, n, r, .. } = *seq;
    let lhs = seq
        .s
        .iter()
        .enumerate()
        .map(|(i, &x)| x as f64 * ((i + 2) as f64).powf(-r))
        .sum();
    let kf = k as f64;
    let big_b = int_root(k, n + 1);
    let head: f64 = (2..=big_b).map(|b| kf * (b as f64).powf(n as f64 - r)).sum();
    let tail = kf.powf(2.0 - r / (n as f64 + 1.0));
    AbelBound {
        lhs,
        majorant: r * head + tail,
        literal_majorant: head + 2.0 * tail,
    }
}
