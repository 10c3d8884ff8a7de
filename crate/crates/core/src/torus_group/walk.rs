use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::matrix::IntMatrix;
use crate::error::{Error, Result};
use crate::geometry::{Coords, Point};

/// Cesàro statistics of a random walk on the finite orbit of a rational point.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkReport {
    /// Common denominator of the starting point.
    pub q: i64,
    /// Orbit of the numerator vector in `(Z/q)^n`, breadth-first from `x`.
    pub orbit: Vec<Vec<i64>>,
    /// Visits per orbit element, summed over trials.
    pub counts: Vec<u64>,
    pub steps: u64,
    pub trials: u64,
    /// Total variation distance of the empirical law to orbit-uniform.
    pub tv: f64,
    /// `(horizon, tv)` at doubling horizons `1, 2, 4, ...` and at `steps`.
    pub tv_by_horizon: Vec<(u64, f64)>,
}

fn apply_mod(m: &[i64], n: usize, q: i64, v: &[i64]) -> Vec<i64> {
    (0..n)
        .map(|i| {
            let s: i128 = (0..n).map(|j| m[i * n + j] as i128 * v[j] as i128).sum();
            s.rem_euclid(q as i128) as i64
        })
        .collect()
}

/// Orbit of `v` in `(Z/q)^n` under the matrices (given mod `q`).
pub fn orbit_closure(v: &[i64], q: i64, gens_mod_q: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = v.len();
    let mut seen: HashSet<Vec<i64>> = HashSet::from([v.to_vec()]);
    let mut out = vec![v.to_vec()];
    let mut queue = VecDeque::from([v.to_vec()]);
    while let Some(u) = queue.pop_front() {
        for g in gens_mod_q {
            let w = apply_mod(g, n, q, &u);
            if seen.insert(w.clone()) {
                out.push(w.clone());
                queue.push_back(w);
            }
        }
    }
    out
}

fn tv_uniform(counts: &[u64], total: u64) -> f64 {
    let u = 1.0 / counts.len() as f64;
    0.5 * counts
        .iter()
        .map(|&c| (c as f64 / total as f64 - u).abs())
        .sum::<f64>()
}

/// Runs `trials` independent walks `Y_{j+1} = g^{-1} Y_j`, `g ~ nu`, from the
/// rational point `x` and compares the Cesàro average of steps `1..=steps`
/// with the uniform law on the exact orbit of `x`.
///
/// Each trial draws from its own stream of a generator seeded by `seed`.
pub fn walk_equidistribution(
    x: &Point,
    gens: &[IntMatrix],
    weights: &[f64],
    steps: u64,
    trials: u64,
    seed: u64,
) -> Result<WalkReport> {
    let Coords::Exact(coords) = x.coords() else {
        return Err(Error::RequiresExact);
    };
    let n = coords.len();
    if gens.is_empty() || gens.iter().any(|g| g.dim() != n) {
        return Err(Error::InvalidParameter("generators must match the point dimension".into()));
    }
    if weights.len() != gens.len() || weights.iter().any(|&w| !(w > 0.0)) {
        return Err(Error::InvalidParameter("need one positive weight per generator".into()));
    }
    if steps == 0 || trials == 0 {
        return Err(Error::InvalidParameter("steps and trials must be positive".into()));
    }
    let q_big = coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let q = q_big
        .to_i64()
        .filter(|&q| q < 1 << 31)
        .ok_or_else(|| Error::InvalidParameter(format!("denominator {q_big} too large")))?;
    let start: Vec<i64> = coords
        .iter()
        .map(|c| (c * BigInt::from(q)).to_integer().to_i64().expect("below q"))
        .collect();
    let gens_q: Vec<Vec<i64>> = gens.iter().map(|g| g.mod_q(q)).collect();
    let inv_q: Vec<Vec<i64>> = gens.iter().map(|g| g.inverse().mod_q(q)).collect();
    let mut closure_gens = gens_q.clone();
    closure_gens.extend(inv_q.iter().cloned());
    let orbit = orbit_closure(&start, q, &closure_gens);
    let index: HashMap<&[i64], usize> = orbit
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_slice(), i))
        .collect();

    let mut horizons: Vec<u64> = std::iter::successors(Some(1u64), |h| h.checked_mul(2))
        .take_while(|&h| h < steps)
        .collect();
    horizons.push(steps);
    let mut snapshots = vec![vec![0u64; orbit.len()]; horizons.len()];
    let mut counts = vec![0u64; orbit.len()];
    let dist = WeightedIndex::new(weights).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let mut visits = vec![0u64; orbit.len()];
        let mut y = start.clone();
        let mut h = 0;
        for step in 1..=steps {
            y = apply_mod(&inv_q[dist.sample(&mut rng)], n, q, &y);
            visits[index[y.as_slice()]] += 1;
            if step == horizons[h] {
                for (s, v) in snapshots[h].iter_mut().zip(&visits) {
                    *s += v;
                }
                h += 1;
            }
        }
        for (c, v) in counts.iter_mut().zip(&visits) {
            *c += v;
        }
    }
    let tv = tv_uniform(&counts, steps * trials);
    let tv_by_horizon = horizons
        .iter()
        .zip(&snapshots)
        .map(|(&h, s)| (h, tv_uniform(s, h * trials)))
        .collect();
    Ok(WalkReport {
        q,
        orbit,
        counts,
        steps,
        trials,
        tv,
        tv_by_horizon,
    })
}
