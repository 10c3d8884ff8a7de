//! `SL(n, Z)` acting on `T^n`: word balls and the ε-dense search, pair
//! statistics, random walks on rational points, and commuting toral
//! automorphisms with their Lyapunov data.

mod abelian;
mod matrix;
mod walk;

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geometry::{
    frac_exact, frac_f64, torus_gap_upper, Coords, GapOptions, Point, PointSet, Space,
};

pub use abelian::{
    chi_density_search, lyapunov_data, subordinate_search_eps_dense, AbelianAction, LeafSet,
    SubordinateSearch, GENERAL_POSITION_TOL, ROOT_OF_UNITY_MAX_ORDER,
};
pub use matrix::{standard_generators, with_inverses, IntMatrix};
pub use walk::{orbit_closure, walk_equidistribution, WalkReport};

fn torus_dim(space: Space) -> Option<usize> {
    match space {
        Space::Torus(n) => Some(n),
        Space::Circle => Some(1),
        Space::Interval => None,
    }
}

fn check_dims(gamma: &IntMatrix, space: Space) -> Result<usize> {
    let n = torus_dim(space).ok_or(Error::SpaceMismatch)?;
    if n != gamma.dim() {
        return Err(Error::DimensionMismatch {
            expected: gamma.dim(),
            got: n,
        });
    }
    Ok(n)
}

/// `gamma x mod Z^n`.
pub fn act(gamma: &IntMatrix, x: &Point) -> Result<Point> {
    let n = check_dims(gamma, x.space())?;
    match x.coords() {
        Coords::Exact(v) => Point::exact(x.space(), act_exact_row(gamma, n, v)),
        Coords::Float(v) => Point::float(x.space(), act_f64_row(&gamma.to_f64(), n, v)),
    }
}

/// `gamma A`, point by point (not deduplicated).
pub fn act_set(gamma: &IntMatrix, a: &PointSet) -> Result<PointSet> {
    let n = check_dims(gamma, a.space())?;
    match a.coords() {
        Coords::Exact(v) => {
            let out = v.chunks(n).flat_map(|row| act_exact_row(gamma, n, row)).collect();
            PointSet::exact(a.space(), out)
        }
        Coords::Float(v) => {
            let g = gamma.to_f64();
            let out = v.chunks(n).flat_map(|row| act_f64_row(&g, n, row)).collect();
            PointSet::float(a.space(), out)
        }
    }
}

fn act_exact_row(gamma: &IntMatrix, n: usize, x: &[BigRational]) -> Vec<BigRational> {
    (0..n)
        .map(|i| {
            let s = (0..n).fold(BigRational::zero(), |acc, j| {
                acc + BigRational::from_integer(gamma.entry(i, j).clone()) * &x[j]
            });
            frac_exact(&s)
        })
        .collect()
}

fn act_f64_row(g: &[f64], n: usize, x: &[f64]) -> Vec<f64> {
    (0..n)
        .map(|i| {
            // reduce each product first to limit cancellation with large entries
            let s: f64 = (0..n).map(|j| frac_f64(g[i * n + j] * x[j])).sum();
            frac_f64(s)
        })
        .collect()
}

/// Elements of word length at most `radius`, in breadth-first order.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupBall {
    pub generators: Vec<IntMatrix>,
    pub radius: usize,
    pub elements: Vec<IntMatrix>,
    pub word_lengths: Vec<usize>,
    /// Elements whose largest entry exceeds the entry cap; kept, but flagged.
    pub oversized: usize,
}

impl GroupBall {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, m: &IntMatrix) -> bool {
        self.elements.contains(m)
    }

    /// One matrix per line, row-major.
    pub fn export(&self) -> String {
        let mut s = String::new();
        for m in &self.elements {
            let _ = writeln!(s, "{m}");
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallOptions {
    pub budget: usize,
    pub entry_cap: u64,
}

impl Default for BallOptions {
    fn default() -> Self {
        BallOptions {
            budget: 1 << 20,
            entry_cap: 1 << 20,
        }
    }
}

/// Breadth-first enumeration of the ball of radius `radius`.
///
/// Generators are used as given (pass them through [`with_inverses`] for a
/// symmetric set). Exceeding the budget returns the partial ball inside the error.
pub fn enumerate_ball(generators: &[IntMatrix], radius: usize, opts: &BallOptions) -> Result<GroupBall> {
    let n = generators
        .first()
        .map(IntMatrix::dim)
        .ok_or_else(|| Error::InvalidParameter("no generators".into()))?;
    if generators.iter().any(|g| g.dim() != n) {
        return Err(Error::InvalidParameter("generators of mixed dimension".into()));
    }
    let cap = BigInt::from(opts.entry_cap);
    let mut ball = GroupBall {
        generators: generators.to_vec(),
        radius,
        elements: vec![IntMatrix::identity(n)],
        word_lengths: vec![0],
        oversized: 0,
    };
    let mut seen: HashMap<IntMatrix, usize> = HashMap::new();
    seen.insert(IntMatrix::identity(n), 0);
    let mut frontier = 0..1;
    for r in 1..=radius {
        let start = ball.elements.len();
        for idx in frontier.clone() {
            for g in generators {
                let m = ball.elements[idx].mul(g);
                if seen.contains_key(&m) {
                    continue;
                }
                if ball.elements.len() >= opts.budget {
                    return Err(Error::BallBudgetExceeded {
                        budget: opts.budget,
                        partial: Box::new(ball),
                    });
                }
                if m.max_abs_entry() > cap {
                    ball.oversized += 1;
                }
                seen.insert(m.clone(), ball.elements.len());
                ball.elements.push(m);
                ball.word_lengths.push(r);
            }
        }
        frontier = start..ball.elements.len();
    }
    Ok(ball)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchHit {
    pub index: usize,
    pub word_length: usize,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsSearch {
    pub found: Option<SearchHit>,
    pub best: SearchHit,
    pub checked: usize,
}

/// First ball element, in enumeration order, whose image of `A` has grid
/// gap estimate below `eps`.
pub fn search_eps_dense(a: &PointSet, eps: f64, ball: &GroupBall, opts: &GapOptions) -> Result<EpsSearch> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    let mut best: Option<SearchHit> = None;
    for (index, gamma) in ball.elements.iter().enumerate() {
        let gap = torus_gap_upper(&act_set(gamma, a)?, opts)?.estimate;
        let hit = SearchHit {
            index,
            word_length: ball.word_lengths[index],
            gap,
        };
        if best.as_ref().is_none_or(|b| gap < b.gap) {
            best = Some(hit.clone());
        }
        if gap < eps {
            return Ok(EpsSearch {
                found: Some(hit),
                best: best.expect("set above"),
                checked: index + 1,
            });
        }
    }
    Ok(EpsSearch {
        found: None,
        best: best.ok_or(Error::EmptySet)?,
        checked: ball.len(),
    })
}

/// Least `q >= 1` with `q (x - y) ∈ Z^n`: the lcm of the reduced
/// denominators of the coordinate differences.
pub fn rational_difference_order(x: &Point, y: &Point) -> Result<BigInt> {
    if x.space() != y.space() {
        return Err(Error::SpaceMismatch);
    }
    match (x.coords(), y.coords()) {
        (Coords::Exact(a), Coords::Exact(b)) => Ok(a
            .iter()
            .zip(b)
            .fold(BigInt::one(), |acc, (u, v)| acc.lcm(frac_exact(&(u - v)).denom()))),
        _ => Err(Error::RequiresExact),
    }
}

/// `h_m = #{(i, j) : m (x_i - x_j) ∈ Z^n}` and `H_m = h_1 + ... + h_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairStats {
    pub k: usize,
    pub n: usize,
    /// `h[m - 1] = h_m`.
    pub h: Vec<u64>,
    /// `cum[m - 1] = H_m`.
    pub cum: Vec<u64>,
}

impl PairStats {
    pub fn h_at(&self, m: usize) -> u64 {
        self.h[m - 1]
    }

    pub fn cum_at(&self, m: usize) -> u64 {
        self.cum[m - 1]
    }

    /// `k m^{n+1}`.
    pub fn bound(&self, m: usize) -> u128 {
        self.k as u128 * (m as u128).pow(self.n as u32 + 1)
    }

    /// First `m` with `H_m > k m^{n+1}`, if any.
    pub fn bound_violation(&self) -> Option<usize> {
        (1..=self.cum.len()).find(|&m| self.cum_at(m) as u128 > self.bound(m))
    }
}

pub fn pair_stats(a: &PointSet, m_max: usize) -> Result<PairStats> {
    let n = torus_dim(a.space()).ok_or(Error::SpaceMismatch)?;
    if !a.is_exact() {
        return Err(Error::RequiresExact);
    }
    let pts: Vec<Point> = a.points().collect();
    let k = pts.len();
    let mut h = vec![k as u64; m_max];
    for i in 0..k {
        for j in i + 1..k {
            let Some(q) = rational_difference_order(&pts[i], &pts[j])?.to_usize() else {
                continue;
            };
            let mut m = q;
            while m <= m_max {
                h[m - 1] += 2;
                m += q;
            }
        }
    }
    let cum = h
        .iter()
        .scan(0u64, |s, &x| {
            *s += x;
            Some(*s)
        })
        .collect();
    Ok(PairStats { k, n, h, cum })
}
