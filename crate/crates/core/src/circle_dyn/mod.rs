//! Circle rotations and dilations, orbit unions, quantitative-density
//! profiles, the minimal-dilation search and the sparse-convergent
//! counterexample set.

mod engine;

use std::cmp::Ordering;
use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::cfrac::{QuadSurd, QuadraticIrrational};
use crate::error::{Error, Result};
use crate::geometry::{
    circle_gap, frac_exact, frac_f64, semimetric_gap, Coords, PointSet, Scalar, Space, FLOAT_TOL,
};

pub(crate) use engine::nested_gaps;

/// Default cap on `|A| * n` for orbit unions.
pub const DEFAULT_ORBIT_CAP: u64 = 1 << 24;

/// `x -> x + alpha (mod 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rotation {
    alpha: Scalar,
}

impl Rotation {
    pub fn new(alpha: Scalar) -> Rotation {
        Rotation {
            alpha: alpha.circle_reduce(),
        }
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    /// `T^k A`, keeping the representation of the inputs.
    pub fn iterate(&self, a: &PointSet, k: u64) -> Result<PointSet> {
        check_circle(a)?;
        match (&self.alpha, a.coords()) {
            (Scalar::Exact(al), Coords::Exact(xs)) => {
                let shift = frac_exact(&(al * BigRational::from_integer(k.into())));
                let out = xs.iter().map(|x| frac_exact(&(x + &shift))).collect();
                PointSet::exact(Space::Circle, out)
            }
            (Scalar::Float(al), Coords::Float(xs)) => {
                let shift = frac_f64(al * k as f64);
                PointSet::float(Space::Circle, xs.iter().map(|x| frac_f64(x + shift)).collect())
            }
            _ => Err(Error::RepresentationMismatch),
        }
    }
}

impl fmt::Display for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rotation by {}", self.alpha)
    }
}

fn check_circle(a: &PointSet) -> Result<()> {
    if a.space() != Space::Circle {
        return Err(Error::SpaceMismatch);
    }
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(())
}

fn check_cap(size: usize, n: u64, cap: u64) -> Result<()> {
    let requested = size as u128 * n as u128;
    if requested > cap as u128 {
        return Err(Error::SizeBudgetExceeded {
            requested,
            cap: cap as u128,
        });
    }
    Ok(())
}

/// `{x + k alpha : x in A, 0 <= k < n}`, deduplicated.
pub fn orbit_union(t: &Rotation, a: &PointSet, n: u64) -> Result<PointSet> {
    orbit_union_capped(t, a, n, DEFAULT_ORBIT_CAP)
}

pub fn orbit_union_capped(t: &Rotation, a: &PointSet, n: u64, cap: u64) -> Result<PointSet> {
    check_circle(a)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    check_cap(a.len(), n, cap)?;
    let set = match (&t.alpha, a.coords()) {
        (Scalar::Exact(al), Coords::Exact(xs)) => {
            let mut out = Vec::with_capacity(xs.len() * n as usize);
            let mut shift = BigRational::zero();
            for _ in 0..n {
                out.extend(xs.iter().map(|x| frac_exact(&(x + &shift))));
                shift = frac_exact(&(shift + al));
            }
            PointSet::exact(Space::Circle, out)?
        }
        (Scalar::Float(al), Coords::Float(xs)) => {
            let mut out = Vec::with_capacity(xs.len() * n as usize);
            for k in 0..n {
                let shift = frac_f64(al * k as f64);
                out.extend(xs.iter().map(|x| frac_f64(x + shift)));
            }
            PointSet::float(Space::Circle, out)?
        }
        _ => return Err(Error::RepresentationMismatch),
    };
    Ok(set.deduplicated(FLOAT_TOL))
}

/// Increasing list of orbit lengths at which a profile is sampled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule(Vec<u64>);

impl Schedule {
    pub const DEFAULT_RATIO: f64 = 1.25;

    pub fn new(ns: Vec<u64>) -> Result<Schedule> {
        if ns.is_empty() || ns[0] == 0 || ns.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "schedule must be a nonempty increasing list of positive integers".into(),
            ));
        }
        Ok(Schedule(ns))
    }

    /// `ceil(ratio^j)` for `j = 0, 1, ...`, capped by `n_max`, which is always included.
    pub fn geometric(n_max: u64, ratio: f64) -> Result<Schedule> {
        if n_max == 0 || !(ratio > 1.0) {
            return Err(Error::InvalidParameter("need n_max >= 1 and ratio > 1".into()));
        }
        let mut ns: Vec<u64> = Vec::new();
        let mut x = 1.0f64;
        while x.ceil() < n_max as f64 {
            let n = x.ceil() as u64;
            if ns.last() != Some(&n) {
                ns.push(n);
            }
            x *= ratio;
        }
        ns.push(n_max);
        Ok(Schedule(ns))
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn max(&self) -> u64 {
        *self.0.last().expect("nonempty")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileRecord {
    pub n: u64,
    pub gap: Scalar,
    pub scaled: Scalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileMeta {
    pub space: Space,
    pub map: String,
    pub set: String,
}

/// `(n, gap, n * gap)` along a schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityProfile {
    pub records: Vec<ProfileRecord>,
    pub meta: ProfileMeta,
}

impl DensityProfile {
    pub(crate) fn from_float_gaps(ns: &[u64], gaps: &[f64], meta: ProfileMeta) -> DensityProfile {
        let records = ns
            .iter()
            .zip(gaps)
            .map(|(&n, &g)| ProfileRecord {
                n,
                gap: Scalar::Float(g),
                scaled: Scalar::Float(n as f64 * g),
            })
            .collect();
        DensityProfile { records, meta }
    }

    fn push(&mut self, n: u64, gap: Scalar) {
        let scaled = gap.mul_int(n as i64);
        self.records.push(ProfileRecord { n, gap, scaled });
    }

    pub fn min_scaled(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.scaled.to_f64())
            .fold(f64::INFINITY, f64::min)
    }

    /// Minimum of `n * gap` over scheduled `n` in `[lo, hi]`.
    pub fn window_min(&self, lo: u64, hi: u64) -> Option<f64> {
        self.records
            .iter()
            .filter(|r| r.n >= lo && r.n <= hi)
            .map(|r| r.scaled.to_f64())
            .reduce(f64::min)
    }

    pub fn scaled_at(&self, n: u64) -> Option<f64> {
        self.records.iter().find(|r| r.n == n).map(|r| r.scaled.to_f64())
    }

    pub fn is_non_increasing(&self) -> bool {
        self.records
            .windows(2)
            .all(|w| w[1].gap.cmp_value(&w[0].gap) != Ordering::Greater)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,gap,scaled\n");
        for r in &self.records {
            let _ = writeln!(s, "{},{},{}", r.n, r.gap, r.scaled);
        }
        s
    }
}

/// `n * d^H(orbit_union(T, A, n), S^1)` along the schedule.
///
/// Float inputs build the full orbit once and read every prefix off a
/// deletion sweep; exact inputs recompute each orbit union exactly.
pub fn qd_profile(t: &Rotation, a: &PointSet, schedule: &Schedule) -> Result<DensityProfile> {
    qd_profile_capped(t, a, schedule, DEFAULT_ORBIT_CAP)
}

pub fn qd_profile_capped(
    t: &Rotation,
    a: &PointSet,
    schedule: &Schedule,
    cap: u64,
) -> Result<DensityProfile> {
    check_circle(a)?;
    let n_max = schedule.max();
    check_cap(a.len(), n_max, cap)?;
    let meta = ProfileMeta {
        space: Space::Circle,
        map: t.to_string(),
        set: format!("{} points", a.len()),
    };
    match (&t.alpha, a.coords()) {
        (Scalar::Float(al), Coords::Float(xs)) => {
            let mut pts = Vec::with_capacity(xs.len() * n_max as usize);
            for k in 0..n_max {
                let shift = frac_f64(al * k as f64);
                pts.extend(xs.iter().map(|x| (frac_f64(x + shift), k)));
            }
            let gaps = nested_gaps(pts, schedule.values(), true);
            Ok(DensityProfile::from_float_gaps(schedule.values(), &gaps, meta))
        }
        (Scalar::Exact(_), Coords::Exact(_)) => {
            let mut profile = DensityProfile {
                records: Vec::new(),
                meta,
            };
            for &n in schedule.values() {
                profile.push(n, circle_gap(&orbit_union_capped(t, a, n, cap)?)?);
            }
            Ok(profile)
        }
        _ => Err(Error::RepresentationMismatch),
    }
}

/// Profile of `d^H(orbit(A1), orbit(A2))` scaled by `n`.
pub fn qd_pair_profile(
    t: &Rotation,
    a1: &PointSet,
    a2: &PointSet,
    schedule: &Schedule,
) -> Result<DensityProfile> {
    check_circle(a1)?;
    check_circle(a2)?;
    let mut profile = DensityProfile {
        records: Vec::new(),
        meta: ProfileMeta {
            space: Space::Circle,
            map: t.to_string(),
            set: format!("pair of {} and {} points", a1.len(), a2.len()),
        },
    };
    for &n in schedule.values() {
        let o1 = orbit_union(t, a1, n)?;
        let o2 = orbit_union(t, a2, n)?;
        profile.push(n, semimetric_gap(&o1, &o2)?);
    }
    Ok(profile)
}

/// `{m x mod 1}`, deduplicated.
pub fn dilate(a: &PointSet, m: u64) -> Result<PointSet> {
    check_circle(a)?;
    let set = match a.coords() {
        Coords::Exact(xs) => {
            let m = BigRational::from_integer(m.into());
            PointSet::exact(Space::Circle, xs.iter().map(|x| frac_exact(&(x * &m))).collect())?
        }
        Coords::Float(xs) => {
            PointSet::float(Space::Circle, xs.iter().map(|x| frac_f64(x * m as f64)).collect())?
        }
    };
    Ok(set.deduplicated(FLOAT_TOL))
}

/// Half the largest arc of `{m x}` for float input, without building a set.
fn dilated_gap_f64(xs: &[f64], m: u64, buf: &mut Vec<f64>) -> f64 {
    buf.clear();
    buf.extend(xs.iter().map(|x| frac_f64(x * m as f64)));
    buf.sort_by(f64::total_cmp);
    crate::geometry::max_circular_gap(buf).0 / 2.0
}

fn dilation_gaps(a: &PointSet, n_max: u64) -> Result<Vec<Scalar>> {
    check_circle(a)?;
    match a.coords() {
        Coords::Float(xs) => {
            let mut buf = Vec::with_capacity(xs.len());
            Ok((1..=n_max)
                .map(|m| Scalar::Float(dilated_gap_f64(xs, m, &mut buf)))
                .collect())
        }
        Coords::Exact(_) => (1..=n_max)
            .map(|m| circle_gap(&dilate(a, m)?))
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DilationSearch {
    /// Least `m` with `gap(mA) < eps`.
    pub found: Option<u64>,
    /// The `m` with the smallest gap seen, and that gap.
    pub best: (u64, Scalar),
}

/// Least `m <= n_max` for which `mA` is `eps`-dense.
pub fn glasner_min_dilation(a: &PointSet, eps: &Scalar, n_max: u64) -> Result<DilationSearch> {
    if a.len() < 2 {
        return Err(Error::InvalidParameter("need at least two points".into()));
    }
    if !eps.is_positive() || n_max == 0 {
        return Err(Error::InvalidParameter("need eps > 0 and n_max >= 1".into()));
    }
    check_circle(a)?;
    let mut best: Option<(u64, Scalar)> = None;
    let mut buf = Vec::new();
    for m in 1..=n_max {
        let gap = match a.coords() {
            Coords::Float(xs) => Scalar::Float(dilated_gap_f64(xs, m, &mut buf)),
            Coords::Exact(_) => circle_gap(&dilate(a, m)?)?,
        };
        if best.as_ref().is_none_or(|(_, g)| gap.lt(g)) {
            best = Some((m, gap.clone()));
        }
        if gap.lt(eps) {
            return Ok(DilationSearch {
                found: Some(m),
                best: best.expect("set above"),
            });
        }
    }
    Ok(DilationSearch {
        found: None,
        best: best.expect("n_max >= 1"),
    })
}

/// Fraction of `m in 1..=n_max` with `mA` `eps`-dense.
pub fn dilation_density_fraction(a: &PointSet, eps: &Scalar, n_max: u64) -> Result<f64> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be positive".into()));
    }
    let gaps = dilation_gaps(a, n_max)?;
    let hits = gaps.iter().filter(|g| g.lt(eps)).count();
    Ok(hits as f64 / n_max as f64)
}

/// Checks `E_n^{-1}(E_n X) = union_k (X + k/n)` exactly.
pub fn preimage_identity_check(x: &PointSet, n: u64) -> Result<bool> {
    check_circle(x)?;
    let xs = x.exact_coords().ok_or(Error::RequiresExact)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let nr = BigRational::from_integer(n.into());
    let nr = &nr;
    let images: Vec<BigRational> = xs.iter().map(|v| frac_exact(&(v * nr))).collect();
    let mut lhs: Vec<BigRational> = images
        .iter()
        .flat_map(|y| (0..n).map(move |j| (y + BigRational::from_integer(j.into())) / nr))
        .collect();
    let mut rhs: Vec<BigRational> = xs
        .iter()
        .flat_map(|v| (0..n).map(move |k| frac_exact(&(v + BigRational::new(k.into(), n.into())))))
        .collect();
    for side in [&mut lhs, &mut rhs] {
        side.sort();
        side.dedup();
    }
    Ok(lhs == rhs)
}

/// Number of distinct consecutive-gap lengths of a circle point set,
/// lengths within `tol` of each other counted once.
pub fn distinct_gap_lengths(a: &PointSet, tol: f64) -> usize {
    let mut xs = a.coords().to_f64_vec();
    if xs.len() < 2 {
        return 1;
    }
    xs.sort_by(f64::total_cmp);
    let mut gaps: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.push(xs[0] + 1.0 - xs[xs.len() - 1]);
    gaps.sort_by(f64::total_cmp);
    let mut count = 1;
    let mut anchor = gaps[0];
    for &g in &gaps[1..] {
        if g - anchor > tol {
            count += 1;
            anchor = g;
        }
    }
    count
}

/// Exact `d^H({i alpha : 0 <= i < n}, S^1)` for a quadratic irrational.
pub fn quadratic_orbit_gap(alpha: &QuadraticIrrational, n: u64) -> Result<QuadSurd> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let base = alpha.value().fract();
    let mut pts: Vec<(f64, QuadSurd)> = (0..n)
        .map(|i| {
            let x = base.mul_int(&BigInt::from(i)).fract();
            (x.to_f64(), x)
        })
        .collect();
    // float order first; the exact pass is then nearly linear
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.sort_by(|a, b| a.1.cmp(&b.1));
    let one = BigInt::one();
    let mut widest = pts[0].1.add_int(&one).sub(&pts[pts.len() - 1].1);
    for w in pts.windows(2) {
        let g = w[1].1.sub(&w[0].1);
        if g > widest {
            widest = g;
        }
    }
    Ok(widest.div_int(&BigInt::from(2)))
}

/// How far apart consecutive chosen convergent scales must be.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GrowthRule {
    /// `q_{next} >= q^2`.
    Square,
    /// `q_{next} >= q^e`.
    Power(f64),
    /// `log log log q_{next} >= q`.
    TripleExp,
}

impl GrowthRule {
    /// Natural log of the smallest admissible next denominator.
    fn min_log(self, q: &BigInt) -> f64 {
        let lq = big_ln(q);
        match self {
            GrowthRule::Square => 2.0 * lq,
            GrowthRule::Power(e) => e * lq,
            GrowthRule::TripleExp => q.to_f64().unwrap_or(f64::INFINITY).exp().exp(),
        }
    }
}

impl fmt::Display for GrowthRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthRule::Square => write!(f, "q^2"),
            GrowthRule::Power(e) => write!(f, "q^{e}"),
            GrowthRule::TripleExp => write!(f, "exp(exp(exp(q)))"),
        }
    }
}

/// Largest denominator (in bits) the builder will walk to.
pub const COUNTEREXAMPLE_MAX_BITS: u64 = 1 << 16;

fn big_ln(q: &BigInt) -> f64 {
    let bits = q.bits();
    let shift = bits.saturating_sub(64);
    let top = (q >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `{||q_{n_k} alpha||} ∪ {0}` for a sparse subsequence of convergents.
#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleSet {
    pub alpha: QuadraticIrrational,
    pub indices: Vec<usize>,
    pub denominators: Vec<BigInt>,
    /// `||q_{n_k} alpha||`, exact and strictly decreasing.
    pub distances: Vec<QuadSurd>,
    pub points: PointSet,
    pub growth_rule: GrowthRule,
}

impl CounterexampleSet {
    /// One line `a,b,d` per point, meaning `a + b sqrt(d)`, starting with 0.
    pub fn to_csv(&self) -> String {
        let d = self.alpha.value().radicand().clone();
        let mut s = format!("a,b,d\n0/1,0/1,{d}\n");
        for x in &self.distances {
            let _ = writeln!(s, "{x}");
        }
        s
    }
}

/// Greedy choice of `depth` convergent indices under `growth`.
///
/// The first index is the first convergent with `q > 1`; each later one is the
/// first whose denominator satisfies the rule and whose distance decreases.
pub fn build_counterexample(
    alpha: &QuadraticIrrational,
    growth: GrowthRule,
    depth: usize,
) -> Result<CounterexampleSet> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    let value = alpha.value();
    let max_log = COUNTEREXAMPLE_MAX_BITS as f64 * std::f64::consts::LN_2;
    let (mut q2, mut q1) = (BigInt::one(), BigInt::zero());
    let mut indices = Vec::new();
    let mut denominators: Vec<BigInt> = Vec::new();
    let mut distances: Vec<QuadSurd> = Vec::new();
    let mut need = 0.0f64;
    for (k, a) in alpha.quotients().enumerate() {
        let q = &a * &q1 + &q2;
        q2 = std::mem::replace(&mut q1, q.clone());
        if indices.is_empty() && q <= BigInt::one() {
            continue;
        }
        if need > max_log {
            return Err(Error::DepthUnreachable {
                rule: growth.to_string(),
                depth: indices.len() + 1,
            });
        }
        if big_ln(&q) < need {
            continue;
        }
        let dist = value.mul_int(&q).dist_to_integer();
        if dist.is_zero() || distances.last().is_some_and(|last| dist >= *last) {
            continue;
        }
        need = growth.min_log(&q);
        indices.push(k);
        denominators.push(q);
        distances.push(dist);
        if indices.len() == depth {
            break;
        }
    }
    let mut pts = vec![0.0];
    pts.extend(distances.iter().map(QuadSurd::to_f64));
    let points = PointSet::float(Space::Circle, pts)?;
    Ok(CounterexampleSet {
        alpha: alpha.clone(),
        indices,
        denominators,
        distances,
        points,
        growth_rule: growth,
    })
}
