//! Three-interval exchange transformations as induced maps of a rotation on
//! a longer interval.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::circle_dyn::{nested_gaps, DensityProfile, ProfileMeta, Schedule, DEFAULT_ORBIT_CAP};
use crate::error::{Error, Result};
use crate::geometry::{interval_gap, Coords, PointSet, Scalar, Space};

/// `P_{alpha,beta}` on `[0, 1]`, `0 < alpha < beta < 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeIET {
    alpha: Scalar,
    beta: Scalar,
}

impl ThreeIET {
    pub fn new(alpha: Scalar, beta: Scalar) -> Result<ThreeIET> {
        if alpha.is_exact() != beta.is_exact() {
            return Err(Error::RepresentationMismatch);
        }
        let zero = Scalar::integer(0);
        let one = Scalar::integer(1);
        let ordered = |a: &Scalar, b: &Scalar| a.lt(b);
        if !(ordered(&zero.to_like(&alpha), &alpha)
            && ordered(&alpha, &beta)
            && ordered(&beta, &one.to_like(&beta)))
        {
            return Err(Error::InvalidParameter(format!(
                "need 0 < alpha < beta < 1, got alpha = {alpha}, beta = {beta}"
            )));
        }
        Ok(ThreeIET { alpha, beta })
    }

    /// Parameters from two numbers in `[0, 1)`: `l = beta - alpha = u`,
    /// `alpha = v (1 - l)`, i.e. uniform in the pair `(alpha, l)`.
    pub fn from_uniform(u: f64, v: f64) -> Result<ThreeIET> {
        let l = u;
        let alpha = v * (1.0 - l);
        ThreeIET::new(Scalar::float(alpha)?, Scalar::float(alpha + l)?)
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    pub fn beta(&self) -> &Scalar {
        &self.beta
    }

    pub fn is_exact(&self) -> bool {
        self.alpha.is_exact()
    }

    pub fn apply(&self, x: &Scalar) -> Result<Scalar> {
        match (&self.alpha, &self.beta, x) {
            (Scalar::Exact(a), Scalar::Exact(b), Scalar::Exact(x)) => {
                Ok(Scalar::Exact(apply_exact(a, b, x)?))
            }
            (Scalar::Float(a), Scalar::Float(b), Scalar::Float(x)) => {
                Ok(Scalar::Float(apply_f64(*a, *b, *x)?))
            }
            _ => Err(Error::RepresentationMismatch),
        }
    }

    /// Whether `x` is one of the discontinuities `alpha`, `beta`.
    pub fn is_discontinuity(&self, x: &Scalar) -> bool {
        x == &self.alpha || x == &self.beta
    }

    /// The three branches as `(domain, image)` with intervals `[start, end)`.
    pub fn branches(&self) -> Result<[((BigRational, BigRational), (BigRational, BigRational)); 3]> {
        let a = self.alpha.to_exact()?;
        let b = self.beta.to_exact()?;
        let one = BigRational::one();
        let zero = BigRational::zero();
        let image = |lo: &BigRational, hi: &BigRational| -> Result<(BigRational, BigRational)> {
            // branches are translations, so the image of [lo, hi) is [P(lo), P(lo) + hi - lo)
            let start = apply_exact(&a, &b, lo)?;
            let end = &start + (hi - lo);
            Ok((start, end))
        };
        Ok([
            ((zero.clone(), a.clone()), image(&zero, &a)?),
            ((a.clone(), b.clone()), image(&a, &b)?),
            ((b.clone(), one.clone()), image(&b, &one)?),
        ])
    }
}

impl fmt::Display for ThreeIET {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "3-IET alpha={} beta={}", self.alpha, self.beta)
    }
}

trait LikeRepr {
    fn to_like(&self, other: &Scalar) -> Scalar;
}

impl LikeRepr for Scalar {
    fn to_like(&self, other: &Scalar) -> Scalar {
        if other.is_exact() {
            self.clone()
        } else {
            self.to_float()
        }
    }
}

fn out_of_domain(x: String) -> Error {
    Error::OutOfDomain {
        value: x,
        space: "[0, 1]".into(),
    }
}

fn apply_exact(a: &BigRational, b: &BigRational, x: &BigRational) -> Result<BigRational> {
    let one = BigRational::one();
    if x < &BigRational::zero() || x > &one {
        return Err(out_of_domain(x.to_string()));
    }
    Ok(if x < a {
        x + one - a
    } else if x < b {
        x + one - a - b
    } else {
        x - b
    })
}

fn apply_f64(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(out_of_domain(x.to_string()));
    }
    Ok(if x < a {
        x + 1.0 - a
    } else if x < b {
        x + 1.0 - a - b
    } else {
        x - b
    })
}

/// The translation `y -> y + rot (mod length)` on `[0, length)` whose
/// first return to the unit interval is the 3-IET.
#[derive(Clone, Debug, PartialEq)]
pub struct SuspensionRotation {
    pub length: Scalar,
    pub rot: Scalar,
}

/// A 3-IET needs at most two steps; more means an arithmetic fault.
pub const MAX_RETURN_STEPS: usize = 10;

impl SuspensionRotation {
    pub fn from_iet(p: &ThreeIET) -> SuspensionRotation {
        match (&p.alpha, &p.beta) {
            (Scalar::Exact(a), Scalar::Exact(b)) => SuspensionRotation {
                length: Scalar::Exact(BigRational::one() + b - a),
                rot: Scalar::Exact(BigRational::one() - a),
            },
            _ => {
                let (a, b) = (p.alpha.to_f64(), p.beta.to_f64());
                SuspensionRotation {
                    length: Scalar::Float(1.0 + b - a),
                    rot: Scalar::Float(1.0 - a),
                }
            }
        }
    }

    /// Rotation number `rot / length`.
    pub fn rotation_number(&self) -> f64 {
        self.rot.to_f64() / self.length.to_f64()
    }

    pub fn step(&self, y: &Scalar) -> Result<Scalar> {
        let z = y.checked_add(&self.rot)?;
        if z.lt(&self.length) {
            Ok(z)
        } else {
            z.checked_sub(&self.length)
        }
    }
}

/// First return of `x in [0, 1]` to the unit interval and the number of steps.
///
/// The landing set is `[0, 1)`: the orbit point `1` lies outside it, which
/// keeps the returned value equal to the 3-IET at `x = alpha`.
pub fn first_return(s: &SuspensionRotation, x: &Scalar) -> Result<(Scalar, usize)> {
    let one = Scalar::integer(1);
    let zero = Scalar::integer(0);
    if x.lt(&zero) || one.lt(x) {
        return Err(out_of_domain(x.to_string()));
    }
    let mut y = x.clone();
    for steps in 1..=MAX_RETURN_STEPS {
        y = s.step(&y)?;
        if y.lt(&one) {
            return Ok((y, steps));
        }
    }
    Err(Error::NonReturn {
        steps: MAX_RETURN_STEPS,
    })
}

/// `x, P x, ..., P^{n-1} x` and whether any of them is a discontinuity.
pub fn iet_orbit(p: &ThreeIET, x: &Scalar, n: u64) -> Result<(Vec<Scalar>, bool)> {
    let mut out = Vec::with_capacity(n as usize);
    let mut y = x.clone();
    let mut hit = false;
    for _ in 0..n {
        hit |= p.is_discontinuity(&y);
        let next = p.apply(&y)?;
        out.push(std::mem::replace(&mut y, next));
    }
    Ok((out, hit))
}

/// Least period of an exact orbit, if it closes within `max_steps`.
pub fn exact_period(p: &ThreeIET, x: &Scalar, max_steps: u64) -> Result<Option<u64>> {
    if !p.is_exact() || !x.is_exact() {
        return Err(Error::RequiresExact);
    }
    let mut y = p.apply(x)?;
    for k in 1..=max_steps {
        if &y == x {
            return Ok(Some(k));
        }
        y = p.apply(&y)?;
    }
    Ok(None)
}

/// Orbit points in `[0, 1)` of the suspension rotation, `0 <= k < n`,
/// intersected with the unit interval.
pub fn suspension_orbit_in_unit(s: &SuspensionRotation, x: &Scalar, n: u64) -> Result<Vec<Scalar>> {
    let one = Scalar::integer(1).to_like(x);
    let mut out = Vec::new();
    let mut y = x.clone();
    for _ in 0..n {
        if y.lt(&one) {
            out.push(y.clone());
        }
        y = s.step(&y)?;
    }
    Ok(out)
}

/// Checks `(union_{k<n} T^k X) ∩ [0, 1) ⊂ union_{k<n} P^k X` exactly.
pub fn restriction_chain_check(p: &ThreeIET, x: &PointSet, n: u64) -> Result<bool> {
    let xs = x.exact_coords().ok_or(Error::RequiresExact)?;
    if !p.is_exact() {
        return Err(Error::RequiresExact);
    }
    let s = SuspensionRotation::from_iet(p);
    let mut induced: Vec<Scalar> = Vec::new();
    let mut restricted: Vec<Scalar> = Vec::new();
    for v in xs {
        let v = Scalar::Exact(v.clone());
        induced.extend(iet_orbit(p, &v, n)?.0);
        restricted.extend(suspension_orbit_in_unit(&s, &v, n)?);
    }
    let key = |s: &Scalar| s.as_exact().cloned().expect("exact");
    let mut induced: Vec<BigRational> = induced.iter().map(key).collect();
    induced.sort();
    Ok(restricted
        .iter()
        .all(|r| induced.binary_search(&key(r)).is_ok()))
}

/// `n * d^H(union_{k<n} P^k A, [0, 1])` along the schedule.
pub fn iet_qd_profile(p: &ThreeIET, a: &PointSet, schedule: &Schedule) -> Result<DensityProfile> {
    if a.space() != Space::Interval {
        return Err(Error::SpaceMismatch);
    }
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let n_max = schedule.max();
    let requested = a.len() as u128 * n_max as u128;
    if requested > DEFAULT_ORBIT_CAP as u128 {
        return Err(Error::SizeBudgetExceeded {
            requested,
            cap: DEFAULT_ORBIT_CAP as u128,
        });
    }
    let meta = ProfileMeta {
        space: Space::Interval,
        map: p.to_string(),
        set: format!("{} points", a.len()),
    };
    match (a.coords(), p.is_exact()) {
        (Coords::Float(xs), false) => {
            let (al, be) = (p.alpha.to_f64(), p.beta.to_f64());
            let mut pts = Vec::with_capacity(xs.len() * n_max as usize);
            for &x in xs {
                let mut y = x;
                for k in 0..n_max {
                    pts.push((y, k));
                    y = apply_f64(al, be, y)?;
                }
            }
            let gaps = nested_gaps(pts, schedule.values(), false);
            Ok(DensityProfile::from_float_gaps(schedule.values(), &gaps, meta))
        }
        (Coords::Exact(xs), true) => {
            let mut orbits = Vec::with_capacity(xs.len());
            for x in xs {
                orbits.push(iet_orbit(p, &Scalar::Exact(x.clone()), n_max)?.0);
            }
            let mut profile = DensityProfile {
                records: Vec::new(),
                meta,
            };
            for &n in schedule.values() {
                let pts: Vec<BigRational> = orbits
                    .iter()
                    .flat_map(|o| o[..n as usize].iter().map(|s| s.to_exact().expect("exact")))
                    .collect();
                let set = PointSet::exact(Space::Interval, pts)?;
                let gap = interval_gap(&set)?;
                let scaled = gap.mul_int(n as i64);
                profile
                    .records
                    .push(crate::circle_dyn::ProfileRecord { n, gap, scaled });
            }
            Ok(profile)
        }
        _ => Err(Error::RepresentationMismatch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat;

    fn float_iet() -> ThreeIET {
        ThreeIET::new(Scalar::Float(0.3), Scalar::Float(0.7)).unwrap()
    }

    #[test]
    fn apply_examples() {
        let p = float_iet();
        let at = |x: f64| p.apply(&Scalar::Float(x)).unwrap().to_f64();
        assert!((at(0.1) - 0.8).abs() < 1e-15);
        assert!((at(0.5) - 0.5).abs() < 1e-15);
        assert!((at(0.9) - 0.2).abs() < 1e-15);
        assert!((at(1.0) - 0.3).abs() < 1e-15);
        assert!(p.apply(&Scalar::Float(1.5)).is_err());
        assert!(ThreeIET::new(Scalar::Float(0.7), Scalar::Float(0.3)).is_err());
        assert!(ThreeIET::new(Scalar::ratio(1, 3), Scalar::Float(0.5)).is_err());
    }

    #[test]
    fn first_return_examples() {
        let p = float_iet();
        let s = SuspensionRotation::from_iet(&p);
        assert!((s.length.to_f64() - 1.4).abs() < 1e-15);
        let (y, steps) = first_return(&s, &Scalar::Float(0.2)).unwrap();
        assert_eq!(steps, 1);
        assert!((y.to_f64() - 0.9).abs() < 1e-15);
        let (y, steps) = first_return(&s, &Scalar::Float(0.5)).unwrap();
        assert_eq!(steps, 2);
        assert!((y.to_f64() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn first_return_equals_apply_exactly_at_breakpoints() {
        let p = ThreeIET::new(Scalar::ratio(2, 7), Scalar::ratio(3, 5)).unwrap();
        let s = SuspensionRotation::from_iet(&p);
        for x in [rat(0, 1), rat(2, 7), rat(3, 5), rat(1, 1), rat(1, 2)] {
            let x = Scalar::Exact(x);
            assert_eq!(first_return(&s, &x).unwrap().0, p.apply(&x).unwrap(), "x = {x}");
        }
    }

    #[test]
    fn branches_tile_the_interval() {
        let p = ThreeIET::new(Scalar::ratio(1, 4), Scalar::ratio(2, 3)).unwrap();
        let mut images: Vec<_> = p.branches().unwrap().iter().map(|b| b.1.clone()).collect();
        for b in p.branches().unwrap() {
            assert_eq!(&b.0 .1 - &b.0 .0, &b.1 .1 - &b.1 .0);
        }
        images.sort();
        assert_eq!(images[0].0, rat(0, 1));
        assert_eq!(images[0].1, images[1].0);
        assert_eq!(images[1].1, images[2].0);
        assert_eq!(images[2].1, rat(1, 1));
    }

    #[test]
    fn profile_examples() {
        let p = float_iet();
        let a = PointSet::float(Space::Interval, vec![0.0]).unwrap();
        let prof = iet_qd_profile(&p, &a, &Schedule::new(vec![1]).unwrap()).unwrap();
        assert_eq!(prof.records[0].gap, Scalar::Float(1.0));

        // rational parameters: periodic orbit, flat profile after the period
        let p = ThreeIET::new(Scalar::ratio(1, 5), Scalar::ratio(3, 5)).unwrap();
        let x = Scalar::ratio(1, 10);
        let period = exact_period(&p, &x, 100).unwrap().unwrap();
        let a = PointSet::exact(Space::Interval, vec![rat(1, 10)]).unwrap();
        let sched = Schedule::new((1..=3 * period).collect()).unwrap();
        let prof = iet_qd_profile(&p, &a, &sched).unwrap();
        let tail: Vec<_> = prof.records[period as usize - 1..].iter().map(|r| &r.gap).collect();
        assert!(tail.windows(2).all(|w| w[0] == w[1]));
        assert!(prof.is_non_increasing());
    }

    #[test]
    fn float_profile_agrees_with_exact_gaps() {
        let p = ThreeIET::new(Scalar::Float(0.2718), Scalar::Float(0.6180)).unwrap();
        let a = PointSet::float(Space::Interval, vec![0.5, 0.125]).unwrap();
        let sched = Schedule::geometric(300, 1.25).unwrap();
        let prof = iet_qd_profile(&p, &a, &sched).unwrap();
        for r in &prof.records {
            let mut pts = Vec::new();
            for x in [0.5, 0.125] {
                pts.extend(iet_orbit(&p, &Scalar::Float(x), r.n).unwrap().0.iter().map(|s| s.to_f64()));
            }
            let g = interval_gap(&PointSet::float(Space::Interval, pts).unwrap()).unwrap();
            assert!((g.to_f64() - r.gap.to_f64()).abs() < 1e-15);
        }
    }

    #[test]
    fn restriction_chain_on_small_instance() {
        let p = ThreeIET::new(Scalar::ratio(1, 3), Scalar::ratio(3, 4)).unwrap();
        let x = PointSet::exact(Space::Interval, vec![rat(0, 1), rat(1, 3), rat(1, 1)]).unwrap();
        for n in 1..30 {
            assert!(restriction_chain_check(&p, &x, n).unwrap());
        }
    }
}
