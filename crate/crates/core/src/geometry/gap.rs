use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{circle_arc, frac_exact, frac_f64, Coords, Metric, Point, PointSet, Scalar, Space};
use crate::error::{Error, Result};

/// Largest grid the torus estimator will scan by default.
pub const DEFAULT_GRID_BUDGET: u128 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapOptions {
    pub resolution: usize,
    pub metric: Metric,
    pub grid_budget: u128,
}

impl Default for GapOptions {
    fn default() -> Self {
        GapOptions {
            resolution: 64,
            metric: Metric::TorusLInf,
            grid_budget: DEFAULT_GRID_BUDGET,
        }
    }
}

impl GapOptions {
    pub fn with_resolution(resolution: usize) -> Self {
        GapOptions {
            resolution,
            ..GapOptions::default()
        }
    }
}

/// Grid estimate of the torus gap. `estimate <= true gap <= certified_upper`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridGap {
    pub estimate: f64,
    pub certified_upper: f64,
    pub witness: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityCheck {
    pub dense: bool,
    pub gap: Scalar,
    /// Farthest test point found, present when the set is not dense.
    pub witness: Option<Point>,
}

fn require_space(a: &PointSet, space: Space) -> Result<()> {
    if a.space() != space {
        return Err(Error::SpaceMismatch);
    }
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(())
}

/// Half the largest arc between circularly consecutive points.
pub fn circle_gap(a: &PointSet) -> Result<Scalar> {
    circle_gap_witness(a).map(|(g, _)| g)
}

/// Circle gap together with the farthest point (midpoint of the largest arc).
pub fn circle_gap_witness(a: &PointSet) -> Result<(Scalar, Scalar)> {
    require_space(a, Space::Circle)?;
    match a.coords() {
        Coords::Exact(v) => {
            let mut xs = v.clone();
            xs.sort();
            let one = BigRational::one();
            let mut best = &xs[0] + &one - &xs[xs.len() - 1];
            let mut start = xs[xs.len() - 1].clone();
            for w in xs.windows(2) {
                let g = &w[1] - &w[0];
                if g > best {
                    best = g;
                    start = w[0].clone();
                }
            }
            let half = best / BigRational::from_integer(2.into());
            let witness = frac_exact(&(start + &half));
            Ok((Scalar::Exact(half), Scalar::Exact(witness)))
        }
        Coords::Float(v) => {
            let mut xs = v.clone();
            xs.sort_by(f64::total_cmp);
            let (best, start) = max_circular_gap(&xs);
            Ok((
                Scalar::Float(best / 2.0),
                Scalar::Float(frac_f64(start + best / 2.0)),
            ))
        }
    }
}

/// Largest circular gap of sorted values in `[0,1)` and the point where it starts.
pub(crate) fn max_circular_gap(sorted: &[f64]) -> (f64, f64) {
    let n = sorted.len();
    let mut best = sorted[0] + 1.0 - sorted[n - 1];
    let mut start = sorted[n - 1];
    for w in sorted.windows(2) {
        let g = w[1] - w[0];
        if g > best {
            best = g;
            start = w[0];
        }
    }
    (best, start)
}

/// `sup_{y in [0,1]} dist(y, A)`; edge gaps count at full length.
pub fn interval_gap(a: &PointSet) -> Result<Scalar> {
    interval_gap_witness(a).map(|(g, _)| g)
}

pub fn interval_gap_witness(a: &PointSet) -> Result<(Scalar, Scalar)> {
    require_space(a, Space::Interval)?;
    match a.coords() {
        Coords::Exact(v) => {
            let mut xs = v.clone();
            xs.sort();
            let two = BigRational::from_integer(2.into());
            let mut best = xs[0].clone();
            let mut witness = BigRational::zero();
            let right = BigRational::one() - &xs[xs.len() - 1];
            if right > best {
                best = right;
                witness = BigRational::one();
            }
            for w in xs.windows(2) {
                let g = (&w[1] - &w[0]) / &two;
                if g > best {
                    witness = &w[0] + &g;
                    best = g;
                }
            }
            Ok((Scalar::Exact(best), Scalar::Exact(witness)))
        }
        Coords::Float(v) => {
            let mut xs = v.clone();
            xs.sort_by(f64::total_cmp);
            let (best, witness) = interval_gap_sorted(&xs);
            Ok((Scalar::Float(best), Scalar::Float(witness)))
        }
    }
}

pub(crate) fn interval_gap_sorted(xs: &[f64]) -> (f64, f64) {
    let mut best = xs[0];
    let mut witness = 0.0;
    let right = 1.0 - xs[xs.len() - 1];
    if right > best {
        best = right;
        witness = 1.0;
    }
    for w in xs.windows(2) {
        let g = (w[1] - w[0]) / 2.0;
        if g > best {
            best = g;
            witness = w[0] + g;
        }
    }
    (best, witness)
}

/// Maximum over the `G^n` grid `{i/G}` of the distance to `A`.
pub fn torus_gap_upper(a: &PointSet, opts: &GapOptions) -> Result<GridGap> {
    let n = a.dim();
    if !matches!(a.space(), Space::Torus(_)) {
        return Err(Error::SpaceMismatch);
    }
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let g = opts.resolution;
    if g < 2 {
        return Err(Error::InvalidParameter(format!("resolution {g} < 2")));
    }
    let total = (g as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > opts.grid_budget {
        return Err(Error::ResolutionTooLarge {
            points: total,
            budget: opts.grid_budget,
        });
    }
    let rows = a.to_f64_rows();
    let k = rows.len();
    // axis[(p * n + axis) * g + i] = arc distance from i/G to point p along axis
    let mut axis = vec![0.0f64; k * n * g];
    for (p, row) in rows.iter().enumerate() {
        for (ax, &x) in row.iter().enumerate() {
            for i in 0..g {
                axis[(p * n + ax) * g + i] = circle_arc(i as f64 / g as f64, x);
            }
        }
    }
    let l2 = opts.metric == Metric::TorusL2;
    let mut idx = vec![0usize; n];
    let mut best = -1.0f64;
    let mut witness = vec![0usize; n];
    for _ in 0..total {
        let mut nearest = f64::INFINITY;
        for p in 0..k {
            let mut d = 0.0f64;
            for (ax, &i) in idx.iter().enumerate() {
                let c = axis[(p * n + ax) * g + i];
                if l2 {
                    d += c * c;
                } else if c > d {
                    d = c;
                }
                if d >= nearest {
                    break;
                }
            }
            if d < nearest {
                nearest = d;
            }
        }
        if l2 {
            nearest = nearest.sqrt();
        }
        if nearest > best {
            best = nearest;
            witness.clone_from(&idx);
        }
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < g {
                break;
            }
            *slot = 0;
        }
    }
    Ok(GridGap {
        estimate: best,
        certified_upper: best + opts.metric.half_cell(n, g),
        witness: witness.iter().map(|&i| i as f64 / g as f64).collect(),
    })
}

/// True iff the gap estimate is strictly below `eps` (exact on the circle and
/// interval, grid estimate on tori).
pub fn is_eps_dense(a: &PointSet, eps: &Scalar, opts: &GapOptions) -> Result<DensityCheck> {
    if !eps.is_positive() {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    let (gap, witness) = match a.space() {
        Space::Circle => {
            let (g, w) = circle_gap_witness(a)?;
            (g, Point::from_scalars(Space::Circle, &[w])?)
        }
        Space::Interval => {
            let (g, w) = interval_gap_witness(a)?;
            (g, Point::from_scalars(Space::Interval, &[w])?)
        }
        Space::Torus(_) => {
            let grid = torus_gap_upper(a, opts)?;
            (
                Scalar::Float(grid.estimate),
                Point::float(a.space(), grid.witness)?,
            )
        }
    };
    let dense = gap.lt(eps);
    Ok(DensityCheck {
        dense,
        gap,
        witness: (!dense).then_some(witness),
    })
}

/// One-sided semimetric `sup_{b in B} dist(b, A)`: how well `A` covers `B`.
pub fn semimetric_gap(a: &PointSet, b: &PointSet) -> Result<Scalar> {
    semimetric_gap_with(a, b, a.space().default_metric())
}

pub fn semimetric_gap_with(a: &PointSet, b: &PointSet, metric: Metric) -> Result<Scalar> {
    if a.space() != b.space() {
        return Err(Error::SpaceMismatch);
    }
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if b.is_empty() {
        return Ok(match a.coords() {
            Coords::Exact(_) => Scalar::Exact(BigRational::zero()),
            Coords::Float(_) => Scalar::Float(0.0),
        });
    }
    match (a.coords(), b.coords()) {
        (Coords::Exact(av), Coords::Exact(bv)) if a.dim() == 1 => {
            let mut xs = av.clone();
            xs.sort();
            let mut best = BigRational::zero();
            for y in bv {
                let d = nearest_sorted_exact(&xs, y, a.space() != Space::Interval);
                if d > best {
                    best = d;
                }
            }
            Ok(Scalar::Exact(best))
        }
        (Coords::Float(av), Coords::Float(bv)) if a.dim() == 1 => {
            let mut xs = av.clone();
            xs.sort_by(f64::total_cmp);
            let periodic = a.space() != Space::Interval;
            let best = bv
                .iter()
                .map(|&y| nearest_sorted_f64(&xs, y, periodic))
                .fold(0.0, f64::max);
            Ok(Scalar::Float(best))
        }
        (Coords::Exact(av), Coords::Exact(bv)) if metric.dist_exact(&av[..1], &bv[..1]).is_some() => {
            let d = a.dim();
            let mut best = BigRational::zero();
            for y in bv.chunks(d) {
                let nearest = av
                    .chunks(d)
                    .map(|x| metric.dist_exact(x, y).expect("exact metric"))
                    .min()
                    .expect("nonempty");
                if nearest > best {
                    best = nearest;
                }
            }
            Ok(Scalar::Exact(best))
        }
        (Coords::Exact(_), Coords::Float(_)) | (Coords::Float(_), Coords::Exact(_)) => {
            Err(Error::RepresentationMismatch)
        }
        _ => {
            let ra = a.to_f64_rows();
            let best = b
                .to_f64_rows()
                .iter()
                .map(|y| {
                    ra.iter()
                        .map(|x| metric.dist(x, y))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max);
            Ok(Scalar::Float(best))
        }
    }
}

pub(crate) fn nearest_sorted_f64(xs: &[f64], y: f64, periodic: bool) -> f64 {
    let i = xs.partition_point(|&x| x < y);
    let mut best = f64::INFINITY;
    let candidates = [i.checked_sub(1), (i < xs.len()).then_some(i)];
    for j in candidates.into_iter().flatten() {
        best = best.min((xs[j] - y).abs());
    }
    if periodic {
        best = best
            .min(circle_arc(xs[0], y))
            .min(circle_arc(xs[xs.len() - 1], y));
    }
    best
}

fn nearest_sorted_exact(xs: &[BigRational], y: &BigRational, periodic: bool) -> BigRational {
    let i = xs.partition_point(|x| x < y);
    let mut cands: Vec<&BigRational> = Vec::new();
    if i > 0 {
        cands.push(&xs[i - 1]);
    }
    if i < xs.len() {
        cands.push(&xs[i]);
    }
    if periodic {
        cands.push(&xs[0]);
        cands.push(&xs[xs.len() - 1]);
    }
    cands
        .into_iter()
        .map(|x| {
            if periodic {
                super::circle_arc_exact(x, y)
            } else {
                num_traits::Signed::abs(&(x - y))
            }
        })
        .min()
        .expect("nonempty")
}
