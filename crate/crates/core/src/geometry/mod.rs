//! Points on the circle, the unit interval and tori, and the Hausdorff
//! semimetric gap `d^H(A, Y) = sup_{y in Y} dist(y, A)` measured against them.

mod gap;
mod scalar;

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

pub use gap::{
    circle_gap, circle_gap_witness, interval_gap, interval_gap_witness, is_eps_dense,
    semimetric_gap, semimetric_gap_with, torus_gap_upper, DensityCheck, GapOptions, GridGap,
    DEFAULT_GRID_BUDGET,
};
pub(crate) use gap::max_circular_gap;
pub use scalar::{frac_exact, frac_f64, rat, ratio_to_f64, Scalar};

/// Float equality tolerance used for deduplication and set comparisons.
pub const FLOAT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    Circle,
    Interval,
    Torus(usize),
}

impl Space {
    pub fn dim(self) -> usize {
        match self {
            Space::Circle | Space::Interval => 1,
            Space::Torus(n) => n,
        }
    }

    pub fn default_metric(self) -> Metric {
        match self {
            Space::Circle => Metric::CircleArc,
            Space::Interval => Metric::IntervalAbs,
            Space::Torus(_) => Metric::TorusLInf,
        }
    }

    fn periodic(self) -> bool {
        !matches!(self, Space::Interval)
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Circle => write!(f, "circle"),
            Space::Interval => write!(f, "interval"),
            Space::Torus(n) => write!(f, "torus{n}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Metric {
    CircleArc,
    IntervalAbs,
    TorusLInf,
    TorusL2,
}

impl Metric {
    /// Distance between float coordinate vectors.
    pub fn dist(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::CircleArc => circle_arc(a[0], b[0]),
            Metric::IntervalAbs => (a[0] - b[0]).abs(),
            Metric::TorusLInf => a
                .iter()
                .zip(b)
                .map(|(x, y)| circle_arc(*x, *y))
                .fold(0.0, f64::max),
            Metric::TorusL2 => a
                .iter()
                .zip(b)
                .map(|(x, y)| circle_arc(*x, *y).powi(2))
                .sum::<f64>()
                .sqrt(),
        }
    }

    /// Exact distance for the metrics where it is rational.
    pub fn dist_exact(self, a: &[BigRational], b: &[BigRational]) -> Option<BigRational> {
        match self {
            Metric::CircleArc => Some(circle_arc_exact(&a[0], &b[0])),
            Metric::IntervalAbs => Some((&a[0] - &b[0]).abs()),
            Metric::TorusLInf => a
                .iter()
                .zip(b)
                .map(|(x, y)| circle_arc_exact(x, y))
                .max(),
            Metric::TorusL2 => None,
        }
    }

    /// Half the diameter of a grid cell of side `1/g` in dimension `n`.
    pub fn half_cell(self, n: usize, g: usize) -> f64 {
        match self {
            Metric::TorusL2 => (n as f64).sqrt() / (2.0 * g as f64),
            _ => 1.0 / (2.0 * g as f64),
        }
    }
}

pub fn circle_arc(x: f64, y: f64) -> f64 {
    let d = (x - y).abs().rem_euclid(1.0);
    d.min(1.0 - d)
}

pub fn circle_arc_exact(x: &BigRational, y: &BigRational) -> BigRational {
    let d = frac_exact(&(x - y));
    let other = BigRational::one() - &d;
    if other < d {
        other
    } else {
        d
    }
}

/// Coordinates stored row-major, all in one representation.
#[derive(Clone, Debug, PartialEq)]
pub enum Coords {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

impl Coords {
    pub fn len(&self) -> usize {
        match self {
            Coords::Exact(v) => v.len(),
            Coords::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coords::Exact(_))
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        match self {
            Coords::Exact(v) => v.iter().map(ratio_to_f64).collect(),
            Coords::Float(v) => v.clone(),
        }
    }

    pub fn scalar(&self, i: usize) -> Scalar {
        match self {
            Coords::Exact(v) => Scalar::Exact(v[i].clone()),
            Coords::Float(v) => Scalar::Float(v[i]),
        }
    }

    fn from_scalars(values: &[Scalar]) -> Result<Coords> {
        if values.iter().all(Scalar::is_exact) {
            Ok(Coords::Exact(
                values.iter().map(|s| s.to_exact()).collect::<Result<_>>()?,
            ))
        } else if values.iter().all(|s| !s.is_exact()) {
            Ok(Coords::Float(values.iter().map(Scalar::to_f64).collect()))
        } else {
            Err(Error::RepresentationMismatch)
        }
    }
}

fn check_range(space: Space, coords: &Coords) -> Result<()> {
    let bad = |value: String| Error::OutOfDomain {
        value,
        space: space.to_string(),
    };
    match coords {
        Coords::Exact(v) => {
            for x in v {
                let ok = !x.is_negative()
                    && if space.periodic() {
                        x < &BigRational::one()
                    } else {
                        x <= &BigRational::one()
                    };
                if !ok {
                    return Err(bad(x.to_string()));
                }
            }
        }
        Coords::Float(v) => {
            for &x in v {
                if !x.is_finite() {
                    return Err(Error::NotFinite(x));
                }
                let ok = x >= 0.0 && if space.periodic() { x < 1.0 } else { x <= 1.0 };
                if !ok {
                    return Err(bad(x.to_string()));
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    space: Space,
    coords: Coords,
}

impl Point {
    pub fn new(space: Space, coords: Coords) -> Result<Point> {
        if coords.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: coords.len(),
            });
        }
        check_range(space, &coords)?;
        Ok(Point { space, coords })
    }

    pub fn from_scalars(space: Space, values: &[Scalar]) -> Result<Point> {
        Point::new(space, Coords::from_scalars(values)?)
    }

    /// Builds a point after reducing every coordinate mod 1 (periodic spaces only).
    pub fn reduced(space: Space, values: &[Scalar]) -> Result<Point> {
        if !space.periodic() {
            return Point::from_scalars(space, values);
        }
        let values: Vec<Scalar> = values.iter().map(Scalar::circle_reduce).collect();
        Point::from_scalars(space, &values)
    }

    pub fn exact(space: Space, values: Vec<BigRational>) -> Result<Point> {
        Point::new(space, Coords::Exact(values))
    }

    pub fn float(space: Space, values: Vec<f64>) -> Result<Point> {
        Point::new(space, Coords::Float(values))
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn is_exact(&self) -> bool {
        self.coords.is_exact()
    }

    pub fn coord(&self, i: usize) -> Scalar {
        self.coords.scalar(i)
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.coords.to_f64_vec()
    }
}

/// A finite set of points in a single space, stored as a flat coordinate array.
///
/// Equality compares space and coordinates in stored order.
#[derive(Clone, Debug)]
pub struct PointSet {
    space: Space,
    coords: Coords,
    dedup: bool,
}

impl PartialEq for PointSet {
    fn eq(&self, other: &PointSet) -> bool {
        self.space == other.space && self.coords == other.coords
    }
}

impl PointSet {
    pub fn new(space: Space, coords: Coords) -> Result<PointSet> {
        let dim = space.dim();
        if coords.len() % dim != 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: coords.len() % dim,
            });
        }
        check_range(space, &coords)?;
        Ok(PointSet {
            space,
            coords,
            dedup: false,
        })
    }

    pub fn exact(space: Space, coords: Vec<BigRational>) -> Result<PointSet> {
        PointSet::new(space, Coords::Exact(coords))
    }

    pub fn float(space: Space, coords: Vec<f64>) -> Result<PointSet> {
        PointSet::new(space, Coords::Float(coords))
    }

    /// Circle set from rationals `p/q`.
    pub fn circle_rationals(values: &[(i64, i64)]) -> Result<PointSet> {
        PointSet::exact(
            Space::Circle,
            values.iter().map(|&(p, q)| rat(p, q)).collect(),
        )
    }

    pub fn from_points(space: Space, points: &[Point]) -> Result<PointSet> {
        if points.iter().any(|p| p.space != space) {
            return Err(Error::SpaceMismatch);
        }
        let exact = points.first().map_or(false, Point::is_exact);
        if points.iter().any(|p| p.is_exact() != exact) {
            return Err(Error::RepresentationMismatch);
        }
        let coords = if exact {
            Coords::Exact(
                points
                    .iter()
                    .flat_map(|p| match &p.coords {
                        Coords::Exact(v) => v.clone(),
                        Coords::Float(_) => unreachable!(),
                    })
                    .collect(),
            )
        } else {
            Coords::Float(points.iter().flat_map(|p| p.to_f64_vec()).collect())
        };
        PointSet::new(space, coords)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.coords.is_exact()
    }

    pub fn is_deduplicated(&self) -> bool {
        self.dedup
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn exact_coords(&self) -> Option<&[BigRational]> {
        match &self.coords {
            Coords::Exact(v) => Some(v),
            Coords::Float(_) => None,
        }
    }

    pub fn float_coords(&self) -> Option<&[f64]> {
        match &self.coords {
            Coords::Float(v) => Some(v),
            Coords::Exact(_) => None,
        }
    }

    pub fn point(&self, i: usize) -> Point {
        let d = self.dim();
        let coords = match &self.coords {
            Coords::Exact(v) => Coords::Exact(v[i * d..(i + 1) * d].to_vec()),
            Coords::Float(v) => Coords::Float(v[i * d..(i + 1) * d].to_vec()),
        };
        Point {
            space: self.space,
            coords,
        }
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        self.coords
            .to_f64_vec()
            .chunks(d)
            .map(<[f64]>::to_vec)
            .collect()
    }

    /// Explicit exact-to-float conversion.
    pub fn to_float(&self) -> PointSet {
        let mut v = self.coords.to_f64_vec();
        if self.space.periodic() {
            // rounding can push values just below 1 up to 1.0
            for x in &mut v {
                *x = frac_f64(*x);
            }
        }
        PointSet {
            space: self.space,
            coords: Coords::Float(v),
            dedup: false,
        }
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let coords = match (&self.coords, &other.coords) {
            (Coords::Exact(a), Coords::Exact(b)) => {
                Coords::Exact(a.iter().chain(b).cloned().collect())
            }
            (Coords::Float(a), Coords::Float(b)) => {
                Coords::Float(a.iter().chain(b).copied().collect())
            }
            _ => return Err(Error::RepresentationMismatch),
        };
        Ok(PointSet {
            space: self.space,
            coords,
            dedup: false,
        })
    }

    /// Removes duplicates: exact equality for rationals, distance below `tol`
    /// (under the space's default metric) for floats. Output is sorted
    /// lexicographically.
    pub fn deduplicated(&self, tol: f64) -> PointSet {
        let d = self.dim();
        let coords = match &self.coords {
            Coords::Exact(v) => {
                let mut rows: Vec<&[BigRational]> = v.chunks(d).collect();
                rows.sort();
                rows.dedup();
                Coords::Exact(rows.into_iter().flatten().cloned().collect())
            }
            Coords::Float(v) => {
                let mut rows: Vec<&[f64]> = v.chunks(d).collect();
                rows.sort_by(|a, b| cmp_rows(a, b));
                let metric = self.space.default_metric();
                let mut kept: Vec<&[f64]> = Vec::with_capacity(rows.len());
                if d == 1 {
                    for r in rows {
                        if kept.last().map_or(true, |k| metric.dist(k, r) >= tol) {
                            kept.push(r);
                        }
                    }
                    // 0 and 1 - tiny coincide on the circle
                    if self.space.periodic() && kept.len() > 1 {
                        let (first, last) = (kept[0], kept[kept.len() - 1]);
                        if metric.dist(first, last) < tol {
                            kept.pop();
                        }
                    }
                } else {
                    for r in rows {
                        if kept.iter().all(|k| metric.dist(k, r) >= tol) {
                            kept.push(r);
                        }
                    }
                }
                Coords::Float(kept.into_iter().flatten().copied().collect())
            }
        };
        PointSet {
            space: self.space,
            coords,
            dedup: true,
        }
    }

    /// Set equality under the space's equality notion.
    pub fn same_set(&self, other: &PointSet, tol: f64) -> bool {
        if self.space != other.space || self.is_exact() != other.is_exact() {
            return false;
        }
        let a = self.deduplicated(tol);
        let b = other.deduplicated(tol);
        if a.len() != b.len() {
            return false;
        }
        match (&a.coords, &b.coords) {
            (Coords::Exact(x), Coords::Exact(y)) => x == y,
            (Coords::Float(_), Coords::Float(_)) => {
                let metric = self.space.default_metric();
                let (ra, rb) = (a.to_f64_rows(), b.to_f64_rows());
                ra.iter()
                    .all(|p| rb.iter().any(|q| metric.dist(p, q) < tol))
                    && rb.iter().all(|q| ra.iter().any(|p| metric.dist(p, q) < tol))
            }
            _ => false,
        }
    }

    /// CSV lines `coord_1,...,coord_n`; exact values rendered `p/q`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for p in self.points() {
            let line: Vec<String> = (0..self.dim()).map(|i| p.coord(i).to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(space: Space, text: &str) -> Result<PointSet> {
        let mut scalars = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row: Vec<Scalar> = line
                .split(',')
                .map(str::parse)
                .collect::<Result<_>>()?;
            if row.len() != space.dim() {
                return Err(Error::DimensionMismatch {
                    expected: space.dim(),
                    got: row.len(),
                });
            }
            scalars.extend(row);
        }
        PointSet::new(space, Coords::from_scalars(&scalars)?)
    }
}

fn cmp_rows(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_arc_is_symmetric_and_bounded() {
        assert_eq!(circle_arc(0.1, 0.9), circle_arc(0.9, 0.1));
        assert!((circle_arc(0.1, 0.9) - 0.2).abs() < 1e-15);
        assert_eq!(circle_arc(0.0, 0.5), 0.5);
        assert_eq!(circle_arc_exact(&rat(1, 10), &rat(9, 10)), rat(1, 5));
    }

    #[test]
    fn point_range_checks() {
        assert!(Point::float(Space::Circle, vec![1.0]).is_err());
        assert!(Point::float(Space::Interval, vec![1.0]).is_ok());
        assert!(Point::exact(Space::Torus(2), vec![rat(1, 2)]).is_err());
        let p = Point::reduced(Space::Circle, &[Scalar::ratio(7, 4)]).unwrap();
        assert_eq!(p.coord(0), Scalar::ratio(3, 4));
        assert!(Point::from_scalars(Space::Torus(2), &[Scalar::ratio(1, 2), Scalar::Float(0.5)])
            .is_err());
    }

    #[test]
    fn dedup_exact_and_float() {
        let a = PointSet::circle_rationals(&[(1, 2), (0, 1), (2, 4)]).unwrap();
        let d = a.deduplicated(FLOAT_TOL);
        assert_eq!(d.len(), 2);
        assert!(d.is_deduplicated());
        let f = PointSet::float(Space::Circle, vec![0.0, 1.0 - 1e-14, 0.5, 0.5 + 1e-15]).unwrap();
        assert_eq!(f.deduplicated(FLOAT_TOL).len(), 2);
    }

    #[test]
    fn csv_round_trip() {
        let a = PointSet::exact(Space::Torus(2), vec![rat(1, 3), rat(0, 1), rat(5, 7), rat(1, 2)])
            .unwrap();
        let text = a.to_csv();
        assert_eq!(text, "1/3,0/1\n5/7,1/2\n");
        assert_eq!(PointSet::from_csv(Space::Torus(2), &text).unwrap(), a);
        assert!(PointSet::from_csv(Space::Torus(2), "1/3\n").is_err());
        assert!(PointSet::from_csv(Space::Circle, "1/3\n0.5\n").is_err());
    }
}
