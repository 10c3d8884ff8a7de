//! Commuting toral automorphisms `alpha: Z^k -> SL(n, Z)` and their Lyapunov
//! functionals `chi_i(m) = sum_j m_j log|lambda_i(gen_j)|`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::IntMatrix;
use super::act_set;
use crate::error::{Error, Result};
use crate::geometry::{frac_f64, torus_gap_upper, GapOptions, PointSet, Space};

/// Tolerance for clustering exponents and the general-position flags.
pub const GENERAL_POSITION_TOL: f64 = 1e-9;
/// Eigenvalues this close to a root of unity of order up to this bound are
/// treated as non-ergodic.
pub const ROOT_OF_UNITY_MAX_ORDER: u32 = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct AbelianAction {
    pub gens: Vec<IntMatrix>,
    /// `exponents[i][j] = chi_i(e_j)`, one row per eigenvalue cluster.
    pub exponents: Vec<Vec<f64>>,
    pub multiplicities: Vec<usize>,
    /// Unit eigenvector for clusters belonging to one real eigenvalue.
    pub directions: Vec<Option<Vec<f64>>>,
    pub general_position: bool,
}

impl AbelianAction {
    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn dim(&self) -> usize {
        self.gens[0].dim()
    }

    /// `chi_i(m)`.
    pub fn chi(&self, i: usize, m: &[i64]) -> f64 {
        self.exponents[i]
            .iter()
            .zip(m)
            .map(|(c, &k)| c * k as f64)
            .sum()
    }

    /// `alpha(m) = prod_j gen_j^{m_j}`.
    pub fn element(&self, m: &[i64]) -> IntMatrix {
        self.gens
            .iter()
            .zip(m)
            .fold(IntMatrix::identity(self.dim()), |acc, (g, &k)| acc.mul(&g.pow(k)))
    }
}

fn to_dmatrix(m: &IntMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.dim(), m.dim(), &m.to_f64())
}

fn near_root_of_unity(z: Complex64) -> bool {
    (1..=ROOT_OF_UNITY_MAX_ORDER).any(|order| {
        (0..order).any(|a| {
            let w = Complex64::from_polar(1.0, 2.0 * PI * a as f64 / order as f64);
            (z - w).norm() < GENERAL_POSITION_TOL
        })
    })
}

/// Unit null vector of `m - mu I`, from the smallest singular value.
fn eigenvector(m: &DMatrix<f64>, mu: Complex64) -> Vec<Complex64> {
    let n = m.nrows();
    let shifted = DMatrix::from_fn(n, n, |i, j| {
        Complex64::new(m[(i, j)], 0.0) - if i == j { mu } else { Complex64::new(0.0, 0.0) }
    });
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    (0..n).map(|j| v_t[(n - 1, j)].conj()).collect()
}

/// Rayleigh quotient `v^H G v / v^H v`.
fn rayleigh(g: &DMatrix<f64>, v: &[Complex64]) -> Complex64 {
    let n = v.len();
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for i in 0..n {
        let gv: Complex64 = (0..n).map(|j| v[j] * g[(i, j)]).sum();
        num += v[i].conj() * gv;
        den += v[i].norm_sqr();
    }
    num / den
}

fn proportional(a: &[f64], b: &[f64]) -> bool {
    let scale = a.iter().chain(b).fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let tol = GENERAL_POSITION_TOL * scale * scale;
    (0..a.len()).all(|i| (i + 1..a.len()).all(|j| (a[i] * b[j] - a[j] * b[i]).abs() < tol))
}

/// Lyapunov data of a commuting family of toral automorphisms.
///
/// Eigenvectors come from one generic combination `sum_j c_j gen_j`, so all
/// generators are read off a common eigenbasis.
pub fn lyapunov_data(gens: &[IntMatrix]) -> Result<AbelianAction> {
    let n = gens
        .first()
        .map(IntMatrix::dim)
        .ok_or_else(|| Error::InvalidParameter("no generators".into()))?;
    if gens.iter().any(|g| g.dim() != n) {
        return Err(Error::InvalidParameter("generators of mixed dimension".into()));
    }
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if gens[i].mul(&gens[j]) != gens[j].mul(&gens[i]) {
                return Err(Error::NotCommuting(i, j));
            }
        }
    }
    let mats: Vec<DMatrix<f64>> = gens.iter().map(to_dmatrix).collect();
    for (j, m) in mats.iter().enumerate() {
        if m.complex_eigenvalues().iter().any(|&z| near_root_of_unity(z)) {
            return Err(Error::NotErgodic(j));
        }
    }
    let generic = mats
        .iter()
        .enumerate()
        .fold(DMatrix::zeros(n, n), |acc, (j, m)| acc + m * (1.0 / (j as f64 + PI)));

    let mut exponents: Vec<Vec<f64>> = Vec::new();
    let mut multiplicities: Vec<usize> = Vec::new();
    let mut directions: Vec<Option<Vec<f64>>> = Vec::new();
    for mu in generic.complex_eigenvalues().iter() {
        let v = eigenvector(&generic, *mu);
        let chi: Vec<f64> = mats.iter().map(|g| rayleigh(g, &v).norm().ln()).collect();
        let same = exponents.iter().position(|c| {
            c.iter()
                .zip(&chi)
                .all(|(a, b)| (a - b).abs() < GENERAL_POSITION_TOL * a.abs().max(1.0))
        });
        match same {
            Some(i) => {
                multiplicities[i] += 1;
                directions[i] = None;
            }
            None => {
                let real = mu.im.abs() < GENERAL_POSITION_TOL;
                exponents.push(chi);
                multiplicities.push(1);
                directions.push(real.then(|| real_direction(&v)));
            }
        }
    }
    let simple = multiplicities.iter().all(|&m| m == 1);
    let nonzero = exponents
        .iter()
        .all(|c| c.iter().any(|x| x.abs() > GENERAL_POSITION_TOL));
    let distinct = (0..exponents.len())
        .all(|a| (a + 1..exponents.len()).all(|b| !proportional(&exponents[a], &exponents[b])));
    Ok(AbelianAction {
        gens: gens.to_vec(),
        exponents,
        multiplicities,
        directions,
        general_position: simple && nonzero && distinct,
    })
}

fn real_direction(v: &[Complex64]) -> Vec<f64> {
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("nonempty");
    let phase = pivot / pivot.norm();
    let w: Vec<f64> = v.iter().map(|z| (z / phase).re).collect();
    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    w.iter().map(|x| x / norm).collect()
}

/// Nonzero vectors of `[-r, r]^k` in search order: by sup-norm shell, then
/// by `l1` norm, then lexicographically descending (so `e_1` comes first).
pub(crate) fn box_order(k: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for r in 1..=radius {
        let mut shell: Vec<Vec<i64>> = Vec::new();
        let mut v = vec![-r; k];
        loop {
            if v.iter().map(|x| x.abs()).max() == Some(r) {
                shell.push(v.clone());
            }
            let mut i = 0;
            while i < k && v[i] == r {
                v[i] = -r;
                i += 1;
            }
            if i == k {
                break;
            }
            v[i] += 1;
        }
        shell.sort_by(|a, b| {
            let l1 = |v: &Vec<i64>| v.iter().map(|x| x.abs()).sum::<i64>();
            l1(a).cmp(&l1(b)).then_with(|| b.cmp(a))
        });
        out.extend(shell);
    }
    out
}

/// Some `m` with `0 < |m|_inf <= box_radius` and `|chi_i(m)| <= eps`.
pub fn chi_density_search(
    action: &AbelianAction,
    chi_index: usize,
    eps: f64,
    box_radius: i64,
) -> Result<Option<Vec<i64>>> {
    if !action.general_position {
        return Err(Error::InvalidParameter("action is not in general position".into()));
    }
    if chi_index >= action.exponents.len() {
        return Err(Error::InvalidParameter(format!("no exponent {chi_index}")));
    }
    Ok(box_order(action.rank(), box_radius)
        .into_iter()
        .find(|m| action.chi(chi_index, m).abs() <= eps))
}

/// Points `x_0 + p_j v (mod 1)` on the leaf of `chi_i` through `x_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeafSet {
    pub chi_index: usize,
    pub base: Vec<f64>,
    pub direction: Vec<f64>,
    pub params: Vec<f64>,
}

impl LeafSet {
    pub fn new(action: &AbelianAction, chi_index: usize, base: Vec<f64>, params: Vec<f64>) -> Result<LeafSet> {
        let direction = action
            .directions
            .get(chi_index)
            .cloned()
            .flatten()
            .ok_or_else(|| Error::LeafMismatch(format!("exponent {chi_index} has no real leaf direction")))?;
        if base.len() != action.dim() {
            return Err(Error::DimensionMismatch {
                expected: action.dim(),
                got: base.len(),
            });
        }
        Ok(LeafSet {
            chi_index,
            base,
            direction,
            params,
        })
    }

    pub fn points(&self) -> PointSet {
        let n = self.base.len();
        let coords = self
            .params
            .iter()
            .flat_map(|&p| (0..n).map(move |i| frac_f64(self.base[i] + p * self.direction[i])))
            .collect();
        PointSet::float(Space::Torus(n), coords).expect("reduced coordinates")
    }

    /// Errors unless `a` is this leaf set, point by point, within `tol` on the torus.
    pub fn check(&self, a: &PointSet, tol: f64) -> Result<()> {
        let expect = self.points();
        if a.space() != expect.space() || a.len() != expect.len() {
            return Err(Error::LeafMismatch("size or space differs".into()));
        }
        let (x, y) = (a.coords().to_f64_vec(), expect.coords().to_f64_vec());
        for (i, (u, v)) in x.iter().zip(&y).enumerate() {
            let d = (u - v).abs();
            if d.min(1.0 - d) > tol {
                return Err(Error::LeafMismatch(format!(
                    "coordinate {i} is {d} away from the leaf"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubordinateSearch {
    pub found: Option<Vec<i64>>,
    pub best: (Vec<i64>, f64),
    pub checked: usize,
}

/// Searches `m = 0` and then the box for `alpha(m) A` with grid gap below `eps`.
pub fn subordinate_search_eps_dense(
    action: &AbelianAction,
    leaf: &LeafSet,
    a: &PointSet,
    eps: f64,
    box_radius: i64,
    opts: &GapOptions,
) -> Result<SubordinateSearch> {
    leaf.check(a, 1e-9)?;
    let k = action.rank();
    let candidates = std::iter::once(vec![0; k]).chain(box_order(k, box_radius));
    let mut best: Option<(Vec<i64>, f64)> = None;
    let mut checked = 0;
    for m in candidates {
        checked += 1;
        let image = act_set(&action.element(&m), a)?;
        let gap = torus_gap_upper(&image, opts)?.estimate;
        if best.as_ref().is_none_or(|b| gap < b.1) {
            best = Some((m.clone(), gap));
        }
        if gap < eps {
            return Ok(SubordinateSearch {
                found: Some(m),
                best: best.expect("set above"),
                checked,
            });
        }
    }
    Ok(SubordinateSearch {
        found: None,
        best: best.expect("m = 0 is always checked"),
        checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat() -> IntMatrix {
        IntMatrix::from_i64(2, &[2, 1, 1, 1]).unwrap()
    }

    /// `C^2` and `C - I` for the companion matrix `C` of `x^3 - 3x + 1`.
    /// (`C + 2I` would not do: `(t - 1)^2 (t + 2) = 1` on the roots.)
    fn cubic_pair() -> Vec<IntMatrix> {
        vec![
            IntMatrix::from_i64(3, &[0, -1, 0, 0, 3, -1, 1, 0, 3]).unwrap(),
            IntMatrix::from_i64(3, &[-1, 0, -1, 1, -1, 3, 0, 1, -1]).unwrap(),
        ]
    }

    #[test]
    fn cat_map_exponents() {
        let a = lyapunov_data(&[cat()]).unwrap();
        let l = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        let mut chis: Vec<f64> = a.exponents.iter().map(|c| c[0]).collect();
        chis.sort_by(f64::total_cmp);
        assert!((chis[0] + l).abs() < 1e-9 && (chis[1] - l).abs() < 1e-9);
        assert!(a.directions.iter().all(Option::is_some));
        // in rank one all kernels coincide
        assert!(!a.general_position);
    }

    #[test]
    fn duplicate_generators_are_degenerate() {
        let a = lyapunov_data(&[cat(), cat()]).unwrap();
        assert!(!a.general_position);
    }

    #[test]
    fn cubic_unit_pair_is_in_general_position() {
        let gens = cubic_pair();
        let a = lyapunov_data(&gens).unwrap();
        assert_eq!(a.exponents.len(), 3);
        assert!(a.general_position);
        // roots 2 cos(2 pi j / 9), j = 1, 2, 4
        let mut expect: Vec<Vec<f64>> = [1.0, 2.0, 4.0]
            .iter()
            .map(|j| {
                let t = 2.0 * (2.0 * PI * j / 9.0).cos();
                vec![2.0 * t.abs().ln(), (t - 1.0).abs().ln()]
            })
            .collect();
        let mut got = a.exponents.clone();
        expect.sort_by(|x, y| x[0].total_cmp(&y[0]));
        got.sort_by(|x, y| x[0].total_cmp(&y[0]));
        for (e, g) in expect.iter().zip(&got) {
            assert!((e[0] - g[0]).abs() < 1e-9 && (e[1] - g[1]).abs() < 1e-9);
        }
        for j in 0..2 {
            let total: f64 = a.exponents.iter().map(|c| c[j]).sum();
            assert!(total.abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_families() {
        let t = IntMatrix::from_i64(2, &[1, 1, 0, 1]).unwrap();
        assert_eq!(lyapunov_data(&[t.clone()]), Err(Error::NotErgodic(0)));
        assert_eq!(lyapunov_data(&[cat(), t]), Err(Error::NotCommuting(0, 1)));
    }

    #[test]
    fn box_order_starts_with_e1() {
        let order = box_order(2, 2);
        assert_eq!(order[0], vec![1, 0]);
        assert_eq!(order.len(), 24);
        assert!(order[..8].iter().all(|v| v.iter().all(|x| x.abs() <= 1)));
    }

    #[test]
    fn chi_search_examples() {
        let a = lyapunov_data(&cubic_pair()).unwrap();
        let e1 = a.exponents[0][0].abs();
        assert_eq!(chi_density_search(&a, 0, e1, 5).unwrap(), Some(vec![1, 0]));
        // against a brute-force minimum over the box
        for eps in [0.2, 0.05, 0.01] {
            let mut best = f64::INFINITY;
            for m1 in -30i64..=30 {
                for m2 in -30i64..=30 {
                    if (m1, m2) != (0, 0) {
                        best = best.min(a.chi(0, &[m1, m2]).abs());
                    }
                }
            }
            let found = chi_density_search(&a, 0, eps, 30).unwrap();
            assert_eq!(found.is_some(), best <= eps);
            if let Some(m) = found {
                assert!(a.chi(0, &m).abs() <= eps);
            }
        }
        let flat = lyapunov_data(&[cat()]).unwrap();
        assert!(chi_density_search(&flat, 0, 0.1, 3).is_err());
    }

    #[test]
    fn leaf_images_expand_along_the_leaf() {
        let a = lyapunov_data(&[cat()]).unwrap();
        let i = (0..2).find(|&i| a.exponents[i][0] > 0.0).unwrap();
        let leaf = LeafSet::new(&a, i, vec![0.1, 0.2], vec![0.0, 0.01, 0.02]).unwrap();
        let pts = leaf.points();
        let m = [3i64];
        let image = act_set(&a.element(&m), &pts).unwrap().coords().to_f64_vec();
        let stretch = a.chi(i, &m).exp();
        let v = &leaf.direction;
        for j in 1..3 {
            for c in 0..2 {
                let diff = frac_f64(image[2 * j + c] - image[c]);
                let expect = frac_f64(leaf.params[j] * stretch * v[c]);
                let d = (diff - expect).abs();
                assert!(d.min(1.0 - d) < 1e-9);
            }
        }
        let off = PointSet::float(Space::Torus(2), vec![0.5, 0.5, 0.1, 0.1, 0.2, 0.2]).unwrap();
        assert!(matches!(leaf.check(&off, 1e-9), Err(Error::LeafMismatch(_))));
    }

    #[test]
    fn subordinate_search_expands_a_short_leaf() {
        let a = lyapunov_data(&[cat()]).unwrap();
        let i = (0..2).find(|&i| a.exponents[i][0] > 0.0).unwrap();
        let params: Vec<f64> = (0..400).map(|j| j as f64 * 0.05 / 400.0).collect();
        let leaf = LeafSet::new(&a, i, vec![0.3, 0.6], params).unwrap();
        let opts = GapOptions::with_resolution(32);
        let r = subordinate_search_eps_dense(&a, &leaf, &leaf.points(), 0.1, 8, &opts).unwrap();
        let m = r.found.expect("stretched leaf fills the torus");
        assert!(m[0] > 0);
        assert!(r.checked > 1);
        assert!(r.best.1 < 0.1);
        let stray = PointSet::float(Space::Torus(2), vec![0.5, 0.5]).unwrap();
        assert!(matches!(
            subordinate_search_eps_dense(&a, &leaf, &stray, 0.1, 8, &opts),
            Err(Error::LeafMismatch(_))
        ));
    }
}
