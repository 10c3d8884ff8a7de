use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::RwLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Samples per axis the support must contain.
pub const MIN_SUPPORT_SAMPLES: usize = 32;

/// Product of one-dimensional bumps `exp(-1/(1 - (x/w)^2))` on `|x| < w`,
/// `w = eps / (2n)`, normalized to unit integral by quadrature on the regular
/// grid `j / grid`.
///
/// With that half-width the support lies within `eps / 2` of the identity in
/// the sup, Euclidean and `l1` metrics alike.
#[derive(Debug)]
pub struct BumpFunction {
    eps: f64,
    n: usize,
    grid: usize,
    half_width: f64,
    scale: f64,
    profile: Vec<f64>,
    coeffs: RwLock<HashMap<Vec<i64>, Complex64>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayRecord {
    pub m_norm: u64,
    pub abs_coeff: f64,
    pub decay_ratio: f64,
}

fn raw(x: f64, w: f64) -> f64 {
    let t = x / w;
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - t * t)).exp()
    }
}

/// Signed representative of `j / grid` in `[-1/2, 1/2)`.
fn centered(j: usize, grid: usize) -> f64 {
    if 2 * j < grid {
        j as f64 / grid as f64
    } else {
        j as f64 / grid as f64 - 1.0
    }
}

fn centered_f(x: f64) -> f64 {
    x - x.round()
}

pub fn build_bump(eps: f64, n: usize, grid: usize) -> Result<BumpFunction> {
    if !(eps > 0.0 && eps < 1.0) || n == 0 {
        return Err(Error::InvalidParameter(format!("need 0 < eps < 1 and n >= 1, got eps = {eps}, n = {n}")));
    }
    let half_width = eps / (2.0 * n as f64);
    let unscaled: Vec<f64> = (0..grid).map(|j| raw(centered(j, grid), half_width)).collect();
    let inside = unscaled.iter().filter(|&&v| v > 0.0).count();
    if inside < MIN_SUPPORT_SAMPLES {
        return Err(Error::GridTooCoarse {
            inside,
            needed: MIN_SUPPORT_SAMPLES,
        });
    }
    let scale = grid as f64 / unscaled.iter().sum::<f64>();
    Ok(BumpFunction {
        eps,
        n,
        grid,
        half_width,
        scale,
        profile: unscaled.iter().map(|v| v * scale).collect(),
        coeffs: RwLock::new(HashMap::new()),
    })
}

impl BumpFunction {
    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Normalized one-dimensional profile at the grid points `j / grid`.
    pub fn profile(&self) -> &[f64] {
        &self.profile
    }

    /// Grid sample at multi-index `idx`.
    pub fn sample(&self, idx: &[usize]) -> f64 {
        idx.iter().map(|&j| self.profile[j % self.grid]).product()
    }

    /// The function itself at any point of the torus.
    pub fn value(&self, x: &[f64]) -> f64 {
        x.iter()
            .map(|&xi| self.scale * raw(centered_f(xi), self.half_width))
            .product()
    }

    fn support(&self) -> Vec<(f64, f64)> {
        self.profile
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0.0)
            .map(|(j, &v)| (centered(j, self.grid), v))
            .collect()
    }

    fn for_each_support_cell(&self, mut f: impl FnMut(&[f64], f64)) {
        let axis = self.support();
        let mut idx = vec![0usize; self.n];
        let mut x = vec![0.0; self.n];
        loop {
            let mut w = 1.0;
            for (i, &j) in idx.iter().enumerate() {
                x[i] = axis[j].0;
                w *= axis[j].1;
            }
            f(&x, w);
            let mut i = 0;
            while i < self.n {
                idx[i] += 1;
                if idx[i] < axis.len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == self.n {
                break;
            }
        }
    }

    /// Quadrature of the grid samples over `T^n`.
    pub fn integral(&self) -> f64 {
        let mut s = 0.0;
        self.for_each_support_cell(|_, w| s += w);
        s / (self.grid as f64).powi(self.n as i32)
    }

    /// Quadrature of the normalized function on an independent 1-D grid,
    /// raised to the `n`-th power by the product structure.
    pub fn integral_at(&self, resolution: usize) -> f64 {
        let s: f64 = (0..resolution)
            .map(|j| self.scale * raw(centered(j, resolution), self.half_width))
            .sum();
        (s / resolution as f64).powi(self.n as i32)
    }

    /// `int g^2` by quadrature.
    pub fn l2_mass(&self) -> f64 {
        let s: f64 = self.profile.iter().map(|v| v * v).sum();
        (s / self.grid as f64).powi(self.n as i32)
    }

    fn check_alias(&self, m: &[i64]) -> Result<()> {
        if m.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: m.len(),
            });
        }
        let top = m.iter().map(|x| x.abs()).max().unwrap_or(0);
        if 4 * top as u128 > self.grid as u128 {
            return Err(Error::AliasingRisk {
                resolution: self.grid,
                frequency: top,
            });
        }
        Ok(())
    }

    /// `int g(x) e(m x) dx` for one axis.
    pub fn fourier_coeff_1d(&self, m: i64) -> Result<Complex64> {
        if 4 * m.unsigned_abs() as u128 > self.grid as u128 {
            return Err(Error::AliasingRisk {
                resolution: self.grid,
                frequency: m,
            });
        }
        let s: Complex64 = self
            .support()
            .iter()
            .map(|&(x, v)| Complex64::from_polar(v, 2.0 * PI * m as f64 * x))
            .sum();
        Ok(s / self.grid as f64)
    }

    /// `int g(x) e(<m, x>) dx` by direct quadrature over the support cells; memoized.
    pub fn fourier_coeff(&self, m: &[i64]) -> Result<Complex64> {
        self.check_alias(m)?;
        if let Some(c) = self.coeffs.read().expect("coefficient cache poisoned").get(m) {
            return Ok(*c);
        }
        let mut s = Complex64::new(0.0, 0.0);
        self.for_each_support_cell(|x, w| {
            let phase: f64 = x.iter().zip(m).map(|(xi, &mi)| xi * mi as f64).sum();
            s += Complex64::from_polar(w, 2.0 * PI * phase);
        });
        let c = s / (self.grid as f64).powi(self.n as i32);
        self.coeffs
            .write()
            .expect("coefficient cache poisoned")
            .insert(m.to_vec(), c);
        Ok(c)
    }

    /// `max_{|m|_1 = l} |g^(m)|` and its ratio to `exp(-sqrt(eps l))` for
    /// `l = 0..=max_norm`, from products of one-dimensional coefficients.
    pub fn decay_profile(&self, max_norm: u64) -> Result<Vec<DecayRecord>> {
        let one: Vec<f64> = (0..=max_norm as i64)
            .map(|m| self.fourier_coeff_1d(m).map(|c| c.norm()))
            .collect::<Result<_>>()?;
        // best[d][l]: largest product over d coordinates with |m|_1 = l
        let mut best = one.clone();
        for _ in 1..self.n {
            best = (0..=max_norm as usize)
                .map(|l| (0..=l).map(|a| best[l - a] * one[a]).fold(0.0, f64::max))
                .collect();
        }
        Ok(best
            .iter()
            .enumerate()
            .map(|(l, &abs_coeff)| DecayRecord {
                m_norm: l as u64,
                abs_coeff,
                decay_ratio: abs_coeff * (self.eps * l as f64).sqrt().exp(),
            })
            .collect())
    }
}

pub fn decay_csv(records: &[DecayRecord]) -> String {
    let mut s = String::from("m_norm,abs_coeff,decay_ratio\n");
    for r in records {
        let _ = writeln!(s, "{},{:e},{:e}", r.m_norm, r.abs_coeff, r.decay_ratio);
    }
    s
}
