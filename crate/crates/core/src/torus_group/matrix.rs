use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Square integer matrix of determinant one, entries exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(n: usize, entries: Vec<BigInt>) -> Result<IntMatrix> {
        let m = IntMatrix::unchecked(n, entries)?;
        let det = m.det();
        if !det.is_one() {
            return Err(Error::NotSpecialLinear(format!("determinant {det}")));
        }
        Ok(m)
    }

    /// Any square integer matrix, determinant unchecked.
    pub fn unchecked(n: usize, entries: Vec<BigInt>) -> Result<IntMatrix> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        Ok(IntMatrix { n, entries })
    }

    pub fn from_i64(n: usize, entries: &[i64]) -> Result<IntMatrix> {
        IntMatrix::new(n, entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        IntMatrix { n, entries }
    }

    /// `I + s E_ij`.
    pub fn transvection(n: usize, i: usize, j: usize, s: i64) -> IntMatrix {
        let mut m = IntMatrix::identity(n);
        m.entries[i * n + j] += s;
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.n)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n, "matrix dimensions differ");
        let n = self.n;
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * &other.entries[k * n + j];
                }
            }
        }
        IntMatrix { n, entries }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n.saturating_sub(1) {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        sign * &a[n * n - 1]
    }

    /// Exact inverse; integral because the determinant is one.
    pub fn inverse(&self) -> IntMatrix {
        let n = self.n;
        let mut a: Vec<BigRational> = self
            .entries
            .iter()
            .map(|e| BigRational::from_integer(e.clone()))
            .collect();
        let mut inv: Vec<BigRational> = IntMatrix::identity(n)
            .entries
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !a[r * n + c].is_zero())
                .expect("unimodular matrix is invertible");
            for j in 0..n {
                a.swap(c * n + j, p * n + j);
                inv.swap(c * n + j, p * n + j);
            }
            let pivot = a[c * n + c].clone();
            for j in 0..n {
                a[c * n + j] /= &pivot;
                inv[c * n + j] /= &pivot;
            }
            for r in 0..n {
                if r == c || a[r * n + c].is_zero() {
                    continue;
                }
                let f = a[r * n + c].clone();
                for j in 0..n {
                    let (ac, ic) = (a[c * n + j].clone(), inv[c * n + j].clone());
                    a[r * n + j] -= &f * ac;
                    inv[r * n + j] -= &f * ic;
                }
            }
        }
        IntMatrix {
            n,
            entries: inv.into_iter().map(|r| r.to_integer()).collect(),
        }
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> IntMatrix {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = IntMatrix::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_default()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries
            .iter()
            .map(|e| e.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Entries reduced into `0..q`.
    pub fn mod_q(&self, q: i64) -> Vec<i64> {
        let qb = BigInt::from(q);
        self.entries
            .iter()
            .map(|e| {
                let r = e % &qb;
                let r = if r.is_negative() { r + &qb } else { r };
                r.to_i64().expect("reduced below q")
            })
            .collect()
    }
}

impl fmt::Display for IntMatrix {
    /// Row-major entries separated by spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// `S`, `T` and their inverses for `n = 2`; all `E_ij(±1)` for `n >= 3`.
pub fn standard_generators(n: usize) -> Vec<IntMatrix> {
    if n == 2 {
        let s = IntMatrix::from_i64(2, &[0, -1, 1, 0]).expect("det 1");
        let t = IntMatrix::from_i64(2, &[1, 1, 0, 1]).expect("det 1");
        let (si, ti) = (s.inverse(), t.inverse());
        return vec![s, t, si, ti];
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(IntMatrix::transvection(n, i, j, 1));
                out.push(IntMatrix::transvection(n, i, j, -1));
            }
        }
    }
    out
}

/// The list extended by any missing inverses, original order first.
pub fn with_inverses(gens: &[IntMatrix]) -> Vec<IntMatrix> {
    let mut out = gens.to_vec();
    for g in gens {
        let inv = g.inverse();
        if !out.contains(&inv) {
            out.push(inv);
        }
    }
    out
}
