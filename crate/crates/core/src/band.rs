#![allow(clippy::needless_range_loop)]

//! Square banded matrices and a partially pivoted banded LU.
//!
//! The condensed beam mesh couples only neighbouring nodes, so every global
//! matrix has half-bandwidth 9 irrespective of the element count. Both the
//! real pencils and the complex dynamic matrices are stored here.

use std::fmt::Display;
use std::io::Write;
use std::ops::{AddAssign, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scalar field usable by [`BandMatrix`] and [`BandLu`].
pub trait Scalar:
    Copy
    + PartialEq
    + Default
    + Display
    + std::fmt::Debug
    + AddAssign
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + std::ops::Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn modulus(self) -> f64;
    fn from_f64(v: f64) -> Self;
    /// Entry text of a MatrixMarket coordinate line.
    fn matrix_market(self) -> String;
    fn zero() -> Self {
        Self::default()
    }
}

impl Scalar for f64 {
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn matrix_market(self) -> String {
        format!("{self:e}")
    }
}

impl Scalar for Complex64 {
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn from_f64(v: f64) -> Self {
        Complex64::new(v, 0.0)
    }
    fn matrix_market(self) -> String {
        format!("{:e} {:e}", self.re, self.im)
    }
}

/// `n × n` matrix with entries only where `|i - j| <= bandwidth`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix<T> {
    n: usize,
    bw: usize,
    data: Vec<T>,
}

impl<T: Scalar> BandMatrix<T> {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        Self {
            n,
            bw: bandwidth,
            data: vec![T::zero(); n * (2 * bandwidth + 1)],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.n || j >= self.n || i.abs_diff(j) > self.bw {
            return None;
        }
        Some(i * (2 * self.bw + 1) + j + self.bw - i)
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.index(i, j).map_or(T::zero(), |k| self.data[k])
    }

    /// Add `v` to entry `(i, j)`; panics if the entry lies outside the band.
    pub fn add(&mut self, i: usize, j: usize, v: T) {
        let k = self
            .index(i, j)
            .unwrap_or_else(|| panic!("entry ({i}, {j}) outside band {}", self.bw));
        self.data[k] += v;
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n);
        let row = 2 * self.bw + 1;
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.bw);
                let hi = (i + self.bw).min(self.n - 1);
                let mut acc = T::zero();
                for j in lo..=hi {
                    acc += self.data[i * row + j + self.bw - i] * x[j];
                }
                acc
            })
            .collect()
    }

    /// Iterate over stored, non-zero entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.n).flat_map(move |i| {
            let lo = i.saturating_sub(self.bw);
            let hi = (i + self.bw).min(self.n.saturating_sub(1));
            (lo..=hi).filter_map(move |j| {
                let v = self.get(i, j);
                (v != T::zero()).then_some((i, j, v))
            })
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data
            .iter()
            .map(|v| {
                let m = v.modulus();
                m * m
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Largest `|a_ij - a_ji|` over the band.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, j, v) in self.entries() {
            worst = worst.max((v - self.get(j, i)).modulus());
        }
        worst
    }

    /// Keep only the listed rows/columns (in the given order).
    pub fn submatrix(&self, keep: &[usize]) -> Self {
        let mut out = Self::zeros(keep.len(), self.bw);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                if i.abs_diff(j) <= self.bw {
                    let v = self.get(i, j);
                    if v != T::zero() {
                        out.add(a, b, v);
                    }
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> DMatrix<T>
    where
        T: nalgebra::Scalar,
    {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    /// Write in MatrixMarket coordinate format (1-based indices).
    pub fn write_coordinate<W: Write>(&self, mut w: W) -> Result<()> {
        let nnz = self.entries().count();
        let field = if std::any::TypeId::of::<T>() == std::any::TypeId::of::<f64>() {
            "real"
        } else {
            "complex"
        };
        writeln!(w, "%%MatrixMarket matrix coordinate {field} general")?;
        writeln!(w, "{} {} {}", self.n, self.n, nnz)?;
        for (i, j, v) in self.entries() {
            writeln!(w, "{} {} {}", i + 1, j + 1, v.matrix_market())?;
        }
        Ok(())
    }
}

impl BandMatrix<f64> {
    /// `Σ coef_k · A_k` for real matrices of equal shape, promoted to complex.
    pub fn combine_complex(terms: &[(Complex64, &BandMatrix<f64>)]) -> BandMatrix<Complex64> {
        let first = terms.first().expect("at least one term").1;
        let mut out = BandMatrix::<Complex64>::zeros(first.n, first.bw);
        for (coef, m) in terms {
            assert_eq!((m.n, m.bw), (first.n, first.bw));
            for (o, v) in out.data.iter_mut().zip(&m.data) {
                *o += coef * v;
            }
        }
        out
    }

    /// `Σ coef_k · A_k` for real matrices of equal shape.
    pub fn combine(terms: &[(f64, &BandMatrix<f64>)]) -> BandMatrix<f64> {
        let first = terms.first().expect("at least one term").1;
        let mut out = BandMatrix::<f64>::zeros(first.n, first.bw);
        for (coef, m) in terms {
            assert_eq!((m.n, m.bw), (first.n, first.bw));
            for (o, v) in out.data.iter_mut().zip(&m.data) {
                *o += coef * v;
            }
        }
        out
    }

    pub fn mul_dvec(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_vec(self.mul_vec(x.as_slice()))
    }

    /// `xᵀ A x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

/// LU factorization with partial pivoting, `P A = L U`, stored in band form.
///
/// Row interchanges widen the upper band of `U` to `2 * bw`.
#[derive(Debug, Clone)]
pub struct BandLu<T> {
    n: usize,
    bw: usize,
    /// Row `i` holds columns `i - bw ..= i + 2 bw` of the working matrix.
    a: Vec<T>,
    mult: Vec<T>,
    piv: Vec<usize>,
}

impl<T: Scalar> BandLu<T> {
    pub fn factor(m: &BandMatrix<T>) -> Result<Self> {
        let n = m.n;
        let bw = m.bw;
        let stride = 3 * bw + 1;
        let idx = |i: usize, j: usize| i * stride + j + bw - i;
        let mut a = vec![T::zero(); n * stride];
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let hi = (i + bw).min(n.saturating_sub(1));
            for j in lo..=hi {
                a[idx(i, j)] = m.get(i, j);
            }
        }
        let scale = m
            .data
            .iter()
            .map(|v| v.modulus())
            .fold(0.0f64, f64::max)
            .max(f64::MIN_POSITIVE);
        let mut mult = vec![T::zero(); n * bw];
        let mut piv = vec![0usize; n];
        for k in 0..n {
            let last_row = (k + bw).min(n - 1);
            let last_col = (k + 2 * bw).min(n - 1);
            let mut p = k;
            let mut best = a[idx(k, k)].modulus();
            for i in k + 1..=last_row {
                let v = a[idx(i, k)].modulus();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= scale * 1e-300 {
                return Err(Error::Singular(format!("zero pivot in banded LU at row {k}")));
            }
            piv[k] = p;
            if p != k {
                for j in k..=last_col {
                    a.swap(idx(k, j), idx(p, j));
                }
            }
            let pivot = a[idx(k, k)];
            for i in k + 1..=last_row {
                let l = a[idx(i, k)] / pivot;
                mult[k * bw + (i - k - 1)] = l;
                if l == T::zero() {
                    continue;
                }
                a[idx(i, k)] = T::zero();
                for j in k + 1..=last_col {
                    let u = a[idx(k, j)];
                    a[idx(i, j)] += -(l * u);
                }
            }
        }
        Ok(Self { n, bw, a, mult, piv })
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let bw = self.bw;
        let stride = 3 * bw + 1;
        let idx = |i: usize, j: usize| i * stride + j + bw - i;
        assert_eq!(b.len(), n);
        let mut x = b.to_vec();
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                x.swap(k, p);
            }
            let xk = x[k];
            for i in k + 1..=(k + bw).min(n - 1) {
                let l = self.mult[k * bw + (i - k - 1)];
                x[i] += -(l * xk);
            }
        }
        for k in (0..n).rev() {
            let mut acc = x[k];
            for j in k + 1..=(k + 2 * bw).min(n - 1) {
                acc += -(self.a[idx(k, j)] * x[j]);
            }
            x[k] = acc / self.a[idx(k, k)];
        }
        x
    }
}
