use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::Error;
use crate::logdet::LogDet;

/// Relative floor on LU pivot magnitudes. A matrix passes the singularity
/// guard iff its smallest pivot magnitude exceeds
/// `PIVOT_GUARD * (1 + max_row_sum_norm)`.
pub const PIVOT_GUARD: f64 = 1e-13;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl SquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            out.data[i * dim + i] = Complex64::ONE;
        }
        out
    }

    /// Builds from `dim * dim` row-major entries.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        assert_eq!(entries.len(), dim * dim, "entry count must be dim^2");
        Self { dim, data: entries }
    }

    /// 1x1 wrapper around a scalar.
    pub fn scalar(value: Complex64) -> Self {
        Self::from_entries(1, vec![value])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&c| c * s).collect(),
        }
    }

    /// `self + s * I`.
    pub fn add_diag(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.data[i * self.dim + i] += s;
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j];
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// Infinity norm: max over rows of the sum of entry moduli.
    pub fn max_row_sum_norm(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.dim {
            let s: f64 = self.row(i).iter().map(|c| c.norm()).sum();
            if s > best {
                best = s;
            }
        }
        best
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(&a, &x)| a * x)
                    .sum::<Complex64>()
            })
            .collect()
    }

    /// Copies `block` into `self` with its (0,0) entry landing at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &SquareMatrix) {
        let b = block.dim;
        assert!(r0 + b <= self.dim && c0 + b <= self.dim, "block out of range");
        for i in 0..b {
            for j in 0..b {
                self.data[(r0 + i) * self.dim + (c0 + j)] = block.data[i * b + j];
            }
        }
    }

    /// Extracts the `size`-dimensional block whose (0,0) entry is at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, size: usize) -> SquareMatrix {
        assert!(r0 + size <= self.dim && c0 + size <= self.dim, "block out of range");
        let mut out = SquareMatrix::zeros(size);
        for i in 0..size {
            for j in 0..size {
                out.data[i * size + j] = self.data[(r0 + i) * self.dim + (c0 + j)];
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let n = self.dim;
        for j in 0..n {
            self.data.swap(a * n + j, b * n + j);
        }
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;

    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix product");
        let n = self.dim;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                let out_row = &mut out.data[i * n..(i + 1) * n];
                for (o, &r) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * r;
                }
            }
        }
        out
    }
}

impl Add for &SquareMatrix {
    type Output = SquareMatrix;

    fn add(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix sum");
        SquareMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &SquareMatrix {
    type Output = SquareMatrix;

    fn sub(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix difference");
        SquareMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

/// Packed LU factors with partial (row) pivoting by maximum modulus.
///
/// Factoring never fails: a zero pivot column is recorded as a zero pivot and
/// elimination under it is skipped (the pivot is the column maximum, so the
/// skipped entries are already zero). Solves are only meaningful when
/// [`LuFactors::passes_guard`] holds; [`LuFactors::solve_vec`] and
/// [`LuFactors::solve_matrix`] do not check it themselves.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: SquareMatrix,
    pivots: Vec<usize>,
    odd_swaps: bool,
    min_pivot: f64,
    inf_norm: f64,
}

impl LuFactors {
    pub fn factor(m: &SquareMatrix) -> Self {
        let n = m.dim();
        let inf_norm = m.max_row_sum_norm();
        let mut lu = m.clone();
        let mut pivots = vec![0usize; n];
        let mut odd_swaps = false;
        let mut min_pivot = f64::INFINITY;

        for k in 0..n {
            let mut best = k;
            let mut best_mag = lu.data[k * n + k].norm_sqr();
            for i in (k + 1)..n {
                let mag = lu.data[i * n + k].norm_sqr();
                if mag > best_mag {
                    best = i;
                    best_mag = mag;
                }
            }
            pivots[k] = best;
            if best != k {
                lu.swap_rows(k, best);
                odd_swaps = !odd_swaps;
            }
            let pivot = lu.data[k * n + k];
            let pivot_mag = pivot.norm();
            if pivot_mag < min_pivot {
                min_pivot = pivot_mag;
            }
            if pivot_mag == 0.0 {
                continue;
            }
            for i in (k + 1)..n {
                let f = lu.data[i * n + k] / pivot;
                lu.data[i * n + k] = f;
                if f == Complex64::ZERO {
                    continue;
                }
                let (upper, lower) = lu.data.split_at_mut(i * n);
                let pivot_row = &upper[k * n + k + 1..k * n + n];
                let target_row = &mut lower[k + 1..n];
                for (t, &p) in target_row.iter_mut().zip(pivot_row) {
                    *t -= f * p;
                }
            }
        }

        Self {
            lu,
            pivots,
            odd_swaps,
            min_pivot,
            inf_norm,
        }
    }

    #[inline]
    pub fn min_pivot_magnitude(&self) -> f64 {
        self.min_pivot
    }

    /// Relative pivot guard: smallest pivot above `PIVOT_GUARD * (1 + ‖M‖_∞)`.
    pub fn passes_guard(&self) -> bool {
        self.min_pivot > PIVOT_GUARD * (1.0 + self.inf_norm)
    }

    /// Determinant from the pivots; exactly zero iff a pivot column was
    /// exactly zero.
    pub fn det(&self) -> Complex64 {
        let n = self.lu.dim();
        let mut d = if self.odd_swaps {
            -Complex64::ONE
        } else {
            Complex64::ONE
        };
        for i in 0..n {
            d *= self.lu.data[i * n + i];
        }
        d
    }

    /// Determinant in overflow-safe (phase, log-magnitude) form.
    pub fn log_det(&self) -> LogDet {
        let n = self.lu.dim();
        let mut out = if self.odd_swaps {
            LogDet::from_complex(-Complex64::ONE)
        } else {
            LogDet::one()
        };
        for i in 0..n {
            let d = self.lu.data[i * n + i];
            if d == Complex64::ZERO {
                return LogDet::zero();
            }
            out *= LogDet::from_complex(d);
        }
        out
    }

    /// Solves `M x = b` from the packed factors. No guard check; a zero pivot
    /// produces non-finite entries.
    pub fn solve_vec(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.dim();
        assert_eq!(b.len(), n, "rhs length mismatch");
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.pivots[k]);
        }
        for i in 1..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu.data[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in (i + 1)..n {
                s -= self.lu.data[i * n + j] * x[j];
            }
            x[i] = s / self.lu.data[i * n + i];
        }
        x
    }

    /// Null-direction candidate read off the U factor: a unit entry at the
    /// most deficient pivot column, back-substituted above it, zero below.
    /// Machine-accurate when the minimal pivot is (numerically) zero.
    pub fn null_vector_candidate(&self) -> Vec<Complex64> {
        let n = self.lu.dim();
        let mut k = 0;
        let mut kmag = f64::INFINITY;
        for i in 0..n {
            let m = self.lu.data[i * n + i].norm();
            if m < kmag {
                kmag = m;
                k = i;
            }
        }
        let floor = f64::EPSILON * (1.0 + self.inf_norm);
        let mut w = vec![Complex64::ZERO; n];
        w[k] = Complex64::ONE;
        for i in (0..k).rev() {
            let mut s = Complex64::ZERO;
            for j in (i + 1)..=k {
                s += self.lu.data[i * n + j] * w[j];
            }
            let mut d = self.lu.data[i * n + i];
            if d == Complex64::ZERO {
                d = Complex64::new(floor, 0.0);
            }
            w[i] = -s / d;
        }
        w
    }

    /// Solves `M X = RHS` column by column. No guard check.
    pub fn solve_matrix(&self, rhs: &SquareMatrix) -> SquareMatrix {
        let n = self.lu.dim();
        assert_eq!(rhs.dim(), n, "rhs dimension mismatch");
        let mut out = SquareMatrix::zeros(n);
        let mut col = vec![Complex64::ZERO; n];
        for j in 0..n {
            for i in 0..n {
                col[i] = rhs.data[i * n + j];
            }
            let x = self.solve_vec(&col);
            for i in 0..n {
                out.data[i * n + j] = x[i];
            }
        }
        out
    }
}

/// Determinant by partially pivoted LU.
pub fn lu_det(m: &SquareMatrix) -> Complex64 {
    LuFactors::factor(m).det()
}

/// Solves `M X = RHS`; fails with [`Error::Singular`] when `M` does not pass
/// the pivot guard.
pub fn lu_solve(m: &SquareMatrix, rhs: &SquareMatrix) -> Result<SquareMatrix, Error> {
    let f = LuFactors::factor(m);
    if !f.passes_guard() {
        return Err(Error::Singular);
    }
    Ok(f.solve_matrix(rhs))
}

/// True iff the smallest LU pivot clears the relative floor
/// `PIVOT_GUARD * (1 + ‖M‖_∞)`.
pub fn singularity_guard(m: &SquareMatrix) -> bool {
    LuFactors::factor(m).passes_guard()
}
