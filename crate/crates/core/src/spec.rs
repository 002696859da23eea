use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Error;
use crate::matrix::SquareMatrix;

/// Compressed representation of a block tridiagonal matrix with `n` block
/// rows of `m x m` blocks, optionally closed by corner blocks.
///
/// Storage follows the block labels: `a[i-1] = A_i` for `i = 1..=n`;
/// `b[i-1] = B_i` for `i = 1..=n-1` plus the corner `B_n` last when corners
/// are present; `c` holds `C_1..C_{n-1}`, prefixed by the corner `C_0` when
/// corners are present. Use the 1-based accessors rather than the raw
/// vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTridiagSpec {
    n: usize,
    m: usize,
    a: Vec<SquareMatrix>,
    b: Vec<SquareMatrix>,
    c: Vec<SquareMatrix>,
    has_corners: bool,
}

impl BlockTridiagSpec {
    /// Validates every structural invariant and builds the spec.
    ///
    /// For cornered layouts `b` must end with the corner `B_n` and `c` must
    /// start with the corner `C_0`.
    pub fn new(
        a: Vec<SquareMatrix>,
        b: Vec<SquareMatrix>,
        c: Vec<SquareMatrix>,
        has_corners: bool,
    ) -> Result<Self, Error> {
        let n = a.len();
        if n == 0 {
            return Err(Error::InvalidSpec("at least one diagonal block is required".into()));
        }
        let m = a[0].dim();
        if has_corners {
            if n < 3 {
                return Err(Error::InvalidSpec(format!(
                    "corner layout requires n >= 3, got n = {n}"
                )));
            }
            if b.len() != n {
                return Err(Error::InvalidSpec(format!(
                    "corner layout requires {n} B blocks (B 1..B {n}), got {}",
                    b.len()
                )));
            }
            if c.len() != n {
                return Err(Error::InvalidSpec(format!(
                    "corner layout requires {n} C blocks (C 0..C {}), got {}",
                    n - 1,
                    c.len()
                )));
            }
        } else {
            if b.len() != n - 1 {
                return Err(Error::InvalidSpec(format!(
                    "corner-free layout requires {} B blocks, got {}",
                    n - 1,
                    b.len()
                )));
            }
            if c.len() != n - 1 {
                return Err(Error::InvalidSpec(format!(
                    "corner-free layout requires {} C blocks, got {}",
                    n - 1,
                    c.len()
                )));
            }
        }
        for (label, list) in [("A", &a), ("B", &b), ("C", &c)] {
            for (idx, blk) in list.iter().enumerate() {
                if blk.dim() != m {
                    return Err(Error::InvalidSpec(format!(
                        "{label} block #{idx} has dimension {}, expected m = {m}",
                        blk.dim()
                    )));
                }
                if !blk.is_finite() {
                    return Err(Error::InvalidSpec(format!(
                        "{label} block #{idx} contains a non-finite entry"
                    )));
                }
            }
        }
        Ok(Self {
            n,
            m,
            a,
            b,
            c,
            has_corners,
        })
    }

    /// Scalar (m = 1) cornered spec: `a` holds `a_1..a_n`, `b` holds
    /// `b_1..b_n` with the corner last, `c` holds `c_0..c_{n-1}` with the
    /// corner first.
    pub fn scalar_cornered(
        a: &[Complex64],
        b: &[Complex64],
        c: &[Complex64],
    ) -> Result<Self, Error> {
        Self::new(
            a.iter().map(|&v| SquareMatrix::scalar(v)).collect(),
            b.iter().map(|&v| SquareMatrix::scalar(v)).collect(),
            c.iter().map(|&v| SquareMatrix::scalar(v)).collect(),
            true,
        )
    }

    /// Scalar (m = 1) corner-free spec: `b` and `c` hold the `n - 1`
    /// off-diagonal entries.
    pub fn scalar_tridiagonal(
        a: &[Complex64],
        b: &[Complex64],
        c: &[Complex64],
    ) -> Result<Self, Error> {
        Self::new(
            a.iter().map(|&v| SquareMatrix::scalar(v)).collect(),
            b.iter().map(|&v| SquareMatrix::scalar(v)).collect(),
            c.iter().map(|&v| SquareMatrix::scalar(v)).collect(),
            false,
        )
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn has_corners(&self) -> bool {
        self.has_corners
    }

    /// Diagonal block `A_i`, `1 <= i <= n`.
    pub fn a_block(&self, i: usize) -> &SquareMatrix {
        assert!(1 <= i && i <= self.n, "A index out of range");
        &self.a[i - 1]
    }

    /// Superdiagonal block `B_i`, `1 <= i <= n-1`, or the corner `B_n` when
    /// corners are present.
    pub fn b_block(&self, i: usize) -> &SquareMatrix {
        let max = if self.has_corners { self.n } else { self.n - 1 };
        assert!(1 <= i && i <= max, "B index out of range");
        &self.b[i - 1]
    }

    /// Subdiagonal block `C_j`, `1 <= j <= n-1`, or the corner `C_0` when
    /// corners are present.
    pub fn c_block(&self, j: usize) -> &SquareMatrix {
        if self.has_corners {
            assert!(j <= self.n - 1, "C index out of range");
            &self.c[j]
        } else {
            assert!(1 <= j && j <= self.n - 1, "C index out of range");
            &self.c[j - 1]
        }
    }

    /// Same layout with every diagonal block replaced by `A_i - lambda I`.
    pub fn lambda_shifted(&self, lambda: Complex64) -> Self {
        Self {
            n: self.n,
            m: self.m,
            a: self.a.iter().map(|blk| blk.add_diag(-lambda)).collect(),
            b: self.b.clone(),
            c: self.c.clone(),
            has_corners: self.has_corners,
        }
    }
}
