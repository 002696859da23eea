//! Construction of the `2m x 2m` transfer matrices associated with a block
//! tridiagonal spec: the cornered product, the corner-free product whose
//! upper-left block carries the determinant, and partial products.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Error;
use crate::logdet::LogDet;
use crate::matrix::{LuFactors, SquareMatrix};
use crate::spec::BlockTridiagSpec;

/// Which product shape a [`TransferMatrix`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransferOrigin {
    Cornered,
    CornerFree,
}

/// Ordered product of companion-like block factors.
///
/// For a cornered spec the factors are
/// `[[-B_i^-1 (A_i - lambda I), -B_i^-1 C_{i-1}], [I, 0]]` for `i = n..1`;
/// the determinant of the product is independent of `lambda` and equals the
/// product of `det(B_i^-1 C_{i-1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    matrix: SquareMatrix,
    block_size: usize,
    origin: TransferOrigin,
    lambda_shift: Option<Complex64>,
}

impl TransferMatrix {
    /// The dense `2m x 2m` product.
    #[inline]
    pub fn matrix(&self) -> &SquareMatrix {
        &self.matrix
    }

    /// `2m`.
    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `m`.
    #[inline]
    pub fn block_size(&self) -> usize {
        self.block_size
    }

    #[inline]
    pub fn origin(&self) -> TransferOrigin {
        self.origin
    }

    #[inline]
    pub fn lambda_shift(&self) -> Option<Complex64> {
        self.lambda_shift
    }

    /// Upper-left `m x m` block.
    pub fn upper_left_block(&self) -> SquareMatrix {
        self.matrix.block(0, 0, self.block_size)
    }
}

/// `[[top_left, top_right], [I, 0]]`.
fn companion_factor(top_left: &SquareMatrix, top_right: &SquareMatrix) -> SquareMatrix {
    let m = top_left.dim();
    let mut f = SquareMatrix::zeros(2 * m);
    f.set_block(0, 0, top_left);
    f.set_block(0, m, top_right);
    f.set_block(m, 0, &SquareMatrix::identity(m));
    f
}

/// Factor `i` of the cornered product, `1 <= i <= n`:
/// `[[-B_i^-1 (A_i - lambda I), -B_i^-1 C_{i-1}], [I, 0]]`.
pub(crate) fn cornered_factor(
    spec: &BlockTridiagSpec,
    i: usize,
    lambda: Complex64,
) -> Result<SquareMatrix, Error> {
    let b = spec.b_block(i);
    let lu = LuFactors::factor(b);
    if !lu.passes_guard() {
        return Err(Error::SingularOffDiagonal(i));
    }
    let a_shift = spec.a_block(i).add_diag(-lambda);
    let top_left = lu.solve_matrix(&a_shift).scaled(-Complex64::ONE);
    let top_right = lu.solve_matrix(spec.c_block(i - 1)).scaled(-Complex64::ONE);
    Ok(companion_factor(&top_left, &top_right))
}

/// Factor `k` of the corner-free product, `1 <= k <= n`. The leftmost factor
/// (`k = n`) carries no inverse; the rightmost (`k = 1`) has `-B_1^-1` as its
/// upper-right block.
fn corner_free_factor(
    spec: &BlockTridiagSpec,
    k: usize,
    lambda: Complex64,
) -> Result<SquareMatrix, Error> {
    let n = spec.n();
    if k == n {
        let top_left = spec.a_block(n).add_diag(-lambda).scaled(-Complex64::ONE);
        let top_right = spec.c_block(n - 1).scaled(-Complex64::ONE);
        return Ok(companion_factor(&top_left, &top_right));
    }
    let b = spec.b_block(k);
    let lu = LuFactors::factor(b);
    if !lu.passes_guard() {
        return Err(Error::SingularOffDiagonal(k));
    }
    let a_shift = spec.a_block(k).add_diag(-lambda);
    let top_left = lu.solve_matrix(&a_shift).scaled(-Complex64::ONE);
    let top_right = if k == 1 {
        lu.solve_matrix(&SquareMatrix::identity(spec.m()))
            .scaled(-Complex64::ONE)
    } else {
        lu.solve_matrix(spec.c_block(k - 1)).scaled(-Complex64::ONE)
    };
    Ok(companion_factor(&top_left, &top_right))
}

/// Full cornered transfer matrix; `lambda` (default 0) shifts every diagonal
/// block to `A_i - lambda I`.
pub fn build_transfer(
    spec: &BlockTridiagSpec,
    lambda: Option<Complex64>,
) -> Result<TransferMatrix, Error> {
    if !spec.has_corners() {
        return Err(Error::InvalidSpec(
            "cornered transfer matrix requires corner blocks".into(),
        ));
    }
    let lam = lambda.unwrap_or(Complex64::ZERO);
    let mut t = SquareMatrix::identity(2 * spec.m());
    for i in 1..=spec.n() {
        t = &cornered_factor(spec, i, lam)? * &t;
    }
    Ok(TransferMatrix {
        matrix: t,
        block_size: spec.m(),
        origin: TransferOrigin::Cornered,
        lambda_shift: lambda,
    })
}

/// Full corner-free transfer matrix (`n >= 2`).
pub fn build_transfer_no_corners(
    spec: &BlockTridiagSpec,
    lambda: Option<Complex64>,
) -> Result<TransferMatrix, Error> {
    if spec.has_corners() {
        return Err(Error::InvalidSpec(
            "corner-free transfer matrix requires a spec without corners".into(),
        ));
    }
    if spec.n() < 2 {
        return Err(Error::InvalidSpec(
            "corner-free transfer matrix requires n >= 2".into(),
        ));
    }
    let lam = lambda.unwrap_or(Complex64::ZERO);
    let mut t = SquareMatrix::identity(2 * spec.m());
    for k in 1..=spec.n() {
        t = &corner_free_factor(spec, k, lam)? * &t;
    }
    Ok(TransferMatrix {
        matrix: t,
        block_size: spec.m(),
        origin: TransferOrigin::CornerFree,
        lambda_shift: lambda,
    })
}

/// Ordered factor sequence of a cornered transfer product, kept unformed.
///
/// Explicitly multiplying the factors grows entries like the product of the
/// factor norms, which in double precision wipes out the small half of the
/// transfer spectrum long before anything overflows. Determinants of
/// `T - z I` are therefore evaluated through the block-cyclic embedding
///
/// ```text
///     [ F_1  -I            ]
///     [      F_2  -I       ]
///     [           ..   -I  ]
///     [ -zI            F_n ]
/// ```
///
/// whose determinant equals `det(F_n .. F_1 - z I)` exactly (both are
/// degree-2m polynomials in `z` with the same roots and the same value at
/// `z = 0`), and whose LU factorization is backward stable in the factors.
#[derive(Debug, Clone)]
pub struct FactorChain {
    factors: Vec<SquareMatrix>,
    dim: usize,
}

impl FactorChain {
    /// Factors `F_1 .. F_n` of the cornered product, rightmost first.
    pub fn cornered(spec: &BlockTridiagSpec, lambda: Option<Complex64>) -> Result<Self, Error> {
        if !spec.has_corners() {
            return Err(Error::InvalidSpec(
                "cornered factor chain requires corner blocks".into(),
            ));
        }
        let lam = lambda.unwrap_or(Complex64::ZERO);
        let factors = (1..=spec.n())
            .map(|i| cornered_factor(spec, i, lam))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            factors,
            dim: 2 * spec.m(),
        })
    }

    /// Factor sequence of `T^-1`: each `[[P, Q], [I, 0]]` inverts in closed
    /// form to `[[0, I], [Q^-1, -Q^-1 P]]`, which trades the `B` solves for
    /// `C` solves, so every `C_{i-1}` must pass the guard.
    pub fn cornered_inverse(
        spec: &BlockTridiagSpec,
        lambda: Option<Complex64>,
    ) -> Result<Self, Error> {
        if !spec.has_corners() {
            return Err(Error::InvalidSpec(
                "cornered factor chain requires corner blocks".into(),
            ));
        }
        let lam = lambda.unwrap_or(Complex64::ZERO);
        let m = spec.m();
        let mut factors = Vec::with_capacity(spec.n());
        for i in (1..=spec.n()).rev() {
            let c = spec.c_block(i - 1);
            let lu = LuFactors::factor(c);
            if !lu.passes_guard() {
                return Err(Error::Singular);
            }
            // Q^-1 = -C^-1 B, -Q^-1 P = -C^-1 (A - lambda I)
            let bottom_left = lu.solve_matrix(spec.b_block(i)).scaled(-Complex64::ONE);
            let bottom_right = lu
                .solve_matrix(&spec.a_block(i).add_diag(-lam))
                .scaled(-Complex64::ONE);
            let mut f = SquareMatrix::zeros(2 * m);
            f.set_block(0, m, &SquareMatrix::identity(m));
            f.set_block(m, 0, &bottom_left);
            f.set_block(m, m, &bottom_right);
            factors.push(f);
        }
        Ok(Self { factors, dim: 2 * m })
    }

    /// `2m`.
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The explicitly multiplied product (subject to the growth caveat
    /// above; fine for eigenvector extraction and moderate chains).
    pub fn form_product(&self) -> SquareMatrix {
        let mut t = SquareMatrix::identity(self.dim);
        for f in &self.factors {
            t = f * &t;
        }
        t
    }

    fn embedding(&self, z: Complex64) -> SquareMatrix {
        let n = self.factors.len();
        let d = self.dim;
        let mut g = SquareMatrix::zeros(n * d);
        for (k, f) in self.factors.iter().enumerate() {
            g.set_block(k * d, k * d, f);
        }
        let minus_i = SquareMatrix::identity(d).scaled(-Complex64::ONE);
        for k in 0..n - 1 {
            g.set_block(k * d, (k + 1) * d, &minus_i);
        }
        g.set_block((n - 1) * d, 0, &SquareMatrix::identity(d).scaled(-z));
        g
    }

    /// `det(T - z I)` in log form, via the cyclic embedding.
    pub fn shifted_logdet(&self, z: Complex64) -> LogDet {
        if self.factors.len() == 1 {
            return LuFactors::factor(&self.factors[0].add_diag(-z)).log_det();
        }
        LuFactors::factor(&self.embedding(z)).log_det()
    }

    /// One Newton step on `det(T - z I) = 0` using the embedding's
    /// log-derivative; `None` when the step is unusable.
    pub fn newton_step(&self, z: Complex64) -> Option<Complex64> {
        let n = self.factors.len();
        let d = self.dim;
        if n == 1 {
            let f = LuFactors::factor(&self.factors[0].add_diag(-z));
            if f.min_pivot_magnitude() == 0.0 {
                return Some(z);
            }
            let inv = f.solve_matrix(&SquareMatrix::identity(d));
            let tr = inv.trace();
            let step = Complex64::ONE / tr;
            return if step.re.is_finite() && step.im.is_finite() {
                Some(z + step)
            } else {
                None
            };
        }
        let g = LuFactors::factor(&self.embedding(z));
        if g.min_pivot_magnitude() == 0.0 {
            return Some(z);
        }
        // d/dz log det G = tr(G^-1 dG/dz), dG/dz = -I at block (n, 1)
        let mut trace = Complex64::ZERO;
        let mut e = alloc::vec![Complex64::ZERO; n * d];
        for c in 0..d {
            e[(n - 1) * d + c] = Complex64::ONE;
            let x = g.solve_vec(&e);
            e[(n - 1) * d + c] = Complex64::ZERO;
            trace -= x[c];
        }
        if trace == Complex64::ZERO || !trace.re.is_finite() || !trace.im.is_finite() {
            return None;
        }
        let step = Complex64::ONE / trace;
        if step.re.is_finite() && step.im.is_finite() {
            Some(z - step)
        } else {
            None
        }
    }
}

/// Partial product `T(k)` of the first `k` corner-free factors, counted from
/// the rightmost; `T(0)` is the identity and `T(n)` the full product.
pub fn partial_transfer(
    spec: &BlockTridiagSpec,
    k: usize,
    lambda: Option<Complex64>,
) -> Result<TransferMatrix, Error> {
    if spec.has_corners() {
        return Err(Error::InvalidSpec(
            "partial transfer products are defined for corner-free specs".into(),
        ));
    }
    assert!(k <= spec.n(), "partial product index out of range");
    let lam = lambda.unwrap_or(Complex64::ZERO);
    let mut t = SquareMatrix::identity(2 * spec.m());
    for j in 1..=k {
        t = &corner_free_factor(spec, j, lam)? * &t;
    }
    Ok(TransferMatrix {
        matrix: t,
        block_size: spec.m(),
        origin: TransferOrigin::CornerFree,
        lambda_shift: lambda,
    })
}
