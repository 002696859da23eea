//! Dense assembly and brute-force determinant evaluation.
//!
//! This is the referee for every identity in the crate: it touches no
//! transfer-matrix code, only block placement and the LU kernel.

use num_complex::Complex64;

use crate::error::Error;
use crate::logdet::LogDet;
use crate::matrix::{LuFactors, SquareMatrix};
use crate::spec::BlockTridiagSpec;

/// Assembles the full `nm x nm` matrix: `A_i` on the block diagonal, `B_i`
/// above, `C_i` below, and, when corners are present, `(1/z) C_0` at block
/// (1, n) and `z B_n` at block (n, 1).
pub fn assemble_dense(spec: &BlockTridiagSpec, z: Complex64) -> Result<SquareMatrix, Error> {
    if spec.has_corners() && z == Complex64::ZERO {
        return Err(Error::ZeroBoundaryParameter);
    }
    let n = spec.n();
    let m = spec.m();
    let mut out = SquareMatrix::zeros(n * m);
    for i in 1..=n {
        out.set_block((i - 1) * m, (i - 1) * m, spec.a_block(i));
    }
    for i in 1..n {
        out.set_block((i - 1) * m, i * m, spec.b_block(i));
        out.set_block(i * m, (i - 1) * m, spec.c_block(i));
    }
    if spec.has_corners() {
        out.set_block(0, (n - 1) * m, &spec.c_block(0).scaled(Complex64::ONE / z));
        out.set_block((n - 1) * m, 0, &spec.b_block(n).scaled(z));
    }
    Ok(out)
}

/// Brute-force determinant: assemble, then one LU factorization.
pub fn det_dense(spec: &BlockTridiagSpec, z: Complex64) -> Result<Complex64, Error> {
    Ok(LuFactors::factor(&assemble_dense(spec, z)?).det())
}

/// Same evaluation kept in overflow-safe form.
pub fn det_dense_logdet(spec: &BlockTridiagSpec, z: Complex64) -> Result<LogDet, Error> {
    Ok(LuFactors::factor(&assemble_dense(spec, z)?).log_det())
}
