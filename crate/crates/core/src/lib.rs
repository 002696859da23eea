//! Determinants and characteristic polynomials of block tridiagonal
//! matrices, with or without corner blocks.
//!
//! A block tridiagonal matrix with corner blocks carries a boundary
//! parameter `z`: `(1/z) C_0` sits in the upper-right corner and `z B_n` in
//! the lower-left. Its determinant reduces to the determinant of a small
//! `2m x 2m` transfer matrix built from the blocks, and the reduction turns
//! into a duality once the diagonal is shifted by `lambda`: `lambda` is an
//! eigenvalue of `M(z)` exactly when `z` is an eigenvalue of `T(lambda)`.
//! Corner-free determinants come from the upper-left block of a modified
//! product, or equivalently from a Schur-complement recursion on the leading
//! blocks. This crate implements all of these routes, scalar `m = 1` fast
//! paths, and a dense brute-force referee, cross-checked against each other.
//!
//! The crate is `no_std` (it allocates, so a global allocator is required);
//! IO, file formats, and the command-line front end live in the companion
//! `btdet` crate.

#![no_std]

extern crate alloc;

pub mod det;
pub mod error;
pub mod instances;
pub mod logdet;
pub mod matrix;
pub mod oracle;
pub mod poly;
pub mod spec;
pub mod transfer;
pub mod verify;

pub use det::{
    charpoly, charpoly_eval, det, det_corners, det_corners_logdet, det_no_corners,
    det_no_corners_logdet, det_salkuyeh, det_scalar, det_scalar_corners, dual_roots,
    eigenpair_scale, null_vector, salkuyeh_lambda_from_transfer, salkuyeh_lambda_recursion,
    Backend, CharPoly, NullVectorCertificate,
};
pub use error::Error;
pub use logdet::LogDet;
pub use matrix::{lu_det, lu_solve, singularity_guard, LuFactors, SquareMatrix};
pub use num_complex::Complex64;
pub use poly::{poly_interpolate, Polynomial};
pub use spec::BlockTridiagSpec;
pub use transfer::{
    build_transfer, build_transfer_no_corners, partial_transfer, FactorChain, TransferMatrix,
    TransferOrigin,
};
