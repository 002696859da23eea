use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

/// Errors from spec construction and the numerical operations.
///
/// Singularity is always decided by the relative pivot guard
/// ([`crate::matrix::singularity_guard`]); indices in the block variants are
/// 1-based, matching the block labels `A i`, `B i`, `C i`.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The matrix handed to a solve failed the pivot guard.
    Singular,
    /// Off-diagonal block `B i` failed the pivot guard.
    SingularOffDiagonal(usize),
    /// Leading block `Λ k` of the block recursion failed the guard, so the
    /// recursion cannot proceed past step `k`.
    SingularLeadingBlock(usize),
    /// Partial-product block `T(k)₁₁` failed the guard.
    SingularPartialBlock(usize),
    /// `z = 0` is outside the domain of every cornered evaluation.
    ZeroBoundaryParameter,
    /// Simultaneous root iteration hit its iteration cap. Carries the best
    /// iterate and the worst polynomial residual observed there.
    NoConvergence {
        iterations: usize,
        best: Vec<Complex64>,
        max_residual: f64,
    },
    /// `(lambda, z)` does not satisfy the eigenpair precondition.
    NotAnEigenpair { residual: f64, scale: f64 },
    /// Inverse iteration failed to produce a usable eigenvector.
    DegenerateEigenvector,
    /// Interpolation nodes collided while building a polynomial.
    InterpolationDegenerate,
    /// Two interpolation nodes share the same abscissa.
    DuplicateNode,
    /// A structural invariant was violated; the message names it.
    InvalidSpec(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Singular => write!(f, "matrix failed the singularity guard"),
            Error::SingularOffDiagonal(i) => {
                write!(f, "off-diagonal block B {i} failed the singularity guard")
            }
            Error::SingularLeadingBlock(k) => {
                write!(f, "leading block Lambda {k} failed the singularity guard")
            }
            Error::SingularPartialBlock(k) => {
                write!(f, "partial-product block T({k})_11 failed the singularity guard")
            }
            Error::ZeroBoundaryParameter => {
                write!(f, "boundary parameter z = 0 is not admitted for cornered matrices")
            }
            Error::NoConvergence {
                iterations,
                max_residual,
                ..
            } => write!(
                f,
                "root iteration did not converge after {iterations} iterations \
                 (max residual {max_residual:e})"
            ),
            Error::NotAnEigenpair { residual, scale } => write!(
                f,
                "(lambda, z) is not an eigenpair: |det| = {residual:e} exceeds 1e-6 * {scale:e}"
            ),
            Error::DegenerateEigenvector => {
                write!(f, "inverse iteration stagnated without an eigenvector")
            }
            Error::InterpolationDegenerate => {
                write!(f, "interpolation nodes collided")
            }
            Error::DuplicateNode => write!(f, "duplicate interpolation node"),
            Error::InvalidSpec(msg) => write!(f, "invalid spec: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
