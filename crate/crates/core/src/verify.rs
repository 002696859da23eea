//! Cross-backend identity checks on a single spec, shared by the `verify`
//! command and the test suites.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::det::{
    det_corners, det_no_corners, det_salkuyeh, det_scalar, det_scalar_corners,
    salkuyeh_lambda_from_transfer, salkuyeh_lambda_recursion,
};
use crate::error::Error;
use crate::instances::{unit_circle, unit_disk};
use crate::logdet::LogDet;
use crate::matrix::{lu_solve, LuFactors, SquareMatrix};
use crate::oracle::det_dense;
use crate::spec::BlockTridiagSpec;
use crate::transfer::FactorChain;

/// Relative error against `max(|a|, |b|, 1e-300)`.
pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

/// Entrywise relative error between two matrices.
pub fn matrix_rel_err(a: &SquareMatrix, b: &SquareMatrix) -> f64 {
    assert_eq!(a.dim(), b.dim(), "dimension mismatch");
    let mut worst = 0.0f64;
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let e = rel_err(a[(i, j)], b[(i, j)]);
            if e > worst {
                worst = e;
            }
        }
    }
    worst
}

/// One identity check: worst observed relative error against its tolerance.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub name: &'static str,
    pub max_rel_err: f64,
    pub tol: f64,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.max_rel_err <= self.tol
    }
}

fn sample_z_values(rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut zs = alloc::vec![Complex64::ONE];
    for _ in 0..3 {
        zs.push(unit_circle(rng));
    }
    zs.push(unit_circle(rng) * 0.5);
    zs.push(unit_circle(rng) * 2.0);
    zs
}

/// Product of `det(B_i^{-1} C_{i-1})` over the cornered factors.
fn offdiag_ratio_product(spec: &BlockTridiagSpec) -> Result<Complex64, Error> {
    let mut acc = LogDet::one();
    for i in 1..=spec.n() {
        let ratio = lu_solve(spec.b_block(i), spec.c_block(i - 1))
            .map_err(|_| Error::SingularOffDiagonal(i))?;
        acc *= LuFactors::factor(&ratio).log_det();
    }
    Ok(acc.to_complex())
}

fn cornered_reports(
    spec: &BlockTridiagSpec,
    rng: &mut ChaCha8Rng,
    tol_scale: f64,
) -> Result<Vec<IdentityReport>, Error> {
    let mut reports = Vec::new();
    let zs = sample_z_values(rng);

    // transfer identity vs dense assembly
    let mut worst = 0.0f64;
    for &z in &zs {
        worst = worst.max(rel_err(det_corners(spec, z)?, det_dense(spec, z)?));
    }
    reports.push(IdentityReport {
        name: "lemma1-vs-dense",
        max_rel_err: worst,
        tol: 1e-8 * tol_scale,
    });

    // det T = prod det(B_i^-1 C_{i-1}), independent of the lambda shift
    let expected = offdiag_ratio_product(spec)?;
    let mut worst = 0.0f64;
    let mut lambdas = alloc::vec![Complex64::ZERO];
    for _ in 0..2 {
        lambdas.push(unit_disk(rng) * 2.0);
    }
    for &lam in &lambdas {
        let chain = FactorChain::cornered(spec, Some(lam))?;
        let det_t = chain.shifted_logdet(Complex64::ZERO).to_complex();
        worst = worst.max(rel_err(det_t, expected));
    }
    reports.push(IdentityReport {
        name: "eq5-det-product",
        max_rel_err: worst,
        tol: 1e-8 * tol_scale,
    });

    // the inverse-transfer and symmetrized variants invert C blocks; skip
    // them when a C block fails the guard
    if FactorChain::cornered_inverse(spec, None).is_ok() {
        let mut worst_v1 = 0.0f64;
        let mut worst_v2 = 0.0f64;
        for &z in &zs {
            let lhs = det_corners(spec, z)?;
            worst_v1 = worst_v1.max(rel_err(lhs, variant_inverse_rhs(spec, z)?));
            let pair = lhs * det_corners(spec, Complex64::ONE / z)?;
            worst_v2 = worst_v2.max(rel_err(pair, variant_symmetric_rhs(spec, z)?));
        }
        reports.push(IdentityReport {
            name: "variant-1-inverse",
            max_rel_err: worst_v1,
            tol: 1e-7 * tol_scale,
        });
        reports.push(IdentityReport {
            name: "variant-2-symmetric",
            max_rel_err: worst_v2,
            tol: 1e-7 * tol_scale,
        });
    }

    Ok(reports)
}

/// Right side of the inverse-transfer variant:
/// `(-1)^{nm} (-z)^m det(T^-1 - (1/z) I) det[C_0 .. C_{n-1}]`, evaluated
/// through the inverse factor chain (which inverts the C blocks instead of
/// the B blocks).
pub fn variant_inverse_rhs(spec: &BlockTridiagSpec, z: Complex64) -> Result<Complex64, Error> {
    let inv_chain = FactorChain::cornered_inverse(spec, None)?;
    let m = spec.m();
    let mut prod_c = LogDet::one();
    for j in 0..spec.n() {
        prod_c *= LuFactors::factor(spec.c_block(j)).log_det();
    }
    let mut rhs = inv_chain.shifted_logdet(Complex64::ONE / z)
        * prod_c
        * LogDet::from_complex(-z).powi(m as i32);
    if (spec.n() * m) % 2 == 1 {
        rhs = rhs.negated();
    }
    Ok(rhs.to_complex())
}

/// Right side of the symmetrized variant:
/// `det[T + T^-1 - (z + 1/z) I] det[B_1 C_0 .. B_n C_{n-1}]`, with `T` and
/// `T^-1` formed from their factor chains.
pub fn variant_symmetric_rhs(spec: &BlockTridiagSpec, z: Complex64) -> Result<Complex64, Error> {
    let t = FactorChain::cornered(spec, None)?.form_product();
    let t_inv = FactorChain::cornered_inverse(spec, None)?.form_product();
    let sym = (&t + &t_inv).add_diag(-(z + Complex64::ONE / z));
    let mut prod_bc = LogDet::one();
    for i in 1..=spec.n() {
        prod_bc *= LuFactors::factor(spec.b_block(i)).log_det();
        prod_bc *= LuFactors::factor(spec.c_block(i - 1)).log_det();
    }
    Ok((LuFactors::factor(&sym).log_det() * prod_bc).to_complex())
}

fn corner_free_reports(
    spec: &BlockTridiagSpec,
    tol_scale: f64,
) -> Result<Vec<IdentityReport>, Error> {
    let mut reports = Vec::new();
    let dense = det_dense(spec, Complex64::ONE)?;

    reports.push(IdentityReport {
        name: "theorem2-vs-dense",
        max_rel_err: rel_err(det_no_corners(spec)?, dense),
        tol: 1e-8 * tol_scale,
    });
    reports.push(IdentityReport {
        name: "salkuyeh-vs-dense",
        max_rel_err: rel_err(det_salkuyeh(spec)?.to_complex(), dense),
        tol: 1e-8 * tol_scale,
    });

    if spec.n() >= 2 {
        let rec = salkuyeh_lambda_recursion(spec)?;
        let mut worst = 0.0f64;
        for k in 1..spec.n() {
            let bridged = salkuyeh_lambda_from_transfer(spec, k)?;
            worst = worst.max(matrix_rel_err(&bridged, &rec[k - 1]));
        }
        reports.push(IdentityReport {
            name: "lambda-bridge",
            max_rel_err: worst,
            tol: 1e-8 * tol_scale,
        });
    }

    if spec.m() == 1 {
        reports.push(IdentityReport {
            name: "scalar-vs-block",
            max_rel_err: rel_err(det_scalar(spec)?, det_no_corners(spec)?),
            tol: 1e-9 * tol_scale,
        });
    }

    Ok(reports)
}

/// Runs every identity applicable to the spec's shape, seeding the sampled
/// `z` and `lambda` values from `seed`. Tolerances are multiplied by
/// `tol_scale`.
pub fn verify_spec(
    spec: &BlockTridiagSpec,
    seed: u64,
    tol_scale: f64,
) -> Result<Vec<IdentityReport>, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = if spec.has_corners() {
        cornered_reports(spec, &mut rng, tol_scale)?
    } else {
        corner_free_reports(spec, tol_scale)?
    };
    if spec.has_corners() && spec.m() == 1 {
        reports.push(IdentityReport {
            name: "scalar-vs-block",
            max_rel_err: rel_err(det_scalar_corners(spec)?, det_corners(spec, Complex64::ONE)?),
            tol: 1e-9 * tol_scale,
        });
    }
    Ok(reports)
}
