//! Determinant and characteristic-polynomial evaluations: the cornered
//! transfer-matrix identity, its corner-free upper-left-block form, the
//! Schur-complement block recursion, scalar (m = 1) fast paths, dual-root
//! extraction, and null-vector certificates.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::Error;
use crate::logdet::LogDet;
use crate::matrix::{LuFactors, SquareMatrix};
use crate::oracle;
use crate::poly::{leja_order, poly_interpolate, Polynomial};
use crate::spec::BlockTridiagSpec;
use crate::transfer::{
    build_transfer, build_transfer_no_corners, cornered_factor, partial_transfer, FactorChain,
};

/// Eigenpair admission threshold for [`null_vector`], relative to the scale
/// returned by [`eigenpair_scale`].
pub const EIGENPAIR_TOL: f64 = 1e-6;

fn require_corners(spec: &BlockTridiagSpec) -> Result<(), Error> {
    if spec.has_corners() {
        Ok(())
    } else {
        Err(Error::InvalidSpec("operation requires corner blocks".into()))
    }
}

fn require_corner_free(spec: &BlockTridiagSpec) -> Result<(), Error> {
    if spec.has_corners() {
        Err(Error::InvalidSpec("operation requires a corner-free spec".into()))
    } else {
        Ok(())
    }
}

fn require_nonzero_z(z: Complex64) -> Result<(), Error> {
    if z == Complex64::ZERO {
        Err(Error::ZeroBoundaryParameter)
    } else {
        Ok(())
    }
}

/// Product of `det B_i` for `i = 1..=count`, accumulated in the log domain.
fn prod_det_b(spec: &BlockTridiagSpec, count: usize) -> LogDet {
    let mut acc = LogDet::one();
    for i in 1..=count {
        acc *= LuFactors::factor(spec.b_block(i)).log_det();
    }
    acc
}

/// `(-z)^{-m} * det_tz * prod_b`, the common right-hand side of both
/// cornered identities (the plain determinant adds a `(-1)^{nm}` on top).
fn transfer_identity_rhs(det_tz: LogDet, prod_b: LogDet, m: usize, z: Complex64) -> LogDet {
    det_tz * prod_b * LogDet::from_complex(-z).powi(m as i32).recip()
}

fn sign_pow(l: LogDet, exponent: usize) -> LogDet {
    if exponent % 2 == 0 {
        l
    } else {
        l.negated()
    }
}

/// Determinant of a cornered spec at boundary parameter `z`, evaluated as
/// `(-1)^{nm} (-z)^{-m} det[T - z I] det[B_1 .. B_n]`, kept in log form.
pub fn det_corners_logdet(spec: &BlockTridiagSpec, z: Complex64) -> Result<LogDet, Error> {
    require_corners(spec)?;
    require_nonzero_z(z)?;
    let chain = FactorChain::cornered(spec, None)?;
    let prod_b = prod_det_b(spec, spec.n());
    let rhs = transfer_identity_rhs(chain.shifted_logdet(z), prod_b, spec.m(), z);
    Ok(sign_pow(rhs, spec.n() * spec.m()))
}

/// Materialized form of [`det_corners_logdet`].
pub fn det_corners(spec: &BlockTridiagSpec, z: Complex64) -> Result<Complex64, Error> {
    det_corners_logdet(spec, z).map(|l| l.to_complex())
}

/// `det[lambda I - M(z)]` evaluated through the lambda-shifted transfer
/// matrix: `(-z)^{-m} det[T(lambda) - z I] det[B_1 .. B_n]`.
pub fn charpoly_eval(
    spec: &BlockTridiagSpec,
    z: Complex64,
    lambda: Complex64,
) -> Result<Complex64, Error> {
    require_corners(spec)?;
    require_nonzero_z(z)?;
    let chain = FactorChain::cornered(spec, Some(lambda))?;
    let prod_b = prod_det_b(spec, spec.n());
    Ok(transfer_identity_rhs(chain.shifted_logdet(z), prod_b, spec.m(), z).to_complex())
}

/// Monic characteristic polynomial of `M(z)` with the pre-normalization
/// deviation of its leading coefficient from 1 kept as a quality metric.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPoly {
    pub poly: Polynomial,
    pub monic_defect: f64,
}

/// Upper bound on the infinity norm of the assembled matrix, computed from
/// the blocks alone.
fn dense_norm_bound(spec: &BlockTridiagSpec, z: Complex64) -> f64 {
    let n = spec.n();
    let mut bound = 0.0f64;
    for i in 1..=n {
        let mut s = spec.a_block(i).max_row_sum_norm();
        if i <= n - 1 {
            s += spec.b_block(i).max_row_sum_norm();
        }
        if i >= 2 {
            s += spec.c_block(i - 1).max_row_sum_norm();
        }
        if spec.has_corners() {
            if i == 1 {
                s += spec.c_block(0).max_row_sum_norm() / z.norm();
            }
            if i == n {
                s += spec.b_block(n).max_row_sum_norm() * z.norm();
            }
        }
        if s > bound {
            bound = s;
        }
    }
    bound
}

/// Equispaced nodes on a circle strictly enclosing every eigenvalue, in Leja
/// order so the divided-difference table stays well conditioned.
fn circle_nodes(radius: f64, count: usize) -> Vec<Complex64> {
    let tau = core::f64::consts::TAU;
    let mut nodes: Vec<Complex64> = (0..count)
        .map(|j| Complex64::from_polar(radius, tau * j as f64 / count as f64))
        .collect();
    leja_order(&mut nodes);
    nodes
}

/// The monic degree-`nm` polynomial `lambda -> det[lambda I - M(z)]`,
/// recovered by sampling [`charpoly_eval`] at `nm + 1` points on an
/// eigenvalue-enclosing circle and interpolating.
///
/// The circle radius is four norm bounds out, not one: the leading
/// coefficient is recovered with relative error about
/// `eps * (1 + bound/radius)^degree`, which a tight circle lets grow past
/// the monicity budget at degree ~50.
pub fn charpoly(spec: &BlockTridiagSpec, z: Complex64) -> Result<CharPoly, Error> {
    require_corners(spec)?;
    require_nonzero_z(z)?;
    let degree = spec.n() * spec.m();
    let radius = 1.0 + 4.0 * dense_norm_bound(spec, z);
    let nodes = circle_nodes(radius, degree + 1);
    let prod_b = prod_det_b(spec, spec.n());
    let mut samples = Vec::with_capacity(nodes.len());
    for &lam in &nodes {
        let chain = FactorChain::cornered(spec, Some(lam))?;
        let value = transfer_identity_rhs(chain.shifted_logdet(z), prod_b, spec.m(), z);
        samples.push((lam, value.to_complex()));
    }
    let p = poly_interpolate(&samples).map_err(|e| match e {
        Error::DuplicateNode => Error::InterpolationDegenerate,
        other => other,
    })?;
    if p.degree() != degree {
        return Err(Error::InterpolationDegenerate);
    }
    let lead = p.leading();
    let monic_defect = (lead - Complex64::ONE).norm();
    let mut coeffs = p.scaled(Complex64::ONE / lead).coeffs().to_vec();
    coeffs[degree] = Complex64::ONE;
    Ok(CharPoly {
        poly: Polynomial::new(coeffs),
        monic_defect,
    })
}

/// Sampling radius for the eigenvalues of a transfer chain: their geometric
/// mean `|det T|^(1/2m)`, clamped to a band around the typical growth scale.
/// Transfer spectra pair large eigenvalues with small ones, so this circle
/// balances the relative accuracy of the recovered polynomial across the
/// whole spectrum, where a norm-bound circle would drown the small
/// eigenvalues.
fn transfer_node_radius(chain: &FactorChain) -> f64 {
    let dim = chain.dim() as f64;
    let log_det = chain.shifted_logdet(Complex64::ZERO).log_magnitude();
    let geo = (log_det / dim).exp();
    geo.clamp(1e-8, 1e8)
}

/// Safeguarded Newton sweeps on `det(T - z I) = 0` through the chain
/// embedding: a step is only accepted when it shrinks the determinant
/// magnitude, halving it otherwise, so iterates cannot sail past a basin.
fn polish_transfer_eigenvalue(chain: &FactorChain, z0: Complex64) -> Complex64 {
    let mut z = z0;
    let mut best_log = chain.shifted_logdet(z0).log_magnitude();
    if best_log == f64::NEG_INFINITY {
        return z0;
    }
    for _ in 0..12 {
        let Some(next) = chain.newton_step(z) else {
            break;
        };
        let mut step = next - z;
        if step.norm() <= 1e-15 * z.norm() + f64::MIN_POSITIVE {
            break;
        }
        let mut accepted = false;
        for _ in 0..6 {
            let cand = z + step;
            let lg = chain.shifted_logdet(cand).log_magnitude();
            if lg < best_log {
                best_log = lg;
                z = cand;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted || best_log == f64::NEG_INFINITY {
            break;
        }
    }
    z
}

/// Interpolation samples of `det(T - z I)` over the nodes, rescaled by the
/// largest magnitude so the node values stay inside double range.
fn chain_det_samples(chain: &FactorChain, nodes: &[Complex64]) -> Vec<(Complex64, Complex64)> {
    let logdets: Vec<LogDet> = nodes.iter().map(|&zj| chain.shifted_logdet(zj)).collect();
    let peak = logdets
        .iter()
        .map(|l| l.log_magnitude())
        .fold(f64::NEG_INFINITY, f64::max);
    let shift = if peak.is_finite() { peak } else { 0.0 };
    nodes
        .iter()
        .zip(&logdets)
        .map(|(&zj, l)| (zj, l.phase() * (l.log_magnitude() - shift).exp()))
        .collect()
}

/// Log-magnitude estimates for the `2m` eigenvalues of the chain's product.
///
/// `det(T - mu^n I)` is sampled around one circle through the n-fold
/// covering `z = mu^n` and interpolated as a degree-`2mn` polynomial in
/// `mu`; the covering compresses the coefficient bow by a factor `n`, which
/// keeps the band-bearing coefficients above the noise floor. The magnitudes
/// are then read off the Newton polygon: along the concave hull of
/// `(j, ln|c_{jn}|)` each segment of width `w` carries `w` roots whose
/// log-magnitude is minus the segment slope. Angles never enter; the band
/// passes downstream recover them.
fn lifted_log_magnitudes(chain: &FactorChain, n: usize) -> Result<Vec<f64>, Error> {
    let two_m = chain.dim();
    let lift_degree = two_m * n;
    let log_rz = (chain.shifted_logdet(Complex64::ZERO).log_magnitude() / two_m as f64)
        .clamp(-18.0, 18.0);
    let r_mu = (log_rz / n as f64).exp();
    let nodes = circle_nodes(r_mu, lift_degree + 1);

    let logdets: Vec<LogDet> = nodes
        .iter()
        .map(|&mu| chain.shifted_logdet(mu.powu(n as u32)))
        .collect();
    let peak = logdets
        .iter()
        .map(|l| l.log_magnitude())
        .fold(f64::NEG_INFINITY, f64::max);
    let shift = if peak.is_finite() { peak } else { 0.0 };
    let samples: Vec<(Complex64, Complex64)> = nodes
        .iter()
        .zip(&logdets)
        .map(|(&mu, l)| (mu, l.phase() * (l.log_magnitude() - shift).exp()))
        .collect();

    let p = poly_interpolate(&samples).map_err(|e| match e {
        Error::DuplicateNode => Error::InterpolationDegenerate,
        other => other,
    })?;

    // stride coefficients of the covering, floored so noise zeros and a
    // truncated tail stay representable on the hull
    let mut lnc: Vec<f64> = (0..=two_m)
        .map(|j| {
            let k = j * n;
            let mag = if k <= p.degree() { p.coeffs()[k].norm() } else { 0.0 };
            mag.max(1e-300).ln()
        })
        .collect();
    // both end coefficients are known exactly (the polynomial is monic in z
    // and its constant term is det T); the interpolated values there are
    // noise-dominated whenever the spectrum is wide, so anchor the hull
    lnc[0] = (chain.shifted_logdet(Complex64::ZERO).log_magnitude() - shift).max(-690.0);
    lnc[two_m] = -shift;

    // upper concave hull by monotone scan
    let mut hull: Vec<usize> = Vec::new();
    for j in 0..=two_m {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let lhs = (lnc[j] - lnc[a]) * (b - a) as f64;
            let rhs = (lnc[b] - lnc[a]) * (j - a) as f64;
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(j);
    }

    let mut logs = Vec::with_capacity(two_m);
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let slope = (lnc[b] - lnc[a]) / (b - a) as f64;
        for _ in a..b {
            logs.push((-slope).clamp(-300.0, 300.0));
        }
    }
    Ok(logs)
}

/// The `2m` boundary parameters `z` at which `lambda` is an eigenvalue of
/// `M(z)`: the eigenvalues of `T(lambda)`.
///
/// Transfer spectra routinely span more magnitude than one interpolation
/// circle can resolve in doubles, so the roots are recovered in two stages:
/// the n-fold covering lift estimates every eigenvalue magnitude, the
/// magnitudes are grouped into bands, and each band gets its own `2m+1`-node
/// interpolation circle, whose nearby roots are then polished by safeguarded
/// Newton steps on the embedded determinant.
pub fn dual_roots(spec: &BlockTridiagSpec, lambda: Complex64) -> Result<Vec<Complex64>, Error> {
    require_corners(spec)?;
    let chain = FactorChain::cornered(spec, Some(lambda))?;
    let two_m = chain.dim();

    let log_mags = lifted_log_magnitudes(&chain, spec.n())?;

    // group sorted magnitudes into bands separated by more than 1.5 e-folds
    let mut bands: Vec<(f64, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=log_mags.len() {
        if i == log_mags.len() || log_mags[i] - log_mags[i - 1] > 1.5 {
            let center = log_mags[start..i].iter().sum::<f64>() / (i - start) as f64;
            bands.push((center, i - start));
            start = i;
        }
    }

    // per band, deflate the bands below (each contributes a factor ~ -z on
    // this circle) so the local function is a degree-`count` polynomial in
    // the band's own roots, up to exponentially small contamination from
    // the neighbors; that leaves no selection ambiguity, and the polish
    // step absorbs the contamination
    let mut roots = Vec::with_capacity(two_m);
    let mut below = 0usize;
    for &(center, count) in &bands {
        let radius = center.exp();
        let nodes = circle_nodes(radius, count + 1);
        let logdets: Vec<LogDet> = nodes
            .iter()
            .map(|&zj| {
                chain.shifted_logdet(zj) * LogDet::from_complex(-zj).powi(below as i32).recip()
            })
            .collect();
        let peak = logdets
            .iter()
            .map(|l| l.log_magnitude())
            .fold(f64::NEG_INFINITY, f64::max);
        let shift = if peak.is_finite() { peak } else { 0.0 };
        let samples: Vec<(Complex64, Complex64)> = nodes
            .iter()
            .zip(&logdets)
            .map(|(&zj, l)| (zj, l.phase() * (l.log_magnitude() - shift).exp()))
            .collect();
        let p = poly_interpolate(&samples).map_err(|e| match e {
            Error::DuplicateNode => Error::InterpolationDegenerate,
            other => other,
        })?;
        if p.degree() != count {
            return Err(Error::InterpolationDegenerate);
        }
        let seeds = match p.roots_from_radius(radius) {
            Ok(r) => r,
            Err(Error::NoConvergence { best, .. }) => best,
            Err(e) => return Err(e),
        };
        for seed in seeds {
            roots.push(polish_transfer_eigenvalue(&chain, seed));
        }
        below += count;
    }
    Ok(roots)
}

/// Scale against which an eigenpair residual is judged: the largest
/// `|det[lambda I - M(z)]|` over the sampling nodes used by [`dual_roots`].
pub fn eigenpair_scale(spec: &BlockTridiagSpec, lambda: Complex64) -> Result<f64, Error> {
    require_corners(spec)?;
    let chain = FactorChain::cornered(spec, Some(lambda))?;
    let prod_b = prod_det_b(spec, spec.n());
    let nodes = circle_nodes(transfer_node_radius(&chain), chain.dim() + 1);
    Ok(nodes
        .iter()
        .map(|&zj| {
            transfer_identity_rhs(chain.shifted_logdet(zj), prod_b, spec.m(), zj)
                .to_complex()
                .norm()
        })
        .fold(0.0, f64::max))
}

/// Corner-free determinant through the upper-left block of the transfer
/// matrix: `(-1)^{nm} det[T(0)_11] det[B_1 .. B_{n-1}]`. The single-row case
/// is `det A_1` directly.
pub fn det_no_corners_logdet(spec: &BlockTridiagSpec) -> Result<LogDet, Error> {
    require_corner_free(spec)?;
    if spec.n() == 1 {
        return Ok(LuFactors::factor(spec.a_block(1)).log_det());
    }
    let t = build_transfer_no_corners(spec, None)?;
    let det_t11 = LuFactors::factor(&t.upper_left_block()).log_det();
    let prod_b = prod_det_b(spec, spec.n() - 1);
    Ok(sign_pow(det_t11 * prod_b, spec.n() * spec.m()))
}

/// Materialized form of [`det_no_corners_logdet`].
pub fn det_no_corners(spec: &BlockTridiagSpec) -> Result<Complex64, Error> {
    det_no_corners_logdet(spec).map(|l| l.to_complex())
}

/// Runs the block recursion `L_1 = A_1`,
/// `L_k = A_k - C_{k-1} L_{k-1}^{-1} B_{k-1}`, returning every `L_k` and the
/// log-domain product of their determinants. The guard is checked exactly
/// where an inverse is taken (`k < n`); breakdown is surfaced, never
/// perturbed.
fn salkuyeh_scan(spec: &BlockTridiagSpec) -> Result<(Vec<SquareMatrix>, LogDet), Error> {
    require_corner_free(spec)?;
    let n = spec.n();
    let mut leading = Vec::with_capacity(n);
    let mut acc = LogDet::one();
    let mut current = spec.a_block(1).clone();
    for k in 1..=n {
        let f = LuFactors::factor(&current);
        acc *= f.log_det();
        leading.push(current.clone());
        if k == n {
            break;
        }
        if !f.passes_guard() {
            return Err(Error::SingularLeadingBlock(k));
        }
        let x = f.solve_matrix(spec.b_block(k));
        current = spec.a_block(k + 1) - &(spec.c_block(k) * &x);
    }
    Ok((leading, acc))
}

/// Corner-free determinant as the product of leading-block determinants of
/// the Salkuyeh recursion, in overflow-safe log form.
pub fn det_salkuyeh(spec: &BlockTridiagSpec) -> Result<LogDet, Error> {
    salkuyeh_scan(spec).map(|(_, acc)| acc)
}

/// The recursion's `L_1 .. L_n` sequence.
pub fn salkuyeh_lambda_recursion(spec: &BlockTridiagSpec) -> Result<Vec<SquareMatrix>, Error> {
    salkuyeh_scan(spec).map(|(seq, _)| seq)
}

/// The same `L_k` obtained from partial transfer products:
/// `L_k = -B_k T(k)_11 [T(k-1)_11]^{-1}`, valid for `1 <= k <= n-1`.
pub fn salkuyeh_lambda_from_transfer(
    spec: &BlockTridiagSpec,
    k: usize,
) -> Result<SquareMatrix, Error> {
    require_corner_free(spec)?;
    assert!(
        k >= 1 && k < spec.n(),
        "bridge index must satisfy 1 <= k <= n-1"
    );
    let tk = partial_transfer(spec, k, None)?.upper_left_block();
    let tk_prev = partial_transfer(spec, k - 1, None)?.upper_left_block();
    let f = LuFactors::factor(&tk_prev.transpose());
    if !f.passes_guard() {
        return Err(Error::SingularPartialBlock(k - 1));
    }
    let x = f.solve_matrix(&tk.transpose()).transpose();
    Ok((spec.b_block(k) * &x).scaled(-Complex64::ONE))
}

fn require_scalar(spec: &BlockTridiagSpec) -> Result<(), Error> {
    if spec.m() != 1 {
        return Err(Error::InvalidSpec("scalar fast path requires m = 1".into()));
    }
    Ok(())
}

/// Division-free determinant of a scalar cornered spec at `z = 1`:
/// `(-1)^{n+1}(b_n..b_1 + c_{n-1}..c_0)` plus the trace of the 2x2 companion
/// product whose first factor couples the corners.
pub fn det_scalar_corners(spec: &BlockTridiagSpec) -> Result<Complex64, Error> {
    require_scalar(spec)?;
    require_corners(spec)?;
    let n = spec.n();
    let a = |i: usize| spec.a_block(i)[(0, 0)];
    let b = |i: usize| spec.b_block(i)[(0, 0)];
    let c = |j: usize| spec.c_block(j)[(0, 0)];

    let mut prod_b = Complex64::ONE;
    for i in 1..=n {
        prod_b *= b(i);
    }
    let mut prod_c = Complex64::ONE;
    for j in 0..n {
        prod_c *= c(j);
    }

    let mut t = SquareMatrix::identity(2);
    for k in 1..=n {
        let off = if k == 1 { -b(n) * c(0) } else { -b(k - 1) * c(k - 1) };
        let f = SquareMatrix::from_entries(
            2,
            alloc::vec![a(k), off, Complex64::ONE, Complex64::ZERO],
        );
        t = &f * &t;
    }

    let boundary = if n % 2 == 0 {
        -(prod_b + prod_c)
    } else {
        prod_b + prod_c
    };
    Ok(boundary + t.trace())
}

/// Division-free determinant of a scalar corner-free spec: the (1,1) entry
/// of the 2x2 companion product whose first factor is `[[a_1, 0], [1, 0]]`.
pub fn det_scalar(spec: &BlockTridiagSpec) -> Result<Complex64, Error> {
    require_scalar(spec)?;
    require_corner_free(spec)?;
    let n = spec.n();
    let a = |i: usize| spec.a_block(i)[(0, 0)];
    let b = |i: usize| spec.b_block(i)[(0, 0)];
    let c = |j: usize| spec.c_block(j)[(0, 0)];

    let mut t = SquareMatrix::identity(2);
    for k in 1..=n {
        let off = if k == 1 { Complex64::ZERO } else { -b(k - 1) * c(k - 1) };
        let f = SquareMatrix::from_entries(
            2,
            alloc::vec![a(k), off, Complex64::ONE, Complex64::ZERO],
        );
        t = &f * &t;
    }
    Ok(t[(0, 0)])
}

/// Reconstructed null-vector components with the worst relative residual of
/// the block linear system they must satisfy.
#[derive(Debug, Clone)]
pub struct NullVectorCertificate {
    psi: Vec<Vec<Complex64>>,
    residual: f64,
}

impl NullVectorCertificate {
    /// Residual below which the certificate counts as valid.
    pub const VALID_RESIDUAL: f64 = 1e-7;

    /// The components `psi_1 .. psi_n`, each of length `m`.
    pub fn psi(&self) -> &[Vec<Complex64>] {
        &self.psi
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn is_valid(&self) -> bool {
        self.residual <= Self::VALID_RESIDUAL
    }
}

fn normalize_by_largest(v: &mut [Complex64]) -> bool {
    let mut idx = 0;
    let mut mag = 0.0f64;
    for (i, x) in v.iter().enumerate() {
        let n = x.norm();
        if n > mag {
            mag = n;
            idx = i;
        }
    }
    if mag == 0.0 || !mag.is_finite() {
        return false;
    }
    let pivot = v[idx];
    for x in v.iter_mut() {
        *x /= pivot;
    }
    true
}

fn eigen_residual(t: &SquareMatrix, z: Complex64, w: &[Complex64]) -> f64 {
    t.mul_vec(w)
        .iter()
        .zip(w)
        .map(|(a, b)| (a - b * z).norm())
        .fold(0.0, f64::max)
}

/// Eigenvector of `T` for eigenvalue `z`: the triangular null-vector read
/// off the LU factors of `T - z I` (exact when a pivot underflows to zero),
/// refined by inverse iteration when the factors are solvable.
fn eigenvector_for(t: &SquareMatrix, z: Complex64) -> Result<Vec<Complex64>, Error> {
    let dim = t.dim();
    let tnorm = t.max_row_sum_norm();
    let target = 1e-13 * (1.0 + tnorm);
    let accept = 1e-6 * (1.0 + tnorm);
    let mut best_res = f64::INFINITY;
    let mut best: Option<Vec<Complex64>> = None;

    let f = LuFactors::factor(&t.add_diag(-z));

    let finite = |w: &[Complex64]| w.iter().all(|x| x.re.is_finite() && x.im.is_finite());

    let mut direct = f.null_vector_candidate();
    if finite(&direct) && normalize_by_largest(&mut direct) {
        best_res = eigen_residual(t, z, &direct);
        best = Some(direct);
    }

    if best_res > target && f.min_pivot_magnitude() > 0.0 {
        let mut v = alloc::vec![Complex64::ONE; dim];
        for _ in 0..20 {
            let mut w = f.solve_vec(&v);
            if !finite(&w) || !normalize_by_largest(&mut w) {
                break;
            }
            let res = eigen_residual(t, z, &w);
            if res < best_res {
                best_res = res;
                best = Some(w.clone());
            }
            if res <= target {
                break;
            }
            v = w;
        }
    }

    match best {
        Some(v) if best_res <= accept => Ok(v),
        _ => Err(Error::DegenerateEigenvector),
    }
}

/// Worst block-row residual of the boundary-closed linear system, relative
/// to the largest component of the reconstructed vector.
fn boundary_residual(
    spec: &BlockTridiagSpec,
    z: Complex64,
    lambda: Complex64,
    psi: &[Vec<Complex64>],
) -> f64 {
    let n = spec.n();
    let psi_norm = psi
        .iter()
        .flat_map(|v| v.iter())
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if psi_norm == 0.0 {
        return f64::INFINITY;
    }
    let mut worst = 0.0f64;
    for k in 1..=n {
        let mut row = spec.a_block(k).add_diag(-lambda).mul_vec(&psi[k - 1]);
        let others: [Vec<Complex64>; 2] = if k == 1 {
            [
                spec.b_block(1).mul_vec(&psi[1]),
                spec.c_block(0)
                    .scaled(Complex64::ONE / z)
                    .mul_vec(&psi[n - 1]),
            ]
        } else if k == n {
            [
                spec.b_block(n).scaled(z).mul_vec(&psi[0]),
                spec.c_block(n - 1).mul_vec(&psi[n - 2]),
            ]
        } else {
            [
                spec.b_block(k).mul_vec(&psi[k]),
                spec.c_block(k - 1).mul_vec(&psi[k - 2]),
            ]
        };
        for extra in &others {
            for (r, e) in row.iter_mut().zip(extra) {
                *r += e;
            }
        }
        let row_norm = row.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if row_norm > worst {
            worst = row_norm;
        }
    }
    worst / psi_norm
}

/// Reconstructs a null vector of `M(z) - lambda I` from the transfer-matrix
/// eigenvector at eigenvalue `z` and certifies it against the block system.
///
/// Requires `(lambda, z)` to be an eigenpair within [`EIGENPAIR_TOL`] of the
/// sampled determinant scale.
pub fn null_vector(
    spec: &BlockTridiagSpec,
    z: Complex64,
    lambda: Complex64,
) -> Result<NullVectorCertificate, Error> {
    require_corners(spec)?;
    require_nonzero_z(z)?;
    let scale = eigenpair_scale(spec, lambda)?;
    let value = charpoly_eval(spec, z, lambda)?;
    if value.norm() > EIGENPAIR_TOL * scale {
        return Err(Error::NotAnEigenpair {
            residual: value.norm(),
            scale,
        });
    }

    let t = build_transfer(spec, Some(lambda))?;
    let v = eigenvector_for(t.matrix(), z)?;
    let m = spec.m();
    let n = spec.n();

    // v = [psi_1; (1/z) psi_n]; forward states are [psi_{k+1}; psi_k].
    let mut psi: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    psi.push(v[..m].to_vec());
    let mut state = v;
    for k in 1..n {
        state = cornered_factor(spec, k, lambda)?.mul_vec(&state);
        psi.push(state[..m].to_vec());
    }

    let residual = boundary_residual(spec, z, lambda, &psi);
    Ok(NullVectorCertificate { psi, residual })
}

/// Which evaluation route computes a determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Fast scalar paths when `m = 1` (cornered only at `z = 1`), otherwise
    /// the block recursion for corner-free specs and the cornered
    /// transfer-matrix identity.
    Auto,
    /// Cornered transfer-matrix identity.
    Lemma1,
    /// Corner-free upper-left-block identity.
    Theorem2,
    /// Corner-free leading-block recursion.
    Salkuyeh,
    /// Division-free m = 1 companion products.
    Scalar,
    /// Dense assembly plus one LU factorization.
    Dense,
}

/// Dispatching determinant entry point. Validates backend/shape
/// compatibility before computing; every route reports in log form.
pub fn det(spec: &BlockTridiagSpec, z: Complex64, backend: Backend) -> Result<LogDet, Error> {
    match backend {
        Backend::Auto => {
            if spec.m() == 1 {
                if spec.has_corners() {
                    if z == Complex64::ONE {
                        det_scalar_corners(spec).map(LogDet::from_complex)
                    } else {
                        det_corners_logdet(spec, z)
                    }
                } else {
                    det_scalar(spec).map(LogDet::from_complex)
                }
            } else if spec.has_corners() {
                det_corners_logdet(spec, z)
            } else {
                det_salkuyeh(spec)
            }
        }
        Backend::Lemma1 => det_corners_logdet(spec, z),
        Backend::Theorem2 => det_no_corners_logdet(spec),
        Backend::Salkuyeh => det_salkuyeh(spec),
        Backend::Scalar => {
            require_scalar(spec)?;
            if spec.has_corners() {
                if z != Complex64::ONE {
                    return Err(Error::InvalidSpec(
                        "the cornered scalar fast path is defined at z = 1 only".into(),
                    ));
                }
                det_scalar_corners(spec).map(LogDet::from_complex)
            } else {
                det_scalar(spec).map(LogDet::from_complex)
            }
        }
        Backend::Dense => oracle::det_dense_logdet(spec, z),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::lu_det;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit_circulant() -> BlockTridiagSpec {
        let one = c(1.0, 0.0);
        BlockTridiagSpec::scalar_cornered(&[c(0.0, 0.0); 3], &[one; 3], &[one; 3]).unwrap()
    }

    /// Deterministic dense block with a diagonal shift, for tests that need
    /// a generic well-conditioned instance without pulling in an RNG.
    fn test_block(m: usize, seed: usize, shift: f64) -> SquareMatrix {
        let mut entries = Vec::with_capacity(m * m);
        for t in 0..m * m {
            let s = (seed * 31 + t * 7) as f64;
            entries.push(c(0.4 * (s * 0.7).sin(), 0.3 * (s * 1.3).cos()));
        }
        let mut blk = SquareMatrix::from_entries(m, entries);
        if shift != 0.0 {
            blk = blk.add_diag(c(shift, 0.0));
        }
        blk
    }

    fn test_spec(n: usize, m: usize, corners: bool) -> BlockTridiagSpec {
        let shift = 4.0 * m as f64;
        let a = (0..n).map(|i| test_block(m, 100 + i, shift)).collect();
        let off = if corners { n } else { n - 1 };
        let b = (0..off).map(|i| test_block(m, 200 + i, 0.0)).collect();
        let cc = (0..off).map(|i| test_block(m, 300 + i, 0.0)).collect();
        BlockTridiagSpec::new(a, b, cc, corners).unwrap()
    }

    #[test]
    fn circulant_det_at_one_and_two() {
        let spec = unit_circulant();
        let d1 = det_corners(&spec, c(1.0, 0.0)).unwrap();
        assert!((d1 - c(2.0, 0.0)).norm() < 1e-12);
        let d2 = det_corners(&spec, c(2.0, 0.0)).unwrap();
        assert!((d2 - c(2.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn det_corners_rejects_zero_z() {
        assert_eq!(
            det_corners(&unit_circulant(), Complex64::ZERO),
            Err(Error::ZeroBoundaryParameter)
        );
    }

    #[test]
    fn det_corners_matches_dense_on_block_instance() {
        let spec = test_spec(5, 2, true);
        for z in [c(1.0, 0.0), c(0.3, 0.9), c(-2.0, 0.5)] {
            let fast = det_corners(&spec, z).unwrap();
            let slow = oracle::det_dense(&spec, z).unwrap();
            assert!((fast - slow).norm() <= 1e-8 * slow.norm().max(1.0));
        }
    }

    #[test]
    fn charpoly_eval_at_zero_lambda_flips_sign() {
        let spec = test_spec(4, 2, true);
        let z = c(0.6, -0.4);
        let lhs = charpoly_eval(&spec, z, Complex64::ZERO).unwrap();
        let rhs = det_corners(&spec, z).unwrap(); // nm = 8, even
        assert!((lhs - rhs).norm() < 1e-8 * rhs.norm().max(1.0));
    }

    #[test]
    fn circulant_top_eigenvalue() {
        let spec = unit_circulant();
        let v = charpoly_eval(&spec, c(1.0, 0.0), c(2.0, 0.0)).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn circulant_charpoly_coefficients() {
        let spec = unit_circulant();
        let cp = charpoly(&spec, c(1.0, 0.0)).unwrap();
        assert_eq!(cp.poly.degree(), 3);
        assert!(cp.monic_defect < 1e-9);
        let want = [c(-2.0, 0.0), c(-3.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        for (got, want) in cp.poly.coeffs().iter().zip(want) {
            assert!((got - want).norm() < 1e-10);
        }
    }

    #[test]
    fn charpoly_trace_and_constant_coefficients() {
        let a = [c(1.5, 0.2), c(-0.7, 1.1), c(2.25, -0.4)];
        let one = c(1.0, 0.0);
        let spec = BlockTridiagSpec::scalar_cornered(&a, &[one; 3], &[one; 3]).unwrap();
        let z = c(1.0, 0.0);
        let cp = charpoly(&spec, z).unwrap();
        let trace: Complex64 = a.iter().sum();
        assert!((cp.poly.coeffs()[2] + trace).norm() < 1e-10);
        // constant term = (-1)^{nm} det M(z), nm = 3
        let d = oracle::det_dense(&spec, z).unwrap();
        assert!((cp.poly.coeffs()[0] + d).norm() < 1e-10);
    }

    #[test]
    fn circulant_dual_roots() {
        let spec = unit_circulant();
        let mut roots = dual_roots(&spec, Complex64::ZERO).unwrap();
        roots.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - c(0.0, -1.0)).norm() < 1e-10);
        assert!((roots[1] - c(0.0, 1.0)).norm() < 1e-10);
        // multiset product equals det T
        let t = build_transfer(&spec, Some(Complex64::ZERO)).unwrap();
        let prod: Complex64 = roots.iter().product();
        assert!((prod - lu_det(t.matrix())).norm() < 1e-10);
    }

    #[test]
    fn dual_roots_satisfy_eigenvalue_equation() {
        let spec = test_spec(4, 2, true);
        let lambda = c(0.3, 0.5);
        let scale = eigenpair_scale(&spec, lambda).unwrap();
        for z in dual_roots(&spec, lambda).unwrap() {
            let v = charpoly_eval(&spec, z, lambda).unwrap();
            assert!(v.norm() <= 1e-6 * scale);
        }
    }

    #[test]
    fn open_chain_two_rows() {
        let spec = BlockTridiagSpec::scalar_tridiagonal(
            &[c(2.0, 0.0), c(3.0, 0.0)],
            &[c(1.0, 0.0)],
            &[c(1.0, 0.0)],
        )
        .unwrap();
        let d = det_no_corners(&spec).unwrap();
        assert!((d - c(5.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn open_chain_block_diagonal_limit() {
        let spec = BlockTridiagSpec::scalar_tridiagonal(
            &[c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)],
            &[c(1.0, 0.0), c(1.0, 0.0)],
            &[c(0.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        let d = det_no_corners(&spec).unwrap();
        assert!((d - c(24.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn open_chain_single_row() {
        let spec = BlockTridiagSpec::scalar_tridiagonal(&[c(7.0, 0.0)], &[], &[]).unwrap();
        assert!((det_no_corners(&spec).unwrap() - c(7.0, 0.0)).norm() < 1e-14);
        assert!((det_salkuyeh(&spec).unwrap().to_complex() - c(7.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn salkuyeh_degenerates_to_diagonal_product() {
        let m = 2;
        let a: Vec<SquareMatrix> = (0..4).map(|i| test_block(m, 400 + i, 8.0)).collect();
        let want: Complex64 = a.iter().map(lu_det).product();
        let b = (0..3).map(|i| test_block(m, 500 + i, 0.0)).collect();
        let zeros = (0..3).map(|_| SquareMatrix::zeros(m)).collect();
        let spec = BlockTridiagSpec::new(a, b, zeros, false).unwrap();
        let got = det_salkuyeh(&spec).unwrap().to_complex();
        assert!((got - want).norm() < 1e-9 * want.norm());
    }

    #[test]
    fn salkuyeh_agrees_with_theorem2_and_dense() {
        let spec = test_spec(8, 2, false);
        let s = det_salkuyeh(&spec).unwrap().to_complex();
        let t = det_no_corners(&spec).unwrap();
        let d = oracle::det_dense(&spec, Complex64::ONE).unwrap();
        let scale = d.norm().max(1.0);
        assert!((s - d).norm() <= 1e-8 * scale);
        assert!((t - d).norm() <= 1e-8 * scale);
    }

    #[test]
    fn bridge_first_block_is_a1() {
        let spec = test_spec(4, 2, false);
        let l1 = salkuyeh_lambda_from_transfer(&spec, 1).unwrap();
        let a1 = spec.a_block(1);
        for i in 0..2 {
            for j in 0..2 {
                assert!((l1[(i, j)] - a1[(i, j)]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn bridge_matches_direct_recursion() {
        let spec = test_spec(6, 2, false);
        let rec = salkuyeh_lambda_recursion(&spec).unwrap();
        for k in 1..spec.n() {
            let bridged = salkuyeh_lambda_from_transfer(&spec, k).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    let want = rec[k - 1][(i, j)];
                    let got = bridged[(i, j)];
                    assert!(
                        (got - want).norm() <= 1e-9 * want.norm().max(1.0),
                        "k={k} entry ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn scalar_corners_closed_forms() {
        assert!((det_scalar_corners(&unit_circulant()).unwrap() - c(2.0, 0.0)).norm() < 1e-14);
        let one = c(1.0, 0.0);
        let ones = BlockTridiagSpec::scalar_cornered(&[one; 3], &[one; 3], &[one; 3]).unwrap();
        assert!(det_scalar_corners(&ones).unwrap().norm() < 1e-14);
    }

    #[test]
    fn scalar_corners_tolerates_zero_offdiagonals() {
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        let spec = BlockTridiagSpec::scalar_cornered(
            &[c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)],
            &[zero, one, zero],
            &[one, zero, zero],
        )
        .unwrap();
        let got = det_scalar_corners(&spec).unwrap();
        let want = oracle::det_dense(&spec, Complex64::ONE).unwrap();
        assert!((got - want).norm() < 1e-12);
    }

    #[test]
    fn scalar_open_chain_values() {
        let single = BlockTridiagSpec::scalar_tridiagonal(&[c(7.0, 0.0)], &[], &[]).unwrap();
        assert_eq!(det_scalar(&single).unwrap(), c(7.0, 0.0));
        let pair = BlockTridiagSpec::scalar_tridiagonal(
            &[c(2.0, 0.0), c(3.0, 0.0)],
            &[c(1.0, 0.0)],
            &[c(1.0, 0.0)],
        )
        .unwrap();
        assert!((det_scalar(&pair).unwrap() - c(5.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn null_vector_circulant_uniform_mode() {
        let spec = unit_circulant();
        let cert = null_vector(&spec, c(1.0, 0.0), c(2.0, 0.0)).unwrap();
        assert!(cert.residual() <= 1e-8);
        assert!(cert.is_valid());
        let first = cert.psi()[0][0];
        for comp in cert.psi() {
            assert!((comp[0] - first).norm() < 1e-8);
        }
    }

    #[test]
    fn null_vector_at_imaginary_boundary() {
        let spec = unit_circulant();
        let cert = null_vector(&spec, c(0.0, 1.0), Complex64::ZERO).unwrap();
        assert!(cert.residual() <= 1e-7);
    }

    #[test]
    fn null_vector_rejects_non_eigenpair() {
        let spec = unit_circulant();
        let err = null_vector(&spec, c(1.0, 0.0), c(1.0, 0.0));
        assert!(matches!(err, Err(Error::NotAnEigenpair { .. })));
    }

    #[test]
    fn dispatch_validates_backend_shape() {
        let open = BlockTridiagSpec::scalar_tridiagonal(&[c(7.0, 0.0)], &[], &[]).unwrap();
        assert!(matches!(
            det(&open, Complex64::ONE, Backend::Lemma1),
            Err(Error::InvalidSpec(_))
        ));
        let cornered = unit_circulant();
        assert!(matches!(
            det(&cornered, Complex64::ONE, Backend::Salkuyeh),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            det(&cornered, c(2.0, 0.0), Backend::Scalar),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn dispatch_routes_agree() {
        let spec = unit_circulant();
        let auto = det(&spec, Complex64::ONE, Backend::Auto).unwrap().to_complex();
        let dense = det(&spec, Complex64::ONE, Backend::Dense).unwrap().to_complex();
        assert!((auto - c(2.0, 0.0)).norm() < 1e-12);
        assert!((dense - c(2.0, 0.0)).norm() < 1e-12);
    }
}
