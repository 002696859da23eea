//! Seeded random instance generation for the tolerance-based test suites:
//! block entries i.i.d. uniform on the complex unit disk, diagonal blocks
//! shifted by `4m I` so the pivot guard and the 1e-8 tolerances stay
//! meaningful.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;
use rand::Rng;

use crate::matrix::SquareMatrix;
use crate::spec::BlockTridiagSpec;

/// Uniform sample from the closed complex unit disk.
pub fn unit_disk<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let r = rng.random::<f64>().sqrt();
    let theta = rng.random::<f64>() * core::f64::consts::TAU;
    Complex64::from_polar(r, theta)
}

/// Uniform sample from the unit circle.
pub fn unit_circle<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random::<f64>() * core::f64::consts::TAU)
}

/// `m x m` block with unit-disk entries.
pub fn unit_disk_matrix<R: Rng + ?Sized>(rng: &mut R, m: usize) -> SquareMatrix {
    let entries: Vec<Complex64> = (0..m * m).map(|_| unit_disk(rng)).collect();
    SquareMatrix::from_entries(m, entries)
}

/// Unit-disk block plus `shift * I`.
pub fn shifted_matrix<R: Rng + ?Sized>(rng: &mut R, m: usize, shift: f64) -> SquareMatrix {
    unit_disk_matrix(rng, m).add_diag(Complex64::new(shift, 0.0))
}

fn diagonal_blocks<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Vec<SquareMatrix> {
    let shift = 4.0 * m as f64;
    (0..n).map(|_| shifted_matrix(rng, m, shift)).collect()
}

/// Well-conditioned cornered instance (`n >= 3`); corner blocks are drawn
/// like any other off-diagonal block.
pub fn random_cornered<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> BlockTridiagSpec {
    let a = diagonal_blocks(rng, n, m);
    let b = (0..n).map(|_| unit_disk_matrix(rng, m)).collect();
    let c = (0..n).map(|_| unit_disk_matrix(rng, m)).collect();
    BlockTridiagSpec::new(a, b, c, true).expect("generated cornered spec is valid")
}

/// Well-conditioned corner-free instance (`n >= 1`).
pub fn random_corner_free<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> BlockTridiagSpec {
    let a = diagonal_blocks(rng, n, m);
    let b = (0..n - 1).map(|_| unit_disk_matrix(rng, m)).collect();
    let c = (0..n - 1).map(|_| unit_disk_matrix(rng, m)).collect();
    BlockTridiagSpec::new(a, b, c, false).expect("generated corner-free spec is valid")
}

/// Corner-free instance with every subdiagonal block identically zero.
pub fn random_corner_free_zero_c<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
) -> BlockTridiagSpec {
    let a = diagonal_blocks(rng, n, m);
    let b = (0..n - 1).map(|_| unit_disk_matrix(rng, m)).collect();
    let c = (0..n - 1).map(|_| SquareMatrix::zeros(m)).collect();
    BlockTridiagSpec::new(a, b, c, false).expect("generated zero-C spec is valid")
}
