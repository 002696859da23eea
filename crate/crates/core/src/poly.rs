use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::Error;

const ROOT_MAX_ITERATIONS: usize = 1000;
const ROOT_UPDATE_TOL: f64 = 1e-12;

/// Complex polynomial stored by ascending coefficients.
///
/// Trailing exact zeros are trimmed at construction so the leading
/// coefficient is nonzero, except for the zero polynomial which keeps a
/// single zero coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == Complex64::ZERO {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::ZERO);
        }
        Self { coeffs }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// `1 + max_k |c_k / c_d|`; every root lies inside this radius.
    pub fn cauchy_bound(&self) -> f64 {
        let lead = self.leading();
        let mut best = 0.0f64;
        for &c in &self.coeffs[..self.coeffs.len() - 1] {
            let r = (c / lead).norm();
            if r > best {
                best = r;
            }
        }
        1.0 + best
    }

    /// All `degree` roots with multiplicity by simultaneous
    /// Weierstrass (Durand-Kerner) iteration.
    ///
    /// Initial guesses are roots of unity scaled by the Cauchy bound and
    /// perturbed by the fixed offset `1e-3 * exp(0.4 i)`, which breaks the
    /// symmetries that stall the plain iteration. Converged when every update
    /// is below `1e-12 * (1 + |root|)`; after 1000 sweeps the iterate is
    /// returned inside [`Error::NoConvergence`].
    pub fn roots(&self) -> Result<Vec<Complex64>, Error> {
        self.roots_from_radius(self.cauchy_bound())
    }

    /// Same iteration started from a caller-chosen radius, for polynomials
    /// whose extreme coefficients are noise-dominated and whose Cauchy bound
    /// is therefore meaningless while the root scale is known.
    pub fn roots_from_radius(&self, radius: f64) -> Result<Vec<Complex64>, Error> {
        let d = self.degree();
        assert!(d >= 1, "root finding needs degree >= 1");
        let lead = self.leading();

        if d == 1 {
            return Ok(vec![-self.coeffs[0] / lead]);
        }

        let offset = Complex64::from_polar(1e-3, 0.4);
        let tau = core::f64::consts::TAU;
        let mut zs: Vec<Complex64> = (0..d)
            .map(|j| {
                let unity = Complex64::from_polar(1.0, tau * j as f64 / d as f64);
                (unity + offset) * radius
            })
            .collect();

        for _iter in 0..ROOT_MAX_ITERATIONS {
            let mut converged = true;
            for j in 0..d {
                let mut denom = lead;
                for k in 0..d {
                    if k == j {
                        continue;
                    }
                    let mut diff = zs[j] - zs[k];
                    if diff == Complex64::ZERO {
                        // collided iterates; nudge apart deterministically
                        diff = Complex64::new(f64::EPSILON * (1.0 + radius), 0.0);
                    }
                    denom *= diff;
                }
                if denom == Complex64::ZERO {
                    // underflowed separation product; hold this iterate
                    converged = false;
                    continue;
                }
                let w = self.eval(zs[j]) / denom;
                if !w.re.is_finite() || !w.im.is_finite() {
                    converged = false;
                    continue;
                }
                zs[j] -= w;
                if w.norm() >= ROOT_UPDATE_TOL * (1.0 + zs[j].norm()) {
                    converged = false;
                }
            }
            if converged {
                return Ok(zs);
            }
        }

        let max_residual = zs.iter().map(|&z| self.eval(z).norm()).fold(0.0, f64::max);
        Err(Error::NoConvergence {
            iterations: ROOT_MAX_ITERATIONS,
            best: zs,
            max_residual,
        })
    }
}

/// Unique interpolating polynomial through the nodes (Newton divided
/// differences, expanded to coefficient form). Nodes must have distinct
/// abscissas.
pub fn poly_interpolate(nodes: &[(Complex64, Complex64)]) -> Result<Polynomial, Error> {
    assert!(!nodes.is_empty(), "interpolation needs at least one node");
    let k = nodes.len() - 1;
    let xs: Vec<Complex64> = nodes.iter().map(|&(x, _)| x).collect();
    let mut dd: Vec<Complex64> = nodes.iter().map(|&(_, y)| y).collect();

    for j in 1..=k {
        for i in (j..=k).rev() {
            let denom = xs[i] - xs[i - j];
            if denom == Complex64::ZERO {
                return Err(Error::DuplicateNode);
            }
            dd[i] = (dd[i] - dd[i - 1]) / denom;
        }
    }

    // Expand the Newton form by Horner steps on coefficient vectors:
    // acc <- acc * (x - x_i) + dd[i], from the top divided difference down.
    let mut coeffs = vec![dd[k]];
    for i in (0..k).rev() {
        let xi = xs[i];
        let mut next = vec![Complex64::ZERO; coeffs.len() + 1];
        for (t, &a) in coeffs.iter().enumerate() {
            next[t + 1] += a;
            next[t] -= xi * a;
        }
        next[0] += dd[i];
        coeffs = next;
    }

    Ok(Polynomial::new(coeffs))
}

/// Orders interpolation nodes so each prefix maximizes pairwise separation
/// (Leja ordering), which keeps divided-difference tables well conditioned on
/// circles.
pub fn leja_order(nodes: &mut [Complex64]) {
    let n = nodes.len();
    if n <= 2 {
        return;
    }
    // start from the node of largest modulus
    let mut start = 0;
    for i in 1..n {
        if nodes[i].norm_sqr() > nodes[start].norm_sqr() {
            start = i;
        }
    }
    nodes.swap(0, start);
    let mut log_prod = vec![0.0f64; n];
    for chosen in 0..n - 1 {
        let picked = nodes[chosen];
        let mut best = chosen + 1;
        let mut best_val = f64::NEG_INFINITY;
        for i in chosen + 1..n {
            let d = (nodes[i] - picked).norm();
            log_prod[i] += if d > 0.0 { d.ln() } else { f64::NEG_INFINITY };
            if log_prod[i] > best_val {
                best_val = log_prod[i];
                best = i;
            }
        }
        nodes.swap(chosen + 1, best);
        log_prod.swap(chosen + 1, best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn interpolate_quadratic() {
        // p(x) = x^2 - 1 sampled at 0, 1, 2
        let nodes = [
            (c(0.0, 0.0), c(-1.0, 0.0)),
            (c(1.0, 0.0), c(0.0, 0.0)),
            (c(2.0, 0.0), c(3.0, 0.0)),
        ];
        let p = poly_interpolate(&nodes).unwrap();
        assert_eq!(p.degree(), 2);
        let want = [c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        for (got, want) in p.coeffs().iter().zip(want) {
            assert!((got - want).norm() < 1e-13);
        }
    }

    #[test]
    fn interpolate_single_node() {
        let p = poly_interpolate(&[(c(5.0, 0.0), c(7.0, 0.0))]).unwrap();
        assert_eq!(p.degree(), 0);
        assert_eq!(p.coeffs()[0], c(7.0, 0.0));
    }

    #[test]
    fn interpolate_rejects_duplicates() {
        let nodes = [
            (c(1.0, 0.0), c(0.0, 0.0)),
            (c(1.0, 0.0), c(2.0, 0.0)),
        ];
        assert_eq!(poly_interpolate(&nodes), Err(Error::DuplicateNode));
    }

    #[test]
    fn roots_symmetric_pair() {
        // z^2 - 1
        let p = Polynomial::new(vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let mut roots = p.roots().unwrap();
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((roots[0] - c(-1.0, 0.0)).norm() < 1e-10);
        assert!((roots[1] - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn roots_linear() {
        // z - 3i
        let p = Polynomial::new(vec![c(0.0, -3.0), c(1.0, 0.0)]);
        let roots = p.roots().unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - c(0.0, 3.0)).norm() < 1e-14);
    }

    #[test]
    fn roots_residual_bound() {
        let p = Polynomial::new(vec![
            c(2.0, -1.0),
            c(-0.5, 0.3),
            c(0.0, 1.0),
            c(1.5, 0.0),
            c(1.0, 0.0),
        ]);
        let bound = 1e-8 * (1.0 + p.cauchy_bound()).powi(p.degree() as i32);
        for r in p.roots().unwrap() {
            assert!(p.eval(r).norm() <= bound);
        }
    }

    #[test]
    fn leja_starts_with_largest() {
        let mut nodes = vec![c(0.1, 0.0), c(3.0, 0.0), c(-2.0, 0.0), c(0.0, 1.0)];
        leja_order(&mut nodes);
        assert_eq!(nodes[0], c(3.0, 0.0));
        assert_eq!(nodes.len(), 4);
    }
}
