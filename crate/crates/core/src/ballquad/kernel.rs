//! Kernels on `B^d × B^d`.

use num_complex::Complex64;
use serde::Serialize;

/// `⟨z, w⟩ = Σ z_j conj(w_j)`.
pub fn inner(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm_sqr(z: &[Complex64]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum()
}

/// `(1 - ⟨z,w⟩)^{-a}` on the principal branch; `Re(1 - ⟨z,w⟩) > 0` in the ball.
pub fn holomorphic_power(z: &[Complex64], w: &[Complex64], a: f64) -> Complex64 {
    let base = Complex64::new(1.0, 0.0) - inner(z, w);
    (base.ln() * (-a)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum KernelField {
    /// `(1 - ⟨z,w⟩)^{-α}`
    Holomorphic { alpha: f64 },
    /// `|1 - ⟨z,w⟩|^{-α}`
    Absolute { alpha: f64 },
    /// Bergman kernel `K_w(z) = (1 - ⟨z,w⟩)^{-(d+1)}`.
    Reproducing,
    /// `k_w(z) = (1-|w|²)^{(d+1)/2} (1 - ⟨z,w⟩)^{-(d+1)}`.
    Normalized,
    /// `H_z(w) = (1-|z|²)^{s/q} (1 - ⟨w,z⟩)^{-(s/q + (d+1)/p + α - d - 1)}`,
    /// evaluated as `eval(z, w)`.
    Probe { s: f64, p: f64, q: f64, alpha: f64 },
}

impl KernelField {
    pub fn eval(&self, z: &[Complex64], w: &[Complex64]) -> Complex64 {
        let d1 = z.len() as f64 + 1.0;
        match *self {
            KernelField::Holomorphic { alpha } => holomorphic_power(z, w, alpha),
            KernelField::Absolute { alpha } => {
                let m = (Complex64::new(1.0, 0.0) - inner(z, w)).norm();
                Complex64::new(m.powf(-alpha), 0.0)
            }
            KernelField::Reproducing => holomorphic_power(z, w, d1),
            KernelField::Normalized => holomorphic_power(z, w, d1) * (1.0 - norm_sqr(w)).powf(0.5 * d1),
            KernelField::Probe { s, p, q, alpha } => {
                let exponent = s / q + d1 / p + alpha - d1;
                holomorphic_power(w, z, exponent) * (1.0 - norm_sqr(z)).powf(s / q)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kernels_at_origin_are_one() {
        let o = [c(0.0, 0.0), c(0.0, 0.0)];
        for k in [
            KernelField::Holomorphic { alpha: 1.3 },
            KernelField::Absolute { alpha: -2.0 },
            KernelField::Reproducing,
            KernelField::Normalized,
        ] {
            assert_eq!(k.eval(&o, &o), c(1.0, 0.0));
        }
    }

    #[test]
    fn holomorphic_kernel_is_hermitian() {
        let z = [c(0.3, -0.2), c(0.1, 0.5)];
        let w = [c(-0.4, 0.1), c(0.2, 0.2)];
        let k = KernelField::Holomorphic { alpha: 2.7 };
        let a = k.eval(&z, &w);
        let b = k.eval(&w, &z);
        assert!((a - b.conj()).norm() < 1e-15);
    }

    #[test]
    fn absolute_is_modulus_power_of_holomorphic() {
        let z = [c(0.6, 0.3)];
        let w = [c(-0.2, 0.7)];
        let h = KernelField::Holomorphic { alpha: 1.5 }.eval(&z, &w);
        let a = KernelField::Absolute { alpha: 1.5 }.eval(&z, &w);
        assert!((h.norm() - a.re).abs() < 1e-14);
    }
}
