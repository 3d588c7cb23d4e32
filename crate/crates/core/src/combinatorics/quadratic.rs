use num_complex::Complex64;

/// Linear factorisation of the two quadratics of the new-box rule:
///
/// `x² + γx + ζ = (x + z1)(x + z2)` and `x² − γx + ζ = (x + s1)(x + s2)`.
///
/// Real roots are ordered so that `z1 ≤ z2`; complex roots come as the
/// conjugate pair with `Im z1 ≤ 0`. Always `s_i = −z_i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FactoredQuadratic {
    pub gamma: f64,
    pub zeta: f64,
    pub z1: Complex64,
    pub z2: Complex64,
    pub s1: Complex64,
    pub s2: Complex64,
}

impl FactoredQuadratic {
    pub fn roots_are_real(&self) -> bool {
        self.z1.im == 0.0 && self.z2.im == 0.0
    }

    /// Coefficients `(z1 + z2, z1·z2, s1 + s2, s1·s2)` rebuilt from the roots.
    pub fn reconstructed(&self) -> (Complex64, Complex64, Complex64, Complex64) {
        (
            self.z1 + self.z2,
            self.z1 * self.z2,
            self.s1 + self.s2,
            self.s1 * self.s2,
        )
    }
}

/// Factors the `(γ, ζ)` quadratics. The `z` values are the roots of
/// `y² − γy + ζ`, computed with the cancellation-free form of the quadratic
/// formula.
pub fn factor_quadratic(gamma: f64, zeta: f64) -> FactoredQuadratic {
    let disc = gamma * gamma - 4.0 * zeta;
    let (z1, z2) = if disc < 0.0 {
        let half_im = 0.5 * (-disc).sqrt();
        (
            Complex64::new(0.5 * gamma, -half_im),
            Complex64::new(0.5 * gamma, half_im),
        )
    } else if disc == 0.0 {
        let r = Complex64::new(0.5 * gamma, 0.0);
        (r, r)
    } else {
        let sq = disc.sqrt();
        let q = 0.5 * (gamma + if gamma >= 0.0 { sq } else { -sq });
        let (a, b) = (q, zeta / q);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        (Complex64::new(lo, 0.0), Complex64::new(hi, 0.0))
    };
    FactoredQuadratic {
        gamma,
        zeta,
        z1,
        z2,
        s1: -z1,
        s2: -z2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_zero() {
        let f = factor_quadratic(0.7, 0.0);
        assert_eq!(f.z1.re, 0.0);
        assert_eq!(f.z2.re, 0.7);
        assert_eq!(f.s1.re, 0.0);
        assert_eq!(f.s2.re, -0.7);
        assert!(f.roots_are_real());
    }

    #[test]
    fn perfect_square() {
        let f = factor_quadratic(6.0, 9.0);
        assert_eq!((f.z1.re, f.z2.re), (3.0, 3.0));
        assert_eq!((f.s1.re, f.s2.re), (-3.0, -3.0));
    }

    #[test]
    fn complex_conjugates() {
        let f = factor_quadratic(1.0, 1.0);
        assert!(!f.roots_are_real());
        assert_eq!(f.z1, f.z2.conj());
        assert!(((f.z1 * f.z2).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reconstruction() {
        for (g, z) in [
            (0.5, 0.0),
            (2.0, 3.0),
            (1e-3, -1e-9),
            (7.5, 0.25),
            (3.0, 2.1),
            (0.0, 4.0),
        ] {
            let f = factor_quadratic(g, z);
            let (zs, zp, ss, sp) = f.reconstructed();
            let tol = |x: f64| 1e-12 * x.abs().max(1e-300);
            assert!((zs.re - g).abs() <= tol(g) && zs.im.abs() <= 1e-12 * g.max(1.0));
            assert!((zp.re - z).abs() <= tol(z).max(1e-15 * g * g) && zp.im.abs() < 1e-12);
            assert!((ss.re + g).abs() <= tol(g));
            assert!((sp.re - z).abs() <= tol(z).max(1e-15 * g * g));
        }
    }
}
