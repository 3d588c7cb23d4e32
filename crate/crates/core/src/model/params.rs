use serde::{Deserialize, Serialize};

use crate::combinatorics::{factor_quadratic, FactoredQuadratic};
use crate::error::{Error, Result};

/// Tolerance on `k² − γk + ζ` for accepting an integer as an exact root.
pub const ROOT_TOLERANCE: f64 = 1e-9;

/// Tolerance on `θ / (−α) ∈ ℕ` for the Fisher subfamily.
pub const FISHER_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Support {
    /// `k² − γk + ζ > 0` for every positive integer k.
    InfiniteSupport,
    /// Positive below `k0` and zero at `k0`; at most `k0` blocks ever occur.
    RootAt(u64),
}

/// Parameters `(γ, ζ)` of the quadratic new-box rule
///
/// ```text
/// old box j: (n_j + 1)(n − k + γ) / (n² + γn + ζ)
/// new box:   (k² − γk + ζ)       / (n² + γn + ζ)
/// ```
///
/// Construction validates admissibility and records which support case the
/// pair falls in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticParams {
    gamma: f64,
    zeta: f64,
    support: Support,
}

fn quad(gamma: f64, zeta: f64, k: f64) -> f64 {
    k * k - gamma * k + zeta
}

fn inadmissible<T>(msg: String) -> Result<T> {
    Err(Error::Inadmissible(msg))
}

impl QuadraticParams {
    pub fn new(gamma: f64, zeta: f64) -> Result<Self> {
        if !gamma.is_finite() || !zeta.is_finite() {
            return inadmissible(format!("gamma={gamma}, zeta={zeta} must be finite"));
        }
        if gamma < 0.0 {
            return inadmissible(format!("gamma >= 0 is required, got gamma={gamma}"));
        }
        if 1.0 + gamma + zeta <= 0.0 {
            return inadmissible(format!(
                "n^2 + gamma*n + zeta must be positive; it is {} at n=1",
                1.0 + gamma + zeta
            ));
        }
        let support = locate_support(gamma, zeta)?;
        Ok(QuadraticParams { gamma, zeta, support })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn root(&self) -> Option<u64> {
        match self.support {
            Support::RootAt(k0) => Some(k0),
            Support::InfiniteSupport => None,
        }
    }

    /// γ = 0 gives the partition into singletons.
    pub fn is_singleton_partition(&self) -> bool {
        self.gamma == 0.0
    }

    /// `g(k) = k² − γk + ζ`, exactly zero at the root.
    pub fn new_box_weight(&self, k: u64) -> f64 {
        if self.root() == Some(k) {
            0.0
        } else {
            quad(self.gamma, self.zeta, k as f64)
        }
    }

    /// `h(n) = n² + γn + ζ`.
    pub fn normalizer(&self, n: u64) -> f64 {
        let n = n as f64;
        n * n + self.gamma * n + self.zeta
    }

    /// `f(m) = m + γ`; the factor picked up by a move that does not open a box.
    pub fn old_box_factor(&self, m: u64) -> f64 {
        m as f64 + self.gamma
    }

    pub fn factored(&self) -> FactoredQuadratic {
        factor_quadratic(self.gamma, self.zeta)
    }
}

fn locate_support(gamma: f64, zeta: f64) -> Result<Support> {
    // complex roots still get the scan around Re z so a double root that
    // rounding pushed off the real axis is snapped like any other near-root
    let fq = factor_quadratic(gamma, zeta);
    let (lo, hi) = (fq.z1.re, fq.z2.re);
    let tol = |k: f64| ROOT_TOLERANCE * k.max(1.0).powi(2);
    if hi < 1.0 - 1e-6 {
        // both roots left of 1; the quadratic increases on k >= 1
        return Ok(Support::InfiniteSupport);
    }
    let first = (lo - 1e-6).ceil().max(1.0);
    let mut k = if first > 1.0 { first - 1.0 } else { first };
    while k <= first + 1.0 {
        let g = quad(gamma, zeta, k);
        if g.abs() <= tol(k) {
            return Ok(Support::RootAt(k as u64));
        }
        if g < 0.0 {
            return inadmissible(format!(
                "k^2 - gamma*k + zeta is negative at k={k} ({g}) without an earlier integer root"
            ));
        }
        if k > hi {
            break;
        }
        k += 1.0;
    }
    Ok(Support::InfiniteSupport)
}

/// Validates `(γ, ζ)`; see [`QuadraticParams::new`].
pub fn validate_params(gamma: f64, zeta: f64) -> Result<QuadraticParams> {
    QuadraticParams::new(gamma, zeta)
}

/// Ewens–Pitman `(α, θ)`: either `0 ≤ α < 1, θ > −α`, or `α < 0` with
/// `θ = −ακ` for a positive integer κ (Fisher's model with κ boxes).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EwensPitmanParams {
    alpha: f64,
    theta: f64,
    kappa: Option<u64>,
}

impl EwensPitmanParams {
    pub fn new(alpha: f64, theta: f64) -> Result<Self> {
        if !alpha.is_finite() || !theta.is_finite() {
            return inadmissible(format!("alpha={alpha}, theta={theta} must be finite"));
        }
        if (0.0..1.0).contains(&alpha) {
            if theta > -alpha {
                return Ok(EwensPitmanParams {
                    alpha,
                    theta,
                    kappa: None,
                });
            }
            return inadmissible(format!("theta > -alpha is required, got alpha={alpha}, theta={theta}"));
        }
        if alpha < 0.0 {
            let ratio = theta / -alpha;
            let kappa = ratio.round();
            if kappa >= 1.0 && (ratio - kappa).abs() <= FISHER_TOLERANCE * kappa.max(1.0) {
                return Ok(EwensPitmanParams {
                    alpha,
                    theta,
                    kappa: Some(kappa as u64),
                });
            }
            return inadmissible(format!(
                "alpha < 0 needs theta = -alpha*kappa for a positive integer kappa, got theta/(-alpha)={ratio}"
            ));
        }
        inadmissible(format!("alpha < 1 is required, got alpha={alpha}"))
    }

    /// Fisher's model with κ boxes: `α = −1, θ = κ`.
    pub fn fisher(kappa: u64) -> Result<Self> {
        Self::new(-1.0, kappa as f64)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn kappa(&self) -> Option<u64> {
        self.kappa
    }

    /// `θ + kα`; exactly zero at `k = κ` for the Fisher subfamily.
    pub fn new_box_weight(&self, k: u64) -> f64 {
        match self.kappa {
            Some(kappa) => -self.alpha * (kappa as f64 - k as f64),
            None => self.theta + k as f64 * self.alpha,
        }
    }

    pub fn normalizer(&self, n: u64) -> f64 {
        n as f64 + self.theta
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_cases() {
        assert_eq!(
            QuadraticParams::new(0.5, 0.0).unwrap().support(),
            Support::InfiniteSupport
        );
        assert_eq!(QuadraticParams::new(6.0, 9.0).unwrap().support(), Support::RootAt(3));
        assert_eq!(
            QuadraticParams::new(1.0, 1.0).unwrap().support(),
            Support::InfiniteSupport
        );
        assert_eq!(QuadraticParams::new(1.0, 0.0).unwrap().support(), Support::RootAt(1));
        // (k-2)(k-5): root at 2 before the negative stretch
        assert_eq!(QuadraticParams::new(7.0, 10.0).unwrap().support(), Support::RootAt(2));
        // roots 1.113.., 1.887..: no integer inside
        assert_eq!(
            QuadraticParams::new(3.0, 2.1).unwrap().support(),
            Support::InfiniteSupport
        );
        assert_eq!(
            QuadraticParams::new(0.0, 0.0).unwrap().support(),
            Support::InfiniteSupport
        );
    }

    #[test]
    fn rejections() {
        assert!(matches!(QuadraticParams::new(-1.0, 0.0), Err(Error::Inadmissible(_))));
        // (k-1.5)(k-4): negative at k=2 with no integer root before it
        assert!(QuadraticParams::new(5.5, 6.0).is_err());
        // negative at k=1
        assert!(QuadraticParams::new(2.0, 0.5).is_err());
        // root at k=1 but n^2+gamma n+zeta vanishes at n=1
        assert!(QuadraticParams::new(0.0, -1.0).is_err());
        assert!(QuadraticParams::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn near_root_is_snapped() {
        let p = QuadraticParams::new(6.0, 9.0 + 1e-12).unwrap();
        assert_eq!(p.support(), Support::RootAt(3));
        assert_eq!(p.new_box_weight(3), 0.0);
    }

    #[test]
    fn ewens_pitman_ranges() {
        assert_eq!(EwensPitmanParams::new(-1.0, 4.0).unwrap().kappa(), Some(4));
        assert_eq!(EwensPitmanParams::new(-0.5, 1.5).unwrap().kappa(), Some(3));
        assert!(EwensPitmanParams::new(-1.0, 2.5).is_err());
        assert!(EwensPitmanParams::new(0.3, -0.3).is_err());
        assert!(EwensPitmanParams::new(0.3, -0.2).is_ok());
        assert!(EwensPitmanParams::new(1.0, 1.0).is_err());
        assert_eq!(EwensPitmanParams::fisher(5).unwrap().new_box_weight(5), 0.0);
    }
}
