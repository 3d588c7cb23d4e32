use rand::Rng;

use crate::error::{domain, Result};

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return domain(format!("need 0 < gamma < 1, got gamma={gamma}"));
    }
    Ok(())
}

/// `E(P̃_1^{n−1}) = nγ / (n + γ − 1)` for the ζ = 0 model.
pub fn freq1_moment(n: u64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if n == 0 {
        return domain("n >= 1 is required");
    }
    Ok(n as f64 * gamma / ((n - 1) as f64 + gamma))
}

/// Law of the first frequency P̃_1 when ζ = 0: an atom γ at 1 plus the
/// density `(1 − γ) γ y^{γ−1}` on (0, 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FirstFrequencyLaw {
    gamma: f64,
}

impl FirstFrequencyLaw {
    pub fn new(gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(FirstFrequencyLaw { gamma })
    }

    pub fn atom_at_one(&self) -> f64 {
        self.gamma
    }

    /// Density of the continuous part.
    pub fn density(&self, y: f64) -> f64 {
        if y > 0.0 && y < 1.0 {
            (1.0 - self.gamma) * self.gamma * y.powf(self.gamma - 1.0)
        } else {
            0.0
        }
    }

    pub fn cdf(&self, y: f64) -> f64 {
        if y <= 0.0 {
            0.0
        } else if y < 1.0 {
            (1.0 - self.gamma) * y.powf(self.gamma)
        } else {
            1.0
        }
    }

    pub fn moment(&self, m: u32) -> f64 {
        self.gamma + (1.0 - self.gamma) * self.gamma / (self.gamma + m as f64)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if rng.random::<f64>() < self.gamma {
            1.0
        } else {
            rng.random::<f64>().powf(1.0 / self.gamma)
        }
    }
}
