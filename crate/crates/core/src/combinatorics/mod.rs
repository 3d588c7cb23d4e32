//! Scalar kernels shared by every exact formula: signed log-space values,
//! rising factorials, Lah and generalised Stirling numbers, the root
//! factorisation of the two quadratics, and real/complex log-gamma.

mod accumulate;
mod gamma;
mod logvalue;
mod quadratic;
mod stirling;

pub use accumulate::LnAccumulator;
pub use gamma::{
    complex_log_gamma, ln_binomial, ln_factorial, ln_gamma, ln_gamma_ratio, ln_gamma_ratio_real, ln_gamma_signed,
    GammaRatio,
};
pub use logvalue::LogValue;
pub use quadratic::{factor_quadratic, FactoredQuadratic};
pub use stirling::{generalized_stirling, generalized_stirling_row, lah_number, rising_factorial};

use num_complex::Complex64;

use crate::error::Result;

/// `ln (a)_m` for complex `a`, as `ln Γ(a+m) − ln Γ(a)`; returns `None`
/// when the product contains an exact zero factor (a is a non-positive
/// integer with `m > −a`).
pub fn complex_ln_rising(a: Complex64, m: u64) -> Result<Option<Complex64>> {
    if m == 0 {
        return Ok(Some(Complex64::new(0.0, 0.0)));
    }
    if a.im == 0.0 && a.re <= 0.0 && a.re == a.re.floor() {
        let j = (-a.re) as u64;
        if m > j {
            return Ok(None);
        }
        // finite product of (a+i), all negative
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..m {
            acc += Complex64::new(a.re + i as f64, 0.0).ln();
        }
        return Ok(Some(acc));
    }
    let shifted = a + m as f64;
    let hi = complex_log_gamma(shifted)?;
    let lo = complex_log_gamma(a)?;
    Ok(Some(hi - lo))
}
