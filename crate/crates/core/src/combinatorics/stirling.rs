use super::gamma::{ln_binomial, ln_factorial};
use super::LogValue;
use crate::error::{domain, Result};

/// Rising factorial `(a)_m = a(a+1)…(a+m−1)`, with `(a)_0 = 1`.
pub fn rising_factorial(a: f64, m: u64) -> LogValue {
    let mut ln_abs = 0.0;
    let mut sign = 1i8;
    for i in 0..m {
        let factor = a + i as f64;
        if factor == 0.0 {
            return LogValue::ZERO;
        }
        if factor < 0.0 {
            sign = -sign;
        }
        ln_abs += factor.abs().ln();
    }
    LogValue::new(ln_abs, sign)
}

/// Lah number `C(n−1, k−1)·n!/k!`.
pub fn lah_number(n: u64, k: u64) -> Result<LogValue> {
    if k < 1 || k > n {
        return domain(format!("Lah number needs 1 <= k <= n, got n={n}, k={k}"));
    }
    Ok(LogValue::from_ln(
        ln_binomial(n - 1, k - 1) + ln_factorial(n) - ln_factorial(k),
    ))
}

/// Row `n` of the generalised Stirling triangle `d_{n,k}(α)`, k = 1..=n,
/// built with the forward path-weight recursion
/// `d_{m+1,k} = (m − kα) d_{m,k} + d_{m,k−1}`, `d_{1,1} = 1`.
pub fn generalized_stirling_row(n: u64, alpha: f64) -> Result<Vec<LogValue>> {
    if n < 1 {
        return domain("generalized Stirling numbers need n >= 1");
    }
    let n = n as usize;
    let mut row = vec![LogValue::ONE];
    for m in 1..n {
        let mut next = Vec::with_capacity(m + 1);
        for k in 1..=m + 1 {
            let stay = if k <= m {
                LogValue::from_f64(m as f64 - k as f64 * alpha) * row[k - 1]
            } else {
                LogValue::ZERO
            };
            let step = if k >= 2 { row[k - 2] } else { LogValue::ZERO };
            next.push(stay.add(step));
        }
        row = next;
    }
    Ok(row)
}

/// A single generalised Stirling number `d_{n,k}(α)`.
pub fn generalized_stirling(n: u64, k: u64, alpha: f64) -> Result<LogValue> {
    if k < 1 || k > n {
        return domain(format!(
            "generalized Stirling number needs 1 <= k <= n, got n={n}, k={k}"
        ));
    }
    Ok(generalized_stirling_row(n, alpha)?[(k - 1) as usize])
}
