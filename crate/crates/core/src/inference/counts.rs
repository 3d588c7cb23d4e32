use crate::combinatorics::{generalized_stirling_row, lah_number, ln_factorial, rising_factorial, LogValue};
use crate::error::{domain, Result};
use crate::model::EwensPitmanParams;
use crate::model::{composition_total, ep_v_nk, GibbsRule, QuadraticParams, QuadraticWeights};

use super::table::PmfTable;

/// Law of the box count after n balls, `ℙ(K_n = k) = d_{n,k} v_{n,k}` with
/// the Lah numbers `d_{n,k}`.
pub fn pmf_kn(n: u64, params: &QuadraticParams) -> Result<PmfTable> {
    if n == 0 {
        return domain("n >= 1 is required");
    }
    let w = QuadraticWeights::new(params, n as usize)?;
    let ln = (1..=n)
        .map(|k| Ok(lah_number(n, k)?.ln_abs() + w.ln_v(n as usize, k as usize)))
        .collect::<Result<Vec<_>>>()?;
    PmfTable::from_ln(1, ln, 0.0)
}

/// Ewens–Pitman box count law, generalised Stirling numbers times `v_{n,k}`.
pub fn ep_pmf_kn(n: u64, params: &EwensPitmanParams) -> Result<PmfTable> {
    if n == 0 {
        return domain("n >= 1 is required");
    }
    let row = generalized_stirling_row(n, params.alpha())?;
    let ln = row
        .iter()
        .zip(1..=n)
        .map(|(d, k)| Ok((*d * ep_v_nk(n, k, params)?).ln_abs()))
        .collect::<Result<Vec<_>>>()?;
    PmfTable::from_ln(1, ln, 0.0)
}

/// `ℙ(K_n = k)` in Fisher's model with κ boxes:
/// `d_{n,k} ∏_{i<k} (κ − i) / (κ + 1)_{n−1}`. Zero for `k > κ`.
pub fn fisher_kn(n: u64, k: u64, kappa: u64) -> Result<f64> {
    Ok(ln_fisher_kn(n, k, kappa)?.exp())
}

/// Natural log of [`fisher_kn`].
pub fn ln_fisher_kn(n: u64, k: u64, kappa: u64) -> Result<f64> {
    if k < 1 || k > n || kappa < 1 {
        return domain(format!(
            "need 1 <= k <= n and kappa >= 1, got n={n}, k={k}, kappa={kappa}"
        ));
    }
    if k > kappa {
        return Ok(f64::NEG_INFINITY);
    }
    let falling: f64 = (1..k).map(|i| ((kappa - i) as f64).ln()).sum();
    Ok(lah_number(n, k)?.ln_abs() + falling - rising_factorial(kappa as f64 + 1.0, n - 1).ln_abs())
}

/// Probability that the box sizes, listed in order of least element, are
/// `sizes`: `v_{n,k} n! ∏_j n_j / (n_j + … + n_k)`.
pub fn joint_counts_pmf(sizes: &[usize], params: &QuadraticParams) -> Result<LogValue> {
    let n = composition_total(sizes)?;
    let w = QuadraticWeights::new(params, n)?;
    let mut ln = w.ln_v(n, sizes.len()) + ln_factorial(n as u64);
    let mut rest = n;
    for &s in sizes {
        ln += (s as f64).ln() - (rest as f64).ln();
        rest -= s;
    }
    Ok(LogValue::from_ln(ln))
}

/// Probability that exactly `mults[r−1]` boxes hold r balls, for every r:
/// `v_{n,k} n! / ∏_r k_r!`, with `n = Σ r k_r` and `k = Σ k_r`.
pub fn multiplicities_pmf(mults: &[usize], params: &QuadraticParams) -> Result<LogValue> {
    let n: usize = mults.iter().enumerate().map(|(i, m)| (i + 1) * m).sum();
    let k: usize = mults.iter().sum();
    if n == 0 {
        return domain("multiplicity vector describes no balls");
    }
    if mults.len() > n {
        return domain(format!(
            "multiplicity vector has {} entries but only n={n} balls",
            mults.len()
        ));
    }
    let w = QuadraticWeights::new(params, n)?;
    let denom: f64 = mults.iter().map(|&m| ln_factorial(m as u64)).sum();
    Ok(LogValue::from_ln(w.ln_v(n, k) + ln_factorial(n as u64) - denom))
}

/// Box-count law after `n` balls obtained by running the new-box
/// probabilities forward as a Markov chain from `k0` boxes at `n0` balls.
pub fn box_count_chain<R: GibbsRule + ?Sized>(rule: &R, n0: u64, k0: u64, n: u64) -> Result<PmfTable> {
    if k0 < 1 || k0 > n0 || n < n0 {
        return domain(format!("need 1 <= k0 <= n0 <= n, got n0={n0}, k0={k0}, n={n}"));
    }
    let mut dist = vec![0.0; n as usize + 1];
    dist[k0 as usize] = 1.0;
    for m in n0..n {
        let mut next = vec![0.0; n as usize + 1];
        for k in 1..=m.min(n) as usize {
            let p = dist[k];
            if p == 0.0 {
                continue;
            }
            let nu = rule.new_box_probability(m, k as u64);
            next[k] += p * (1.0 - nu);
            next[k + 1] += p * nu;
        }
        dist = next;
    }
    PmfTable::from_probs(1, dist[1..].to_vec(), 0.0)
}
