use num_complex::Complex64;

use crate::combinatorics::{ln_factorial, ln_gamma};
use crate::error::{domain, Error, Result};
use crate::model::RestrictedStart;

use super::table::PmfTable;
use super::tail::{truncated_table, GammaTerm, Truncation};

/// Law of the terminal box count of the ζ = 0 process given `k` boxes
/// after `n` balls, for `−(n − k) < γ < k`:
///
/// ```text
/// (n−1)! / ((k−1)! (κ+n−1)!) ∏_{i=1}^{k−1} (κ−i) ∏_{j=1}^{k} (γ+n−j) ∏_{l=k}^{κ−1} (l−γ),  κ ≥ k.
/// ```
fn terminal_given(n: u64, k: u64, gamma: f64, trunc: Truncation) -> Result<PmfTable> {
    if k < 1 || k > n {
        return domain(format!("need 1 <= k <= n, got n={n}, k={k}"));
    }
    let (nf, kf) = (n as f64, k as f64);
    if !gamma.is_finite() || gamma <= -(nf - kf) || gamma >= kf {
        return Err(Error::Inadmissible(format!(
            "need -(n-k) < gamma < k, i.e. {} < gamma < {kf}, got gamma={gamma}",
            -(nf - kf)
        )));
    }
    let ln_rise: f64 = (1..=k).map(|j| (gamma + nf - j as f64).ln()).sum();
    let ln_first = ln_factorial(n - 1) - ln_factorial(k + n - 1) + ln_rise;
    let step = |kappa: u64| {
        let x = kappa as f64;
        x.ln() + (x - gamma).ln() - (x - kf + 1.0).ln() - (x + nf).ln()
    };
    let c = |re: f64| Complex64::new(re, 0.0);
    let term = GammaTerm::new(
        ln_factorial(n - 1) - ln_factorial(k - 1) + ln_rise - ln_gamma(kf - gamma),
        &[(c(0.0), c(nf)), (c(-gamma), c(1.0 - kf))],
    );
    truncated_table(k, ln_first, step, &term, trunc)
}

/// Posterior of the number of species K after observing `k` distinct
/// species among `n` draws, under the ζ = 0 prior with `0 < γ < 1`.
/// The support starts at κ = k.
pub fn posterior_k(n: u64, k: u64, gamma: f64, trunc: Truncation) -> Result<PmfTable> {
    if gamma == 1.0 {
        return domain("gamma = 1 is an excluded edge case (K = 1 almost surely)");
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return domain(format!("posterior needs 0 < gamma < 1, got gamma={gamma}"));
    }
    terminal_given(n, k, gamma, trunc)
}

/// Terminal box-count law of the process restarted from a fixed initial
/// allocation; valid over the whole extended γ range of the restart.
pub fn restricted_pmf_k(start: &RestrictedStart, trunc: Truncation) -> Result<PmfTable> {
    let b = start.initial();
    terminal_given(b.n() as u64, b.k() as u64, start.gamma(), trunc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::{fisher_kn, pmf_k_value, pmf_kn};
    use crate::model::{PartitionState, QuadraticParams};

    #[test]
    fn bayes_combination() {
        for g in [0.25, 0.5, 0.75] {
            let p = QuadraticParams::new(g, 0.0).unwrap();
            for (n, k) in [(1, 1), (10, 3), (30, 10), (50, 1), (50, 50)] {
                let post = posterior_k(n, k, g, Truncation::default()).unwrap();
                assert_eq!(post.start(), k);
                assert!((post.total() + post.truncation_tail_bound() - 1.0).abs() < 1e-9);
                let marginal = pmf_kn(n, &p).unwrap().get(k);
                for kappa in k..(k + 200).min(post.end()) {
                    let oracle = pmf_k_value(&p, kappa).unwrap() * fisher_kn(n, k, kappa).unwrap() / marginal;
                    let got = post.get(kappa);
                    assert!((got / oracle - 1.0).abs() < 1e-9, "{g} {n} {k} {kappa}");
                }
            }
        }
    }

    #[test]
    fn concentrates_on_observed_count() {
        let post = posterior_k(200, 3, 0.5, Truncation::default()).unwrap();
        assert_eq!(post.mode(), 3);
    }

    #[test]
    fn edge_rows() {
        assert!(posterior_k(5, 2, 1.0, Truncation::default()).is_err());
        assert!(posterior_k(5, 6, 0.5, Truncation::default()).is_err());
    }

    #[test]
    fn restart_examples() {
        let two = PartitionState::new(vec![vec![1], vec![2]]).unwrap();
        let t = restricted_pmf_k(&RestrictedStart::new(two, 1.0).unwrap(), Truncation::default()).unwrap();
        for kappa in 2..=30u64 {
            let k = kappa as f64;
            assert!((t.get(kappa) / (2.0 / (k * (k + 1.0))) - 1.0).abs() < 1e-10);
        }
        assert!((t.total() + t.truncation_tail_bound() - 1.0).abs() < 1e-9);

        let pair = PartitionState::new(vec![vec![1, 2]]).unwrap();
        let t = restricted_pmf_k(&RestrictedStart::new(pair, 0.0).unwrap(), Truncation::default()).unwrap();
        for kappa in 1..=30u64 {
            let k = kappa as f64;
            assert!((t.get(kappa) / (1.0 / (k * (k + 1.0))) - 1.0).abs() < 1e-10);
        }
        assert!((t.truncation_tail_bound() - 1.0 / (t.end() as f64 + 1.0)).abs() < 1e-15);
    }
}
