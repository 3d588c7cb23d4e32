use num_complex::Complex64;

use crate::combinatorics::{complex_ln_rising, ln_factorial, rising_factorial, LnAccumulator, LogValue};
use crate::error::{domain, Error, Result};

use super::params::{EwensPitmanParams, QuadraticParams};
use super::partition::{composition_total, MAX_EXACT_N};

fn ln_nonneg(x: f64) -> f64 {
    if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        x.ln()
    }
}

/// Prefix tables for `v_{n,k}` of one parameter point, valid for `n ≤ n_max`:
///
/// `v_{n,k} = (γ)_{n−k} ∏_{i<k} (i² − γi + ζ) / ∏_{m<n} (m² + γm + ζ)`.
///
/// Every entry is non-negative for admissible parameters, so the tables hold
/// plain logarithms with `-inf` for zero.
#[derive(Clone, Debug)]
pub struct QuadraticWeights {
    params: QuadraticParams,
    ln_rising_gamma: Vec<f64>,
    ln_g_prefix: Vec<f64>,
    ln_h_prefix: Vec<f64>,
}

impl QuadraticWeights {
    pub fn new(params: &QuadraticParams, n_max: usize) -> Result<Self> {
        if n_max == 0 || n_max > MAX_EXACT_N {
            return domain(format!("table size {n_max} outside 1..={MAX_EXACT_N}"));
        }
        let mut ln_rising_gamma = Vec::with_capacity(n_max);
        let mut ln_g_prefix = Vec::with_capacity(n_max + 1);
        let mut ln_h_prefix = Vec::with_capacity(n_max + 1);
        let (mut r, mut g, mut h) = (
            LnAccumulator::default(),
            LnAccumulator::default(),
            LnAccumulator::default(),
        );
        // index 0 unused for the k- and n-indexed tables
        ln_g_prefix.push(f64::NAN);
        ln_h_prefix.push(f64::NAN);
        for i in 0..n_max {
            ln_rising_gamma.push(r.value());
            r.add(ln_nonneg(params.gamma() + i as f64));
            ln_g_prefix.push(g.value());
            ln_h_prefix.push(h.value());
            let idx = i as u64 + 1;
            let gi = params.new_box_weight(idx);
            g.add(if gi > 0.0 { gi.ln() } else { f64::NEG_INFINITY });
            h.add(params.normalizer(idx).ln());
        }
        Ok(QuadraticWeights {
            params: *params,
            ln_rising_gamma,
            ln_g_prefix,
            ln_h_prefix,
        })
    }

    pub fn params(&self) -> &QuadraticParams {
        &self.params
    }

    pub fn n_max(&self) -> usize {
        self.ln_rising_gamma.len()
    }

    /// `ln v_{n,k}` (`-inf` for zero). Panics outside `1 ≤ k ≤ n ≤ n_max`.
    pub fn ln_v(&self, n: usize, k: usize) -> f64 {
        assert!(1 <= k && k <= n && n <= self.n_max(), "v({n},{k}) outside table");
        self.ln_rising_gamma[n - k] + self.ln_g_prefix[k] - self.ln_h_prefix[n]
    }

    pub fn v(&self, n: usize, k: usize) -> LogValue {
        LogValue::from_ln(self.ln_v(n, k))
    }
}

fn check_nk(n: u64, k: u64) -> Result<()> {
    if k < 1 || k > n {
        return domain(format!("need 1 <= k <= n, got n={n}, k={k}"));
    }
    if n as usize > MAX_EXACT_N {
        return domain(format!("n={n} exceeds the exact-evaluation cap {MAX_EXACT_N}"));
    }
    Ok(())
}

/// `v_{n,k}` from the raw products.
pub fn v_nk(n: u64, k: u64, params: &QuadraticParams) -> Result<LogValue> {
    check_nk(n, k)?;
    let mut num = rising_factorial(params.gamma(), n - k);
    for i in 1..k {
        num = num * LogValue::from_f64(params.new_box_weight(i));
    }
    let mut den = LnAccumulator::default();
    for m in 1..n {
        den.add(params.normalizer(m).ln());
    }
    Ok(num / LogValue::from_ln(den.value()))
}

/// `v_{n,k}` from the linear factorisation
/// `(γ)_{n−k} (s1+1)_{k−1} (s2+1)_{k−1} / ((z1+1)_{n−1} (z2+1)_{n−1})`,
/// with the complex rising factorials taken through log-gamma.
pub fn v_nk_factored(n: u64, k: u64, params: &QuadraticParams) -> Result<LogValue> {
    check_nk(n, k)?;
    let fq = params.factored();
    let one = Complex64::new(1.0, 0.0);
    let head = rising_factorial(params.gamma(), n - k);
    if head.is_zero() {
        return Ok(LogValue::ZERO);
    }
    let parts = [
        (complex_ln_rising(fq.s1 + one, k - 1)?, 1.0),
        (complex_ln_rising(fq.s2 + one, k - 1)?, 1.0),
        (complex_ln_rising(fq.z1 + one, n - 1)?, -1.0),
        (complex_ln_rising(fq.z2 + one, n - 1)?, -1.0),
    ];
    let mut total = Complex64::new(head.ln_abs(), if head.sign() < 0 { std::f64::consts::PI } else { 0.0 });
    for (part, sign) in parts {
        match part {
            Some(z) => total += z * sign,
            None if sign > 0.0 => return Ok(LogValue::ZERO),
            None => {
                return Err(Error::Domain(
                    "denominator of v_{n,k} vanishes; parameters are not admissible".into(),
                ))
            }
        }
    }
    let sign = if total.im.cos() >= 0.0 { 1 } else { -1 };
    Ok(LogValue::new(total.re, sign))
}

/// The exchangeable partition probability function
/// `p(n_1, …, n_k) = v_{n,k} ∏ n_j!`.
pub fn eppf(sizes: &[usize], params: &QuadraticParams) -> Result<LogValue> {
    let n = composition_total(sizes)?;
    let v = v_nk(n as u64, sizes.len() as u64, params)?;
    let fact: f64 = sizes.iter().map(|&s| ln_factorial(s as u64)).sum();
    Ok(v * LogValue::from_ln(fact))
}

/// `v_{n,k}` of the Ewens–Pitman family, `∏_{i<k} (θ + iα) / (θ + 1)_{n−1}`.
pub fn ep_v_nk(n: u64, k: u64, params: &EwensPitmanParams) -> Result<LogValue> {
    check_nk(n, k)?;
    let mut num = LogValue::ONE;
    for i in 1..k {
        num = num * LogValue::from_f64(params.new_box_weight(i));
    }
    Ok(num / rising_factorial(params.theta() + 1.0, n - 1))
}

/// Ewens–Pitman EPPF `v_{n,k} ∏ (1 − α)_{n_j − 1}`.
pub fn ep_eppf(sizes: &[usize], params: &EwensPitmanParams) -> Result<LogValue> {
    let n = composition_total(sizes)?;
    let v = ep_v_nk(n as u64, sizes.len() as u64, params)?;
    Ok(sizes
        .iter()
        .map(|&s| rising_factorial(1.0 - params.alpha(), s as u64 - 1))
        .fold(v, |acc, x| acc * x))
}

/// EPPF of the ζ = 0 process restarted from an allocation with block sizes
/// `initial_sizes`: `p(sizes) / p(initial_sizes)`, evaluated with the common
/// factors cancelled so that it stays defined over the whole range
/// `−(m − k) < γ < k`.
pub fn restricted_eppf(sizes: &[usize], initial_sizes: &[usize], gamma: f64) -> Result<LogValue> {
    let n = composition_total(sizes)?;
    let m = composition_total(initial_sizes)?;
    let (kappa, k) = (sizes.len(), initial_sizes.len());
    if !gamma.is_finite() || gamma <= -((m - k) as f64) || gamma >= k as f64 {
        return Err(Error::Inadmissible(format!(
            "restricted EPPF needs -(m-k) < gamma < k with m={m}, k={k}; got gamma={gamma}"
        )));
    }
    if kappa < k || sizes.iter().zip(initial_sizes).any(|(a, b)| a < b) {
        return domain(format!(
            "sizes {sizes:?} do not extend the initial sizes {initial_sizes:?}"
        ));
    }
    let mut acc = LnAccumulator::default();
    for j in (m - k)..(n - kappa) {
        acc.add((gamma + j as f64).ln());
    }
    for i in k..kappa {
        let i = i as f64;
        acc.add(i.ln() + (i - gamma).ln());
    }
    for l in m..n {
        let l = l as f64;
        acc.add(-(l.ln() + (l + gamma).ln()));
    }
    for &s in sizes {
        acc.add(ln_factorial(s as u64));
    }
    for &s in initial_sizes {
        acc.add(-ln_factorial(s as u64));
    }
    Ok(LogValue::from_ln(acc.value()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::rules::succession;
    use crate::model::PartitionState;

    fn grid() -> Vec<QuadraticParams> {
        [
            (0.5, 0.0),
            (0.9, 0.0),
            (1.0, 1.0),
            (6.0, 9.0),
            (2.0, 3.0),
            (0.0, 0.0),
            (3.0, 2.1),
            (7.0, 10.0),
        ]
        .iter()
        .map(|&(g, z)| QuadraticParams::new(g, z).unwrap())
        .collect()
    }

    #[test]
    fn normalisation_at_one_and_two() {
        for p in grid() {
            assert_eq!(eppf(&[1], &p).unwrap().to_f64(), 1.0);
            let two = eppf(&[2], &p).unwrap().to_f64();
            let pair = eppf(&[1, 1], &p).unwrap().to_f64();
            let (g, z) = (p.gamma(), p.zeta());
            assert!((two - 2.0 * g / (1.0 + g + z)).abs() < 1e-15);
            assert!((pair - (1.0 - g + z) / (1.0 + g + z)).abs() < 1e-15);
            assert!((two + pair - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn path_product_equals_eppf() {
        let state = PartitionState::new(vec![vec![1, 3], vec![2, 5, 6], vec![4]]).unwrap();
        let labels = state.rgs();
        for p in grid() {
            let mut cur = PartitionState::start();
            let mut prod = 1.0;
            for &target in &labels[1..] {
                let s = succession(&cur, &p).unwrap();
                if target < cur.k() {
                    prod *= s.old[target];
                    cur.place_next(Some(target)).unwrap();
                } else {
                    prod *= s.new;
                    cur.place_next(None).unwrap();
                }
                if prod == 0.0 {
                    break;
                }
            }
            let e = eppf(&[2, 3, 1], &p).unwrap().to_f64();
            assert!((prod - e).abs() <= 1e-13 * e.abs().max(1e-300), "{p:?}: {prod} vs {e}");
        }
    }

    #[test]
    fn v_nk_edge_cases() {
        let p = QuadraticParams::new(6.0, 9.0).unwrap();
        assert_eq!(v_nk(1, 1, &p).unwrap(), LogValue::ONE);
        assert!(v_nk(10, 4, &p).unwrap().is_zero());
        assert!(v_nk_factored(10, 4, &p).unwrap().is_zero());
        assert!(v_nk(3, 4, &p).is_err());
        let singleton = QuadraticParams::new(0.0, 0.5).unwrap();
        assert!(v_nk(5, 4, &singleton).unwrap().is_zero());
        assert!(!v_nk(5, 5, &singleton).unwrap().is_zero());
    }

    #[test]
    fn product_and_factored_forms_agree() {
        for p in grid() {
            let w = QuadraticWeights::new(&p, 200).unwrap();
            for n in [1u64, 2, 5, 17, 60, 130, 200] {
                for k in 1..=n {
                    let a = v_nk(n, k, &p).unwrap();
                    let b = v_nk_factored(n, k, &p).unwrap();
                    let c = w.v(n as usize, k as usize);
                    assert!(a.relative_difference(b) < 1e-10, "{p:?} n={n} k={k}: {a} {b}");
                    assert!(a.relative_difference(c) < 1e-11, "{p:?} n={n} k={k}: {a} {c}");
                }
            }
        }
    }

    #[test]
    fn backward_recursion() {
        for p in grid() {
            let w = QuadraticWeights::new(&p, 51).unwrap();
            for n in 1..=50 {
                for k in 1..=n {
                    let lhs = w.v(n, k);
                    let rhs = LogValue::from_f64((n + k) as f64) * w.v(n + 1, k);
                    let rhs = rhs.add(w.v(n + 1, k + 1));
                    assert!(lhs.relative_difference(rhs) < 1e-10, "{p:?} {n} {k}");
                }
            }
        }
    }

    #[test]
    fn ep_eppf_matches_succession_product() {
        // (α, θ) = (−1, 2): sizes (2, 1) has v_{3,2} ∏ (2)_{n_j−1}
        let ep = EwensPitmanParams::new(-1.0, 2.0).unwrap();
        let direct = ep_eppf(&[2, 1], &ep).unwrap().to_f64();
        // path 1 | 2 -> {1,3},{2}: ν_1 · ω_{2,1} = (θ+α)/(1+θ) · (1−α)/(2+θ)
        let path = (2.0 - 1.0) / 3.0 * 2.0 / 4.0;
        assert!((direct - path).abs() < 1e-15);
    }

    #[test]
    fn restricted_eppf_identity_and_errors() {
        assert!((restricted_eppf(&[1, 1], &[1, 1], 1.0).unwrap().to_f64() - 1.0).abs() < 1e-15);
        assert!((restricted_eppf(&[2], &[2], 0.0).unwrap().to_f64() - 1.0).abs() < 1e-15);
        assert!(restricted_eppf(&[1, 1], &[2], 0.5).is_err());
        assert!(restricted_eppf(&[1, 1], &[1, 1], 2.0).is_err());
        // matches the plain ratio where both sides are defined
        let p = QuadraticParams::new(0.4, 0.0).unwrap();
        let sizes = [3, 1, 2, 1];
        let init = [2, 1];
        let ratio = eppf(&sizes, &p).unwrap() / eppf(&init, &p).unwrap();
        let r = restricted_eppf(&sizes, &init, 0.4).unwrap();
        assert!(r.relative_difference(ratio) < 1e-13);
    }
}
