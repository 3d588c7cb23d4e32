use num_complex::Complex64;
use serde::Serialize;

use crate::combinatorics::{complex_log_gamma, ln_gamma, LnAccumulator};
use crate::error::{domain, Error, Result};
use crate::model::{QuadraticParams, Support};

use super::table::PmfTable;
use super::tail::{truncated_table, GammaTerm, Truncation};

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// `ln [Γ(z1+1) Γ(z2+1) / Γ(γ)]`, the prefactor of the terminal law.
fn ln_prefactor(params: &QuadraticParams) -> Result<f64> {
    let fq = params.factored();
    let num = complex_log_gamma(fq.z1 + one())? + complex_log_gamma(fq.z2 + one())?;
    Ok(num.re - ln_gamma(params.gamma()))
}

fn ln_step(params: &QuadraticParams, kappa: u64) -> f64 {
    let k = kappa as f64;
    params.new_box_weight(kappa).ln() - k.ln() - (k + 1.0).ln()
}

/// `ℙ(K = κ) = c·Γ(κ+s1)Γ(κ+s2)/(Γ(κ+1)Γ(κ))` as a gamma-ratio term.
pub(crate) fn analytic_term(params: &QuadraticParams) -> Result<GammaTerm> {
    let fq = params.factored();
    let denom = complex_log_gamma(fq.s1 + one())? + complex_log_gamma(fq.s2 + one())?;
    Ok(GammaTerm::new(
        ln_prefactor(params)? - denom.re,
        &[(fq.s1, one()), (fq.s2, Complex64::new(0.0, 0.0))],
    ))
}

fn require_positive_gamma(params: &QuadraticParams) -> Result<()> {
    if params.is_singleton_partition() {
        Err(Error::DegenerateInfiniteK)
    } else {
        Ok(())
    }
}

/// Law of the terminal number of boxes,
///
/// ```text
/// ℙ(K = κ) = Γ(z1+1)Γ(z2+1)/Γ(γ) · ∏_{i=1}^{κ−1} (i² − γi + ζ) / (κ! (κ−1)!),
/// ```
///
/// with `z1, z2` the roots of `y² − γy + ζ`. With a root at `k0` the table
/// is exactly `1..=k0`; otherwise it is cut per `trunc` and the remaining
/// mass is reported as the tail bound.
pub fn pmf_k(params: &QuadraticParams, trunc: Truncation) -> Result<PmfTable> {
    require_positive_gamma(params)?;
    let ln_first = ln_prefactor(params)?;
    match params.support() {
        Support::RootAt(k0) => {
            let mut acc = LnAccumulator::default();
            acc.add(ln_first);
            let mut ln = vec![acc.value()];
            for kappa in 1..k0 {
                acc.add(ln_step(params, kappa));
                ln.push(acc.value());
            }
            PmfTable::from_ln(1, ln, 0.0)
        }
        Support::InfiniteSupport => {
            let term = analytic_term(params)?;
            truncated_table(1, ln_first, |k| ln_step(params, k), &term, trunc)
        }
    }
}

/// A single `ℙ(K = κ)`, by the running product.
pub fn pmf_k_value(params: &QuadraticParams, kappa: u64) -> Result<f64> {
    require_positive_gamma(params)?;
    if kappa == 0 {
        return Ok(0.0);
    }
    if params.root().is_some_and(|k0| kappa > k0) {
        return Ok(0.0);
    }
    let mut acc = LnAccumulator::default();
    acc.add(ln_prefactor(params)?);
    for i in 1..kappa {
        acc.add(ln_step(params, i));
    }
    Ok(acc.value().exp())
}

/// Which closed form the numerical limit agrees with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantForm {
    /// `Γ(z1+1)Γ(z2+1) / (Γ(γ) Γ(s1+1) Γ(s2+1))`
    GammaS2PlusOne,
    /// The same with `Γ(s2+2)` in place of `Γ(s2+1)`.
    GammaS2PlusTwo,
    Neither,
}

/// Candidates for `c` in `ℙ(K = κ) ~ c κ^{−γ−1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailConstant {
    /// Denominator `Γ(s1+1)Γ(s2+1)`.
    pub with_s2_plus_one: f64,
    /// Denominator `Γ(s1+1)Γ(s2+2)`; `None` when that form is not real.
    pub with_s2_plus_two: Option<f64>,
    /// Richardson-extrapolated `ℙ(K=κ)κ^{γ+1}` from κ and 2κ.
    pub numerical: f64,
    pub kappa: u64,
    pub supported: ConstantForm,
}

/// Relative agreement required to credit a closed form.
const FORM_TOLERANCE: f64 = 1e-4;

/// Both readings of the tail constant and the numerical limit they are
/// judged against.
pub fn tail_constant(params: &QuadraticParams) -> Result<TailConstant> {
    require_positive_gamma(params)?;
    if let Some(k0) = params.root() {
        return domain(format!("finite support (root at k={k0}) has no tail"));
    }
    let fq = params.factored();
    let pre = ln_prefactor(params)?;
    let d1 = complex_log_gamma(fq.s1 + one())?;
    let d2 = complex_log_gamma(fq.s2 + one())?;
    let plus_one = (pre - (d1 + d2).re).exp();
    // Γ(s2+2) = (s2+1)Γ(s2+1)
    let factor = fq.s2 + one();
    let plus_two = (factor.im == 0.0).then(|| plus_one / factor.re);

    let kappa = 10_000u64;
    let a = |k: u64| -> Result<f64> { Ok(pmf_k_value(params, k)? * (k as f64).powf(params.gamma() + 1.0)) };
    let numerical = 2.0 * a(2 * kappa)? - a(kappa)?;
    let close = |c: f64| ((c - numerical) / numerical).abs() < FORM_TOLERANCE;
    let supported = if close(plus_one) {
        ConstantForm::GammaS2PlusOne
    } else if plus_two.is_some_and(close) {
        ConstantForm::GammaS2PlusTwo
    } else {
        ConstantForm::Neither
    };
    Ok(TailConstant {
        with_s2_plus_one: plus_one,
        with_s2_plus_two: plus_two,
        numerical,
        kappa,
        supported,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{ln_factorial, rising_factorial};

    fn q(g: f64, z: f64) -> QuadraticParams {
        QuadraticParams::new(g, z).unwrap()
    }

    /// γ(1−γ)_{κ−1}/κ!
    fn renewal(g: f64, kappa: u64) -> f64 {
        (g.ln() + rising_factorial(1.0 - g, kappa - 1).ln_abs() - ln_factorial(kappa)).exp()
    }

    #[test]
    fn first_values() {
        let t = pmf_k(&q(0.5, 0.0), Truncation::default()).unwrap();
        assert!((t.get(1) - 0.5).abs() < 1e-15);
        assert!((t.get(2) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn zeta_zero_matches_renewal_form() {
        for g in [0.1, 0.25, 0.5, 0.75, 0.99, 1.0] {
            let t = pmf_k(&q(g, 0.0), Truncation::default()).unwrap();
            for kappa in 1..=50 {
                let r = renewal(g, kappa);
                if r == 0.0 {
                    assert_eq!(t.get(kappa), 0.0);
                    continue;
                }
                assert!((t.get(kappa) / r - 1.0).abs() < 1e-10, "{g} {kappa}");
            }
        }
    }

    #[test]
    fn finite_support() {
        let t = pmf_k(&q(6.0, 9.0), Truncation::default()).unwrap();
        assert_eq!(t.support(), 1..=3);
        assert_eq!(t.truncation_tail_bound(), 0.0);
        assert!((t.total() - 1.0).abs() < 1e-12);
        assert!((t.get(1) - 0.3).abs() < 1e-14);
        assert!((t.get(2) - 0.6).abs() < 1e-14);
        // root at k=1: a single box
        let t = pmf_k(&q(1.0, 0.0), Truncation::default()).unwrap();
        assert_eq!(t.support(), 1..=1);
        assert!((t.get(1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tables_account_for_all_mass() {
        for (g, z) in [
            (0.5, 0.0),
            (0.9, 0.0),
            (1.0, 1.0),
            (2.0, 3.0),
            (0.3, 2.0),
            (3.0, 2.1),
            (0.05, 0.0),
        ] {
            let t = pmf_k(&q(g, z), Truncation::default()).unwrap();
            let s = t.total() + t.truncation_tail_bound();
            assert!((s - 1.0).abs() < 1e-9, "{g} {z}: {s}");
        }
        // γ large enough for eps to be reached before the cap
        let t = pmf_k(&q(5.0, 7.0), Truncation::default()).unwrap();
        assert!(t.truncation_tail_bound() < 1e-10);
        assert!(t.end() < 100_000);
        let before = t.truncation_tail_bound() + t.get(t.end());
        assert!(before >= 1e-10);
    }

    #[test]
    fn tail_matches_exact_survival() {
        // ζ = 0: ℙ(K > κ) = (1−γ)_κ / κ!
        for g in [0.3, 0.5, 0.8] {
            let trunc = Truncation::new(1e-10, 700).unwrap();
            let t = pmf_k(&q(g, 0.0), trunc).unwrap();
            let exact = (rising_factorial(1.0 - g, t.end()).ln_abs() - ln_factorial(t.end())).exp();
            assert!((t.truncation_tail_bound() / exact - 1.0).abs() < 1e-9, "{g}");
        }
    }

    #[test]
    fn degenerate_gamma_zero() {
        assert_eq!(
            pmf_k(&q(0.0, 0.0), Truncation::default()),
            Err(Error::DegenerateInfiniteK)
        );
        assert!(tail_constant(&q(6.0, 9.0)).is_err());
    }

    #[test]
    fn tail_constant_forms() {
        let g = 0.5;
        let c = tail_constant(&q(g, 0.0)).unwrap();
        let expect = g / ln_gamma(1.0 - g).exp();
        assert!((c.with_s2_plus_one / expect - 1.0).abs() < 1e-12);
        assert!((c.with_s2_plus_two.unwrap() / (expect / (1.0 - g)) - 1.0).abs() < 1e-12);
        assert!((c.numerical / expect - 1.0).abs() < 1e-6);
        assert_eq!(c.supported, ConstantForm::GammaS2PlusOne);
        for (g, z) in [(1.0, 1.0), (2.0, 3.0), (0.3, -0.5)] {
            let c = tail_constant(&q(g, z)).unwrap();
            assert_eq!(c.supported, ConstantForm::GammaS2PlusOne, "{g} {z}: {c:?}");
        }
    }

    #[test]
    fn ratio_of_neighbours_tends_to_one() {
        let p = q(2.0, 3.0);
        let r = pmf_k_value(&p, 100_001).unwrap() / pmf_k_value(&p, 100_000).unwrap();
        assert!((r - 1.0).abs() < 1e-4);
    }
}
