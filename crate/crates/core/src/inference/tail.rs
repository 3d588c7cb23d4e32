//! Tail sums of power-decaying positive sequences whose terms are ratios of
//! gamma functions, plus the adaptive truncation shared by the infinite
//! support tables.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::combinatorics::{GammaRatio, LnAccumulator};
use crate::error::Result;

use super::table::PmfTable;

/// `t(x) = exp(ln_const) · ∏_i Γ(x + a_i) / Γ(x + b_i)`, real and positive
/// for real `x` past the start of the support. Decays like `x^{−(p+1)}` with
/// `p = Re Σ(b_i − a_i) − 1`.
#[derive(Clone, Debug)]
pub(crate) struct GammaTerm {
    ln_const: f64,
    ratios: Vec<GammaRatio>,
}

impl GammaTerm {
    pub fn new(ln_const: f64, pairs: &[(Complex64, Complex64)]) -> Self {
        GammaTerm {
            ln_const,
            ratios: pairs.iter().map(|(a, b)| GammaRatio::new(*a, *b)).collect(),
        }
    }

    pub fn decay(&self) -> f64 {
        self.ratios
            .iter()
            .map(|r| {
                let (a, b) = r.shifts();
                (b - a).re
            })
            .sum::<f64>()
            - 1.0
    }

    fn shift_scale(&self) -> f64 {
        self.ratios
            .iter()
            .map(|r| {
                let (a, b) = r.shifts();
                a.norm().max(b.norm())
            })
            .fold(0.0, f64::max)
    }

    /// Smallest start at which the Euler–Maclaurin tail is trusted.
    pub fn min_start(&self) -> u64 {
        (25.0 * (self.shift_scale() + 1.0)).max(200.0).ceil() as u64
    }

    pub fn ln_eval(&self, x: f64) -> Result<f64> {
        let mut acc = Complex64::new(self.ln_const, 0.0);
        for r in &self.ratios {
            acc += r.ln_at(x)?;
        }
        Ok(acc.re)
    }

    fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.ln_eval(x)?.exp())
    }

    /// `Σ_{κ ≥ start} t(κ)` by Euler–Maclaurin: the integral from `start`
    /// plus `t/2 − t'/12 + t'''/720` at `start`.
    pub fn tail_from(&self, start: u64) -> Result<f64> {
        let p = self.decay();
        debug_assert!(p > 0.0);
        let n = start as f64;
        // integral up to X with x = n·e^s, panels short enough that the
        // e^{−(p+1)s} factor stays polynomial-like on each; past X the
        // term is a pure power to relative O(1/X)
        let far = (n * 1e10).max(1e12);
        let s_end = (far / n).ln();
        let width = (6.0 / (p + 1.0)).min(2.0);
        let (nodes, weights) = gauss_legendre();
        let mut integral = 0.0;
        let mut lo = 0.0f64;
        while lo < s_end {
            let hi = (lo + width).min(s_end);
            let (mid, half) = (0.5 * (hi + lo), 0.5 * (hi - lo));
            let mut panel = 0.0;
            for (z, w) in nodes.iter().zip(weights) {
                let x = n * (mid + half * z).exp();
                panel += w * self.eval(x)? * x;
            }
            integral += half * panel;
            lo = hi;
            if half * panel <= 1e-20 * integral {
                break;
            }
        }
        if lo >= s_end {
            integral += self.eval(far)? * far / p;
        }
        let t = |d: f64| self.eval(n + d);
        let (m2, m1, p1, p2) = (t(-2.0)?, t(-1.0)?, t(1.0)?, t(2.0)?);
        let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / 12.0;
        let d3 = (p2 - 2.0 * p1 + 2.0 * m1 - m2) / 2.0;
        Ok(integral + t(0.0)? / 2.0 - d1 / 12.0 + d3 / 720.0)
    }
}

impl GammaTerm {
    /// Least `κ > floor` with `Σ_{j>κ} t(j) < v`, given that `floor` itself
    /// does not qualify and `floor + 1` is past [`Self::min_start`]. Newton steps on the power law `S(κ) ∝ κ^{−p}`,
    /// then a short exact walk; capped at `ceiling`.
    pub fn invert_survival(&self, v: f64, floor: u64, ceiling: u64) -> Result<u64> {
        let p = self.decay();
        let s = |k: u64| self.tail_from(k + 1);
        let mut k = floor.max(self.min_start());
        for _ in 0..40 {
            let sk = s(k)?;
            let next = (k as f64 * (sk / v).powf(1.0 / p)).round();
            let next = next.clamp(floor as f64, ceiling as f64) as u64;
            if next.abs_diff(k) <= 1 {
                k = next;
                break;
            }
            k = next;
        }
        // bracket the boundary s(lo) >= v > s(hi), then bisect
        let mut hi = k;
        let mut step = 1u64;
        while s(hi)? >= v {
            if hi >= ceiling {
                return Ok(ceiling);
            }
            hi = (hi + step).min(ceiling);
            step *= 2;
        }
        let mut lo = hi;
        step = 1;
        while lo > floor {
            let cand = lo.saturating_sub(step).max(floor);
            if cand == floor || s(cand)? >= v {
                lo = cand;
                break;
            }
            hi = cand;
            lo = cand;
            step *= 2;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if s(mid)? < v {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}

/// 20-point Gauss–Legendre rule on [−1, 1].
fn gauss_legendre() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let m = 20usize;
        let mut nodes = Vec::with_capacity(m);
        let mut weights = Vec::with_capacity(m);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for j in 2..=m {
                    let j = j as f64;
                    let p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        (nodes, weights)
    })
}

/// How far an infinite-support table is listed: stop at the first index
/// whose remaining mass is below `eps`, but never past `max_index`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncation {
    pub eps: f64,
    pub max_index: u64,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            eps: 1e-10,
            max_index: 100_000,
        }
    }
}

impl Truncation {
    pub fn new(eps: f64, max_index: u64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return crate::error::domain(format!("eps must lie in (0, 1), got {eps}"));
        }
        Ok(Truncation { eps, max_index })
    }
}

/// Lists `t(start), t(start+1), …` from `ln t(start)` and the log step
/// `ln t(κ+1) − ln t(κ)`, cutting where the remaining mass (explicit terms
/// up to the Euler–Maclaurin start, then the analytic tail) falls below eps.
pub(crate) fn truncated_table(
    start: u64,
    ln_first: f64,
    ln_step: impl Fn(u64) -> f64,
    term: &GammaTerm,
    trunc: Truncation,
) -> Result<PmfTable> {
    let cap = trunc.max_index.max(start);
    let em_start = term.min_start().max(start + 1);
    let mut ln_terms = Vec::new();
    let mut acc = LnAccumulator::default();
    acc.add(ln_first);
    let mut extend = |ln_terms: &mut Vec<f64>, last: u64| {
        while start + (ln_terms.len() as u64) <= last {
            let kappa = start + ln_terms.len() as u64;
            if kappa > start {
                acc.add(ln_step(kappa - 1));
            }
            ln_terms.push(acc.value());
        }
    };
    extend(&mut ln_terms, em_start - 1);
    let em_tail = term.tail_from(em_start)?;
    // remaining mass after each listed index, accumulated from the far end
    let mut remaining = vec![0.0; ln_terms.len()];
    let mut run = em_tail;
    for i in (0..ln_terms.len()).rev() {
        remaining[i] = run;
        run += ln_terms[i].exp();
    }
    let last_pre = em_start - 1;
    let hit = remaining.iter().position(|r| *r < trunc.eps);
    let (last, tail) = match hit {
        Some(i) if start + i as u64 <= cap => (start + i as u64, remaining[i]),
        _ if cap <= last_pre => (cap, remaining[(cap - start) as usize]),
        _ => {
            // smallest K in [em_start, cap] with tail_from(K+1) < eps
            let cap_tail = term.tail_from(cap + 1)?;
            if cap_tail >= trunc.eps {
                (cap, cap_tail)
            } else {
                let (mut lo, mut hi) = (em_start - 1, cap);
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    if term.tail_from(mid + 1)? < trunc.eps {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                let t = if hi == cap { cap_tail } else { term.tail_from(hi + 1)? };
                (hi, t)
            }
        }
    };
    extend(&mut ln_terms, last);
    ln_terms.truncate((last - start + 1) as usize);
    PmfTable::from_ln(start, ln_terms, tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::ln_gamma;

    #[test]
    fn quadrature_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre();
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let m: f64 = x.iter().zip(w).map(|(x, w)| w * x.powi(38)).sum();
        assert!((m - 2.0 / 39.0).abs() < 1e-14);
    }

    #[test]
    fn telescoping_tail() {
        // 1/(κ(κ+1)) = Γ(κ)/Γ(κ+2), tail from N is 1/N
        let term = GammaTerm::new(0.0, &[(Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0))]);
        for n in [200u64, 1000, 123_456] {
            let s = term.tail_from(n).unwrap();
            assert!((s * n as f64 - 1.0).abs() < 1e-12, "{n}: {s}");
        }
    }

    #[test]
    fn heavy_tail_matches_closed_form() {
        // γ(1−γ)_{κ−1}/κ! with γ=0.3: tail from N is (1−γ)_{N−1}/(N−1)!
        let g: f64 = 0.3;
        let term = GammaTerm::new(
            g.ln() - ln_gamma(1.0 - g),
            &[(Complex64::new(-g, 0.0), Complex64::new(1.0, 0.0))],
        );
        for n in [200u64, 5000] {
            let ln_exact: f64 = (1..n).map(|i| (-g / i as f64).ln_1p()).sum();
            let exact = ln_exact.exp();
            let s = term.tail_from(n).unwrap();
            assert!((s / exact - 1.0).abs() < 1e-12, "{n}: {s} vs {exact}");
        }
    }
}
