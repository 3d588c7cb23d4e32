use std::fmt;
use std::sync::Arc;

use crate::combinatorics::LogValue;
use crate::error::{domain, Result};

use super::params::{EwensPitmanParams, QuadraticParams};

type WeightFn = Arc<dyn Fn(u64) -> f64 + Send + Sync>;

/// A Gibbs family given by weight functions `(f, g, h)` and a genus α with
///
/// ```text
/// (n − αk) f(n − k) + g(k) = h(n),   1 ≤ k ≤ n,
/// v_{n,k} = ∏_{i=0}^{n−k−1} f(i) ∏_{j=1}^{k−1} g(j) / ∏_{m=1}^{n−1} h(m).
/// ```
///
/// Under the identity, `v` solves the backward recursion
/// `v_{n,k} = (n − kα) v_{n+1,k} + v_{n+1,k+1}` and the new-box probability
/// is `g(k)/h(n)`. The `f` product starts at `f(0)` because the identity
/// evaluates `f` at `n − k = 0` on the diagonal.
#[derive(Clone)]
pub struct GibbsTriple {
    alpha: f64,
    f: WeightFn,
    g: WeightFn,
    h: WeightFn,
    g_root: Option<u64>,
    label: String,
}

impl fmt::Debug for GibbsTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GibbsTriple")
            .field("label", &self.label)
            .field("alpha", &self.alpha)
            .field("g_root", &self.g_root)
            .finish()
    }
}

/// Parameter families that have a closed-form triple.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    EwensPitman(EwensPitmanParams),
    Quadratic(QuadraticParams),
}

impl GibbsTriple {
    pub fn new(
        label: impl Into<String>,
        alpha: f64,
        f: impl Fn(u64) -> f64 + Send + Sync + 'static,
        g: impl Fn(u64) -> f64 + Send + Sync + 'static,
        h: impl Fn(u64) -> f64 + Send + Sync + 'static,
        g_root: Option<u64>,
    ) -> Self {
        GibbsTriple {
            alpha,
            f: Arc::new(f),
            g: Arc::new(g),
            h: Arc::new(h),
            g_root,
            label: label.into(),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn g_root(&self) -> Option<u64> {
        self.g_root
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn f(&self, i: u64) -> f64 {
        (self.f)(i)
    }

    pub fn g(&self, k: u64) -> f64 {
        (self.g)(k)
    }

    pub fn h(&self, n: u64) -> f64 {
        (self.h)(n)
    }

    /// The same triple with `g` shifted by `delta`; breaks the identity for
    /// any `delta != 0`.
    pub fn with_g_offset(&self, delta: f64) -> Self {
        let g = Arc::clone(&self.g);
        GibbsTriple {
            alpha: self.alpha,
            f: Arc::clone(&self.f),
            g: Arc::new(move |k| g(k) + delta),
            h: Arc::clone(&self.h),
            g_root: None,
            label: format!("{} (g{:+})", self.label, delta),
        }
    }

    /// `max |(n − αk) f(n − k) + g(k) − h(n)| / |h(n)|` over `1 ≤ k ≤ n ≤ n_max`.
    pub fn identity_residual(&self, n_max: u64) -> f64 {
        let mut worst = 0.0f64;
        for n in 1..=n_max {
            let hn = self.h(n);
            for k in 1..=n {
                let lhs = (n as f64 - self.alpha * k as f64) * self.f(n - k) + self.g(k);
                worst = worst.max((lhs - hn).abs() / hn.abs());
            }
        }
        worst
    }

    /// Prefix table of `v_{n,k}` for `n ≤ n_max`.
    pub fn table(&self, n_max: u64) -> Result<TripleTable> {
        TripleTable::new(self, n_max)
    }

    /// Largest relative residual of `v_{n,k} − (n − kα) v_{n+1,k} − v_{n+1,k+1}`
    /// over `1 ≤ k ≤ n ≤ n_max`.
    pub fn recursion_residual(&self, n_max: u64) -> Result<f64> {
        let t = self.table(n_max + 1)?;
        let mut worst = 0.0f64;
        for n in 1..=n_max {
            for k in 1..=n {
                let lhs = t.v(n, k);
                let stay = LogValue::from_f64(n as f64 - k as f64 * self.alpha) * t.v(n + 1, k);
                let up = t.v(n + 1, k + 1);
                let scale = [lhs, stay, up]
                    .iter()
                    .map(|x| x.ln_abs())
                    .fold(f64::NEG_INFINITY, f64::max);
                if scale == f64::NEG_INFINITY {
                    continue;
                }
                let resid = lhs.sub(stay).sub(up);
                let rel = if resid.is_zero() {
                    0.0
                } else {
                    (resid.ln_abs() - scale).exp()
                };
                worst = worst.max(rel);
            }
        }
        Ok(worst)
    }
}

/// Signed log prefix products of one triple.
#[derive(Clone, Debug)]
pub struct TripleTable {
    f_prefix: Vec<LogValue>,
    g_prefix: Vec<LogValue>,
    h_prefix: Vec<LogValue>,
}

impl TripleTable {
    fn new(triple: &GibbsTriple, n_max: u64) -> Result<Self> {
        if n_max == 0 {
            return domain("triple table needs n_max >= 1");
        }
        let n = n_max as usize;
        let mut f_prefix = Vec::with_capacity(n);
        let mut g_prefix = Vec::with_capacity(n + 1);
        let mut h_prefix = Vec::with_capacity(n + 1);
        let (mut fp, mut gp, mut hp) = (LogValue::ONE, LogValue::ONE, LogValue::ONE);
        g_prefix.push(LogValue::ZERO);
        h_prefix.push(LogValue::ZERO);
        for i in 0..n {
            // f_prefix[m] = ∏_{i<m} f(i); g_prefix[k] = ∏_{1≤j<k} g(j); h_prefix[n] = ∏_{1≤m<n} h(m)
            f_prefix.push(fp);
            fp = fp * LogValue::from_f64(triple.f(i as u64));
            g_prefix.push(gp);
            h_prefix.push(hp);
            let idx = i as u64 + 1;
            let gv = if triple.g_root == Some(idx) { 0.0 } else { triple.g(idx) };
            gp = gp * LogValue::from_f64(gv);
            hp = hp * LogValue::from_f64(triple.h(idx));
        }
        Ok(TripleTable {
            f_prefix,
            g_prefix,
            h_prefix,
        })
    }

    pub fn n_max(&self) -> u64 {
        self.f_prefix.len() as u64
    }

    /// Panics outside `1 ≤ k ≤ n ≤ n_max`; zero for `k > n`.
    pub fn v(&self, n: u64, k: u64) -> LogValue {
        assert!(n >= 1 && k >= 1 && n <= self.n_max(), "v({n},{k}) outside table");
        if k > n {
            return LogValue::ZERO;
        }
        let (n, k) = (n as usize, k as usize);
        self.f_prefix[n - k] * self.g_prefix[k] / self.h_prefix[n]
    }
}

/// The closed-form triple of a family:
/// Ewens–Pitman `f ≡ 1, g(k) = αk + θ, h(n) = n + θ` (genus α);
/// quadratic `f(m) = m + γ, g(k) = k² − γk + ζ, h(n) = n² + γn + ζ` (genus −1).
pub fn gibbs_triple_for(family: Family) -> GibbsTriple {
    match family {
        Family::EwensPitman(ep) => GibbsTriple::new(
            format!("ewens-pitman(alpha={}, theta={})", ep.alpha(), ep.theta()),
            ep.alpha(),
            |_| 1.0,
            move |k| ep.new_box_weight(k),
            move |n| ep.normalizer(n),
            ep.kappa(),
        ),
        Family::Quadratic(p) => GibbsTriple::new(
            format!("quadratic(gamma={}, zeta={})", p.gamma(), p.zeta()),
            -1.0,
            move |m| p.old_box_factor(m),
            move |k| p.new_box_weight(k),
            move |n| p.normalizer(n),
            p.root(),
        ),
    }
}

/// `v_{n,k}` of a triple.
pub fn triple_v(n: u64, k: u64, triple: &GibbsTriple) -> Result<LogValue> {
    if k < 1 || k > n {
        return domain(format!("need 1 <= k <= n, got n={n}, k={k}"));
    }
    Ok(triple.table(n)?.v(n, k))
}
