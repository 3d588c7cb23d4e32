use crate::error::{Error, Result};

use super::params::{EwensPitmanParams, QuadraticParams};
use super::partition::PartitionState;

/// Sequential allocation rule of a Gibbs partition of genus α: a new box
/// opens with probability ν(n, k), otherwise the ball joins box j with
/// probability proportional to `n_j − α`.
pub trait GibbsRule: Sync {
    fn genus(&self) -> f64;

    /// ν_n(k): probability that ball n+1 opens box k+1.
    fn new_box_probability(&self, n: u64, k: u64) -> f64;

    /// Upper bound on the number of boxes, if any.
    fn max_blocks(&self) -> Option<u64>;

    /// ω_{n,j} for a box holding `size` of the n balls.
    fn old_box_probability(&self, n: u64, k: u64, size: u64) -> f64 {
        let alpha = self.genus();
        (1.0 - self.new_box_probability(n, k)) * (size as f64 - alpha) / (n as f64 - k as f64 * alpha)
    }
}

impl GibbsRule for QuadraticParams {
    fn genus(&self) -> f64 {
        -1.0
    }

    fn new_box_probability(&self, n: u64, k: u64) -> f64 {
        self.new_box_weight(k) / self.normalizer(n)
    }

    fn max_blocks(&self) -> Option<u64> {
        self.root()
    }

    fn old_box_probability(&self, n: u64, k: u64, size: u64) -> f64 {
        (size as f64 + 1.0) * (n as f64 - k as f64 + self.gamma()) / self.normalizer(n)
    }
}

impl GibbsRule for EwensPitmanParams {
    fn genus(&self) -> f64 {
        self.alpha()
    }

    fn new_box_probability(&self, n: u64, k: u64) -> f64 {
        self.new_box_weight(k) / self.normalizer(n)
    }

    fn max_blocks(&self) -> Option<u64> {
        self.kappa()
    }

    fn old_box_probability(&self, n: u64, _k: u64, size: u64) -> f64 {
        (size as f64 - self.alpha()) / self.normalizer(n)
    }
}

/// The quadratic rule with ζ = 0 started from a fixed allocation `b` of the
/// first m balls into k boxes. Well defined for `−(m − k) < γ < k`, a range
/// that extends past [0, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedStart {
    gamma: f64,
    initial: PartitionState,
}

impl RestrictedStart {
    pub fn new(initial: PartitionState, gamma: f64) -> Result<Self> {
        let (m, k) = (initial.n() as f64, initial.k() as f64);
        if !gamma.is_finite() || gamma <= -(m - k) || gamma >= k {
            return Err(Error::Inadmissible(format!(
                "restricted start needs -(m-k) < gamma < k, i.e. {} < gamma < {k}, got gamma={gamma}",
                -(m - k)
            )));
        }
        Ok(RestrictedStart { gamma, initial })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn initial(&self) -> &PartitionState {
        &self.initial
    }
}

impl GibbsRule for RestrictedStart {
    fn genus(&self) -> f64 {
        -1.0
    }

    fn new_box_probability(&self, n: u64, k: u64) -> f64 {
        let (n, k) = (n as f64, k as f64);
        k * (k - self.gamma) / (n * (n + self.gamma))
    }

    fn max_blocks(&self) -> Option<u64> {
        None
    }

    fn old_box_probability(&self, n: u64, k: u64, size: u64) -> f64 {
        let (n, k) = (n as f64, k as f64);
        (size as f64 + 1.0) * (n - k + self.gamma) / (n * (n + self.gamma))
    }
}

/// Placement probabilities for the next ball: one weight per existing box,
/// plus the new-box mass.
#[derive(Clone, Debug, PartialEq)]
pub struct Succession {
    pub old: Vec<f64>,
    pub new: f64,
}

impl Succession {
    pub fn total(&self) -> f64 {
        self.old.iter().sum::<f64>() + self.new
    }
}

fn succession_with<R: GibbsRule + ?Sized>(state: &PartitionState, rule: &R) -> Result<Succession> {
    let n = state.n() as u64;
    let k = state.k() as u64;
    if let Some(cap) = rule.max_blocks() {
        if k > cap {
            return Err(Error::Domain(format!(
                "state has {k} boxes but the parameters allow at most {cap}"
            )));
        }
    }
    let old = state
        .blocks()
        .iter()
        .map(|b| rule.old_box_probability(n, k, b.len() as u64))
        .collect();
    Ok(Succession {
        old,
        new: rule.new_box_probability(n, k),
    })
}

/// Rules (O) and (N) of the quadratic family at the given state.
pub fn succession(state: &PartitionState, params: &QuadraticParams) -> Result<Succession> {
    succession_with(state, params)
}

/// Rules (O^{α,θ}) and (N^{α,θ}).
pub fn ep_succession(state: &PartitionState, params: &EwensPitmanParams) -> Result<Succession> {
    succession_with(state, params)
}

/// Rules of a restricted start; the state must extend the initial allocation.
pub fn restricted_succession(state: &PartitionState, start: &RestrictedStart) -> Result<Succession> {
    let m = start.initial().n();
    if state.n() < m || &state.restrict(m)? != start.initial() {
        return Err(Error::Domain("state does not extend the initial allocation".into()));
    }
    succession_with(state, start)
}
