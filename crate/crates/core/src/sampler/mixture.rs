use rand::Rng;

use crate::error::{Error, Result};
use crate::inference::tail::{GammaTerm, Truncation};
use crate::inference::terminal::analytic_term;
use crate::inference::{pmf_k, PmfTable};
use crate::model::{EwensPitmanParams, PartitionState, QuadraticParams, Support};

use super::frequencies::uniform_simplex;
use super::sequential::grow;
use super::SeedSpec;

/// Largest κ for which balls are dropped into a simplex point directly;
/// beyond it Fisher's κ-box urn, which has the same law, is run instead.
pub const SIMPLEX_LIMIT: u64 = 4096;

/// Largest κ the tail search will return.
const KAPPA_CEILING: u64 = 1 << 60;

/// The quadratic partition as a mixture: κ from the terminal box-count law,
/// a uniform point of the (κ−1)-simplex, then n balls dropped i.i.d. into
/// the κ boxes, empty boxes discarded.
#[derive(Clone, Debug)]
pub struct MixtureSampler {
    table: PmfTable,
    survival: Vec<f64>,
    tail: Option<GammaTerm>,
}

impl MixtureSampler {
    pub fn new(params: &QuadraticParams, trunc: Truncation) -> Result<Self> {
        let mut table = pmf_k(params, trunc)?;
        let tail = match params.support() {
            Support::InfiniteSupport => Some(analytic_term(params)?),
            Support::RootAt(_) => None,
        };
        if let Some(term) = &tail {
            // the analytic survival is only used from its trusted start on
            if table.end() + 1 < term.min_start() {
                let explicit = Truncation {
                    eps: 0.0,
                    max_index: term.min_start() - 1,
                };
                table = pmf_k(params, explicit)?;
            }
        }
        let mut survival = vec![0.0; table.probs().len()];
        let mut run = table.truncation_tail_bound();
        for (i, p) in table.probs().iter().enumerate().rev() {
            survival[i] = run;
            run += p;
        }
        Ok(MixtureSampler { table, survival, tail })
    }

    pub fn table(&self) -> &PmfTable {
        &self.table
    }

    /// Inverse-survival draw of κ: the least κ with `ℙ(K > κ) < v`,
    /// `v` uniform on (0, 1]. Past the table the analytic tail is searched,
    /// so no mass is dropped.
    pub fn draw_kappa<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<u64> {
        let v = 1.0 - rng.random::<f64>();
        let i = self.survival.partition_point(|s| *s >= v);
        if i < self.survival.len() {
            return Ok(self.table.start() + i as u64);
        }
        let term = self.tail.as_ref().expect("finite tables end with zero survival");
        term.invert_survival(v, self.table.end(), KAPPA_CEILING)
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<PartitionState> {
        if n == 0 {
            return Err(Error::Domain("n >= 1 is required".into()));
        }
        let kappa = self.draw_kappa(rng)?;
        allocate(n, kappa, rng)
    }
}

/// n balls into κ boxes with uniform-simplex frequencies.
fn allocate<R: Rng + ?Sized>(n: usize, kappa: u64, rng: &mut R) -> Result<PartitionState> {
    if kappa > SIMPLEX_LIMIT {
        let urn = EwensPitmanParams::fisher(kappa)?;
        let mut state = PartitionState::start();
        grow(&mut state, n, &urn, rng)?;
        return Ok(state);
    }
    let weights = uniform_simplex(kappa, rng);
    let mut cumulative = Vec::with_capacity(weights.len());
    let mut run = 0.0;
    for w in &weights {
        run += w;
        cumulative.push(run);
    }
    let labels: Vec<usize> = (0..n)
        .map(|_| {
            let u = rng.random::<f64>() * run;
            cumulative.partition_point(|c| *c <= u).min(weights.len() - 1)
        })
        .collect();
    PartitionState::from_labels(&labels)
}

/// One draw from the mixture. Builds the κ table on every call; reuse a
/// [`MixtureSampler`] for batches.
pub fn sample_mixture(n: usize, params: &QuadraticParams, seed: SeedSpec) -> Result<PartitionState> {
    MixtureSampler::new(params, Truncation::default())?.sample(n, &mut seed.rng())
}
