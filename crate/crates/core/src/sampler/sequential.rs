use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{GibbsRule, PartitionState, QuadraticParams, RestrictedStart};

use super::SeedSpec;

/// Adds balls to `state` one at a time until it holds `n`, placing each by
/// the rule's old-box and new-box probabilities.
pub fn grow<G, R>(state: &mut PartitionState, n: usize, rule: &G, rng: &mut R) -> Result<()>
where
    G: GibbsRule + ?Sized,
    R: Rng + ?Sized,
{
    let mut weights = Vec::new();
    while state.n() < n {
        let (m, k) = (state.n() as u64, state.k() as u64);
        weights.clear();
        weights.extend(
            state
                .blocks()
                .iter()
                .map(|b| rule.old_box_probability(m, k, b.len() as u64)),
        );
        let nu = rule.new_box_probability(m, k);
        let total = weights.iter().sum::<f64>() + nu;
        let mut u = rng.random::<f64>() * total;
        let mut target = None;
        for (j, w) in weights.iter().enumerate() {
            if u < *w {
                target = Some(j);
                break;
            }
            u -= w;
        }
        if target.is_none() && nu <= 0.0 {
            // rounding pushed u past the old boxes while no new box may open
            target = weights.iter().rposition(|w| *w > 0.0);
        }
        state.place_next(target)?;
    }
    Ok(())
}

/// A partition of `[n]` grown from ball 1 under any Gibbs rule.
pub fn sample_rule<G: GibbsRule + ?Sized>(n: usize, rule: &G, seed: SeedSpec) -> Result<PartitionState> {
    if n == 0 {
        return Err(Error::Domain("n >= 1 is required".into()));
    }
    let mut state = PartitionState::start();
    grow(&mut state, n, rule, &mut seed.rng())?;
    Ok(state)
}

/// A partition of `[n]` from the quadratic succession rules. With `initial`
/// the process starts from that allocation of the first balls; this needs
/// ζ = 0 and uses the restart rules.
pub fn sample_sequential(
    n: usize,
    params: &QuadraticParams,
    seed: SeedSpec,
    initial: Option<&PartitionState>,
) -> Result<PartitionState> {
    match initial {
        None => sample_rule(n, params, seed),
        Some(b) => {
            if params.zeta() != 0.0 {
                return Err(Error::Inadmissible(format!(
                    "a fixed initial allocation needs zeta = 0, got zeta={}",
                    params.zeta()
                )));
            }
            sample_restricted(n, &RestrictedStart::new(b.clone(), params.gamma())?, seed)
        }
    }
}

/// Continues a restart's initial allocation up to `n` balls.
pub fn sample_restricted(n: usize, start: &RestrictedStart, seed: SeedSpec) -> Result<PartitionState> {
    let mut state = start.initial().clone();
    if n < state.n() {
        return Err(Error::Domain(format!(
            "n={n} is smaller than the {} balls of the initial allocation",
            state.n()
        )));
    }
    grow(&mut state, n, start, &mut seed.rng())?;
    Ok(state)
}
