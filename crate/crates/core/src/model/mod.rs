//! Parameter domains, partitions of `[n]`, the succession rules of both
//! families, EPPF and `v_{n,k}` evaluation, restricted starts and the
//! generic Gibbs-triple engine.

mod eppf;
mod gibbs;
mod params;
mod partition;
mod rules;

pub use eppf::{ep_eppf, ep_v_nk, eppf, restricted_eppf, v_nk, v_nk_factored, QuadraticWeights};
pub use gibbs::{gibbs_triple_for, triple_v, Family, GibbsTriple, TripleTable};
pub use params::{validate_params, EwensPitmanParams, QuadraticParams, Support, FISHER_TOLERANCE, ROOT_TOLERANCE};
pub use partition::{composition_total, PartitionState, MAX_EXACT_N};
pub use rules::{ep_succession, restricted_succession, succession, GibbsRule, RestrictedStart, Succession};
