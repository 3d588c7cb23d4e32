//! Exact laws: box counts after n balls, the terminal box count and its
//! posterior, occupancy laws, and the first-frequency law.

mod counts;
mod freq1;
mod posterior;
mod table;
pub(crate) mod tail;
pub(crate) mod terminal;

pub use counts::{box_count_chain, ep_pmf_kn, fisher_kn, joint_counts_pmf, ln_fisher_kn, multiplicities_pmf, pmf_kn};
pub use freq1::{freq1_moment, FirstFrequencyLaw};
pub use posterior::{posterior_k, restricted_pmf_k};
pub use table::{format_real, PmfTable};
pub use tail::Truncation;
pub use terminal::{pmf_k, pmf_k_value, tail_constant, ConstantForm, TailConstant};
