use std::collections::BTreeMap;

use rand::Rng;

use crate::combinatorics::{lah_number, ln_factorial, ln_gamma, LnAccumulator};
use crate::error::{Error, Result};
use crate::inference::{
    box_count_chain, freq1_moment, joint_counts_pmf, multiplicities_pmf, pmf_k, pmf_k_value, pmf_kn, posterior_k,
    restricted_pmf_k, tail_constant, Truncation,
};
use crate::model::{
    ep_eppf, gibbs_triple_for, Family, GibbsTriple, PartitionState, QuadraticParams, QuadraticWeights, RestrictedStart,
};
use crate::sampler::{
    beta_two, grow, replicate_counts, sample_restricted, sample_rule, size_biased_permutation, stick_breaking,
    uniform_simplex, MixtureSampler, SeedSpec,
};

use super::enumerate::{compositions, multiplicity_vectors, rgs_sizes, visit_set_partitions};
use super::exact::{compare_with_exact, RationalParams};
use super::report::TestReport;
use super::stats::{chi_square, total_variation, GOF_P_THRESHOLD};

fn label(params: &QuadraticParams) -> String {
    format!("gamma={},zeta={}", params.gamma(), params.zeta())
}

fn relative(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

/// Relative difference of two log-values.
fn ln_relative(ln_a: f64, ln_b: f64) -> f64 {
    if ln_a == ln_b {
        0.0
    } else {
        (ln_a - ln_b).exp_m1().abs()
    }
}

/// Exact masses of every set partition of [n], keyed by restricted growth string.
fn partition_masses(n: usize, params: &QuadraticParams) -> Result<BTreeMap<Vec<usize>, f64>> {
    let w = QuadraticWeights::new(params, n)?;
    let mut out = BTreeMap::new();
    visit_set_partitions(n, |rgs, k| {
        let ln: f64 = rgs_sizes(rgs, k).iter().map(|s| ln_factorial(*s as u64)).sum();
        out.insert(rgs.to_vec(), (w.ln_v(n, k) + ln).exp());
    })?;
    Ok(out)
}

/// `|Σ p − 1|` over all set partitions of `[n]`.
pub fn check_eppf_normalization(n: usize, params: &QuadraticParams) -> Result<TestReport> {
    let w = QuadraticWeights::new(params, n)?;
    let mut total = LnAccumulator::default();
    let mut zero_cells = 0u64;
    let mut count = 0u64;
    visit_set_partitions(n, |rgs, k| {
        let ln: f64 = rgs_sizes(rgs, k).iter().map(|s| ln_factorial(*s as u64)).sum();
        let p = (w.ln_v(n, k) + ln).exp();
        if p == 0.0 {
            zero_cells += 1;
        }
        total.add(p);
        count += 1;
    })?;
    let s = total.value();
    Ok(TestReport::judged(
        format!("eppf_normalization[n={n},{}]", label(params)),
        (s - 1.0).abs(),
        1e-12,
        format!("sum={s:.17} over {count} partitions, {zero_cells} with mass exactly 0"),
    ))
}

/// Same, for an Ewens–Pitman point.
pub fn check_ep_eppf_normalization(n: usize, params: &crate::model::EwensPitmanParams) -> Result<TestReport> {
    let mut total = LnAccumulator::default();
    let mut err = None;
    visit_set_partitions(n, |rgs, k| match ep_eppf(&rgs_sizes(rgs, k), params) {
        Ok(p) => total.add(p.to_f64()),
        Err(e) => err = Some(e),
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let s = total.value();
    Ok(TestReport::judged(
        format!(
            "ep_eppf_normalization[n={n},alpha={},theta={}]",
            params.alpha(),
            params.theta()
        ),
        (s - 1.0).abs(),
        1e-12,
        format!("sum={s:.17}"),
    ))
}

/// Box-count law against brute-force sums over set partitions.
pub fn check_kn_vs_enumeration(n: usize, params: &QuadraticParams) -> Result<TestReport> {
    let masses = partition_masses(n, params)?;
    let mut by_k: Vec<LnAccumulator> = Vec::new();
    by_k.resize_with(n + 1, LnAccumulator::default);
    for (rgs, p) in &masses {
        let k = rgs.iter().max().map_or(0, |m| m + 1);
        by_k[k].add(*p);
    }
    let table = pmf_kn(n as u64, params)?;
    let mut worst = (0.0f64, 0usize);
    for (k, sum) in by_k.iter().enumerate().skip(1) {
        let brute = sum.value();
        let err = if brute == 0.0 {
            if table.get(k as u64) == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            relative(table.get(k as u64), brute)
        };
        if err >= worst.0 {
            worst = (err, k);
        }
    }
    Ok(TestReport::judged(
        format!("kn_vs_enumeration[n={n},{}]", label(params)),
        worst.0,
        1e-12,
        format!("largest relative error at k={}", worst.1),
    ))
}

/// `ℙ(K_n = 1) = nγ/(n+γ−1)` for ζ = 0, n ≤ n_max.
pub fn check_single_block_closed_form(gamma: f64, n_max: u64) -> Result<TestReport> {
    let params = QuadraticParams::new(gamma, 0.0)?;
    let mut worst = (0.0f64, 1u64);
    for n in 1..=n_max {
        let nf = n as f64;
        let expect = nf * gamma / (nf + gamma - 1.0);
        let err = relative(pmf_kn(n, &params)?.get(1), expect);
        if err >= worst.0 {
            worst = (err, n);
        }
    }
    Ok(TestReport::judged(
        format!("single_block_closed_form[gamma={gamma}]"),
        worst.0,
        1e-12,
        format!("n <= {n_max}; worst at n={}", worst.1),
    ))
}

/// Terminal law against `γ(1−γ)_{κ−1}/κ!` for ζ = 0.
pub fn check_renewal_form(gamma: f64, kappa_max: u64) -> Result<TestReport> {
    let params = QuadraticParams::new(gamma, 0.0)?;
    let table = pmf_k(&params, Truncation::new(1e-10, kappa_max.max(1)).unwrap_or_default())?;
    let mut ln_ref = gamma.ln();
    let mut worst = (0.0f64, 1u64);
    for kappa in 1..=kappa_max {
        if kappa > 1 {
            ln_ref += (kappa as f64 - 1.0 - gamma).ln();
        }
        let err = ln_relative(table.ln_get(kappa), ln_ref - ln_factorial(kappa));
        if err >= worst.0 {
            worst = (err, kappa);
        }
    }
    Ok(TestReport::judged(
        format!("renewal_form[gamma={gamma}]"),
        worst.0,
        1e-10,
        format!("kappa <= {kappa_max}; worst at kappa={}", worst.1),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplerKind {
    Sequential,
    Mixture,
}

impl SamplerKind {
    fn name(&self) -> &'static str {
        match self {
            SamplerKind::Sequential => "sequential",
            SamplerKind::Mixture => "mixture",
        }
    }
}

/// Empirical law of `Π_n` (as restricted growth strings) over `reps` streams.
pub fn partition_counts(
    kind: SamplerKind,
    n: usize,
    params: &QuadraticParams,
    reps: u64,
    master_seed: u64,
) -> Result<BTreeMap<Vec<usize>, u64>> {
    match kind {
        SamplerKind::Sequential => replicate_counts(master_seed, reps, |s| Ok(sample_rule(n, params, s)?.rgs())),
        SamplerKind::Mixture => {
            let sampler = MixtureSampler::new(params, Truncation::default())?;
            replicate_counts(master_seed, reps, |s| Ok(sampler.sample(n, &mut s.rng())?.rgs()))
        }
    }
}

/// Pearson test of a sampler against exact partition masses (n ≤ 8) or,
/// for larger n, against the box-count law.
pub fn check_sampler_gof(
    kind: SamplerKind,
    n: usize,
    params: &QuadraticParams,
    reps: u64,
    master_seed: u64,
) -> Result<TestReport> {
    check_sampler_gof_against(kind, n, params, params, reps, master_seed)
}

/// Samples under `truth` and tests against the masses of `model`; with
/// different parameters this is a negative control.
pub fn check_sampler_gof_against(
    kind: SamplerKind,
    n: usize,
    truth: &QuadraticParams,
    model: &QuadraticParams,
    reps: u64,
    master_seed: u64,
) -> Result<TestReport> {
    let (fit, cells) = if n <= 8 {
        let observed = partition_counts(kind, n, truth, reps, master_seed)?;
        let expected = partition_masses(n, model)?;
        (chi_square(&observed, &expected, reps, GOF_P_THRESHOLD)?, "partitions")
    } else {
        let observed = match kind {
            SamplerKind::Sequential => replicate_counts(master_seed, reps, |s| Ok(sample_rule(n, truth, s)?.k()))?,
            SamplerKind::Mixture => {
                let sampler = MixtureSampler::new(truth, Truncation::default())?;
                replicate_counts(master_seed, reps, |s| Ok(sampler.sample(n, &mut s.rng())?.k()))?
            }
        };
        let table = pmf_kn(n as u64, model)?;
        let expected: BTreeMap<usize, f64> = table.iter().map(|(k, p)| (k as usize, p)).collect();
        (chi_square(&observed, &expected, reps, GOF_P_THRESHOLD)?, "box counts")
    };
    Ok(TestReport::judged(
        format!("sampler_gof[{},n={n},{}]", kind.name(), label(truth)),
        fit.statistic,
        fit.critical,
        format!(
            "chi2={:.4} df={} p={:.4e} over {cells}, reps={reps}; reject below p={GOF_P_THRESHOLD:e}",
            fit.statistic, fit.df, fit.p_value
        ),
    ))
}

/// Total-variation distance between the sequential and mixture laws of `Π_n`.
pub fn check_sampler_tv(n: usize, params: &QuadraticParams, reps: u64, master_seed: u64) -> Result<TestReport> {
    let a = partition_counts(SamplerKind::Sequential, n, params, reps, master_seed)?;
    let b = partition_counts(
        SamplerKind::Mixture,
        n,
        params,
        reps,
        master_seed ^ 0x9e37_79b9_7f4a_7c15,
    )?;
    let tv = total_variation(&a, &b);
    Ok(TestReport::judged(
        format!("sampler_tv[n={n},{}]", label(params)),
        tv,
        0.005,
        format!(
            "reps={reps} per sampler, {} and {} distinct partitions",
            a.len(),
            b.len()
        ),
    ))
}

/// Partitions with the same multiset of block sizes must be equally likely:
/// largest pairwise z-score within a size class.
pub fn check_exchangeability(n: usize, params: &QuadraticParams, reps: u64, master_seed: u64) -> Result<TestReport> {
    let counts = partition_counts(SamplerKind::Sequential, n, params, reps, master_seed)?;
    let mut classes: BTreeMap<Vec<usize>, Vec<f64>> = BTreeMap::new();
    visit_set_partitions(n, |rgs, k| {
        let mut sizes = rgs_sizes(rgs, k);
        sizes.sort_unstable();
        let freq = *counts.get(rgs).unwrap_or(&0) as f64 / reps as f64;
        classes.entry(sizes).or_default().push(freq);
    })?;
    let mut worst = 0.0f64;
    for freqs in classes.values() {
        for i in 0..freqs.len() {
            for j in i + 1..freqs.len() {
                let (a, b) = (freqs[i], freqs[j]);
                let se = ((a * (1.0 - a) + b * (1.0 - b)) / reps as f64).sqrt();
                if se > 0.0 {
                    worst = worst.max((a - b).abs() / se);
                }
            }
        }
    }
    Ok(TestReport::judged(
        format!("exchangeability[n={n},{}]", label(params)),
        worst,
        4.0,
        format!("largest pairwise z within {} size classes, reps={reps}", classes.len()),
    ))
}

/// Largest box count over sequential runs against the root of the quadratic.
pub fn check_root_cap(n: usize, params: &QuadraticParams, reps: u64, master_seed: u64) -> Result<TestReport> {
    let Some(k0) = params.root() else {
        return Err(Error::Domain(format!("{} has no root", label(params))));
    };
    let counts = replicate_counts(master_seed, reps, |s| Ok(sample_rule(n, params, s)?.k()))?;
    let max_k = counts.keys().max().copied().unwrap_or(0);
    Ok(TestReport::judged(
        format!("root_caps_box_count[n={n},{}]", label(params)),
        max_k as f64,
        k0 as f64,
        format!("largest box count over {reps} runs: {max_k}"),
    ))
}

/// A finite-support terminal law: exact support `1..=k0` and total mass 1.
pub fn check_finite_support(params: &QuadraticParams) -> Result<TestReport> {
    let Some(k0) = params.root() else {
        return Err(Error::Domain(format!("{} has no root", label(params))));
    };
    let t = pmf_k(params, Truncation::default())?;
    let support_ok = t.support() == (1..=k0) && t.probs().iter().all(|p| *p > 0.0);
    let err = (t.total() - 1.0).abs();
    Ok(TestReport::judged(
        format!("finite_support[{}]", label(params)),
        if support_ok { err } else { f64::INFINITY },
        1e-12,
        format!("support {:?}, sum={:.17}", t.support(), t.total()),
    ))
}

/// Residuals of the weight identity and of the backward recursion.
pub fn check_recursion_residuals(triple: &GibbsTriple, n_max: u64) -> Result<TestReport> {
    let identity = triple.identity_residual(n_max);
    let recursion = triple.recursion_residual(n_max)?;
    Ok(TestReport::judged(
        format!("recursion_residuals[{}]", triple.label()),
        identity.max(recursion),
        1e-10,
        format!("identity residual {identity:.3e}, recursion residual {recursion:.3e}, n <= {n_max}"),
    ))
}

/// Posterior of K against prior × likelihood / marginal, elementwise, and
/// its normalisation.
pub fn check_posterior_bayes(n: u64, k: u64, gamma: f64) -> Result<TestReport> {
    let name = format!("posterior_bayes[n={n},k={k},gamma={gamma}]");
    if gamma == 1.0 {
        return Ok(TestReport::skipped(
            name,
            "edge excluded: gamma = 1 gives K = 1 almost surely",
        ));
    }
    let post = posterior_k(n, k, gamma, Truncation::default())?;
    let params = QuadraticParams::new(gamma, 0.0)?;
    let ln_marginal = pmf_kn(n, &params)?.ln_get(k);
    // Fisher likelihood d_{n,k} (κ−k+1)_{k−1} / (κ+1)_{n−1}
    let ln_lah = lah_number(n, k)?.ln_abs();
    // prior γ(1−γ)_{κ−1}/κ!, advanced from κ = 1
    let mut ln_prior = LnAccumulator::default();
    ln_prior.add(gamma.ln());
    let mut worst = (0.0f64, k);
    for kappa in 1..=post.end() {
        if kappa > 1 {
            let x = kappa as f64;
            ln_prior.add((x - 1.0 - gamma).ln() - x.ln());
        }
        if kappa < k {
            continue;
        }
        let x = kappa as f64;
        let ln_falling: f64 = (1..k).map(|i| (x - i as f64).ln()).sum();
        let ln_rising: f64 = (1..n).map(|j| (x + j as f64).ln()).sum();
        let oracle = ln_prior.value() + ln_lah + ln_falling - ln_rising - ln_marginal;
        let err = ln_relative(post.ln_get(kappa), oracle);
        if err >= worst.0 {
            worst = (err, kappa);
        }
    }
    let norm = (post.total() + post.truncation_tail_bound() - 1.0).abs();
    Ok(TestReport::judged(
        name,
        worst.0.max(norm),
        1e-9,
        format!(
            "kappa in {:?}, tail {:.3e}; worst relative error {:.3e} at kappa={}, |sum+tail-1|={norm:.3e}",
            post.support(),
            post.truncation_tail_bound(),
            worst.0,
            worst.1
        ),
    ))
}

/// Terminal laws of the two restarts with closed forms `2/(κ(κ+1))` (γ = 1
/// from two singletons) and `1/(κ(κ+1))` (γ = 0 from one pair).
pub fn check_restricted_examples(kappa_max: u64) -> Result<TestReport> {
    let cases = [(vec![vec![1], vec![2]], 1.0, 2.0), (vec![vec![1, 2]], 0.0, 1.0)];
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for (blocks, gamma, scale) in cases {
        let start = RestrictedStart::new(PartitionState::new(blocks)?, gamma)?;
        let t = restricted_pmf_k(&start, Truncation::default())?;
        for kappa in t.start()..=kappa_max {
            let x = kappa as f64;
            let err = relative(t.get(kappa), scale / (x * (x + 1.0)));
            if err >= worst {
                worst = err;
                detail = format!("worst at b={:?}, kappa={kappa}", start.initial().blocks());
            }
        }
    }
    Ok(TestReport::judged(
        "restricted_examples",
        worst,
        1e-10,
        format!("kappa <= {kappa_max}; {detail}"),
    ))
}

/// Conditional law of `Π_{m+extra}` given `Π_m = b` from unrestricted runs
/// against the restart sampler, by total variation.
pub fn check_restricted_conditional(
    initial: &PartitionState,
    gamma: f64,
    extra: usize,
    reps: u64,
    master_seed: u64,
) -> Result<TestReport> {
    let params = QuadraticParams::new(gamma, 0.0)?;
    let start = RestrictedStart::new(initial.clone(), gamma)?;
    let m = initial.n();
    let n = m + extra;
    let restart = replicate_counts(master_seed, reps, |s| Ok(sample_restricted(n, &start, s)?.rgs()))?;
    // unrestricted runs in stream order until reps of them start with b
    let b_rgs = initial.rgs();
    let mut filtered: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    let (mut accepted, mut next_stream) = (0u64, 0u64);
    let chunk = reps.max(1000);
    while accepted < reps {
        let runs = crate::sampler::replicate(master_seed ^ 0x5851_f42d_4c95_7f2d, chunk, |s| {
            let s = s.stream(s.stream_index + next_stream);
            Ok(sample_rule(n, &params, s)?.rgs())
        })?;
        next_stream += chunk;
        for rgs in runs {
            if accepted < reps && rgs[..m] == b_rgs[..] {
                *filtered.entry(rgs).or_insert(0) += 1;
                accepted += 1;
            }
        }
    }
    let tv = total_variation(&restart, &filtered);
    Ok(TestReport::judged(
        format!("restricted_conditional[b={:?},gamma={gamma},n={n}]", initial.blocks()),
        tv,
        0.01,
        format!("{reps} draws each; {next_stream} unrestricted runs"),
    ))
}

/// Numerical tail limit against the closed form with `Γ(s2+1)`.
pub fn check_tail_constant(params: &QuadraticParams) -> Result<TestReport> {
    let c = tail_constant(params)?;
    Ok(TestReport::judged(
        format!("tail_constant[{}]", label(params)),
        relative(c.with_s2_plus_one, c.numerical),
        1e-4,
        format!(
            "numerical {:.10e}; Gamma(s2+1) form {:.10e}; Gamma(s2+2) form {}; limit supports {:?}",
            c.numerical,
            c.with_s2_plus_one,
            c.with_s2_plus_two
                .map_or("not real".to_string(), |x| format!("{x:.10e}")),
            c.supported
        ),
    ))
}

/// `ℙ(K=κ) κ^{γ+1+offset}` must be flat between κ = 10³ and 10⁴; any
/// nonzero `offset` is a wrong exponent and should fail.
pub fn check_tail_exponent(params: &QuadraticParams, offset: f64) -> Result<TestReport> {
    let e = params.gamma() + 1.0 + offset;
    let a = |k: u64| -> Result<f64> { Ok(pmf_k_value(params, k)? * (k as f64).powf(e)) };
    let (lo, hi) = (a(1_000)?, a(10_000)?);
    Ok(TestReport::judged(
        format!("tail_exponent[{},offset={offset}]", label(params)),
        relative(lo, hi),
        0.01,
        format!("P(K=k)*k^{e}: {lo:.8e} at k=1e3, {hi:.8e} at k=1e4"),
    ))
}

/// For ζ = 0 the limit of `ℙ(K=κ) κ^{γ+1}` is `γ/Γ(1−γ)`; compared at κ = 10⁴.
pub fn check_power_law_limit(gamma: f64) -> Result<TestReport> {
    let params = QuadraticParams::new(gamma, 0.0)?;
    let c = gamma / ln_gamma(1.0 - gamma).exp();
    let a = pmf_k_value(&params, 10_000)? * 1e4f64.powf(gamma + 1.0);
    let form = tail_constant(&params)?;
    Ok(TestReport::judged(
        format!("power_law_limit[gamma={gamma}]"),
        relative(a, c),
        0.01,
        format!(
            "P(K=1e4)*1e4^{} = {a:.8e} vs gamma/Gamma(1-gamma) = {c:.8e}; limit supports {:?}",
            gamma + 1.0,
            form.supported
        ),
    ))
}

/// `Σ probs + tail = 1` for a terminal law table.
pub fn check_table_normalization(params: &QuadraticParams) -> Result<TestReport> {
    let t = pmf_k(params, Truncation::default())?;
    let s = t.total() + t.truncation_tail_bound();
    Ok(TestReport::judged(
        format!("table_normalization[{}]", label(params)),
        (s - 1.0).abs(),
        1e-9,
        format!("kappa <= {}, tail {:.3e}", t.end(), t.truncation_tail_bound()),
    ))
}

/// Float EPPF against exact rational arithmetic over all partitions of [n].
pub fn check_exact_rational(n: usize, params: &RationalParams) -> Result<TestReport> {
    let c = compare_with_exact(n, params)?;
    let stat = if c.exact_total_is_one {
        c.max_relative_error
    } else {
        f64::INFINITY
    };
    Ok(TestReport::judged(
        format!("exact_rational[n={n},gamma={},zeta={}]", params.gamma, params.zeta),
        stat,
        1e-12,
        format!(
            "exact sum is one: {}; {} size multisets; worst relative float error {:.3e}",
            c.exact_total_is_one, c.multisets, c.max_relative_error
        ),
    ))
}

/// Occupancy laws: summed over compositions and over multiplicity vectors,
/// and the composition law marginalised to the box-count law.
pub fn check_occupancy_laws(n: usize, params: &QuadraticParams) -> Result<TestReport> {
    let kn = pmf_kn(n as u64, params)?;
    let mut by_k = vec![0.0; n + 1];
    let mut total = 0.0;
    for c in compositions(n) {
        let p = joint_counts_pmf(&c, params)?.to_f64();
        by_k[c.len()] += p;
        total += p;
    }
    let mut mult_total = 0.0;
    for m in multiplicity_vectors(n) {
        mult_total += multiplicities_pmf(&m, params)?.to_f64();
    }
    let marginal = (1..=n).map(|k| (by_k[k] - kn.get(k as u64)).abs()).fold(0.0, f64::max);
    let stat = (total - 1.0).abs().max((mult_total - 1.0).abs()).max(marginal);
    Ok(TestReport::judged(
        format!("occupancy_laws[n={n},{}]", label(params)),
        stat,
        1e-12,
        format!("compositions sum {total:.17}, multiplicities sum {mult_total:.17}"),
    ))
}

/// Box-count law against the forward chain driven by the new-box probabilities.
pub fn check_box_count_chain(n: u64, params: &QuadraticParams) -> Result<TestReport> {
    let a = pmf_kn(n, params)?;
    let b = box_count_chain(params, 1, 1, n)?;
    let worst = (1..=n).map(|k| (a.get(k) - b.get(k)).abs()).fold(0.0, f64::max);
    Ok(TestReport::judged(
        format!("box_count_chain[n={n},{}]", label(params)),
        worst,
        1e-12,
        "largest absolute difference",
    ))
}

/// 20-bin histogram of the first frequency: stick-breaking against the
/// size-biased first coordinate of a uniform simplex point; TV distance.
pub fn check_stick_breaking(kappa: u64, reps: u64, master_seed: u64) -> Result<TestReport> {
    let bin = |x: f64| ((x * 20.0) as usize).min(19);
    let sticks = replicate_counts(master_seed, reps, |s| {
        Ok(bin(stick_breaking(kappa, &mut s.rng()).values[0]))
    })?;
    let biased = replicate_counts(master_seed ^ 0x2545_f491_4f6c_dd1d, reps, |s| {
        let mut rng = s.rng();
        let point = uniform_simplex(kappa, &mut rng);
        Ok(bin(size_biased_permutation(&point, &mut rng)[0]))
    })?;
    Ok(TestReport::judged(
        format!("stick_breaking_vs_size_biased[kappa={kappa}]"),
        total_variation(&sticks, &biased),
        0.01,
        format!("20 bins, {reps} draws each"),
    ))
}

/// Monte Carlo `E(P̃_1^{n−1})` (κ from the terminal law, then the first
/// stick) against `nγ/(n+γ−1)`, in standard errors.
pub fn check_freq1_moment(n: u64, gamma: f64, reps: u64, master_seed: u64) -> Result<TestReport> {
    let params = QuadraticParams::new(gamma, 0.0)?;
    let target = freq1_moment(n, gamma)?;
    let sampler = MixtureSampler::new(&params, Truncation::default())?;
    let draws = crate::sampler::replicate(master_seed, reps, |s| {
        let mut rng = s.rng();
        let kappa = sampler.draw_kappa(&mut rng)?;
        let w = beta_two((kappa - 1) as f64, &mut rng);
        Ok(w.powi(n as i32 - 1))
    })?;
    let r = reps as f64;
    let mean = draws.iter().sum::<f64>() / r;
    let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (r - 1.0);
    let se = (var / r).sqrt();
    let z = if se > 0.0 {
        (mean - target).abs() / se
    } else if mean == target {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(TestReport::judged(
        format!("freq1_moment[n={n},gamma={gamma}]"),
        z,
        3.0,
        format!("MC mean {mean:.6e} (se {se:.2e}) vs {target:.6e}, reps={reps}"),
    ))
}

/// One-step check of the predictive masses against the sequential sampler.
pub fn check_one_step(params: &QuadraticParams, reps: u64, master_seed: u64) -> Result<TestReport> {
    let state = PartitionState::new(vec![vec![1, 3], vec![2, 5, 6], vec![4]])?;
    let s = crate::model::succession(&state, params)?;
    let counts = replicate_counts(master_seed, reps, |seed| {
        let mut next = state.clone();
        grow(&mut next, 7, params, &mut seed.rng())?;
        Ok(next.blocks().iter().position(|b| b.contains(&7)).unwrap_or(usize::MAX))
    })?;
    let mut worst = 0.0f64;
    for (j, p) in s.old.iter().chain(std::iter::once(&s.new)).enumerate() {
        let emp = *counts.get(&j).unwrap_or(&0) as f64 / reps as f64;
        let se = (p * (1.0 - p) / reps as f64).sqrt();
        if se > 0.0 {
            worst = worst.max((emp - p).abs() / se);
        } else if emp != *p {
            worst = f64::INFINITY;
        }
    }
    Ok(TestReport::judged(
        format!("one_step_transition[{}]", label(params)),
        worst,
        3.0,
        format!("largest z over {} targets, reps={reps}", s.old.len() + 1),
    ))
}

/// The closed-form triple of a family.
pub fn triple(family: Family) -> GibbsTriple {
    gibbs_triple_for(family)
}

/// Uniform draws with a fixed seed: used to pin that `SeedSpec` streams are
/// reproducible.
pub fn check_determinism(master_seed: u64) -> Result<TestReport> {
    let draw = |s: SeedSpec| -> u64 { s.rng().random() };
    let a: Vec<u64> = (0..64).map(|i| draw(SeedSpec::new(master_seed, i))).collect();
    let b: Vec<u64> = (0..64)
        .rev()
        .map(|i| draw(SeedSpec::new(master_seed, i)))
        .rev()
        .collect();
    let mismatches = a.iter().zip(&b).filter(|(x, y)| x != y).count();
    Ok(TestReport::judged(
        "stream_determinism",
        mismatches as f64,
        0.0,
        "64 streams drawn in two orders",
    ))
}
