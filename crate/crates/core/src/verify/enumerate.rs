use crate::error::{domain, Result};
use crate::model::PartitionState;

/// Largest n for which all set partitions are listed.
pub const MAX_ENUMERATION_N: usize = 12;

/// Calls `visit(rgs, k)` once for every set partition of `[n]`, given as a
/// restricted growth string (0-based block labels in order of first
/// appearance) together with its number of blocks.
pub fn visit_set_partitions(n: usize, mut visit: impl FnMut(&[usize], usize)) -> Result<()> {
    if n == 0 || n > MAX_ENUMERATION_N {
        return domain(format!(
            "set partitions are enumerated for 1 <= n <= {MAX_ENUMERATION_N}, got n={n}"
        ));
    }
    let mut rgs = vec![0usize; n];
    // prefix_max[i] = max(rgs[0..=i])
    let mut prefix_max = vec![0usize; n];
    loop {
        visit(&rgs, prefix_max[n - 1] + 1);
        // rightmost position that can be incremented
        let mut i = n - 1;
        while i > 0 && rgs[i] > prefix_max[i - 1] {
            i -= 1;
        }
        if i == 0 {
            return Ok(());
        }
        rgs[i] += 1;
        prefix_max[i] = prefix_max[i - 1].max(rgs[i]);
        for j in i + 1..n {
            rgs[j] = 0;
            prefix_max[j] = prefix_max[i];
        }
    }
}

/// All Bell(n) set partitions of `[n]`, blocks in least-element order.
pub fn enumerate_set_partitions(n: usize) -> Result<Vec<PartitionState>> {
    let mut out = Vec::new();
    let mut err = None;
    visit_set_partitions(n, |rgs, _| match PartitionState::from_rgs(rgs) {
        Ok(p) => out.push(p),
        Err(e) => err = Some(e),
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Block sizes of a restricted growth string, in least-element order.
pub fn rgs_sizes(rgs: &[usize], k: usize) -> Vec<usize> {
    let mut sizes = vec![0; k];
    for &b in rgs {
        sizes[b] += 1;
    }
    sizes
}

/// Bell numbers by the Bell triangle.
pub fn bell_number(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 1..=n {
        let mut next = vec![*row.last().expect("row is never empty")];
        for x in &row {
            let last = *next.last().expect("row is never empty");
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}

/// All compositions (ordered sequences of positive parts) of n.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Multiplicity vectors `(k_1, …, k_n)` of all integer partitions of n.
pub fn multiplicity_vectors(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max_part: usize, mults: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(mults.clone());
            return;
        }
        for part in (1..=max_part.min(rest)).rev() {
            mults[part - 1] += 1;
            rec(rest - part, part, mults, out);
            mults[part - 1] -= 1;
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut vec![0; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn bell_counts() {
        assert_eq!(enumerate_set_partitions(1).unwrap().len(), 1);
        assert_eq!(enumerate_set_partitions(3).unwrap().len(), 5);
        // Bell recurrence B_{n+1} = Σ C(n,k) B_k as an independent count
        let mut bell = vec![1u64];
        for m in 0..12usize {
            let mut binom = 1u64;
            let mut s = 0u64;
            for k in 0..=m {
                s += binom * bell[k];
                binom = binom * (m - k) as u64 / (k + 1) as u64;
            }
            bell.push(s);
        }
        for n in 1..=10 {
            let mut count = 0u64;
            visit_set_partitions(n, |_, _| count += 1).unwrap();
            assert_eq!(count, bell[n], "{n}");
            assert_eq!(bell_number(n), bell[n]);
        }
        assert_eq!(enumerate_set_partitions(8).unwrap().len(), 4140);
        assert!(enumerate_set_partitions(13).is_err());
    }

    #[test]
    fn partitions_are_distinct_and_ordered() {
        let all = enumerate_set_partitions(6).unwrap();
        let set: HashSet<Vec<usize>> = all.iter().map(|p| p.rgs()).collect();
        assert_eq!(set.len(), all.len());
        for p in &all {
            let firsts: Vec<usize> = p.blocks().iter().map(|b| b[0]).collect();
            assert!(firsts.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn integer_compositions_and_partitions() {
        assert_eq!(compositions(4).len(), 8);
        let parts = multiplicity_vectors(6);
        assert_eq!(parts.len(), 11);
        for m in parts {
            assert_eq!(m.iter().enumerate().map(|(i, k)| (i + 1) * k).sum::<usize>(), 6);
        }
    }
}
