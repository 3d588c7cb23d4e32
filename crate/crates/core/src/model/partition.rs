use std::collections::HashMap;
use std::convert::TryFrom;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `n` for which exact formulas are evaluated on a composition.
pub const MAX_EXACT_N: usize = 1_000_000;

/// A partition of `[n] = {1, …, n}` with blocks in least-element order.
///
/// Labels are 1-based throughout, matching the serialised form
/// `{"n":6,"blocks":[[1,3],[2,5,6],[4]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PartitionRecord", into = "PartitionRecord")]
pub struct PartitionState {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct PartitionRecord {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl TryFrom<PartitionRecord> for PartitionState {
    type Error = Error;
    fn try_from(rec: PartitionRecord) -> Result<Self> {
        let state = PartitionState::new(rec.blocks)?;
        if state.n != rec.n {
            return Err(Error::InvalidPartition(format!(
                "record says n={} but blocks cover {} balls",
                rec.n, state.n
            )));
        }
        Ok(state)
    }
}

impl From<PartitionState> for PartitionRecord {
    fn from(s: PartitionState) -> Self {
        PartitionRecord {
            n: s.n,
            blocks: s.blocks,
        }
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidPartition(msg.into()))
}

impl PartitionState {
    /// The single ball `{1}`.
    pub fn start() -> Self {
        PartitionState {
            n: 1,
            blocks: vec![vec![1]],
        }
    }

    /// Validates that `blocks` partition `[n]` and are in least-element
    /// order with sorted contents.
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = blocks.iter().map(Vec::len).sum();
        if n == 0 {
            return invalid("a partition needs at least one ball");
        }
        let mut seen = vec![false; n + 1];
        let mut prev_min = 0;
        for b in &blocks {
            if b.is_empty() {
                return invalid("empty block");
            }
            if b.windows(2).any(|w| w[0] >= w[1]) {
                return invalid(format!("block {b:?} is not strictly increasing"));
            }
            if b[0] <= prev_min {
                return invalid("blocks are not in least-element order");
            }
            prev_min = b[0];
            for &x in b {
                if x == 0 || x > n {
                    return invalid(format!("label {x} outside 1..={n}"));
                }
                if seen[x] {
                    return invalid(format!("label {x} appears twice"));
                }
                seen[x] = true;
            }
        }
        Ok(PartitionState { n, blocks })
    }

    /// Accepts blocks in any order with unsorted contents and normalises them.
    pub fn from_unordered(mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b.first().copied().unwrap_or(0));
        Self::new(blocks)
    }

    /// Builds the partition of `[len]` in which balls with equal keys share a
    /// block; blocks are numbered by first appearance.
    pub fn from_labels<K: std::hash::Hash + Eq>(labels: &[K]) -> Result<Self> {
        if labels.is_empty() {
            return invalid("a partition needs at least one ball");
        }
        let mut index: HashMap<&K, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, key) in labels.iter().enumerate() {
            let next = index.len();
            let j = *index.entry(key).or_insert(next);
            if j == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[j].push(i + 1);
        }
        Ok(PartitionState {
            n: labels.len(),
            blocks,
        })
    }

    /// From a restricted growth string: `rgs[i]` is the 0-based block index
    /// of ball `i + 1`, and each index first appears in increasing order.
    pub fn from_rgs(rgs: &[usize]) -> Result<Self> {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &b) in rgs.iter().enumerate() {
            if b == blocks.len() {
                blocks.push(vec![i + 1]);
            } else if b < blocks.len() {
                blocks[b].push(i + 1);
            } else {
                return invalid(format!("restricted growth string jumps to {b} at position {i}"));
            }
        }
        if blocks.is_empty() {
            return invalid("a partition needs at least one ball");
        }
        Ok(PartitionState { n: rgs.len(), blocks })
    }

    /// Parses a JSON list of blocks such as `[[1],[2]]`.
    pub fn parse_blocks(text: &str) -> Result<Self> {
        let blocks: Vec<Vec<usize>> =
            serde_json::from_str(text).map_err(|e| Error::InvalidPartition(format!("cannot parse {text:?}: {e}")))?;
        Self::from_unordered(blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// 0-based block index of every ball.
    pub fn rgs(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (j, b) in self.blocks.iter().enumerate() {
            for &x in b {
                out[x - 1] = j;
            }
        }
        out
    }

    /// Places ball `n + 1` in block `target` (0-based) or, for `None`, in a
    /// new block.
    pub fn place_next(&mut self, target: Option<usize>) -> Result<()> {
        self.n += 1;
        match target {
            Some(j) if j < self.blocks.len() => self.blocks[j].push(self.n),
            Some(j) => {
                self.n -= 1;
                return invalid(format!("no block {j} among {}", self.blocks.len()));
            }
            None => self.blocks.push(vec![self.n]),
        }
        Ok(())
    }

    /// The restriction to `[m]`, `m ≤ n`.
    pub fn restrict(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.n {
            return invalid(format!("cannot restrict a partition of [{}] to [{m}]", self.n));
        }
        let blocks: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|b| b.iter().copied().filter(|&x| x <= m).collect::<Vec<_>>())
            .filter(|b: &Vec<usize>| !b.is_empty())
            .collect();
        Ok(PartitionState { n: m, blocks })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("partition serialises")
    }
}

/// Checks a composition (ordered block sizes): non-empty, all parts ≥ 1,
/// total within the exact-evaluation cap. Returns `n`.
pub fn composition_total(sizes: &[usize]) -> Result<usize> {
    if sizes.is_empty() {
        return invalid("empty composition");
    }
    if sizes.contains(&0) {
        return invalid(format!("composition {sizes:?} has a zero part"));
    }
    let n: usize = sizes.iter().sum();
    if n > MAX_EXACT_N {
        return Err(Error::Domain(format!(
            "n={n} exceeds the exact-evaluation cap {MAX_EXACT_N}"
        )));
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example_round_trip() {
        let p = PartitionState::new(vec![vec![1, 3], vec![2, 5, 6], vec![4]]).unwrap();
        assert_eq!(p.sizes(), vec![2, 3, 1]);
        assert_eq!(p.to_json(), r#"{"n":6,"blocks":[[1,3],[2,5,6],[4]]}"#);
        let back: PartitionState = serde_json::from_str(&p.to_json()).unwrap();
        assert_eq!(back, p);
        assert_eq!(PartitionState::from_rgs(&p.rgs()).unwrap(), p);
    }

    #[test]
    fn rejects_bad_blocks() {
        assert!(PartitionState::new(vec![vec![2], vec![1]]).is_err());
        assert!(PartitionState::new(vec![vec![1, 1]]).is_err());
        assert!(PartitionState::new(vec![vec![1], vec![3]]).is_err());
        assert!(PartitionState::new(vec![vec![1], vec![]]).is_err());
        assert!(serde_json::from_str::<PartitionState>(r#"{"n":3,"blocks":[[1],[2]]}"#).is_err());
    }

    #[test]
    fn labels_and_growth() {
        let p = PartitionState::from_labels(&["a", "b", "a", "c", "b", "b"]).unwrap();
        assert_eq!(p.blocks(), &[vec![1, 3], vec![2, 5, 6], vec![4]]);
        let mut q = PartitionState::start();
        q.place_next(None).unwrap();
        q.place_next(Some(0)).unwrap();
        assert_eq!(q.blocks(), &[vec![1, 3], vec![2]]);
        assert!(q.place_next(Some(5)).is_err());
        assert_eq!(q.n(), 3);
        assert_eq!(p.restrict(4).unwrap().blocks(), &[vec![1, 3], vec![2], vec![4]]);
    }

    #[test]
    fn parse_initial_blocks() {
        let p = PartitionState::parse_blocks("[[2],[1]]").unwrap();
        assert_eq!(p.blocks(), &[vec![1], vec![2]]);
        assert!(PartitionState::parse_blocks("[[1],[1]]").is_err());
        assert!(PartitionState::parse_blocks("nope").is_err());
    }

    #[test]
    fn compositions() {
        assert_eq!(composition_total(&[2, 3, 1]).unwrap(), 6);
        assert!(composition_total(&[]).is_err());
        assert!(composition_total(&[1, 0]).is_err());
    }
}
