use std::fmt::Write as _;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// A probability vector on the integers `start, start+1, …`, possibly cut
/// off before the end of the support. `tail_bound` is the mass beyond the
/// last listed index (0 for finite support).
#[derive(Clone, Debug, PartialEq)]
pub struct PmfTable {
    start: u64,
    ln_probs: Vec<f64>,
    probs: Vec<f64>,
    tail_bound: f64,
}

#[derive(Serialize, Deserialize)]
struct TableRecord {
    support: [u64; 2],
    probs: Vec<f64>,
    tail_bound: f64,
}

/// Reals in all text output: 17 significant digits, round-trip exact.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

impl PmfTable {
    pub fn from_ln(start: u64, ln_probs: Vec<f64>, tail_bound: f64) -> Result<Self> {
        if ln_probs.is_empty() {
            return domain("a table needs at least one entry");
        }
        if ln_probs.iter().any(|x| x.is_nan() || *x == f64::INFINITY) {
            return domain("table entries must be finite log-probabilities");
        }
        if !(tail_bound >= 0.0 && tail_bound.is_finite()) {
            return domain(format!("tail bound must be finite and >= 0, got {tail_bound}"));
        }
        let probs = ln_probs.iter().map(|x| x.exp()).collect();
        Ok(PmfTable {
            start,
            ln_probs,
            probs,
            tail_bound,
        })
    }

    pub fn from_probs(start: u64, probs: Vec<f64>, tail_bound: f64) -> Result<Self> {
        if probs.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return domain("probabilities must be finite and >= 0");
        }
        let ln = probs.iter().map(|p| p.ln()).collect();
        let mut t = Self::from_ln(start, ln, tail_bound)?;
        t.probs = probs;
        Ok(t)
    }

    pub fn support(&self) -> RangeInclusive<u64> {
        self.start..=self.end()
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn end(&self) -> u64 {
        self.start + self.probs.len() as u64 - 1
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn ln_probs(&self) -> &[f64] {
        &self.ln_probs
    }

    pub fn truncation_tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn is_truncated(&self) -> bool {
        self.tail_bound > 0.0
    }

    /// Mass at `index`; 0 outside the listed range.
    pub fn get(&self, index: u64) -> f64 {
        if index < self.start || index > self.end() {
            0.0
        } else {
            self.probs[(index - self.start) as usize]
        }
    }

    pub fn ln_get(&self, index: u64) -> f64 {
        if index < self.start || index > self.end() {
            f64::NEG_INFINITY
        } else {
            self.ln_probs[(index - self.start) as usize]
        }
    }

    /// Σ probs, summed in index order.
    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Index with the largest mass (the first one on ties).
    pub fn mode(&self) -> u64 {
        let mut best = 0;
        for (i, p) in self.probs.iter().enumerate() {
            if *p > self.probs[best] {
                best = i;
            }
        }
        self.start + best as u64
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, p)| (self.start + i as u64, *p))
    }

    /// `index,probability` rows; truncated tables add a `tail_bound` column.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let tail = self.is_truncated().then(|| format_real(self.tail_bound));
        match &tail {
            Some(_) => out.push_str("index,probability,tail_bound\n"),
            None => out.push_str("index,probability\n"),
        }
        for (i, p) in self.iter() {
            match &tail {
                Some(t) => writeln!(out, "{i},{},{t}", format_real(p)),
                None => writeln!(out, "{i},{}", format_real(p)),
            }
            .expect("writing to a String");
        }
        out
    }

    pub fn to_json(&self) -> String {
        let probs: Vec<String> = self.probs.iter().map(|p| format_real(*p)).collect();
        format!(
            "{{\"support\":[{},{}],\"probs\":[{}],\"tail_bound\":{}}}",
            self.start,
            self.end(),
            probs.join(","),
            format_real(self.tail_bound)
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: TableRecord =
            serde_json::from_str(text).map_err(|e| crate::Error::Domain(format!("bad table JSON: {e}")))?;
        let [start, end] = rec.support;
        if end < start || (end - start + 1) as usize != rec.probs.len() {
            return domain("support range does not match the number of probabilities");
        }
        Self::from_probs(start, rec.probs, rec.tail_bound)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().unwrap_or_default();
        let cols: Vec<&str> = header.split(',').collect();
        if cols.len() < 2 || cols[0] != "index" || cols[1] != "probability" {
            return domain(format!("unexpected CSV header {header:?}"));
        }
        let bad = |l: &str| crate::Error::Domain(format!("bad CSV row {l:?}"));
        let (mut start, mut probs, mut tail) = (None, Vec::new(), 0.0);
        for line in lines {
            let fields: Vec<&str> = line.split(',').collect();
            let idx: u64 = fields[0].parse().map_err(|_| bad(line))?;
            let p: f64 = fields.get(1).ok_or_else(|| bad(line))?.parse().map_err(|_| bad(line))?;
            if let Some(t) = fields.get(2) {
                tail = t.parse().map_err(|_| bad(line))?;
            }
            let s = *start.get_or_insert(idx);
            if idx != s + probs.len() as u64 {
                return domain(format!("CSV index {idx} out of sequence"));
            }
            probs.push(p);
        }
        match start {
            Some(s) => Self::from_probs(s, probs, tail),
            None => domain("CSV table has no rows"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_round_trip() {
        let t = PmfTable::from_probs(3, vec![0.5, 0.25, 1.0 / 3.0], 1e-3).unwrap();
        let csv = t.to_csv();
        assert!(csv.starts_with("index,probability,tail_bound\n3,5.0000000000000000e-1,"));
        assert_eq!(PmfTable::from_csv(&csv).unwrap().probs(), t.probs());
        let back = PmfTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back.probs(), t.probs());
        assert_eq!(back.truncation_tail_bound(), 1e-3);
        assert_eq!(back.support(), 3..=5);

        let finite = PmfTable::from_probs(1, vec![1.0], 0.0).unwrap();
        assert_eq!(finite.to_csv(), "index,probability\n1,1.0000000000000000e0\n");
    }

    #[test]
    fn lookups() {
        let t = PmfTable::from_probs(2, vec![0.2, 0.7, 0.1], 0.0).unwrap();
        assert_eq!(t.get(1), 0.0);
        assert_eq!(t.get(3), 0.7);
        assert_eq!(t.mode(), 3);
        assert_eq!(t.ln_get(9), f64::NEG_INFINITY);
        assert!(PmfTable::from_probs(1, vec![-0.1], 0.0).is_err());
    }
}
