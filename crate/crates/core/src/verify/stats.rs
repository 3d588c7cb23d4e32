use std::collections::BTreeMap;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Default rejection level for goodness-of-fit tests.
pub const GOF_P_THRESHOLD: f64 = 1e-4;

/// Pearson goodness of fit of observed counts against cell probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct ChiSquareFit {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    /// Statistic value at which the p-value reaches the threshold.
    pub critical: f64,
}

/// `expected` maps each cell to its probability; observations outside the
/// cells with positive probability make the statistic infinite. Every
/// positive cell needs an expected count of at least 5.
pub fn chi_square<K: Ord + std::fmt::Debug>(
    observed: &BTreeMap<K, u64>,
    expected: &BTreeMap<K, f64>,
    reps: u64,
    p_threshold: f64,
) -> Result<ChiSquareFit> {
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (key, p) in expected.iter().filter(|(_, p)| **p > 0.0) {
        let e = p * reps as f64;
        if e < 5.0 {
            return Err(Error::InsufficientReplicates(format!(
                "cell {key:?} expects {e:.3} < 5 observations at reps={reps}"
            )));
        }
        let o = *observed.get(key).unwrap_or(&0) as f64;
        stat += (o - e) * (o - e) / e;
        cells += 1;
    }
    let stray = observed
        .iter()
        .any(|(key, count)| *count > 0 && expected.get(key).is_none_or(|p| *p <= 0.0));
    if stray {
        stat = f64::INFINITY;
    }
    let df = cells.saturating_sub(1).max(1);
    let dist = ChiSquared::new(df as f64).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(ChiSquareFit {
        statistic: stat,
        df,
        p_value: if stat.is_finite() { dist.sf(stat) } else { 0.0 },
        critical: dist.inverse_cdf(1.0 - p_threshold),
    })
}

/// Total-variation distance between two empirical laws.
pub fn total_variation<K: Ord + Clone>(a: &BTreeMap<K, u64>, b: &BTreeMap<K, u64>) -> f64 {
    let (na, nb) = (a.values().sum::<u64>() as f64, b.values().sum::<u64>() as f64);
    let mut keys: Vec<&K> = a.keys().chain(b.keys()).collect();
    keys.sort();
    keys.dedup();
    0.5 * keys
        .into_iter()
        .map(|k| {
            let pa = *a.get(k).unwrap_or(&0) as f64 / na;
            let pb = *b.get(k).unwrap_or(&0) as f64 / nb;
            (pa - pb).abs()
        })
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_square_known_values() {
        let expected: BTreeMap<u8, f64> = [(0, 0.5), (1, 0.5)].into();
        let observed: BTreeMap<u8, u64> = [(0, 60), (1, 40)].into();
        let fit = chi_square(&observed, &expected, 100, 1e-4).unwrap();
        assert!((fit.statistic - 4.0).abs() < 1e-12);
        assert_eq!(fit.df, 1);
        // ℙ(χ²_1 > 4) = erfc(√2)
        assert!((fit.p_value - 0.04550026389635842).abs() < 1e-9);
        assert!((fit.critical - 15.136705226623606).abs() < 1e-6);

        let stray: BTreeMap<u8, u64> = [(0, 60), (1, 39), (2, 1)].into();
        assert!(chi_square(&stray, &expected, 100, 1e-4)
            .unwrap()
            .statistic
            .is_infinite());
        assert!(matches!(
            chi_square(&observed, &expected, 8, 1e-4),
            Err(Error::InsufficientReplicates(_))
        ));
    }

    #[test]
    fn tv_distance() {
        let a: BTreeMap<u8, u64> = [(0, 5), (1, 5)].into();
        let b: BTreeMap<u8, u64> = [(1, 10)].into();
        assert!((total_variation(&a, &b) - 0.5).abs() < 1e-15);
        assert_eq!(total_variation(&a, &a), 0.0);
    }
}
