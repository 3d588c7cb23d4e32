use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use serde::Serialize;

use crate::error::{domain, Result};

use super::SeedSpec;

/// Box frequencies of a κ-box partition in least-element order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Frequencies {
    pub kappa: u64,
    pub values: Vec<f64>,
}

/// A uniform point of the (κ−1)-simplex: κ standard exponentials over
/// their sum.
pub fn uniform_simplex<R: Rng + ?Sized>(kappa: u64, rng: &mut R) -> Vec<f64> {
    let mut x: Vec<f64> = (0..kappa).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = x.iter().sum();
    for v in &mut x {
        *v /= total;
    }
    x
}

pub fn sample_uniform_simplex(kappa: u64, seed: SeedSpec) -> Result<Vec<f64>> {
    if kappa == 0 {
        return domain("kappa >= 1 is required");
    }
    Ok(uniform_simplex(kappa, &mut seed.rng()))
}

/// beta(2, b) as `(E1 + E2) / (E1 + E2 + G_b)`; beta(2, 0) is the point mass at 1.
pub(crate) fn beta_two<R: Rng + ?Sized>(b: f64, rng: &mut R) -> f64 {
    if b == 0.0 {
        return 1.0;
    }
    let (e1, e2): (f64, f64) = (Exp1.sample(rng), Exp1.sample(rng));
    let e = e1 + e2;
    let g = Gamma::new(b, 1.0).expect("shape b > 0").sample(rng);
    e / (e + g)
}

/// Frequencies `P̃_j = W_j ∏_{i<j} (1 − W_i)` with independent
/// `W_i ~ beta(2, κ − i)`, so `W_κ = 1` and the last frequency takes the
/// whole remaining stick.
pub fn stick_breaking<R: Rng + ?Sized>(kappa: u64, rng: &mut R) -> Frequencies {
    let mut values = Vec::with_capacity(kappa as usize);
    let mut rest = 1.0;
    for i in 1..kappa {
        let piece = beta_two((kappa - i) as f64, rng) * rest;
        values.push(piece);
        rest -= piece;
    }
    values.push(rest);
    Frequencies { kappa, values }
}

pub fn sample_stick_breaking(kappa: u64, seed: SeedSpec) -> Result<Frequencies> {
    if kappa == 0 {
        return domain("kappa >= 1 is required");
    }
    Ok(stick_breaking(kappa, &mut seed.rng()))
}

/// Reorders `values` by repeatedly picking an unpicked coordinate with
/// probability proportional to its value.
pub fn size_biased_permutation<R: Rng + ?Sized>(values: &[f64], rng: &mut R) -> Vec<f64> {
    let mut left: Vec<f64> = values.to_vec();
    let mut out = Vec::with_capacity(values.len());
    while !left.is_empty() {
        let total: f64 = left.iter().sum();
        let mut u = rng.random::<f64>() * total;
        let mut pick = left.len() - 1;
        for (i, v) in left.iter().enumerate() {
            if u < *v {
                pick = i;
                break;
            }
            u -= v;
        }
        out.push(left.swap_remove(pick));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_kappa() {
        assert_eq!(sample_uniform_simplex(1, SeedSpec::new(0, 0)).unwrap(), vec![1.0]);
        assert_eq!(sample_stick_breaking(1, SeedSpec::new(0, 0)).unwrap().values, vec![1.0]);
        assert!(sample_stick_breaking(0, SeedSpec::new(0, 0)).is_err());
    }

    #[test]
    fn sticks_sum_to_one() {
        let mut rng = SeedSpec::new(4, 0).rng();
        for kappa in [2u64, 3, 10, 200] {
            let f = stick_breaking(kappa, &mut rng);
            assert_eq!(f.values.len() as u64, kappa);
            assert!(f.values.iter().all(|v| *v > 0.0));
            assert!((f.values.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn simplex_means() {
        let mut rng = SeedSpec::new(8, 0).rng();
        let (kappa, reps) = (5u64, 100_000);
        let mut sums = [0.0; 5];
        let mut sq = [0.0; 5];
        for _ in 0..reps {
            for (j, v) in uniform_simplex(kappa, &mut rng).iter().enumerate() {
                sums[j] += v;
                sq[j] += v * v;
            }
        }
        for j in 0..5 {
            let mean = sums[j] / reps as f64;
            let se = ((sq[j] / reps as f64 - mean * mean) / reps as f64).sqrt();
            assert!((mean - 0.2).abs() < 3.0 * se, "{j}: {mean}");
        }
    }

    #[test]
    fn simplex_minimum() {
        // ℙ(min ≤ y) = 1 − (1 − κy)^{κ−1}
        let mut rng = SeedSpec::new(10, 0).rng();
        let (kappa, y, reps) = (3u64, 0.05, 100_000);
        let hits = (0..reps)
            .filter(|_| uniform_simplex(kappa, &mut rng).iter().cloned().fold(1.0, f64::min) <= y)
            .count();
        let p = 1.0 - (1.0 - 3.0 * y).powi(2);
        let emp = hits as f64 / reps as f64;
        assert!((emp - p).abs() < 3.0 * (p * (1.0 - p) / reps as f64).sqrt());
    }

    #[test]
    fn first_stick_mean() {
        let mut rng = SeedSpec::new(12, 0).rng();
        let reps = 100_000;
        let draws: Vec<f64> = (0..reps).map(|_| stick_breaking(2, &mut rng).values[0]).collect();
        let mean = draws.iter().sum::<f64>() / reps as f64;
        let var = draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / reps as f64;
        assert!((mean - 2.0 / 3.0).abs() < 3.0 * (var / reps as f64).sqrt());
    }

    #[test]
    fn size_biased_keeps_values() {
        let mut rng = SeedSpec::new(1, 2).rng();
        let v = vec![0.5, 0.3, 0.2];
        let mut p = size_biased_permutation(&v, &mut rng);
        p.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert_eq!(p, v);
    }
}
