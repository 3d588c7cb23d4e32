use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{domain, Result};
use crate::model::{eppf, QuadraticParams};

use super::enumerate::{rgs_sizes, visit_set_partitions};

/// Rational `(γ, ζ)` for exact recomputation.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalParams {
    pub gamma: BigRational,
    pub zeta: BigRational,
}

impl RationalParams {
    pub fn new(gamma: (i64, i64), zeta: (i64, i64)) -> Result<Self> {
        if gamma.1 == 0 || zeta.1 == 0 {
            return domain("zero denominator");
        }
        let r = |(a, b): (i64, i64)| BigRational::new(BigInt::from(a), BigInt::from(b));
        Ok(RationalParams {
            gamma: r(gamma),
            zeta: r(zeta),
        })
    }

    pub fn to_float(&self) -> Result<QuadraticParams> {
        let f = |x: &BigRational| x.to_f64().unwrap_or(f64::NAN);
        QuadraticParams::new(f(&self.gamma), f(&self.zeta))
    }

    /// `v_{n,k}` over the rationals.
    pub fn v(&self, n: u64, k: u64) -> BigRational {
        let int = |i: u64| BigRational::from_integer(BigInt::from(i));
        let mut v = BigRational::one();
        for i in 0..(n - k) {
            v *= &self.gamma + int(i);
        }
        for i in 1..k {
            v *= int(i * i) - &self.gamma * int(i) + &self.zeta;
        }
        for m in 1..n {
            v /= int(m * m) + &self.gamma * int(m) + &self.zeta;
        }
        v
    }

    pub fn eppf(&self, sizes: &[usize]) -> BigRational {
        let n: usize = sizes.iter().sum();
        let mut p = self.v(n as u64, sizes.len() as u64);
        for &s in sizes {
            for j in 2..=s {
                p *= BigRational::from_integer(BigInt::from(j));
            }
        }
        p
    }
}

/// Outcome of comparing the floating-point EPPF against exact arithmetic
/// over every set partition of `[n]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactComparison {
    /// `Σ p` over all partitions, exactly.
    pub exact_total_is_one: bool,
    /// Largest relative float error over block-size multisets.
    pub max_relative_error: f64,
    pub multisets: usize,
}

pub fn compare_with_exact(n: usize, params: &RationalParams) -> Result<ExactComparison> {
    let float = params.to_float()?;
    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    visit_set_partitions(n, |rgs, k| {
        let mut sizes = rgs_sizes(rgs, k);
        sizes.sort_unstable();
        *counts.entry(sizes).or_insert(0) += 1;
    })?;
    let mut total = BigRational::zero();
    let mut worst = 0.0f64;
    for (sizes, count) in &counts {
        let exact = params.eppf(sizes);
        total += &exact * BigRational::from_integer(BigInt::from(*count));
        let approx = eppf(sizes, &float)?.to_f64();
        let reference = exact.to_f64().unwrap_or(f64::NAN);
        let err = if reference == 0.0 {
            if approx == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            ((approx - reference) / reference).abs()
        };
        worst = worst.max(err);
    }
    Ok(ExactComparison {
        exact_total_is_one: total.is_one(),
        max_relative_error: worst,
        multisets: counts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_normalisation() {
        for (g, z) in [((1, 2), (0, 1)), ((6, 1), (9, 1)), ((2, 1), (3, 1)), ((7, 10), (2, 5))] {
            let p = RationalParams::new(g, z).unwrap();
            let c = compare_with_exact(7, &p).unwrap();
            assert!(c.exact_total_is_one, "{g:?} {z:?}");
            assert!(c.max_relative_error < 1e-12, "{c:?}");
        }
    }

    #[test]
    fn pair_probability() {
        let p = RationalParams::new((1, 2), (0, 1)).unwrap();
        let two = BigRational::new(BigInt::from(2), BigInt::from(3));
        assert_eq!(p.eppf(&[2]), two);
    }
}
