use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{succession, PartitionState, QuadraticParams};

use super::sequential::grow;
use super::SeedSpec;

/// Exchangeable sequence `X_1..X_n`: grow a partition and give every ball
/// of box j the tag `T_j`, tags drawn independently by `tag` in box order.
pub fn tagged_sequence_with<T, R, F>(
    n: usize,
    params: &QuadraticParams,
    rng: &mut R,
    mut tag: F,
) -> Result<(Vec<T>, PartitionState)>
where
    T: Clone,
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> T,
{
    if params.is_singleton_partition() {
        return Err(Error::DegenerateInfiniteK);
    }
    if n == 0 {
        return Err(Error::Domain("n >= 1 is required".into()));
    }
    let mut state = PartitionState::start();
    grow(&mut state, n, params, rng)?;
    let tags: Vec<T> = (0..state.k()).map(|_| tag(rng)).collect();
    let mut seq = vec![tags[0].clone(); n];
    for (j, block) in state.blocks().iter().enumerate() {
        for &ball in block {
            seq[ball - 1] = tags[j].clone();
        }
    }
    Ok((seq, state))
}

/// Tags uniform on [0, 1).
pub fn sample_tagged_sequence(n: usize, params: &QuadraticParams, seed: SeedSpec) -> Result<Vec<f64>> {
    let mut rng = seed.rng();
    Ok(tagged_sequence_with(n, params, &mut rng, |r| r.random::<f64>())?.0)
}

/// Law of the next value given the past: mass `ω_{n,j}` on the tag of box
/// j and mass `ν_n` spread over a fresh tag.
#[derive(Clone, Debug, PartialEq)]
pub struct Predictive<T> {
    pub atoms: Vec<(T, f64)>,
    pub new_mass: f64,
}

pub fn predictive<T: Clone>(state: &PartitionState, tags: &[T], params: &QuadraticParams) -> Result<Predictive<T>> {
    if tags.len() != state.k() {
        return Err(Error::Domain(format!(
            "{} tags given for {} boxes",
            tags.len(),
            state.k()
        )));
    }
    let s = succession(state, params)?;
    Ok(Predictive {
        atoms: tags.iter().cloned().zip(s.old).collect(),
        new_mass: s.new,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(g: f64, z: f64) -> QuadraticParams {
        QuadraticParams::new(g, z).unwrap()
    }

    #[test]
    fn tags_recover_partition() {
        let p = q(0.5, 0.0);
        for i in 0..200 {
            let mut rng = SeedSpec::new(6, i).rng();
            let (seq, state) = tagged_sequence_with(12, &p, &mut rng, |r| r.random::<f64>()).unwrap();
            let labels: Vec<u64> = seq.iter().map(|x| x.to_bits()).collect();
            assert_eq!(PartitionState::from_labels(&labels).unwrap(), state);
        }
    }

    #[test]
    fn first_two_coincide_with_pair_probability() {
        let p = q(0.5, 0.0);
        let reps = 100_000u64;
        let same = (0..reps)
            .filter(|i| {
                let x = sample_tagged_sequence(2, &p, SeedSpec::new(13, *i)).unwrap();
                x[0] == x[1]
            })
            .count();
        let expect = 2.0 / 3.0;
        let emp = same as f64 / reps as f64;
        assert!((emp - expect).abs() < 3.0 * (expect * (1.0 - expect) / reps as f64).sqrt());
    }

    #[test]
    fn uniform_marginals() {
        let p = q(0.5, 0.0);
        let reps = 100_000u64;
        let mut xs: Vec<f64> = (0..reps)
            .map(|i| sample_tagged_sequence(3, &p, SeedSpec::new(17, i)).unwrap()[2])
            .collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = reps as f64;
        let ks = xs
            .iter()
            .enumerate()
            .map(|(i, x)| ((i as f64 + 1.0) / n - x).abs().max((x - i as f64 / n).abs()))
            .fold(0.0, f64::max);
        assert!(ks < 1.63 / n.sqrt(), "{ks}");
    }

    #[test]
    fn predictive_masses() {
        let (g, z) = (0.7, 0.4);
        let p = q(g, z);
        let pr = predictive(&PartitionState::start(), &["a"], &p).unwrap();
        assert!((pr.atoms[0].1 - 2.0 * g / (1.0 + g + z)).abs() < 1e-15);
        assert!((pr.new_mass - (1.0 - g + z) / (1.0 + g + z)).abs() < 1e-15);
        let state = PartitionState::new(vec![vec![1, 3], vec![2, 5, 6], vec![4]]).unwrap();
        let pr = predictive(&state, &[0.1, 0.2, 0.3], &p).unwrap();
        let total: f64 = pr.atoms.iter().map(|a| a.1).sum::<f64>() + pr.new_mass;
        assert!((total - 1.0).abs() < 1e-14);
        assert!(predictive(&state, &[0.1], &p).is_err());
    }

    #[test]
    fn predictive_drives_one_step() {
        // simulate ball 7 from the predictive masses and from the sampler
        let p = q(0.5, 0.0);
        let state = PartitionState::new(vec![vec![1, 3], vec![2, 5, 6], vec![4]]).unwrap();
        let pr = predictive(&state, &[0usize, 1, 2], &p).unwrap();
        let reps = 100_000u64;
        let mut by_rule = [0u64; 4];
        let mut by_sampler = [0u64; 4];
        for i in 0..reps {
            let mut rng = SeedSpec::new(19, i).rng();
            let mut u = rng.random::<f64>();
            let mut slot = 3;
            for (tag, w) in &pr.atoms {
                if u < *w {
                    slot = *tag;
                    break;
                }
                u -= w;
            }
            by_rule[slot] += 1;
            let mut s = state.clone();
            grow(&mut s, 7, &p, &mut SeedSpec::new(23, i).rng()).unwrap();
            let j = s.blocks().iter().position(|b| b.contains(&7)).unwrap();
            by_sampler[j] += 1;
        }
        for j in 0..4 {
            let (a, b) = (by_rule[j] as f64 / reps as f64, by_sampler[j] as f64 / reps as f64);
            let pj = if j < 3 { pr.atoms[j].1 } else { pr.new_mass };
            let se = (2.0 * pj * (1.0 - pj) / reps as f64).sqrt();
            assert!((a - b).abs() < 3.0 * se, "{j}: {a} vs {b}");
        }
    }
}
