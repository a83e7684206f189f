use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::prob::ProbVector;

use super::occupancy::OccupancyMap;

/// Sample `Multinomial(n, p)` as a chain of exact binomial splits, writing the
/// counts into `out`.
///
/// `tails[i]` must hold `p_i + ... + p_N`. Each binomial is drawn by
/// `rand_distr::Binomial`, which is exact (inversion for small means, BTPE
/// rejection otherwise).
fn multinomial_split<R: Rng + ?Sized>(rng: &mut R, n: u64, p: &[f64], tails: &[f64], out: &mut [u64]) {
    let mut remaining = n;
    let last = p.len() - 1;
    for i in 0..last {
        if remaining == 0 {
            out[i] = 0;
            continue;
        }
        let q = (p[i] / tails[i]).clamp(0.0, 1.0);
        let k = Binomial::new(remaining, q)
            .expect("split probability lies in [0, 1]")
            .sample(rng);
        out[i] = k;
        remaining -= k;
    }
    out[last] = remaining;
}

/// Advance the occupancy by one level.
///
/// For every entry `(w, c)` the `M c` child paths are distributed over the
/// words `w 1, ..., w N` by one multinomial draw, which has exactly the law of
/// labeling each child edge independently with `p`.
pub fn evolve<R: Rng + ?Sized>(occ: &OccupancyMap, p: &ProbVector, rng: &mut R) -> Result<OccupancyMap> {
    let n = occ.alphabet() as usize;
    if p.len() != n {
        return Err(Error::InvalidParameter(format!(
            "probability vector has {} entries but the occupancy alphabet has {n}",
            p.len()
        )));
    }
    let level = occ.level() + 1;
    let arity = u64::from(occ.arity());
    // Total paths M^level must stay below 2^63.
    let total_ok = occ
        .expected_total()
        .and_then(|t| t.checked_mul(u128::from(arity)))
        .is_some_and(|t| t < 1u128 << 63);
    if !total_ok {
        return Err(Error::CountOverflow { level });
    }

    let probs = p.as_slice();
    let mut tails = vec![0.0; n];
    let mut acc = 0.0;
    for i in (0..n).rev() {
        acc += probs[i];
        tails[i] = acc;
    }

    let mut next = OccupancyMap::with_capacity(occ.alphabet(), occ.arity(), level, occ.z() * n.min(2));
    let mut split = vec![0u64; n];
    let mut child = Vec::with_capacity(level);
    for (word, count) in occ.iter() {
        let paths = count.checked_mul(arity).ok_or(Error::CountOverflow { level })?;
        multinomial_split(rng, paths, probs, &tails, &mut split);
        for (l, &k) in split.iter().enumerate() {
            if k == 0 {
                continue;
            }
            child.clear();
            child.extend_from_slice(word);
            child.push(l as u8 + 1);
            next.push_sorted(&child, k);
        }
    }
    Ok(next)
}

/// Evolve from the root and return the occupancy at levels `0..=depth`.
pub fn evolve_to_depth<R: Rng + ?Sized>(
    p: &ProbVector,
    arity: u32,
    depth: usize,
    rng: &mut R,
) -> Result<Vec<OccupancyMap>> {
    let mut levels = Vec::with_capacity(depth + 1);
    levels.push(OccupancyMap::root(p.alphabet(), arity)?);
    for _ in 0..depth {
        let next = evolve(levels.last().expect("nonempty"), p, rng)?;
        levels.push(next);
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::symbolic::LabelWord;

    #[test]
    fn root_split_is_binomial() {
        let p = ProbVector::uniform(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut hist = [0usize; 3];
        let trials = 40_000;
        for _ in 0..trials {
            let occ = evolve(&OccupancyMap::root(2, 2).unwrap(), &p, &mut rng).unwrap();
            assert_eq!(occ.total_paths(), 2);
            let ones = occ.count(&LabelWord::new(2, vec![1]).unwrap());
            hist[ones as usize] += 1;
        }
        for (h, want) in hist.iter().zip([0.25, 0.5, 0.25]) {
            assert!((*h as f64 / trials as f64 - want).abs() < 0.01);
        }
    }

    #[test]
    fn mass_is_conserved() {
        let p = ProbVector::new(vec![0.1, 0.6, 0.3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let levels = evolve_to_depth(&p, 3, 12, &mut rng).unwrap();
        for occ in &levels {
            assert_eq!(Some(occ.total_paths()), occ.expected_total());
            assert!(occ.z() as u128 <= occ.expected_total().unwrap().min(3u128.pow(occ.level() as u32)));
            assert!(occ.measure().is_normalized());
        }
        for pair in levels.windows(2) {
            assert!(pair[1].z() <= 3 * pair[0].z());
        }
    }

    #[test]
    fn near_degenerate_law_stays_on_one_word() {
        let p = ProbVector::new(vec![1.0 - 1e-6, 1e-6]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ones = (0..200)
            .filter(|_| evolve_to_depth(&p, 2, 4, &mut rng).unwrap()[4].z() == 1)
            .count();
        assert!(ones >= 198, "{ones}");
    }

    #[test]
    fn refuses_count_overflow() {
        let p = ProbVector::uniform(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let word = LabelWord::new(2, vec![1; 62]).unwrap();
        let occ = OccupancyMap::from_entries(2, 2, 62, vec![(word, 1u64 << 62)]).unwrap();
        assert_eq!(
            evolve(&occ, &p, &mut rng).unwrap_err(),
            Error::CountOverflow { level: 63 }
        );
    }

    #[test]
    fn alphabet_mismatch() {
        let p = ProbVector::uniform(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(evolve(&OccupancyMap::root(2, 2).unwrap(), &p, &mut rng).is_err());
    }
}
