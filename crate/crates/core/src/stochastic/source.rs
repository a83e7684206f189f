use crate::error::{Error, Result};
use crate::prob::ProbVector;
use crate::symbolic::{child_indices, EdgeIndex, LabelWord};

use super::occupancy::OccupancyMap;

/// Largest number of explicit paths [`simulate_paths`] will track at one level.
pub const MAX_EXPLICIT_PATHS: u64 = 1 << 22;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Assigns a label in `{1..N}` to every edge index.
#[derive(Debug, Clone, PartialEq)]
pub enum LabelSource {
    /// I.i.d. labels with law `p`. The label of edge `κ` is a pure function of
    /// `(seed, κ)`, so any edge can be queried in any order.
    Random { seed: u64, p: ProbVector },
    /// Binary labels: edge `κ` gets the special symbol exactly when
    /// `κ ≡ offset (mod m)`.
    Periodic { m: u64, offset: u64 },
}

impl LabelSource {
    pub fn random(seed: u64, p: ProbVector) -> Self {
        LabelSource::Random { seed, p }
    }

    pub fn periodic(m: u64, offset: u64) -> Result<Self> {
        if m < 2 || offset >= m {
            return Err(Error::InvalidParameter(format!(
                "periodic source needs m >= 2 and offset < m, got m = {m}, offset = {offset}"
            )));
        }
        Ok(LabelSource::Periodic { m, offset })
    }

    pub fn alphabet(&self) -> u32 {
        match self {
            LabelSource::Random { p, .. } => p.alphabet(),
            LabelSource::Periodic { .. } => 2,
        }
    }

    /// Label in `{1..N}`. For periodic sources the special edges get 2, all others 1.
    pub fn label(&self, k: EdgeIndex) -> u8 {
        match self {
            LabelSource::Random { seed, p } => {
                let h = splitmix64(seed ^ splitmix64(k.0));
                let u = (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                let cum = p.cumulative();
                cum.iter().position(|&c| u < c).unwrap_or(cum.len() - 1) as u8 + 1
            }
            LabelSource::Periodic { .. } => self.binary_label(k) + 1,
        }
    }

    /// Periodic labels in the `{0, 1}` alphabet. Random sources map `1..N` to `0..N-1`.
    pub fn binary_label(&self, k: EdgeIndex) -> u8 {
        match self {
            LabelSource::Periodic { m, offset } => u8::from(k.0 % m == *offset),
            LabelSource::Random { .. } => self.label(k) - 1,
        }
    }
}

/// Follow every one of the `M^n` root paths explicitly, labeling edges from
/// `source`, and return the occupancy at levels `0..=depth`.
///
/// Exponential in `depth`; it exists to check the aggregated evolution and to
/// realize deterministic sources edge by edge.
pub fn simulate_paths(source: &LabelSource, arity: u32, depth: usize) -> Result<Vec<OccupancyMap>> {
    let alphabet = source.alphabet();
    let paths = u64::from(arity).checked_pow(depth as u32);
    if paths.is_none_or(|p| p > MAX_EXPLICIT_PATHS) {
        return Err(Error::BudgetExceeded(format!(
            "{arity}^{depth} explicit paths exceeds the limit of {MAX_EXPLICIT_PATHS}"
        )));
    }
    let mut levels = vec![OccupancyMap::root(alphabet, arity)?];
    // (index of the last edge, label word) for every path.
    let mut frontier: Vec<(EdgeIndex, Vec<u8>)> = (0..u64::from(arity))
        .map(|k| (EdgeIndex(k), vec![source.label(EdgeIndex(k))]))
        .collect();
    for level in 1..=depth {
        let entries = frontier
            .iter()
            .map(|(_, w)| (LabelWord::from_raw(alphabet, w.clone()), 1));
        levels.push(OccupancyMap::from_entries(alphabet, arity, level, entries)?);
        if level == depth {
            break;
        }
        let mut next = Vec::with_capacity(frontier.len() * arity as usize);
        for (k, word) in &frontier {
            for child in child_indices(*k, arity)? {
                let mut w = word.clone();
                w.push(source.label(child));
                next.push((child, w));
            }
        }
        frontier = next;
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // Reference outputs of SplitMix64 seeded with 0.
        let mut state = 0u64;
        let mut next = || {
            let out = splitmix64(state);
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            out
        };
        assert_eq!(next(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(next(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn periodic_labels() {
        let src = LabelSource::periodic(3, 2).unwrap();
        let labels: Vec<u8> = (0..7).map(|k| src.binary_label(EdgeIndex(k))).collect();
        assert_eq!(labels, vec![0, 0, 1, 0, 0, 1, 0]);
        assert_eq!(src.label(EdgeIndex(2)), 2);
        assert!(LabelSource::periodic(3, 3).is_err());
    }

    #[test]
    fn random_labels_are_reproducible_and_roughly_calibrated() {
        let p = ProbVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let a = LabelSource::random(7, p.clone());
        let b = LabelSource::random(7, p);
        let mut freq = [0usize; 3];
        for k in 0..100_000 {
            let l = a.label(EdgeIndex(k));
            assert_eq!(l, b.label(EdgeIndex(k)));
            freq[usize::from(l) - 1] += 1;
        }
        for (f, want) in freq.iter().zip([0.2, 0.3, 0.5]) {
            assert!((*f as f64 / 1e5 - want).abs() < 0.01);
        }
    }

    #[test]
    fn periodic_m3_third_level() {
        let src = LabelSource::periodic(3, 2).unwrap();
        let levels = simulate_paths(&src, 2, 3).unwrap();
        assert_eq!(levels[3].z(), 3);
        let words: Vec<Vec<u8>> = levels[3].iter().map(|(w, _)| w.to_vec()).collect();
        assert_eq!(words, vec![vec![1, 1, 1], vec![1, 1, 2], vec![1, 2, 1]]);
        assert_eq!(levels[3].total_paths(), 8);
    }

    #[test]
    fn explicit_budget() {
        let src = LabelSource::periodic(3, 2).unwrap();
        assert!(simulate_paths(&src, 2, 40).unwrap_err().is_budget());
    }
}
