use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::symbolic::LabelWord;

/// Level-`n` state of the labeled tree: every occupied label word of length
/// `n` with the number of root paths carrying it.
///
/// Words are stored flattened (stride `level`) in strictly increasing
/// lexicographic order, so the `Z_n` entries need no per-word allocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupancyMap {
    alphabet: u32,
    arity: u32,
    level: usize,
    words: Vec<u8>,
    counts: Vec<u64>,
}

impl OccupancyMap {
    /// Level 0: the single empty word carried by the one root "path".
    pub fn root(alphabet: u32, arity: u32) -> Result<Self> {
        if !(2..=255).contains(&alphabet) || arity < 2 {
            return Err(Error::InvalidParameter(format!(
                "need 2 <= N <= 255 and M >= 2, got N = {alphabet}, M = {arity}"
            )));
        }
        Ok(OccupancyMap {
            alphabet,
            arity,
            level: 0,
            words: Vec::new(),
            counts: vec![1],
        })
    }

    /// Build from arbitrary `(word, count)` pairs; duplicates are merged and zero counts dropped.
    pub fn from_entries<I>(alphabet: u32, arity: u32, level: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (LabelWord, u64)>,
    {
        let mut all: Vec<(LabelWord, u64)> = Vec::new();
        for (w, c) in entries {
            if w.len() != level || w.alphabet() != alphabet {
                return Err(Error::InvalidParameter(format!(
                    "word {w} does not belong to level {level} over alphabet {alphabet}"
                )));
            }
            if c > 0 {
                all.push((w, c));
            }
        }
        all.sort_by(|a, b| a.0.symbols().cmp(b.0.symbols()));
        let mut map = OccupancyMap {
            alphabet,
            arity,
            level,
            words: Vec::new(),
            counts: Vec::new(),
        };
        for (w, c) in all {
            let n = map.counts.len();
            if n > 0 && map.word_at(n - 1) == w.symbols() {
                map.counts[n - 1] = map.counts[n - 1].checked_add(c).ok_or(Error::CountOverflow { level })?;
            } else {
                map.words.extend_from_slice(w.symbols());
                map.counts.push(c);
            }
        }
        Ok(map)
    }

    pub(crate) fn with_capacity(alphabet: u32, arity: u32, level: usize, entries: usize) -> Self {
        OccupancyMap {
            alphabet,
            arity,
            level,
            words: Vec::with_capacity(entries * level),
            counts: Vec::with_capacity(entries),
        }
    }

    /// Append an entry; callers push in increasing word order.
    pub(crate) fn push_sorted(&mut self, word: &[u8], count: u64) {
        debug_assert_eq!(word.len(), self.level);
        self.words.extend_from_slice(word);
        self.counts.push(count);
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Number of occupied words, `Z_n`.
    pub fn z(&self) -> usize {
        self.counts.len()
    }

    pub fn word_at(&self, i: usize) -> &[u8] {
        &self.words[i * self.level..(i + 1) * self.level]
    }

    pub fn count_at(&self, i: usize) -> u64 {
        self.counts[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u8], u64)> + '_ {
        (0..self.counts.len()).map(move |i| (self.word_at(i), self.counts[i]))
    }

    pub fn words(&self) -> Vec<LabelWord> {
        (0..self.z())
            .map(|i| LabelWord::from_raw(self.alphabet, self.word_at(i).to_vec()))
            .collect()
    }

    /// Path count of `word`, zero if unoccupied.
    pub fn count(&self, word: &LabelWord) -> u64 {
        if word.len() != self.level {
            return 0;
        }
        let (mut lo, mut hi) = (0usize, self.counts.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.word_at(mid).cmp(word.symbols()) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return self.counts[mid],
            }
        }
        0
    }

    /// `Σ counts`, which equals `M^level` for every exactly evolved map.
    pub fn total_paths(&self) -> u128 {
        self.counts.iter().map(|&c| u128::from(c)).sum()
    }

    /// `M^level`, if it fits in 128 bits.
    pub fn expected_total(&self) -> Option<u128> {
        u128::from(self.arity).checked_pow(u32::try_from(self.level).ok()?)
    }

    pub fn measure(&self) -> RandomMeasure {
        measure(self)
    }
}

/// Number of distinct occupied label words.
pub fn z_n(occ: &OccupancyMap) -> usize {
    occ.z()
}

/// The random measure: each occupied word weighted by its share of the `M^n` paths.
///
/// Weights are kept as exact integers over the common denominator `M^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomMeasure {
    pub level: usize,
    pub denominator: u128,
    pub weights: Vec<(LabelWord, u64)>,
}

impl RandomMeasure {
    /// Weight of `word` as `(numerator, denominator)`.
    pub fn weight(&self, word: &LabelWord) -> (u64, u128) {
        let num = self.weights.iter().find(|(w, _)| w == word).map_or(0, |(_, c)| *c);
        (num, self.denominator)
    }

    pub fn weight_f64(&self, word: &LabelWord) -> f64 {
        let (n, d) = self.weight(word);
        n as f64 / d as f64
    }

    /// Sum of numerators; equals `denominator` when the measure is normalized.
    pub fn total_numerator(&self) -> u128 {
        self.weights.iter().map(|(_, c)| u128::from(*c)).sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.total_numerator() == self.denominator
    }
}

pub fn measure(occ: &OccupancyMap) -> RandomMeasure {
    RandomMeasure {
        level: occ.level(),
        denominator: occ.total_paths(),
        weights: occ.words().into_iter().zip(occ.counts.iter().copied()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lw(s: &[u8]) -> LabelWord {
        LabelWord::new(2, s.to_vec()).unwrap()
    }

    #[test]
    fn root_state() {
        let root = OccupancyMap::root(2, 2).unwrap();
        assert_eq!(root.z(), 1);
        assert_eq!(z_n(&root), 1);
        assert_eq!(root.total_paths(), 1);
        let m = root.measure();
        assert_eq!(m.weight(&LabelWord::empty(2).unwrap()), (1, 1));
        assert!(m.is_normalized());
    }

    #[test]
    fn merges_and_sorts_entries() {
        let occ = OccupancyMap::from_entries(
            2,
            2,
            2,
            vec![(lw(&[2, 1]), 1), (lw(&[1, 2]), 2), (lw(&[2, 1]), 1), (lw(&[1, 1]), 0)],
        )
        .unwrap();
        assert_eq!(occ.z(), 2);
        assert_eq!(occ.word_at(0), &[1, 2]);
        assert_eq!(occ.count(&lw(&[2, 1])), 2);
        assert_eq!(occ.count(&lw(&[1, 1])), 0);
        assert_eq!(occ.total_paths(), 4);
        assert_eq!(occ.expected_total(), Some(4));
    }

    #[test]
    fn level_one_measure() {
        let occ = OccupancyMap::from_entries(2, 2, 1, vec![(lw(&[1]), 2)]).unwrap();
        let m = measure(&occ);
        assert_eq!(m.weights.len(), 1);
        assert_eq!(m.weight(&lw(&[1])), (2, 2));
        assert_eq!(m.weight(&lw(&[2])).0, 0);
        assert_eq!(m.weight_f64(&lw(&[1])), 1.0);
    }

    #[test]
    fn rejects_wrong_level() {
        assert!(OccupancyMap::from_entries(2, 2, 2, vec![(lw(&[1]), 1)]).is_err());
    }
}
