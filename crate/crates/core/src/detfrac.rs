//! Deterministic subsets `F_m`: label every `m`-th edge of the binary tree
//! (in breadth-first order) with `1` and all others with `0`.
//!
//! Words here are over `{0, 1}`. The library-wide label alphabet is `{1, 2}`;
//! [`BinaryWord::to_label_word`] maps `0 -> 1` and `1 -> 2`.
//!
//! Edge `κ` of the binary tree sits over vertex `(κ + 1) mod m` of the digraph
//! `j -> 2j + 1, 2j + 2 (mod m)`, and carries a `1` exactly when that vertex is
//! `0`. The level-`n` label words are the length-`n` prefixes of the subshift
//! forbidding `1 0^k 1` for `k < L`, started with `0^L`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::bisect;
use crate::stochastic::OccupancyMap;
use crate::symbolic::LabelWord;

/// Longest word a [`BinaryWord`] can hold.
pub const MAX_WORD_LEN: usize = 63;
/// Largest number of `(word, state)` pairs a generator keeps at one level.
pub const MAX_STATES: usize = 1 << 24;

/// A word over `{0, 1}` of length at most 63, first symbol in the highest bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryWord {
    len: u8,
    bits: u64,
}

impl BinaryWord {
    pub const EMPTY: BinaryWord = BinaryWord { len: 0, bits: 0 };

    pub fn len(&self) -> usize {
        usize::from(self.len)
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Symbol at position `i` (0-based).
    pub fn get(&self, i: usize) -> u8 {
        ((self.bits >> (self.len() - 1 - i)) & 1) as u8
    }

    pub fn push(self, bit: u8) -> BinaryWord {
        debug_assert!(self.len() < MAX_WORD_LEN);
        BinaryWord {
            len: self.len + 1,
            bits: (self.bits << 1) | u64::from(bit & 1),
        }
    }

    pub fn symbols(&self) -> Vec<u8> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    pub fn to_label_word(&self) -> LabelWord {
        LabelWord::from_raw(2, self.symbols().into_iter().map(|b| b + 1).collect())
    }

    pub fn from_label_word(word: &LabelWord) -> Result<BinaryWord> {
        if word.alphabet() != 2 {
            return Err(Error::InvalidParameter(format!(
                "binary words need a two-letter alphabet, got {}",
                word.alphabet()
            )));
        }
        if word.len() > MAX_WORD_LEN {
            return Err(Error::BudgetExceeded(format!(
                "word length {} exceeds {MAX_WORD_LEN}",
                word.len()
            )));
        }
        Ok(word.symbols().iter().fold(BinaryWord::EMPTY, |w, &s| w.push(s - 1)))
    }
}

impl std::str::FromStr for BinaryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<BinaryWord> {
        if s.len() > MAX_WORD_LEN {
            return Err(Error::BudgetExceeded(format!(
                "word length {} exceeds {MAX_WORD_LEN}",
                s.len()
            )));
        }
        s.chars().try_fold(BinaryWord::EMPTY, |w, c| match c {
            '0' => Ok(w.push(0)),
            '1' => Ok(w.push(1)),
            _ => Err(Error::InvalidParameter(format!("'{c}' is not a binary digit"))),
        })
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", self.get(i))?;
        }
        Ok(())
    }
}

/// `L` with `2^{L+1} - 1 ≤ m ≤ 2^{L+2} - 2`.
pub fn level_of(m: u64) -> Result<u32> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!(
            "L is defined for m >= 3, got m = {m} (F_2 is the whole Cantor set)"
        )));
    }
    Ok((m + 1).ilog2() - 1)
}

/// The root of `x^{L+1} = x^L + 1` in `(1, 2)`.
pub fn rho(level: u32) -> Result<f64> {
    if level == 0 {
        return Err(Error::InvalidParameter("L must be >= 1".into()));
    }
    let l = level as i32;
    // Negative at 1, positive at 2.
    Ok(bisect(1.0, 2.0, -1.0, |x| x.powi(l + 1) - x.powi(l) - 1.0))
}

/// Hausdorff dimension of `F_m` under a two-map IFS with ratio `r`.
pub fn dim_fm(m: u64, ratio: f64) -> Result<f64> {
    if !(ratio > 0.0 && ratio <= 0.5) {
        return Err(Error::InvalidParameter(format!("r = {ratio} must lie in (0, 1/2]")));
    }
    let rate = match m {
        0 | 1 => return Err(Error::InvalidParameter(format!("m must be >= 2, got {m}"))),
        2 => 2f64.ln(),
        _ => rho(level_of(m)?)?.ln(),
    };
    Ok(rate / -ratio.ln())
}

/// Which edges carry the label `1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterministicSpec {
    pub m: u64,
    /// Edge `κ` is labeled `1` iff `κ ≡ offset (mod m)`.
    pub offset: u64,
}

impl DeterministicSpec {
    /// Every `m`-th edge: `offset = m - 1`.
    pub fn new(m: u64) -> Result<Self> {
        DeterministicSpec::with_offset(m, m.wrapping_sub(1))
    }

    pub fn with_offset(m: u64, offset: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(format!("m must be >= 2, got {m}")));
        }
        if offset >= m {
            return Err(Error::InvalidParameter(format!("offset {offset} must be < m = {m}")));
        }
        Ok(DeterministicSpec { m, offset })
    }

    pub fn level(&self) -> Result<u32> {
        level_of(self.m)
    }
}

/// The digraph on `0..m` with edges `j -> 2j + 1, 2j + 2 (mod m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModGraph {
    pub m: u64,
    pub successors: Vec<[u64; 2]>,
}

impl ModGraph {
    pub fn has_edge(&self, from: u64, to: u64) -> bool {
        self.successors[from as usize].contains(&to)
    }

    /// Vertices reachable from `from` by walks of exactly `steps` edges.
    pub fn reachable(&self, from: u64, steps: usize) -> BTreeSet<u64> {
        let mut current = BTreeSet::from([from]);
        for _ in 0..steps {
            current = current.iter().flat_map(|&v| self.successors[v as usize]).collect();
        }
        current
    }
}

pub fn mod_graph(m: u64) -> Result<ModGraph> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!("the digraph needs m >= 3, got {m}")));
    }
    if m > MAX_STATES as u64 {
        return Err(Error::BudgetExceeded(format!("m = {m} exceeds {MAX_STATES} vertices")));
    }
    let successors = (0..m).map(|j| [(2 * j + 1) % m, (2 * j + 2) % m]).collect();
    Ok(ModGraph { m, successors })
}

fn check_length(n: usize) -> Result<()> {
    if n > MAX_WORD_LEN {
        return Err(Error::BudgetExceeded(format!("word length {n} exceeds {MAX_WORD_LEN}")));
    }
    Ok(())
}

fn check_states(len: usize, level: usize) -> Result<()> {
    if len > MAX_STATES {
        return Err(Error::BudgetExceeded(format!(
            "{len} states at level {level} exceeds {MAX_STATES}"
        )));
    }
    Ok(())
}

/// Level-`n` label words of the tree paths with the number of paths carrying
/// each, grouped by `κ mod m` of the last edge.
fn tree_counts(spec: &DeterministicSpec, n: usize) -> Result<BTreeMap<BinaryWord, u64>> {
    check_length(n)?;
    let m = spec.m;
    let label = |residue: u64| u8::from(residue == spec.offset);
    // Keyed on (word, κ mod m); the subtree below an edge depends only on κ mod m.
    let mut states: BTreeMap<(BinaryWord, u64), u64> = BTreeMap::new();
    if n == 0 {
        return Ok(BTreeMap::from([(BinaryWord::EMPTY, 1)]));
    }
    for k in 0..2u64 {
        let residue = k % m;
        *states
            .entry((BinaryWord::EMPTY.push(label(residue)), residue))
            .or_default() += 1;
    }
    for level in 1..n {
        let mut next: BTreeMap<(BinaryWord, u64), u64> = BTreeMap::new();
        for ((word, residue), count) in states {
            // Children of κ are 2κ + 2 and 2κ + 3.
            for c in 2..4u64 {
                let child = (2 * residue + c) % m;
                *next.entry((word.push(label(child)), child)).or_default() += count;
            }
        }
        check_states(next.len(), level + 1)?;
        states = next;
    }
    let mut out = BTreeMap::new();
    for ((word, _), count) in states {
        *out.entry(word).or_default() += count;
    }
    Ok(out)
}

/// Distinct label words of length `n` over all `2^n` root paths of the labeled tree.
pub fn tree_words(spec: &DeterministicSpec, n: usize) -> Result<BTreeSet<BinaryWord>> {
    Ok(tree_counts(spec, n)?.into_keys().collect())
}

/// The level-`n` occupancy of `F_m`, in the library label alphabet `{1, 2}`.
pub fn tree_occupancy(spec: &DeterministicSpec, n: usize) -> Result<OccupancyMap> {
    let counts = tree_counts(spec, n)?;
    OccupancyMap::from_entries(2, 2, n, counts.into_iter().map(|(w, c)| (w.to_label_word(), c)))
}

/// Words emitted by length-`n` walks in [`mod_graph`] starting at vertex 1 or
/// 2, where a step onto vertex 0 emits `1` and any other vertex emits `0`.
pub fn graph_words(m: u64, n: usize) -> Result<BTreeSet<BinaryWord>> {
    let graph = mod_graph(m)?;
    check_length(n)?;
    if n == 0 {
        return Ok(BTreeSet::from([BinaryWord::EMPTY]));
    }
    let emit = |v: u64| u8::from(v == 0);
    // Determinized: each word maps to the set of vertices its walks can end at.
    let mut states: BTreeMap<BinaryWord, BTreeSet<u64>> = BTreeMap::new();
    for start in [1 % m, 2 % m] {
        states
            .entry(BinaryWord::EMPTY.push(emit(start)))
            .or_default()
            .insert(start);
    }
    for level in 1..n {
        let mut next: BTreeMap<BinaryWord, BTreeSet<u64>> = BTreeMap::new();
        for (word, vertices) in &states {
            for &v in vertices {
                for u in graph.successors[v as usize] {
                    next.entry(word.push(emit(u))).or_default().insert(u);
                }
            }
        }
        check_states(next.values().map(BTreeSet::len).sum(), level + 1)?;
        states = next;
    }
    Ok(states.into_keys().collect())
}

/// The subshift forbidding `1 0^k 1` for `0 ≤ k < L`, restricted to words that start with `0^L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SftSpec {
    pub level: u32,
}

impl SftSpec {
    pub fn new(level: u32) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidParameter("L must be >= 1".into()));
        }
        Ok(SftSpec { level })
    }

    /// True when `word` starts with `0^min(L, n)` and avoids every forbidden factor.
    pub fn admits(&self, word: &BinaryWord) -> bool {
        let l = self.level as usize;
        let mut gap: Option<usize> = None;
        for i in 0..word.len() {
            let b = word.get(i);
            if i < l && b == 1 {
                return false;
            }
            if b == 1 {
                if matches!(gap, Some(k) if k < l) {
                    return false;
                }
                gap = Some(0);
            } else if let Some(k) = gap.as_mut() {
                *k += 1;
            }
        }
        true
    }
}

/// All admissible words of length `n`, generated by tracking the number of
/// zeros since the last `1`.
pub fn sft_words(level: u32, n: usize) -> Result<BTreeSet<BinaryWord>> {
    let spec = SftSpec::new(level)?;
    check_length(n)?;
    let l = spec.level as usize;
    // State: zeros since the last 1, capped at L. The first L symbols are forced to 0.
    let mut states: Vec<(BinaryWord, usize)> = vec![(BinaryWord::EMPTY, 0)];
    for i in 0..n {
        let mut next = Vec::with_capacity(states.len() * 2);
        for &(word, zeros) in &states {
            next.push((word.push(0), (zeros + 1).min(l)));
            if i >= l && zeros >= l {
                next.push((word.push(1), 0));
            }
        }
        check_states(next.len(), i + 1)?;
        states = next;
    }
    Ok(states.into_iter().map(|(w, _)| w).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthRate {
    /// `|W_n| / |W_{n-1}|` for the last two counts.
    pub last_ratio: f64,
    /// `exp` of the least-squares slope of `ln |W_n|` against `n`.
    pub regression_ratio: f64,
}

/// Geometric growth of a sequence of consecutive word counts.
pub fn growth_rate(counts: &[u64]) -> Result<GrowthRate> {
    if counts.len() < 5 {
        return Err(Error::Degenerate(format!(
            "need at least 5 counts, got {}",
            counts.len()
        )));
    }
    if counts.contains(&0) {
        return Err(Error::Degenerate("word counts must be positive".into()));
    }
    let k = counts.len();
    let last_ratio = counts[k - 1] as f64 / counts[k - 2] as f64;
    let xs: Vec<f64> = (0..k).map(|i| i as f64).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    let mx = xs.iter().sum::<f64>() / k as f64;
    let my = ys.iter().sum::<f64>() / k as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(GrowthRate {
        last_ratio,
        regression_ratio: (sxy / sxx).exp(),
    })
}

/// Word counts `|tree_words(spec, n)|` for `n` in `range`.
pub fn tree_word_counts(spec: &DeterministicSpec, range: std::ops::RangeInclusive<usize>) -> Result<Vec<u64>> {
    range.map(|n| tree_words(spec, n).map(|w| w.len() as u64)).collect()
}
