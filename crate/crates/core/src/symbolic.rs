//! Words over the path alphabet `{1..M}` and the label alphabet `{1..N}`, the
//! breadth-first order on tree edges, and the edge index `κ`.
//!
//! Edges of the `M`-ary tree are identified with nonempty path words: the word
//! `(i_1, ..., i_d)` is the edge entering the node reached by taking child
//! `i_1`, then `i_2`, and so on. Edges are enumerated top to bottom, left to
//! right; `κ` is the position of an edge in that enumeration, so for `M = 2`
//! the first few values are `κ(1) = 0`, `κ(2) = 1`, `κ(1,1) = 2`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A word over the path alphabet `{1..M}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathWord {
    arity: u32,
    symbols: Vec<u32>,
}

impl PathWord {
    pub fn new(arity: u32, symbols: Vec<u32>) -> Result<Self> {
        if arity < 2 {
            return Err(Error::InvalidParameter(format!("arity must be >= 2, got {arity}")));
        }
        if let Some(&bad) = symbols.iter().find(|&&s| s == 0 || s > arity) {
            return Err(Error::SymbolOutOfRange {
                symbol: bad,
                size: arity,
            });
        }
        Ok(PathWord { arity, symbols })
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// The word extended by one more symbol.
    pub fn child(&self, symbol: u32) -> Result<PathWord> {
        let mut symbols = self.symbols.clone();
        symbols.push(symbol);
        PathWord::new(self.arity, symbols)
    }
}

impl fmt::Display for PathWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_word(f, self.symbols.iter().copied())
    }
}

/// A word over the label alphabet `{1..N}`. `N` is at most 255.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LabelWord {
    alphabet: u32,
    symbols: Vec<u8>,
}

impl LabelWord {
    pub fn new(alphabet: u32, symbols: Vec<u8>) -> Result<Self> {
        if !(2..=255).contains(&alphabet) {
            return Err(Error::InvalidParameter(format!(
                "label alphabet size must be in 2..=255, got {alphabet}"
            )));
        }
        if let Some(&bad) = symbols.iter().find(|&&s| s == 0 || u32::from(s) > alphabet) {
            return Err(Error::SymbolOutOfRange {
                symbol: u32::from(bad),
                size: alphabet,
            });
        }
        Ok(LabelWord { alphabet, symbols })
    }

    pub fn empty(alphabet: u32) -> Result<Self> {
        LabelWord::new(alphabet, Vec::new())
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub(crate) fn from_raw(alphabet: u32, symbols: Vec<u8>) -> Self {
        LabelWord { alphabet, symbols }
    }
}

impl fmt::Display for LabelWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_word(f, self.symbols.iter().map(|&s| u32::from(s)))
    }
}

fn write_word(f: &mut fmt::Formatter<'_>, symbols: impl Iterator<Item = u32>) -> fmt::Result {
    f.write_str("(")?;
    for (i, s) in symbols.enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{s}")?;
    }
    f.write_str(")")
}

/// Position of an edge in breadth-first order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeIndex(pub u64);

impl EdgeIndex {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for EdgeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Breadth-first order: shorter words first, equal lengths lexicographically.
pub fn compare_star(a: &PathWord, b: &PathWord) -> Result<Ordering> {
    if a.arity != b.arity {
        return Err(Error::ArityMismatch {
            left: a.arity,
            right: b.arity,
        });
    }
    Ok(a.len().cmp(&b.len()).then_with(|| a.symbols.cmp(&b.symbols)))
}

/// Number of edges strictly above depth `depth`, i.e. `(M^d - M)/(M - 1)`.
fn depth_offset(arity: u128, depth: u32) -> Option<u128> {
    // M + M^2 + ... + M^(d-1)
    let mut total: u128 = 0;
    let mut power: u128 = 1;
    for _ in 1..depth {
        power = power.checked_mul(arity)?;
        total = total.checked_add(power)?;
    }
    Some(total)
}

/// The edge index `κ(w)` of a nonempty path word.
pub fn kappa(word: &PathWord) -> Result<EdgeIndex> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let overflow = || Error::IndexOverflow { depth: word.len() };
    let m = u128::from(word.arity);
    let depth = u32::try_from(word.len()).map_err(|_| overflow())?;
    let mut rank: u128 = 0;
    for &s in &word.symbols {
        rank = rank
            .checked_mul(m)
            .and_then(|r| r.checked_add(u128::from(s - 1)))
            .ok_or_else(overflow)?;
    }
    let k = depth_offset(m, depth)
        .and_then(|o| o.checked_add(rank))
        .ok_or_else(overflow)?;
    u64::try_from(k).map(EdgeIndex).map_err(|_| overflow())
}

/// The path word whose edge index is `k`.
pub fn kappa_inverse(k: EdgeIndex, arity: u32) -> Result<PathWord> {
    if arity < 2 {
        return Err(Error::InvalidParameter(format!("arity must be >= 2, got {arity}")));
    }
    let m = u128::from(arity);
    let k = u128::from(k.0);
    // Level d holds M^d edges starting at offset(d).
    let mut depth = 1u32;
    let mut start: u128 = 0;
    let mut width: u128 = m;
    while k >= start + width {
        start += width;
        width *= m;
        depth += 1;
    }
    let mut rank = k - start;
    let mut symbols = vec![0u32; depth as usize];
    for slot in symbols.iter_mut().rev() {
        *slot = (rank % m) as u32 + 1;
        rank /= m;
    }
    PathWord::new(arity, symbols)
}

/// Edge indices of the `M` edges directly below edge `k`.
pub fn child_indices(k: EdgeIndex, arity: u32) -> Result<Vec<EdgeIndex>> {
    if arity < 2 {
        return Err(Error::InvalidParameter(format!("arity must be >= 2, got {arity}")));
    }
    let m = u64::from(arity);
    let first =
        k.0.checked_mul(m)
            .and_then(|v| v.checked_add(m))
            .filter(|v| v.checked_add(m - 1).is_some())
            .ok_or(Error::IndexOverflow { depth: 0 })?;
    Ok((0..m).map(|c| EdgeIndex(first + c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pw(m: u32, s: &[u32]) -> PathWord {
        PathWord::new(m, s.to_vec()).unwrap()
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare_star(&pw(2, &[2]), &pw(2, &[1, 1])).unwrap(), Ordering::Less);
        assert_eq!(compare_star(&pw(2, &[1, 2]), &pw(2, &[1, 2])).unwrap(), Ordering::Equal);
        assert_eq!(compare_star(&pw(3, &[1, 3]), &pw(3, &[2, 1])).unwrap(), Ordering::Less);
        assert!(matches!(
            compare_star(&pw(2, &[1]), &pw(3, &[1])),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(&pw(2, &[1])).unwrap(), EdgeIndex(0));
        assert_eq!(kappa(&pw(2, &[2])).unwrap(), EdgeIndex(1));
        assert_eq!(kappa(&pw(2, &[1, 1])).unwrap(), EdgeIndex(2));
        assert_eq!(kappa(&pw(2, &[1, 2])).unwrap(), EdgeIndex(3));
        assert_eq!(kappa(&pw(2, &[2, 1])).unwrap(), EdgeIndex(4));
        assert_eq!(kappa(&pw(3, &[1, 1])).unwrap(), EdgeIndex(3));
        assert_eq!(kappa(&pw(2, &[])), Err(Error::EmptyWord));
    }

    #[test]
    fn kappa_inverse_examples() {
        assert_eq!(kappa_inverse(EdgeIndex(1), 2).unwrap(), pw(2, &[2]));
        assert_eq!(kappa_inverse(EdgeIndex(4), 2).unwrap(), pw(2, &[2, 1]));
        assert_eq!(kappa_inverse(EdgeIndex(5), 3).unwrap(), pw(3, &[1, 3]));
        assert_eq!(kappa_inverse(EdgeIndex(0), 5).unwrap(), pw(5, &[1]));
    }

    #[test]
    fn child_examples() {
        let c = |k, m| {
            child_indices(EdgeIndex(k), m)
                .unwrap()
                .into_iter()
                .map(|e| e.0)
                .collect::<Vec<_>>()
        };
        assert_eq!(c(0, 2), vec![2, 3]);
        assert_eq!(c(1, 2), vec![4, 5]);
        assert_eq!(c(1, 3), vec![6, 7, 8]);
        assert!(child_indices(EdgeIndex(u64::MAX / 2), 2).unwrap_err().is_budget());
    }

    #[test]
    fn kappa_overflow_is_reported() {
        let deep = PathWord::new(2, vec![2; 64]).unwrap();
        assert!(matches!(kappa(&deep), Err(Error::IndexOverflow { .. })));
        let ok = PathWord::new(2, vec![2; 62]).unwrap();
        assert_eq!(kappa(&ok).unwrap().0, (1u64 << 63) - 3);
    }

    #[test]
    fn largest_index_inverts() {
        let w = kappa_inverse(EdgeIndex(u64::MAX), 2).unwrap();
        assert_eq!(kappa(&w).unwrap(), EdgeIndex(u64::MAX));
    }

    #[test]
    fn rejects_bad_symbols() {
        assert!(PathWord::new(2, vec![3]).is_err());
        assert!(PathWord::new(2, vec![0]).is_err());
        assert!(LabelWord::new(3, vec![4]).is_err());
        assert!(LabelWord::new(1, vec![]).is_err());
    }
}
