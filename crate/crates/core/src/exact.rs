//! Exact occupancy probabilities and the enumeration oracles that check them.
//!
//! `a_w` is the probability that at least one root path of length `|w|`
//! carries the label word `w`. Splitting on the `M` root edges gives
//! `a_{l w} = 1 - (1 - p_l a_w)^M` with `a_ε = 1`; for `N = M = 2` this is
//! `2 p a - p² a²`. In the symmetric case every word of length `n` has the same
//! value `π_n`, with `π_n = 1 - (1 - π_{n-1}/N)^M`.

use std::ops::{Add, Mul};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::ProbVector;
use crate::roots::bisect;
use crate::symbolic::LabelWord;

/// Largest number of labelings the brute-force oracles will enumerate.
pub const MAX_LABELINGS: u64 = 1 << 24;
/// Largest `N^n` for [`expected_zn`].
pub const MAX_EXPECTED_WORDS: u64 = 1 << 20;
/// Largest number of digit-frequency classes for [`multinomial_bound_ln`].
pub const MAX_COMPOSITIONS: u64 = 10_000_000;

/// The value `a_w` attached to a word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecursionState {
    pub word: LabelWord,
    pub value: f64,
}

fn step(p_l: f64, a: f64, arity: u32) -> f64 {
    1.0 - (1.0 - p_l * a).powi(arity as i32)
}

fn check_word(word: &LabelWord, p: &ProbVector, arity: u32) -> Result<()> {
    if arity < 2 {
        return Err(Error::InvalidParameter(format!("M must be >= 2, got {arity}")));
    }
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    if word.alphabet() != p.alphabet() {
        return Err(Error::InvalidParameter(format!(
            "word alphabet {} does not match p with {} entries",
            word.alphabet(),
            p.len()
        )));
    }
    Ok(())
}

/// `a_w`, evaluated from the last symbol back to the first.
pub fn a_probability(word: &LabelWord, p: &ProbVector, arity: u32) -> Result<f64> {
    check_word(word, p, arity)?;
    Ok(word.symbols().iter().rev().fold(1.0, |a, &l| step(p.get(l), a, arity)))
}

/// `a` for every nonempty suffix of `word`, shortest suffix first.
pub fn a_trace(word: &LabelWord, p: &ProbVector, arity: u32) -> Result<Vec<RecursionState>> {
    check_word(word, p, arity)?;
    let symbols = word.symbols();
    let mut a = 1.0;
    let mut out = Vec::with_capacity(symbols.len());
    for start in (0..symbols.len()).rev() {
        a = step(p.get(symbols[start]), a, arity);
        out.push(RecursionState {
            word: LabelWord::from_raw(word.alphabet(), symbols[start..].to_vec()),
            value: a,
        });
    }
    Ok(out)
}

/// The depth-`n` `M`-ary tree: edges in breadth-first order and, for every
/// root path, the edge indices it traverses.
struct TreeLayout {
    edges: usize,
    paths: Vec<Vec<usize>>,
}

fn tree_layout(alphabet: u32, arity: u32, depth: usize) -> Result<TreeLayout> {
    if arity < 2 || depth == 0 {
        return Err(Error::InvalidParameter(format!(
            "need M >= 2 and depth >= 1, got M = {arity}, depth = {depth}"
        )));
    }
    let too_big = || {
        Error::BudgetExceeded(format!(
            "enumerating all labelings of the depth-{depth} {arity}-ary tree over {alphabet} labels exceeds {MAX_LABELINGS}"
        ))
    };
    let m = arity as usize;
    let mut edges = 0usize;
    let mut width = 1usize;
    for _ in 0..depth {
        width = width.checked_mul(m).ok_or_else(too_big)?;
        edges = edges.checked_add(width).ok_or_else(too_big)?;
    }
    let labelings = u64::from(alphabet).checked_pow(u32::try_from(edges).map_err(|_| too_big())?);
    if labelings.is_none_or(|l| l > MAX_LABELINGS) {
        return Err(too_big());
    }
    // Level d edges occupy kappa in [start_d, start_d + M^d); the path through
    // edge k continues at M k + M + c.
    let mut paths: Vec<Vec<usize>> = (0..m).map(|k| vec![k]).collect();
    for _ in 1..depth {
        paths = paths
            .into_iter()
            .flat_map(|path| {
                let last = *path.last().expect("nonempty");
                (0..m).map(move |c| {
                    let mut next = path.clone();
                    next.push(m * last + m + c);
                    next
                })
            })
            .collect();
    }
    Ok(TreeLayout { edges, paths })
}

/// Call `visit(labels, weight)` for every labeling of `edges` edges with
/// symbols `0..probs.len()`, where `weight` is the product of the label probabilities.
fn for_each_labeling<T, F>(probs: &[T], edges: usize, mut visit: F)
where
    T: Clone + One + Mul<Output = T>,
    F: FnMut(&[u8], T),
{
    let n = probs.len() as u8;
    let mut labels = vec![0u8; edges];
    loop {
        let weight = labels
            .iter()
            .fold(T::one(), |acc, &l| acc * probs[usize::from(l)].clone());
        visit(&labels, weight);
        // Odometer increment.
        let mut i = 0;
        loop {
            if i == edges {
                return;
            }
            labels[i] += 1;
            if labels[i] < n {
                break;
            }
            labels[i] = 0;
            i += 1;
        }
    }
}

/// Brute-force `a_w` for an arbitrary weight type (`f64`, exact rationals, ...).
///
/// `probs[i]` is the probability of label `i + 1`; `word` uses symbols `1..=N`.
pub fn brute_force_a_with<T>(word: &[u8], probs: &[T], arity: u32) -> Result<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>,
{
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    if let Some(&bad) = word.iter().find(|&&s| s == 0 || usize::from(s) > probs.len()) {
        return Err(Error::SymbolOutOfRange {
            symbol: u32::from(bad),
            size: probs.len() as u32,
        });
    }
    let layout = tree_layout(probs.len() as u32, arity, word.len())?;
    let target: Vec<u8> = word.iter().map(|s| s - 1).collect();
    let mut total = T::zero();
    for_each_labeling(probs, layout.edges, |labels, weight| {
        let hit = layout
            .paths
            .iter()
            .any(|path| path.iter().zip(&target).all(|(&e, &t)| labels[e] == t));
        if hit {
            total = total.clone() + weight;
        }
    });
    Ok(total)
}

/// Brute-force `a_w` by summing over every labeling of the depth-`|w|` tree.
pub fn brute_force_a(word: &LabelWord, p: &ProbVector, arity: u32) -> Result<f64> {
    check_word(word, p, arity)?;
    brute_force_a_with(word.symbols(), p.as_slice(), arity)
}

/// Exact law of `Z_depth` by enumeration: entry `z` is `P(Z_depth = z)`.
pub fn brute_force_z_distribution<T>(probs: &[T], arity: u32, depth: usize) -> Result<Vec<T>>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>,
{
    let layout = tree_layout(probs.len() as u32, arity, depth)?;
    let mut dist = vec![T::zero(); layout.paths.len() + 1];
    let mut seen: Vec<Vec<u8>> = Vec::with_capacity(layout.paths.len());
    for_each_labeling(probs, layout.edges, |labels, weight| {
        seen.clear();
        seen.extend(
            layout
                .paths
                .iter()
                .map(|path| path.iter().map(|&e| labels[e]).collect::<Vec<u8>>()),
        );
        seen.sort_unstable();
        seen.dedup();
        let z = seen.len();
        dist[z] = dist[z].clone() + weight;
    });
    Ok(dist)
}

/// `π_0, ..., π_n` for the symmetric case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiSequence {
    pub alphabet: u32,
    pub arity: u32,
    pub values: Vec<f64>,
}

impl PiSequence {
    pub fn get(&self, n: usize) -> f64 {
        self.values[n]
    }

    /// `E(Z_n) = N^n π_n`.
    pub fn expected_z(&self, n: usize) -> f64 {
        f64::from(self.alphabet).powi(n as i32) * self.values[n]
    }
}

pub fn pi_sequence(alphabet: u32, arity: u32, n_max: usize) -> Result<PiSequence> {
    if alphabet < 2 || arity < 2 {
        return Err(Error::InvalidParameter(format!(
            "need N, M >= 2, got N = {alphabet}, M = {arity}"
        )));
    }
    let inv_n = 1.0 / f64::from(alphabet);
    let mut values = Vec::with_capacity(n_max + 1);
    values.push(1.0);
    for _ in 0..n_max {
        let prev = *values.last().expect("nonempty");
        values.push(step(inv_n, prev, arity));
    }
    Ok(PiSequence {
        alphabet,
        arity,
        values,
    })
}

/// The attracting fixed point `γ ∈ (0, 1)` of `x -> 1 - (1 - x/N)^M`, which
/// exists only when `M > N`.
pub fn gamma_fixed_point(alphabet: u32, arity: u32) -> Result<f64> {
    if alphabet < 2 || arity < 2 {
        return Err(Error::InvalidParameter(format!(
            "need N, M >= 2, got N = {alphabet}, M = {arity}"
        )));
    }
    if arity <= alphabet {
        return Err(Error::NoInteriorFixedPoint { n: alphabet, m: arity });
    }
    let inv_n = 1.0 / f64::from(alphabet);
    // h(x) - x is positive on (0, γ) because h'(0) = M/N > 1, and negative at 1.
    Ok(bisect(0.0, 1.0, 1.0, |x| step(inv_n, x, arity) - x))
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn merge(mut self, other: KahanSum) -> KahanSum {
        self.add(other.sum);
        self.add(other.comp);
        self
    }

    fn value(self) -> f64 {
        self.sum + self.comp
    }
}

/// `E(Z_n) = Σ_{w ∈ {1..N}^n} a_w`.
pub fn expected_zn(p: &ProbVector, arity: u32, n: usize) -> Result<f64> {
    if arity < 2 {
        return Err(Error::InvalidParameter(format!("M must be >= 2, got {arity}")));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let words = u64::from(p.alphabet()).checked_pow(n as u32);
    if words.is_none_or(|w| w > MAX_EXPECTED_WORDS) {
        return Err(Error::BudgetExceeded(format!(
            "{}^{n} label words exceeds {MAX_EXPECTED_WORDS}",
            p.alphabet()
        )));
    }
    let probs = p.as_slice();
    // a over all suffixes of length n - 1, built by prepending one symbol at a time.
    let mut suffix = vec![1.0f64];
    for _ in 1..n {
        suffix = probs
            .iter()
            .flat_map(|&pl| suffix.iter().map(move |&a| step(pl, a, arity)))
            .collect();
    }
    // The final prepend is split by leading symbol; partial sums combine in order.
    let partials: Vec<KahanSum> = probs
        .par_iter()
        .map(|&pl| {
            let mut acc = KahanSum::default();
            for &a in &suffix {
                acc.add(step(pl, a, arity));
            }
            acc
        })
        .collect();
    Ok(partials.into_iter().fold(KahanSum::default(), KahanSum::merge).value())
}

/// `ln k!` for `k = 0..=n`.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = KahanSum::default();
    out.push(0.0);
    for k in 1..=n {
        acc.add((k as f64).ln());
        out.push(acc.value());
    }
    out
}

fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc as u64)
}

/// Natural log of `Σ_{k_1+...+k_N = n} multinomial(n; k) min{1, M^n Π p_i^{k_i}}`,
/// the frequency-class upper bound on `E(Z_n)`.
pub fn multinomial_bound_ln(p: &ProbVector, arity: u32, n: usize) -> Result<f64> {
    if arity < 2 {
        return Err(Error::InvalidParameter(format!("M must be >= 2, got {arity}")));
    }
    let parts = p.len();
    let classes = binomial_u64((n + parts - 1) as u64, (parts - 1) as u64);
    if classes.is_none_or(|c| c > MAX_COMPOSITIONS) {
        return Err(Error::BudgetExceeded(format!(
            "C({}, {}) digit-frequency classes exceeds {MAX_COMPOSITIONS}",
            n + parts - 1,
            parts - 1
        )));
    }
    let lnf = ln_factorials(n);
    let ln_p: Vec<f64> = p.as_slice().iter().map(|x| x.ln()).collect();
    let base = n as f64 * f64::from(arity).ln();

    let mut terms = Vec::with_capacity(classes.unwrap_or(0) as usize);
    let mut ks = vec![0usize; parts];
    compositions(n, 0, &mut ks, &mut |ks| {
        let ln_coeff = lnf[n] - ks.iter().map(|&k| lnf[k]).sum::<f64>();
        let ln_mass = base + ks.iter().zip(&ln_p).map(|(&k, lp)| k as f64 * lp).sum::<f64>();
        terms.push(ln_coeff + ln_mass.min(0.0));
    });
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut acc = KahanSum::default();
    for t in &terms {
        acc.add((t - max).exp());
    }
    Ok(max + acc.value().ln())
}

/// The bound itself, `exp` of [`multinomial_bound_ln`]; overflows to infinity for large `n`.
pub fn multinomial_bound(p: &ProbVector, arity: u32, n: usize) -> Result<f64> {
    multinomial_bound_ln(p, arity, n).map(f64::exp)
}

fn compositions<F: FnMut(&[usize])>(remaining: usize, idx: usize, ks: &mut [usize], visit: &mut F) {
    if idx == ks.len() - 1 {
        ks[idx] = remaining;
        visit(ks);
        return;
    }
    for k in 0..=remaining {
        ks[idx] = k;
        compositions(remaining - k, idx + 1, ks, visit);
    }
}
