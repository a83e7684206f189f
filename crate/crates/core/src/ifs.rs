//! Equicontractive IFS on `[0, 1]` and its basic intervals.
//!
//! Map `i` sends `[0, 1]` onto `[b_i, b_i + r]`. An orientation-preserving map
//! is `x -> b_i + r x`; a reversing one is `x -> b_i + r (1 - x)`. Keeping `b_i`
//! as the left endpoint in both cases means the layout validation does not
//! depend on orientations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolic::LabelWord;

/// Slack for comparing user-supplied layouts (e.g. `r = 0.333333` against 1/3).
const LAYOUT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Preserving,
    Reversing,
}

/// The IFS `{f_1, ..., f_N}` with common ratio `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawIfsSpec", into = "RawIfsSpec")]
pub struct IfsSpec {
    maps: u32,
    ratio: f64,
    translations: Vec<f64>,
    orientations: Vec<Orientation>,
}

/// JSON shape of [`IfsSpec`]: `{"N": 2, "r": 0.333, "translations": [...], "orientations": [1, -1]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIfsSpec {
    #[serde(rename = "N")]
    n: u32,
    r: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    translations: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    orientations: Option<Vec<i8>>,
}

impl TryFrom<RawIfsSpec> for IfsSpec {
    type Error = Error;

    fn try_from(raw: RawIfsSpec) -> Result<Self> {
        let mut spec = match raw.translations {
            Some(b) => IfsSpec::with_translations(raw.n, raw.r, b)?,
            None => IfsSpec::canonical(raw.n, raw.r)?,
        };
        if let Some(o) = raw.orientations {
            let o = o
                .into_iter()
                .map(|v| match v {
                    1 => Ok(Orientation::Preserving),
                    -1 => Ok(Orientation::Reversing),
                    other => Err(Error::InvalidParameter(format!(
                        "orientation must be +1 or -1, got {other}"
                    ))),
                })
                .collect::<Result<Vec<_>>>()?;
            spec = spec.with_orientations(o)?;
        }
        Ok(spec)
    }
}

impl From<IfsSpec> for RawIfsSpec {
    fn from(spec: IfsSpec) -> Self {
        let all_preserving = spec.orientations.iter().all(|&o| o == Orientation::Preserving);
        RawIfsSpec {
            n: spec.maps,
            r: spec.ratio,
            translations: Some(spec.translations),
            orientations: (!all_preserving).then(|| {
                spec.orientations
                    .iter()
                    .map(|o| match o {
                        Orientation::Preserving => 1,
                        Orientation::Reversing => -1,
                    })
                    .collect()
            }),
        }
    }
}

impl IfsSpec {
    /// Equally spaced orientation-preserving maps with `f_1(0) = 0` and `f_N(1) = 1`.
    pub fn canonical(maps: u32, ratio: f64) -> Result<Self> {
        check_ratio(maps, ratio)?;
        let gap = (1.0 - ratio) / f64::from(maps - 1);
        let translations = (0..maps).map(|i| f64::from(i) * gap).collect();
        IfsSpec::with_translations(maps, ratio, translations)
    }

    /// Custom left endpoints; they must be increasing with non-overlapping images in `[0, 1]`.
    pub fn with_translations(maps: u32, ratio: f64, translations: Vec<f64>) -> Result<Self> {
        check_ratio(maps, ratio)?;
        if translations.len() != maps as usize {
            return Err(Error::InvalidParameter(format!(
                "expected {maps} translations, got {}",
                translations.len()
            )));
        }
        for (i, &b) in translations.iter().enumerate() {
            if !b.is_finite() || b < -LAYOUT_TOL || b + ratio > 1.0 + LAYOUT_TOL {
                return Err(Error::InvalidParameter(format!(
                    "image of map {} is [{b}, {}], not inside [0, 1]",
                    i + 1,
                    b + ratio
                )));
            }
        }
        for (i, pair) in translations.windows(2).enumerate() {
            if pair[1] < pair[0] + ratio - LAYOUT_TOL {
                return Err(Error::InvalidParameter(format!(
                    "images of maps {} and {} overlap or are out of order",
                    i + 1,
                    i + 2
                )));
            }
        }
        Ok(IfsSpec {
            maps,
            ratio,
            translations,
            orientations: vec![Orientation::Preserving; maps as usize],
        })
    }

    pub fn with_orientations(mut self, orientations: Vec<Orientation>) -> Result<Self> {
        if orientations.len() != self.maps as usize {
            return Err(Error::InvalidParameter(format!(
                "expected {} orientations, got {}",
                self.maps,
                orientations.len()
            )));
        }
        self.orientations = orientations;
        Ok(self)
    }

    pub fn maps(&self) -> u32 {
        self.maps
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn translations(&self) -> &[f64] {
        &self.translations
    }

    pub fn orientations(&self) -> &[Orientation] {
        &self.orientations
    }

    /// Slope and offset of map `symbol` (1-based).
    fn affine(&self, symbol: usize) -> (f64, f64) {
        let b = self.translations[symbol - 1];
        match self.orientations[symbol - 1] {
            Orientation::Preserving => (self.ratio, b),
            Orientation::Reversing => (-self.ratio, b + self.ratio),
        }
    }

    /// Apply map `symbol` (1-based) to a point.
    pub fn apply(&self, symbol: usize, x: f64) -> f64 {
        let (a, c) = self.affine(symbol);
        a * x + c
    }

    /// The basic interval `f_{w_1} ∘ ... ∘ f_{w_n}([0, 1])`.
    pub fn interval(&self, word: &LabelWord) -> Result<Interval> {
        self.interval_of_symbols(word.symbols())
    }

    pub(crate) fn interval_of_symbols(&self, symbols: &[u8]) -> Result<Interval> {
        // Compose left to right: (a, c) represents x -> a x + c.
        let (mut a, mut c) = (1.0f64, 0.0f64);
        for &s in symbols {
            if s == 0 || u32::from(s) > self.maps {
                return Err(Error::SymbolOutOfRange {
                    symbol: u32::from(s),
                    size: self.maps,
                });
            }
            let (sa, sc) = self.affine(usize::from(s));
            c += a * sc;
            a *= sa;
        }
        let left = if a >= 0.0 { c } else { c + a };
        Ok(Interval { left, length: a.abs() })
    }

    /// `dim C = -log N / log r`, which is 1 when `r = 1/N`.
    pub fn dim_c(&self) -> f64 {
        -(f64::from(self.maps)).ln() / self.ratio.ln()
    }
}

pub(crate) fn check_ratio(maps: u32, ratio: f64) -> Result<()> {
    if !(2..=255).contains(&maps) {
        return Err(Error::InvalidParameter(format!("N must be in 2..=255, got {maps}")));
    }
    let limit = 1.0 / f64::from(maps);
    if !(ratio > 0.0 && ratio <= limit + LAYOUT_TOL) {
        return Err(Error::InvalidParameter(format!(
            "contraction ratio r = {ratio} must lie in (0, 1/N] = (0, {limit}]"
        )));
    }
    Ok(())
}

/// A closed interval `[left, left + length]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub left: f64,
    pub length: f64,
}

impl Interval {
    pub fn right(&self) -> f64 {
        self.left + self.length
    }

    pub fn midpoint(&self) -> f64 {
        self.left + 0.5 * self.length
    }

    /// Containment up to an absolute slack `tol`.
    pub fn contains(&self, other: &Interval, tol: f64) -> bool {
        other.left >= self.left - tol && other.right() <= self.right() + tol
    }

    /// True if the open interiors intersect (beyond slack `tol`).
    pub fn interiors_overlap(&self, other: &Interval, tol: f64) -> bool {
        self.left.max(other.left) < self.right().min(other.right()) - tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(n: u32, s: &[u8]) -> LabelWord {
        LabelWord::new(n, s.to_vec()).unwrap()
    }

    #[test]
    fn canonical_layouts() {
        let t = IfsSpec::canonical(2, 1.0 / 3.0).unwrap();
        assert_eq!(t.translations()[0], 0.0);
        assert!((t.translations()[1] - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(IfsSpec::canonical(2, 0.5).unwrap().translations(), &[0.0, 0.5]);
        let t = IfsSpec::canonical(3, 0.2).unwrap();
        for (got, want) in t.translations().iter().zip([0.0, 0.4, 0.8]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!(IfsSpec::canonical(2, 0.6).is_err());
        assert!(IfsSpec::canonical(3, 0.0).is_err());
    }

    #[test]
    fn interval_examples() {
        let spec = IfsSpec::canonical(2, 1.0 / 3.0).unwrap();
        let i = spec.interval(&word(2, &[1, 1])).unwrap();
        assert!((i.left - 0.0).abs() < 1e-15 && (i.right() - 1.0 / 9.0).abs() < 1e-15);
        let i = spec.interval(&word(2, &[1, 2])).unwrap();
        assert!((i.left - 2.0 / 9.0).abs() < 1e-15 && (i.right() - 3.0 / 9.0).abs() < 1e-15);

        let flipped = spec
            .with_orientations(vec![Orientation::Reversing, Orientation::Preserving])
            .unwrap();
        let i = flipped.interval(&word(2, &[1, 2])).unwrap();
        assert!(i.left.abs() < 1e-15 && (i.right() - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn empty_word_is_unit_interval() {
        let spec = IfsSpec::canonical(3, 0.25).unwrap();
        let i = spec.interval(&LabelWord::empty(3).unwrap()).unwrap();
        assert_eq!((i.left, i.length), (0.0, 1.0));
    }

    #[test]
    fn symbol_out_of_range() {
        let spec = IfsSpec::canonical(2, 0.25).unwrap();
        let bad = LabelWord::new(3, vec![3]).unwrap();
        assert!(matches!(spec.interval(&bad), Err(Error::SymbolOutOfRange { .. })));
    }

    #[test]
    fn dimension_of_c() {
        assert!((IfsSpec::canonical(2, 1.0 / 3.0).unwrap().dim_c() - 0.630_929_753_571_457_4).abs() < 1e-12);
        assert_eq!(IfsSpec::canonical(2, 0.5).unwrap().dim_c(), 1.0);
        let d = IfsSpec::canonical(3, 0.25).unwrap().dim_c();
        assert!((d - 3f64.ln() / 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn custom_layout_validation() {
        assert!(IfsSpec::with_translations(2, 0.25, vec![0.0, 0.5]).is_ok());
        assert!(IfsSpec::with_translations(2, 0.25, vec![0.5, 0.0]).is_err());
        assert!(IfsSpec::with_translations(2, 0.25, vec![0.0, 0.1]).is_err());
        assert!(IfsSpec::with_translations(2, 0.25, vec![0.0, 0.8]).is_err());
        assert!(IfsSpec::with_translations(2, 0.25, vec![0.0]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let spec: IfsSpec = serde_json::from_str(r#"{"N": 2, "r": 0.25, "orientations": [-1, 1]}"#).unwrap();
        assert_eq!(spec.orientations()[0], Orientation::Reversing);
        assert_eq!(spec.translations(), &[0.0, 0.75]);
        let back: IfsSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
        assert!(serde_json::from_str::<IfsSpec>(r#"{"N": 2, "r": 0.7}"#).is_err());
        assert!(serde_json::from_str::<IfsSpec>(r#"{"N": 2, "r": 0.2, "extra": 1}"#).is_err());
    }
}
