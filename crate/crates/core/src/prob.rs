use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `Σ p_i = 1`.
pub const SUM_TOL: f64 = 1e-12;

/// Edge-label distribution `(p_1, ..., p_N)` with every `p_i` in `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.len() < 2 || p.len() > 255 {
            return Err(Error::InvalidProbability(format!(
                "need between 2 and 255 entries, got {}",
                p.len()
            )));
        }
        if let Some((i, v)) = p.iter().enumerate().find(|(_, v)| !(**v > 0.0 && **v < 1.0)) {
            return Err(Error::InvalidProbability(format!(
                "entry p_{} = {v} is not in the open interval (0, 1)",
                i + 1
            )));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidProbability(format!(
                "entries sum to {sum}, not 1 (tolerance {SUM_TOL:e})"
            )));
        }
        Ok(ProbVector(p))
    }

    /// `(1/N, ..., 1/N)`.
    pub fn uniform(n: u32) -> Result<Self> {
        ProbVector::new(vec![1.0 / f64::from(n); n as usize])
    }

    /// The two-symbol vector `(p, 1 - p)`.
    pub fn two(p: f64) -> Result<Self> {
        ProbVector::new(vec![p, 1.0 - p])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Alphabet size `N`.
    pub fn alphabet(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Probability of label `symbol` (1-based).
    pub fn get(&self, symbol: u8) -> f64 {
        self.0[usize::from(symbol) - 1]
    }

    pub fn is_uniform(&self, tol: f64) -> bool {
        let u = 1.0 / self.0.len() as f64;
        self.0.iter().all(|p| (p - u).abs() <= tol)
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.0.iter().map(|p| p * p).sum()
    }

    /// Shannon entropy `-Σ p_i ln p_i` in nats.
    pub fn entropy(&self) -> f64 {
        -self.0.iter().map(|p| p * p.ln()).sum::<f64>()
    }

    /// Cumulative sums, last entry forced to 1.
    pub(crate) fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out: Vec<f64> = self
            .0
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        if let Some(last) = out.last_mut() {
            *last = 1.0;
        }
        out
    }
}

impl TryFrom<Vec<f64>> for ProbVector {
    type Error = Error;

    fn try_from(p: Vec<f64>) -> Result<Self> {
        ProbVector::new(p)
    }
}

impl From<ProbVector> for Vec<f64> {
    fn from(p: ProbVector) -> Self {
        p.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ProbVector::new(vec![0.5, 0.5]).is_ok());
        assert!(ProbVector::new(vec![0.5, 0.4]).is_err());
        assert!(ProbVector::new(vec![1.0, 0.0]).is_err());
        assert!(ProbVector::new(vec![1.0]).is_err());
        assert!(ProbVector::new(vec![f64::NAN, 0.5]).is_err());
        assert!(ProbVector::uniform(7).is_ok());
        assert!(ProbVector::new(vec![0.2, 0.2, 0.6]).is_ok());
    }

    #[test]
    fn summaries() {
        let p = ProbVector::uniform(4).unwrap();
        assert!(p.is_uniform(1e-15));
        assert!((p.sum_of_squares() - 0.25).abs() < 1e-15);
        assert!((p.entropy() - 4f64.ln()).abs() < 1e-15);
        let q = ProbVector::two(0.3).unwrap();
        assert!(!q.is_uniform(1e-12));
        assert_eq!(q.get(2), 0.7);
        assert_eq!(*q.cumulative().last().unwrap(), 1.0);
    }
}
