use std::ops::RangeInclusive;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::IfsSpec;
use crate::prob::ProbVector;

use super::evolve::{evolve, evolve_to_depth};
use super::occupancy::OccupancyMap;
use super::source::splitmix64;

/// Largest `Z_n` a single trial may reach before it is aborted.
pub const MAX_OCCUPIED_WORDS: usize = 1 << 22;

/// Upper limit on `depth × trials`.
pub const MAX_TRIAL_WORK: u64 = 1_000_000_000;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed of trial `t`: element `t + 1` of the SplitMix64 sequence started at
/// `master_seed`. Each trial then runs its own ChaCha8 stream, so results do
/// not depend on how trials are scheduled across threads.
pub fn trial_seed(master_seed: u64, trial: u64) -> u64 {
    splitmix64(master_seed.wrapping_add(GOLDEN_GAMMA.wrapping_mul(trial)))
}

/// `Z_0, ..., Z_depth` for every trial, in trial order.
pub fn run_trial_traces(
    p: &ProbVector,
    arity: u32,
    depth: usize,
    trials: u64,
    master_seed: u64,
) -> Result<Vec<Vec<u64>>> {
    check_budget(arity, depth, trials)?;
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(master_seed, t));
            let mut occ = OccupancyMap::root(p.alphabet(), arity)?;
            let mut trace = Vec::with_capacity(depth + 1);
            trace.push(occ.z() as u64);
            for _ in 0..depth {
                occ = evolve(&occ, p, &mut rng)?;
                if occ.z() > MAX_OCCUPIED_WORDS {
                    return Err(Error::BudgetExceeded(format!(
                        "Z_{} = {} exceeds the per-trial limit of {MAX_OCCUPIED_WORDS} words",
                        occ.level(),
                        occ.z()
                    )));
                }
                trace.push(occ.z() as u64);
            }
            Ok(trace)
        })
        .collect()
}

/// Occupancy at levels `0..=depth` for a single trial, seeded exactly as in [`run_trial_traces`].
pub fn trial_occupancies(
    p: &ProbVector,
    arity: u32,
    depth: usize,
    master_seed: u64,
    trial: u64,
) -> Result<Vec<OccupancyMap>> {
    check_budget(arity, depth, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(master_seed, trial));
    evolve_to_depth(p, arity, depth, &mut rng)
}

fn check_budget(arity: u32, depth: usize, trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let fits = u128::from(arity)
        .checked_pow(depth as u32)
        .is_some_and(|t| t < 1u128 << 63);
    if !fits {
        return Err(Error::BudgetExceeded(format!(
            "M^depth = {arity}^{depth} path count does not fit below 2^63"
        )));
    }
    let work = (depth as u64).max(1).saturating_mul(trials);
    if work > MAX_TRIAL_WORK {
        return Err(Error::BudgetExceeded(format!(
            "depth x trials = {work} exceeds {MAX_TRIAL_WORK}"
        )));
    }
    Ok(())
}

/// Per-level statistics of `Z_n` over all trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelStats {
    pub level: usize,
    pub mean: f64,
    /// Unbiased sample variance; zero for a single trial.
    pub variance: f64,
    pub min: u64,
    pub max: u64,
}

impl LevelStats {
    pub fn std_error(&self, trials: u64) -> f64 {
        (self.variance / trials as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub alphabet: u32,
    pub arity: u32,
    pub ratio: f64,
    pub depth: usize,
    pub trials: u64,
    pub master_seed: u64,
    pub levels: Vec<LevelStats>,
}

impl TrialSummary {
    pub fn mean_series(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.mean).collect()
    }

    /// Dimension estimate from the mean occupancy over `window`.
    pub fn estimate(&self, window: RangeInclusive<usize>) -> Result<f64> {
        estimate_dim(&self.mean_series(), self.ratio, window)
    }
}

/// Run `trials` independent occupancy evolutions to `depth` and aggregate `Z_n`.
pub fn run_trials(
    spec: &IfsSpec,
    p: &ProbVector,
    arity: u32,
    depth: usize,
    trials: u64,
    master_seed: u64,
) -> Result<TrialSummary> {
    if spec.maps() != p.alphabet() {
        return Err(Error::InvalidParameter(format!(
            "IFS has {} maps but p has {} entries",
            spec.maps(),
            p.len()
        )));
    }
    let traces = run_trial_traces(p, arity, depth, trials, master_seed)?;
    Ok(TrialSummary {
        alphabet: p.alphabet(),
        arity,
        ratio: spec.ratio(),
        depth,
        trials,
        master_seed,
        levels: summarize(&traces, depth),
    })
}

fn summarize(traces: &[Vec<u64>], depth: usize) -> Vec<LevelStats> {
    let n = traces.len() as f64;
    (0..=depth)
        .map(|level| {
            let values = traces.iter().map(|t| t[level]);
            let mean = values.clone().map(|z| z as f64).sum::<f64>() / n;
            let variance = if traces.len() > 1 {
                values.clone().map(|z| (z as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            LevelStats {
                level,
                mean,
                variance,
                min: values.clone().min().unwrap_or(0),
                max: values.max().unwrap_or(0),
            }
        })
        .collect()
}

/// Least-squares slope of `ln Z_n` against `n` over `window`, divided by `-ln r`.
///
/// `z_series[n]` is the (mean) occupancy at level `n`.
pub fn estimate_dim(z_series: &[f64], ratio: f64, window: RangeInclusive<usize>) -> Result<f64> {
    let (lo, hi) = (*window.start(), *window.end());
    if hi >= z_series.len() {
        return Err(Error::InvalidParameter(format!(
            "window {lo}..={hi} exceeds the series (levels 0..={})",
            z_series.len().saturating_sub(1)
        )));
    }
    if hi <= lo {
        return Err(Error::Degenerate(format!("window {lo}..={hi} has fewer than 2 levels")));
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidParameter(format!("ratio {ratio} not in (0, 1)")));
    }
    let points: Vec<(f64, f64)> = (lo..=hi).map(|n| (n as f64, z_series[n])).collect();
    if let Some((n, z)) = points.iter().find(|(_, z)| z.is_nan() || *z < 1.0) {
        return Err(Error::InvalidParameter(format!("Z_{n} = {z} is below 1")));
    }
    let k = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_y = points.iter().map(|p| p.1.ln()).sum::<f64>() / k;
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(sxy, sxx), (x, z)| {
        let dx = x - mean_x;
        (sxy + dx * (z.ln() - mean_y), sxx + dx * dx)
    });
    Ok(sxy / sxx / -ratio.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_geometric_growth() {
        let z: Vec<f64> = (0..12).map(|n| 2f64.powi(n)).collect();
        let d = estimate_dim(&z, 1.0 / 3.0, 2..=11).unwrap();
        assert!((d - 2f64.ln() / 3f64.ln()).abs() < 1e-12);
        let flat = vec![1.0; 8];
        assert_eq!(estimate_dim(&flat, 1.0 / 3.0, 0..=7).unwrap(), 0.0);
    }

    #[test]
    fn window_errors() {
        let z = vec![1.0, 2.0, 4.0];
        assert!(matches!(estimate_dim(&z, 0.3, 1..=1), Err(Error::Degenerate(_))));
        assert!(estimate_dim(&z, 0.3, 0..=3).is_err());
        assert!(estimate_dim(&[1.0, 0.5], 0.3, 0..=1).is_err());
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        assert_eq!(trial_seed(42, 0), splitmix64(42));
        assert_ne!(trial_seed(42, 1), trial_seed(42, 2));
        assert_ne!(trial_seed(42, 0), trial_seed(43, 0));
    }

    #[test]
    fn single_trial_is_deterministic() {
        let spec = IfsSpec::canonical(2, 1.0 / 3.0).unwrap();
        let p = ProbVector::uniform(2).unwrap();
        let a = run_trials(&spec, &p, 2, 10, 1, 5).unwrap();
        let b = run_trials(&spec, &p, 2, 10, 1, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.levels[0].mean, 1.0);
        assert_eq!(a.levels[3].variance, 0.0);
    }

    #[test]
    fn budget_refusals() {
        let p = ProbVector::uniform(2).unwrap();
        assert!(run_trial_traces(&p, 2, 63, 1, 0).unwrap_err().is_budget());
        assert!(run_trial_traces(&p, 2, 10, MAX_TRIAL_WORK, 0).unwrap_err().is_budget());
        assert!(run_trial_traces(&p, 2, 10, 0, 0).is_err());
    }

    #[test]
    fn spec_and_vector_must_agree() {
        let spec = IfsSpec::canonical(3, 0.25).unwrap();
        let p = ProbVector::uniform(2).unwrap();
        assert!(run_trials(&spec, &p, 2, 3, 1, 0).is_err());
    }
}
