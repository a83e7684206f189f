//! Lower and upper bounds on the dimension of the random subset, and the
//! parameter regimes in which the dimension is known exactly.
//!
//! With `g(λ) = Σ p_i^λ ln(M p_i)` and `φ(x) = x ln M + ln Σ p_i^x`, the upper
//! bound is `-φ(λ)/ln r` at the root `λ` of `g`. A root in `[0, 1]` exists when
//! `Π p_i^{-p_i} ≤ M ≤ (Π p_i)^{-1/N}`; outside that window only the trivial
//! covering bound is available.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::check_ratio;
use crate::prob::ProbVector;
use crate::roots::bisect;

/// Relative tolerance when comparing `M` with the sandwich thresholds.
pub const SANDWICH_TOL: f64 = 1e-9;
/// Tolerance for `M p_i = 1` in the degenerate case of the `λ` equation.
pub const DEGENERATE_TOL: f64 = 1e-12;

fn check_arity(arity: u32) -> Result<()> {
    if arity < 2 {
        return Err(Error::InvalidParameter(format!("M must be >= 2, got {arity}")));
    }
    Ok(())
}

fn check_inputs(p: &ProbVector, arity: u32, ratio: f64) -> Result<()> {
    check_arity(arity)?;
    check_ratio(p.alphabet(), ratio)
}

/// `min{-ln M / ln r, ln(Σ p_i²) / ln r}`.
pub fn lower_bound(p: &ProbVector, arity: u32, ratio: f64) -> Result<f64> {
    check_inputs(p, arity, ratio)?;
    let ln_r = ratio.ln();
    Ok((-f64::from(arity).ln() / ln_r).min(p.sum_of_squares().ln() / ln_r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sandwich {
    Below,
    Within,
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichCheck {
    pub status: Sandwich,
    /// `Π p_i^{-p_i}`.
    pub entropy: f64,
    /// `(Π p_i)^{-1/N}`.
    pub geometric: f64,
}

pub fn sandwich_check(p: &ProbVector, arity: u32) -> SandwichCheck {
    let entropy = p.entropy().exp();
    let mean_ln = p.as_slice().iter().map(|x| x.ln()).sum::<f64>() / p.len() as f64;
    let geometric = (-mean_ln).exp();
    let m = f64::from(arity);
    let status = if m < entropy * (1.0 - SANDWICH_TOL) {
        Sandwich::Below
    } else if m > geometric * (1.0 + SANDWICH_TOL) {
        Sandwich::Above
    } else {
        Sandwich::Within
    };
    SandwichCheck {
        status,
        entropy,
        geometric,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaSolution {
    pub lambda: f64,
    /// `M p_i = 1` for every `i`; `g` vanishes identically and `λ = 1/2` is a convention.
    pub degenerate: bool,
    /// `|g(λ)|`.
    pub residual: f64,
}

/// `g(λ) = Σ p_i^λ ln(M p_i)`.
pub fn lambda_equation(p: &ProbVector, arity: u32, lambda: f64) -> f64 {
    let ln_m = f64::from(arity).ln();
    p.as_slice().iter().map(|&x| x.powf(lambda) * (ln_m + x.ln())).sum()
}

/// The root of `g` in `[0, 1]`.
pub fn solve_lambda(p: &ProbVector, arity: u32) -> Result<LambdaSolution> {
    check_arity(arity)?;
    let check = sandwich_check(p, arity);
    if check.status != Sandwich::Within {
        return Err(Error::OutsideSandwich {
            m: arity,
            entropy: check.entropy,
            geometric: check.geometric,
        });
    }
    let m = f64::from(arity);
    if p.as_slice().iter().all(|x| (m * x - 1.0).abs() <= DEGENERATE_TOL) {
        return Ok(LambdaSolution {
            lambda: 0.5,
            degenerate: true,
            residual: 0.0,
        });
    }
    let g = |x: f64| lambda_equation(p, arity, x);
    // g(0) <= 0 <= g(1) inside the sandwich; g is increasing on [0, 1].
    let lambda = if g(0.0) >= 0.0 {
        0.0
    } else if g(1.0) <= 0.0 {
        1.0
    } else {
        bisect(0.0, 1.0, -1.0, g)
    };
    Ok(LambdaSolution {
        lambda,
        degenerate: false,
        residual: g(lambda).abs(),
    })
}

/// `φ(x) = x ln M + ln Σ p_i^x`.
pub fn phi(p: &ProbVector, arity: u32, x: f64) -> f64 {
    x * f64::from(arity).ln() + p.as_slice().iter().map(|q| q.powf(x)).sum::<f64>().ln()
}

/// `min{ln N, ln M} / (-ln r)`: at most `min{N, M}^n` level-`n` intervals are occupied.
pub fn trivial_upper(p: &ProbVector, arity: u32, ratio: f64) -> Result<f64> {
    check_inputs(p, arity, ratio)?;
    Ok(f64::from(p.alphabet().min(arity)).ln() / -ratio.ln())
}

/// `-φ(λ)/ln r` inside the sandwich, the trivial bound outside it.
pub fn upper_bound(p: &ProbVector, arity: u32, ratio: f64) -> Result<f64> {
    check_inputs(p, arity, ratio)?;
    match solve_lambda(p, arity) {
        Ok(sol) => Ok(-phi(p, arity, sol.lambda) / ratio.ln()),
        Err(Error::OutsideSandwich { .. }) => trivial_upper(p, arity, ratio),
        Err(e) => Err(e),
    }
}

/// `ξ(p) = ln(Mp) / (ln p - ln(1 - p))` for two maps with weights `(p, 1 - p)`.
///
/// Requires `p(1 - p) ≤ M^{-2}`. At `M = 2, p = 1/2` the quotient is `0/0` and
/// `ξ = 1/2`.
pub fn xi(p: f64, arity: u32) -> Result<f64> {
    check_arity(arity)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(format!("p = {p} is not in (0, 1)")));
    }
    let m = f64::from(arity);
    if p * (1.0 - p) > (1.0 + SANDWICH_TOL) / (m * m) {
        return Err(Error::OutsideSandwich {
            m: arity,
            entropy: (-(p * p.ln() + (1.0 - p) * (1.0 - p).ln())).exp(),
            geometric: (p * (1.0 - p)).powf(-0.5),
        });
    }
    let den = p.ln() - (1.0 - p).ln();
    if den.abs() <= DEGENERATE_TOL {
        return Ok(0.5);
    }
    Ok((m * p).ln() / den)
}

/// `-(ξ ln ξ + (1 - ξ) ln(1 - ξ)) / (-ln r)`, the two-map form of the upper bound.
pub fn two_map_upper(p: f64, arity: u32, ratio: f64) -> Result<f64> {
    let x = xi(p, arity)?;
    let h = |t: f64| if t > 0.0 { -t * t.ln() } else { 0.0 };
    Ok((h(x) + h(1.0 - x)) / -ratio.ln())
}

/// Why the dimension is known exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExactReason {
    /// `M ≤ min{Π p_i^{-p_i}, 1/Σ p_i²}`: the dimension is `-ln M/ln r`.
    #[serde(rename = "small-M")]
    SmallM,
    /// `M ≥ N` and `p` uniform: the dimension is `dim C`.
    #[serde(rename = "symmetric")]
    Symmetric,
    /// `N = M = 2`, `p = (1/2, 1/2)`: the two bounds meet at `dim C`.
    #[serde(rename = "m2-identity")]
    M2Identity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: u32,
    pub m: u32,
    pub r: f64,
    pub p: ProbVector,
    pub lower: f64,
    pub upper: f64,
    pub trivial_upper: f64,
    pub sandwich: Sandwich,
    pub entropy_threshold: f64,
    pub geometric_threshold: f64,
    pub lambda: Option<f64>,
    pub lambda_degenerate: bool,
    pub exact: Option<f64>,
    pub exact_reason: Option<ExactReason>,
}

/// Tolerance used to decide that `p` is uniform.
const UNIFORM_TOL: f64 = 1e-12;

pub fn classify(p: &ProbVector, arity: u32, ratio: f64) -> Result<BoundsReport> {
    check_inputs(p, arity, ratio)?;
    let n = p.alphabet();
    let lower = lower_bound(p, arity, ratio)?;
    let trivial = trivial_upper(p, arity, ratio)?;
    let check = sandwich_check(p, arity);
    let sol = solve_lambda(p, arity).ok();
    let upper = match sol {
        Some(s) => -phi(p, arity, s.lambda) / ratio.ln(),
        None => trivial,
    };
    let uniform = p.is_uniform(UNIFORM_TOL);
    let ln_r = ratio.ln();
    let m = f64::from(arity);
    let (exact, exact_reason) = if n == 2 && arity == 2 && uniform {
        (Some(-2f64.ln() / ln_r), Some(ExactReason::M2Identity))
    } else if arity >= n && uniform {
        (Some(-f64::from(n).ln() / ln_r), Some(ExactReason::Symmetric))
    } else if m <= check.entropy.min(1.0 / p.sum_of_squares()) * (1.0 + SANDWICH_TOL) {
        (Some(-m.ln() / ln_r), Some(ExactReason::SmallM))
    } else {
        (None, None)
    };
    Ok(BoundsReport {
        n,
        m: arity,
        r: ratio,
        p: p.clone(),
        lower,
        upper,
        trivial_upper: trivial,
        sandwich: check.status,
        entropy_threshold: check.entropy,
        geometric_threshold: check.geometric,
        lambda: sol.map(|s| s.lambda),
        lambda_degenerate: sol.is_some_and(|s| s.degenerate),
        exact,
        exact_reason,
    })
}
