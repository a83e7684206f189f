use cantorflip::bounds::{classify, lower_bound, two_map_upper, upper_bound};
use cantorflip::detfrac::{dim_fm, graph_words, level_of, rho, sft_words, tree_words, DeterministicSpec};
use cantorflip::exact::{a_trace, expected_zn, gamma_fixed_point, multinomial_bound_ln, pi_sequence, RecursionState};
use cantorflip::stochastic::{energy_estimate, run_trials, trial_occupancies, LevelStats};
use cantorflip::{BoundsReport, IfsSpec, LabelWord, ProbVector};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::Model;
use crate::output::{csv_table, fmt_num, fmt_opt};
use crate::{CliError, Result};

pub const TABLE1_M: [u64; 8] = [2, 3, 4, 6, 7, 14, 15, 30];
pub const TABLE1_RATIO: f64 = 1.0 / 3.0;

pub fn cmd_bounds(model: &Model) -> Result<BoundsReport> {
    Ok(classify(&model.p, model.m, model.ratio()?)?)
}

pub fn bounds_csv(r: &BoundsReport) -> String {
    let p = r.p.as_slice().iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(";");
    let reason = r
        .exact_reason
        .map(|e| {
            serde_json::to_value(e)
                .expect("tag")
                .as_str()
                .unwrap_or_default()
                .to_owned()
        })
        .unwrap_or_default();
    let sandwich = serde_json::to_value(r.sandwich)
        .expect("tag")
        .as_str()
        .unwrap_or_default()
        .to_owned();
    csv_table(
        &[
            "N",
            "M",
            "r",
            "p",
            "lower",
            "upper",
            "trivial_upper",
            "sandwich",
            "lambda",
            "exact",
            "exact_reason",
        ],
        [vec![
            r.n.to_string(),
            r.m.to_string(),
            fmt_num(r.r),
            p,
            fmt_num(r.lower),
            fmt_num(r.upper),
            fmt_num(r.trivial_upper),
            sandwich,
            fmt_opt(r.lambda),
            fmt_opt(r.exact),
            reason,
        ]],
    )
}

/// One row of the `p = 1/m`, `N = M = 2`, `r = 1/3` comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub m: u64,
    pub p: f64,
    pub lower: f64,
    pub dim_fm: f64,
    pub upper: f64,
}

pub fn cmd_table1() -> Result<Vec<Table1Row>> {
    TABLE1_M
        .iter()
        .map(|&m| {
            let p = 1.0 / m as f64;
            let probs = ProbVector::two(p)?;
            Ok(Table1Row {
                m,
                p,
                lower: lower_bound(&probs, 2, TABLE1_RATIO)?,
                dim_fm: dim_fm(m, TABLE1_RATIO)?,
                upper: upper_bound(&probs, 2, TABLE1_RATIO)?,
            })
        })
        .collect()
}

pub fn table1_csv(rows: &[Table1Row]) -> String {
    csv_table(
        &["m", "p", "lower", "dim_fm", "upper"],
        rows.iter().map(|r| {
            vec![
                r.m.to_string(),
                fmt_num(r.p),
                fmt_num(r.lower),
                fmt_num(r.dim_fm),
                fmt_num(r.upper),
            ]
        }),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Figure1Row {
    pub p: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Both bounds for `N = M = 2` on the grid `p_k = k/(grid + 1)`, `k = 1..=grid`.
pub fn cmd_figure1(grid: usize, ratio: f64) -> Result<Vec<Figure1Row>> {
    if grid < 3 {
        return Err(CliError::Usage(format!("grid must be at least 3, got {grid}")));
    }
    IfsSpec::canonical(2, ratio)?;
    (1..=grid)
        .map(|k| {
            let p = k as f64 / (grid + 1) as f64;
            Ok(Figure1Row {
                p,
                lower: lower_bound(&ProbVector::two(p)?, 2, ratio)?,
                upper: two_map_upper(p, 2, ratio)?,
            })
        })
        .collect()
}

pub fn figure1_csv(rows: &[Figure1Row]) -> String {
    csv_table(
        &["p", "lower", "upper"],
        rows.iter()
            .map(|r| vec![fmt_num(r.p), fmt_num(r.lower), fmt_num(r.upper)]),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulateParams {
    pub depth: usize,
    pub trials: u64,
    pub seed: u64,
    /// Inclusive regression window; defaults to `depth/2..=depth`.
    pub window: Option<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    /// SHA-256 of the resolved experiment (IFS, p, M, depth, trials, seed, window).
    pub config_hash: String,
    pub ifs: IfsSpec,
    pub p: ProbVector,
    #[serde(rename = "M")]
    pub m: u32,
    pub depth: usize,
    pub trials: u64,
    pub master_seed: u64,
    pub window: [usize; 2],
    pub estimate: f64,
    pub levels: Vec<LevelStats>,
}

#[derive(Serialize)]
struct HashedExperiment<'a> {
    ifs: &'a IfsSpec,
    p: &'a ProbVector,
    #[serde(rename = "M")]
    m: u32,
    depth: usize,
    trials: u64,
    master_seed: u64,
    window: [usize; 2],
}

pub fn cmd_simulate(model: &Model, params: SimulateParams) -> Result<SimulationSummary> {
    let ifs = model.ifs()?;
    let window = params.window.unwrap_or([params.depth / 2, params.depth]);
    if window[0] >= window[1] || window[1] > params.depth {
        return Err(CliError::Usage(format!(
            "window {}..={} must be increasing and inside 0..={}",
            window[0], window[1], params.depth
        )));
    }
    let hashed = HashedExperiment {
        ifs,
        p: &model.p,
        m: model.m,
        depth: params.depth,
        trials: params.trials,
        master_seed: params.seed,
        window,
    };
    let config_hash = hex::encode(Sha256::digest(serde_json::to_vec(&hashed).expect("serializes")));
    let summary = run_trials(ifs, &model.p, model.m, params.depth, params.trials, params.seed)?;
    let estimate = summary.estimate(window[0]..=window[1])?;
    Ok(SimulationSummary {
        config_hash,
        ifs: ifs.clone(),
        p: model.p.clone(),
        m: model.m,
        depth: params.depth,
        trials: params.trials,
        master_seed: params.seed,
        window,
        estimate,
        levels: summary.levels,
    })
}

pub fn simulate_csv(s: &SimulationSummary) -> String {
    csv_table(
        &["level", "z_mean", "z_var", "z_min", "z_max"],
        s.levels.iter().map(|l| {
            vec![
                l.level.to_string(),
                fmt_num(l.mean),
                fmt_num(l.variance),
                l.min.to_string(),
                l.max.to_string(),
            ]
        }),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactRow {
    pub n: usize,
    /// `E(Z_n)`.
    pub value: f64,
    pub ln_bound: f64,
    /// The frequency-class bound; `null` in JSON once it overflows `f64`.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordReport {
    pub word: String,
    pub a: f64,
    /// `a` of every suffix, shortest first.
    pub trace: Vec<RecursionState>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactReport {
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "M")]
    pub m: u32,
    pub p: ProbVector,
    /// `π_0..π_n` when `p` is uniform.
    pub pi: Option<Vec<f64>>,
    /// Interior fixed point of the `π` recursion (uniform `p`, `M > N`).
    pub gamma: Option<f64>,
    pub rows: Vec<ExactRow>,
    pub word: Option<WordReport>,
}

pub fn cmd_exact(p: &ProbVector, m: u32, depth: usize, word: Option<&[u8]>) -> Result<ExactReport> {
    let n = p.alphabet();
    let uniform = p.is_uniform(1e-12);
    let pi = if uniform { Some(pi_sequence(n, m, depth)?) } else { None };
    let rows = (0..=depth)
        .map(|k| {
            let value = match &pi {
                Some(pi) => pi.expected_z(k),
                None => expected_zn(p, m, k)?,
            };
            let ln_bound = if k == 0 { 0.0 } else { multinomial_bound_ln(p, m, k)? };
            Ok(ExactRow {
                n: k,
                value,
                ln_bound,
                bound: ln_bound.exp(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let gamma = if uniform && m > n {
        Some(gamma_fixed_point(n, m)?)
    } else {
        None
    };
    let word = match word {
        Some(symbols) => {
            let w = LabelWord::new(n, symbols.to_vec())?;
            let trace = a_trace(&w, p, m)?;
            let a = trace.last().expect("nonempty word").value;
            Some(WordReport {
                word: w.to_string(),
                a,
                trace,
            })
        }
        None => None,
    };
    Ok(ExactReport {
        n,
        m,
        p: p.clone(),
        pi: pi.map(|s| s.values),
        gamma,
        rows,
        word,
    })
}

pub fn exact_csv(r: &ExactReport) -> String {
    csv_table(
        &["n", "value", "bound"],
        r.rows
            .iter()
            .map(|row| vec![row.n.to_string(), fmt_num(row.value), fmt_num(row.bound)]),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelCheck {
    pub n: usize,
    pub tree_words: usize,
    pub graph_words: Option<usize>,
    pub sft_words: Option<usize>,
    pub tree_eq_graph: Option<bool>,
    pub tree_subset_sft: Option<bool>,
    pub tree_eq_sft: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeterministicReport {
    pub m: u64,
    pub offset: u64,
    pub r: f64,
    #[serde(rename = "L")]
    pub level: Option<u32>,
    pub rho: Option<f64>,
    pub dim: f64,
    pub note: Option<String>,
    pub levels: Vec<LevelCheck>,
    /// Sorted level-`n` words (only when there are at most [`MAX_LISTED_WORDS`]).
    pub words: Option<Vec<String>>,
}

pub const MAX_LISTED_WORDS: usize = 4096;

pub fn cmd_deterministic(m: u64, offset: Option<u64>, ratio: f64, depth: Option<usize>) -> Result<DeterministicReport> {
    let spec = match offset {
        Some(o) => DeterministicSpec::with_offset(m, o)?,
        None => DeterministicSpec::new(m)?,
    };
    let dim = dim_fm(m, ratio)?;
    let level = if m >= 3 { Some(level_of(m)?) } else { None };
    let rho = level.map(rho).transpose()?;
    let note = (m == 2).then(|| "F_2 = C: every node has one child edge of each label".to_owned());
    // The digraph and subshift descriptions assume the every-m-th-edge labeling.
    let structured = level.filter(|_| spec.offset == m - 1);
    let mut levels = Vec::new();
    let mut words = None;
    if let Some(depth) = depth {
        for n in 0..=depth {
            let tree = tree_words(&spec, n)?;
            let (graph, sft) = match structured {
                Some(l) => (Some(graph_words(m, n)?), Some(sft_words(l, n)?)),
                None => (None, None),
            };
            levels.push(LevelCheck {
                n,
                tree_words: tree.len(),
                graph_words: graph.as_ref().map(|g| g.len()),
                sft_words: sft.as_ref().map(|s| s.len()),
                tree_eq_graph: graph.as_ref().map(|g| *g == tree),
                tree_subset_sft: sft.as_ref().map(|s| tree.is_subset(s)),
                tree_eq_sft: sft.as_ref().map(|s| *s == tree),
            });
            if n == depth && tree.len() <= MAX_LISTED_WORDS {
                words = Some(tree.iter().map(|w| w.to_string()).collect());
            }
        }
    }
    Ok(DeterministicReport {
        m,
        offset: spec.offset,
        r: ratio,
        level,
        rho,
        dim,
        note,
        levels,
        words,
    })
}

pub fn deterministic_csv(r: &DeterministicReport) -> String {
    let flag = |b: Option<bool>| b.map(|b| b.to_string()).unwrap_or_default();
    let count = |c: Option<usize>| c.map(|c| c.to_string()).unwrap_or_default();
    csv_table(
        &[
            "n",
            "tree_words",
            "graph_words",
            "sft_words",
            "tree_eq_graph",
            "tree_subset_sft",
            "tree_eq_sft",
        ],
        r.levels.iter().map(|l| {
            vec![
                l.n.to_string(),
                l.tree_words.to_string(),
                count(l.graph_words),
                count(l.sft_words),
                flag(l.tree_eq_graph),
                flag(l.tree_subset_sft),
                flag(l.tree_eq_sft),
            ]
        }),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionRow {
    pub m: u64,
    #[serde(rename = "L")]
    pub level: Option<u32>,
    pub rho: Option<f64>,
    pub dim: f64,
}

/// `(m, L, ρ_L, dim F_m)` for `m = 2..=m_max`.
pub fn dimension_table(m_max: u64, ratio: f64) -> Result<Vec<DimensionRow>> {
    (2..=m_max)
        .map(|m| {
            let level = if m >= 3 { Some(level_of(m)?) } else { None };
            Ok(DimensionRow {
                m,
                level,
                rho: level.map(rho).transpose()?,
                dim: dim_fm(m, ratio)?,
            })
        })
        .collect()
}

pub fn dimension_csv(rows: &[DimensionRow]) -> String {
    csv_table(
        &["m", "L", "rho_L", "dim_fm"],
        rows.iter().map(|r| {
            vec![
                r.m.to_string(),
                r.level.map(|l| l.to_string()).unwrap_or_default(),
                fmt_opt(r.rho),
                fmt_num(r.dim),
            ]
        }),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyRow {
    pub level: usize,
    pub z: usize,
    /// Truncation scale `r^level`.
    pub scale: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub t: f64,
    pub master_seed: u64,
    pub rows: Vec<EnergyRow>,
}

/// Energy diagnostic along one simulated trial; `t` defaults to half the lower bound.
pub fn cmd_energy(model: &Model, depth: usize, seed: u64, t: Option<f64>) -> Result<EnergyReport> {
    let ifs = model.ifs()?;
    let t = match t {
        Some(t) => t,
        None => 0.5 * lower_bound(&model.p, model.m, ifs.ratio())?,
    };
    let levels = trial_occupancies(&model.p, model.m, depth, seed, 0)?;
    let rows = levels
        .iter()
        .skip(1)
        .map(|occ| {
            Ok(EnergyRow {
                level: occ.level(),
                z: occ.z(),
                scale: ifs.ratio().powi(occ.level() as i32),
                energy: energy_estimate(occ, ifs, t)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EnergyReport {
        t,
        master_seed: seed,
        rows,
    })
}

pub fn energy_csv(r: &EnergyReport) -> String {
    csv_table(
        &["level", "z", "scale", "energy"],
        r.rows.iter().map(|row| {
            vec![
                row.level.to_string(),
                row.z.to_string(),
                fmt_num(row.scale),
                fmt_num(row.energy),
            ]
        }),
    )
}
