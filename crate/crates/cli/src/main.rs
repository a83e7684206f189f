use std::path::PathBuf;
use std::process::ExitCode;

use cantorflip_cli::config::{resolve_model, ModelOverrides};
use cantorflip_cli::output::{emit, json};
use cantorflip_cli::*;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "cantorflip",
    version,
    about = "Dimension bounds, simulation and exact recursions for random Cantor subsets"
)]
struct Cli {
    /// JSON experiment config; flags override its fields
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed for simulations
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Default)]
struct ModelArgs {
    /// Number of maps / label symbols
    #[arg(long = "N")]
    n: Option<u32>,
    /// Tree arity
    #[arg(long = "M")]
    m: Option<u32>,
    /// Label probabilities, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    p: Option<Vec<f64>>,
    /// Contraction ratio
    #[arg(long)]
    r: Option<f64>,
}

impl ModelArgs {
    fn overrides(&self) -> ModelOverrides {
        ModelOverrides {
            n: self.n,
            m: self.m,
            p: self.p.clone(),
            r: self.r,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Lower/upper dimension bounds and the exact value when known
    Bounds(ModelArgs),
    /// The p = 1/m, N = M = 2, r = 1/3 comparison table
    Table1,
    /// Both bounds for N = M = 2 on a grid of p
    Figure1 {
        #[arg(long, default_value_t = 99)]
        grid: usize,
        #[arg(long, default_value_t = 1.0 / 3.0)]
        r: f64,
    },
    /// Monte Carlo occupancy statistics and the regression dimension estimate
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        trials: Option<u64>,
        /// Regression levels, e.g. 10,20
        #[arg(long, value_delimiter = ',')]
        window: Option<Vec<usize>>,
        /// Also write the JSON summary here (the main output follows --format)
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Expected occupancy, its frequency-class bound, pi_n and a_w
    Exact {
        #[command(flatten)]
        model: ModelArgs,
        /// Largest level
        #[arg(long = "n")]
        levels: Option<usize>,
        /// Label word for a_w, comma separated symbols
        #[arg(long, value_delimiter = ',')]
        word: Option<Vec<u8>>,
    },
    /// The every-m-th-edge subsets
    Deterministic {
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        offset: Option<u64>,
        #[arg(long)]
        r: Option<f64>,
        /// Run the three word generators up to this level
        #[arg(long)]
        n: Option<usize>,
        /// Emit the (m, L, rho_L, dim) table for m = 2..=UPTO instead
        #[arg(long)]
        upto: Option<u64>,
    },
    /// Discrete t-energy along one simulated trial
    Energy {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        t: Option<f64>,
    },
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("CANTORFLIP_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("CANTORFLIP_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size the thread pool: {e}")))
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    let cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let out = cli.out.clone().or_else(|| cfg.output.clone());
    let seed = cli.seed.or(cfg.master_seed).unwrap_or(0);
    let pick = |default: Format| cli.format.unwrap_or(default);

    let text = match cli.command {
        Command::Bounds(args) => {
            cfg.check_mode(Mode::Bounds)?;
            let report = cmd_bounds(&resolve_model(&cfg, &args.overrides())?)?;
            match pick(Format::Json) {
                Format::Json => json(&report),
                Format::Csv => bounds_csv(&report),
            }
        }
        Command::Table1 => {
            let rows = cmd_table1()?;
            match pick(Format::Csv) {
                Format::Json => json(&rows),
                Format::Csv => table1_csv(&rows),
            }
        }
        Command::Figure1 { grid, r } => {
            let rows = cmd_figure1(grid, r)?;
            match pick(Format::Csv) {
                Format::Json => json(&rows),
                Format::Csv => figure1_csv(&rows),
            }
        }
        Command::Simulate {
            model,
            depth,
            trials,
            window,
            summary,
        } => {
            cfg.check_mode(Mode::Simulate)?;
            let window = match window.as_deref() {
                None => None,
                Some(&[lo, hi]) => Some([lo, hi]),
                Some(_) => return Err(CliError::Usage("--window takes two levels, e.g. 10,20".into())),
            };
            let params = SimulateParams {
                depth: depth.or(cfg.depth).unwrap_or(20),
                trials: trials.or(cfg.trials).unwrap_or(200),
                seed,
                window: window.or(cfg.window),
            };
            let report = cmd_simulate(&resolve_model(&cfg, &model.overrides())?, params)?;
            if let Some(path) = summary {
                emit(&json(&report), Some(&path))?;
            }
            match pick(Format::Json) {
                Format::Json => json(&report),
                Format::Csv => simulate_csv(&report),
            }
        }
        Command::Exact { model, levels, word } => {
            cfg.check_mode(Mode::Exact)?;
            let m = resolve_model(&cfg, &model.overrides())?;
            let depth = levels.or(cfg.depth).unwrap_or(10);
            let report = cmd_exact(&m.p, m.m, depth, word.as_deref())?;
            match pick(Format::Json) {
                Format::Json => json(&report),
                Format::Csv => exact_csv(&report),
            }
        }
        Command::Deterministic { m, offset, r, n, upto } => {
            cfg.check_mode(Mode::Deterministic)?;
            let det = cfg.deterministic.clone().unwrap_or_default();
            let ratio = r.or(cfg.ifs.as_ref().map(|s| s.ratio())).unwrap_or(1.0 / 3.0);
            if let Some(m_max) = upto {
                let rows = dimension_table(m_max, ratio)?;
                match pick(Format::Csv) {
                    Format::Json => json(&rows),
                    Format::Csv => dimension_csv(&rows),
                }
            } else {
                let m = m
                    .or((det.m != 0).then_some(det.m))
                    .ok_or_else(|| CliError::Usage("pass --m or set deterministic.m in the config".into()))?;
                let report = cmd_deterministic(m, offset.or(det.offset), ratio, n.or(det.n))?;
                match pick(Format::Json) {
                    Format::Json => json(&report),
                    Format::Csv => deterministic_csv(&report),
                }
            }
        }
        Command::Energy { model, depth, t } => {
            let m = resolve_model(&cfg, &model.overrides())?;
            let report = cmd_energy(&m, depth.or(cfg.depth).unwrap_or(10), seed, t.or(cfg.energy_t))?;
            match pick(Format::Csv) {
                Format::Json => json(&report),
                Format::Csv => energy_csv(&report),
            }
        }
    };
    emit(&text, out.as_deref())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
