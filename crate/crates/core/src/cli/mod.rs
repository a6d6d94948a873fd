//! The `codecrit` reproduction driver: one subcommand per module plus an
//! end-to-end pipeline. Every output file carries the config that made it.

mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{cmd_bound, cmd_complexity, cmd_fractal, cmd_ising, cmd_pipeline, cmd_rate, cmd_statmech, IsingRun};
pub use config::ExperimentConfig;

use crate::ising::Algorithm;
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "codecrit", version, about = "Codes, fractals, complexity ordering and Ising criticality")]
pub struct Cli {
    /// JSON experiment config; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory (created when missing).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for independent cells.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Smaller desk-scale presets.
    #[arg(long, global = true)]
    pub quick: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rates of codes read from text files.
    Rate(RateArgs),
    /// Box-counting dimension of a code fractal.
    Fractal(FractalArgs),
    /// Complexity proxy, Kolmogorov order and neighbor graph.
    Complexity(ComplexityArgs),
    /// Partition-function scan and critical inverse temperature.
    Statmech(StatmechArgs),
    /// Binder crossing and exponent fit on a lattice-size grid.
    Ising(IsingArgs),
    /// Correlation bound from the critical exponent.
    Bound(BoundArgs),
    /// Codes, complexity order, Monte Carlo and bounds in one run.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
pub struct RateArgs {
    /// Code files: header `q=<q> n=<n>`, then one word per line.
    pub codes: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FractalArgs {
    #[arg(long)]
    pub code: Option<PathBuf>,
    /// Comma-separated words, used when no code file is given.
    #[arg(long, value_delimiter = ',')]
    pub words: Option<Vec<String>>,
    #[arg(long)]
    pub q: Option<u32>,
    /// `1..6` or `1,2,3`.
    #[arg(long, value_parser = parse_list)]
    pub depths: Option<UsizeList>,
    #[arg(long)]
    pub box_cap: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ComplexityArgs {
    #[arg(long)]
    pub code: Option<PathBuf>,
    #[arg(long)]
    pub random_words: Option<usize>,
    #[arg(long)]
    pub word_length: Option<usize>,
    #[arg(long)]
    pub neighbors: Option<u32>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub concatenation: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct StatmechArgs {
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub rate: Option<f64>,
    #[arg(long)]
    pub beta_min: Option<f64>,
    #[arg(long)]
    pub beta_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Rescale random raw weights to the Keane condition.
    #[arg(long)]
    pub keane: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AlgorithmArg {
    Metropolis,
    Wolff,
}

#[derive(Debug, Args)]
pub struct IsingArgs {
    #[arg(long)]
    pub d: Option<usize>,
    /// Lattice sides, e.g. `8,16,32`.
    #[arg(long, value_parser = parse_list)]
    pub ls: Option<UsizeList>,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub sweeps: Option<usize>,
    #[arg(long)]
    pub thermalization: Option<usize>,
    #[arg(long)]
    pub stride: Option<usize>,
    #[arg(long, value_enum)]
    pub algorithm: Option<AlgorithmArg>,
    #[arg(long)]
    pub blocks: Option<usize>,
    /// Measure the energy correlator at the fitted critical temperature.
    #[arg(long)]
    pub correlator: bool,
    #[arg(long)]
    pub correlator_l: Option<usize>,
    /// Reuse finished cells found in the output directory.
    #[arg(long)]
    pub resume: bool,
    /// Stop after this many newly simulated cells.
    #[arg(long)]
    pub stop_after_cells: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub d: Option<u32>,
    /// Neighbor count; 4, 6 and 8 select d = 2, 3, 4.
    #[arg(long = "N")]
    pub neighbors: Option<u32>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub dnu: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long, value_parser = parse_list)]
    pub dims: Option<UsizeList>,
    #[arg(long)]
    pub words: Option<usize>,
    #[arg(long)]
    pub word_length: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsizeList(pub Vec<usize>);

/// `a..b` (inclusive) or a comma-separated list.
pub fn parse_list(s: &str) -> Result<UsizeList, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(format!("empty range {s}"));
        }
        return Ok(UsizeList((a..=b).collect()));
    }
    s.split(',').map(num).collect::<Result<Vec<_>, _>>().map(UsizeList)
}

/// Exit code for an error: numeric failures are 2, everything else 1.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoCrossing { .. }
        | Error::NoBracket
        | Error::Numeric(_)
        | Error::NonPositiveExponent(_)
        | Error::BudgetExceeded { .. }
        | Error::Io(_) => EXIT_NUMERIC,
        _ => EXIT_USAGE,
    }
}

/// Merges defaults, the config file and the flags.
pub fn resolve_config(cli: &Cli) -> crate::Result<ExperimentConfig> {
    let mut c = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    if let Some(o) = &cli.out {
        c.out = o.clone();
    }
    if cli.threads.is_some() {
        c.threads = cli.threads;
    }
    c.quick |= cli.quick;
    match &cli.command {
        Command::Rate(a) => {
            if !a.codes.is_empty() {
                c.rate.codes = a.codes.clone();
            }
        }
        Command::Fractal(a) => {
            if a.code.is_some() {
                c.fractal.code = a.code.clone();
            }
            if let Some(w) = &a.words {
                c.fractal.words = w.clone();
                c.fractal.code = None;
            }
            set(&mut c.fractal.q, a.q);
            if let Some(d) = &a.depths {
                c.fractal.depths = d.0.clone();
            }
            set(&mut c.budget.box_cap, a.box_cap);
        }
        Command::Complexity(a) => {
            if a.code.is_some() {
                c.complexity.code = a.code.clone();
            }
            set(&mut c.complexity.random_words, a.random_words);
            set(&mut c.complexity.word_length, a.word_length);
            set(&mut c.complexity.neighbors, a.neighbors);
            set(&mut c.complexity.tau, a.tau);
            set(&mut c.complexity.concatenation, a.concatenation);
            set(&mut c.complexity.samples, a.samples);
        }
        Command::Statmech(a) => {
            set(&mut c.statmech.q, a.q);
            set(&mut c.statmech.n, a.n);
            set(&mut c.statmech.rate, a.rate);
            set(&mut c.statmech.beta_min, a.beta_min);
            set(&mut c.statmech.beta_max, a.beta_max);
            set(&mut c.statmech.points, a.points);
            c.statmech.keane |= a.keane;
        }
        Command::Ising(a) => {
            let i = &mut c.ising;
            set(&mut i.d, a.d);
            if let Some(ls) = &a.ls {
                i.ls = ls.0.clone();
            }
            opt(&mut i.t_min, a.t_min);
            opt(&mut i.t_max, a.t_max);
            opt(&mut i.points, a.points);
            opt(&mut i.sweeps, a.sweeps);
            opt(&mut i.thermalization, a.thermalization);
            set(&mut i.stride, a.stride);
            set(&mut i.blocks, a.blocks);
            if let Some(alg) = a.algorithm {
                i.algorithm = match alg {
                    AlgorithmArg::Metropolis => Algorithm::Metropolis,
                    AlgorithmArg::Wolff => Algorithm::Wolff,
                };
            }
            i.correlator |= a.correlator;
            opt(&mut i.correlator_l, a.correlator_l);
        }
        Command::Bound(a) => {
            opt(&mut c.bound.d, a.d);
            opt(&mut c.bound.neighbors, a.neighbors);
            opt(&mut c.bound.nu, a.nu);
            opt(&mut c.bound.nu_err, a.dnu);
        }
        Command::Pipeline(a) => {
            if let Some(d) = &a.dims {
                c.pipeline.dims = d.0.clone();
            }
            set(&mut c.pipeline.words, a.words);
            set(&mut c.pipeline.word_length, a.word_length);
        }
    }
    Ok(c)
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn opt<T>(slot: &mut Option<T>, v: Option<T>) {
    if v.is_some() {
        *slot = v;
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Messages go to `stdout` and `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn std::io::Write) -> crate::Result<()> {
    let cfg = resolve_config(cli)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| Error::Invalid(e.to_string()))?;
    let text = pool.install(|| -> crate::Result<String> {
        Ok(match &cli.command {
            Command::Rate(_) => cmd_rate(&cfg)?,
            Command::Fractal(_) => cmd_fractal(&cfg)?,
            Command::Complexity(_) => cmd_complexity(&cfg)?,
            Command::Statmech(_) => cmd_statmech(&cfg)?,
            Command::Ising(a) => {
                let run = IsingRun {
                    resume: a.resume,
                    stop_after_cells: a.stop_after_cells,
                };
                cmd_ising(&cfg, &run)?
            }
            Command::Bound(_) => cmd_bound(&cfg)?,
            Command::Pipeline(_) => cmd_pipeline(&cfg)?,
        })
    })?;
    stdout.write_all(text.as_bytes())?;
    Ok(())
}
