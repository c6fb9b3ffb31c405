//! Command-line front end.
//!
//! Exit codes: 0 success, 1 an experiment assertion failed, 2 usage error
//! (unknown or missing flag), 3 unknown subcommand, 4 invalid flag or
//! configuration value, 5 I/O failure, 6 malformed input file, 7 the
//! computation itself failed.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::embedding::{bourgain_embed, default_repetitions, distortion};
use crate::error::{Error, Result};
use crate::gap::{gamma_sup_estimate, gamma_value, read_vertex_map, write_vertex_map, SearchStrategy};
use crate::graph::{read_edge_list, sample_simple_regular, write_edge_list, Graph};
use crate::lab::{emit_results, run_experiment, ExperimentConfig, ExperimentKind};
use crate::metric::all_pairs_distances;
use crate::rng::rng_from_seed;
use crate::spectral::{lambda_bar, laplacian_spectrum, spectral_diameter_bound, DiameterBound};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SUBCOMMAND: i32 = 3;
pub const EXIT_VALUE: i32 = 4;
pub const EXIT_IO: i32 = 5;
pub const EXIT_PARSE: i32 = 6;
pub const EXIT_COMPUTE: i32 = 7;

#[derive(Debug, Parser)]
#[command(name = "nlgap", version, about = "Nonlinear spectral gaps of random regular graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a uniform simple d-regular graph and write its edge list.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        max_attempts: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Normalized Laplacian eigenvalues as CSV.
    Spectrum {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// gamma(G, d_H, f) for one map, as a header and one CSV row.
    Gamma {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Adversarial lower estimate of sup_f gamma(G, d_H, f).
    GammaSup {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        host: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 100_000)]
        max_moves: usize,
        /// Restrict to the class F(delta).
        #[arg(long)]
        delta: Option<f64>,
        /// Enumerate every map when m^n is at most this.
        #[arg(long, default_value_t = 0)]
        exhaustive_limit: u64,
        /// Write the best map here.
        #[arg(long)]
        map_out: Option<PathBuf>,
    },
    /// Bourgain embedding of the host metric as TSV.
    Embed {
        #[arg(long)]
        host: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        repetitions: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named experiment and write per-trial and summary CSV.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// typical, growing-d, fixed-function, fixed-h, concentration,
    /// errorbound or diameter.
    name: String,
    /// Flat key = value file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    workers: Option<usize>,
    /// Per-trial CSV; the summary goes to `<stem>.summary.csv`. Without it
    /// both are printed to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidParameters(_) | Error::OddDegreeSum { .. } => EXIT_VALUE,
        Error::Io { .. } => EXIT_IO,
        Error::Parse { .. }
        | Error::ImageOutOfRange { .. }
        | Error::SizeMismatch { .. }
        | Error::DimensionMismatch { .. } => EXIT_PARSE,
        _ => EXIT_COMPUTE,
    }
}

fn clap_exit_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
        ErrorKind::InvalidSubcommand => EXIT_SUBCOMMAND,
        ErrorKind::InvalidValue | ErrorKind::ValueValidation | ErrorKind::InvalidUtf8 => EXIT_VALUE,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return clap_exit_code(e.kind());
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn read_graph(path: &Path) -> Result<Graph> {
    read_edge_list(&read_text(path)?)
}

/// Writes to `path`, or stdout when absent.
fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io_error(p, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| io_error(Path::new("<stdout>"), e)),
    }
}

fn float_cell(x: Option<f64>) -> String {
    x.map_or(String::new(), |x| format!("{x:.16e}"))
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Gen {
            n,
            d,
            seed,
            max_attempts,
            out,
        } => {
            let mut rng = rng_from_seed(seed);
            let (g, _) = sample_simple_regular(n, d, &mut rng, max_attempts)?;
            emit(out.as_deref(), &write_edge_list(&g))?;
        }
        Command::Spectrum { graph, out } => {
            let g = read_graph(&graph)?;
            let s = laplacian_spectrum(&g)?;
            let mut text = String::from("k,eigenvalue\n");
            for (k, x) in s.eigenvalues().iter().enumerate() {
                text.push_str(&format!("{k},{x:.16e}\n"));
            }
            emit(out.as_deref(), &text)?;
            if s.len() >= 2 {
                let bound = match spectral_diameter_bound(&s, g.n()) {
                    DiameterBound::Finite(b) => b.to_string(),
                    DiameterBound::Vacuous => "vacuous".into(),
                };
                eprintln!(
                    "lambda_1={:.16e} lambda_bar={:.16e} diameter_bound={bound}",
                    s.lambda_1(),
                    lambda_bar(&s)
                );
            }
        }
        Command::Gamma { graph, host, map } => {
            let g = read_graph(&graph)?;
            let dist = all_pairs_distances(&read_graph(&host)?);
            let f = read_vertex_map(&read_text(&map)?)?;
            let r = gamma_value(&g, &dist, &f)?;
            let text = format!(
                "n,m,d,pair_sum,edge_sum,gamma\n{},{},{},{},{},{}\n",
                r.n,
                dist.len(),
                r.d,
                r.pair_sum,
                r.edge_sum,
                float_cell(r.gamma)
            );
            emit(None, &text)?;
        }
        Command::GammaSup {
            graph,
            host,
            seed,
            restarts,
            samples,
            max_moves,
            delta,
            exhaustive_limit,
            map_out,
        } => {
            let g = read_graph(&graph)?;
            let dist = all_pairs_distances(&read_graph(&host)?);
            let strategy = SearchStrategy {
                restarts,
                random_samples: samples,
                max_moves,
                class_delta: delta,
                exhaustive_limit,
                seed,
            };
            let est = gamma_sup_estimate(&g, &dist, &strategy)?;
            let r = &est.report;
            let text = format!(
                "n,m,d,pair_sum,edge_sum,gamma,exact\n{},{},{},{},{},{},{}\n",
                r.n,
                dist.len(),
                r.d,
                r.pair_sum,
                r.edge_sum,
                float_cell(r.gamma),
                est.enumerated.is_some()
            );
            emit(None, &text)?;
            if let Some(p) = map_out {
                emit(Some(&p), &write_vertex_map(&est.best))?;
            }
        }
        Command::Embed {
            host,
            seed,
            repetitions,
            out,
        } => {
            let dist = all_pairs_distances(&read_graph(&host)?);
            let q = repetitions.unwrap_or_else(|| default_repetitions(dist.len()));
            let e = bourgain_embed(&dist, seed, q)?;
            emit(out.as_deref(), &e.to_tsv())?;
            let dt = distortion(&dist, &e)?;
            eprintln!(
                "dimension={} expansion={:.16e} contraction={:.16e} distortion={:.16e}",
                e.dimension(),
                dt.max_expansion,
                dt.max_contraction,
                dt.distortion()
            );
        }
        Command::Experiment(args) => return experiment(args),
    }
    Ok(EXIT_OK)
}

/// Builds the configuration: experiment defaults, then the config file,
/// then `--set` overrides, then the dedicated flags.
fn experiment_config(args: &ExperimentArgs) -> Result<ExperimentConfig> {
    let kind: ExperimentKind = args.name.parse()?;
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_text(kind, &read_text(path)?)?,
        None => ExperimentConfig::defaults(kind),
    };
    cfg.kind = kind;
    for o in &args.overrides {
        let (k, v) = o
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got {o:?}")))?;
        cfg.set(k, v)?;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    if let Some(workers) = args.workers {
        cfg.workers = workers;
    }
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn experiment(args: ExperimentArgs) -> Result<i32> {
    let cfg = experiment_config(&args)?;
    let outcome = run_experiment(&cfg)?;
    match &cfg.out {
        Some(path) => {
            let summary = emit_results(&outcome, path)?;
            eprintln!("wrote {} and {}", path.display(), summary.display());
        }
        None => {
            emit(None, &outcome.trials_csv()?)?;
            emit(None, "\n")?;
            emit(None, &outcome.summary_csv()?)?;
        }
    }
    for (name, count) in outcome.warnings() {
        eprintln!("warning: soft check {name} failed {count} time(s)");
    }
    if outcome.passed() {
        eprintln!("{}: all assertions passed", outcome.name);
        Ok(EXIT_OK)
    } else {
        for (name, count) in outcome.failures() {
            eprintln!("FAILED: {name} ({count} time(s))");
        }
        Ok(EXIT_ASSERTION)
    }
}
