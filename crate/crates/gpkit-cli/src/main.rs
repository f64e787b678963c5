//! `gpkit`: batch front end for the graph-product library.
//!
//! Exit codes: 0 on success, 1 when a check fails, 2 on usage or input errors.

mod commands;
mod config;
mod suite;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CliError, CrossingArgs, Outcome, VerdictTarget};
use config::{Config, ConfigError};

#[derive(Parser)]
#[command(name = "gpkit", version, about = "Exact computation in graph products of groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Presentation file (`.gp`).
    #[arg(long)]
    config: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the normal form of a word.
    Reduce {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        word: String,
        /// Also print support, irreducibility and the cyclic reduction.
        #[arg(long)]
        classify: bool,
    },
    /// Graded distances d, d_u and δ between two elements.
    Dist {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Hyperplanes separating two elements.
    Hyperplanes {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Median triangle and coarse median of three elements.
    Median {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
    },
    /// Crossing-graph windows, the Δ-estimate audit and contracting axes.
    Crossing {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "")]
        basepoint: String,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        /// Restrict to the small crossing graph.
        #[arg(long)]
        small: bool,
        /// Audit every certified pair against the Δ-estimate.
        #[arg(long)]
        audit: bool,
        /// Build the contracting axis of this element instead of a window.
        #[arg(long)]
        axis: Option<String>,
        #[arg(long, default_value_t = 2)]
        k_max: i64,
        #[arg(long, default_value_t = 2)]
        search_radius: usize,
        /// Build the chain even when the element is not irreducible.
        #[arg(long, requires = "axis")]
        ungated: bool,
    },
    /// Cone-off distance with its block-chain lower bound.
    Coneoff {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 16)]
        bound: usize,
    },
    /// Distances in the trees T_u and trees of spaces TS_u.
    Trees {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Third point: report tree medians and the almost-median defect.
        #[arg(long)]
        z: Option<String>,
    },
    /// Structural verdicts about the group and its automorphisms.
    Verdict {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        target: VerdictTarget,
        /// For `extension`: the kernel of H → Out is finite.
        #[arg(long)]
        kernel_finite: bool,
    },
    /// Generating set of pairwise non-commuting elements.
    Genset {
        #[command(flatten)]
        common: Common,
    },
    /// DOT rendering of Γ, or of a crossing-graph window with `--window`.
    ExportDot {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, default_value = "")]
        basepoint: String,
        #[arg(long)]
        small: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the invariant batteries and print JSON lines.
    Suite {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        /// Cap on sampled pairs and triples.
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Positioned errors are prefixed with the file name, `path:line:col: ...`.
fn load(c: &Common) -> Result<Config, CliError> {
    config::parse_file(&c.config).map_err(|e| match e {
        ConfigError::At { .. } => CliError::Op(format!("{}:{e}", c.config.display())),
        e => e.into(),
    })
}

fn instance(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn threads() -> usize {
    std::env::var("GPKIT_THREADS").ok().and_then(|v| v.parse().ok()).unwrap_or(1)
}

fn run(cmd: Cmd, out: &mut String) -> Outcome {
    match cmd {
        Cmd::Reduce { common, word, classify } => commands::reduce(&load(&common)?, &word, classify, out),
        Cmd::Dist { common, x, y } => commands::dist(&load(&common)?, &x, &y, out),
        Cmd::Hyperplanes { common, x, y } => commands::hyperplanes(&load(&common)?, &x, &y, out),
        Cmd::Median { common, x, y, z } => commands::median(&load(&common)?, &x, &y, &z, out),
        Cmd::Crossing { common, basepoint, radius, small, audit, axis, k_max, search_radius, ungated } => {
            let args = CrossingArgs {
                basepoint: &basepoint,
                radius,
                small,
                audit,
                axis: axis.as_deref(),
                k_max,
                search_radius,
                ungated,
            };
            commands::crossing(&load(&common)?, &args, out)
        }
        Cmd::Coneoff { common, x, y, bound } => commands::coneoff(&load(&common)?, &x, &y, bound, out),
        Cmd::Trees { common, x, y, z } => commands::trees(&load(&common)?, &x, &y, z.as_deref(), out),
        Cmd::Verdict { common, target, kernel_finite } => {
            commands::verdict(&load(&common)?, target, kernel_finite, out)
        }
        Cmd::Genset { common } => commands::genset(&load(&common)?, out),
        Cmd::ExportDot { common, window, basepoint, small, output } => {
            let c = load(&common)?;
            let mut dot = String::new();
            commands::export_dot(&c, window, &basepoint, small, &mut dot)?;
            match output {
                Some(path) => std::fs::write(&path, dot)
                    .map_err(|source| CliError::Io { path: path.display().to_string(), source })?,
                None => out.push_str(&dot),
            }
            Ok(true)
        }
        Cmd::Suite { common, radius, samples, seed } => {
            let c = load(&common)?;
            let args = suite::SuiteArgs { radius, samples, seed, threads: threads() };
            let lines = suite::run(&c, &instance(&common.config), &args);
            for l in &lines {
                out.push_str(&serde_json::to_string(l).expect("check lines serialize"));
                out.push('\n');
            }
            Ok(lines.iter().all(|l| l.status != "fail"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(cli.cmd, &mut out);
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = stdout.write_all(out.as_bytes());
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
