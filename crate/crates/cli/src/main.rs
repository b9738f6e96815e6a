//! `susy-tj`: reproducible runs of the open supersymmetric t-J chain.
//!
//! Exit codes: 0 success, 1 validation error, 2 numerical failure.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;
use error::{CliError, CliResult};
use output::Format;

#[derive(Parser)]
#[command(name = "susy-tj", version, about = "Exact solution of the open supersymmetric t-J chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Algebraic identities and the Hamiltonian identity, with a pass/fail report.
    Verify(Options),
    /// Exact spectrum, matched Bethe roots and sampled transfer-matrix eigenvalues.
    Spectrum(Options),
    /// Surface energy curve, optionally with finite-size BST estimates.
    Surface(Options),
    /// Size dependence of E_inh = E_hom - E_true and its power-law fit.
    Scaling(Options),
    /// BST extrapolation of a finite-size sequence.
    Extrapolate(Options),
}

/// Shared flags. Every value flag is also a config key; flags win over the file.
#[derive(Args, Debug, Default)]
struct Options {
    /// Flat `key = value` file; `#` starts a comment.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Primary output file (stdout if absent); secondary files are written next to it.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    /// Pass/fail tolerance of the subcommand.
    #[arg(long, value_name = "X", allow_hyphen_values = true)]
    tol: Option<String>,
    /// Arbitrary `key=value` override, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Parameter preset: benchmark, real-root or bound-state.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long = "L", value_name = "N")]
    sites: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<String>,
    /// Angles accept multiples of pi, e.g. `2pi/3`.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    #[arg(long = "xi_prime", alias = "xi-prime", allow_hyphen_values = true)]
    xi_prime: Option<String>,
    #[arg(long = "theta_prime", alias = "theta-prime", allow_hyphen_values = true)]
    theta_prime: Option<String>,
    #[arg(long = "phi_prime", alias = "phi-prime", allow_hyphen_values = true)]
    phi_prime: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
    /// Raw coupling overrides, `re` or `re,im`; they skip the constraint check.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c2: Option<String>,
    #[arg(long = "c_prime", alias = "c-prime", allow_hyphen_values = true)]
    c_prime: Option<String>,
    #[arg(long = "c1_prime", alias = "c1-prime", allow_hyphen_values = true)]
    c1_prime: Option<String>,
    #[arg(long = "c2_prime", alias = "c2-prime", allow_hyphen_values = true)]
    c2_prime: Option<String>,

    /// Comma-separated chain lengths.
    #[arg(long)]
    sizes: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    /// Comma-separated values of the boundary parameter zeta.
    #[arg(long, allow_hyphen_values = true)]
    zeta: Option<String>,
    #[arg(long = "zeta_min", alias = "zeta-min", allow_hyphen_values = true)]
    zeta_min: Option<String>,
    #[arg(long = "zeta_max", alias = "zeta-max", allow_hyphen_values = true)]
    zeta_max: Option<String>,
    #[arg(long)]
    points: Option<String>,
    /// Add finite-size BST estimates to the surface curve.
    #[arg(long)]
    bst: bool,
    /// BST exponent, a number or `auto`.
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<String>,
    /// Sequence file with `L, F_L` rows.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Random starting points per root-count pair.
    #[arg(long)]
    starts: Option<String>,
}

impl Options {
    fn resolve(&self) -> CliResult<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let strings = [
            ("tol", &self.tol),
            ("preset", &self.preset),
            ("L", &self.sites),
            ("eta", &self.eta),
            ("xi", &self.xi),
            ("theta", &self.theta),
            ("phi", &self.phi),
            ("xi_prime", &self.xi_prime),
            ("theta_prime", &self.theta_prime),
            ("phi_prime", &self.phi_prime),
            ("epsilon", &self.epsilon),
            ("c", &self.c),
            ("c1", &self.c1),
            ("c2", &self.c2),
            ("c_prime", &self.c_prime),
            ("c1_prime", &self.c1_prime),
            ("c2_prime", &self.c2_prime),
            ("sizes", &self.sizes),
            ("samples", &self.samples),
            ("zeta", &self.zeta),
            ("zeta_min", &self.zeta_min),
            ("zeta_max", &self.zeta_max),
            ("points", &self.points),
            ("omega", &self.omega),
            ("starts", &self.starts),
        ];
        for (key, value) in strings {
            if let Some(v) = value {
                cfg.set(key, v.clone());
            }
        }
        if let Some(s) = self.seed {
            cfg.set("seed", s.to_string());
        }
        if let Some(f) = self.format {
            cfg.set("format", format_name(f));
        }
        if let Some(p) = &self.out {
            cfg.set("out", p.to_string_lossy());
        }
        if let Some(p) = &self.input {
            cfg.set("input", p.to_string_lossy());
        }
        if self.bst {
            cfg.set("bst", "true");
        }
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Validation(format!("--set expects KEY=VALUE, got `{kv}`")))?;
            cfg.set(k.trim(), v.trim());
        }
        Ok(cfg)
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let (opts, command): (&Options, fn(&mut RunConfig) -> CliResult<()>) = match &cli.command {
        Command::Verify(o) => (o, commands::verify::run),
        Command::Spectrum(o) => (o, commands::spectrum::run),
        Command::Surface(o) => (o, commands::surface::run),
        Command::Scaling(o) => (o, commands::scaling::run),
        Command::Extrapolate(o) => (o, commands::extrapolate::run),
    };
    let mut cfg = opts.resolve()?;
    command(&mut cfg)
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
