//! `squeeze`: matrix elements, photon-number distributions, thermal averages
//! and the validation suite from the command line.

mod commands;
mod output;

use clap::{Args, Parser, Subcommand};
use output::{emit, to_csv, to_json, Failure, Format};
use squeezing::figures::Figure;
use squeezing::validate::Tier;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "squeeze", version, about = "Single-mode squeeze operator in the Fock basis")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format (default: csv for `distribution` and `figure`, json otherwise)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Add wall-clock time to JSON output (breaks byte-identical reruns)
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Squeeze {
    /// Squeezing modulus r = |ξ|
    #[arg(long, allow_hyphen_values = true)]
    pub r: f64,
    /// Squeezing phase φ = arg ξ
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi: f64,
}

#[derive(Args, Debug, Clone, Copy)]
#[group(required = true, multiple = false)]
pub struct Field {
    /// Mean thermal photon number
    #[arg(long)]
    pub nbar: Option<f64>,
    /// Boltzmann factor e^{-hν/kT}
    #[arg(long)]
    pub b: Option<f64>,
    /// hν/kT
    #[arg(long = "hv-over-kt")]
    pub hv_over_kt: Option<f64>,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct Fields {
    /// Mean thermal photon numbers, comma separated
    #[arg(long, value_delimiter = ',')]
    pub nbar: Vec<f64>,
    /// Boltzmann factors, comma separated
    #[arg(long, value_delimiter = ',')]
    pub b: Vec<f64>,
    /// Values of hν/kT, comma separated
    #[arg(long = "hv-over-kt", value_delimiter = ',')]
    pub hv_over_kt: Vec<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// ⟨m|S(ξ)|n⟩ by every closed-form route, optionally against the matrix exponential
    Element {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        sq: Squeeze,
        /// Relative route agreement tolerance
        #[arg(long, default_value_t = squeezing::validate::ROUTE_TOL)]
        tol: f64,
        /// Also compute the certified truncated exponential
        #[arg(long)]
        with_oracle: bool,
    },
    /// p_m = |⟨m|S|n⟩|² over m
    Distribution {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        sq: Squeeze,
        /// Allowed missing probability mass
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Largest index to compute before giving up
        #[arg(long, default_value_t = squeezing::squeeze::DEFAULT_CAP)]
        cap: u64,
    },
    /// Data behind the published photon-number plots
    Figure {
        /// fig1a, fig1b, fig2a, fig2b or fig3
        which: Figure,
        /// Bound on the fig2b sup-distance to the exact curve
        #[arg(long, default_value_t = squeezing::figures::HERMITE_SUP_BOUND)]
        tol: f64,
    },
    /// Coherent and Gaussian-stochastic superpositions
    Superpose {
        #[command(subcommand)]
        kind: Superposition,
    },
    /// Thermal emission and absorption probabilities of order k
    Thermal {
        #[arg(long)]
        k: u64,
        #[command(flatten)]
        sq: Squeeze,
        #[command(flatten)]
        field: Field,
        /// Relative agreement of Planck sums with closed forms
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Quantum thermal averages against the semiclassical Gaussian average
    Compare {
        /// Orders, comma separated
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3")]
        k: Vec<u64>,
        /// Squeezing modulus r
        #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
        r: f64,
        #[command(flatten)]
        fields: Fields,
        /// Relative tolerance of the detailed-balance check
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Run the validation suite
    Validate {
        #[arg(long, default_value = "fast")]
        tier: Tier,
        /// Worker threads
        #[arg(long, env = "SQUEEZE_VALIDATE_THREADS")]
        threads: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum Superposition {
    /// ⟨β|S|α⟩ projected on order k: term-by-term sum against the closed form
    Coherent {
        #[arg(long)]
        k: u64,
        /// |α|
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha_arg: f64,
        /// |β|
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        beta_arg: f64,
        #[command(flatten)]
        sq: Squeeze,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Gaussian average of J_k²(γI): quadrature against the toroidal closed form
    Gaussian {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 1.0)]
        i0: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

fn run(cli: Cli) -> Result<(), Failure> {
    let start = Instant::now();
    let (record, default_format) = match cli.command {
        Command::Element { m, n, sq, tol, with_oracle } => {
            (commands::element(m, n, sq, tol, with_oracle)?, Format::Json)
        }
        Command::Distribution { n, sq, tol, cap } => (commands::distribution(n, sq, tol, cap)?, Format::Csv),
        Command::Figure { which, tol } => (commands::figure(which, tol)?, Format::Csv),
        Command::Superpose { kind } => (commands::superpose(kind)?, Format::Json),
        Command::Thermal { k, sq, field, tol } => (commands::thermal(k, sq, field, tol)?, Format::Json),
        Command::Compare { k, r, fields, tol } => (commands::compare(&k, r, fields, tol)?, Format::Json),
        Command::Validate { tier, threads } => (commands::validate(tier, threads)?, Format::Json),
    };
    let text = match cli.format.unwrap_or(default_format) {
        Format::Csv => {
            if let Some(s) = &record.summary {
                eprintln!("{s}");
            }
            to_csv(&record.table)
        }
        Format::Json => to_json(&record, cli.timing.then(|| start.elapsed().as_secs_f64())),
    };
    emit(&text, cli.out.as_deref())?;
    for c in record.checks.iter().filter(|c| !c.passed) {
        eprintln!(
            "check failed: {} value {:e} bound {:e}{}",
            c.name,
            c.value,
            c.bound,
            c.worst_point.as_deref().map(|p| format!(" at {p}")).unwrap_or_default()
        );
    }
    if record.passed() {
        Ok(())
    } else {
        Err(Failure::Disagreement)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::NonConvergence(msg) => eprintln!("error: {msg}"),
                Failure::Disagreement => {}
            }
            f.code()
        }
    }
}
