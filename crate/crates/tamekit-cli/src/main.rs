//! tamekit: taming and compatibility toolkit for almost-complex structures.
//!
//! Subcommands wrap the library crates: principal matrix powers, the
//! canonical retraction, simplex interpolation, taming-question campaigns,
//! fibration taming thresholds, and the radial base-locus model.

mod commands;
mod io;

use clap::{Parser, Subcommand};
use io::Format;
use std::path::PathBuf;
use tamekit_core::Tolerance;

/// Default seed used whenever no --seed is given, so runs reproduce.
const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(name = "tamekit", version, about = "Taming toolkit for almost-complex structures")]
struct Cli {
    /// Seed for every randomized subcommand (fixed default for reproducibility).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Positivity threshold override for taming checks.
    #[arg(long, global = true)]
    tol_psd: Option<f64>,

    /// ||J^2 + I|| threshold override for complex structures.
    #[arg(long, global = true)]
    tol_structure: Option<f64>,

    /// Output directory.
    #[arg(long, default_value = "tamekit-out", global = true)]
    out: PathBuf,

    /// Which report files to write.
    #[arg(long, value_enum, default_value = "both", global = true)]
    format: Format,

    /// Search horizon for taming-parameter scans.
    #[arg(long, default_value_t = 10.0, global = true)]
    t_max: f64,

    /// Mesh resolution (generator-specific, e.g. 8x8x8x8 or 32x8 or 10x10).
    #[arg(long, global = true)]
    mesh: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Principal matrix power A^r on the slit domain.
    Power {
        /// Input matrix JSON ({dim, rows} or {dim, re, im}).
        #[arg(long)]
        input: PathBuf,
        /// Exponent.
        #[arg(long)]
        r: f64,
    },
    /// Canonical retraction j(B) = B (-B^2)^{-1/2}.
    Retract {
        #[arg(long)]
        input: PathBuf,
    },
    /// Simplex interpolation j(sum t_i J_i).
    Interp {
        /// JSON file {"structures": [matrix, ...], "omega": matrix?}.
        #[arg(long)]
        structs: PathBuf,
        /// Comma-separated barycentric coordinates, e.g. 0.5,0.5.
        #[arg(long)]
        t: String,
        /// Optional taming form (overrides the one in the structs file).
        #[arg(long)]
        omega: Option<PathBuf>,
    },
    /// Run a taming-question campaign from a JSON config.
    Search {
        #[arg(long)]
        config: PathBuf,
    },
    /// Generate a fibration, report taming thresholds, assemble omega_t.
    Fib {
        #[arg(long, value_enum)]
        generator: commands::Generator,
        /// Complex dimension for the projectivization chart.
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Taming parameter: "auto" (half the threshold) or a number.
        #[arg(long, default_value = "auto")]
        t: String,
    },
    /// Residual table for the radial change of variables.
    Radial {
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

fn tolerance_from(cli: &Cli) -> Result<Tolerance, io::CliError> {
    let mut tol = Tolerance::default();
    if let Some(v) = cli.tol_psd {
        tol.tol_psd = v;
    }
    if let Some(v) = cli.tol_structure {
        tol.tol_structure = v;
    }
    tol.validate().map_err(io::CliError::Parse)?;
    Ok(tol)
}

fn run(cli: Cli) -> Result<i32, io::CliError> {
    // TAMEKIT_THREADS caps the worker pool.
    if let Ok(threads) = std::env::var("TAMEKIT_THREADS") {
        let n: usize = threads
            .parse()
            .map_err(|_| io::CliError::Parse(format!("TAMEKIT_THREADS={threads} is not a number")))?;
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let tol = tolerance_from(&cli)?;
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    match &cli.command {
        Command::Power { input, r } => commands::cmd_power(input, *r, &cli.out, &tol),
        Command::Retract { input } => commands::cmd_retract(input, &cli.out, &tol),
        Command::Interp { structs, t, omega } => {
            commands::cmd_interp(structs, t, omega.as_deref(), &cli.out, &tol)
        }
        Command::Search { config } => {
            commands::cmd_search(config, cli.seed, &cli.out, cli.format)
        }
        Command::Fib { generator, n, t } => commands::cmd_fib(
            *generator,
            cli.mesh.as_deref(),
            *n,
            t,
            cli.t_max,
            &cli.out,
            cli.format,
            &tol,
        ),
        Command::Radial { n } => {
            commands::cmd_radial(*n, cli.mesh.as_deref(), seed, &cli.out, cli.format)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("tamekit: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
