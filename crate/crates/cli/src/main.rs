use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

mod commands;

/// Path statistics, KD values and state classes of the three-path interferometer.
#[derive(Parser, Debug)]
#[command(name = "tripath", version, about)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Magnitude at or below which a KD value counts as zero.
    #[arg(long, global = true, default_value_t = tripath_core::DEFAULT_TOL, value_parser = parse_tol)]
    tol: f64,

    /// TOML file with beam-splitter reflectivities (r1, rS1, rf, rS2, r2);
    /// used by `states`, `kd` and `inequality`.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct StateArg {
    /// State coefficients `c1,c2,c3`; decimals, `p/q` and `sqrt(x)` are accepted.
    #[arg(long, value_name = "C1,C2,C3", allow_hyphen_values = true, value_parser = parse_state)]
    state: [f64; 3],
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the ten path states and the ten states defined by orthogonality.
    States,
    /// Print the ten KD values of a state.
    Kd(StateArg),
    /// Print the sign pattern and consistent sub-classes of a state.
    Classify(StateArg),
    /// Sum of the inner-path probabilities and its violation.
    Inequality {
        #[arg(long, value_name = "C1,C2,C3", allow_hyphen_values = true, value_parser = parse_state, required_unless_present = "max", conflicts_with = "max")]
        state: Option<[f64; 3]>,
        /// Report the state with the largest violation instead.
        #[arg(long)]
        max: bool,
    },
    /// Print the three-state joint measurement basis and its fidelities.
    Basis,
    /// Render the sub-class map of the c1 >= 0 hemisphere.
    Atlas {
        #[arg(long, default_value_t = 512, value_parser = clap::value_parser!(u32).range(16..=8192))]
        resolution: u32,
        /// Output file; defaults to `atlas.<ext>` in $TRIPATH_OUT_DIR or the working directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// `raster` (PPM) or `vector` (SVG).
        #[arg(long, default_value = "raster")]
        format: String,
        /// Also write the canonical CSV tables next to the map.
        #[arg(long)]
        tables: bool,
        #[arg(long, env = "TRIPATH_OUT_DIR", hide_env_values = true)]
        out_dir: Option<PathBuf>,
    },
    /// Check every published closed-form value; exit code 2 on failure.
    Verify,
}

fn parse_state(s: &str) -> Result<[f64; 3], String> {
    tripath_core::numeric::parse_triple(s).map_err(|e| e.to_string())
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let x = tripath_core::numeric::parse_real(s).map_err(|e| e.to_string())?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("tolerance must be positive, got {x}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
