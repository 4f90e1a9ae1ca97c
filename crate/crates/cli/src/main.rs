use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wehrl_qpt_cli::{cmd_classify, cmd_husimi, cmd_surface, cmd_sweep, SurfaceArgs, SweepArgs};

/// Wehrl-entropy diagnostics of quantum phase transitions.
#[derive(Parser)]
#[command(name = "wehrl-qpt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter sweep; writes the CSV and a classification report.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// CSV path (default: the config's `out`, else stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report path (default: the config's `report`, else `<out stem>.report.json`).
        #[arg(long)]
        report: Option<PathBuf>,
        /// Worker threads; 0 uses every core.
        #[arg(long, env = "WEHRL_QPT_WORKERS")]
        workers: Option<usize>,
        /// Eigenvalues per point (2 or more fills the gap column).
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Classify a sweep CSV.
    Classify {
        csv: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate a model's energy surface.
    Surface(Box<SurfaceFlags>),
    /// Tabulate the Husimi function of a ground state on a quadrature grid.
    Husimi {
        #[arg(long)]
        config: PathBuf,
        /// Grid refinement level (overrides the config's `level`).
        #[arg(long)]
        level: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parameters take a value; coordinates take `start:stop:count` or a value.
#[derive(Args)]
struct SurfaceFlags {
    #[arg(long)]
    model: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    u: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    omega0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Particle number of the Dicke surface.
    #[arg(long = "n")]
    n: Option<String>,
    #[arg(long = "gamma-x", alias = "gamma_x", allow_hyphen_values = true)]
    gamma_x: Option<String>,
    #[arg(long = "gamma-y", alias = "gamma_y", allow_hyphen_values = true)]
    gamma_y: Option<String>,
    /// Parameter of the IBM surface, coordinate of the cusp potential.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    #[arg(long = "alpha-re", alias = "alpha_re", allow_hyphen_values = true)]
    alpha_re: Option<String>,
    #[arg(long = "alpha-im", alias = "alpha_im", allow_hyphen_values = true)]
    alpha_im: Option<String>,
}

impl From<SurfaceFlags> for SurfaceArgs {
    fn from(f: SurfaceFlags) -> Self {
        SurfaceArgs {
            model: f.model,
            out: f.out,
            values: vec![
                ("u", f.u),
                ("v", f.v),
                ("omega0", f.omega0),
                ("omega", f.omega),
                ("lambda", f.lambda),
                ("N", f.n),
                ("gamma_x", f.gamma_x),
                ("gamma_y", f.gamma_y),
                ("x", f.x),
                ("y", f.y),
                ("xi", f.xi),
                ("r", f.r),
                ("beta", f.beta),
                ("theta", f.theta),
                ("phi", f.phi),
                ("alpha_re", f.alpha_re),
                ("alpha_im", f.alpha_im),
            ],
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep {
            config,
            out,
            report,
            workers,
            levels,
        } => cmd_sweep(&SweepArgs {
            config,
            out,
            report,
            workers,
            levels,
        }),
        Command::Classify { csv, out } => cmd_classify(&csv, out.as_deref()),
        Command::Surface(flags) => cmd_surface(&(*flags).into()),
        Command::Husimi { config, level, out } => cmd_husimi(&config, level, out.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
