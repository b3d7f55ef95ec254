use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fracmech::IntegratorConfig;

#[derive(Debug, Parser)]
#[command(
    name = "fracmech",
    version,
    about = "Trajectories, oscillator periods and similarity checks for fractional classical mechanics"
)]
pub struct Cli {
    /// Plain `key = value` file with defaults for any flag; command-line flags win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate Hamilton's equations and write the trajectory as CSV.
    Simulate(SimulateArgs),
    /// Oscillator period in closed form, by quadrature and by integration.
    Period(PeriodArgs),
    /// Hamilton-Jacobi solution of the oscillator against an integrated trajectory.
    Hj(HjArgs),
    /// Period comparison over a grid of exponents and energies.
    Sweep(SweepArgs),
    /// Orbital period scaling in an attractive 1/r potential.
    Kepler(KeplerArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Period(_) => "period",
            Command::Hj(_) => "hj",
            Command::Sweep(_) => "sweep",
            Command::Kepler(_) => "kepler",
        }
    }

    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Simulate(a) => &a.output,
            Command::Period(a) => &a.output,
            Command::Hj(a) => &a.output,
            Command::Sweep(a) => &a.output,
            Command::Kepler(a) => &a.output,
        }
    }
}

#[derive(Debug, Args)]
pub struct KineticArgs {
    /// Kinetic exponent α in (1, 2].
    #[arg(long, required_unless_present = "mass")]
    pub alpha: Option<f64>,

    /// Kinetic scale D_α [default: 1].
    #[arg(long, conflicts_with = "mass")]
    pub d_alpha: Option<f64>,

    /// Particle mass; shorthand for α = 2 and D_α = 1/(2m).
    #[arg(long)]
    pub mass: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PotentialArgs {
    /// Strength s of the potential s|q|^β.
    #[arg(long, visible_alias = "g2", default_value_t = 1.0, allow_negative_numbers = true)]
    pub strength: f64,

    /// Degree β of the potential s|q|^β.
    #[arg(long, visible_alias = "beta", default_value_t = 2.0, allow_negative_numbers = true)]
    pub degree: f64,
}

#[derive(Debug, Args)]
pub struct ToleranceArgs {
    #[arg(long, default_value_t = IntegratorConfig::default().rel_tol)]
    pub rel_tol: f64,

    #[arg(long, default_value_t = IntegratorConfig::default().abs_tol)]
    pub abs_tol: f64,

    /// Time resolution of located events.
    #[arg(long, default_value_t = IntegratorConfig::default().event_tol)]
    pub event_tol: f64,

    #[arg(long, default_value_t = IntegratorConfig::default().max_steps)]
    pub max_steps: usize,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Data file; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Run manifest; defaults to `<out stem>.manifest.json` next to `--out`.
    #[arg(long, value_name = "PATH")]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub kinetic: KineticArgs,
    #[command(flatten)]
    pub potential: PotentialArgs,

    /// Initial position, one to three comma-separated components.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub q0: Vec<f64>,

    /// Initial momentum [default: zero].
    #[arg(long, value_delimiter = ',', conflicts_with = "v0", allow_hyphen_values = true)]
    pub p0: Option<Vec<f64>>,

    /// Initial velocity, converted to momentum through the Legendre map.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub v0: Option<Vec<f64>>,

    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t0: f64,

    #[arg(long, allow_negative_numbers = true)]
    pub t1: f64,

    /// Resample the dense output on this many equally spaced times instead of
    /// writing the accepted steps.
    #[arg(long)]
    pub samples: Option<usize>,

    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PeriodArgs {
    #[command(flatten)]
    pub kinetic: KineticArgs,
    #[command(flatten)]
    pub potential: PotentialArgs,

    #[arg(long)]
    pub energy: f64,

    /// Largest accepted relative spread of the three periods.
    #[arg(long, default_value_t = 1e-4)]
    pub check_tol: f64,

    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct HjArgs {
    #[command(flatten)]
    pub kinetic: KineticArgs,
    #[command(flatten)]
    pub potential: PotentialArgs,

    #[arg(long)]
    pub energy: f64,

    /// Number of equally spaced times over one period.
    #[arg(long, default_value_t = 256)]
    pub samples: usize,

    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "1.1,1.25,1.5,1.75,2")]
    pub alphas: Vec<f64>,

    #[arg(long, value_delimiter = ',', default_value = "1.1,1.25,1.5,1.75,2")]
    pub betas: Vec<f64>,

    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,10")]
    pub energies: Vec<f64>,

    #[arg(long, default_value_t = 1.0)]
    pub d_alpha: f64,

    #[arg(long, visible_alias = "g2", default_value_t = 1.0)]
    pub strength: f64,

    /// Largest accepted relative spread at any grid point.
    #[arg(long, default_value_t = 1e-4)]
    pub check_tol: f64,

    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct KeplerArgs {
    #[command(flatten)]
    pub kinetic: KineticArgs,

    /// Strength of the attractive potential s/|q|; must be negative.
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub strength: f64,

    /// Initial position of the base orbit.
    #[arg(long, value_delimiter = ',', default_value = "1,0", allow_hyphen_values = true)]
    pub q0: Vec<f64>,

    /// Initial momentum of the base orbit [default: 0,0.8].
    #[arg(long, value_delimiter = ',', conflicts_with = "v0", allow_hyphen_values = true)]
    pub p0: Option<Vec<f64>>,

    /// Initial velocity of the base orbit.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub v0: Option<Vec<f64>>,

    /// Length ratios of the scaled orbits.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    pub rhos: Vec<f64>,

    /// Largest accepted deviation of the fitted slope from 2 − 1/α.
    #[arg(long, default_value_t = 1e-3)]
    pub check_tol: f64,

    /// Summary JSON; defaults to `<out stem>.summary.json` next to `--out`,
    /// standard error otherwise.
    #[arg(long, value_name = "PATH")]
    pub summary: Option<PathBuf>,

    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
