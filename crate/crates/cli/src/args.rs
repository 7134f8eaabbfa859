use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::table::Format;

#[derive(Debug, Parser)]
#[command(
    name = "atomic-mirror",
    version,
    about = "Single-photon scattering in a coupled-resonator waveguide doped with two-level atoms",
    long_about = "Single-photon scattering in a coupled-resonator waveguide doped with two-level atoms.\n\n\
                  All energies are in units of the atom-cavity coupling g. Detuning grids are given in \
                  Δ = E − Ω."
)]
pub struct Cli {
    /// Worker threads for grid and ensemble evaluation (output does not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact transmission and reflection over a detuning grid.
    Spectrum(SpectrumArgs),
    /// Exact transmission next to the incoherent product |t₁|^{2Nₐ}.
    SpectrumApprox(SpectrumArgs),
    /// Width of the perfect-reflection band while sweeping one parameter.
    Bandwidth(BandwidthArgs),
    /// Interaction-region levels and group velocities.
    Bands(BandsArgs),
    /// Transmission at fixed detunings for a range of atom counts.
    Convergence(ConvergenceArgs),
    /// Disorder-averaged transmission spectrum.
    Disorder(DisorderArgs),
    /// Transmission, reflection and current deficit with atomic and cavity loss.
    Loss(LossArgs),
    /// Cross-check the closed form against the lattice solver and dense diagonalization.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Cavity frequency ω.
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Atomic level spacing Ω.
    #[arg(long = "Omega", allow_negative_numbers = true)]
    pub atom_omega: Option<f64>,
    /// Nearest-neighbour hopping V.
    #[arg(long = "V", allow_negative_numbers = true)]
    pub hopping: Option<f64>,
    /// Atom-cavity coupling g.
    #[arg(long = "g", allow_negative_numbers = true)]
    pub coupling: Option<f64>,
    /// Number of doped cavities Nₐ.
    #[arg(long = "na")]
    pub n_atoms: Option<usize>,
    /// Flat JSON object supplying any of the flags above (flags take precedence).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub delta_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta_max: Option<f64>,
    /// Grid points, endpoints included.
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    #[value(name = "V")]
    Hopping,
    #[value(name = "g")]
    Coupling,
    #[value(name = "Omega")]
    AtomOmega,
    #[value(name = "omega")]
    Omega,
}

#[derive(Debug, Clone, Args)]
pub struct BandwidthArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Parameter to sweep.
    #[arg(long, value_enum)]
    pub axis: Option<AxisArg>,
    #[arg(long, allow_negative_numbers = true)]
    pub min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub max: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BandsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Emit the free-waveguide group velocity over the detuning grid instead.
    #[arg(long)]
    pub free: bool,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comma-separated detunings.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub deltas: Vec<f64>,
    /// Also evaluate at the two gap boundaries Δ₋ and Δ₊.
    #[arg(long)]
    pub band_edges: bool,
    /// Comma-separated atom counts (overrides --na-min/--na-max).
    #[arg(long, value_delimiter = ',')]
    pub na_list: Vec<usize>,
    #[arg(long)]
    pub na_min: Option<usize>,
    #[arg(long)]
    pub na_max: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistArg {
    Uniform,
    Gauss,
}

#[derive(Debug, Clone, Args)]
pub struct DisorderArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum)]
    pub dist: Option<DistArg>,
    /// Uniform half-width as a fraction of |ω| and |V|.
    #[arg(long)]
    pub width_frac: Option<f64>,
    /// Gaussian standard deviation of the cavity frequencies (absolute).
    #[arg(long)]
    pub sigma_omega: Option<f64>,
    /// Gaussian standard deviation of the hoppings (absolute).
    #[arg(long)]
    pub sigma_v: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Emit the spectrum of one realization instead of the ensemble average.
    #[arg(long)]
    pub single: bool,
    /// Realization index used with --single.
    #[arg(long)]
    pub realization: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct LossArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Atomic decay rate γ_a.
    #[arg(long)]
    pub gamma_a: Option<f64>,
    /// Cavity loss rate γ_c.
    #[arg(long)]
    pub gamma_c: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Corrupt the hopping sign halfway through the oracle check; must fail.
    #[arg(long)]
    pub self_test: bool,
}
