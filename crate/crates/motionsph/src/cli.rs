use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Format, Layer};

/// Spherical functions of complex Cartan motion groups.
///
/// Spectral parameters and vectors are given by their pairings with the simple
/// roots, `⟨α_1, v⟩, …, ⟨α_l, v⟩`, as comma- or space-separated rationals
/// (`3`, `-2/5`, `0.25`). Pass `--ambient` to give orthogonal coordinates instead.
#[derive(Debug, Parser)]
#[command(name = "motionsph", version, about, long_about = None)]
pub struct Cli {
    /// TOML settings file (also `MOTIONSPH_CONFIG`).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Seed for probe selection and Monte Carlo checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Significant digits of floating-point output.
    #[arg(long, global = true)]
    pub precision: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate ψ_λ(H).
    Eval(EvalArgs),
    /// Decide whether ψ_λ is bounded and print the certificate.
    Classify(LambdaArgs),
    /// Sample |ψ_λ(tH₀)| along a ray and fit its exponential growth rate.
    Probe(ProbeArgs),
    /// Run the built-in consistency checks.
    Verify(VerifyArgs),
    /// The constant c of a stratum, compared with its closed forms.
    Constants(ConstantsArgs),
}

#[derive(Debug, Args)]
pub struct SystemArg {
    /// Root system: A1, A2, A3, B2 or G2.
    #[arg(long)]
    pub system: String,
}

#[derive(Debug, Args)]
pub struct LambdaArgs {
    #[command(flatten)]
    pub system: SystemArg,

    /// Real part ξ (defaults to 0).
    #[arg(long, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true)]
    pub xi: Vec<String>,

    /// Imaginary part η (defaults to 0).
    #[arg(long, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true)]
    pub eta: Vec<String>,

    /// Read ξ, η and H as orthogonal coordinates rather than pairings.
    #[arg(long)]
    pub ambient: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub lambda: LambdaArgs,

    /// The point H.
    #[arg(long = "H", num_args = 1.., value_delimiter = ',', allow_negative_numbers = true, required = true)]
    pub h: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub lambda: LambdaArgs,

    /// Ray direction H₀ (defaults to the probe chosen by `classify`).
    #[arg(long = "H", num_args = 1.., value_delimiter = ',', allow_negative_numbers = true)]
    pub h: Vec<String>,

    #[arg(long)]
    pub t_min: Option<f64>,

    #[arg(long)]
    pub t_max: Option<f64>,

    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub system: SystemArg,

    /// Stabilizers equal the groups generated by vanishing simple reflections.
    #[arg(long)]
    pub lemma2: bool,

    /// c agrees with its closed forms and with the small-t limit.
    #[arg(long)]
    pub c_constants: bool,

    /// Growth-rate inequalities hold exactly, with equality exactly on V.
    #[arg(long)]
    pub inequality: bool,

    /// Exact expansions agree with divided differences (and Monte Carlo in rank 1).
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[command(flatten)]
    pub system: SystemArg,

    /// Vanishing simple roots (1-based), e.g. `1,3`.
    #[arg(long, num_args = 0.., value_delimiter = ',')]
    pub stratum: Vec<usize>,
}

impl Cli {
    pub fn settings_layer(&self) -> Layer {
        let mut layer = Layer { precision: self.precision, seed: self.seed, format: self.format, ..Layer::default() };
        if let Command::Probe(p) = &self.command {
            layer.t_min = p.t_min;
            layer.t_max = p.t_max;
            layer.points = p.points;
        }
        layer
    }
}
