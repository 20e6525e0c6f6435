use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mmlab::config::{Mode, RunConfig, Settings};
use mmlab::{run, CliError, CliResult, EXIT_INVALID};

#[derive(Parser)]
#[command(name = "mmlab", version, about = "Quantum-condition laboratory for matrix mechanics")]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Condition report for the truncated harmonic oscillator
    Oscillator(Flags),
    /// Condition report for a polynomial potential
    Potential(Flags),
    /// Bohr-Sommerfeld levels of a polynomial potential
    Classical(Flags),
    /// Quantum amplitudes against classical Fourier coefficients
    Correspondence(Flags),
    /// Run the self-check suite
    Verify {
        #[command(flatten)]
        flags: Flags,
        /// Add this amount to X(0,1) of the oscillator before checking
        #[arg(long, hide = true, allow_hyphen_values = true)]
        perturb: Option<f64>,
    },
}

/// Every flag is read as text and validated together with config-file
/// values, so both sources report errors the same way.
#[derive(Args)]
struct Flags {
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    hbar: Option<String>,
    /// Number of states (levels in classical mode)
    #[arg(long, allow_hyphen_values = true)]
    size: Option<String>,
    /// Auxiliary basis size for polynomial potentials
    #[arg(long, allow_hyphen_values = true)]
    basis_size: Option<String>,
    /// Potential coefficients "c0,c1,..." of V(x) = sum c_k x^k
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_max: Option<String>,
    /// Action offset: a number or "half" for h/2
    #[arg(long, allow_hyphen_values = true)]
    j0: Option<String>,
    /// state | mean
    #[arg(long)]
    energy_rule: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// json | csv
    #[arg(long)]
    format: Option<String>,
    /// key = value settings file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Flags {
    fn settings(&self) -> CliResult<Settings> {
        let base = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        let mut flags = Settings::default();
        let out = self.out.as_ref().map(|p| p.to_string_lossy().into_owned());
        let pairs = [
            ("m", &self.m),
            ("omega", &self.omega),
            ("hbar", &self.hbar),
            ("size", &self.size),
            ("basis_size", &self.basis_size),
            ("coeffs", &self.coeffs),
            ("alpha_max", &self.alpha_max),
            ("j0", &self.j0),
            ("energy_rule", &self.energy_rule),
            ("out", &out),
            ("format", &self.format),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                flags.set(key, v)?;
            }
        }
        Ok(base.overlay(flags))
    }
}

fn configure(cli: Cli) -> CliResult<RunConfig> {
    let (mode, flags, perturb) = match cli.command {
        Command::Oscillator(f) => (Mode::Oscillator, f, None),
        Command::Potential(f) => (Mode::Potential, f, None),
        Command::Classical(f) => (Mode::Classical, f, None),
        Command::Correspondence(f) => (Mode::Correspondence, f, None),
        Command::Verify { flags, perturb } => (Mode::Verify, flags, perturb),
    };
    let mut config = RunConfig::from_settings(mode, &flags.settings()?)?;
    if let Some(p) = perturb {
        if !p.is_finite() {
            return Err(CliError::Config(format!("perturbation must be finite, got {p}")));
        }
        config.perturbation = p;
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID as u8 } else { 0 });
        }
    };
    let result = configure(cli).and_then(|config| run::run(&config, &mut std::io::stdout().lock()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mmlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
