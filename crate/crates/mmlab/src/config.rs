//! Run configuration.
//!
//! Settings come from an optional `key = value` file and from command-line
//! flags; flags win. Keys are the flag names without the leading dashes,
//! with `-` and `_` interchangeable.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use mmlab_core::classical::{half_quantum_offset, EnergyRule};
use mmlab_core::potential::PolynomialPotential;
use mmlab_core::spectral::PhysicalConstants;

use crate::{CliError, CliResult};

pub const DEFAULT_SIZE: usize = 64;
pub const DEFAULT_POTENTIAL_SIZE: usize = 40;
pub const DEFAULT_LEVELS: usize = 21;

const KEYS: &[&str] = &[
    "m",
    "omega",
    "hbar",
    "size",
    "basis_size",
    "coeffs",
    "alpha_max",
    "j0",
    "energy_rule",
    "out",
    "format",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Oscillator,
    Potential,
    Classical,
    Correspondence,
    Verify,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Oscillator => "oscillator",
            Mode::Potential => "potential",
            Mode::Classical => "classical",
            Mode::Correspondence => "correspondence",
            Mode::Verify => "verify",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(CliError::Config(format!("unknown format '{other}' (expected json or csv)"))),
        }
    }
}

/// Raw settings keyed by normalized name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment, blank lines are
    /// skipped.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut settings = Settings::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected 'key = value', got '{line}'", lineno + 1)))?;
            let value = value.trim().trim_matches('"');
            settings.set(key.trim(), value).map_err(|e| match e {
                CliError::Config(msg) => CliError::Config(format!("line {}: {msg}", lineno + 1)),
                other => other,
            })?;
        }
        Ok(settings)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let key = key.replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!("unknown setting '{key}'")));
        }
        self.values.insert(key, value.to_string());
        Ok(())
    }

    /// Entries of `other` replace entries of `self`.
    pub fn overlay(mut self, other: Settings) -> Self {
        self.values.extend(other.values);
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parse_value<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| CliError::Config(format!("{key}: cannot parse '{v}'")))
            })
            .transpose()
    }

    fn positive(&self, key: &str, default: f64) -> CliResult<f64> {
        let v = self.parse_value::<f64>(key)?.unwrap_or(default);
        if !(v.is_finite() && v > 0.0) {
            return Err(CliError::Config(format!("{key} must be finite and positive, got {v}")));
        }
        Ok(v)
    }

    fn count(&self, key: &str) -> CliResult<Option<usize>> {
        match self.parse_value::<i64>(key)? {
            None => Ok(None),
            Some(v) if v >= 1 => Ok(Some(v as usize)),
            Some(v) => Err(CliError::Config(format!("{key} must be a positive integer, got {v}"))),
        }
    }
}

/// How the zero-point offset of the action was requested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ActionOffset {
    Value(f64),
    HalfQuantum,
}

impl ActionOffset {
    pub fn resolve(self, hbar: f64) -> f64 {
        match self {
            ActionOffset::Value(v) => v,
            ActionOffset::HalfQuantum => half_quantum_offset(hbar),
        }
    }
}

impl FromStr for ActionOffset {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "half" | "h/2" => Ok(ActionOffset::HalfQuantum),
            other => match other.parse::<f64>() {
                Ok(v) if v.is_finite() && v >= 0.0 => Ok(ActionOffset::Value(v)),
                _ => Err(CliError::Config(format!(
                    "j0 must be a nonnegative number or 'half', got '{other}'"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub constants: PhysicalConstants,
    pub coeffs: Option<Vec<f64>>,
    /// Matrix dimension, or number of levels in classical mode.
    pub size: usize,
    pub basis_size: Option<usize>,
    pub alpha_max: Option<usize>,
    pub j0: ActionOffset,
    pub energy_rule: EnergyRule,
    pub out: Option<PathBuf>,
    pub format: Format,
    /// Added to `X(0,1)` in verify mode.
    pub perturbation: f64,
}

impl RunConfig {
    pub fn from_settings(mode: Mode, settings: &Settings) -> CliResult<Self> {
        let constants = PhysicalConstants::new(
            settings.positive("m", 1.0)?,
            settings.positive("hbar", 1.0)?,
            settings.positive("omega", 1.0)?,
        )?;
        let coeffs = settings.get("coeffs").map(parse_coeffs).transpose()?;
        if mode == Mode::Potential && coeffs.is_none() {
            return Err(CliError::Config("potential mode needs --coeffs".to_string()));
        }
        let default_size = match mode {
            Mode::Potential => DEFAULT_POTENTIAL_SIZE,
            Mode::Classical => DEFAULT_LEVELS,
            _ => DEFAULT_SIZE,
        };
        let size = settings.count("size")?.unwrap_or(default_size);
        let basis_size = settings.count("basis_size")?;
        if let Some(b) = basis_size {
            if b < 2 * size {
                return Err(CliError::Config(format!(
                    "basis_size {b} must be at least twice size {size}"
                )));
            }
        }
        let alpha_max = settings.count("alpha_max")?;
        let out = settings.get("out").map(PathBuf::from);
        let format = match settings.get("format") {
            Some(f) => f.parse()?,
            None if out.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e == "csv")) => Format::Csv,
            None => Format::Json,
        };
        Ok(Self {
            mode,
            constants,
            coeffs,
            size,
            basis_size,
            alpha_max,
            j0: settings.parse_value::<ActionOffset>("j0")?.unwrap_or(ActionOffset::Value(0.0)),
            energy_rule: match settings.get("energy_rule") {
                Some(r) => r.parse()?,
                None => EnergyRule::default(),
            },
            out,
            format,
            perturbation: 0.0,
        })
    }

    /// The configured potential, or `½ m ω² x²` when no coefficients were
    /// given.
    pub fn potential(&self) -> CliResult<PolynomialPotential> {
        Ok(match &self.coeffs {
            Some(c) => PolynomialPotential::new(c.clone())?,
            None => PolynomialPotential::harmonic(self.constants.mass, self.constants.omega)?,
        })
    }

    pub fn basis_size(&self) -> usize {
        self.basis_size.unwrap_or(4 * self.size)
    }
}

pub fn parse_coeffs(text: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|c| {
            let c = c.trim();
            match c.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(CliError::Config(format!("coefficient '{c}' is not a finite number"))),
            }
        })
        .collect()
}
