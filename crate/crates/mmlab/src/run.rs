//! Mode dispatch and artifact output.

use std::io::Write;
use std::path::Path;

use mmlab_core::classical::{correspondence_report, orbit_period, quantize, Well};
use mmlab_core::conditions::{default_alpha_max, full_report};
use mmlab_core::spectral::{build_from_potential, build_oscillator, MatrixPair, SpectralSystem};
use mmlab_core::verify::{run_suite, VerifyOptions};

use crate::config::{Mode, RunConfig};
use crate::report::{
    ClassicalDoc, ConditionDoc, ConstantsDoc, CorrespondenceDoc, CorrespondenceRowDoc, LevelDoc, Report, SystemDoc,
    VerifyDoc,
};
use crate::{CliError, CliResult};

/// Default band width of correspondence reports: the fundamental only.
pub const CORRESPONDENCE_ALPHA_MAX: usize = 1;

fn system_doc(config: &RunConfig, kind: &str, size: usize) -> SystemDoc {
    SystemDoc {
        kind: kind.to_string(),
        constants: ConstantsDoc::from(config.constants),
        size,
        coeffs: config.coeffs.clone(),
    }
}

fn quantum_system(config: &RunConfig) -> CliResult<(SpectralSystem, MatrixPair)> {
    Ok(match &config.coeffs {
        None => build_oscillator(config.constants, config.size)?,
        Some(_) => build_from_potential(&config.potential()?, config.constants, config.basis_size(), config.size)?,
    })
}

/// Builds the report for `config`. Verify mode always yields a report; the
/// caller decides the exit status from it.
pub fn build_report(config: &RunConfig) -> CliResult<Report> {
    match config.mode {
        Mode::Oscillator | Mode::Potential => {
            let (system, pair) = quantum_system(config)?;
            let alpha_max = config.alpha_max.unwrap_or_else(|| default_alpha_max(&pair.x));
            let report = full_report(&system, &pair, alpha_max)?;
            let kind = config.mode.to_string();
            Ok(Report::Conditions(ConditionDoc::new(&report, &kind, config.coeffs.clone())))
        }
        Mode::Classical => {
            let potential = config.potential()?;
            let well = Well::new(&potential);
            let (_, v_min) = well.minimum();
            let c = config.constants;
            let j0 = config.j0.resolve(c.hbar);
            let mut rows = Vec::with_capacity(config.size);
            for n in 0..config.size as u32 {
                let level = quantize(&potential, c.mass, c.hbar, j0, n)?;
                let period = if level.energy > v_min {
                    Some(orbit_period(&potential, level.energy, c.mass)?)
                } else {
                    None
                };
                rows.push(LevelDoc::new(&level, period));
            }
            Ok(Report::Classical(ClassicalDoc {
                system: system_doc(config, "classical", config.size),
                j0: crate::report::round15(j0),
                rows,
            }))
        }
        Mode::Correspondence => {
            let potential = config.potential()?;
            let (system, pair) = quantum_system(config)?;
            let alpha_max = config.alpha_max.unwrap_or(CORRESPONDENCE_ALPHA_MAX);
            if 2 * alpha_max >= config.size {
                return Err(CliError::Config(format!(
                    "size {} leaves no state with alpha_max {alpha_max} on both sides",
                    config.size
                )));
            }
            let (lo, hi) = (alpha_max, config.size - 1 - alpha_max);
            let mut rows = Vec::new();
            for n in lo..=hi {
                let report = correspondence_report(&pair, &system, &potential, n, alpha_max, config.energy_rule)?;
                rows.extend(CorrespondenceRowDoc::rows(&report));
            }
            Ok(Report::Correspondence(CorrespondenceDoc {
                system: system_doc(config, "correspondence", config.size),
                energy_rule: config.energy_rule.to_string(),
                window: [lo, hi],
                rows,
            }))
        }
        Mode::Verify => {
            let outcomes = run_suite(&VerifyOptions {
                perturbation: config.perturbation,
                ..VerifyOptions::default()
            });
            Ok(Report::Verify(VerifyDoc::new(&outcomes)))
        }
    }
}

/// Writes `bytes` to a temporary file beside `path` and renames it into
/// place, so `path` never holds a partial report.
pub fn write_atomically(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let write_err = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(write_err)?;
    tmp.write_all(bytes).map_err(write_err)?;
    tmp.as_file().sync_all().map_err(write_err)?;
    tmp.persist(path).map_err(|e| write_err(e.error))?;
    Ok(())
}

/// Runs `config`, writing the report to `--out` or to `stdout`.
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> CliResult<()> {
    let report = build_report(config)?;
    let stdout_err = |source| CliError::Write {
        path: "<stdout>".into(),
        source,
    };
    if let Report::Verify(doc) = &report {
        for check in &doc.checks {
            let status = if check.passed { "PASS" } else { "FAIL" };
            writeln!(stdout, "{status} [{}] {}: {}", check.id, check.name, check.detail).map_err(stdout_err)?;
        }
    }
    let bytes = report.serialize(config.format);
    match &config.out {
        Some(path) => write_atomically(path, &bytes)?,
        None if config.mode != Mode::Verify => stdout.write_all(&bytes).map_err(stdout_err)?,
        None => {}
    }
    if let Report::Verify(doc) = &report {
        let failed = doc.checks.iter().filter(|c| !c.passed).count();
        if failed > 0 {
            return Err(CliError::VerifyFailed {
                failed,
                total: doc.checks.len(),
            });
        }
    }
    Ok(())
}
