//! Classical periodic orbits in confining one-dimensional potentials.
//!
//! Integrals over an orbit use the substitution `x = mid + half·sin θ`,
//! which turns the inverse-square-root endpoint singularity of the period
//! integrand into a smooth function of `θ`, so a fixed Gauss-Legendre rule
//! converges exponentially. The kinetic energy `E − V(x)` is evaluated as a
//! divided difference about the nearer turning point so it stays accurate
//! right up to the endpoints.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{invalid, numerical, LabError, Result};
use crate::potential::{CriticalPoint, PolynomialPotential};
use crate::quadrature::GaussLegendre;
use crate::spectral::{transition_frequencies, MatrixPair, SpectralSystem};
use crate::Complex64;

pub const DEFAULT_QUADRATURE_NODES: usize = 200;
pub const DEFAULT_RK4_STEPS: usize = 4096;
const TURNING_POINT_BISECTIONS: usize = 80;
/// Largest relative energy drift tolerated over one integrated period.
pub const ENERGY_DRIFT_TOLERANCE: f64 = 1e-8;
/// Truncation test of [`action_from_fourier`]: the last retained harmonics
/// must be below this fraction of `|X_1|`.
pub const FOURIER_TAIL_TOLERANCE: f64 = 1e-8;
pub const QUANTIZATION_TOLERANCE: f64 = 1e-10;
pub const QUANTIZATION_MAX_ITERATIONS: usize = 200;

/// Numerical resolution of the classical solvers.
#[derive(Debug, Clone)]
pub struct ClassicalSolver {
    quadrature: GaussLegendre,
    rk4_steps: usize,
}

impl Default for ClassicalSolver {
    fn default() -> Self {
        Self::new(DEFAULT_QUADRATURE_NODES, DEFAULT_RK4_STEPS)
    }
}

fn default_solver() -> &'static ClassicalSolver {
    static SOLVER: OnceLock<ClassicalSolver> = OnceLock::new();
    SOLVER.get_or_init(ClassicalSolver::default)
}

/// A potential together with its stationary points.
#[derive(Debug, Clone)]
pub struct Well {
    potential: PolynomialPotential,
    critical: Vec<CriticalPoint>,
    x_min: f64,
    v_min: f64,
}

impl Well {
    pub fn new(potential: &PolynomialPotential) -> Self {
        let critical = potential.critical_points();
        let (x_min, v_min) = potential.minimum();
        Self {
            potential: potential.clone(),
            critical,
            x_min,
            v_min,
        }
    }

    pub fn potential(&self) -> &PolynomialPotential {
        &self.potential
    }

    pub fn minimum(&self) -> (f64, f64) {
        (self.x_min, self.v_min)
    }

    /// Outermost classical turning points `(x₋, x₊)` at energy `E`.
    pub fn turning_points(&self, energy: f64) -> Result<(f64, f64)> {
        if !energy.is_finite() || energy <= self.v_min {
            return invalid(format!(
                "energy {energy} does not exceed the potential minimum {}",
                self.v_min
            ));
        }
        let v = &self.potential;
        let forbidden = |x: f64| v.value(x) >= energy;

        // V is monotone between consecutive critical points, so each piece
        // holds at most one crossing
        let mut crossings: Vec<(f64, f64)> = Vec::new();
        let first = self.critical.first().map(|c| c.x).unwrap_or(self.x_min);
        let last = self.critical.last().map(|c| c.x).unwrap_or(self.x_min);
        if !forbidden(first) {
            crossings.push((self.expand(first, -1.0, energy), first));
        }
        for pair in self.critical.windows(2) {
            let (a, b) = (pair[0].x, pair[1].x);
            if forbidden(a) != forbidden(b) {
                crossings.push((a, b));
            }
        }
        if !forbidden(last) {
            crossings.push((last, self.expand(last, 1.0, energy)));
        }
        if crossings.len() > 2 {
            return Err(LabError::UnsupportedTopology(format!(
                "{} turning points at energy {energy}; the classically allowed region is not a single interval",
                crossings.len()
            )));
        }
        if crossings.len() != 2 {
            return numerical(format!("found {} turning points at energy {energy}", crossings.len()));
        }
        let lower = self.bisect(crossings[0], energy);
        let upper = self.bisect(crossings[1], energy);
        Ok((lower, upper))
    }

    /// Steps outward from `x` until `V > E`.
    fn expand(&self, x: f64, direction: f64, energy: f64) -> f64 {
        let mut step = 1.0_f64.max(x.abs());
        let mut probe = x + direction * step;
        while self.potential.value(probe) < energy {
            step *= 2.0;
            probe = x + direction * step;
        }
        probe
    }

    fn bisect(&self, (mut a, mut b): (f64, f64), energy: f64) -> f64 {
        let fa_forbidden = self.potential.value(a) >= energy;
        for _ in 0..TURNING_POINT_BISECTIONS {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if (self.potential.value(mid) >= energy) == fa_forbidden {
                a = mid;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalOrbit {
    pub potential: PolynomialPotential,
    pub energy: f64,
    pub mass: f64,
    pub turning_points: (f64, f64),
    pub period: f64,
    /// `ω(E) = 2π / T`.
    pub omega: f64,
    pub alpha_max: usize,
    /// `X_α` for `α = −alpha_max..=alpha_max`.
    pub fourier: Vec<Complex64>,
    /// Largest relative energy drift seen while integrating.
    pub energy_drift: f64,
}

impl ClassicalOrbit {
    /// `X_α`; zero beyond `alpha_max`.
    pub fn x_coeff(&self, alpha: i64) -> Complex64 {
        if alpha.unsigned_abs() as usize > self.alpha_max {
            return Complex64::new(0.0, 0.0);
        }
        self.fourier[(alpha + self.alpha_max as i64) as usize]
    }

    /// `P_α = i m α ω X_α`.
    pub fn p_coeff(&self, alpha: i64) -> Complex64 {
        Complex64::new(0.0, self.mass * alpha as f64 * self.omega) * self.x_coeff(alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizationResult {
    pub n: u32,
    pub energy: f64,
    pub action: f64,
    pub j0: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Zero-point offset `J₀ = h/2`.
pub fn half_quantum_offset(hbar: f64) -> f64 {
    PI * hbar
}

impl ClassicalSolver {
    pub fn new(quadrature_nodes: usize, rk4_steps: usize) -> Self {
        Self {
            quadrature: GaussLegendre::new(quadrature_nodes),
            rk4_steps,
        }
    }

    /// `∫ f(x, E − V(x)) dx` over `[x₋, x₊]` in the `θ` substitution.
    fn orbit_integral<F>(&self, well: &Well, energy: f64, f: F) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        let (lower, upper) = well.turning_points(energy)?;
        let v = &well.potential;
        let mid = 0.5 * (lower + upper);
        let half = 0.5 * (upper - lower);
        let residual_upper = energy - v.value(upper);
        let residual_lower = energy - v.value(lower);
        let value = self.quadrature.integrate(-0.5 * PI, 0.5 * PI, |theta| {
            let (s, c) = theta.sin_cos();
            let x = mid + half * s;
            let kinetic = if s >= 0.0 {
                // x₊ − x = half (1 − sin θ) = half cos²θ / (1 + sin θ)
                let gap = half * c * c / (1.0 + s);
                residual_upper + gap * v.divided_difference(upper, x)
            } else {
                let gap = half * c * c / (1.0 - s);
                residual_lower - gap * v.divided_difference(lower, x)
            };
            f(kinetic.max(f64::MIN_POSITIVE)) * half * c
        });
        Ok(value)
    }

    pub fn turning_points(&self, potential: &PolynomialPotential, energy: f64, mass: f64) -> Result<(f64, f64)> {
        check_mass(mass)?;
        Well::new(potential).turning_points(energy)
    }

    pub fn period_in(&self, well: &Well, energy: f64, mass: f64) -> Result<f64> {
        check_mass(mass)?;
        let scale = (0.5 * mass).sqrt();
        self.orbit_integral(well, energy, |k| 2.0 * scale / k.sqrt())
    }

    pub fn action_in(&self, well: &Well, energy: f64, mass: f64) -> Result<f64> {
        check_mass(mass)?;
        self.orbit_integral(well, energy, |k| 2.0 * (2.0 * mass * k).sqrt())
    }

    pub fn orbit_period(&self, potential: &PolynomialPotential, energy: f64, mass: f64) -> Result<f64> {
        self.period_in(&Well::new(potential), energy, mass)
    }

    pub fn action_direct(&self, potential: &PolynomialPotential, energy: f64, mass: f64) -> Result<f64> {
        self.action_in(&Well::new(potential), energy, mass)
    }

    pub fn orbit_fourier(
        &self,
        potential: &PolynomialPotential,
        energy: f64,
        mass: f64,
        alpha_max: usize,
    ) -> Result<ClassicalOrbit> {
        self.orbit_fourier_in(&Well::new(potential), energy, mass, alpha_max)
    }

    /// Integrates one period from `(x₊, v = 0)` with fixed-step RK4 and
    /// extracts `X_α` by a discrete Fourier sum over the samples.
    pub fn orbit_fourier_in(&self, well: &Well, energy: f64, mass: f64, alpha_max: usize) -> Result<ClassicalOrbit> {
        let turning_points = well.turning_points(energy)?;
        let period = self.period_in(well, energy, mass)?;
        let v = &well.potential;
        let steps = self.rk4_steps;
        let h = period / steps as f64;
        let accel = |x: f64| -v.derivative(x) / mass;
        let energy_scale = energy.abs().max(energy - well.v_min);

        let mut samples = Vec::with_capacity(steps);
        let (mut x, mut vel) = (turning_points.1, 0.0);
        let mut drift = 0.0_f64;
        for _ in 0..steps {
            samples.push(x);
            let k1x = vel;
            let k1v = accel(x);
            let k2x = vel + 0.5 * h * k1v;
            let k2v = accel(x + 0.5 * h * k1x);
            let k3x = vel + 0.5 * h * k2v;
            let k3v = accel(x + 0.5 * h * k2x);
            let k4x = vel + h * k3v;
            let k4v = accel(x + h * k3x);
            x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
            vel += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            let e = 0.5 * mass * vel * vel + v.value(x);
            drift = drift.max((e - energy).abs() / energy_scale);
        }
        if drift > ENERGY_DRIFT_TOLERANCE {
            return numerical(format!(
                "energy drift {drift:e} over one period exceeds {ENERGY_DRIFT_TOLERANCE:e}"
            ));
        }

        let amax = alpha_max as i64;
        let fourier = (-amax..=amax)
            .map(|alpha| {
                let mut sum = Complex64::new(0.0, 0.0);
                for (j, xj) in samples.iter().enumerate() {
                    // e^{−iαωt_j} with ωt_j = 2πj/N
                    let phase = -2.0 * PI * ((alpha * j as i64).rem_euclid(steps as i64)) as f64 / steps as f64;
                    sum += Complex64::from_polar(*xj, phase);
                }
                sum / steps as f64
            })
            .collect();

        Ok(ClassicalOrbit {
            potential: well.potential.clone(),
            energy,
            mass,
            turning_points,
            period,
            omega: 2.0 * PI / period,
            alpha_max,
            fourier,
            energy_drift: drift,
        })
    }

    /// Solves `J(E) = n h + J₀` by bisection on the monotone map `E ↦ J(E)`.
    pub fn quantize(
        &self,
        potential: &PolynomialPotential,
        mass: f64,
        hbar: f64,
        j0: f64,
        n: u32,
    ) -> Result<QuantizationResult> {
        check_mass(mass)?;
        if !(hbar.is_finite() && hbar > 0.0) {
            return invalid(format!("hbar must be positive, got {hbar}"));
        }
        if !(j0.is_finite() && j0 >= 0.0) {
            return invalid(format!("J0 must be nonnegative, got {j0}"));
        }
        let well = Well::new(potential);
        let h = 2.0 * PI * hbar;
        let target = n as f64 * h + j0;
        let (x_min, v_min) = well.minimum();
        if target == 0.0 {
            return Ok(QuantizationResult {
                n,
                energy: v_min,
                action: 0.0,
                j0,
                converged: true,
                iterations: 0,
            });
        }
        let tolerance = QUANTIZATION_TOLERANCE * h;

        // harmonic estimate E − V_min ≈ J ω / 2π for the first bracket
        let well_omega = (potential.second_derivative(x_min) / mass).max(0.0).sqrt();
        let mut step = if well_omega > 0.0 {
            target * well_omega / (2.0 * PI)
        } else {
            1.0
        };
        let mut lo = (v_min, 0.0);
        let mut hi = loop {
            let e = v_min + step;
            let j = self.action_in(&well, e, mass)?;
            if j > target {
                break (e, j);
            }
            lo = (e, j);
            step *= 2.0;
            if !step.is_finite() {
                return numerical("could not bracket the quantized energy");
            }
        };

        let mut iterations = 0;
        let mut best = if (hi.1 - target).abs() < (lo.1 - target).abs() { hi } else { lo };
        while iterations < QUANTIZATION_MAX_ITERATIONS && (best.1 - target).abs() > tolerance {
            iterations += 1;
            let mid = 0.5 * (lo.0 + hi.0);
            if mid <= lo.0 || mid >= hi.0 {
                break;
            }
            let j = self.action_in(&well, mid, mass)?;
            if !(lo.1..=hi.1).contains(&j) {
                return numerical(format!(
                    "action is not monotone in energy near E = {mid} (J = {j}, bracket [{}, {}])",
                    lo.1, hi.1
                ));
            }
            if j > target {
                hi = (mid, j);
            } else {
                lo = (mid, j);
            }
            if (j - target).abs() < (best.1 - target).abs() {
                best = (mid, j);
            }
        }
        Ok(QuantizationResult {
            n,
            energy: best.0,
            action: best.1,
            j0,
            converged: (best.1 - target).abs() <= tolerance,
            iterations,
        })
    }
}

fn check_mass(mass: f64) -> Result<()> {
    if !(mass.is_finite() && mass > 0.0) {
        return invalid(format!("mass must be positive, got {mass}"));
    }
    Ok(())
}

pub fn turning_points(potential: &PolynomialPotential, energy: f64, mass: f64) -> Result<(f64, f64)> {
    default_solver().turning_points(potential, energy, mass)
}

/// `T = 2 ∫ sqrt(m / 2(E − V)) dx` over `[x₋, x₊]`.
pub fn orbit_period(potential: &PolynomialPotential, energy: f64, mass: f64) -> Result<f64> {
    default_solver().orbit_period(potential, energy, mass)
}

/// `J = ∮ p dx = 2 ∫ sqrt(2m(E − V)) dx` over `[x₋, x₊]`.
pub fn action_direct(potential: &PolynomialPotential, energy: f64, mass: f64) -> Result<f64> {
    default_solver().action_direct(potential, energy, mass)
}

pub fn orbit_fourier(
    potential: &PolynomialPotential,
    energy: f64,
    mass: f64,
    alpha_max: usize,
) -> Result<ClassicalOrbit> {
    default_solver().orbit_fourier(potential, energy, mass, alpha_max)
}

/// `J = 2π m ω Σ_α α² |X_α|²`, the action written through Fourier
/// coefficients of a real trajectory.
pub fn action_from_fourier(orbit: &ClassicalOrbit) -> Result<f64> {
    let first = orbit.x_coeff(1).norm();
    let tail = (2.max(orbit.alpha_max.saturating_sub(1))..=orbit.alpha_max)
        .chain(if orbit.alpha_max < 2 { Some(orbit.alpha_max) } else { None })
        .map(|a| orbit.x_coeff(a as i64).norm())
        .fold(0.0, f64::max);
    if tail > FOURIER_TAIL_TOLERANCE * first {
        return invalid(format!(
            "Fourier series truncated too early: |X_{}| tail {tail:e} vs |X_1| {first:e}",
            orbit.alpha_max
        ));
    }
    let amax = orbit.alpha_max as i64;
    let sum: f64 = (-amax..=amax)
        .map(|a| (a * a) as f64 * orbit.x_coeff(a).norm_sqr())
        .sum();
    Ok(2.0 * PI * orbit.mass * orbit.omega * sum)
}

pub fn quantize(potential: &PolynomialPotential, mass: f64, hbar: f64, j0: f64, n: u32) -> Result<QuantizationResult> {
    default_solver().quantize(potential, mass, hbar, j0, n)
}

/// Energy at which the classical orbit is compared with the transition
/// `n → n − α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnergyRule {
    /// `E*` = `E_n`.
    State,
    /// `E*` = `(E_n + E_{n−α}) / 2`.
    #[default]
    Mean,
}

impl EnergyRule {
    pub fn energy(self, energies: &[f64], n: usize, alpha: usize) -> f64 {
        match self {
            EnergyRule::State => energies[n],
            EnergyRule::Mean => 0.5 * (energies[n] + energies[n - alpha]),
        }
    }
}

impl fmt::Display for EnergyRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnergyRule::State => "state",
            EnergyRule::Mean => "mean",
        })
    }
}

impl FromStr for EnergyRule {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "state" => Ok(EnergyRule::State),
            "mean" => Ok(EnergyRule::Mean),
            other => invalid(format!("unknown energy rule '{other}' (expected state or mean)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceRow {
    pub alpha: usize,
    /// Classical evaluation energy `E*`.
    pub energy: f64,
    pub quantum_amplitude: f64,
    pub classical_amplitude: f64,
    pub amplitude_deviation: f64,
    /// `None` when the classical harmonic is negligible.
    pub relative_deviation: Option<f64>,
    pub quantum_frequency: f64,
    pub classical_frequency: f64,
    pub frequency_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceReport {
    pub n: usize,
    pub rule: EnergyRule,
    pub rows: Vec<CorrespondenceRow>,
}

/// Compares `|X_{n,n−α}|` and `ω(n,n−α)` with the classical `|X_α(E*)|` and
/// `α ω(E*)` for `α = 1..=alpha_max`.
pub fn correspondence_report(
    pair: &MatrixPair,
    system: &SpectralSystem,
    potential: &PolynomialPotential,
    n: usize,
    alpha_max: usize,
    rule: EnergyRule,
) -> Result<CorrespondenceReport> {
    let size = system.size();
    if pair.size() != size {
        return invalid("matrix pair does not match the spectral system size");
    }
    if alpha_max == 0 || n < alpha_max || n + alpha_max >= size {
        return invalid(format!(
            "state {n} with alpha_max {alpha_max} is outside the comparison window {alpha_max}..={}",
            size as i64 - 1 - alpha_max as i64
        ));
    }
    let mass = system.constants.mass;
    let freqs = transition_frequencies(system);
    let well = Well::new(potential);
    let solver = default_solver();
    let mut rows = Vec::with_capacity(alpha_max);
    for alpha in 1..=alpha_max {
        let energy = rule.energy(system.energies(), n, alpha);
        let orbit = solver.orbit_fourier_in(&well, energy, mass, alpha_max)?;
        let quantum_amplitude = pair.x[(n, n - alpha)].norm();
        let classical_amplitude = orbit.x_coeff(alpha as i64).norm();
        let amplitude_deviation = (quantum_amplitude - classical_amplitude).abs();
        let relative_deviation = (classical_amplitude > FOURIER_TAIL_TOLERANCE * orbit.x_coeff(1).norm())
            .then(|| amplitude_deviation / classical_amplitude);
        let quantum_frequency = freqs.get(n, n - alpha);
        let classical_frequency = alpha as f64 * orbit.omega;
        rows.push(CorrespondenceRow {
            alpha,
            energy,
            quantum_amplitude,
            classical_amplitude,
            amplitude_deviation,
            relative_deviation,
            quantum_frequency,
            classical_frequency,
            frequency_deviation: (quantum_frequency - classical_frequency).abs() / classical_frequency,
        });
    }
    Ok(CorrespondenceReport { n, rule, rows })
}
