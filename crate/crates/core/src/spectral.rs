//! Spectra and hermitian coordinate/momentum matrices in the energy eigenbasis.

use std::ops::RangeInclusive;

use crate::eigen::jacobi_eigh;
use crate::error::{invalid, numerical, Result};
pub use crate::potential::PolynomialPotential;
use crate::{CMatrix, Complex64, RMatrix};

/// Relative hermiticity defect accepted for built matrices.
pub const HERMITICITY_TOLERANCE: f64 = 1e-12;
/// Tolerance for the constraint flags of an [`AmplitudeTable`].
pub const CONSTRAINT_TOLERANCE: f64 = 1e-12;
/// Relative energy shift under basis doubling below which a basis is accepted.
pub const BASIS_CONVERGENCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub mass: f64,
    pub hbar: f64,
    pub omega: f64,
}

impl PhysicalConstants {
    pub fn new(mass: f64, hbar: f64, omega: f64) -> Result<Self> {
        for (name, v) in [("mass", mass), ("hbar", hbar), ("omega", omega)] {
            if !(v.is_finite() && v > 0.0) {
                return invalid(format!("{name} must be positive and finite, got {v}"));
            }
        }
        Ok(Self { mass, hbar, omega })
    }

    /// Planck's constant `h = 2πħ`.
    pub fn h(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.hbar
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            mass: 1.0,
            hbar: 1.0,
            omega: 1.0,
        }
    }
}

/// Retained stationary states, ordered by energy.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSystem {
    pub constants: PhysicalConstants,
    energies: Vec<f64>,
}

impl SpectralSystem {
    pub fn new(constants: PhysicalConstants, energies: Vec<f64>) -> Result<Self> {
        if energies.is_empty() {
            return invalid("a spectral system needs at least one state");
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return invalid("energies must be finite");
        }
        if energies.windows(2).any(|w| w[1] < w[0]) {
            return invalid("energies must be nondecreasing");
        }
        Ok(Self {
            constants,
            energies,
        })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn size(&self) -> usize {
        self.energies.len()
    }
}

/// `Ω(n, n') = (E_n − E_n') / ħ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTable {
    omega: RMatrix,
}

impl FrequencyTable {
    pub fn size(&self) -> usize {
        self.omega.nrows()
    }

    pub fn get(&self, n: usize, n_prime: usize) -> f64 {
        self.omega[(n, n_prime)]
    }

    /// Signed-label lookup; `None` when either label is outside `0..N`.
    pub fn at(&self, n: i64, n_prime: i64) -> Option<f64> {
        let size = self.size() as i64;
        if (0..size).contains(&n) && (0..size).contains(&n_prime) {
            Some(self.omega[(n as usize, n_prime as usize)])
        } else {
            None
        }
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.omega
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPair {
    pub x: CMatrix,
    pub p: CMatrix,
}

impl MatrixPair {
    pub fn size(&self) -> usize {
        self.x.nrows()
    }
}

pub fn transition_frequencies(system: &SpectralSystem) -> FrequencyTable {
    let e = system.energies();
    let hbar = system.constants.hbar;
    let n = e.len();
    FrequencyTable {
        omega: RMatrix::from_fn(n, n, |i, j| (e[i] - e[j]) / hbar),
    }
}

/// Entrywise `P(n,n') = i m Ω(n,n') X(n,n')`.
pub fn momentum_from_position(x: &CMatrix, omega: &FrequencyTable, mass: f64) -> Result<CMatrix> {
    let n = omega.size();
    if x.nrows() != n || x.ncols() != n {
        return invalid(format!(
            "position matrix is {}x{}, frequency table is {n}x{n}",
            x.nrows(),
            x.ncols()
        ));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| {
        Complex64::new(0.0, mass * omega.get(i, j)) * x[(i, j)]
    }))
}

/// `‖M − M†‖_F / max(1, ‖M‖_F)`.
pub fn hermiticity_defect(m: &CMatrix) -> Result<f64> {
    if m.nrows() != m.ncols() {
        return invalid(format!("matrix is {}x{}, not square", m.nrows(), m.ncols()));
    }
    Ok((m - m.adjoint()).norm() / m.norm().max(1.0))
}

pub fn build_oscillator(constants: PhysicalConstants, size: usize) -> Result<(SpectralSystem, MatrixPair)> {
    let constants = PhysicalConstants::new(constants.mass, constants.hbar, constants.omega)?;
    if size == 0 {
        return invalid("oscillator needs at least one state");
    }
    let PhysicalConstants { mass, hbar, omega } = constants;
    let energies = (0..size).map(|n| (n as f64 + 0.5) * hbar * omega).collect();
    let system = SpectralSystem::new(constants, energies)?;
    let x = ladder_position(size, mass, hbar, omega).map(|v| Complex64::new(v, 0.0));
    let p = momentum_from_position(&x, &transition_frequencies(&system), mass)?;
    Ok((system, MatrixPair { x, p }))
}

/// Oscillator-basis position matrix: `x(k,k+1) = sqrt((k+1) ħ / (2 m ω))`.
fn ladder_position(size: usize, mass: f64, hbar: f64, omega: f64) -> RMatrix {
    let scale = hbar / (2.0 * mass * omega);
    RMatrix::from_fn(size, size, |i, j| {
        if j == i + 1 {
            (j as f64 * scale).sqrt()
        } else if i == j + 1 {
            (i as f64 * scale).sqrt()
        } else {
            0.0
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisOptions {
    /// Double the basis until the kept energies move less than
    /// [`BASIS_CONVERGENCE`] (relative).
    pub verify_convergence: bool,
    /// Largest basis tried during convergence verification.
    pub max_basis: usize,
}

impl Default for BasisOptions {
    fn default() -> Self {
        Self {
            verify_convergence: true,
            max_basis: 1024,
        }
    }
}

/// Result of [`build_from_potential_with`].
#[derive(Debug, Clone)]
pub struct PotentialBuild {
    pub system: SpectralSystem,
    pub pair: MatrixPair,
    /// Basis size the returned matrices were computed in.
    pub basis_size: usize,
    /// Frequency of the auxiliary oscillator basis.
    pub basis_omega: f64,
    /// Largest relative energy shift seen in the accepted doubling step.
    pub energy_shift: Option<f64>,
}

pub fn build_from_potential(
    potential: &PolynomialPotential,
    constants: PhysicalConstants,
    basis_size: usize,
    keep: usize,
) -> Result<(SpectralSystem, MatrixPair)> {
    let build = build_from_potential_with(potential, constants, basis_size, keep, BasisOptions::default())?;
    Ok((build.system, build.pair))
}

pub fn build_from_potential_with(
    potential: &PolynomialPotential,
    constants: PhysicalConstants,
    basis_size: usize,
    keep: usize,
    options: BasisOptions,
) -> Result<PotentialBuild> {
    let constants = PhysicalConstants::new(constants.mass, constants.hbar, constants.omega)?;
    if keep == 0 {
        return invalid("keep must be at least 1");
    }
    if keep > basis_size / 2 {
        return invalid(format!(
            "keep = {keep} exceeds half the basis size {basis_size}"
        ));
    }
    let basis_omega = (2.0 * potential.coeff(2) / constants.mass).max(0.0).sqrt().max(1.0);

    let mut basis = basis_size;
    let mut current = diagonalize_in_basis(potential, constants, basis_omega, basis, keep)?;
    if !options.verify_convergence {
        return finish(current, constants, basis, basis_omega, None);
    }
    loop {
        let doubled_size = 2 * basis;
        if doubled_size > options.max_basis.max(2 * basis_size) {
            return numerical(format!(
                "energies not converged to {BASIS_CONVERGENCE:e} by basis size {basis}"
            ));
        }
        let doubled = diagonalize_in_basis(potential, constants, basis_omega, doubled_size, keep)?;
        let scale = constants.hbar * basis_omega;
        let shift = current
            .0
            .iter()
            .zip(&doubled.0)
            .map(|(a, b)| (a - b).abs() / b.abs().max(scale))
            .fold(0.0, f64::max);
        if shift < BASIS_CONVERGENCE {
            return finish(current, constants, basis, basis_omega, Some(shift));
        }
        basis = doubled_size;
        current = doubled;
    }
}

fn finish(
    (energies, x): (Vec<f64>, RMatrix),
    constants: PhysicalConstants,
    basis_size: usize,
    basis_omega: f64,
    energy_shift: Option<f64>,
) -> Result<PotentialBuild> {
    let system = SpectralSystem::new(constants, energies)?;
    let x = x.map(|v| Complex64::new(v, 0.0));
    let p = momentum_from_position(&x, &transition_frequencies(&system), constants.mass)?;
    Ok(PotentialBuild {
        system,
        pair: MatrixPair { x, p },
        basis_size,
        basis_omega,
        energy_shift,
    })
}

/// Lowest `keep` energies and the phase-fixed position matrix in their eigenbasis.
fn diagonalize_in_basis(
    potential: &PolynomialPotential,
    constants: PhysicalConstants,
    basis_omega: f64,
    basis: usize,
    keep: usize,
) -> Result<(Vec<f64>, RMatrix)> {
    let PhysicalConstants { mass, hbar, .. } = constants;
    // powers of x are exact on the first `basis` states when built in a
    // basis padded by the polynomial degree
    let padded = basis + potential.degree();
    let x_padded = ladder_position(padded, mass, hbar, basis_omega);

    let mut v_padded = RMatrix::identity(padded, padded) * potential.coeff(0);
    let mut power = RMatrix::identity(padded, padded);
    for k in 1..=potential.degree() {
        power = &power * &x_padded;
        let c = potential.coeff(k);
        if c != 0.0 {
            v_padded += &power * c;
        }
    }

    // kinetic energy p²/2m in the oscillator basis
    let p_scale = mass * basis_omega * hbar / 2.0;
    let mut h = v_padded.view((0, 0), (basis, basis)).into_owned();
    for k in 0..basis {
        h[(k, k)] += p_scale * (2 * k + 1) as f64 / (2.0 * mass);
        if k + 2 < basis {
            let off = -p_scale * (((k + 1) * (k + 2)) as f64).sqrt() / (2.0 * mass);
            h[(k, k + 2)] += off;
            h[(k + 2, k)] += off;
        }
    }
    let h = (&h + h.transpose()) * 0.5;

    let eig = jacobi_eigh(&h)?;
    let mut vectors = eig.vectors.columns(0, keep).into_owned();
    for mut col in vectors.column_iter_mut() {
        let mut lead = 0;
        for i in 1..col.len() {
            if col[i].abs() > col[lead].abs() {
                lead = i;
            }
        }
        if col[lead] < 0.0 {
            col.neg_mut();
        }
    }
    let x_basis = x_padded.view((0, 0), (basis, basis));
    let x = vectors.transpose() * (x_basis * &vectors);
    let x = (&x + x.transpose()) * 0.5;
    Ok((eig.values[..keep].to_vec(), x))
}

/// Transition amplitudes `A(n, α) = X(n, n − α)` over a window of states.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTable {
    window: RangeInclusive<usize>,
    alpha_max: usize,
    size: usize,
    entries: Vec<Option<Complex64>>,
    hermitian_consistent: bool,
    heisenberg_real: bool,
}

impl AmplitudeTable {
    pub fn window(&self) -> RangeInclusive<usize> {
        self.window.clone()
    }

    pub fn alpha_max(&self) -> usize {
        self.alpha_max
    }

    /// Dimension of the matrix the table was read from.
    pub fn size(&self) -> usize {
        self.size
    }

    /// `A(n, α) = conj(A(n − α, −α))` holds on every recorded pair.
    pub fn is_hermitian_consistent(&self) -> bool {
        self.hermitian_consistent
    }

    /// `A(n, α) = conj(A(n, −α))` holds on every recorded pair.
    pub fn is_heisenberg_real(&self) -> bool {
        self.heisenberg_real
    }

    fn slot(&self, n: i64, alpha: i64) -> Option<usize> {
        let (lo, hi) = (*self.window.start() as i64, *self.window.end() as i64);
        let amax = self.alpha_max as i64;
        let row = n - alpha;
        if n < lo || n > hi || alpha.abs() > amax || row < 0 || row >= self.size as i64 {
            return None;
        }
        Some(((n - lo) * (2 * amax + 1) + alpha + amax) as usize)
    }

    /// `A(n, α)`, or `None` outside the recorded range.
    pub fn get(&self, n: i64, alpha: i64) -> Option<Complex64> {
        self.slot(n, alpha).and_then(|i| self.entries[i])
    }

    /// Recorded `(n, α, A)` triples, ascending in `n` then `α`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, Complex64)> + '_ {
        let amax = self.alpha_max as i64;
        self.window.clone().flat_map(move |n| {
            (-amax..=amax).filter_map(move |a| self.get(n as i64, a).map(|v| (n, a, v)))
        })
    }

    fn get_first(&self, alpha: i64) -> Option<Complex64> {
        self.iter().find(|(_, a, _)| *a == alpha).map(|(_, _, v)| v)
    }

    fn orbit_is_constant(&self, alpha: i64, value: Complex64) -> bool {
        self.iter().all(|(_, a, v)| {
            (a != alpha || v == value) && (a != -alpha || v == value.conj())
        })
    }

    fn scale(&self) -> f64 {
        self.iter().map(|(_, _, v)| v.norm()).fold(1.0, f64::max)
    }

    fn recompute_flags(&mut self) {
        let tol = CONSTRAINT_TOLERANCE * self.scale();
        let mut hermitian = 0.0_f64;
        let mut real = 0.0_f64;
        for (n, a, v) in self.iter() {
            let n = n as i64;
            if let Some(w) = self.get(n - a, -a) {
                hermitian = hermitian.max((v - w.conj()).norm());
            }
            if let Some(w) = self.get(n, -a) {
                real = real.max((v - w.conj()).norm());
            }
        }
        self.hermitian_consistent = hermitian <= tol;
        self.heisenberg_real = real <= tol;
    }
}

pub fn to_amplitude_table(
    x: &CMatrix,
    window: RangeInclusive<usize>,
    alpha_max: usize,
) -> Result<AmplitudeTable> {
    let size = x.nrows();
    if x.ncols() != size {
        return invalid("position matrix must be square");
    }
    if window.is_empty() || *window.end() >= size {
        return invalid(format!(
            "window {}..={} does not fit a {size}-state matrix",
            window.start(),
            window.end()
        ));
    }
    let width = 2 * alpha_max + 1;
    let mut table = AmplitudeTable {
        entries: vec![None; (window.end() - window.start() + 1) * width],
        window,
        alpha_max,
        size,
        hermitian_consistent: false,
        heisenberg_real: false,
    };
    let amax = alpha_max as i64;
    for n in table.window.clone() {
        for a in -amax..=amax {
            if let Some(i) = table.slot(n as i64, a) {
                table.entries[i] = Some(x[(n, (n as i64 - a) as usize)]);
            }
        }
    }
    table.recompute_flags();
    Ok(table)
}

/// Projects a hermitian-consistent table onto tables that also obey the
/// reality rule `A(n, α) = conj(A(n, −α))`. Each `α`-diagonal and its
/// conjugate partner at `−α` are replaced by their common mean, which makes
/// the result independent of `n`.
pub fn impose_heisenberg_reality(table: &AmplitudeTable) -> Result<AmplitudeTable> {
    if !table.hermitian_consistent {
        return invalid("table does not satisfy the hermiticity-derived constraint");
    }
    let mut out = table.clone();
    let amax = table.alpha_max as i64;
    for a in 0..=amax {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut count = 0usize;
        for (_, alpha, v) in table.iter() {
            if alpha == a {
                sum += v;
                count += 1;
            } else if alpha == -a {
                sum += v.conj();
                count += 1;
            }
        }
        if count == 0 {
            continue;
        }
        let first = table.get_first(a);
        let mean = match first {
            Some(v) if table.orbit_is_constant(a, v) => v,
            _ => sum / count as f64,
        };
        for n in table.window.clone() {
            let n = n as i64;
            if a == 0 {
                // A(n,0) = conj(A(n,0)) only forces a real diagonal
                if let Some(i) = out.slot(n, 0) {
                    out.entries[i] = out.entries[i].map(|v| Complex64::new(v.re, 0.0));
                }
                continue;
            }
            if let Some(i) = out.slot(n, a) {
                if out.entries[i].is_some() {
                    out.entries[i] = Some(mean);
                }
            }
            if let Some(i) = out.slot(n, -a) {
                if out.entries[i].is_some() {
                    out.entries[i] = Some(mean.conj());
                }
            }
        }
    }
    out.recompute_flags();
    Ok(out)
}

#[cfg(test)]
// expected values are frozen 10-digit literals
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;

    fn unit() -> PhysicalConstants {
        PhysicalConstants::default()
    }

    #[test]
    fn oscillator_single_state() {
        let (sys, pair) = build_oscillator(unit(), 1).unwrap();
        assert_eq!(sys.energies(), &[0.5]);
        assert_eq!(pair.x[(0, 0)], Complex64::new(0.0, 0.0));
        assert_eq!(pair.p[(0, 0)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn oscillator_elements() {
        let (_, pair) = build_oscillator(unit(), 4).unwrap();
        assert!((pair.x[(0, 1)].re - 0.7071067812).abs() < 1e-10);
        assert!((pair.x[(1, 2)].re - 1.0).abs() < 1e-15);
        assert!((pair.x[(2, 3)].re - 1.2247448714).abs() < 1e-10);
        assert!((pair.p[(0, 1)] - Complex64::new(0.0, -0.7071067812)).norm() < 1e-10);
        assert!((pair.p[(1, 0)] - Complex64::new(0.0, 0.7071067812)).norm() < 1e-10);
        assert_eq!(pair.x[(0, 2)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn oscillator_recursion_oracle() {
        // ħ = 2mω(|X(n+1,n)|² − |X(n,n−1)|²) with X(0,−1) = 0
        let c = PhysicalConstants::new(1.7, 0.6, 2.3).unwrap();
        let (_, pair) = build_oscillator(c, 10).unwrap();
        let mut prev_sq = 0.0;
        for n in 0..9 {
            let sq = prev_sq + c.hbar / (2.0 * c.mass * c.omega);
            assert!((pair.x[(n + 1, n)].re - sq.sqrt()).abs() < 1e-14);
            prev_sq = sq;
        }
    }

    #[test]
    fn oscillator_errors() {
        assert!(build_oscillator(unit(), 0).is_err());
        let bad = PhysicalConstants {
            mass: -1.0,
            ..unit()
        };
        assert!(build_oscillator(bad, 4).is_err());
        let bad = PhysicalConstants {
            omega: 0.0,
            ..unit()
        };
        assert!(build_oscillator(bad, 4).is_err());
    }

    #[test]
    fn oscillator_hamiltonian_diagonal() {
        let c = PhysicalConstants::new(1.3, 0.8, 1.9).unwrap();
        let n = 12;
        let (sys, pair) = build_oscillator(c, n).unwrap();
        let h = &pair.p * &pair.p / Complex64::new(2.0 * c.mass, 0.0)
            + &pair.x * &pair.x * Complex64::new(0.5 * c.mass * c.omega * c.omega, 0.0);
        let inner = n - 2;
        let mut off = 0.0;
        let mut total = 0.0;
        for i in 0..inner {
            for j in 0..inner {
                total += h[(i, j)].norm_sqr();
                if i != j {
                    off += h[(i, j)].norm_sqr();
                }
            }
            let e = sys.energies()[i];
            assert!((h[(i, i)].re - e).abs() <= 1e-10 * e);
        }
        assert!(off.sqrt() <= 1e-10 * total.sqrt());
    }

    #[test]
    fn frequencies() {
        let sys = SpectralSystem::new(unit(), vec![0.5, 1.5, 2.5]).unwrap();
        let w = transition_frequencies(&sys);
        assert_eq!(w.get(0, 1), -1.0);
        assert_eq!(w.get(2, 0), 2.0);
        for n in 0..3 {
            assert_eq!(w.get(n, n), 0.0);
        }
        let c = PhysicalConstants::new(1.0, 2.0, 1.0).unwrap();
        let sys = SpectralSystem::new(c, vec![0.5, 1.5]).unwrap();
        assert_eq!(transition_frequencies(&sys).get(1, 0), 0.5);
    }

    #[test]
    fn spectral_system_validation() {
        assert!(SpectralSystem::new(unit(), vec![]).is_err());
        assert!(SpectralSystem::new(unit(), vec![1.0, 0.5]).is_err());
        assert!(SpectralSystem::new(unit(), vec![f64::NAN]).is_err());
    }

    #[test]
    fn momentum_identity_and_shape() {
        let sys = SpectralSystem::new(unit(), vec![0.1, 0.7, 2.0]).unwrap();
        let w = transition_frequencies(&sys);
        let p = momentum_from_position(&CMatrix::identity(3, 3), &w, 1.0).unwrap();
        assert!(p.iter().all(|v| v.norm() == 0.0));
        assert!(momentum_from_position(&CMatrix::identity(2, 2), &w, 1.0).is_err());
    }

    #[test]
    fn defect_examples() {
        let m = CMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0].map(|v| Complex64::new(v, 0.0)));
        assert_eq!(hermiticity_defect(&m).unwrap(), 0.0);
        let m = CMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0].map(|v| Complex64::new(v, 0.0)));
        assert!((hermiticity_defect(&m).unwrap() - 1.4142135624).abs() < 1e-10);
        // M − M† = 2i·I has Frobenius norm 2√2, and ‖M‖_F = √2
        let m = CMatrix::identity(2, 2) * Complex64::new(0.0, 1.0);
        assert!((hermiticity_defect(&m).unwrap() - 2.0).abs() < 1e-12);
        assert!(hermiticity_defect(&CMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn amplitude_table_reads_and_flags() {
        let (_, pair) = build_oscillator(unit(), 4).unwrap();
        let t = to_amplitude_table(&pair.x, 1..=2, 1).unwrap();
        assert!((t.get(1, 1).unwrap().re - 0.7071067812).abs() < 1e-10);
        assert!((t.get(1, -1).unwrap().re - 1.0).abs() < 1e-15);
        assert!(t.is_hermitian_consistent());
        assert!(!t.is_heisenberg_real());
        assert!(to_amplitude_table(&pair.x, 2..=4, 1).is_err());
    }

    #[test]
    fn reality_projection_averages_orbit() {
        let (_, pair) = build_oscillator(unit(), 8).unwrap();
        let t = to_amplitude_table(&pair.x, 1..=5, 1).unwrap();
        let forced = impose_heisenberg_reality(&t).unwrap();
        // orbit: A(n,1) = sqrt(n/2) and conj A(n,-1) = sqrt((n+1)/2), n = 1..5
        let expected = ((1..=5).map(|n| (n as f64 / 2.0).sqrt()).sum::<f64>()
            + (2..=6).map(|n| (n as f64 / 2.0).sqrt()).sum::<f64>())
            / 10.0;
        for n in 1..=5 {
            assert!((forced.get(n, 1).unwrap().re - expected).abs() < 1e-12);
            assert!((forced.get(n, -1).unwrap().re - expected).abs() < 1e-12);
        }
        assert!(forced.is_heisenberg_real());
        assert!(forced.is_hermitian_consistent());
    }

    #[test]
    fn reality_projection_fixed_point() {
        let c = Complex64::new(0.4, 0.0);
        let x = CMatrix::from_fn(6, 6, |i, j| if i.abs_diff(j) == 1 { c } else { Complex64::new(0.0, 0.0) });
        let t = to_amplitude_table(&x, 1..=4, 1).unwrap();
        assert!(t.is_heisenberg_real());
        assert_eq!(impose_heisenberg_reality(&t).unwrap(), t);
    }

    #[test]
    fn reality_projection_requires_hermitian_table() {
        let mut x = CMatrix::zeros(4, 4);
        x[(1, 0)] = Complex64::new(1.0, 0.0);
        let t = to_amplitude_table(&x, 0..=3, 1).unwrap();
        assert!(!t.is_hermitian_consistent());
        assert!(impose_heisenberg_reality(&t).is_err());
    }

    #[test]
    fn potential_harmonic_matches_oscillator() {
        let v = PolynomialPotential::harmonic(1.0, 1.0).unwrap();
        let (sys, pair) = build_from_potential(&v, unit(), 64, 16).unwrap();
        let (_, osc) = build_oscillator(unit(), 16).unwrap();
        for (n, e) in sys.energies().iter().enumerate() {
            assert!((e - (n as f64 + 0.5)).abs() < 1e-10);
        }
        assert!((&pair.x - &osc.x).iter().all(|d| d.norm() < 1e-9));
        assert!((&pair.p - &osc.p).iter().all(|d| d.norm() < 1e-9));
    }

    #[test]
    fn potential_quartic_ground_state() {
        let v = PolynomialPotential::new(vec![0.0, 0.0, 0.5, 0.0, 0.05]).unwrap();
        let (sys, pair) = build_from_potential(&v, unit(), 160, 40).unwrap();
        let first_order = 0.5 + 3.0 * 0.05 / 4.0;
        assert!((sys.energies()[0] - first_order).abs() <= 0.01 * first_order);
        assert!(hermiticity_defect(&pair.x).unwrap() <= HERMITICITY_TOLERANCE);
        assert!(hermiticity_defect(&pair.p).unwrap() <= HERMITICITY_TOLERANCE);
    }

    #[test]
    fn potential_argument_errors() {
        assert!(PolynomialPotential::new(vec![0.0, 1.0]).is_err());
        let v = PolynomialPotential::harmonic(1.0, 1.0).unwrap();
        assert!(build_from_potential(&v, unit(), 10, 6).is_err());
        assert!(build_from_potential(&v, unit(), 10, 0).is_err());
    }
}
