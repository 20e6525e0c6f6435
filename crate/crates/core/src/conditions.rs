//! Competing forms of the matrix-mechanics quantum condition.
//!
//! Every evaluator works on the `(n, n)` slice of some sum over transition
//! partners `n ± α`, `α ∈ [−alpha_max, alpha_max]`, accumulated in ascending
//! `α` with the two printed terms in order. The forms are:
//!
//! * Heisenberg's amplitude condition `m Σ {|X_{n+α,n}|² ω(n+α,n) − |X_{n−α,n}|² ω(n,n−α)}`,
//!   read either literally on hermitian matrix entries or on an amplitude
//!   table forced to obey the reality rule (where it collapses to zero).
//! * The Born-Jordan / Thomas-Kuhn product form
//!   `m Σ {X_{n,n+α} X_{n+α,n} ω(n+α,n) − X_{n,n−α} X_{n−α,n} ω(n,n−α)}`.
//! * The modified form, built from the `(n, n)` element of `∮ p̂ dx̂`, in
//!   which `X_{n±α,n}` is replaced by `conj(X_{n,n±α})`.
//! * The nearest-neighbour rewrite of the Born-Jordan condition, which does
//!   not reproduce `ħ` even for the oscillator.
//!
//! Values that are real for hermitian input are computed in complex
//! arithmetic and checked before the imaginary part is dropped.

use crate::error::{invalid, Result};
use crate::spectral::{
    hermiticity_defect, impose_heisenberg_reality, to_amplitude_table, AmplitudeTable,
    FrequencyTable, MatrixPair, PhysicalConstants, SpectralSystem,
};
use crate::{CMatrix, Complex64};

/// Imaginary parts above this fraction of the summed term magnitudes are
/// rejected when a real value is expected.
pub const REALNESS_TOLERANCE: f64 = 1e-10;
/// Entries below this magnitude count as zero when sizing bands.
pub const BAND_CUTOFF: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn commutator(x: &CMatrix, p: &CMatrix) -> Result<CMatrix> {
    if x.shape() != p.shape() || x.nrows() != x.ncols() {
        return invalid(format!(
            "commutator needs equal square shapes, got {:?} and {:?}",
            x.shape(),
            p.shape()
        ));
    }
    Ok(x * p - p * x)
}

/// Reads `M[row, col]` for signed labels; out-of-range reads give `None`.
fn entry(m: &CMatrix, row: i64, col: i64) -> Option<Complex64> {
    let n = m.nrows() as i64;
    if (0..n).contains(&row) && (0..n).contains(&col) {
        Some(m[(row as usize, col as usize)])
    } else {
        None
    }
}

fn check_window(n: usize, alpha_max: usize, size: usize) -> Result<()> {
    if n + alpha_max >= size {
        return invalid(format!(
            "state {n} lies outside the evaluation window n <= {} (size {size}, alpha_max {alpha_max})",
            size as i64 - 1 - alpha_max as i64
        ));
    }
    Ok(())
}

fn check_frequencies(x: &CMatrix, freqs: &FrequencyTable) -> Result<()> {
    if x.nrows() != x.ncols() || x.nrows() != freqs.size() {
        return invalid(format!(
            "matrix shape {:?} does not match {} frequency labels",
            x.shape(),
            freqs.size()
        ));
    }
    Ok(())
}

/// Accumulates complex terms and remembers their absolute mass so the
/// realness check has a scale.
#[derive(Default)]
struct RealSum {
    total: Complex64,
    magnitude: f64,
}

impl RealSum {
    fn add(&mut self, term: Complex64) {
        self.total += term;
        self.magnitude += term.norm();
    }

    fn real(self, what: &str) -> Result<f64> {
        if self.total.im.abs() > REALNESS_TOLERANCE * self.magnitude.max(f64::MIN_POSITIVE) {
            return invalid(format!(
                "{what} has imaginary part {:e}; input is not hermitian",
                self.total.im
            ));
        }
        Ok(self.total.re)
    }
}

/// Where Heisenberg's amplitude condition reads its amplitudes from.
#[derive(Debug, Clone, Copy)]
pub enum AmplitudeSource<'a> {
    /// Literal entries of a (hermitian) coordinate matrix.
    Matrix(&'a CMatrix),
    /// A transition-amplitude table, typically after the reality rule has
    /// been imposed.
    Table(&'a AmplitudeTable),
}

/// `m Σ_α {X*_{n+α,n} X_{n+α,n} ω(n+α,n) − X*_{n−α,n} X_{n−α,n} ω(n,n−α)}`.
///
/// For a matrix, labels outside `0..N` contribute zero and `n` must satisfy
/// `n + alpha_max < N`. For a table, every row `n ± α` must lie inside the
/// table window.
pub fn heisenberg_condition(
    source: AmplitudeSource<'_>,
    n: usize,
    mass: f64,
    freqs: &FrequencyTable,
    alpha_max: usize,
) -> Result<f64> {
    let size = freqs.size();
    check_window(n, alpha_max, size)?;
    let amplitude: Box<dyn Fn(i64, i64) -> Option<Complex64> + '_> = match source {
        AmplitudeSource::Matrix(x) => {
            check_frequencies(x, freqs)?;
            Box::new(move |row, col| entry(x, row, col))
        }
        AmplitudeSource::Table(table) => {
            if table.size() != size {
                return invalid("amplitude table and frequency table sizes differ");
            }
            let window = table.window();
            // the reality rule ties every row to its neighbours, so rows
            // below the ground state cannot be read as zero here
            let lo = n as i64 - alpha_max as i64;
            if lo < *window.start() as i64 || n + alpha_max > *window.end() || table.alpha_max() < alpha_max {
                return invalid(format!(
                    "state {n} with alpha_max {alpha_max} needs rows {lo}..={} inside the table window {}..={}",
                    n + alpha_max,
                    window.start(),
                    window.end()
                ));
            }
            // X_{r,c} = A(r, r − c)
            Box::new(move |row, col| table.get(row, row - col))
        }
    };
    let n = n as i64;
    let mut sum = RealSum::default();
    for a in -(alpha_max as i64)..=alpha_max as i64 {
        if let (Some(v), Some(w)) = (amplitude(n + a, n), freqs.at(n + a, n)) {
            sum.add(v.conj() * v * w);
        }
        if let (Some(v), Some(w)) = (amplitude(n - a, n), freqs.at(n, n - a)) {
            sum.add(-(v.conj() * v * w));
        }
    }
    Ok(mass * sum.real("Heisenberg condition")?)
}

/// Born-Jordan product form (Thomas-Kuhn sum):
/// `m Σ_α {X_{n,n+α} X_{n+α,n} ω(n+α,n) − X_{n,n−α} X_{n−α,n} ω(n,n−α)}`.
pub fn born_jordan_condition(
    x: &CMatrix,
    freqs: &FrequencyTable,
    mass: f64,
    n: usize,
    alpha_max: usize,
) -> Result<f64> {
    check_frequencies(x, freqs)?;
    check_window(n, alpha_max, x.nrows())?;
    let n = n as i64;
    let mut sum = RealSum::default();
    for a in -(alpha_max as i64)..=alpha_max as i64 {
        if let (Some(u), Some(v), Some(w)) = (entry(x, n, n + a), entry(x, n + a, n), freqs.at(n + a, n)) {
            sum.add(u * v * w);
        }
        if let (Some(u), Some(v), Some(w)) = (entry(x, n, n - a), entry(x, n - a, n), freqs.at(n, n - a)) {
            sum.add(-(u * v * w));
        }
    }
    Ok(mass * sum.real("Born-Jordan condition")?)
}

/// Modified condition from the `(n, n)` element of `∮ p̂ dx̂`:
/// `m Σ_α {|X_{n,n+α}|² ω(n+α,n) − |X_{n,n−α}|² ω(n,n−α)}`.
pub fn modified_condition(
    x: &CMatrix,
    freqs: &FrequencyTable,
    mass: f64,
    n: usize,
    alpha_max: usize,
) -> Result<f64> {
    check_frequencies(x, freqs)?;
    check_window(n, alpha_max, x.nrows())?;
    let n = n as i64;
    let mut total = 0.0;
    for a in -(alpha_max as i64)..=alpha_max as i64 {
        if let (Some(u), Some(w)) = (entry(x, n, n + a), freqs.at(n + a, n)) {
            total += u.norm_sqr() * w;
        }
        if let (Some(u), Some(w)) = (entry(x, n, n - a), freqs.at(n, n - a)) {
            total -= u.norm_sqr() * w;
        }
    }
    Ok(mass * total)
}

/// True when every entry off the first sub/super-diagonal is negligible.
pub fn is_nearest_neighbor(x: &CMatrix) -> bool {
    let cutoff = BAND_CUTOFF * x.iter().map(|v| v.norm()).fold(1.0, f64::max);
    x.iter().enumerate().all(|(k, v)| {
        let (i, j) = (k % x.nrows(), k / x.nrows());
        i.abs_diff(j) == 1 || v.norm() <= cutoff
    })
}

/// Nearest-neighbour rewrite of the Born-Jordan condition,
/// `m ω {X_{n+1,n} X_{n+1,n+2} − X_{n−1,n} X_{n−1,n−2}}`.
/// Only defined for oscillator-like matrices with a single band.
pub fn born_jordan_nearest_neighbor(x: &CMatrix, mass: f64, omega: f64, n: usize) -> Result<f64> {
    if x.nrows() != x.ncols() || n >= x.nrows() {
        return invalid(format!("state {n} outside a {:?} matrix", x.shape()));
    }
    if !is_nearest_neighbor(x) {
        return invalid("nearest-neighbour rewrite needs a matrix with only |n - n'| = 1 entries");
    }
    let n = n as i64;
    let pair = |a: i64, b: i64, c: i64, d: i64| match (entry(x, a, b), entry(x, c, d)) {
        (Some(u), Some(v)) => u * v,
        _ => ZERO,
    };
    let mut sum = RealSum::default();
    sum.add(pair(n + 1, n, n + 1, n + 2));
    sum.add(-pair(n - 1, n, n - 1, n - 2));
    Ok(mass * omega * sum.real("nearest-neighbour rewrite")?)
}

/// `Σ_α (P_{n+α,n} X_{n,n+α} − P_{n,n+α} X_{n+α,n})`, which equals
/// `(XP − PX)_{nn}` once `alpha_max` spans every nonzero band.
pub fn condition_commutator_sum(x: &CMatrix, p: &CMatrix, n: usize, alpha_max: usize) -> Result<Complex64> {
    if x.shape() != p.shape() || x.nrows() != x.ncols() {
        return invalid("X and P must be square with equal shapes");
    }
    check_window(n, alpha_max, x.nrows())?;
    let n = n as i64;
    let mut total = ZERO;
    for a in -(alpha_max as i64)..=alpha_max as i64 {
        if let (Some(pv), Some(xv)) = (entry(p, n + a, n), entry(x, n, n + a)) {
            total += pv * xv;
        }
        if let (Some(pv), Some(xv)) = (entry(p, n, n + a), entry(x, n + a, n)) {
            total -= pv * xv;
        }
    }
    Ok(total)
}

/// Born's correspondence rule for one `α`: `α ∂φ/∂n` on a term labelled by
/// the transition `(n, n − α)` becomes `φ(n + α, n) − φ(n, n − α)`.
/// Missing terms read as zero.
pub fn born_difference<F>(term: F, n: i64, alpha: i64) -> Complex64
where
    F: Fn(i64, i64) -> Option<Complex64>,
{
    term(n + alpha, n).unwrap_or(ZERO) - term(n, n - alpha).unwrap_or(ZERO)
}

/// `(n, n)` element of `∮ p̂ dx̂` over an interval `T`, its conjugate form,
/// and the Born difference of the action.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionDiagonal {
    /// `−T Σ_α i ω(n,n−α) P_{n,n−α} X_{n−α,n}`.
    pub action: Complex64,
    /// `T Σ_α i ω(n,n−α) P_{n−α,n} X_{n,n−α}`.
    pub conjugate_action: Complex64,
    /// `−2πi Σ_α P_{n+α,n} X_{n,n+α} + 2πi Σ_α P_{n,n−α} X_{n−α,n}`; equals
    /// `h` when the commutator diagonal is `iħ`.
    pub difference: Complex64,
}

impl ActionDiagonal {
    /// `|Im| ≤ tol · |difference|` for the Born difference.
    pub fn difference_is_real(&self, tol: f64) -> bool {
        self.difference.im.abs() <= tol * self.difference.norm()
    }
}

pub fn action_matrix_diagonal(
    x: &CMatrix,
    p: &CMatrix,
    freqs: &FrequencyTable,
    n: usize,
    period: f64,
    alpha_max: usize,
) -> Result<ActionDiagonal> {
    if !(period.is_finite() && period > 0.0) {
        return invalid(format!("integration interval must be positive, got {period}"));
    }
    if x.shape() != p.shape() {
        return invalid("X and P must have equal shapes");
    }
    check_frequencies(x, freqs)?;
    check_window(n, alpha_max, x.nrows())?;
    let n = n as i64;
    let two_pi_i = I * (2.0 * std::f64::consts::PI);
    let mut action = ZERO;
    let mut conjugate_action = ZERO;
    let mut up = ZERO;
    let mut down = ZERO;
    for a in -(alpha_max as i64)..=alpha_max as i64 {
        if let (Some(pv), Some(xv), Some(w)) = (entry(p, n, n - a), entry(x, n - a, n), freqs.at(n, n - a)) {
            action += I * w * pv * xv;
            down += pv * xv;
        }
        if let (Some(pv), Some(xv), Some(w)) = (entry(p, n - a, n), entry(x, n, n - a), freqs.at(n, n - a)) {
            conjugate_action += I * w * pv * xv;
        }
        if let (Some(pv), Some(xv)) = (entry(p, n + a, n), entry(x, n, n + a)) {
            up += pv * xv;
        }
    }
    Ok(ActionDiagonal {
        action: -action * period,
        conjugate_action: conjugate_action * period,
        difference: -two_pi_i * up + two_pi_i * down,
    })
}

/// Smallest band index beyond which every `|X|` entry is below
/// [`BAND_CUTOFF`], at least 1 and at most `N − 1`.
pub fn default_alpha_max(x: &CMatrix) -> usize {
    let n = x.nrows();
    let mut band = 0;
    for j in 0..n {
        for i in 0..n {
            if x[(i, j)].norm() >= BAND_CUTOFF {
                band = band.max(i.abs_diff(j));
            }
        }
    }
    band.clamp(1, n.saturating_sub(1).max(1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemDescriptor {
    pub kind: String,
    pub constants: PhysicalConstants,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionRow {
    pub n: usize,
    pub heisenberg_hermitian: f64,
    /// `None` where the state's `alpha_max` neighbourhood leaves the table.
    pub heisenberg_constrained: Option<f64>,
    pub born_jordan: f64,
    pub modified: f64,
    /// `None` unless `X` is nearest-neighbour.
    pub nearest_neighbor: Option<f64>,
    pub commutator_diag: Complex64,
}

impl ConditionRow {
    pub fn residual_heisenberg_hermitian(&self, hbar: f64) -> f64 {
        self.heisenberg_hermitian - hbar
    }

    pub fn residual_heisenberg_constrained(&self, hbar: f64) -> Option<f64> {
        self.heisenberg_constrained.map(|v| v - hbar)
    }

    pub fn residual_born_jordan(&self, hbar: f64) -> f64 {
        self.born_jordan - hbar
    }

    pub fn residual_modified(&self, hbar: f64) -> f64 {
        self.modified - hbar
    }

    pub fn residual_nearest_neighbor(&self, hbar: f64) -> Option<f64> {
        self.nearest_neighbor.map(|v| v - hbar)
    }

    pub fn residual_commutator(&self, hbar: f64) -> Complex64 {
        self.commutator_diag - I * hbar
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub system: SystemDescriptor,
    pub window: (usize, usize),
    pub alpha_max: usize,
    pub rows: Vec<ConditionRow>,
    pub offdiag_max: f64,
    pub trace_commutator: Complex64,
    /// Last diagonal entry of `XP − PX`, polluted by truncation.
    pub edge_diag: Complex64,
    pub hermiticity_x: f64,
    pub hermiticity_p: f64,
}

impl ConditionReport {
    pub fn hbar(&self) -> f64 {
        self.system.constants.hbar
    }
}

pub fn full_report(system: &SpectralSystem, pair: &MatrixPair, alpha_max: usize) -> Result<ConditionReport> {
    let size = system.size();
    if pair.x.shape() != (size, size) || pair.p.shape() != (size, size) {
        return invalid("matrix pair does not match the spectral system size");
    }
    if alpha_max == 0 {
        return invalid("alpha_max must be at least 1");
    }
    if alpha_max >= size {
        return invalid(format!(
            "empty evaluation window: size {size} with alpha_max {alpha_max}"
        ));
    }
    let hi = size - 1 - alpha_max;
    let constants = system.constants;
    let mass = constants.mass;
    let freqs = crate::spectral::transition_frequencies(system);
    let comm = commutator(&pair.x, &pair.p)?;

    let table = to_amplitude_table(&pair.x, 0..=size - 1, alpha_max)?;
    let constrained = if table.is_hermitian_consistent() {
        Some(impose_heisenberg_reality(&table)?)
    } else {
        None
    };
    let nearest = is_nearest_neighbor(&pair.x);

    let mut rows = Vec::with_capacity(hi + 1);
    for n in 0..=hi {
        let heisenberg_constrained = match &constrained {
            Some(t) if n >= alpha_max => Some(heisenberg_condition(
                AmplitudeSource::Table(t),
                n,
                mass,
                &freqs,
                alpha_max,
            )?),
            _ => None,
        };
        let nearest_neighbor = if nearest {
            Some(born_jordan_nearest_neighbor(&pair.x, mass, constants.omega, n)?)
        } else {
            None
        };
        rows.push(ConditionRow {
            n,
            heisenberg_hermitian: heisenberg_condition(
                AmplitudeSource::Matrix(&pair.x),
                n,
                mass,
                &freqs,
                alpha_max,
            )?,
            heisenberg_constrained,
            born_jordan: born_jordan_condition(&pair.x, &freqs, mass, n, alpha_max)?,
            modified: modified_condition(&pair.x, &freqs, mass, n, alpha_max)?,
            nearest_neighbor,
            commutator_diag: comm[(n, n)],
        });
    }

    let mut offdiag_max = 0.0_f64;
    for j in 0..=hi {
        for i in 0..=hi {
            if i != j {
                offdiag_max = offdiag_max.max(comm[(i, j)].norm());
            }
        }
    }

    Ok(ConditionReport {
        system: SystemDescriptor {
            kind: "spectral".to_string(),
            constants,
            size,
        },
        window: (0, hi),
        alpha_max,
        rows,
        offdiag_max,
        trace_commutator: comm.trace(),
        edge_diag: comm[(size - 1, size - 1)],
        hermiticity_x: hermiticity_defect(&pair.x)?,
        hermiticity_p: hermiticity_defect(&pair.p)?,
    })
}

#[cfg(test)]
// expected values are frozen 10-digit literals
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;
    use crate::spectral::{build_oscillator, transition_frequencies};

    fn oscillator(n: usize) -> (SpectralSystem, MatrixPair, FrequencyTable) {
        let (sys, pair) = build_oscillator(PhysicalConstants::default(), n).unwrap();
        let freqs = transition_frequencies(&sys);
        (sys, pair, freqs)
    }

    #[test]
    fn oscillator_commutator_and_edge() {
        let (_, pair, _) = oscillator(8);
        let c = commutator(&pair.x, &pair.p).unwrap();
        for n in 0..7 {
            assert!((c[(n, n)] - I).norm() < 1e-14, "n = {n}");
        }
        assert!((c[(7, 7)] + I * 7.0).norm() < 1e-13);
        assert!(c.trace().norm() < 1e-9 * 8.0);
    }

    #[test]
    fn self_commutator_vanishes() {
        let (_, pair, _) = oscillator(5);
        let c = commutator(&pair.x, &pair.x).unwrap();
        assert!(c.iter().all(|v| v.norm() == 0.0));
        assert!(commutator(&pair.x, &CMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn heisenberg_on_oscillator_matrix() {
        let (_, pair, freqs) = oscillator(8);
        for n in [0, 1, 4] {
            let v = heisenberg_condition(AmplitudeSource::Matrix(&pair.x), n, 1.0, &freqs, 1).unwrap();
            assert!((v - 1.0).abs() < 1e-14, "n = {n}: {v}");
        }
        assert!(heisenberg_condition(AmplitudeSource::Matrix(&pair.x), 7, 1.0, &freqs, 1).is_err());
    }

    #[test]
    fn heisenberg_zero_on_uniform_table() {
        // X(n, n±1) = 0.8 for every n
        let x = CMatrix::from_fn(10, 10, |i, j| {
            if i.abs_diff(j) == 1 { Complex64::new(0.8, 0.0) } else { ZERO }
        });
        let (_, _, freqs) = oscillator(10);
        let table = to_amplitude_table(&x, 0..=9, 1).unwrap();
        for n in 1..=8 {
            let v = heisenberg_condition(AmplitudeSource::Table(&table), n, 1.0, &freqs, 1).unwrap();
            assert!(v.abs() < 1e-15);
        }
        // n = 0 needs row −1, which the table cannot supply
        assert!(heisenberg_condition(AmplitudeSource::Table(&table), 0, 1.0, &freqs, 1).is_err());
    }

    #[test]
    fn heisenberg_zero_after_reality_projection() {
        let (_, pair, freqs) = oscillator(12);
        let table = to_amplitude_table(&pair.x, 0..=11, 2).unwrap();
        let forced = impose_heisenberg_reality(&table).unwrap();
        for n in 2..=9 {
            let v = heisenberg_condition(AmplitudeSource::Table(&forced), n, 1.0, &freqs, 2).unwrap();
            assert!(v.abs() <= 1e-12, "n = {n}: {v}");
        }
    }

    #[test]
    fn born_jordan_and_modified_on_oscillator() {
        let (_, pair, freqs) = oscillator(10);
        for n in 0..=8 {
            let bj = born_jordan_condition(&pair.x, &freqs, 1.0, n, 1).unwrap();
            let md = modified_condition(&pair.x, &freqs, 1.0, n, 1).unwrap();
            assert!((bj - 1.0).abs() < 1e-14);
            assert!((md - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn diagonal_matrix_has_no_transitions() {
        let (_, _, freqs) = oscillator(5);
        let x = CMatrix::from_diagonal_element(5, 5, Complex64::new(2.0, 0.0));
        assert_eq!(born_jordan_condition(&x, &freqs, 1.0, 2, 2).unwrap(), 0.0);
    }

    #[test]
    fn nearest_neighbor_values() {
        let (_, pair, _) = oscillator(24);
        let v0 = born_jordan_nearest_neighbor(&pair.x, 1.0, 1.0, 0).unwrap();
        let v1 = born_jordan_nearest_neighbor(&pair.x, 1.0, 1.0, 1).unwrap();
        let v20 = born_jordan_nearest_neighbor(&pair.x, 1.0, 1.0, 20).unwrap();
        assert!((v0 - 0.7071067812).abs() < 1e-8);
        assert!((v1 - 1.2247448714).abs() < 1e-8);
        let expected = 0.5 * ((21.0_f64 * 22.0).sqrt() - (20.0_f64 * 19.0).sqrt());
        assert!((v20 - expected).abs() < 1e-12);
        assert!((v20 - 1.000298).abs() < 1e-6);
    }

    #[test]
    fn nearest_neighbor_rejects_wider_bands() {
        let mut x = CMatrix::zeros(4, 4);
        x[(0, 1)] = Complex64::new(1.0, 0.0);
        x[(1, 0)] = Complex64::new(1.0, 0.0);
        x[(0, 2)] = Complex64::new(1e-6, 0.0);
        assert!(born_jordan_nearest_neighbor(&x, 1.0, 1.0, 1).is_err());
    }

    #[test]
    fn commutator_sum_cases() {
        let (_, pair, _) = oscillator(8);
        let c = commutator(&pair.x, &pair.p).unwrap();
        for n in 0..=6 {
            let v = condition_commutator_sum(&pair.x, &pair.p, n, 1).unwrap();
            assert!((v - c[(n, n)]).norm() < 1e-12);
            assert!((v - I).norm() < 1e-12);
        }
        assert_eq!(condition_commutator_sum(&pair.x, &pair.x, 3, 1).unwrap(), ZERO);
        assert_eq!(condition_commutator_sum(&pair.x, &pair.p, 3, 0).unwrap(), ZERO);
    }

    #[test]
    fn action_diagonal_oscillator() {
        let (_, pair, freqs) = oscillator(8);
        let period = 2.0 * std::f64::consts::PI;
        let a0 = action_matrix_diagonal(&pair.x, &pair.p, &freqs, 0, period, 1).unwrap();
        // direct sum: single α = −1 term, −T·i·ω(0,1)·P_{0,1}·X_{1,0}
        let direct0 = -(I * freqs.get(0, 1) * pair.p[(0, 1)] * pair.x[(1, 0)]) * period;
        assert!((a0.action - direct0).norm() < 1e-15);
        assert!((a0.action - Complex64::new(std::f64::consts::PI, 0.0)).norm() < 1e-13);
        assert!((a0.conjugate_action - a0.action.conj()).norm() < 1e-13);

        let a1 = action_matrix_diagonal(&pair.x, &pair.p, &freqs, 1, period, 1).unwrap();
        let direct1 = -(I * freqs.get(1, 0) * pair.p[(1, 0)] * pair.x[(0, 1)]
            + I * freqs.get(1, 2) * pair.p[(1, 2)] * pair.x[(2, 1)])
            * period;
        assert!((a1.action - direct1).norm() < 1e-14);
        assert!((a1.action.re - 3.0 * std::f64::consts::PI).abs() < 1e-13);

        for n in 0..=6 {
            let a = action_matrix_diagonal(&pair.x, &pair.p, &freqs, n, period, 1).unwrap();
            assert!(a.difference_is_real(1e-10));
            assert!((a.difference.re - 2.0 * std::f64::consts::PI).abs() < 1e-12);
        }
        assert!(action_matrix_diagonal(&pair.x, &pair.p, &freqs, 1, 0.0, 1).is_err());
    }

    #[test]
    fn born_difference_cases() {
        let c = Complex64::new(2.5, -1.0);
        assert_eq!(born_difference(|_, _| Some(c), 4, 2), ZERO);
        // φ labelled by the transition sum r + s grows linearly in n
        let linear = |r: i64, s: i64| Some(c * (r + s) as f64);
        assert_eq!(born_difference(linear, 5, 1), c * 2.0);

        let (_, pair, _) = oscillator(10);
        let term = |r: i64, s: i64| match (entry(&pair.p, r, s), entry(&pair.x, s, r)) {
            (Some(pv), Some(xv)) => Some(pv * xv),
            _ => None,
        };
        for n in 0..=7 {
            let total: Complex64 = (-2..=2).map(|a| born_difference(term, n, a)).sum();
            let direct = condition_commutator_sum(&pair.x, &pair.p, n as usize, 2).unwrap();
            assert!((total - direct).norm() < 1e-13);
            assert!((total - I).norm() < 1e-13);
        }
    }

    #[test]
    fn report_oscillator() {
        let (sys, pair, _) = oscillator(64);
        let report = full_report(&sys, &pair, 1).unwrap();
        assert_eq!(report.window, (0, 62));
        assert_eq!(report.rows.len(), 63);
        for row in &report.rows {
            assert!(row.residual_modified(1.0).abs() <= 1e-10);
        }
        let nn0 = report.rows[0].residual_nearest_neighbor(1.0).unwrap();
        assert!((nn0 + (1.0 - 0.5_f64.sqrt())).abs() < 1e-12);
        assert!(report.rows[0].heisenberg_constrained.is_none());
        assert!(report.rows[1].heisenberg_constrained.unwrap().abs() < 1e-12);
        assert!((report.edge_diag + I * 63.0).norm() < 1e-10);
    }

    #[test]
    fn report_empty_window() {
        let (sys, pair, _) = oscillator(1);
        assert!(full_report(&sys, &pair, 1).is_err());
    }

    #[test]
    fn default_band_width() {
        let (_, pair, _) = oscillator(6);
        assert_eq!(default_alpha_max(&pair.x), 1);
    }
}
