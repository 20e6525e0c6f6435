//! Polynomial potentials `V(x) = Σ c_k x^k`.

use crate::error::{invalid, Result};

/// Grid resolution used when locating critical points of `V`.
const CRITICAL_SCAN_POINTS: usize = 20_001;

#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialPotential {
    coeffs: Vec<f64>,
}

/// A stationary point of the potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub x: f64,
    pub value: f64,
    pub is_minimum: bool,
}

impl PolynomialPotential {
    /// Builds a potential from `c_0, c_1, ...`. Trailing zeros are dropped;
    /// the leading coefficient must have even degree ≥ 2 and be positive.
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Result<Self> {
        let mut coeffs: Vec<f64> = coeffs.into();
        if coeffs.iter().any(|c| !c.is_finite()) {
            return invalid("potential coefficients must be finite");
        }
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        let degree = coeffs.len().saturating_sub(1);
        if degree < 2 {
            return invalid(format!(
                "potential of degree {degree} is not confining; need a nonzero c_k with k >= 2"
            ));
        }
        if !degree.is_multiple_of(2) || coeffs[degree] <= 0.0 {
            return invalid(format!(
                "potential is not confining: leading term {} x^{degree}",
                coeffs[degree]
            ));
        }
        Ok(Self { coeffs })
    }

    /// `½ m ω² x²`.
    pub fn harmonic(mass: f64, omega: f64) -> Result<Self> {
        Self::new(vec![0.0, 0.0, 0.5 * mass * omega * omega])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// True when only even powers appear.
    pub fn is_even(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(k, c)| k % 2 == 0 || *c == 0.0)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, c)| acc * x + k as f64 * c)
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(2)
            .rev()
            .fold(0.0, |acc, (k, c)| acc * x + (k * (k - 1)) as f64 * c)
    }

    /// `(V(a) - V(x)) / (a - x)` evaluated without cancellation, as
    /// `Σ_k c_k Σ_j a^j x^(k-1-j)`. Equals `V'(a)` when `x == a`.
    pub fn divided_difference(&self, a: f64, x: f64) -> f64 {
        let mut total = 0.0;
        let mut partial = 0.0;
        let mut x_pow = 1.0;
        for c in self.coeffs.iter().skip(1) {
            partial = a * partial + x_pow;
            x_pow *= x;
            total += c * partial;
        }
        total
    }

    /// Radius enclosing every real critical point (Cauchy bound on `V'`).
    fn critical_radius(&self) -> f64 {
        let k_max = self.degree();
        let lead = k_max as f64 * self.coeffs[k_max];
        let ratio = (1..k_max)
            .map(|k| (k as f64 * self.coeffs[k] / lead).abs())
            .fold(0.0, f64::max);
        1.0 + ratio
    }

    /// All real stationary points where `V'` changes sign, ascending in `x`.
    pub fn critical_points(&self) -> Vec<CriticalPoint> {
        let radius = self.critical_radius();
        let step = 2.0 * radius / (CRITICAL_SCAN_POINTS - 1) as f64;
        let grid = |i: usize| -radius + step * i as f64;
        let mut points = Vec::new();
        // bracket between the last grid point with V' != 0 and the next
        // one of opposite sign
        let mut x_prev = grid(0);
        let mut d_prev = self.derivative(x_prev);
        for i in 1..CRITICAL_SCAN_POINTS {
            let x = grid(i);
            let d = self.derivative(x);
            if d == 0.0 {
                continue;
            }
            if d_prev != 0.0 && (d_prev < 0.0) != (d < 0.0) {
                let root = self.bisect_derivative(x_prev, x);
                points.push(CriticalPoint {
                    x: root,
                    value: self.value(root),
                    is_minimum: d_prev < 0.0,
                });
            }
            d_prev = d;
            x_prev = x;
        }
        points
    }

    fn bisect_derivative(&self, mut lo: f64, mut hi: f64) -> f64 {
        let d_lo = self.derivative(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let d_mid = self.derivative(mid);
            if d_mid == 0.0 {
                return mid;
            }
            if (d_mid < 0.0) == (d_lo < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Global minimum `(x_min, V_min)`.
    pub fn minimum(&self) -> (f64, f64) {
        self.critical_points()
            .into_iter()
            .filter(|p| p.is_minimum)
            .map(|p| (p.x, p.value))
            .fold((0.0, f64::INFINITY), |best, cand| {
                if cand.1 < best.1 {
                    cand
                } else {
                    best
                }
            })
    }
}
