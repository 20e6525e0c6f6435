//! Cyclic Jacobi eigensolver for dense real symmetric matrices.

use crate::error::{invalid, numerical, Result};
use crate::RMatrix;

pub const DEFAULT_MAX_SWEEPS: usize = 100;
/// Off-diagonal Frobenius mass, relative to `‖S‖_F`, at which sweeping stops.
pub const OFFDIAG_THRESHOLD: f64 = 1e-13;
const SYMMETRY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: RMatrix,
    pub sweeps: usize,
}

pub fn jacobi_eigh(s: &RMatrix) -> Result<SymmetricEigen> {
    jacobi_eigh_with_limit(s, DEFAULT_MAX_SWEEPS)
}

pub fn jacobi_eigh_with_limit(s: &RMatrix, max_sweeps: usize) -> Result<SymmetricEigen> {
    let n = s.nrows();
    if n != s.ncols() {
        return invalid(format!("matrix is {}x{}, not square", n, s.ncols()));
    }
    if n == 0 {
        return invalid("empty matrix");
    }
    if s.iter().any(|v| !v.is_finite()) {
        return invalid("matrix has non-finite entries");
    }
    let norm = s.norm();
    let asym = (s - s.transpose()).norm();
    if asym > SYMMETRY_TOLERANCE * norm.max(f64::MIN_POSITIVE) {
        return invalid(format!("matrix is not symmetric (defect {asym:e})"));
    }

    // column-major working copy, symmetrized
    let mut a: Vec<f64> = vec![0.0; n * n];
    for j in 0..n {
        for i in 0..n {
            a[j * n + i] = 0.5 * (s[(i, j)] + s[(j, i)]);
        }
    }
    let mut v: Vec<f64> = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let threshold = OFFDIAG_THRESHOLD * norm;
    let mut sweeps = 0;
    loop {
        if off_diagonal_norm(&a, n) <= threshold {
            break;
        }
        if sweeps == max_sweeps {
            return numerical(format!(
                "Jacobi iteration did not converge in {max_sweeps} sweeps"
            ));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&k| a[k * n + k]).collect();
    let vectors = RMatrix::from_fn(n, n, |i, j| v[order[j] * n + i]);
    Ok(SymmetricEigen {
        values,
        vectors,
        sweeps,
    })
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                sum += a[j * n + i] * a[j * n + i];
            }
        }
    }
    sum.sqrt()
}

/// One Jacobi rotation zeroing `a[p][q]`; `a` is kept exactly symmetric.
fn rotate(a: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = a[q * n + p];
    if apq == 0.0 {
        return;
    }
    let app = a[p * n + p];
    let aqq = a[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let g = a[p * n + k];
        let h = a[q * n + k];
        let new_p = c * g - s * h;
        let new_q = s * g + c * h;
        a[p * n + k] = new_p;
        a[k * n + p] = new_p;
        a[q * n + k] = new_q;
        a[k * n + q] = new_q;
    }
    a[p * n + p] = app - t * apq;
    a[q * n + q] = aqq + t * apq;
    a[q * n + p] = 0.0;
    a[p * n + q] = 0.0;

    // p < q, so column p lives entirely before column q
    let (left, right) = v.split_at_mut(q * n);
    let vp = &mut left[p * n..(p + 1) * n];
    let vq = &mut right[..n];
    for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
        let g = *x;
        let h = *y;
        *x = c * g - s * h;
        *y = s * g + c * h;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, seed: u64) -> RMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = RMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        (&m + m.transpose()) * 0.5
    }

    fn check_decomposition(s: &RMatrix, eig: &SymmetricEigen) {
        let n = s.nrows();
        let norm = s.norm();
        for k in 0..n {
            let vk = eig.vectors.column(k);
            let residual = (s * vk - vk * eig.values[k]).norm();
            assert!(residual <= 1e-11 * norm, "residual {residual:e} for pair {k}");
        }
        let gram = eig.vectors.transpose() * &eig.vectors;
        let ortho = (gram - RMatrix::identity(n, n)).norm();
        assert!(ortho <= 1e-11, "orthonormality defect {ortho:e}");
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn diagonal_input() {
        let s = RMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 1.0, 2.0]));
        let eig = jacobi_eigh(&s).unwrap();
        assert_eq!(eig.values, vec![1.0, 2.0, 3.0]);
        assert_eq!(eig.sweeps, 0);
    }

    #[test]
    fn two_by_two_swap() {
        let s = RMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let eig = jacobi_eigh(&s).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-15);
        assert!((eig.values[1] - 1.0).abs() < 1e-15);
        check_decomposition(&s, &eig);
    }

    #[test]
    fn random_50() {
        let s = random_symmetric(50, 7);
        let eig = jacobi_eigh(&s).unwrap();
        check_decomposition(&s, &eig);
    }

    #[test]
    fn random_200() {
        let s = random_symmetric(200, 11);
        let eig = jacobi_eigh(&s).unwrap();
        check_decomposition(&s, &eig);
    }

    #[test]
    fn deterministic() {
        let s = random_symmetric(30, 3);
        let a = jacobi_eigh(&s).unwrap();
        let b = jacobi_eigh(&s).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.vectors, b.vectors);
    }

    #[test]
    fn rejects_asymmetric_and_nonsquare() {
        let s = RMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(jacobi_eigh(&s), Err(crate::LabError::InvalidArgument(_))));
        let r = RMatrix::zeros(2, 3);
        assert!(jacobi_eigh(&r).is_err());
    }

    #[test]
    fn sweep_limit_reported() {
        let s = random_symmetric(20, 5);
        assert!(matches!(
            jacobi_eigh_with_limit(&s, 1),
            Err(crate::LabError::NumericalFailure(_))
        ));
    }
}
