//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Chosen for reproducibility: a fixed sweep order and a stable final sort
//! make the output a deterministic function of the input bytes, including
//! the basis chosen inside degenerate eigenspaces.

use super::matrix::ComplexMatrix;
use crate::error::{PtError, Result};
use crate::tol;
use num_complex::Complex64 as C64;

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and the
/// matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermEigResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermEigResult {
    /// V f(λ) V†.
    pub fn apply_function(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        // scaled = V diag(f(λ))
        let mut scaled = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            let fj = f(self.eigenvalues[j]);
            for i in 0..n {
                scaled[(i, j)] = v[(i, j)] * fj;
            }
        }
        &scaled * &v.adjoint()
    }

    /// V e^{−iλt} V† applied to a vector (two matvecs, no n³ work).
    pub fn propagate(&self, state: &[C64], t: f64) -> Vec<C64> {
        let v = &self.eigenvectors;
        let mut coeffs = v.adjoint().matvec(state);
        for (c, &l) in coeffs.iter_mut().zip(&self.eigenvalues) {
            *c *= C64::from_polar(1.0, -l * t);
        }
        v.matvec(&coeffs)
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Hermitian eigendecomposition. The input must be Hermitian within
/// `tol::HERM_INPUT_MAX_DEV` (max-abs entry deviation).
pub fn herm_eig(h: &ComplexMatrix) -> Result<HermEigResult> {
    if !h.is_square() {
        return Err(PtError::DimMismatch(h.nrows(), h.ncols()));
    }
    if !h.all_finite() {
        return Err(PtError::OutOfDomain("matrix has non-finite entries".into()));
    }
    let dev = h.hermiticity_deviation();
    if dev > tol::HERM_INPUT_MAX_DEV {
        return Err(PtError::NotHermitian(dev));
    }
    let n = h.nrows();
    let mut a = h.clone();
    // fold the (tiny) anti-Hermitian part away so rotations see exact symmetry
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
        for j in i + 1..n {
            let m = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = m;
            a[(j, i)] = m.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let norm = a.frobenius_norm();
    let target = tol::JACOBI_OFF_REL * norm;

    let mut converged = norm == 0.0 || n == 1;
    for _sweep in 0..tol::JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let b = a[(p, q)];
                let babs = b.norm();
                if babs == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let chi = (app - aqq) / (2.0 * babs);
                // smaller root of t² − 2χt − 1 = 0
                let sign = if chi >= 0.0 { 1.0 } else { -1.0 };
                let t = -sign / (chi.abs() + (1.0 + chi * chi).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = (b / babs) * (t * c);
                // columns: col_p ← c·col_p − s̄·col_q ; col_q ← s·col_p + c·col_q
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * s.conj();
                    a[(k, q)] = akp * s + akq * c;
                }
                // rows: row_p ← c·row_p − s·row_q ; row_q ← s̄·row_p + c·row_q
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * s;
                    a[(q, k)] = apk * s.conj() + aqk * c;
                }
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * s.conj();
                    v[(k, q)] = vkp * s + vkq * c;
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(PtError::NoConvergence(format!(
            "Jacobi: off-diagonal norm {:.3e} above {:.3e} after {} sweeps",
            off_diagonal_norm(&a),
            target,
            tol::JACOBI_MAX_SWEEPS
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap().then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermEigResult {
        eigenvalues,
        eigenvectors,
    })
}

/// Matrix function of a Hermitian matrix: V f(λ) V†.
pub fn func_herm(h: &ComplexMatrix, f: impl Fn(f64) -> C64) -> Result<ComplexMatrix> {
    Ok(herm_eig(h)?.apply_function(f))
}

/// Hermitian square root of a positive semidefinite matrix. Eigenvalues in
/// [−clamp_tol·‖m‖, 0) are clamped to zero; anything lower is an error.
pub fn psd_sqrt(m: &ComplexMatrix, clamp_tol: f64) -> Result<ComplexMatrix> {
    let eig = herm_eig(m)?;
    let scale = eig
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, &l| acc.max(l.abs()));
    let limit = clamp_tol * scale;
    for &l in &eig.eigenvalues {
        if l < -limit {
            return Err(PtError::NotPositive {
                eigenvalue: l,
                limit,
            });
        }
    }
    Ok(eig.apply_function(|l| C64::new(if l > 0.0 { l.sqrt() } else { 0.0 }, 0.0)))
}
