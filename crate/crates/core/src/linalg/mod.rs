//! Dense complex matrix kernel: Hermitian eigendecomposition, matrix
//! functions, Kronecker products, Pauli operators, partial traces, entropy.
//!
//! Everything here is a pure function of immutable inputs; values are safe to
//! share read-only across threads.

mod eig;
mod matrix;

pub use eig::{func_herm, herm_eig, psd_sqrt, HermEigResult};
pub use matrix::ComplexMatrix;

use crate::error::{PtError, Result};
use crate::tol;
use num_complex::Complex64 as C64;

/// Single-spin Pauli label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> ComplexMatrix {
        let (a, b, c, d) = match self {
            Pauli::I => (
                C64::new(1., 0.),
                C64::new(0., 0.),
                C64::new(0., 0.),
                C64::new(1., 0.),
            ),
            Pauli::X => (
                C64::new(0., 0.),
                C64::new(1., 0.),
                C64::new(1., 0.),
                C64::new(0., 0.),
            ),
            Pauli::Y => (
                C64::new(0., 0.),
                C64::new(0., -1.),
                C64::new(0., 1.),
                C64::new(0., 0.),
            ),
            Pauli::Z => (
                C64::new(1., 0.),
                C64::new(0., 0.),
                C64::new(0., 0.),
                C64::new(-1., 0.),
            ),
        };
        ComplexMatrix::from_rows(2, 2, &[a, b, c, d])
    }

    /// Action on a basis ket: σ|b⟩ = v|b'⟩ for b ∈ {0, 1}.
    pub fn apply_basis(self, b: usize) -> (usize, C64) {
        match self {
            Pauli::I => (b, C64::new(1., 0.)),
            Pauli::X => (1 - b, C64::new(1., 0.)),
            Pauli::Y => (
                1 - b,
                if b == 0 {
                    C64::new(0., 1.)
                } else {
                    C64::new(0., -1.)
                },
            ),
            Pauli::Z => (
                b,
                if b == 0 {
                    C64::new(1., 0.)
                } else {
                    C64::new(-1., 0.)
                },
            ),
        }
    }

    pub fn label(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Kronecker product; dimensions multiply.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = a.dims();
    let (rb, cb) = b.dims();
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[(i, j)];
            if aij == C64::new(0., 0.) {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all(factors: &[&ComplexMatrix]) -> ComplexMatrix {
    let mut out = ComplexMatrix::identity(1);
    for f in factors {
        out = kron(&out, f);
    }
    out
}

/// Kronecker product of two vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// ⟨a|b⟩ with the conjugation on the first argument.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Euclidean norm.
pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Reduced density matrix of the left tensor factor of a pure state.
pub fn reduced_density_left(state: &[C64], dim_left: usize) -> Result<ComplexMatrix> {
    if dim_left == 0 || state.len() % dim_left != 0 {
        return Err(PtError::BadLength {
            len: state.len(),
            reason: "not divisible by left factor dimension",
        });
    }
    let dim_right = state.len() / dim_left;
    let mut rho = ComplexMatrix::zeros(dim_left, dim_left);
    for a in 0..dim_left {
        for b in 0..dim_left {
            let mut s = C64::new(0., 0.);
            for j in 0..dim_right {
                s += state[a * dim_right + j] * state[b * dim_right + j].conj();
            }
            rho[(a, b)] = s;
        }
    }
    Ok(rho)
}

/// Reduced density matrix of the right tensor factor of a pure state.
pub fn reduced_density_right(state: &[C64], dim_left: usize) -> Result<ComplexMatrix> {
    if dim_left == 0 || state.len() % dim_left != 0 {
        return Err(PtError::BadLength {
            len: state.len(),
            reason: "not divisible by left factor dimension",
        });
    }
    let dim_right = state.len() / dim_left;
    let mut rho = ComplexMatrix::zeros(dim_right, dim_right);
    for i in 0..dim_right {
        for j in 0..dim_right {
            let mut s = C64::new(0., 0.);
            for a in 0..dim_left {
                s += state[a * dim_right + i] * state[a * dim_right + j].conj();
            }
            rho[(i, j)] = s;
        }
    }
    Ok(rho)
}

/// Trace out the bath of an ancilla ⊗ bath state (ancilla is the first,
/// two-dimensional tensor factor); returns the 2×2 ancilla density matrix.
pub fn partial_trace_ancilla(state: &[C64]) -> Result<ComplexMatrix> {
    let len = state.len();
    if len < 4 || len % 2 != 0 || !(len / 2).is_power_of_two() {
        return Err(PtError::BadLength {
            len,
            reason: "expected 2·2^N amplitudes",
        });
    }
    reduced_density_left(state, 2)
}

/// Single-site reduced density matrix of an N-spin bath state. Site 0 is the
/// leftmost (most significant) tensor factor.
pub fn reduced_density_site(bath_state: &[C64], site: usize) -> Result<ComplexMatrix> {
    let len = bath_state.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(PtError::BadLength {
            len,
            reason: "expected 2^N amplitudes",
        });
    }
    let n_spins = len.trailing_zeros() as usize;
    if site >= n_spins {
        return Err(PtError::BadSite { site, n_spins });
    }
    let bitpos = n_spins - 1 - site;
    let lo_mask = (1usize << bitpos) - 1;
    let mut rho = ComplexMatrix::zeros(2, 2);
    for rest in 0..len / 2 {
        let base = ((rest & !lo_mask) << 1) | (rest & lo_mask);
        let i0 = base;
        let i1 = base | (1 << bitpos);
        rho[(0, 0)] += bath_state[i0] * bath_state[i0].conj();
        rho[(0, 1)] += bath_state[i0] * bath_state[i1].conj();
        rho[(1, 0)] += bath_state[i1] * bath_state[i0].conj();
        rho[(1, 1)] += bath_state[i1] * bath_state[i1].conj();
    }
    Ok(rho)
}

/// Von Neumann entropy −Σ λ ln λ in nats, with 0·ln 0 := 0.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let (r, c) = rho.dims();
    if r != c {
        return Err(PtError::NotDensityMatrix(format!("not square: {r}×{c}")));
    }
    let dev = rho.hermiticity_deviation();
    if dev > tol::DENSITY_TOL {
        return Err(PtError::NotDensityMatrix(format!(
            "not Hermitian: deviation {dev:.3e}"
        )));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > tol::DENSITY_TOL || tr.im.abs() > tol::DENSITY_TOL {
        return Err(PtError::NotDensityMatrix(format!("trace {tr} != 1")));
    }
    let eig = herm_eig(rho)?;
    let mut s = 0.0;
    for &l in &eig.eigenvalues {
        if l < -tol::DENSITY_TOL {
            return Err(PtError::NotDensityMatrix(format!(
                "negative eigenvalue {l:.3e}"
            )));
        }
        if l > 0.0 {
            s -= l * l.ln();
        }
    }
    Ok(s.max(0.0))
}
