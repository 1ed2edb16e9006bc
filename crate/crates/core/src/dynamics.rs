//! Embedded-state preparation, unitary evolution of the total system, ancilla
//! post-selection, and verification against direct non-Hermitian evolution.

use crate::embedding::{EmbeddingOperators, ModelParams};
use crate::error::{PtError, Result};
use crate::linalg::{self, herm_eig, kron, ComplexMatrix};
use crate::tol;
use num_complex::Complex64 as C64;

/// Ancilla branch of the embedded wave function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// State in the extended space, ancilla ⊗ bath, unit Euclidean norm when the
/// underlying PT state is PT-normalized.
#[derive(Debug, Clone)]
pub struct EmbeddedState {
    pub amplitudes: Vec<C64>,
    pub branch: Branch,
    pub params: ModelParams,
}

impl EmbeddedState {
    pub fn upper(&self) -> &[C64] {
        &self.amplitudes[..self.amplitudes.len() / 2]
    }

    pub fn lower(&self) -> &[C64] {
        &self.amplitudes[self.amplitudes.len() / 2..]
    }
}

/// One time-grid row of a trajectory.
#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub t: f64,
    /// Upper ancilla block, unnormalized (carries the 1/√c weight).
    pub postselected_state: Vec<C64>,
    pub success_prob: f64,
    /// PT norm of the rescaled post-selected state √c·bath.
    pub pt_norm: f64,
    /// Euclidean norm of the same vector; not conserved for θ > 0.
    pub euclid_norm: f64,
    /// ‖√c·bath − P e^{−iht} P⁻¹ ψ₀‖.
    pub oracle_distance: f64,
}

/// Sesquilinear PT inner product ⟨ψ|η|φ⟩.
pub fn pt_inner(psi: &[C64], phi: &[C64], eta: &ComplexMatrix) -> Result<C64> {
    if psi.len() != phi.len() || eta.nrows() != psi.len() {
        return Err(PtError::DimMismatch(psi.len(), eta.nrows()));
    }
    Ok(linalg::inner(psi, &eta.matvec(phi)))
}

/// √⟨ψ|η|ψ⟩.
pub fn pt_norm(psi: &[C64], eta: &ComplexMatrix) -> Result<f64> {
    Ok(pt_inner(psi, psi, eta)?.re.max(0.0).sqrt())
}

/// Embeds a PT-normalized state in the two-block form:
/// Ψ₊ = (|↑⟩⊗ψ + |↓⟩⊗Qψ)/√c, Ψ₋ = (|↓⟩⊗ψ − |↑⟩⊗Qψ)/√c.
pub fn embed_state(
    ops: &EmbeddingOperators,
    psi_pt: &[C64],
    branch: Branch,
) -> Result<EmbeddedState> {
    let norm = pt_inner(psi_pt, psi_pt, &ops.eta)?.re;
    if (norm - 1.0).abs() > tol::PT_NORM_TOL {
        return Err(PtError::NotPTNormalized(norm));
    }
    let inv_sqrt_c = 1.0 / ops.c.sqrt();
    let q_psi = ops.q.matvec(psi_pt);
    let dim = psi_pt.len();
    let mut amplitudes = vec![C64::new(0., 0.); 2 * dim];
    match branch {
        Branch::Plus => {
            for i in 0..dim {
                amplitudes[i] = psi_pt[i] * inv_sqrt_c;
                amplitudes[dim + i] = q_psi[i] * inv_sqrt_c;
            }
        }
        Branch::Minus => {
            for i in 0..dim {
                amplitudes[i] = -q_psi[i] * inv_sqrt_c;
                amplitudes[dim + i] = psi_pt[i] * inv_sqrt_c;
            }
        }
    }
    Ok(EmbeddedState {
        amplitudes,
        branch,
        params: ops.params.clone(),
    })
}

/// exp(−i H_T t) applied to the embedded state.
pub fn evolve_total(
    ops: &EmbeddingOperators,
    state: &EmbeddedState,
    t: f64,
) -> Result<EmbeddedState> {
    let eig = herm_eig(&ops.h_total)?;
    Ok(EmbeddedState {
        amplitudes: eig.propagate(&state.amplitudes, t),
        branch: state.branch,
        params: state.params.clone(),
    })
}

/// e^{−iht} = ⊗(cos t · I − i sin t · σx); exact product form for h = Σσᵢˣ.
#[cfg(test)]
fn seed_propagator(n_spins: usize, t: f64) -> ComplexMatrix {
    let site = ComplexMatrix::from_rows(
        2,
        2,
        &[
            C64::new(t.cos(), 0.),
            C64::new(0., -t.sin()),
            C64::new(0., -t.sin()),
            C64::new(t.cos(), 0.),
        ],
    );
    let mut out = site.clone();
    for _ in 1..n_spins {
        out = kron(&out, &site);
    }
    out
}

/// Direct non-Hermitian evolution P e^{−iht} P⁻¹ ψ (similarity path; exact in
/// the unbroken regime). Both P and e^{−iht} factor over sites, so the whole
/// propagator is assembled from exact 2×2 conjugations. Conserves the PT
/// norm, not the Euclidean norm.
pub fn nonhermitian_evolve(params: &ModelParams, psi: &[C64], t: f64) -> Result<Vec<C64>> {
    params.check_dense()?;
    if psi.len() != params.dim() {
        return Err(PtError::DimMismatch(psi.len(), params.dim()));
    }
    let site = crate::embedding::site_exponential(params.theta(), params.theta1(), params.phi1());
    let site_inv =
        crate::embedding::site_exponential(-params.theta(), params.theta1(), params.phi1());
    let rot = ComplexMatrix::from_rows(
        2,
        2,
        &[
            C64::new(t.cos(), 0.),
            C64::new(0., -t.sin()),
            C64::new(0., -t.sin()),
            C64::new(t.cos(), 0.),
        ],
    );
    let per_site = &(&site * &rot) * &site_inv;
    let mut propagator = per_site.clone();
    for _ in 1..params.n_spins() {
        propagator = kron(&propagator, &per_site);
    }
    Ok(propagator.matvec(psi))
}

/// Ancilla σ_z measurement restricted to the |↑⟩ outcome: returns the upper
/// block (unnormalized) and its weight ‖upper‖².
pub fn post_select(state: &EmbeddedState) -> (Vec<C64>, f64) {
    let upper = state.upper().to_vec();
    let prob = upper.iter().map(|x| x.norm_sqr()).sum();
    (upper, prob)
}

/// Runs the plus-branch trajectory over `t_grid`, comparing the post-selected
/// block against the non-Hermitian oracle at every point. `psi0` is
/// PT-normalized internally.
pub fn run_trajectory(
    params: &ModelParams,
    psi0: &[C64],
    t_grid: &[f64],
) -> Result<Vec<TrajectoryRecord>> {
    let ops = crate::embedding::build_h_total(params)?;
    let nrm = pt_norm(psi0, &ops.eta)?;
    if !nrm.is_finite() || nrm < 1e-150 {
        return Err(PtError::NotPTNormalized(nrm * nrm));
    }
    let psi: Vec<C64> = psi0.iter().map(|x| x / nrm).collect();
    let initial = embed_state(&ops, &psi, Branch::Plus)?;
    let eig = herm_eig(&ops.h_total)?;
    let sqrt_c = ops.c.sqrt();
    let mut records = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let evolved = EmbeddedState {
            amplitudes: eig.propagate(&initial.amplitudes, t),
            branch: Branch::Plus,
            params: params.clone(),
        };
        let (bath, success_prob) = post_select(&evolved);
        let rescaled: Vec<C64> = bath.iter().map(|x| x * sqrt_c).collect();
        let oracle = nonhermitian_evolve(params, &psi, t)?;
        let oracle_distance = distance(&rescaled, &oracle);
        records.push(TrajectoryRecord {
            t,
            postselected_state: bath,
            success_prob,
            pt_norm: pt_norm(&rescaled, &ops.eta)?,
            euclid_norm: linalg::vec_norm(&rescaled),
            oracle_distance,
        });
    }
    Ok(records)
}

fn distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Default initial state of the trajectory command: ψ_PT = P(⊗|↓⟩ₓ),
/// the PT image of the seed ground state; PT-normalized by construction.
pub fn default_initial_state(params: &ModelParams) -> Result<Vec<C64>> {
    params.check_dense()?;
    let site = crate::embedding::site_exponential(params.theta(), params.theta1(), params.phi1());
    let s = 1.0 / 2.0_f64.sqrt();
    let down_x = [C64::new(s, 0.), C64::new(-s, 0.)];
    let per_site = [
        site[(0, 0)] * down_x[0] + site[(0, 1)] * down_x[1],
        site[(1, 0)] * down_x[0] + site[(1, 1)] * down_x[1],
    ];
    let mut state = vec![C64::new(1., 0.)];
    for _ in 0..params.n_spins() {
        state = linalg::kron_vec(&state, &per_site);
    }
    Ok(state)
}

/// N-fold product of the ancilla-free basis state |↑⟩_z in the PT frame:
/// ψ_PT = P(⊗|↑⟩_z). Not an H_PT eigenstate, so the Euclidean norm moves.
pub fn up_z_initial_state(params: &ModelParams) -> Result<Vec<C64>> {
    params.check_dense()?;
    let site = crate::embedding::site_exponential(params.theta(), params.theta1(), params.phi1());
    let per_site = [site[(0, 0)], site[(1, 0)]];
    let mut state = vec![C64::new(1., 0.)];
    for _ in 0..params.n_spins() {
        state = linalg::kron_vec(&state, &per_site);
    }
    Ok(state)
}
