//! Pinned numerical tolerances.
//!
//! Every threshold used by the library, the `verify` command and the
//! acceptance suite lives here; nothing downstream invents its own numbers.

/// Max-abs deviation from Hermiticity accepted by the eigensolver.
pub const HERM_INPUT_MAX_DEV: f64 = 1e-10;
/// Jacobi stops once the off-diagonal Frobenius norm falls below this
/// fraction of the matrix norm.
pub const JACOBI_OFF_REL: f64 = 1e-13;
/// Jacobi sweep cap.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Eigenvector unitarity (max-abs of V†V − I).
pub const EIG_UNITARITY: f64 = 1e-12;
/// Relative Frobenius reconstruction residual of V diag(λ) V†.
pub const EIG_RECONSTRUCTION_REL: f64 = 1e-11;
/// Unitarity of exp(−iHt) built through the eigensolver.
pub const FUNC_UNITARY: f64 = 1e-11;
/// Default clamp for slightly negative eigenvalues in the PSD square root.
pub const PSD_CLAMP_TOL: f64 = 1e-12;
/// Relative residual of S² against the input of the PSD square root.
pub const PSD_SQRT_REL: f64 = 1e-10;
/// Trace / PSD slack accepted by the entropy routine.
pub const DENSITY_TOL: f64 = 1e-10;

/// PT normalization required of states handed to `embed_state`.
pub const PT_NORM_TOL: f64 = 1e-8;
/// Post-selected block vs direct non-Hermitian evolution.
pub const SIM_THEOREM_TOL: f64 = 1e-9;
/// Lower block = Q · upper block along evolved trajectories.
pub const FORM_INVARIANCE_TOL: f64 = 1e-8;
/// PT-norm drift allowed along a trajectory.
pub const PT_CONSERVATION_TOL: f64 = 1e-9;
/// Euclidean norm must move at least this much in some θ > 0 run.
pub const EUCLID_DEVIATION_MIN: f64 = 0.01;

/// Hermiticity of the constructed operator bundle (H_T, A, B, Q, η).
pub const OPERATOR_HERMITICITY_TOL: f64 = 1e-11;
/// Q² + I = c P⁻².
pub const Q_IDENTITY_TOL: f64 = 1e-9;
/// Q commutes with P.
pub const QP_COMMUTE_TOL: f64 = 1e-10;
/// η H_PT = H_PT† η.
pub const PSEUDO_HERMITICITY_TOL: f64 = 1e-9;
/// Operator forms via H_PT vs via the seed Hamiltonian.
pub const AB_DUAL_FORM_TOL: f64 = 1e-8;
/// Series expansion of Q vs the direct square root.
pub const Q_SERIES_TOL: f64 = 1e-8;
/// Spectrum of H_T equals the doubled spectrum of h.
pub const SPECTRUM_DOUBLING_TOL: f64 = 1e-9;
/// θ = 0 collapse of H_T onto I ⊗ h.
pub const THETA_ZERO_TOL: f64 = 1e-12;
/// n̂ = x̂ limit: B = 0 and A = h.
pub const NX_LIMIT_TOL: f64 = 1e-10;
/// Closed-form c against the inverse-squared-eigenvalue sum.
pub const C_EIGENSUM_REL: f64 = 1e-9;
/// Q refuses inversion below this minimum eigenvalue.
pub const SINGULAR_Q_MIN: f64 = 1e-8;

/// Pauli resynthesis residual.
pub const PAULI_RECONSTRUCTION_TOL: f64 = 1e-10;
/// Default cutoff below which decomposition terms are dropped.
pub const PAULI_CUTOFF: f64 = 1e-12;
/// Site-exchange symmetry of the N = 2 coefficients.
pub const N2_EXCHANGE_TOL: f64 = 1e-11;
/// Interaction-coefficient resynthesis residual per grid point.
pub const FIG2_RESYNTHESIS_TOL: f64 = 1e-10;
/// The α = 0 row of the coefficient table.
pub const FIG2_FREE_LIMIT_TOL: f64 = 1e-10;

/// Eigen-residual of dark / bright states.
pub const DARK_EIGEN_TOL: f64 = 1e-9;
/// Ancilla entropy of a dark (product) state.
pub const DARK_ENTROPY_TOL: f64 = 1e-10;
/// Magnetic splitting of the dark pair.
pub const SPLITTING_TOL: f64 = 1e-9;
/// Commutator of H_T with the ancilla field term.
pub const COMMUTATOR_TOL: f64 = 1e-10;
/// Orthogonality-suite bound on |⟨B₋|B₊⟩|.
pub const ORTHO_OVERLAP_TOL: f64 = 1e-5;
/// Orthogonality-suite bound on the bright ground-state entropy vs ln 2.
pub const ORTHO_ENTROPY_TOL: f64 = 1e-5;
/// Orthogonality-suite bound on the spin-flip matrix element.
pub const ORTHO_SPINFLIP_TOL: f64 = 1e-10;
/// Spin-flip element against |⟨B₋|B₊⟩|² (argument-level identity).
pub const SPINFLIP_IDENTITY_TOL: f64 = 1e-12;
/// Dense vs binomial overlap paths.
pub const DENSE_BINOMIAL_TOL: f64 = 1e-10;
/// Largest D_P eigenvalue, log identity and dense comparison.
pub const DPMAX_TOL: f64 = 1e-12;
/// Pinned fig4 f3 closed form.
pub const FIG4_F3_TOL: f64 = 1e-12;
/// f2(N, solve_beta(N, x)) = x round trip.
pub const BETA_ROUNDTRIP_TOL: f64 = 1e-10;
/// Residual in modulus² accepted by the contour bisection.
pub const CONTOUR_RESIDUAL_TOL: f64 = 1e-10;
/// Synthetic power-law round trip.
pub const FIT_ROUNDTRIP_TOL: f64 = 1e-6;
/// fig5 fit targets and reference constants.
pub const FIT_A_TARGET: f64 = 1.572;
pub const FIT_A_TOL: f64 = 0.02;
pub const FIT_GAMMA_MIN: f64 = 0.40;
pub const FIT_GAMMA_MAX: f64 = 0.55;
pub const FIT_B_TARGETS: [(f64, f64); 3] = [(0.90, 2.647), (0.54, 1.491), (0.09, 0.524)];
pub const FIT_B_REL: f64 = 0.25;
pub const INSET_R2_MIN: f64 = 0.99;

/// Default and maximum N for dense construction.
pub const DEFAULT_DENSE_CAP: usize = 8;
pub const MAX_DENSE_CAP: usize = 12;
/// Dense operators are refused beyond this N·θ product (log-domain only).
pub const DENSE_NTHETA_MAX: f64 = 300.0;
