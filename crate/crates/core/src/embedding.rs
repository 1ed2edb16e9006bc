//! Model operators for N PT-symmetric spins: the seed Hamiltonian, the
//! similarity generator P and its metric η = P⁻², the square-root operator Q,
//! the non-Hermitian H_PT, the embedding pair (A, B) and the total Hamiltonian
//! H_T = I⊗A + σ_y⊗B, plus extraction of the emergent Pauli-string
//! interaction coefficients.

use crate::error::{PtError, Result};
use crate::linalg::{self, herm_eig, kron, psd_sqrt, ComplexMatrix, Pauli};
use crate::tol;
use num_complex::Complex64 as C64;
use std::f64::consts::{FRAC_PI_2, PI};

/// Physical parameter set. θ is the primary internal parameter; α is kept for
/// reporting (axes of the figures are in α).
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    n_spins: usize,
    theta: f64,
    alpha: f64,
    theta1: f64,
    phi1: f64,
    dense_cap: usize,
}

/// θ = (1/2)·atanh(sin α) for α ∈ [0, π/2).
///
/// Near the right endpoint sin α rounds to 1, so 1 − sin α is evaluated as
/// 2 sin²(ε/2) with ε = π/2 − α; the result stays finite for every
/// representable α below π/2.
pub fn theta_of_alpha(alpha: f64) -> Result<f64> {
    if !alpha.is_finite() || !(0.0..FRAC_PI_2).contains(&alpha) {
        return Err(PtError::OutOfDomain(format!(
            "alpha = {alpha} outside [0, pi/2)"
        )));
    }
    let s = alpha.sin();
    if s < 0.9 {
        Ok(0.5 * s.atanh())
    } else {
        let eps = FRAC_PI_2 - alpha;
        let one_minus_s = 2.0 * (eps / 2.0).sin().powi(2);
        Ok(0.25 * ((1.0 + s).ln() - one_minus_s.ln()))
    }
}

/// Inverse map α = asin(tanh 2θ); saturates at π/2 for θ ≳ 19 in f64.
pub fn alpha_of_theta(theta: f64) -> f64 {
    (2.0 * theta).tanh().asin()
}

impl ModelParams {
    pub fn from_alpha(n_spins: usize, alpha: f64, theta1: f64, phi1: f64) -> Result<Self> {
        let theta = theta_of_alpha(alpha)?;
        Self::validated(n_spins, theta, alpha, theta1, phi1)
    }

    pub fn from_theta(n_spins: usize, theta: f64, theta1: f64, phi1: f64) -> Result<Self> {
        if !theta.is_finite() || theta < 0.0 {
            return Err(PtError::OutOfDomain(format!(
                "theta = {theta} must be finite and >= 0"
            )));
        }
        Self::validated(n_spins, theta, alpha_of_theta(theta), theta1, phi1)
    }

    fn validated(n_spins: usize, theta: f64, alpha: f64, theta1: f64, phi1: f64) -> Result<Self> {
        if n_spins == 0 {
            return Err(PtError::OutOfDomain("n_spins must be positive".into()));
        }
        if !(0.0..=PI).contains(&theta1) {
            return Err(PtError::OutOfDomain(format!(
                "theta1 = {theta1} outside [0, pi]"
            )));
        }
        if !(0.0..2.0 * PI).contains(&phi1) {
            return Err(PtError::OutOfDomain(format!(
                "phi1 = {phi1} outside [0, 2 pi)"
            )));
        }
        Ok(Self {
            n_spins,
            theta,
            alpha,
            theta1,
            phi1,
            dense_cap: tol::DEFAULT_DENSE_CAP,
        })
    }

    pub fn with_dense_cap(mut self, cap: usize) -> Result<Self> {
        if cap == 0 || cap > tol::MAX_DENSE_CAP {
            return Err(PtError::OutOfDomain(format!(
                "dense_cap = {cap} outside 1..={}",
                tol::MAX_DENSE_CAP
            )));
        }
        self.dense_cap = cap;
        Ok(self)
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn theta1(&self) -> f64 {
        self.theta1
    }
    pub fn phi1(&self) -> f64 {
        self.phi1
    }
    pub fn dense_cap(&self) -> usize {
        self.dense_cap
    }

    /// Bath Hilbert-space dimension 2^N.
    pub fn dim(&self) -> usize {
        1usize << self.n_spins
    }

    pub fn n_hat(&self) -> [f64; 3] {
        [
            self.theta1.sin() * self.phi1.cos(),
            self.theta1.sin() * self.phi1.sin(),
            self.theta1.cos(),
        ]
    }

    /// ln c = N ln(2 cosh 2θ), overflow-safe.
    pub fn ln_c(&self) -> f64 {
        self.n_spins as f64 * (2.0 * self.theta + (-4.0 * self.theta).exp().ln_1p())
    }

    /// c = 2^N cosh^N 2θ; +inf once ln c exceeds the f64 range. The powi
    /// route keeps θ = 0 exact (c = 2^N).
    pub fn c(&self) -> f64 {
        let base = 2.0 * (2.0 * self.theta).cosh();
        if base.is_finite() && self.ln_c() < 700.0 {
            base.powi(self.n_spins as i32)
        } else {
            self.ln_c().exp()
        }
    }

    /// Guard for dense-matrix construction.
    pub(crate) fn check_dense(&self) -> Result<()> {
        if self.n_spins > self.dense_cap {
            return Err(PtError::CapExceeded {
                n_spins: self.n_spins,
                cap: self.dense_cap,
            });
        }
        if self.n_spins as f64 * self.theta > tol::DENSE_NTHETA_MAX {
            return Err(PtError::OutOfDomain(format!(
                "dense construction refused: N*theta = {:.1} exceeds {}",
                self.n_spins as f64 * self.theta,
                tol::DENSE_NTHETA_MAX
            )));
        }
        Ok(())
    }
}

/// n̂·σ as a 2×2 matrix.
pub fn n_dot_sigma(theta1: f64, phi1: f64) -> ComplexMatrix {
    let [nx, ny, nz] = [
        theta1.sin() * phi1.cos(),
        theta1.sin() * phi1.sin(),
        theta1.cos(),
    ];
    ComplexMatrix::from_rows(
        2,
        2,
        &[
            C64::new(nz, 0.),
            C64::new(nx, -ny),
            C64::new(nx, ny),
            C64::new(-nz, 0.),
        ],
    )
}

/// e^{t n̂·σ} = cosh t · I + sinh t · (n̂·σ), exact per site.
pub fn site_exponential(t: f64, theta1: f64, phi1: f64) -> ComplexMatrix {
    let ns = n_dot_sigma(theta1, phi1);
    let mut m = ns.scale(C64::new(t.sinh(), 0.));
    let ch = C64::new(t.cosh(), 0.);
    m[(0, 0)] += ch;
    m[(1, 1)] += ch;
    m
}

fn phase_normalize(v: &mut [C64]) {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(first) = v.iter().find(|z| z.norm() > 1e-14 * scale).copied() {
        let phase = first / first.norm();
        v.iter_mut().for_each(|z| *z /= phase);
    }
}

/// The 2×2 unitary u with e^{θ n̂·σ} = u† e^{θ σ_z} u. Its rows are the
/// conjugated ±1 eigenvectors of n̂·σ, each fixed by the convention that the
/// first non-negligible component is real positive.
pub fn site_rotation(theta1: f64, phi1: f64) -> ComplexMatrix {
    let (ch, sh) = ((theta1 / 2.0).cos(), (theta1 / 2.0).sin());
    let eip = C64::from_polar(1.0, phi1);
    let mut v_plus = [C64::new(ch, 0.), eip * sh];
    let mut v_minus = [C64::new(sh, 0.), -eip * ch];
    phase_normalize(&mut v_plus);
    phase_normalize(&mut v_minus);
    ComplexMatrix::from_rows(
        2,
        2,
        &[
            v_plus[0].conj(),
            v_plus[1].conj(),
            v_minus[0].conj(),
            v_minus[1].conj(),
        ],
    )
}

/// Seed Hamiltonian h = Σᵢ σᵢˣ on 2^N.
pub fn seed_hamiltonian(n_spins: usize) -> ComplexMatrix {
    let dim = 1usize << n_spins;
    let mut h = ComplexMatrix::zeros(dim, dim);
    for site in 0..n_spins {
        let bit = 1usize << (n_spins - 1 - site);
        for m in 0..dim {
            h[(m, m ^ bit)] += C64::new(1.0, 0.0);
        }
    }
    h
}

/// N-fold Kronecker power of a single-site operator.
fn site_power(site: &ComplexMatrix, n_spins: usize) -> ComplexMatrix {
    let mut out = site.clone();
    for _ in 1..n_spins {
        out = kron(&out, site);
    }
    out
}

/// P = ⊗ e^{θ n̂·σᵢ} together with c = 2^N cosh^N 2θ.
pub fn build_p(params: &ModelParams) -> Result<(ComplexMatrix, f64)> {
    params.check_dense()?;
    let site = site_exponential(params.theta(), params.theta1(), params.phi1());
    Ok((site_power(&site, params.n_spins()), params.c()))
}

/// P⁻¹ = ⊗ e^{−θ n̂·σᵢ}, by closed form rather than inversion.
pub fn build_p_inv(params: &ModelParams) -> Result<ComplexMatrix> {
    params.check_dense()?;
    let site = site_exponential(-params.theta(), params.theta1(), params.phi1());
    Ok(site_power(&site, params.n_spins()))
}

/// P/√c, scaled per site so every entry stays O(1).
fn scaled_p(params: &ModelParams) -> ComplexMatrix {
    let norm = (2.0 * (2.0 * params.theta()).cosh()).sqrt();
    let site = site_exponential(params.theta(), params.theta1(), params.phi1())
        .scale(C64::new(1.0 / norm, 0.0));
    site_power(&site, params.n_spins())
}

/// R = (I − P²/c)^{1/2} = PQ/√c. The argument has spectrum inside (0, 1], so
/// the square root is evaluated at O(1) scale; cP⁻² − I spans e^{±2Nθ} and
/// square-rooting it directly loses its small eigenvalues to rounding.
fn sqrt_one_minus_scaled_p2(params: &ModelParams) -> Result<ComplexMatrix> {
    let norm = 2.0 * (2.0 * params.theta()).cosh();
    let site = site_exponential(2.0 * params.theta(), params.theta1(), params.phi1())
        .scale(C64::new(1.0 / norm, 0.0));
    let s = site_power(&site, params.n_spins());
    let dim = params.dim();
    let mut m = s.scale(C64::new(-1.0, 0.0));
    for i in 0..dim {
        m[(i, i)] += C64::new(1.0, 0.0);
    }
    psd_sqrt(&m, tol::PSD_CLAMP_TOL)
}

/// Q = (c P⁻² − I)^{1/2}, evaluated as √c · P⁻¹ · (I − P²/c)^{1/2} with the
/// exact product-form P⁻¹ (all factors commute).
pub fn build_q(params: &ModelParams) -> Result<ComplexMatrix> {
    let p_inv = build_p_inv(params)?;
    let r = sqrt_one_minus_scaled_p2(params)?;
    Ok((&p_inv * &r).scale(C64::new((0.5 * params.ln_c()).exp(), 0.0)))
}

/// H_PT = P h P⁻¹, assembled per site: the similarity acts factor-wise on
/// h = Σσᵢˣ, so each term is an exact 2×2 conjugation.
pub fn build_h_pt(params: &ModelParams) -> Result<ComplexMatrix> {
    params.check_dense()?;
    let n = params.n_spins();
    let site = site_exponential(params.theta(), params.theta1(), params.phi1());
    let site_inv = site_exponential(-params.theta(), params.theta1(), params.phi1());
    let conj = &(&site * &Pauli::X.matrix()) * &site_inv;
    let dim = params.dim();
    let mut h_pt = ComplexMatrix::zeros(dim, dim);
    let i2 = Pauli::I.matrix();
    for site_idx in 0..n {
        let mut factors: Vec<&ComplexMatrix> = vec![&i2; n];
        factors[site_idx] = &conj;
        h_pt = &h_pt + &linalg::kron_all(&factors);
    }
    Ok(h_pt)
}

/// A = (1/c) P (h + Q h Q) P and B = (i/c) P [h, Q] P, computed through the
/// bounded factors P̃ = P/√c and R = PQ/√c:
/// A = P̃ h P̃ + R h R,  B = i (P̃ h R − R h P̃).
pub fn build_ab(params: &ModelParams) -> Result<(ComplexMatrix, ComplexMatrix)> {
    params.check_dense()?;
    let p_scaled = scaled_p(params);
    let r = sqrt_one_minus_scaled_p2(params)?;
    let h = seed_hamiltonian(params.n_spins());
    let ph = &p_scaled * &h;
    let rh = &r * &h;
    let a = &(&ph * &p_scaled) + &(&rh * &r);
    let b = (&(&ph * &r) - &(&rh * &p_scaled)).scale(C64::new(0.0, 1.0));
    Ok((a, b))
}

/// The same pair via H_PT: A = (1/c)(H_PT Q⁻¹ + Q H_PT) η⁻¹ Q and
/// B = (i/c)(H_PT − Q H_PT Q⁻¹) η⁻¹ Q. Used as the dual-formula cross-check;
/// refuses a numerically singular Q.
pub fn build_ab_via_h_pt(params: &ModelParams) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let q = build_q(params)?;
    let q_eig = herm_eig(&q)?;
    let min_eig = q_eig.eigenvalues[0];
    if min_eig < tol::SINGULAR_Q_MIN {
        return Err(PtError::SingularQ(min_eig));
    }
    let q_inv = q_eig.apply_function(|l| C64::new(1.0 / l, 0.0));
    let h_pt = build_h_pt(params)?;
    let (p, c) = build_p(params)?;
    let eta_inv = &p * &p;
    let inv_c = C64::new(1.0 / c, 0.0);
    let a = (&(&(&(&h_pt * &q_inv) + &(&q * &h_pt)) * &eta_inv) * &q).scale(inv_c);
    let b =
        (&(&(&h_pt - &(&(&q * &h_pt) * &q_inv)) * &eta_inv) * &q).scale(inv_c * C64::new(0.0, 1.0));
    Ok((a, b))
}

/// All model operators for one parameter set. Immutable after construction.
#[derive(Debug, Clone)]
pub struct EmbeddingOperators {
    pub params: ModelParams,
    pub h: ComplexMatrix,
    pub p: ComplexMatrix,
    pub p_inv: ComplexMatrix,
    pub c: f64,
    pub q: ComplexMatrix,
    pub eta: ComplexMatrix,
    pub h_pt: ComplexMatrix,
    pub a_op: ComplexMatrix,
    pub b_op: ComplexMatrix,
    pub h_total: ComplexMatrix,
}

/// Builds the full bundle, H_T = I ⊗ A + σ_y ⊗ B included.
pub fn build_h_total(params: &ModelParams) -> Result<EmbeddingOperators> {
    params.check_dense()?;
    let (p, c) = build_p(params)?;
    let p_inv = build_p_inv(params)?;
    let h = seed_hamiltonian(params.n_spins());
    let q = build_q(params)?;
    // η = P⁻² = ⊗ e^{−2θ n̂·σᵢ}, exact product form
    let eta_site = site_exponential(-2.0 * params.theta(), params.theta1(), params.phi1());
    let eta = site_power(&eta_site, params.n_spins());
    let h_pt = build_h_pt(params)?;
    let (a_op, b_op) = build_ab(params)?;
    let h_total = &kron(&Pauli::I.matrix(), &a_op) + &kron(&Pauli::Y.matrix(), &b_op);
    Ok(EmbeddingOperators {
        params: params.clone(),
        h,
        p,
        p_inv,
        c,
        q,
        eta,
        h_pt,
        a_op,
        b_op,
        h_total,
    })
}

/// Q as the truncated binomial series Σₘ (−1)^m C(1/2, m) c^{1/2−m} P^{2m−1}.
///
/// Terms are added until the term Frobenius norm drops below `term_tol`;
/// hitting `m_max` with the last term still above 10³·term_tol is an error.
pub fn q_series(params: &ModelParams, term_tol: f64, m_max: usize) -> Result<ComplexMatrix> {
    params.check_dense()?;
    let (p, c) = build_p(params)?;
    let p_inv = build_p_inv(params)?;
    let p2 = &p * &p;
    let dim = params.dim();
    let mut power = p_inv; // P^{2m-1} at m = 0
    let mut coeff = c.sqrt(); // (−1)^m C(1/2,m) c^{1/2−m} at m = 0
    let mut sum = ComplexMatrix::zeros(dim, dim);
    let mut last_term_norm = f64::INFINITY;
    for m in 0..=m_max {
        if m > 0 {
            power = &power * &p2;
            coeff *= (m as f64 - 1.5) / (m as f64) / c;
        }
        let term = power.scale(C64::new(coeff, 0.0));
        last_term_norm = term.frobenius_norm();
        sum = &sum + &term;
        if last_term_norm < term_tol {
            return Ok(sum);
        }
    }
    if last_term_norm > 1e3 * term_tol {
        return Err(PtError::NoConvergence(format!(
            "Q series: term norm {last_term_norm:.3e} after m_max = {m_max} terms"
        )));
    }
    Ok(sum)
}

/// Hermitian Pauli-string component of a (1 + N)-spin operator; the ancilla
/// factor comes first.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub ancilla_factor: Pauli,
    pub site_factors: Vec<Pauli>,
    pub coefficient: f64,
}

impl PauliTerm {
    /// Non-identity factor count.
    pub fn weight(&self) -> usize {
        let anc = usize::from(self.ancilla_factor != Pauli::I);
        anc + self.site_factors.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn string_label(&self) -> String {
        let mut s = String::with_capacity(self.site_factors.len() + 1);
        s.push(self.ancilla_factor.label());
        for p in &self.site_factors {
            s.push(p.label());
        }
        s
    }
}

/// Tr(op · S)/2^K for the Pauli string S encoded as per-factor labels.
fn string_coefficient(op: &ComplexMatrix, labels: &[Pauli]) -> f64 {
    let k = labels.len();
    let dim = 1usize << k;
    let mut tr = C64::new(0.0, 0.0);
    for i in 0..dim {
        // S|i> = v |j>
        let mut j = 0usize;
        let mut v = C64::new(1.0, 0.0);
        for (f, &label) in labels.iter().enumerate() {
            let b = (i >> (k - 1 - f)) & 1;
            let (b2, factor) = label.apply_basis(b);
            j |= b2 << (k - 1 - f);
            v *= factor;
        }
        tr += op[(i, j)] * v;
    }
    (tr / dim as f64).re
}

/// Hilbert-Schmidt decomposition of a Hermitian operator on ancilla ⊗ N spins
/// into Pauli strings. Terms with |coefficient| < cutoff are dropped; output
/// is sorted by (weight, lexicographic string).
pub fn pauli_decompose(op: &ComplexMatrix, cutoff: f64) -> Result<Vec<PauliTerm>> {
    let (r, cdim) = op.dims();
    if r != cdim || !r.is_power_of_two() || r < 4 {
        return Err(PtError::DimMismatch(r, cdim));
    }
    let dev = op.hermiticity_deviation();
    if dev > tol::HERM_INPUT_MAX_DEV {
        return Err(PtError::NotHermitian(dev));
    }
    let k = r.trailing_zeros() as usize;
    let mut labels = vec![Pauli::I; k];
    let mut terms = Vec::new();
    let strings = 4usize.pow(k as u32);
    for code in 0..strings {
        let mut idx = code;
        for f in (0..k).rev() {
            labels[f] = Pauli::ALL[idx % 4];
            idx /= 4;
        }
        let coefficient = string_coefficient(op, &labels);
        if coefficient.abs() >= cutoff {
            terms.push(PauliTerm {
                ancilla_factor: labels[0],
                site_factors: labels[1..].to_vec(),
                coefficient,
            });
        }
    }
    terms.sort_by(|a, b| {
        a.weight()
            .cmp(&b.weight())
            .then_with(|| a.ancilla_factor.cmp(&b.ancilla_factor))
            .then_with(|| a.site_factors.cmp(&b.site_factors))
    });
    Ok(terms)
}

/// Σ coeff · S over the given terms; inverse of `pauli_decompose`.
pub fn pauli_resynthesize(terms: &[PauliTerm], n_sites: usize) -> ComplexMatrix {
    let dim = 1usize << (n_sites + 1);
    let mut out = ComplexMatrix::zeros(dim, dim);
    for term in terms {
        let mut factors = vec![term.ancilla_factor.matrix()];
        factors.extend(term.site_factors.iter().map(|p| p.matrix()));
        let refs: Vec<&ComplexMatrix> = factors.iter().collect();
        let s = linalg::kron_all(&refs);
        out = &out + &s.scale(C64::new(term.coefficient, 0.0));
    }
    out
}

/// The four interaction coefficients of the N = 2, n̂ = ẑ Hamiltonian
/// H_T = I⊗[A1(X₁+X₂) + A2(X₁Z₂+Z₁X₂)] + σ_y⊗[B1(Y₁+Y₂) + B2(Y₁Z₂+Z₁Y₂)].
pub fn n2_coefficients(alpha: f64) -> Result<(f64, f64, f64, f64)> {
    let params = ModelParams::from_alpha(2, alpha, 0.0, 0.0)?;
    let ops = build_h_total(&params)?;
    let ht = &ops.h_total;
    use Pauli::{I, X, Y, Z};
    let a1 = string_coefficient(ht, &[I, X, I]);
    let a2 = string_coefficient(ht, &[I, X, Z]);
    let b1 = string_coefficient(ht, &[Y, Y, I]);
    let b2 = string_coefficient(ht, &[Y, Y, Z]);
    Ok((a1, a2, b1, b2))
}

/// Rebuilds the N = 2 Hamiltonian from its four interaction coefficients.
pub fn n2_resynthesize(a1: f64, a2: f64, b1: f64, b2: f64) -> ComplexMatrix {
    use Pauli::{I, X, Y, Z};
    let string = |labels: [Pauli; 3], w: f64| {
        let mats: Vec<ComplexMatrix> = labels.iter().map(|p| p.matrix()).collect();
        linalg::kron_all(&mats.iter().collect::<Vec<_>>()).scale(C64::new(w, 0.0))
    };
    let mut out = string([I, X, I], a1);
    for (labels, w) in [
        ([I, I, X], a1),
        ([I, X, Z], a2),
        ([I, Z, X], a2),
        ([Y, Y, I], b1),
        ([Y, I, Y], b1),
        ([Y, Y, Z], b2),
        ([Y, Z, Y], b2),
    ] {
        out = &out + &string(labels, w);
    }
    out
}

/// All eight N = 2 projections (both sites), for symmetry checks.
pub fn n2_coefficient_pairs(alpha: f64) -> Result<[(f64, f64); 4]> {
    let params = ModelParams::from_alpha(2, alpha, 0.0, 0.0)?;
    let ops = build_h_total(&params)?;
    let ht = &ops.h_total;
    use Pauli::{I, X, Y, Z};
    Ok([
        (
            string_coefficient(ht, &[I, X, I]),
            string_coefficient(ht, &[I, I, X]),
        ),
        (
            string_coefficient(ht, &[I, X, Z]),
            string_coefficient(ht, &[I, Z, X]),
        ),
        (
            string_coefficient(ht, &[Y, Y, I]),
            string_coefficient(ht, &[Y, I, Y]),
        ),
        (
            string_coefficient(ht, &[Y, Y, Z]),
            string_coefficient(ht, &[Y, Z, Y]),
        ),
    ])
}

#[cfg(test)]
mod tests;
