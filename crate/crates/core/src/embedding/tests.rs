use super::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).max_abs()
}

fn random_params(rng: &mut ChaCha8Rng, n_max: usize, alpha_max: f64) -> ModelParams {
    let n = rng.gen_range(1..=n_max);
    let alpha = rng.gen_range(0.0..alpha_max);
    let theta1 = rng.gen_range(0.0..PI);
    let phi1 = rng.gen_range(0.0..2.0 * PI);
    ModelParams::from_alpha(n, alpha, theta1, phi1).unwrap()
}

#[test]
fn theta_of_alpha_values() {
    assert_eq!(theta_of_alpha(0.0).unwrap(), 0.0);
    // oracle: atanh by its odd power series at x = sin(pi/6) = 1/2
    let x: f64 = 0.5;
    let mut series = 0.0;
    for k in 0..200 {
        series += x.powi(2 * k + 1) / (2 * k + 1) as f64;
    }
    let th = theta_of_alpha(PI / 6.0).unwrap();
    assert!((th - 0.5 * series).abs() < 1e-15);
    assert!((th - 0.274_653_072_167_027_4).abs() < 1e-15);
}

#[test]
fn theta_of_alpha_boundary() {
    let th = theta_of_alpha(FRAC_PI_2 - 1e-12).unwrap();
    assert!(th.is_finite() && th > 10.0 && th < 20.0, "theta = {th}");
    assert!(theta_of_alpha(FRAC_PI_2).is_err());
    assert!(theta_of_alpha(-1e-15).is_err());
    assert!(theta_of_alpha(f64::NAN).is_err());
}

#[test]
fn theta_of_alpha_monotone() {
    let mut prev = -1.0;
    for i in 0..=150 {
        let alpha = i as f64 * 0.01;
        let th = theta_of_alpha(alpha).unwrap();
        assert!(th > prev || (i == 0 && th == 0.0));
        prev = th;
    }
}

#[test]
fn site_rotation_z_axis_is_identity() {
    let u = site_rotation(0.0, 0.0);
    assert!(max_abs_diff(&u, &ComplexMatrix::identity(2)) < 1e-14);
}

#[test]
fn site_rotation_x_axis_closed_form() {
    // u† e^{0.7 σz} u = cosh(0.7)·I + sinh(0.7)·σx
    let u = site_rotation(FRAC_PI_2, 0.0);
    let t = 0.7_f64;
    let exp_z = ComplexMatrix::from_diag(&[t.exp(), (-t).exp()]);
    let conj = &(&u.adjoint() * &exp_z) * &u;
    let expect = site_exponential(t, FRAC_PI_2, 0.0);
    assert!(max_abs_diff(&conj, &expect) < 1e-14);
    let mut direct = Pauli::X.matrix().scale(c(t.sinh(), 0.));
    direct[(0, 0)] += c(t.cosh(), 0.);
    direct[(1, 1)] += c(t.cosh(), 0.);
    assert!(max_abs_diff(&conj, &direct) < 1e-14);
}

#[test]
fn site_rotation_diagonalizes_n_sigma() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..25 {
        let theta1 = rng.gen_range(0.0..PI);
        let phi1 = rng.gen_range(0.0..2.0 * PI);
        let u = site_rotation(theta1, phi1);
        let gram = &u.adjoint() * &u;
        assert!(max_abs_diff(&gram, &ComplexMatrix::identity(2)) < 1e-12);
        let sz = Pauli::Z.matrix();
        let back = &(&u.adjoint() * &sz) * &u;
        assert!(max_abs_diff(&back, &n_dot_sigma(theta1, phi1)) < 1e-12);
        // conjugation identity for a generic theta
        let t: f64 = rng.gen_range(0.0..1.5);
        let exp_z = ComplexMatrix::from_diag(&[t.exp(), (-t).exp()]);
        let conj = &(&u.adjoint() * &exp_z) * &u;
        assert!(max_abs_diff(&conj, &site_exponential(t, theta1, phi1)) < 1e-11);
    }
    // poles
    for theta1 in [0.0, PI] {
        let u = site_rotation(theta1, 1.3);
        assert!(max_abs_diff(&(&u.adjoint() * &u), &ComplexMatrix::identity(2)) < 1e-12);
        let back = &(&u.adjoint() * &Pauli::Z.matrix()) * &u;
        assert!(max_abs_diff(&back, &n_dot_sigma(theta1, 1.3)) < 1e-12);
    }
}

#[test]
fn build_p_free_limit() {
    let params = ModelParams::from_alpha(3, 0.0, 0.0, 0.0).unwrap();
    let (p, c_val) = build_p(&params).unwrap();
    assert!(max_abs_diff(&p, &ComplexMatrix::identity(8)) < 1e-15);
    assert_eq!(c_val, 8.0);
}

#[test]
fn build_p_single_spin_z() {
    let params = ModelParams::from_theta(1, 0.5, 0.0, 0.0).unwrap();
    let (p, c_val) = build_p(&params).unwrap();
    assert!(
        max_abs_diff(
            &p,
            &ComplexMatrix::from_diag(&[0.5_f64.exp(), (-0.5_f64).exp()])
        ) < 1e-15
    );
    assert!((c_val - 3.086_161_269_630_487_4).abs() < 1e-14);
    // oracle: c equals the sum of inverse squared eigenvalues of P
    let eig = herm_eig(&p).unwrap();
    let sum: f64 = eig.eigenvalues.iter().map(|l| 1.0 / (l * l)).sum();
    assert!((sum - c_val).abs() / c_val < 1e-12);
}

#[test]
fn build_p_two_spins_closed_form() {
    let params = ModelParams::from_theta(2, 2.0_f64.ln() / 2.0, 0.7, 1.9).unwrap();
    let (p, c_val) = build_p(&params).unwrap();
    assert!((c_val - 6.25).abs() < 1e-12);
    let eig = herm_eig(&p).unwrap();
    let sum: f64 = eig.eigenvalues.iter().map(|l| 1.0 / (l * l)).sum();
    assert!((sum - c_val).abs() / c_val < 1e-9);
}

#[test]
fn build_p_respects_cap() {
    let params = ModelParams::from_alpha(3, 0.5, 0.0, 0.0)
        .unwrap()
        .with_dense_cap(2)
        .unwrap();
    assert!(matches!(build_p(&params), Err(PtError::CapExceeded { .. })));
    assert!(ModelParams::from_alpha(1, 0.5, 0.0, 0.0)
        .unwrap()
        .with_dense_cap(13)
        .is_err());
}

#[test]
fn build_q_scalar_limits() {
    let params = ModelParams::from_alpha(1, 0.0, 0.0, 0.0).unwrap();
    let q = build_q(&params).unwrap();
    assert!(max_abs_diff(&q, &ComplexMatrix::identity(2)) < 1e-12);
    let params = ModelParams::from_alpha(3, 0.0, 0.0, 0.0).unwrap();
    let q = build_q(&params).unwrap();
    assert!(max_abs_diff(&q, &ComplexMatrix::identity(8).scale(c(7.0_f64.sqrt(), 0.))) < 1e-12);
}

#[test]
fn build_q_diagonal_closed_form() {
    // N = 2, θ = 0.4, n̂ = ẑ: diagonal entries √(c e^{−2θ(N−2k)} − 1)
    let theta = 0.4;
    let params = ModelParams::from_theta(2, theta, 0.0, 0.0).unwrap();
    let q = build_q(&params).unwrap();
    let c_val = params.c();
    for (idx, s) in [(0usize, 2.0), (1, 0.0), (2, 0.0), (3, -2.0)] {
        let expect = (c_val * (-2.0 * theta * s).exp() - 1.0).sqrt();
        assert!((q[(idx, idx)].re - expect).abs() < 1e-10, "index {idx}");
    }
    assert!((q[(0, 0)].re - 0.666_749_758_130_947_6).abs() < 1e-12);
}

#[test]
fn build_q_identities_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..8 {
        let params = random_params(&mut rng, 3, 1.4);
        let q = build_q(&params).unwrap();
        let (p, c_val) = build_p(&params).unwrap();
        let p_inv = build_p_inv(&params).unwrap();
        assert!(q.hermiticity_deviation() < tol::OPERATOR_HERMITICITY_TOL);
        // Q² + I = c P⁻²
        let mut lhs = &q * &q;
        let dim = params.dim();
        for i in 0..dim {
            lhs[(i, i)] += c(1.0, 0.0);
        }
        let rhs = (&p_inv * &p_inv).scale(c(c_val, 0.0));
        assert!(max_abs_diff(&lhs, &rhs) < tol::Q_IDENTITY_TOL);
        // [Q, P] = 0
        let comm = &(&q * &p) - &(&p * &q);
        assert!(comm.max_abs() < tol::QP_COMMUTE_TOL * p.max_abs().max(1.0));
    }
}

#[test]
fn h_pt_free_limit_and_single_spin() {
    let params = ModelParams::from_alpha(2, 0.0, 0.0, 0.0).unwrap();
    let h_pt = build_h_pt(&params).unwrap();
    assert!(max_abs_diff(&h_pt, &seed_hamiltonian(2)) < 1e-14);

    // N = 1, n̂ = ẑ, θ = 0.3: off-diagonals e^{±0.6}
    let params = ModelParams::from_theta(1, 0.3, 0.0, 0.0).unwrap();
    let h_pt = build_h_pt(&params).unwrap();
    assert!((h_pt[(0, 1)] - c(0.6_f64.exp(), 0.)).norm() < 1e-14);
    assert!((h_pt[(1, 0)] - c((-0.6_f64).exp(), 0.)).norm() < 1e-14);
    assert!(h_pt[(0, 0)].norm() < 1e-14 && h_pt[(1, 1)].norm() < 1e-14);
}

#[test]
fn h_pt_pseudo_hermitian_and_isospectral() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..6 {
        let params = random_params(&mut rng, 3, 1.4);
        let h_pt = build_h_pt(&params).unwrap();
        let p_inv = build_p_inv(&params).unwrap();
        let eta = &p_inv * &p_inv;
        let resid = &(&eta * &h_pt) - &(&h_pt.adjoint() * &eta);
        assert!(
            resid.max_abs() < tol::PSEUDO_HERMITICITY_TOL * eta.max_abs().max(1.0),
            "eta residual {}",
            resid.max_abs()
        );
        // non-Hermitian whenever θ > 0 and n̂ not along x̂
        let nx_aligned = (params.n_hat()[0] - 1.0).abs() < 1e-12;
        if params.theta() > 0.05 && !nx_aligned {
            assert!(h_pt.hermiticity_deviation() > 0.0);
        }
    }
}

#[test]
fn ab_trivial_limits() {
    // θ = 0: A = h, B = 0
    let params = ModelParams::from_alpha(2, 0.0, 0.3, 0.4).unwrap();
    let (a, b) = build_ab(&params).unwrap();
    assert!(max_abs_diff(&a, &seed_hamiltonian(2)) < 1e-13);
    assert!(b.max_abs() < 1e-13);
    // n̂ = x̂, θ > 0: [h, Q] = 0 forces the same collapse
    for theta in [0.3, 0.8] {
        let params = ModelParams::from_theta(2, theta, FRAC_PI_2, 0.0).unwrap();
        let (a, b) = build_ab(&params).unwrap();
        assert!(max_abs_diff(&a, &seed_hamiltonian(2)) < tol::NX_LIMIT_TOL);
        assert!(b.max_abs() < tol::NX_LIMIT_TOL);
    }
}

#[test]
fn ab_dual_formula_agreement() {
    let params = ModelParams::from_alpha(2, 1.0, 0.0, 0.0).unwrap();
    let (a2, b2) = build_ab(&params).unwrap();
    let (a1, b1) = build_ab_via_h_pt(&params).unwrap();
    assert!(max_abs_diff(&a1, &a2) < tol::AB_DUAL_FORM_TOL);
    assert!(max_abs_diff(&b1, &b2) < tol::AB_DUAL_FORM_TOL);
    assert!(a2.hermiticity_deviation() < tol::OPERATOR_HERMITICITY_TOL);
    assert!(b2.hermiticity_deviation() < tol::OPERATOR_HERMITICITY_TOL);
}

#[test]
fn e1p_route_refuses_singular_q() {
    // deep in the large-theta regime the smallest Q eigenvalue underflows
    let params = ModelParams::from_theta(1, 10.0, 0.0, 0.0).unwrap();
    assert!(matches!(build_ab_via_h_pt(&params), Err(PtError::SingularQ(_))));
    // the seed-Hamiltonian route needs no inversion and still works
    let (a, b) = build_ab(&params).unwrap();
    assert!(a.all_finite() && b.all_finite());
}

#[test]
fn h_total_theta_zero_exact() {
    let params = ModelParams::from_alpha(2, 0.0, 0.0, 0.0).unwrap();
    let ops = build_h_total(&params).unwrap();
    let expect = kron(&Pauli::I.matrix(), &seed_hamiltonian(2));
    assert!(max_abs_diff(&ops.h_total, &expect) < tol::THETA_ZERO_TOL);
}

#[test]
fn h_total_nx_limit() {
    let params = ModelParams::from_theta(2, 0.8, FRAC_PI_2, 0.0).unwrap();
    let ops = build_h_total(&params).unwrap();
    let expect = kron(&Pauli::I.matrix(), &seed_hamiltonian(2));
    assert!(max_abs_diff(&ops.h_total, &expect) < tol::NX_LIMIT_TOL);
}

#[test]
fn h_total_spectrum_doubling() {
    // N = 2: eigenvalues {−2, 0, 0, 2}, each doubled
    let params = ModelParams::from_alpha(2, 0.9, 0.0, 0.0).unwrap();
    let ops = build_h_total(&params).unwrap();
    let eig = herm_eig(&ops.h_total).unwrap();
    let expect = [-2.0, -2.0, 0.0, 0.0, 0.0, 0.0, 2.0, 2.0];
    for (got, want) in eig.eigenvalues.iter().zip(expect) {
        assert!(
            (got - want).abs() < tol::SPECTRUM_DOUBLING_TOL,
            "{got} vs {want}"
        );
    }
    // random parameters: multiset equality against doubled eig(h)
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..4 {
        let params = random_params(&mut rng, 3, 1.4);
        let ops = build_h_total(&params).unwrap();
        let et = herm_eig(&ops.h_total).unwrap().eigenvalues;
        let eh = herm_eig(&ops.h).unwrap().eigenvalues;
        let mut doubled: Vec<f64> = eh.iter().flat_map(|&l| [l, l]).collect();
        doubled.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in et.iter().zip(doubled) {
            assert!((got - want).abs() < tol::SPECTRUM_DOUBLING_TOL);
        }
    }
}

#[test]
fn h_total_bundle_invariants() {
    let params = ModelParams::from_alpha(3, 1.1, 0.8, 2.5).unwrap();
    let ops = build_h_total(&params).unwrap();
    for (name, m) in [
        ("p", &ops.p),
        ("q", &ops.q),
        ("eta", &ops.eta),
        ("a", &ops.a_op),
        ("b", &ops.b_op),
        ("h_total", &ops.h_total),
    ] {
        assert!(
            m.hermiticity_deviation() < tol::OPERATOR_HERMITICITY_TOL,
            "{name}"
        );
    }
    // eta = P⁻² by construction; check it against inversion of P²
    let p2 = &ops.p * &ops.p;
    let ident = &p2 * &ops.eta;
    assert!(max_abs_diff(&ident, &ComplexMatrix::identity(params.dim())) < 1e-10);
}

#[test]
fn q_series_scalar_and_matrix_paths() {
    // θ = 0, N = 2: series sums to √3 · I
    let params = ModelParams::from_alpha(2, 0.0, 0.0, 0.0).unwrap();
    let q = q_series(&params, 1e-12, 200).unwrap();
    assert!(max_abs_diff(&q, &ComplexMatrix::identity(4).scale(c(3.0_f64.sqrt(), 0.))) < 1e-10);

    let params = ModelParams::from_theta(2, 0.6, 0.9, 0.3).unwrap();
    let series = q_series(&params, 1e-11, 10_000).unwrap();
    let direct = build_q(&params).unwrap();
    assert!(max_abs_diff(&series, &direct) < tol::Q_SERIES_TOL);
}

#[test]
fn q_series_truncation_error_path() {
    let params = ModelParams::from_theta(2, 1.0, 0.0, 0.0).unwrap();
    assert!(matches!(
        q_series(&params, 1e-11, 1),
        Err(PtError::NoConvergence(_))
    ));
}

#[test]
fn pauli_decompose_free_hamiltonian() {
    let ih = kron(&Pauli::I.matrix(), &seed_hamiltonian(2));
    let terms = pauli_decompose(&ih, tol::PAULI_CUTOFF).unwrap();
    assert_eq!(terms.len(), 2);
    for t in &terms {
        assert_eq!(t.ancilla_factor, Pauli::I);
        assert!((t.coefficient - 1.0).abs() < 1e-14);
        assert_eq!(t.site_factors.iter().filter(|&&p| p == Pauli::X).count(), 1);
    }
}

#[test]
fn pauli_decompose_h_total_structure() {
    // only eight strings survive for N = 2, n̂ = ẑ
    let params = ModelParams::from_alpha(2, 0.9, 0.0, 0.0).unwrap();
    let ops = build_h_total(&params).unwrap();
    let terms = pauli_decompose(&ops.h_total, tol::PAULI_CUTOFF).unwrap();
    let labels: Vec<String> = terms.iter().map(|t| t.string_label()).collect();
    let expect = ["IXI", "IIX", "YYI", "YIY", "IXZ", "IZX", "YYZ", "YZY"];
    assert_eq!(labels.len(), 8, "{labels:?}");
    for want in expect {
        assert!(labels.iter().any(|l| l == want), "missing {want}");
    }
    for t in &terms {
        assert!(matches!(t.ancilla_factor, Pauli::I | Pauli::Y));
    }
    let rec = pauli_resynthesize(&terms, 2);
    assert!(max_abs_diff(&rec, &ops.h_total) < tol::PAULI_RECONSTRUCTION_TOL);
}

#[test]
fn pauli_decompose_random_resynthesis() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let h = crate::test_util::random_hermitian(8, &mut rng);
    let terms = pauli_decompose(&h, 0.0).unwrap();
    let rec = pauli_resynthesize(&terms, 2);
    assert!(max_abs_diff(&rec, &h) < tol::PAULI_RECONSTRUCTION_TOL);
    // a generic operator does excite X/Z on the ancilla
    assert!(terms
        .iter()
        .any(|t| matches!(t.ancilla_factor, Pauli::X | Pauli::Z)));
}

#[test]
fn pauli_decompose_rejects_non_hermitian() {
    let mut m = ComplexMatrix::identity(4);
    m[(0, 1)] = c(1e-3, 0.);
    assert!(matches!(
        pauli_decompose(&m, 0.0),
        Err(PtError::NotHermitian(_))
    ));
}

#[test]
fn n2_coefficients_free_limit_and_symmetry() {
    let (a1, a2, b1, b2) = n2_coefficients(0.0).unwrap();
    assert!((a1 - 1.0).abs() < tol::FIG2_FREE_LIMIT_TOL);
    assert!(a2.abs() < tol::FIG2_FREE_LIMIT_TOL);
    assert!(b1.abs() < tol::FIG2_FREE_LIMIT_TOL);
    assert!(b2.abs() < tol::FIG2_FREE_LIMIT_TOL);
    for alpha in [0.4, 0.9, 1.3] {
        for (first, second) in n2_coefficient_pairs(alpha).unwrap() {
            assert!((first - second).abs() < tol::N2_EXCHANGE_TOL);
        }
    }
}

#[test]
fn n2_coefficients_regression_and_resynthesis() {
    // frozen by the dual-path oracle (projection vs coefficient-form resynthesis)
    let (a1, a2, b1, b2) = n2_coefficients(1.47).unwrap();
    assert!((a1 - 0.560_075_683_165_73).abs() < 1e-9);
    assert!((a2 + 0.438_782_291_604_57).abs() < 1e-9);
    assert!((b1 + 0.520_197_396_862_04).abs() < 1e-9);
    assert!((b2 + 0.472_419_303_160_48).abs() < 1e-9);
    // the four magnitudes lie within a factor 2 of each other
    let mags = [a1.abs(), a2.abs(), b1.abs(), b2.abs()];
    let (lo, hi) = mags
        .iter()
        .fold((f64::MAX, 0.0_f64), |(l, h), &m| (l.min(m), h.max(m)));
    assert!(hi / lo < 2.0, "spread {}", hi / lo);

    // substituting the coefficients back into the four-term form rebuilds H_T
    let params = ModelParams::from_alpha(2, 1.47, 0.0, 0.0).unwrap();
    let ops = build_h_total(&params).unwrap();
    let rec = n2_resynthesize(a1, a2, b1, b2);
    assert!(max_abs_diff(&rec, &ops.h_total) < tol::FIG2_RESYNTHESIS_TOL);
}

#[test]
fn n2_coefficient_trends_on_grid() {
    // A1 strictly decreasing; |A2|, |B2| strictly increasing on {0, 0.1, …, 1.5};
    // |B1| rises to a maximum near α ≈ 1.32 and then falls — checked as observed.
    let grid: Vec<f64> = (0..=15).map(|i| i as f64 * 0.1).collect();
    let vals: Vec<(f64, f64, f64, f64)> =
        grid.iter().map(|&a| n2_coefficients(a).unwrap()).collect();
    for w in vals.windows(2) {
        assert!(w[1].0 < w[0].0, "A1 not decreasing");
        assert!(w[1].1.abs() > w[0].1.abs(), "|A2| not increasing");
        assert!(w[1].3.abs() > w[0].3.abs(), "|B2| not increasing");
    }
    let b1s: Vec<f64> = vals.iter().map(|v| v.2.abs()).collect();
    for w in b1s.windows(2).take(13) {
        assert!(w[1] > w[0], "|B1| increasing up to 1.3");
    }
    assert!(
        b1s[14] < b1s[13] && b1s[15] < b1s[14],
        "|B1| decreases past its peak"
    );
}
