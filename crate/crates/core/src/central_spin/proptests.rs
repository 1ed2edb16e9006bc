use super::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // −(N/2)ln(1+e^{−4θ}) = Nθ − (1/2)ln c, in the log domain. The right side
    // cancels two Nθ-sized terms, so the comparison is relative to that scale.
    #[test]
    fn dpmax_log_identity(n in 1usize..10_000, theta in 0.0f64..20.0) {
        let params = ModelParams::from_theta(n, theta, 0.0, 0.0).unwrap();
        let lhs = dpmax_log(&params);
        let rhs = n as f64 * theta - 0.5 * params.ln_c();
        let scale = (n as f64 * theta).max(1.0);
        prop_assert!((lhs - rhs).abs() <= tol::DPMAX_TOL * scale);
        // independent naive evaluation where 1 + e^{−4θ} is representable
        if theta < 4.0 {
            let naive = -(n as f64 / 2.0) * (1.0 + (-4.0 * theta).exp()).ln();
            prop_assert!((lhs - naive).abs() <= tol::DPMAX_TOL * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn beta_roundtrip(n in 1usize..2000, x in 1e-12f64..=1.0) {
        let beta = solve_beta(n, x).unwrap();
        let (_, f2, _) = f_values(n, beta, 0.0, 0.0);
        prop_assert!((f2 - x).abs() <= tol::BETA_ROUNDTRIP_TOL);
    }

    #[test]
    fn binomial_overlap_in_unit_disc(
        n in 1usize..3000,
        theta in 0.0f64..12.0,
        theta1 in 0.0f64..std::f64::consts::PI,
        phi1 in 0.0f64..6.2,
    ) {
        let params = ModelParams::from_theta(n, theta, theta1, phi1).unwrap();
        let report = overlap_binomial(&params);
        prop_assert!(report.modulus_sq >= 0.0 && report.modulus_sq <= 1.0);
        prop_assert!(report.p2_mean >= 0.0 && report.p2q_mean >= 0.0);
        prop_assert!((report.modulus_sq - report.overlap.norm_sqr().min(1.0)).abs() < 1e-12);
    }

    #[test]
    fn phi1_star_defining_identity(n in 1usize..10_000) {
        let phi = phi1_star(n);
        let lhs = ((2 * n) as f64 * (phi / 2.0).sin().ln()).exp();
        prop_assert!((lhs - 0.5).abs() < 1e-12);
    }
}
