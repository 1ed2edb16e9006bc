//! The `verify` command: every module invariant as a named residual check,
//! reported human-readably and as JSON.

use super::config::VerifyConfig;
use crate::central_spin::{
    self, dpmax_log, f_values, overlap_binomial, overlap_dense, phi1_star, power_law_fit,
    solve_beta, spectral_family, spin_flip_element, RotatedFrame,
};
use crate::dynamics::{self, Branch};
use crate::embedding::{
    build_ab_via_h_pt, build_h_total, build_q, n2_coefficient_pairs, n2_coefficients,
    pauli_decompose, pauli_resynthesize, seed_hamiltonian, ModelParams,
};
use crate::error::Result;
use crate::linalg::{
    func_herm, herm_eig, inner, kron, partial_trace_ancilla, psd_sqrt, reduced_density_left,
    reduced_density_right, vec_norm, von_neumann_entropy, ComplexMatrix, Pauli,
};
use crate::tol;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::io::Write;
use std::path::Path;

pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual.is_finite() && self.residual <= self.tolerance
    }
}

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = C64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in i + 1..n {
            let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let nrm = vec_norm(&v);
    v.iter_mut().for_each(|x| *x /= nrm);
    v
}

fn random_params(
    rng: &mut ChaCha8Rng,
    n_list: &[usize],
    alpha_max: f64,
    cap: usize,
) -> ModelParams {
    let n = n_list[rng.gen_range(0..n_list.len())];
    ModelParams::from_alpha(
        n,
        rng.gen_range(0.0..alpha_max),
        rng.gen_range(0.0..std::f64::consts::PI),
        rng.gen_range(0.0..2.0 * std::f64::consts::PI),
    )
    .unwrap()
    .with_dense_cap(cap)
    .unwrap()
}

fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).max_abs()
}

/// Runs the whole suite; every entry is residual-vs-tolerance.
pub fn run_checks(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks: Vec<Check> = Vec::new();
    let mut push = |name: &'static str, residual: f64, tolerance: f64| {
        checks.push(Check {
            name,
            residual,
            tolerance,
        });
    };

    // ---- linalg ----
    {
        let h = random_hermitian(16, &mut rng);
        let eig = herm_eig(&h)?;
        let v = &eig.eigenvectors;
        push(
            "linalg.herm_eig.unitarity",
            max_abs_diff(&(&v.adjoint() * v), &ComplexMatrix::identity(16)),
            tol::EIG_UNITARITY,
        );
        let rec = eig.apply_function(|l| C64::new(l, 0.0));
        push(
            "linalg.herm_eig.reconstruction",
            (&rec - &h).frobenius_norm() / h.frobenius_norm(),
            tol::EIG_RECONSTRUCTION_REL,
        );

        let u = func_herm(&h, |l| C64::from_polar(1.0, -l * 0.83))?;
        push(
            "linalg.func_herm.exp_unitary",
            max_abs_diff(&(&u.adjoint() * &u), &ComplexMatrix::identity(16)),
            tol::FUNC_UNITARY,
        );
        let u2 = func_herm(&h, |l| C64::from_polar(1.0, -l * 1.29))?;
        let u12 = func_herm(&h, |l| C64::from_polar(1.0, -l * (0.83 + 1.29)))?;
        push(
            "linalg.func_herm.composition",
            max_abs_diff(&(&u * &u2), &u12),
            1e-10,
        );

        let a = random_hermitian(12, &mut rng);
        let psd = &a * &a;
        let s = psd_sqrt(&psd, tol::PSD_CLAMP_TOL)?;
        push(
            "linalg.psd_sqrt.square_residual",
            (&(&s * &s) - &psd).frobenius_norm() / psd.frobenius_norm(),
            tol::PSD_SQRT_REL,
        );
        push(
            "linalg.psd_sqrt.commutes",
            (&(&s * &psd) - &(&psd * &s)).frobenius_norm() / psd.frobenius_norm(),
            tol::PSD_SQRT_REL,
        );

        let state = random_unit(16, &mut rng);
        let left = reduced_density_left(&state, 2)?;
        let right = reduced_density_right(&state, 2)?;
        push(
            "linalg.partial_trace.entropy_complement",
            (von_neumann_entropy(&left)? - von_neumann_entropy(&right)?).abs(),
            tol::DENSITY_TOL,
        );
        let mixed = ComplexMatrix::identity(2).scale(C64::new(0.5, 0.0));
        push(
            "linalg.entropy.maximally_mixed",
            (von_neumann_entropy(&mixed)? - std::f64::consts::LN_2).abs(),
            1e-12,
        );
    }

    // ---- embedding ----
    {
        let params = random_params(&mut rng, &cfg.n_list, 1.4, cfg.dense_cap);
        let ops = build_h_total(&params)?;

        let eig_p = herm_eig(&ops.p)?;
        let inv_sq_sum: f64 = eig_p.eigenvalues.iter().map(|l| 1.0 / (l * l)).sum();
        push(
            "embedding.c.closed_form_vs_eigensum",
            (inv_sq_sum - ops.c).abs() / ops.c,
            tol::C_EIGENSUM_REL,
        );

        let herm_worst = [&ops.q, &ops.eta, &ops.a_op, &ops.b_op, &ops.h_total]
            .iter()
            .map(|m| m.hermiticity_deviation())
            .fold(0.0, f64::max);
        push(
            "embedding.operators.hermitian",
            herm_worst,
            tol::OPERATOR_HERMITICITY_TOL,
        );

        let dim = params.dim();
        let mut q2 = &ops.q * &ops.q;
        for i in 0..dim {
            q2[(i, i)] += C64::new(1.0, 0.0);
        }
        push(
            "embedding.q.square_identity",
            max_abs_diff(&q2, &ops.eta.scale(C64::new(ops.c, 0.0))),
            tol::Q_IDENTITY_TOL,
        );
        push(
            "embedding.q.commutes_with_p",
            (&(&ops.q * &ops.p) - &(&ops.p * &ops.q)).max_abs() / ops.p.max_abs().max(1.0),
            tol::QP_COMMUTE_TOL,
        );
        push(
            "embedding.eta.pseudo_hermiticity",
            (&(&ops.eta * &ops.h_pt) - &(&ops.h_pt.adjoint() * &ops.eta)).max_abs()
                / ops.eta.max_abs().max(1.0),
            tol::PSEUDO_HERMITICITY_TOL,
        );

        let (a_alt, b_alt) = build_ab_via_h_pt(&params)?;
        push(
            "embedding.ab.e1p_vs_e2",
            max_abs_diff(&a_alt, &ops.a_op).max(max_abs_diff(&b_alt, &ops.b_op)),
            tol::AB_DUAL_FORM_TOL,
        );

        let series_params = ModelParams::from_theta(2, 0.6, 0.9, 0.3)?;
        let series = crate::embedding::q_series(&series_params, 1e-11, 10_000)?;
        let direct = build_q(&series_params)?;
        push(
            "embedding.q_series.vs_psd_sqrt",
            max_abs_diff(&series, &direct),
            tol::Q_SERIES_TOL,
        );

        let et = herm_eig(&ops.h_total)?.eigenvalues;
        let eh = herm_eig(&ops.h)?.eigenvalues;
        let mut doubled: Vec<f64> = eh.iter().flat_map(|&l| [l, l]).collect();
        doubled.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let worst = et
            .iter()
            .zip(&doubled)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        push(
            "embedding.h_total.spectrum_doubling",
            worst,
            tol::SPECTRUM_DOUBLING_TOL,
        );

        let free = ModelParams::from_alpha(2, 0.0, 0.0, 0.0)?;
        let free_ops = build_h_total(&free)?;
        push(
            "embedding.h_total.theta_zero_identity",
            max_abs_diff(
                &free_ops.h_total,
                &kron(&Pauli::I.matrix(), &seed_hamiltonian(2)),
            ),
            tol::THETA_ZERO_TOL,
        );
        let nx = ModelParams::from_theta(2, 0.8, std::f64::consts::FRAC_PI_2, 0.0)?;
        let nx_ops = build_h_total(&nx)?;
        push(
            "embedding.h_total.nx_limit",
            max_abs_diff(
                &nx_ops.h_total,
                &kron(&Pauli::I.matrix(), &seed_hamiltonian(2)),
            )
            .max(nx_ops.b_op.max_abs()),
            tol::NX_LIMIT_TOL,
        );

        let herm8 = random_hermitian(8, &mut rng);
        let terms = pauli_decompose(&herm8, 0.0)?;
        push(
            "embedding.pauli.resynthesis",
            max_abs_diff(&pauli_resynthesize(&terms, 2), &herm8),
            tol::PAULI_RECONSTRUCTION_TOL,
        );
        let ht_terms = pauli_decompose(
            &build_h_total(&ModelParams::from_alpha(2, 0.9, 0.0, 0.0)?)?.h_total,
            tol::PAULI_CUTOFF,
        )?;
        let bad = ht_terms
            .iter()
            .filter(|t| matches!(t.ancilla_factor, Pauli::X | Pauli::Z))
            .map(|t| t.coefficient.abs())
            .fold(0.0, f64::max);
        push("embedding.pauli.ancilla_i_y_only", bad, tol::PAULI_CUTOFF);

        let (a1, a2, b1, b2) = n2_coefficients(0.0)?;
        push(
            "embedding.fig2.free_limit_row",
            (a1 - 1.0).abs().max(a2.abs()).max(b1.abs()).max(b2.abs()),
            tol::FIG2_FREE_LIMIT_TOL,
        );
        let sym_worst = n2_coefficient_pairs(0.9)?
            .iter()
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        push(
            "embedding.fig2.exchange_symmetry",
            sym_worst,
            tol::N2_EXCHANGE_TOL,
        );
    }

    // ---- dynamics ----
    {
        let params = random_params(&mut rng, &cfg.n_list, 1.4, cfg.dense_cap);
        let ops = build_h_total(&params)?;
        let seed_frame = random_unit(params.dim(), &mut rng);
        let psi_pt = ops.p.matvec(&seed_frame);

        let plus = dynamics::embed_state(&ops, &psi_pt, Branch::Plus)?;
        let minus = dynamics::embed_state(&ops, &psi_pt, Branch::Minus)?;
        push(
            "dynamics.embed.unit_norm",
            (vec_norm(&plus.amplitudes) - 1.0)
                .abs()
                .max((vec_norm(&minus.amplitudes) - 1.0).abs()),
            1e-10,
        );
        push(
            "dynamics.embed.branch_orthogonality",
            inner(&plus.amplitudes, &minus.amplitudes).norm(),
            1e-10,
        );

        let evolved = dynamics::evolve_total(&ops, &plus, 1.7)?;
        push(
            "dynamics.evolve.unitary",
            (vec_norm(&evolved.amplitudes) - 1.0).abs(),
            1e-10,
        );
        let q_upper = ops.q.matvec(evolved.upper());
        let form: f64 = evolved
            .lower()
            .iter()
            .zip(&q_upper)
            .map(|(l, qu)| (l - qu).norm_sqr())
            .sum::<f64>()
            .sqrt();
        push(
            "dynamics.evolve.form_invariance",
            form,
            tol::FORM_INVARIANCE_TOL,
        );
        let (_, p_up) = dynamics::post_select(&evolved);
        let p_down: f64 = evolved.lower().iter().map(|x| x.norm_sqr()).sum();
        push(
            "dynamics.postselect.outcomes_sum",
            (p_up + p_down - 1.0).abs(),
            1e-10,
        );

        let grid: Vec<f64> = (0..26).map(|i| i as f64 * 0.4).collect();
        let records = dynamics::run_trajectory(&params, &psi_pt, &grid)?;
        let worst_oracle = records
            .iter()
            .map(|r| r.oracle_distance)
            .fold(0.0, f64::max);
        push(
            "dynamics.simulation_theorem",
            worst_oracle,
            tol::SIM_THEOREM_TOL,
        );
        let worst_pt = records
            .iter()
            .map(|r| (r.pt_norm - 1.0).abs())
            .fold(0.0, f64::max);
        push(
            "dynamics.pt_norm_conservation",
            worst_pt,
            tol::PT_CONSERVATION_TOL,
        );

        let moving = ModelParams::from_theta(1, 0.5, 0.0, 0.0)?;
        let psi0 = dynamics::up_z_initial_state(&moving)?;
        let records = dynamics::run_trajectory(&moving, &psi0, &grid)?;
        let (lo, hi) = records.iter().fold((f64::MAX, 0.0_f64), |(l, h), r| {
            (l.min(r.euclid_norm), h.max(r.euclid_norm))
        });
        // residual is the shortfall below the required spread; negative is fine
        push(
            "dynamics.euclid_norm_moves",
            tol::EUCLID_DEVIATION_MIN - (hi - lo),
            0.0,
        );
    }

    // ---- central spin ----
    {
        let params = random_params(&mut rng, &cfg.n_list, 1.4, cfg.dense_cap);
        let dense = overlap_dense(&params)?;
        let binom = overlap_binomial(&params);
        push(
            "central.overlap.dense_vs_binomial",
            (dense.overlap - binom.overlap).norm(),
            tol::DENSE_BINOMIAL_TOL,
        );
        let formula = C64::new(-1.0 + 2.0 * dense.p2_mean, 2.0 * dense.p2q_mean);
        push(
            "central.overlap.vector_vs_sp1",
            (dense.overlap.norm() - formula.norm()).abs(),
            tol::DENSE_BINOMIAL_TOL,
        );
        let free = ModelParams::from_alpha(3, 0.0, 0.3, 0.9)?;
        push(
            "central.overlap.unit_modulus_free",
            (overlap_dense(&free)?.modulus_sq - 1.0).abs(),
            1e-10,
        );

        let mut dp_worst: f64 = 0.0;
        for _ in 0..1000 {
            let n = rng.gen_range(1..=10_000);
            let theta = rng.gen_range(0.0..20.0);
            let p = ModelParams::from_theta(n, theta, 0.0, 0.0)?;
            let lhs = dpmax_log(&p);
            // cancellation-limited route, relative to the Nθ scale
            let rhs = n as f64 * theta - 0.5 * p.ln_c();
            dp_worst = dp_worst.max((lhs - rhs).abs() / (n as f64 * theta).max(1.0));
            if theta < 4.0 {
                let naive = -(n as f64 / 2.0) * (1.0 + (-4.0 * theta).exp()).ln();
                dp_worst = dp_worst.max((lhs - naive).abs() / lhs.abs().max(1.0));
            }
        }
        push("central.dpmax.log_identity", dp_worst, tol::DPMAX_TOL);
        let dp_params = ModelParams::from_theta(4, 2.0_f64.ln() / 4.0, 0.7, 0.4)?;
        let (p_mat, c_val) = crate::embedding::build_p(&dp_params)?;
        let lam_max = *herm_eig(&p_mat)?.eigenvalues.last().unwrap();
        push(
            "central.dpmax.dense_vs_closed_form",
            (dpmax_log(&dp_params).exp() - lam_max / c_val.sqrt()).abs() / (lam_max / c_val.sqrt()),
            tol::DPMAX_TOL,
        );

        let family = spectral_family(&params, 0)?;
        let ops = build_h_total(&params)?;
        let mut worst_resid: f64 = 0.0;
        for state in family.bright_pair.iter().chain(family.dark_pair.iter()) {
            let hv = ops.h_total.matvec(state);
            let r: f64 = hv
                .iter()
                .zip(state)
                .map(|(a, b)| (a - b * C64::new(family.epsilon_k, 0.0)).norm_sqr())
                .sum::<f64>()
                .sqrt();
            worst_resid = worst_resid.max(r);
        }
        push(
            "central.family.eigen_residual",
            worst_resid,
            tol::DARK_EIGEN_TOL,
        );
        let dark_entropy = von_neumann_entropy(&partial_trace_ancilla(&family.dark_pair[0])?)?;
        push(
            "central.dark.ancilla_entropy",
            dark_entropy,
            tol::DARK_ENTROPY_TOL,
        );

        let magnetic = central_spin::magnetic_analysis(&params, 0.3)?;
        push(
            "central.magnetic.commutator",
            magnetic.commutator_norm,
            tol::COMMUTATOR_TOL,
        );
        push(
            "central.magnetic.splitting",
            (magnetic.dark_pair_splitting - 0.6)
                .abs()
                .max(magnetic.max_spectrum_deviation),
            tol::SPLITTING_TOL,
        );

        let flip = spin_flip_element(&params, 0)?;
        let bath_overlap = inner(&family.bath_pair[1], &family.bath_pair[0]).norm_sqr();
        push(
            "central.spinflip.equals_overlap_sq",
            (flip - bath_overlap).abs(),
            tol::SPINFLIP_IDENTITY_TOL,
        );

        push(
            "central.u_pm.unitarity",
            central_spin::u_pm_unitarity_residual(&ops),
            1e-10,
        );

        let frame = RotatedFrame::new(&params);
        let q_direct = build_q(&params)?;
        push(
            "central.q.rotated_vs_psd_sqrt",
            max_abs_diff(&frame.q_matrix()?, &q_direct) / q_direct.max_abs().max(1.0),
            tol::DENSE_BINOMIAL_TOL,
        );

        let mut beta_worst: f64 = 0.0;
        for _ in 0..200 {
            let n = rng.gen_range(1..=2000);
            let x = rng.gen_range(1e-12..1.0);
            let beta = solve_beta(n, x)?;
            let (_, f2, _) = f_values(n, beta, 0.0, 0.0);
            beta_worst = beta_worst.max((f2 - x).abs());
        }
        push(
            "central.beta.roundtrip",
            beta_worst,
            tol::BETA_ROUNDTRIP_TOL,
        );

        let mut phi_worst: f64 = 0.0;
        for &n in &[1usize, 8, 100, 731, 10_000] {
            let phi = phi1_star(n);
            let lhs = ((2 * n) as f64 * (phi / 2.0).sin().ln()).exp();
            phi_worst = phi_worst.max((lhs - 0.5).abs());
        }
        push("central.phi1_star.defining_identity", phi_worst, 1e-12);

        push(
            "central.fig4.pinned_f3_closed_form",
            {
                let mut worst: f64 = 0.0;
                for n in (100..=1000).step_by(60) {
                    let via_w = f_values(n, 0.0, phi1_star(100), std::f64::consts::FRAC_PI_2).2;
                    worst = worst.max((via_w - central_spin::fig4_pinned_f3(n)).abs());
                }
                worst
            },
            tol::FIG4_F3_TOL,
        );

        let fit_points: Vec<(f64, f64)> = (0..24)
            .map(|i| {
                let n = 12.0 * (1.31_f64).powi(i);
                (n, 1.5 - 2.0 * n.powf(-0.5))
            })
            .collect();
        let fit = power_law_fit(&fit_points)?;
        push(
            "central.fit.synthetic_roundtrip",
            (fit.a_const - 1.5)
                .abs()
                .max((fit.b_const - 2.0).abs())
                .max((fit.gamma - 0.5).abs()),
            tol::FIT_ROUNDTRIP_TOL,
        );

        let binom_big = overlap_binomial(&ModelParams::from_theta(
            10_000,
            5.0,
            std::f64::consts::FRAC_PI_2,
            phi1_star(10_000),
        )?);
        push(
            "central.overlap.large_bath_orthogonality",
            binom_big.modulus_sq,
            1e-4,
        );
    }

    Ok(checks)
}

/// Executes the suite, prints one line per check, writes the JSON report.
/// Returns the process exit code.
pub fn cmd_verify(
    config_path: Option<&Path>,
    out: &Path,
    seed_override: Option<u64>,
) -> Result<i32> {
    let mut cfg = VerifyConfig::load(config_path)?;
    if let Some(seed) = seed_override {
        cfg.seed = seed;
    }
    // output must be writable before any compute starts
    let file = std::fs::File::create(out).map_err(|e| {
        crate::PtError::Config(format!("output {} not writable: {e}", out.display()))
    })?;
    let mut checks = run_checks(&cfg)?;
    if let Some(t) = cfg.tolerance_override {
        for c in &mut checks {
            c.tolerance = t;
        }
    }
    let mut all_pass = true;
    for c in &checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        all_pass &= c.passed();
        println!(
            "{status} {:<44} residual {:>12.4e}  tol {:>9.1e}",
            c.name, c.residual, c.tolerance
        );
    }
    println!(
        "verify: {}/{} checks passed (seed {})",
        checks.iter().filter(|c| c.passed()).count(),
        checks.len(),
        cfg.seed
    );
    let report = json!({
        "version": crate::VERSION,
        "command": "verify",
        "seed": cfg.seed,
        "config": serde_json::to_value(&cfg).expect("config serializes"),
        "passed": all_pass,
        "checks": checks.iter().map(|c| json!({
            "name": c.name,
            "residual": c.residual,
            "tolerance": c.tolerance,
            "pass": c.passed(),
        })).collect::<Vec<_>>(),
    });
    let mut w = std::io::BufWriter::new(file);
    writeln!(
        w,
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    )?;
    w.flush()?;
    Ok(if all_pass { 0 } else { 1 })
}
