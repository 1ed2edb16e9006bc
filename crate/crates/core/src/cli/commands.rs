use super::config::*;
use super::csvout::{fmt_f64, CsvWriter};
use crate::central_spin::{
    self, bright_entropy, contour_point, dpmax_log, inset_r_squared, magnetic_analysis,
    overlap_dense, power_law_fit, spectral_family, spin_flip_element,
};
use crate::dynamics;
use crate::embedding::{n2_coefficients, ModelParams};
use crate::error::{PtError, Result};
use crate::linalg::{partial_trace_ancilla, von_neumann_entropy};
use serde_json::json;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

fn create_output(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path)
        .map_err(|e| PtError::Config(format!("output {} not writable: {e}", path.display())))?;
    Ok(BufWriter::new(file))
}

pub fn cmd_trajectory(config_path: Option<&Path>, out: &Path) -> Result<()> {
    let cfg = TrajectoryConfig::load(config_path)?;
    let out_file = create_output(out)?;
    let params = cfg.params()?;
    let psi0 = match cfg.initial_state {
        InitialState::PtGround => dynamics::default_initial_state(&params)?,
        InitialState::UpZ => dynamics::up_z_initial_state(&params)?,
    };
    let records = dynamics::run_trajectory(&params, &psi0, &cfg.t_grid())?;

    let mut w = CsvWriter::new(out_file, "trajectory", &cfg)?;
    let mut columns = vec![
        "t".to_string(),
        "success_prob".to_string(),
        "pt_norm".to_string(),
        "euclid_norm".to_string(),
        "oracle_distance".to_string(),
    ];
    let dump_amplitudes = params.n_spins() <= 4;
    if dump_amplitudes {
        for i in 0..params.dim() {
            columns.push(format!("re_amp_{i}"));
            columns.push(format!("im_amp_{i}"));
        }
    }
    w.header(&columns.iter().map(String::as_str).collect::<Vec<_>>())?;
    for r in &records {
        let mut fields = vec![
            fmt_f64(r.t),
            fmt_f64(r.success_prob),
            fmt_f64(r.pt_norm),
            fmt_f64(r.euclid_norm),
            fmt_f64(r.oracle_distance),
        ];
        if dump_amplitudes {
            for amp in &r.postselected_state {
                fields.push(fmt_f64(amp.re));
                fields.push(fmt_f64(amp.im));
            }
        }
        w.row(&fields)?;
    }
    w.finish()
}

pub fn cmd_fig2(config_path: Option<&Path>, out: &Path) -> Result<()> {
    let cfg = Fig2Config::load(config_path)?;
    let out_file = create_output(out)?;
    let mut w = CsvWriter::new(out_file, "fig2", &cfg)?;
    w.header(&["alpha", "A1", "A2", "B1", "B2"])?;
    for alpha in cfg.alpha_grid() {
        let (a1, a2, b1, b2) = n2_coefficients(alpha)?;
        w.row(&[
            fmt_f64(alpha),
            fmt_f64(a1),
            fmt_f64(a2),
            fmt_f64(b1),
            fmt_f64(b2),
        ])?;
    }
    w.finish()
}

pub fn cmd_fig3(config_path: Option<&Path>, out: &Path) -> Result<()> {
    let cfg = Fig3Config::load(config_path)?;
    let out_file = create_output(out)?;
    let mut w = CsvWriter::new(out_file, "fig3", &cfg)?;
    w.header(&["alpha", "n_spins", "dpmax"])?;
    for alpha in cfg.alpha_grid() {
        for &n in &cfg.n_grid() {
            let params = ModelParams::from_alpha(n, alpha, 0.0, 0.0)
                .map_err(|e| PtError::Config(e.to_string()))?;
            let dpmax = dpmax_log(&params).exp().clamp(0.0, 1.0);
            w.row(&[fmt_f64(alpha), n.to_string(), fmt_f64(dpmax)])?;
        }
    }
    w.finish()
}

pub fn cmd_fig4(config_path: Option<&Path>, out: &Path) -> Result<()> {
    let cfg = Fig4Config::load(config_path)?;
    let out_file = create_output(out)?;
    let mut w = CsvWriter::new(out_file, "fig4", &cfg)?;
    w.header(&["n_spins", "f3", "beta"])?;
    for n in cfg.n_min..=cfg.n_max {
        let f3 = central_spin::fig4_pinned_f3(n);
        let beta = central_spin::solve_beta(n, f3)?;
        w.row(&[n.to_string(), fmt_f64(f3), fmt_f64(beta)])?;
    }
    w.finish()
}

pub fn cmd_fig5(config_path: Option<&Path>, out_dir: &Path) -> Result<()> {
    let cfg = Fig5Config::load(config_path)?;
    std::fs::create_dir_all(out_dir).map_err(|e| {
        PtError::Config(format!(
            "output dir {} not writable: {e}",
            out_dir.display()
        ))
    })?;
    let n_grid = cfg.n_grid();
    let mut fit_entries = Vec::new();
    for &target in &cfg.targets {
        let mut points = Vec::new();
        for &n in &n_grid {
            match contour_point(target, n, cfg.theta1) {
                Ok(alpha) => points.push((n as f64, alpha)),
                Err(PtError::NoBracket { .. }) => {
                    eprintln!("fig5: target {target} not bracketed at N = {n}; row skipped");
                }
                Err(e) => return Err(e),
            }
        }
        let fit = power_law_fit(&points)?;
        let upper_decade = cfg.n_max as f64 / 10.0;
        let r2 = inset_r_squared(&fit, upper_decade);

        let csv_path = out_dir.join(format!("contour_{target}.csv"));
        let mut w = CsvWriter::new(create_output(&csv_path)?, "fig5", &cfg)?;
        w.header(&["n_spins", "alpha", "log_n", "log_a_minus_alpha"])?;
        for &(n, alpha) in &points {
            let gap = fit.a_const - alpha;
            let log_gap = if gap > 0.0 { gap.ln() } else { f64::NAN };
            w.row(&[
                (n as usize).to_string(),
                fmt_f64(alpha),
                fmt_f64(n.ln()),
                fmt_f64(log_gap),
            ])?;
        }
        w.finish()?;

        fit_entries.push(json!({
            "target": target,
            "a_const": fit.a_const,
            "b_const": fit.b_const,
            "gamma": fit.gamma,
            "residual_rms": fit.residual_rms,
            "inset_r_squared": r2,
            "points_used": points.len(),
        }));
    }
    let summary = json!({
        "version": crate::VERSION,
        "command": "fig5",
        "config": serde_json::to_value(&cfg).expect("config serializes"),
        "fits": fit_entries,
    });
    let mut f = create_output(&out_dir.join("fig5_fit.json"))?;
    writeln!(
        f,
        "{}",
        serde_json::to_string_pretty(&summary).expect("summary serializes")
    )?;
    f.flush()?;
    Ok(())
}

pub fn cmd_darkstate(config_path: Option<&Path>, out: &Path) -> Result<()> {
    let cfg = DarkstateConfig::load(config_path)?;
    let mut out_file = create_output(out)?;
    let params = cfg.params()?;
    let ops = crate::embedding::build_h_total(&params)?;
    let family = spectral_family(&params, cfg.k)?;

    let residual = |state: &[num_complex::Complex64]| -> f64 {
        let hv = ops.h_total.matvec(state);
        hv.iter()
            .zip(state)
            .map(|(a, b)| (a - b * num_complex::Complex64::new(family.epsilon_k, 0.0)).norm_sqr())
            .sum::<f64>()
            .sqrt()
    };
    let dark_entropy = von_neumann_entropy(&partial_trace_ancilla(&family.dark_pair[0])?)?;
    let bright = bright_entropy(&params, cfg.k)?;
    let flip = spin_flip_element(&params, cfg.k)?;
    let overlap = overlap_dense(&params)?;
    let magnetic = magnetic_analysis(&params, cfg.m_y)?;

    let report = json!({
        "version": crate::VERSION,
        "command": "darkstate",
        "config": serde_json::to_value(&cfg).expect("config serializes"),
        "epsilon_k": family.epsilon_k,
        "eigen_residuals": {
            "bright_plus": residual(&family.bright_pair[0]),
            "bright_minus": residual(&family.bright_pair[1]),
            "dark_plus": residual(&family.dark_pair[0]),
            "dark_minus": residual(&family.dark_pair[1]),
        },
        "dark_ancilla_entropy": dark_entropy,
        "bright_ancilla_entropy": bright,
        "spin_flip_element": flip,
        "ground_overlap_modulus_sq": overlap.modulus_sq,
        "magnetic": {
            "m_y": cfg.m_y,
            "commutator_norm": magnetic.commutator_norm,
            "dark_pair_splitting": magnetic.dark_pair_splitting,
            "max_spectrum_deviation": magnetic.max_spectrum_deviation,
        },
    });
    println!("darkstate: k = {}, epsilon_k = {}", cfg.k, family.epsilon_k);
    println!("  dark ancilla entropy   {:.6e}", dark_entropy);
    println!("  bright ancilla entropy {:.6e}", bright);
    println!("  spin-flip element      {:.6e}", flip);
    println!(
        "  dark pair splitting    {:.6e} (2 m_y = {:.6e})",
        magnetic.dark_pair_splitting,
        2.0 * cfg.m_y
    );
    println!("  [H_T, H_m] norm        {:.6e}", magnetic.commutator_norm);
    writeln!(
        out_file,
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    )?;
    out_file.flush()?;
    Ok(())
}
