//! Per-command JSON configs. Unknown keys are rejected; every field has a
//! default so each command runs without a config file.

use crate::embedding::ModelParams;
use crate::error::{PtError, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;
use std::path::Path;

fn read_json<T: for<'de> Deserialize<'de> + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| PtError::Config(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| PtError::Config(format!("{}: {e}", p.display())))
        }
    }
}

fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (count - 1) as f64;
    (0..count).map(|i| lo + step * i as f64).collect()
}

/// Log-uniform integer grid, deduplicated, ascending.
pub fn log_int_grid(n_min: usize, n_max: usize, points: usize) -> Vec<usize> {
    let (lo, hi) = ((n_min as f64).ln(), (n_max as f64).ln());
    let mut out: Vec<usize> = linspace(lo, hi, points)
        .into_iter()
        .map(|x| x.exp().round() as usize)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(PtError::Config(format!("{name} grid is empty")));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(PtError::Config(format!(
            "{name} grid has non-finite entries"
        )));
    }
    Ok(())
}

fn build_params(
    n_spins: usize,
    alpha: f64,
    theta: Option<f64>,
    theta1: f64,
    phi1: f64,
    dense_cap: usize,
) -> Result<ModelParams> {
    let params = match theta {
        Some(t) => ModelParams::from_theta(n_spins, t, theta1, phi1)?,
        None => ModelParams::from_alpha(n_spins, alpha, theta1, phi1)?,
    };
    params.with_dense_cap(dense_cap)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    /// PT image of the seed ground state, P(⊗|↓⟩ₓ); an H_PT eigenstate.
    PtGround,
    /// P(⊗|↑⟩_z); not an eigenstate, so the Euclidean norm moves in time.
    UpZ,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrajectoryConfig {
    pub n_spins: usize,
    pub alpha: f64,
    pub theta: Option<f64>,
    pub theta1: f64,
    pub phi1: f64,
    pub t_max: f64,
    pub t_points: usize,
    pub initial_state: InitialState,
    pub dense_cap: usize,
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        Self {
            n_spins: 1,
            alpha: 0.9,
            theta: None,
            theta1: 0.0,
            phi1: 0.0,
            t_max: 10.0,
            t_points: 101,
            initial_state: InitialState::PtGround,
            dense_cap: 8,
        }
    }
}

impl TrajectoryConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let cfg: Self = read_json(path)?;
        if cfg.t_points == 0 || !cfg.t_max.is_finite() || cfg.t_max < 0.0 {
            return Err(PtError::Config("t grid must be nonempty and finite".into()));
        }
        cfg.params()?;
        Ok(cfg)
    }

    pub fn params(&self) -> Result<ModelParams> {
        build_params(
            self.n_spins,
            self.alpha,
            self.theta,
            self.theta1,
            self.phi1,
            self.dense_cap,
        )
        .map_err(|e| PtError::Config(e.to_string()))
    }

    pub fn t_grid(&self) -> Vec<f64> {
        linspace(0.0, self.t_max, self.t_points)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig2Config {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub alpha_points: usize,
}

impl Default for Fig2Config {
    fn default() -> Self {
        Self {
            alpha_min: 0.0,
            alpha_max: 1.5,
            alpha_points: 151,
        }
    }
}

impl Fig2Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let cfg: Self = read_json(path)?;
        let grid = cfg.alpha_grid();
        check_grid("alpha", &grid)?;
        if grid.iter().any(|&a| !(0.0..FRAC_PI_2).contains(&a)) {
            return Err(PtError::Config("alpha grid leaves [0, pi/2)".into()));
        }
        Ok(cfg)
    }

    pub fn alpha_grid(&self) -> Vec<f64> {
        linspace(self.alpha_min, self.alpha_max, self.alpha_points)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig3Config {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub alpha_points: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub n_points: usize,
}

impl Default for Fig3Config {
    fn default() -> Self {
        Self {
            alpha_min: 0.02,
            alpha_max: 1.55,
            alpha_points: 32,
            n_min: 1,
            n_max: 10_000,
            n_points: 32,
        }
    }
}

impl Fig3Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let cfg: Self = read_json(path)?;
        check_grid("alpha", &cfg.alpha_grid())?;
        if cfg
            .alpha_grid()
            .iter()
            .any(|&a| !(0.0..FRAC_PI_2).contains(&a))
        {
            return Err(PtError::Config("alpha grid leaves [0, pi/2)".into()));
        }
        if cfg.n_min == 0 || cfg.n_min > cfg.n_max || cfg.n_points == 0 {
            return Err(PtError::Config("bad N grid".into()));
        }
        Ok(cfg)
    }

    pub fn alpha_grid(&self) -> Vec<f64> {
        linspace(self.alpha_min, self.alpha_max, self.alpha_points)
    }

    pub fn n_grid(&self) -> Vec<usize> {
        log_int_grid(self.n_min, self.n_max, self.n_points)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig4Config {
    pub n_min: usize,
    pub n_max: usize,
}

impl Default for Fig4Config {
    fn default() -> Self {
        Self {
            n_min: 100,
            n_max: 1000,
        }
    }
}

impl Fig4Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let cfg: Self = read_json(path)?;
        if cfg.n_min == 0 || cfg.n_min > cfg.n_max {
            return Err(PtError::Config("bad N range".into()));
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig5Config {
    pub n_min: usize,
    pub n_max: usize,
    pub n_points: usize,
    pub targets: Vec<f64>,
    /// Accepted and recorded; the contour search derives θ from the bisected
    /// α, so this value does not enter the computation.
    pub theta: f64,
    pub theta1: f64,
}

impl Default for Fig5Config {
    fn default() -> Self {
        Self {
            n_min: 10,
            n_max: 10_000,
            n_points: 40,
            targets: vec![0.09, 0.54, 0.90],
            theta: 5.0,
            theta1: FRAC_PI_2,
        }
    }
}

impl Fig5Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let cfg: Self = read_json(path)?;
        if cfg.targets.is_empty()
            || cfg
                .targets
                .iter()
                .any(|t| !t.is_finite() || !(0.0..1.0).contains(t) || *t == 0.0)
        {
            return Err(PtError::Config("targets must lie in (0, 1)".into()));
        }
        if cfg.n_min == 0 || cfg.n_min > cfg.n_max || cfg.n_points < 4 {
            return Err(PtError::Config("bad N grid".into()));
        }
        Ok(cfg)
    }

    pub fn n_grid(&self) -> Vec<usize> {
        log_int_grid(self.n_min, self.n_max, self.n_points)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DarkstateConfig {
    pub n_spins: usize,
    pub alpha: f64,
    pub theta: Option<f64>,
    pub theta1: f64,
    pub phi1: f64,
    pub k: usize,
    pub m_y: f64,
    pub dense_cap: usize,
}

impl Default for DarkstateConfig {
    fn default() -> Self {
        Self {
            n_spins: 2,
            alpha: 1.0,
            theta: None,
            theta1: 0.0,
            phi1: 0.0,
            k: 0,
            m_y: 0.3,
            dense_cap: 8,
        }
    }
}

impl DarkstateConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let cfg: Self = read_json(path)?;
        if !cfg.m_y.is_finite() {
            return Err(PtError::Config("m_y must be finite".into()));
        }
        let params = cfg.params()?;
        if cfg.k >= params.dim() {
            return Err(PtError::Config(format!(
                "k = {} out of range (dim {})",
                cfg.k,
                params.dim()
            )));
        }
        Ok(cfg)
    }

    pub fn params(&self) -> Result<ModelParams> {
        build_params(
            self.n_spins,
            self.alpha,
            self.theta,
            self.theta1,
            self.phi1,
            self.dense_cap,
        )
        .map_err(|e| PtError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    pub seed: u64,
    pub dense_cap: usize,
    pub n_list: Vec<usize>,
    /// When set, replaces every check tolerance (diagnostic use).
    pub tolerance_override: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            dense_cap: 8,
            n_list: vec![1, 2, 3],
            tolerance_override: None,
        }
    }
}

impl VerifyConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let cfg: Self = read_json(path)?;
        if cfg.n_list.is_empty() {
            return Err(PtError::Config("n_list is empty".into()));
        }
        if cfg.dense_cap == 0 || cfg.dense_cap > crate::tol::MAX_DENSE_CAP {
            return Err(PtError::Config(format!(
                "dense_cap = {} outside 1..={}",
                cfg.dense_cap,
                crate::tol::MAX_DENSE_CAP
            )));
        }
        for &n in &cfg.n_list {
            if n == 0 || n > cfg.dense_cap {
                return Err(PtError::Config(format!(
                    "CapExceeded: requested N = {n} with dense_cap = {}",
                    cfg.dense_cap
                )));
            }
        }
        Ok(cfg)
    }
}
