//! TOML run configuration.
//!
//! Every block is optional and falls back to the reference experiment:
//! 20 m working distance, 49.4°×63° cameras in a 2×2 formation, weights
//! (1, 2), 100 ants for 500 iterations. Relative mesh paths are resolved
//! against the directory containing the config file.
//!
//! ```toml
//! config_version = 1
//! mesh = "simple_tower.stl"
//!
//! [camera]
//! alpha_deg = 49.4
//! beta_deg = 63.0
//! distance_m = 20.0
//!
//! [aco]
//! seed = 7
//! ```

use std::path::{Path, PathBuf};

use ipp_core::aco::{AcoParams, DepositRule};
use ipp_core::formation::{build_formation, viewpoint_spacing, CameraSpec, FormationSpec, SpacingSpec, DEFAULT_STITCH_FRACTION};
use ipp_core::pathcost::{CostWeights, PathKind};
use ipp_core::viewpoints::{DEFAULT_EPS_FACTOR, DEFAULT_MIN_PTS};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// The only config layout this build understands.
pub const CONFIG_VERSION: u32 = 1;

/// Pairwise overlaps that give the 48 m × 34 m footprint of the reference
/// 2×2 formation.
pub const REFERENCE_OVERLAP_W: f64 = 1.0240630511945596;
pub const REFERENCE_OVERLAP_H: f64 = 2.7958888329355602;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Plan,
    Compare,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DepositChoice {
    #[default]
    Edge,
    Tour,
}

impl From<DepositChoice> for DepositRule {
    fn from(c: DepositChoice) -> Self {
        match c {
            DepositChoice::Edge => DepositRule::Edge,
            DepositChoice::Tour => DepositRule::Tour,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CameraBlock {
    pub alpha_deg: f64,
    pub beta_deg: f64,
    pub distance_m: f64,
}

impl Default for CameraBlock {
    fn default() -> Self {
        Self {
            alpha_deg: 49.4,
            beta_deg: 63.0,
            distance_m: 20.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FormationBlock {
    pub rows: usize,
    pub cols: usize,
    pub overlap_w: f64,
    pub overlap_h: f64,
}

impl Default for FormationBlock {
    fn default() -> Self {
        Self {
            rows: 2,
            cols: 2,
            overlap_w: REFERENCE_OVERLAP_W,
            overlap_h: REFERENCE_OVERLAP_H,
        }
    }
}

/// Stitch overlaps between consecutive viewpoints. Unset values default to
/// a fixed fraction of the formation footprint.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpacingBlock {
    pub stitch_overlap_w: Option<f64>,
    pub stitch_overlap_h: Option<f64>,
}

/// Unset `eps` defaults to a multiple of the horizontal viewpoint spacing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DbscanBlock {
    pub eps: Option<f64>,
    pub min_pts: usize,
}

impl Default for DbscanBlock {
    fn default() -> Self {
        Self {
            eps: None,
            min_pts: DEFAULT_MIN_PTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WeightsBlock {
    pub w1: f64,
    pub w2: f64,
}

impl Default for WeightsBlock {
    fn default() -> Self {
        Self { w1: 1.0, w2: 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AcoBlock {
    pub n_ants: usize,
    pub alpha: f64,
    pub beta: f64,
    pub q: f64,
    pub rho: f64,
    pub max_iterations: usize,
    pub seed: u64,
    pub tau0: f64,
    pub deposit_rule: DepositChoice,
    pub closed_tour: bool,
}

impl Default for AcoBlock {
    fn default() -> Self {
        let p = AcoParams::<f64>::default();
        Self {
            n_ants: p.n_ants,
            alpha: p.alpha,
            beta: p.beta,
            q: p.q,
            rho: p.rho,
            max_iterations: p.max_iterations,
            seed: p.seed,
            tau0: p.tau0,
            deposit_rule: DepositChoice::Edge,
            closed_tour: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub config_version: u32,
    pub mesh: PathBuf,
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub camera: CameraBlock,
    #[serde(default)]
    pub formation: FormationBlock,
    #[serde(default)]
    pub spacing: SpacingBlock,
    #[serde(default)]
    pub dbscan: DbscanBlock,
    #[serde(default)]
    pub weights: WeightsBlock,
    #[serde(default)]
    pub aco: AcoBlock,
}

fn one() -> f64 {
    1.0
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

/// Config values after validation, in planner types.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub camera: CameraSpec<f64>,
    pub formation: FormationSpec<f64>,
    pub spacing: SpacingSpec<f64>,
    pub dbscan_eps: f64,
    pub dbscan_min_pts: usize,
    pub weights: CostWeights<f64>,
    pub aco: AcoParams<f64>,
}

impl RunConfig {
    /// A config with every block at its default, planning `mesh`.
    pub fn with_mesh(mesh: impl Into<PathBuf>) -> Self {
        Self {
            config_version: CONFIG_VERSION,
            mesh: mesh.into(),
            scale: 1.0,
            mode: Mode::Plan,
            out: default_out(),
            camera: CameraBlock::default(),
            formation: FormationBlock::default(),
            spacing: SpacingBlock::default(),
            dbscan: DbscanBlock::default(),
            weights: WeightsBlock::default(),
            aco: AcoBlock::default(),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, CliError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let mut cfg = Self::from_toml(&text).map_err(|message| CliError::Config {
            path: path.to_path_buf(),
            message,
        })?;
        if cfg.mesh.is_relative() {
            if let Some(dir) = path.parent() {
                cfg.mesh = dir.join(&cfg.mesh);
            }
        }
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<Self, String> {
        let cfg: Self = toml::from_str(text).map_err(|e| e.to_string())?;
        if cfg.config_version != CONFIG_VERSION {
            return Err(format!(
                "unsupported config_version {} (expected {CONFIG_VERSION})",
                cfg.config_version
            ));
        }
        Ok(cfg)
    }

    pub fn path_kind(&self) -> PathKind {
        if self.aco.closed_tour {
            PathKind::Closed
        } else {
            PathKind::Open
        }
    }

    pub fn aco_params(&self) -> AcoParams<f64> {
        let a = &self.aco;
        AcoParams {
            n_ants: a.n_ants,
            alpha: a.alpha,
            beta: a.beta,
            q: a.q,
            rho: a.rho,
            max_iterations: a.max_iterations,
            seed: a.seed,
            tau0: a.tau0,
            deposit_rule: a.deposit_rule.into(),
            path_kind: self.path_kind(),
        }
    }

    /// Checks every block and converts it to planner types. Does not touch
    /// the file system.
    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let ctx = |what: &str| format!("config block [{what}]");
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(CliError::plan(
                ctx("root"),
                ipp_core::PlanError::InvalidParameter {
                    field: "scale",
                    reason: format!("must be a positive number, got {}", self.scale),
                },
            ));
        }
        let c = &self.camera;
        let camera = CameraSpec::from_degrees(c.alpha_deg, c.beta_deg, c.distance_m);
        camera.validate().map_err(|e| CliError::plan(ctx("camera"), e))?;
        let f = &self.formation;
        let formation = build_formation(&camera, f.rows, f.cols, f.overlap_w, f.overlap_h)
            .map_err(|e| CliError::plan(ctx("formation"), e))?;
        let ow = self
            .spacing
            .stitch_overlap_w
            .unwrap_or(DEFAULT_STITCH_FRACTION * formation.footprint_w);
        let oh = self
            .spacing
            .stitch_overlap_h
            .unwrap_or(DEFAULT_STITCH_FRACTION * formation.footprint_h);
        let spacing = viewpoint_spacing(&formation, ow, oh).map_err(|e| CliError::plan(ctx("spacing"), e))?;
        let dbscan_eps = self.dbscan.eps.unwrap_or(DEFAULT_EPS_FACTOR * spacing.delta_w);
        if !(dbscan_eps > 0.0 && dbscan_eps.is_finite()) {
            return Err(CliError::plan(
                ctx("dbscan"),
                ipp_core::PlanError::InvalidParameter {
                    field: "eps",
                    reason: format!("must be positive, got {dbscan_eps}"),
                },
            ));
        }
        if self.dbscan.min_pts < 1 {
            return Err(CliError::plan(
                ctx("dbscan"),
                ipp_core::PlanError::InvalidParameter {
                    field: "min_pts",
                    reason: "must be at least 1".into(),
                },
            ));
        }
        let weights = CostWeights::new(self.weights.w1, self.weights.w2).map_err(|e| CliError::plan(ctx("weights"), e))?;
        let aco = self.aco_params();
        aco.validate().map_err(|e| CliError::plan(ctx("aco"), e))?;
        Ok(Resolved {
            camera,
            formation,
            spacing,
            dbscan_eps,
            dbscan_min_pts: self.dbscan.min_pts,
            weights,
            aco,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_reference_setup() {
        let cfg = RunConfig::from_toml("config_version = 1\nmesh = \"m.stl\"\n").unwrap();
        let r = cfg.resolve().unwrap();
        assert!((r.formation.footprint_w - 48.0).abs() < 1e-9);
        assert!((r.formation.footprint_h - 34.0).abs() < 1e-9);
        assert!((r.spacing.delta_w - 43.2).abs() < 1e-9);
        assert!((r.dbscan_eps - 86.4).abs() < 1e-9);
        assert_eq!(r.aco.n_ants, 100);
        assert_eq!(r.aco.max_iterations, 500);
        assert_eq!(cfg.path_kind(), PathKind::Open);
    }

    #[test]
    fn wrong_version_and_unknown_keys() {
        assert!(RunConfig::from_toml("config_version = 2\nmesh = \"m.stl\"\n").is_err());
        assert!(RunConfig::from_toml("config_version = 1\nmesh = \"m.stl\"\nbogus = 3\n").is_err());
        assert!(RunConfig::from_toml("config_version = 1\nmesh = \"m.stl\"\n[aco]\nants = 3\n").is_err());
    }

    #[test]
    fn rho_out_of_range_names_field() {
        let cfg = RunConfig::from_toml("config_version = 1\nmesh = \"m.stl\"\n[aco]\nrho = 1.5\n").unwrap();
        let err = cfg.resolve().unwrap_err();
        assert_eq!(err.exit_code(), crate::error::exit::VALIDATION);
        assert!(err.to_string().contains("rho"), "{err}");
    }

    #[test]
    fn round_trips_through_toml() {
        let cfg = RunConfig::with_mesh("a/b.stl");
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_toml(&text).unwrap(), cfg);
    }
}
