//! End-to-end runs: plan, compare and oracle.
//!
//! Every run validates the config and builds all results in memory before
//! the output directory is created, so a failing run leaves nothing behind.

use std::path::{Path, PathBuf};

use ipp_core::aco::{self, AcoResult};
use ipp_core::baf::baf_path_kind;
use ipp_core::geometry_io::{load_mesh, MeshFormat};
use ipp_core::oracle::{exhaustive_optimum, MAX_EXHAUSTIVE};
use ipp_core::pathcost::{build_cost_matrix, CostMatrix};
use ipp_core::viewpoints::{build_viewpoint_set, ViewpointSet};
use ipp_core::PlanError;

use crate::config::{Resolved, RunConfig};
use crate::error::CliError;
use crate::export;

/// Viewpoints and costs for one config.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub resolved: Resolved,
    pub viewpoints: ViewpointSet<f64>,
    pub costs: CostMatrix<f64>,
}

/// Validates the config, loads the mesh and generates the viewpoint set.
pub fn prepare(cfg: &RunConfig) -> Result<Prepared, CliError> {
    let resolved = cfg.resolve()?;
    let context = format!("mesh {}", cfg.mesh.display());
    let mut mesh = load_mesh::<f64>(&cfg.mesh, MeshFormat::Auto).map_err(|e| CliError::plan(&context, e))?;
    if cfg.scale != 1.0 {
        mesh = mesh.scaled(cfg.scale).map_err(|e| CliError::plan(&context, e))?;
    }
    let viewpoints = build_viewpoint_set(
        &mesh,
        &resolved.formation,
        &resolved.spacing,
        resolved.camera.working_distance,
        resolved.dbscan_eps,
        resolved.dbscan_min_pts,
    )
    .map_err(|e| CliError::plan(format!("viewpoints for {context}"), e))?;
    let costs = build_cost_matrix(&viewpoints, resolved.weights).map_err(|e| CliError::plan("cost matrix", e))?;
    Ok(Prepared {
        resolved,
        viewpoints,
        costs,
    })
}

fn solve(p: &Prepared, seed: u64) -> Result<AcoResult<f64>, CliError> {
    let params = aco::AcoParams { seed, ..p.resolved.aco.clone() };
    aco::solve(&p.costs, &params).map_err(|e| CliError::plan("ant colony search", e))
}

#[derive(Debug, Clone)]
pub struct PlanOutcome {
    pub prepared: Prepared,
    pub order: Vec<usize>,
    pub fitness: f64,
    pub history: Vec<f64>,
    pub artifacts: Vec<PathBuf>,
}

/// Plans one path with the configured seed and writes it to `cfg.out`.
pub fn run_plan(cfg: &RunConfig) -> Result<PlanOutcome, CliError> {
    let prepared = prepare(cfg)?;
    let result = solve(&prepared, cfg.aco.seed)?;
    let files = vec![
        ("viewpoints.csv", export::viewpoints_csv(&prepared.viewpoints)),
        ("viewpoints.json", export::viewpoints_json(&prepared.viewpoints)),
        (
            "path.json",
            export::path_json("aco", &prepared, &result.best_order, result.best_fitness, cfg.aco.closed_tour),
        ),
        ("history.csv", export::history_csv(&result.history)),
        ("plan.svg", crate::svg::plan_view(&prepared.viewpoints, &result.best_order)),
        ("elevation.svg", crate::svg::elevation_view(&prepared.viewpoints, &result.best_order)),
        ("convergence.svg", crate::svg::convergence(&result.history)),
    ];
    let artifacts = write_all(&cfg.out, files)?;
    Ok(PlanOutcome {
        prepared,
        order: result.best_order,
        fitness: result.best_fitness,
        history: result.history,
        artifacts,
    })
}

#[derive(Debug, Clone)]
pub struct CompareOutcome {
    pub baf_fitness: f64,
    pub baf_order: Vec<usize>,
    pub seeds: Vec<u64>,
    pub aco_fitness: Vec<f64>,
    pub aco_mean: f64,
    /// Population standard deviation over seeds.
    pub aco_std: f64,
    /// `(BAF − mean) / BAF · 100`.
    pub improvement_percent: f64,
    pub artifacts: Vec<PathBuf>,
}

/// Baseline once, then the colony for `n_seeds` consecutive seeds starting at
/// the configured one.
pub fn run_compare(cfg: &RunConfig, n_seeds: usize) -> Result<CompareOutcome, CliError> {
    if n_seeds < 1 {
        return Err(CliError::plan(
            "compare",
            PlanError::InvalidParameter {
                field: "seeds",
                reason: "must be at least 1".into(),
            },
        ));
    }
    let prepared = prepare(cfg)?;
    let (baf_order, baf_fitness) =
        baf_path_kind(&prepared.viewpoints, &prepared.costs, cfg.path_kind()).map_err(|e| CliError::plan("baseline", e))?;
    let seeds: Vec<u64> = (0..n_seeds as u64).map(|k| cfg.aco.seed.wrapping_add(k)).collect();
    let mut aco_fitness = Vec::with_capacity(n_seeds);
    for &seed in &seeds {
        aco_fitness.push(solve(&prepared, seed)?.best_fitness);
    }
    let n = n_seeds as f64;
    let aco_mean = aco_fitness.iter().sum::<f64>() / n;
    let aco_std = (aco_fitness.iter().map(|f| (f - aco_mean).powi(2)).sum::<f64>() / n).sqrt();
    let improvement_percent = (baf_fitness - aco_mean) / baf_fitness * 100.0;
    let files = vec![
        (
            "compare.csv",
            export::compare_csv(baf_fitness, aco_mean, aco_std, improvement_percent),
        ),
        (
            "path_baf.json",
            export::path_json("baf", &prepared, &baf_order, baf_fitness, cfg.aco.closed_tour),
        ),
    ];
    let artifacts = write_all(&cfg.out, files)?;
    Ok(CompareOutcome {
        baf_fitness,
        baf_order,
        seeds,
        aco_fitness,
        aco_mean,
        aco_std,
        improvement_percent,
        artifacts,
    })
}

#[derive(Debug, Clone)]
pub struct OracleOutcome {
    pub viewpoint_count: usize,
    pub optimum: f64,
    pub optimal_order: Vec<usize>,
    pub aco_fitness: f64,
    /// `(ACO − optimum) / optimum · 100`, zero when the optimum is zero.
    pub gap_percent: f64,
    pub artifacts: Vec<PathBuf>,
}

/// Compares the colony against exhaustive search on a small viewpoint set.
pub fn run_oracle(cfg: &RunConfig, m_max: usize) -> Result<OracleOutcome, CliError> {
    if m_max > MAX_EXHAUSTIVE {
        return Err(CliError::plan(
            "oracle",
            PlanError::InvalidParameter {
                field: "max_m",
                reason: format!("must not exceed {MAX_EXHAUSTIVE}, got {m_max}"),
            },
        ));
    }
    let prepared = prepare(cfg)?;
    let (optimal_order, optimum) =
        exhaustive_optimum(&prepared.costs, cfg.path_kind(), m_max).map_err(|e| CliError::plan("oracle", e))?;
    let aco_fitness = solve(&prepared, cfg.aco.seed)?.best_fitness;
    let gap_percent = if optimum > 0.0 {
        (aco_fitness - optimum) / optimum * 100.0
    } else {
        0.0
    };
    let outcome = OracleOutcome {
        viewpoint_count: prepared.viewpoints.len(),
        optimum,
        optimal_order,
        aco_fitness,
        gap_percent,
        artifacts: Vec::new(),
    };
    let artifacts = write_all(&cfg.out, vec![("oracle.json", export::oracle_json(&outcome))])?;
    Ok(OracleOutcome { artifacts, ..outcome })
}

fn write_all(dir: &Path, files: Vec<(&str, String)>) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::output(dir, e))?;
    files
        .into_iter()
        .map(|(name, body)| {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|e| CliError::output(&path, e))?;
            Ok(path)
        })
        .collect()
}
