//! CSV and JSON artifact bodies.
//!
//! Floats are written in shortest round-trip form, so equal inputs give
//! byte-identical files.

use ipp_core::viewpoints::ViewpointSet;
use serde::Serialize;

use crate::config::CONFIG_VERSION;
use crate::pipeline::{OracleOutcome, Prepared};

#[derive(Debug, Serialize)]
struct ViewpointRow {
    layer: usize,
    cluster: usize,
    x: f64,
    y: f64,
    z: f64,
    hx: f64,
    hy: f64,
    hz: f64,
}

pub fn viewpoints_csv(vps: &ViewpointSet<f64>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for v in &vps.viewpoints {
        w.serialize(ViewpointRow {
            layer: v.layer,
            cluster: v.cluster,
            x: v.position.x,
            y: v.position.y,
            z: v.position.z,
            hx: v.heading.x,
            hy: v.heading.y,
            hz: v.heading.z,
        })
        .expect("in-memory csv");
    }
    into_string(w)
}

#[derive(Debug, Serialize)]
struct SpacingJson {
    delta_w: f64,
    delta_h: f64,
    stitch_overlap_w: f64,
    stitch_overlap_h: f64,
}

#[derive(Debug, Serialize)]
struct ViewpointJson {
    x: f64,
    y: f64,
    z: f64,
    hx: f64,
    hy: f64,
    hz: f64,
    layer: usize,
    cluster: usize,
    contour: usize,
    arc: f64,
}

#[derive(Debug, Serialize)]
struct ViewpointsJson {
    config_version: u32,
    working_distance: f64,
    spacing: SpacingJson,
    levels: Vec<f64>,
    viewpoints: Vec<ViewpointJson>,
}

pub fn viewpoints_json(vps: &ViewpointSet<f64>) -> String {
    let s = &vps.spacing;
    let doc = ViewpointsJson {
        config_version: CONFIG_VERSION,
        working_distance: vps.working_distance,
        spacing: SpacingJson {
            delta_w: s.delta_w,
            delta_h: s.delta_h,
            stitch_overlap_w: s.stitch_overlap_w,
            stitch_overlap_h: s.stitch_overlap_h,
        },
        levels: vps.levels.clone(),
        viewpoints: vps
            .viewpoints
            .iter()
            .map(|v| ViewpointJson {
                x: v.position.x,
                y: v.position.y,
                z: v.position.z,
                hx: v.heading.x,
                hy: v.heading.y,
                hz: v.heading.z,
                layer: v.layer,
                cluster: v.cluster,
                contour: v.contour,
                arc: v.arc,
            })
            .collect(),
    };
    to_json(&doc)
}

#[derive(Debug, Serialize)]
struct WeightsJson {
    w1: f64,
    w2: f64,
}

#[derive(Debug, Serialize)]
struct WaypointJson {
    x: f64,
    y: f64,
    z: f64,
    hx: f64,
    hy: f64,
    hz: f64,
    layer: usize,
    cluster: usize,
}

#[derive(Debug, Serialize)]
struct PathJson<'a> {
    method: &'a str,
    fitness: f64,
    weights: WeightsJson,
    waypoints: Vec<WaypointJson>,
    config_version: u32,
    closed_tour: bool,
}

/// Ordered waypoints for the virtual leader.
pub fn path_json(method: &str, p: &Prepared, order: &[usize], fitness: f64, closed_tour: bool) -> String {
    let w = p.costs.weights();
    let doc = PathJson {
        method,
        fitness,
        weights: WeightsJson { w1: w.w1, w2: w.w2 },
        waypoints: order
            .iter()
            .map(|&i| {
                let v = &p.viewpoints.viewpoints[i];
                WaypointJson {
                    x: v.position.x,
                    y: v.position.y,
                    z: v.position.z,
                    hx: v.heading.x,
                    hy: v.heading.y,
                    hz: v.heading.z,
                    layer: v.layer,
                    cluster: v.cluster,
                }
            })
            .collect(),
        config_version: CONFIG_VERSION,
        closed_tour,
    };
    to_json(&doc)
}

/// One row per iteration, numbered from 1.
pub fn history_csv(history: &[f64]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["iteration", "best_fitness"]).expect("in-memory csv");
    for (i, f) in history.iter().enumerate() {
        w.serialize((i + 1, f)).expect("in-memory csv");
    }
    into_string(w)
}

#[derive(Debug, Serialize)]
struct CompareRow<'a> {
    method: &'a str,
    mean: f64,
    std: f64,
    improvement_percent: f64,
}

pub fn compare_csv(baf: f64, aco_mean: f64, aco_std: f64, improvement_percent: f64) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in [
        CompareRow {
            method: "baf",
            mean: baf,
            std: 0.0,
            improvement_percent: 0.0,
        },
        CompareRow {
            method: "aco",
            mean: aco_mean,
            std: aco_std,
            improvement_percent,
        },
    ] {
        w.serialize(row).expect("in-memory csv");
    }
    into_string(w)
}

#[derive(Debug, Serialize)]
struct OracleJson<'a> {
    viewpoint_count: usize,
    optimum: f64,
    optimal_order: &'a [usize],
    aco_fitness: f64,
    gap_percent: f64,
}

pub fn oracle_json(o: &OracleOutcome) -> String {
    to_json(&OracleJson {
        viewpoint_count: o.viewpoint_count,
        optimum: o.optimum,
        optimal_order: &o.optimal_order,
        aco_fitness: o.aco_fitness,
        gap_percent: o.gap_percent,
    })
}

fn to_json<S: Serialize>(doc: &S) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("plain data serializes");
    s.push('\n');
    s
}

fn into_string(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv output is utf-8")
}
