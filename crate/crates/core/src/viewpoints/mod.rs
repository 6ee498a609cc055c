//! Viewpoint generation for the virtual leader.
//!
//! The structure is cut by horizontal planes spaced `δ_h` apart. Each cut is
//! chained into contours, contours are grouped by DBSCAN into structure
//! components, every contour point is pushed outward by the working distance
//! along its in-plane normal, and the result is thinned to one viewpoint per
//! `δ_w` of arc length.

mod dbscan;
mod offset;
mod slice;

use rayon::prelude::*;

pub use dbscan::dbscan;
pub use offset::{offset_contour, offset_contour_from};
pub use slice::{slice_levels, slice_mesh, CHAIN_TOL};

use crate::error::{PlanError, Result};
use crate::formation::{FormationSpec, SpacingSpec};
use crate::geom::{Aabb, Vec3};
use crate::geometry_io::TriangleMesh;
use crate::scalar::{from_usize, lit, Scalar};

/// Contours are resampled to at most this fraction of `δ_w` between points
/// before offsetting, so the arc-length walk has candidates to choose from.
pub const RESAMPLE_FRACTION: f64 = 0.125;
/// Default DBSCAN radius as a multiple of `δ_w`.
pub const DEFAULT_EPS_FACTOR: f64 = 2.0;
pub const DEFAULT_MIN_PTS: usize = 3;

/// One polyline of the cut `z = level`.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceContour<T> {
    pub level: T,
    /// Points on the plane; closed contours do not repeat their first point.
    pub points: Vec<Vec3<T>>,
    pub closed: bool,
    pub cluster_id: usize,
}

impl<T: Scalar> SliceContour<T> {
    pub fn length(&self) -> T {
        let n = self.points.len();
        let m = if self.closed { n } else { n.saturating_sub(1) };
        (0..m).map(|i| self.points[i].distance(self.points[(i + 1) % n])).sum()
    }

    /// Inserts evenly spaced points so no segment is longer than `max_step`.
    /// Original points are kept.
    pub fn resampled(&self, max_step: T) -> Self {
        let n = self.points.len();
        let m = if self.closed { n } else { n.saturating_sub(1) };
        let mut points = Vec::with_capacity(n);
        for i in 0..m {
            let (p, q) = (self.points[i], self.points[(i + 1) % n]);
            points.push(p);
            let len = p.distance(q);
            let pieces = (len / max_step).ceil().to_usize().unwrap_or(1).max(1);
            for k in 1..pieces {
                points.push(p + (q - p) * (from_usize::<T>(k) / from_usize::<T>(pieces)));
            }
        }
        if !self.closed {
            if let Some(&last) = self.points.last() {
                points.push(last);
            }
        }
        Self {
            level: self.level,
            points,
            closed: self.closed,
            cluster_id: self.cluster_id,
        }
    }
}

/// A formation waypoint.
#[derive(Debug, Clone, PartialEq)]
pub struct Viewpoint<T> {
    pub position: Vec3<T>,
    /// Unit vector from the viewpoint toward the surface, horizontal.
    pub heading: Vec3<T>,
    /// Contour point the viewpoint was generated from.
    pub surface_point: Vec3<T>,
    /// Slice level index.
    pub layer: usize,
    /// Cluster within the layer.
    pub cluster: usize,
    /// Index into [`ViewpointSet::contours`].
    pub contour: usize,
    /// Arc length along the offset contour from its first point.
    pub arc: T,
}

/// Per-contour bookkeeping kept alongside the viewpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourSummary<T> {
    pub layer: usize,
    pub cluster: usize,
    pub closed: bool,
    /// Length of the offset polyline (including the closing edge if closed).
    pub offset_length: T,
    /// Outline of the structure at this level.
    pub outline: Vec<Vec3<T>>,
}

/// Every viewpoint of a plan, ordered by layer, cluster, contour and arc.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewpointSet<T> {
    pub viewpoints: Vec<Viewpoint<T>>,
    pub spacing: SpacingSpec<T>,
    pub source_bbox: Aabb<T>,
    pub levels: Vec<T>,
    pub contours: Vec<ContourSummary<T>>,
    pub working_distance: T,
}

impl<T: Scalar> ViewpointSet<T> {
    pub fn len(&self) -> usize {
        self.viewpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.viewpoints.is_empty()
    }

    pub fn positions(&self) -> Vec<Vec3<T>> {
        self.viewpoints.iter().map(|v| v.position).collect()
    }
}

/// Groups contours of one level into structure components.
///
/// DBSCAN runs over points sampled along every contour at most `eps / 2`
/// apart, so a contour is internally connected whatever its vertex spacing.
/// Noise points take the label of the nearest clustered point and each
/// contour takes the majority label of its points. Cluster ids are then
/// renumbered from 0 in contour order.
pub fn cluster_contours<T: Scalar>(contours: &[SliceContour<T>], eps: T, min_pts: usize) -> Vec<SliceContour<T>> {
    let mut owner = Vec::new();
    let mut samples: Vec<[T; 2]> = Vec::new();
    for (ci, c) in contours.iter().enumerate() {
        for p in c.resampled(eps * lit(0.5)).points {
            owner.push(ci);
            samples.push([p.x, p.y]);
        }
    }
    let mut labels = dbscan(&samples, eps, min_pts);

    let labelled: Vec<usize> = (0..samples.len()).filter(|&i| labels[i].is_some()).collect();
    if labelled.is_empty() {
        labels.iter_mut().for_each(|l| *l = Some(0));
    } else {
        let snapshot = labels.clone();
        for i in 0..samples.len() {
            if snapshot[i].is_none() {
                let d2 = |j: usize| {
                    let (dx, dy) = (samples[j][0] - samples[i][0], samples[j][1] - samples[i][1]);
                    dx * dx + dy * dy
                };
                let nearest = labelled
                    .iter()
                    .copied()
                    .min_by(|&a, &b| d2(a).partial_cmp(&d2(b)).unwrap_or(std::cmp::Ordering::Equal))
                    .expect("non-empty");
                labels[i] = snapshot[nearest];
            }
        }
    }

    let n_labels = labels.iter().flatten().max().map_or(1, |&m| m + 1);
    let mut renumber: Vec<Option<usize>> = vec![None; n_labels];
    let mut next = 0;
    contours
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            let mut votes = vec![0usize; n_labels];
            for (i, &o) in owner.iter().enumerate() {
                if o == ci {
                    votes[labels[i].unwrap_or(0)] += 1;
                }
            }
            // ties go to the smallest label
            let raw = (0..n_labels).max_by_key(|&l| (votes[l], std::cmp::Reverse(l))).unwrap_or(0);
            let id = *renumber[raw].get_or_insert_with(|| {
                next += 1;
                next - 1
            });
            SliceContour {
                cluster_id: id,
                ..c.clone()
            }
        })
        .collect()
}

/// Indices kept by a greedy arc-length walk, and the cumulative arc lengths.
///
/// The first point is kept, then each point whose arc distance from the last
/// kept point reaches `step`. On closed contours the last kept point is
/// dropped when it would sit closer than `step / 2` to the first one along the
/// closing arc, unless dropping it stretches that arc to `2·step` or more.
pub fn arc_downsample<T: Scalar>(points: &[Vec3<T>], closed: bool, step: T) -> (Vec<usize>, Vec<T>, T) {
    let n = points.len();
    let mut arc = Vec::with_capacity(n);
    let mut acc = T::zero();
    for i in 0..n {
        if i > 0 {
            acc = acc + points[i].distance(points[i - 1]);
        }
        arc.push(acc);
    }
    let total = if closed && n > 1 {
        acc + points[n - 1].distance(points[0])
    } else {
        acc
    };
    if n == 0 {
        return (Vec::new(), arc, total);
    }
    let mut kept = vec![0];
    for i in 1..n {
        if arc[i] - arc[*kept.last().unwrap()] >= step {
            kept.push(i);
        }
    }
    if closed && kept.len() > 1 {
        let last = arc[kept[kept.len() - 1]];
        let prev = arc[kept[kept.len() - 2]];
        let closing = total - last;
        if closing < step * lit(0.5) && total - prev < step + step {
            kept.pop();
        }
    }
    (kept, arc, total)
}

/// Runs the whole viewpoint pipeline for one structure.
///
/// Levels are processed in parallel and merged in level order, so the result
/// does not depend on scheduling. Levels the plane misses contribute no
/// viewpoints; if every level is empty the call fails with `NoViewpoints`.
pub fn build_viewpoint_set<T: Scalar>(
    mesh: &TriangleMesh<T>,
    fs: &FormationSpec<T>,
    spacing: &SpacingSpec<T>,
    d: T,
    dbscan_eps: T,
    dbscan_min_pts: usize,
) -> Result<ViewpointSet<T>> {
    if !(d > T::zero()) {
        return Err(PlanError::param("working_distance", "must be positive"));
    }
    if !(spacing.delta_w > T::zero()) || !(spacing.delta_h > T::zero()) {
        return Err(PlanError::param("spacing", "delta_w and delta_h must be positive"));
    }
    if !(dbscan_eps > T::zero()) {
        return Err(PlanError::param("dbscan.eps", "must be positive"));
    }
    let levels = slice_levels(mesh, spacing, fs.footprint_h);
    let step = spacing.delta_w;
    let resample = step * lit(RESAMPLE_FRACTION);

    let per_level: Vec<Result<Vec<(ContourSummary<T>, Vec<Viewpoint<T>>)>>> = levels
        .par_iter()
        .enumerate()
        .map(|(layer, &level)| {
            let contours = match slice_mesh(mesh, level) {
                Ok(c) => c,
                Err(PlanError::EmptySlice { .. }) => return Ok(Vec::new()),
                Err(e) => return Err(e),
            };
            let contours: Vec<_> = contours.iter().map(|c| c.resampled(resample)).collect();
            let mut contours = cluster_contours(&contours, dbscan_eps, dbscan_min_pts);
            contours.sort_by_key(|c| c.cluster_id);

            let n_clusters = contours.iter().map(|c| c.cluster_id + 1).max().unwrap_or(0);
            let centroids: Vec<Vec3<T>> = (0..n_clusters)
                .map(|k| {
                    let pts: Vec<_> = contours
                        .iter()
                        .filter(|c| c.cluster_id == k)
                        .flat_map(|c| c.points.iter().copied())
                        .collect();
                    offset::centroid(&pts)
                })
                .collect();

            let mut out = Vec::new();
            for c in &contours {
                let raw = match offset_contour_from(c, d, centroids[c.cluster_id]) {
                    Ok(v) => v,
                    // zero-thickness fins have no outward side
                    Err(PlanError::DegenerateContour) => continue,
                    Err(e) => return Err(e),
                };
                let positions: Vec<_> = raw.iter().map(|v| v.position).collect();
                let (kept, arc, total) = arc_downsample(&positions, c.closed, step);
                let vps = kept
                    .into_iter()
                    .map(|i| Viewpoint {
                        layer,
                        arc: arc[i],
                        ..raw[i].clone()
                    })
                    .collect();
                out.push((
                    ContourSummary {
                        layer,
                        cluster: c.cluster_id,
                        closed: c.closed,
                        offset_length: total,
                        outline: c.points.clone(),
                    },
                    vps,
                ));
            }
            Ok(out)
        })
        .collect();

    let mut viewpoints = Vec::new();
    let mut contours = Vec::new();
    for level in per_level {
        for (summary, vps) in level? {
            let idx = contours.len();
            contours.push(summary);
            viewpoints.extend(vps.into_iter().map(|v| Viewpoint { contour: idx, ..v }));
        }
    }
    if viewpoints.is_empty() {
        return Err(PlanError::NoViewpoints);
    }
    Ok(ViewpointSet {
        viewpoints,
        spacing: *spacing,
        source_bbox: mesh.bbox(),
        levels,
        contours,
        working_distance: d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(cx: f64, cy: f64, side: f64) -> SliceContour<f64> {
        let h = side / 2.0;
        SliceContour {
            level: 0.0,
            points: vec![
                Vec3::new(cx - h, cy - h, 0.0),
                Vec3::new(cx + h, cy - h, 0.0),
                Vec3::new(cx + h, cy + h, 0.0),
                Vec3::new(cx - h, cy + h, 0.0),
            ],
            closed: true,
            cluster_id: 7,
        }
    }

    #[test]
    fn single_contour_is_cluster_zero() {
        let c = cluster_contours(&[ring(0., 0., 40.)], 10.0, 3);
        assert_eq!(c[0].cluster_id, 0);
    }

    #[test]
    fn far_squares_split_near_squares_merge() {
        let far = cluster_contours(&[ring(0., 0., 20.), ring(120., 0., 20.)], 10.0, 3);
        assert_eq!((far[0].cluster_id, far[1].cluster_id), (0, 1));
        let near = cluster_contours(&[ring(0., 0., 20.), ring(21., 0., 20.)], 10.0, 3);
        assert_eq!((near[0].cluster_id, near[1].cluster_id), (0, 0));
    }

    #[test]
    fn resampling_keeps_corners() {
        let r = ring(0., 0., 40.).resampled(5.0);
        assert_eq!(r.points.len(), 32);
        assert!((r.length() - 160.0).abs() < 1e-9);
    }

    #[test]
    fn downsample_open_line() {
        let pts: Vec<_> = (0..=20).map(|i| Vec3::new(i as f64, 0.0, 0.0)).collect();
        let (kept, arc, total) = arc_downsample(&pts, false, 6.0);
        assert_eq!(kept, vec![0, 6, 12, 18]);
        assert_eq!(arc[18], 18.0);
        assert_eq!(total, 20.0);
    }

    #[test]
    fn downsample_closed_drops_crowded_tail() {
        // ring of circumference 100 sampled every 1: kept at 0,30,60,90; closing 10 < 15
        let pts: Vec<_> = (0..100)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / 100.0;
                let r = 100.0 / (2.0 * std::f64::consts::PI * (std::f64::consts::PI / 100.0).sin() / (std::f64::consts::PI / 100.0));
                Vec3::new(r * t.cos(), r * t.sin(), 0.0)
            })
            .collect();
        let (kept, _, total) = arc_downsample(&pts, true, 29.5);
        assert!((total - 100.0).abs() < 1e-9);
        assert_eq!(kept, vec![0, 30, 60]);
    }
}
