//! Horizontal slicing of a triangle mesh into contours.

use std::collections::{HashMap, HashSet};

use crate::error::{PlanError, Result};
use crate::formation::SpacingSpec;
use crate::geom::Vec3;
use crate::geometry_io::TriangleMesh;
use crate::scalar::{from_usize, lit, Scalar};
use crate::viewpoints::SliceContour;

/// Distance under which two contour endpoints are chained together.
pub const CHAIN_TOL: f64 = 1e-6;

/// Fraction of `δ_h` the last regular level may fall short of the top
/// level before the top level is appended.
const TERMINAL_LEVEL_FRACTION: f64 = 0.25;

/// Slice heights from `min_z + h_f/2` to `max_z − h_f/2` in steps of `δ_h`.
///
/// The top height is appended when the regular sequence stops more than a
/// quarter step below it. A mesh no taller than `h_f` gets one level at
/// mid-height.
pub fn slice_levels<T: Scalar>(mesh: &TriangleMesh<T>, spacing: &SpacingSpec<T>, footprint_h: T) -> Vec<T> {
    let bb = mesh.bbox();
    let (lo, hi) = (bb.min.z, bb.max.z);
    let half = footprint_h * lit(0.5);
    if hi - lo <= footprint_h || !(spacing.delta_h > T::zero()) {
        return vec![(lo + hi) * lit(0.5)];
    }
    let start = lo + half;
    let end = hi - half;
    let slack = lit::<T>(1e-9) * end.abs().max(T::one());
    let mut levels = Vec::new();
    let mut k = 0usize;
    loop {
        let l = start + spacing.delta_h * from_usize(k);
        if l > end + slack {
            break;
        }
        levels.push(l.min(end));
        k += 1;
    }
    let last = *levels.last().expect("start <= end");
    if end - last > spacing.delta_h * lit(TERMINAL_LEVEL_FRACTION) {
        levels.push(end);
    }
    levels
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum NodeKey {
    Vertex(usize),
    Edge(usize, usize),
}

/// Intersects the mesh with the plane `z = level` and chains the segments.
///
/// Vertices on the plane count as above it, so triangles lying in the plane
/// contribute nothing and an edge shared by two triangles yields one point.
/// Closed contours come out counter-clockwise (seen from above) starting at
/// their lexicographically smallest point; open contours start at their
/// smaller endpoint. Contours are sorted by start point.
pub fn slice_mesh<T: Scalar>(mesh: &TriangleMesh<T>, level: T) -> Result<Vec<SliceContour<T>>> {
    let verts = mesh.vertices();
    let above = |i: usize| verts[i].z >= level;

    let mut node_ids: HashMap<NodeKey, usize> = HashMap::new();
    let mut nodes: Vec<Vec3<T>> = Vec::new();
    let mut node_for = |key: NodeKey| -> usize {
        *node_ids.entry(key).or_insert_with(|| {
            let p = match key {
                NodeKey::Vertex(v) => verts[v],
                NodeKey::Edge(a, b) => {
                    let (pa, pb) = (verts[a], verts[b]);
                    let t = (pa.z - level) / (pa.z - pb.z);
                    pa + (pb - pa) * t
                }
            };
            nodes.push(Vec3::new(p.x, p.y, level));
            nodes.len() - 1
        })
    };

    let mut segments: Vec<[usize; 2]> = Vec::new();
    for tri in mesh.triangles() {
        let sides = tri.map(above);
        if sides[0] == sides[1] && sides[1] == sides[2] {
            continue;
        }
        let mut ends = [0usize; 2];
        let mut n = 0;
        for e in 0..3 {
            let (u, v) = (tri[e], tri[(e + 1) % 3]);
            if sides[e] == sides[(e + 1) % 3] {
                continue;
            }
            let key = if verts[u].z == level {
                NodeKey::Vertex(u)
            } else if verts[v].z == level {
                NodeKey::Vertex(v)
            } else {
                NodeKey::Edge(u.min(v), u.max(v))
            };
            ends[n] = node_for(key);
            n += 1;
        }
        debug_assert_eq!(n, 2);
        if ends[0] != ends[1] {
            segments.push(ends);
        }
    }
    if segments.is_empty() {
        return Err(PlanError::EmptySlice {
            level: level.to_f64().unwrap_or(f64::NAN),
        });
    }

    let canon = merge_close_nodes(&nodes, lit(CHAIN_TOL));
    let mut seen = HashSet::new();
    let segments: Vec<[usize; 2]> = segments
        .into_iter()
        .map(|[a, b]| [canon[a], canon[b]])
        .filter(|&[a, b]| a != b && seen.insert((a.min(b), a.max(b))))
        .collect();

    let mut contours: Vec<SliceContour<T>> = chain(&segments, nodes.len())
        .into_iter()
        .filter(|(ids, _)| ids.len() >= 2)
        .map(|(ids, closed)| {
            let points = ids.iter().map(|&i| nodes[i]).collect();
            canonicalize(SliceContour {
                level,
                points,
                closed,
                cluster_id: 0,
            })
        })
        .collect();
    if contours.is_empty() {
        return Err(PlanError::EmptySlice {
            level: level.to_f64().unwrap_or(f64::NAN),
        });
    }
    contours.sort_by(|a, b| a.points[0].lex_cmp(&b.points[0]));
    Ok(contours)
}

/// Maps each node to the lowest-indexed node within `tol` of it (transitively).
fn merge_close_nodes<T: Scalar>(nodes: &[Vec3<T>], tol: T) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let cell = |v: Vec3<T>| {
        let c = |x: T| (x / tol).floor().to_i64().unwrap_or(0);
        (c(v.x), c(v.y))
    };
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, &p) in nodes.iter().enumerate() {
        let (cx, cy) = cell(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = grid.get(&(cx + dx, cy + dy)) {
                    for &j in ids {
                        if nodes[j].distance(p) <= tol {
                            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                            let (lo, hi) = (ri.min(rj), ri.max(rj));
                            parent[hi] = lo;
                        }
                    }
                }
            }
        }
        grid.entry((cx, cy)).or_default().push(i);
    }
    (0..nodes.len()).map(|i| find(&mut parent, i)).collect()
}

/// Walks undirected segments into maximal polylines. Open chains are started
/// from odd-degree nodes first so that they are not split in the middle.
fn chain(segments: &[[usize; 2]], n_nodes: usize) -> Vec<(Vec<usize>, bool)> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_nodes];
    for (s, &[a, b]) in segments.iter().enumerate() {
        adj[a].push((s, b));
        adj[b].push((s, a));
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();

    let walk = |start: usize, used: &mut Vec<bool>| -> Option<(Vec<usize>, bool)> {
        let mut path = vec![start];
        let mut cur = start;
        let mut closed = false;
        while let Some(&(s, next)) = adj[cur].iter().find(|(s, _)| !used[*s]) {
            used[s] = true;
            if next == start {
                closed = true;
                break;
            }
            path.push(next);
            cur = next;
        }
        (path.len() > 1).then_some((path, closed))
    };

    let odd: Vec<usize> = (0..n_nodes).filter(|&i| adj[i].len() % 2 == 1).collect();
    for start in odd {
        while adj[start].iter().any(|(s, _)| !used[*s]) {
            if let Some(p) = walk(start, &mut used) {
                out.push(p);
            }
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            if let Some(p) = walk(segments[s][0], &mut used) {
                out.push(p);
            }
        }
    }
    out
}

/// Signed area of the xy projection of a closed polyline (positive = CCW).
pub(crate) fn signed_area<T: Scalar>(points: &[Vec3<T>]) -> T {
    let n = points.len();
    let mut a = T::zero();
    for i in 0..n {
        let (p, q) = (points[i], points[(i + 1) % n]);
        a = a + (p.x * q.y - q.x * p.y);
    }
    a * lit(0.5)
}

fn canonicalize<T: Scalar>(mut c: SliceContour<T>) -> SliceContour<T> {
    if c.closed {
        if signed_area(&c.points) < T::zero() {
            c.points.reverse();
        }
        let start = (0..c.points.len())
            .min_by(|&a, &b| c.points[a].lex_cmp(&c.points[b]))
            .unwrap_or(0);
        c.points.rotate_left(start);
    } else if c.points[c.points.len() - 1].lex_cmp(&c.points[0]).is_lt() {
        c.points.reverse();
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{box_mesh, union_of_boxes};
    use crate::geom::Aabb;

    fn spacing(delta_h: f64) -> SpacingSpec<f64> {
        SpacingSpec { delta_w: 40.0, delta_h, stitch_overlap_w: 0.0, stitch_overlap_h: 0.0 }
    }

    fn boxm(x: f64, y: f64, z: f64) -> TriangleMesh<f64> {
        box_mesh(Vec3::new(0.0, 0.0, 0.0), Vec3::new(x, y, z))
    }

    #[test]
    fn levels_even_extent() {
        assert_eq!(slice_levels(&boxm(1., 1., 68.), &spacing(34.), 34.), vec![17.0, 51.0]);
    }

    #[test]
    fn levels_collapse_to_mid_height() {
        assert_eq!(slice_levels(&boxm(1., 1., 34.), &spacing(34.), 34.), vec![17.0]);
        assert_eq!(slice_levels(&boxm(1., 1., 10.), &spacing(34.), 34.), vec![5.0]);
    }

    #[test]
    fn levels_append_terminal() {
        // regular run stops at 187, the top level 231 - 17 = 214 is 27 m higher
        let l = slice_levels(&boxm(1., 1., 231.), &spacing(34.), 34.);
        assert_eq!(l, vec![17.0, 51.0, 85.0, 119.0, 153.0, 187.0, 214.0]);
    }

    #[test]
    fn levels_skip_terminal_when_close() {
        // run stops at 187, top level 192 is within a quarter step
        let l = slice_levels(&boxm(1., 1., 209.), &spacing(34.), 34.);
        assert_eq!(l, vec![17.0, 51.0, 85.0, 119.0, 153.0, 187.0]);
    }

    fn perimeter(c: &SliceContour<f64>) -> f64 {
        let n = c.points.len();
        let m = if c.closed { n } else { n - 1 };
        (0..m).map(|i| c.points[i].distance(c.points[(i + 1) % n])).sum()
    }

    #[test]
    fn box_cross_section_is_square() {
        let cs = slice_mesh(&boxm(40., 40., 68.), 34.0).unwrap();
        assert_eq!(cs.len(), 1);
        let c = &cs[0];
        assert!(c.closed);
        assert!((perimeter(c) - 160.0).abs() < 1e-9);
        assert!(signed_area(&c.points) > 0.0);
        assert!(c.points.iter().all(|p| p.z == 34.0));
        assert_eq!(c.points[0], Vec3::new(0.0, 0.0, 34.0));
        for i in 0..c.points.len() {
            assert_ne!(c.points[i], c.points[(i + 1) % c.points.len()]);
        }
    }

    #[test]
    fn disjoint_boxes_give_two_contours() {
        let m = union_of_boxes(&[
            Aabb::new(Vec3::new(0., 0., 0.), Vec3::new(10., 10., 10.)),
            Aabb::new(Vec3::new(50., 0., 0.), Vec3::new(60., 10., 10.)),
        ]);
        let cs = slice_mesh(&m, 5.0).unwrap();
        assert_eq!(cs.len(), 2);
        assert!(cs.iter().all(|c| c.closed && (perimeter(c) - 40.0).abs() < 1e-9));
    }

    #[test]
    fn plane_through_horizontal_facet_uses_walls_only() {
        let m = boxm(40., 40., 68.);
        for level in [0.0, 68.0] {
            match slice_mesh(&m, level) {
                Ok(cs) => {
                    assert_eq!(cs.len(), 1);
                    assert!(cs[0].closed);
                    assert!((perimeter(&cs[0]) - 160.0).abs() < 1e-9, "level {level}");
                }
                Err(PlanError::EmptySlice { .. }) => assert_eq!(level, 0.0),
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn stacked_boxes_sliced_at_internal_vertex_level() {
        // a setback tower: the plane runs through the roof of the lower block
        let m = union_of_boxes(&[
            Aabb::new(Vec3::new(0., 0., 0.), Vec3::new(40., 40., 20.)),
            Aabb::new(Vec3::new(10., 10., 20.), Vec3::new(30., 30., 40.)),
        ]);
        let cs = slice_mesh(&m, 20.0).unwrap();
        let total: f64 = cs.iter().map(perimeter).sum();
        // lower block outline only, each edge once
        assert_eq!(cs.len(), 1);
        assert!((total - 160.0).abs() < 1e-9, "total {total}");
    }

    #[test]
    fn missing_plane_is_error() {
        assert!(matches!(slice_mesh(&boxm(1., 1., 1.), 5.0), Err(PlanError::EmptySlice { .. })));
    }

    #[test]
    fn open_surface_gives_open_contour() {
        // single vertical wall, two triangles
        let v = vec![
            Vec3::new(0., 0., 0.),
            Vec3::new(10., 0., 0.),
            Vec3::new(10., 0., 10.),
            Vec3::new(0., 0., 10.),
        ];
        let m = TriangleMesh::new(v, vec![[0, 1, 2], [0, 2, 3]]).unwrap();
        let cs = slice_mesh(&m, 5.0).unwrap();
        assert_eq!(cs.len(), 1);
        assert!(!cs[0].closed);
        assert_eq!(cs[0].points[0], Vec3::new(0., 0., 5.));
        assert_eq!(*cs[0].points.last().unwrap(), Vec3::new(10., 0., 5.));
    }
}
