//! Synthetic structure meshes used as benchmarks and test fixtures.

use std::collections::HashMap;

use crate::geom::{Aabb, Vec3};
use crate::geometry_io::TriangleMesh;
use crate::scalar::{from_usize, lit, Scalar};

/// Closed, outward-wound mesh of an axis-aligned box.
pub fn box_mesh<T: Scalar>(min: Vec3<T>, max: Vec3<T>) -> TriangleMesh<T> {
    union_of_boxes(&[Aabb::new(min, max)])
}

/// Boundary of the union of axis-aligned boxes.
///
/// The union is voxelized on the grid spanned by all box faces and every
/// cell face separating solid from empty becomes two triangles, so the result
/// is watertight with vertices shared along every grid line.
pub fn union_of_boxes<T: Scalar>(boxes: &[Aabb<T>]) -> TriangleMesh<T> {
    assert!(!boxes.is_empty(), "need at least one box");
    let coords = |axis: usize| {
        let mut c: Vec<T> = boxes.iter().flat_map(|b| [b.min[axis], b.max[axis]]).collect();
        c.sort_by(|a, b| a.partial_cmp(b).expect("finite box coordinates"));
        c.dedup();
        c
    };
    let grid = [coords(0), coords(1), coords(2)];
    let dims = [grid[0].len() - 1, grid[1].len() - 1, grid[2].len() - 1];
    let half = lit::<T>(0.5);
    let filled = |c: [isize; 3]| -> bool {
        if (0..3).any(|a| c[a] < 0 || c[a] as usize >= dims[a]) {
            return false;
        }
        let center = Vec3::new(
            (grid[0][c[0] as usize] + grid[0][c[0] as usize + 1]) * half,
            (grid[1][c[1] as usize] + grid[1][c[1] as usize + 1]) * half,
            (grid[2][c[2] as usize] + grid[2][c[2] as usize + 1]) * half,
        );
        boxes.iter().any(|b| b.contains_point(center))
    };

    let mut vertex_ids: HashMap<[usize; 3], usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut vid = |g: [usize; 3]| -> usize {
        *vertex_ids.entry(g).or_insert_with(|| {
            vertices.push(Vec3::new(grid[0][g[0]], grid[1][g[1]], grid[2][g[2]]));
            vertices.len() - 1
        })
    };
    let mut triangles = Vec::new();

    for i in 0..dims[0] {
        for j in 0..dims[1] {
            for k in 0..dims[2] {
                let c = [i as isize, j as isize, k as isize];
                if !filled(c) {
                    continue;
                }
                for axis in 0..3 {
                    for positive in [false, true] {
                        let mut n = c;
                        n[axis] += if positive { 1 } else { -1 };
                        if filled(n) {
                            continue;
                        }
                        // face corners on the plane of this side, counter-clockwise
                        // when viewed from outside
                        let (u, v) = ((axis + 1) % 3, (axis + 2) % 3);
                        let mut base = [i, j, k];
                        if positive {
                            base[axis] += 1;
                        }
                        let corner = |du: usize, dv: usize| {
                            let mut g = base;
                            g[u] += du;
                            g[v] += dv;
                            g
                        };
                        let quad = if positive {
                            [corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)]
                        } else {
                            [corner(0, 0), corner(0, 1), corner(1, 1), corner(1, 0)]
                        };
                        let q = quad.map(&mut vid);
                        triangles.push([q[0], q[1], q[2]]);
                        triangles.push([q[0], q[2], q[3]]);
                    }
                }
            }
        }
    }
    TriangleMesh::new(vertices, triangles).expect("union of boxes is a valid mesh")
}

/// Single rectangular tower, the simple benchmark structure.
pub fn simple_tower<T: Scalar>() -> TriangleMesh<T> {
    box_mesh(Vec3::zero(), Vec3::new(lit(150.0), lit(210.0), lit(231.0)))
}

/// Footprint and height of the twin-tower benchmark.
pub const TWIN_TOWER_SIZE: [f64; 3] = [119.14, 242.61, 669.75];
/// Depth (y) of each block of the twin tower.
pub const TWIN_BLOCK_DEPTH: f64 = 70.0;
/// Vertical span of the connecting bridge.
pub const TWIN_BRIDGE_Z: [f64; 2] = [310.0, 370.0];

/// Two blocks joined by a bridge at mid-height.
///
/// Overall extent matches [`TWIN_TOWER_SIZE`]; the blocks are separated by a
/// gap of about 103 m in y and the bridge is 40 m wide in x.
pub fn twin_tower<T: Scalar>() -> TriangleMesh<T> {
    let [sx, sy, sz] = TWIN_TOWER_SIZE;
    let depth = TWIN_BLOCK_DEPTH;
    let v = |x: f64, y: f64, z: f64| Vec3::new(lit(x), lit(y), lit(z));
    let bridge_x0 = sx * 0.5 - 20.0;
    let bridge_x1 = sx * 0.5 + 20.0;
    union_of_boxes(&[
        Aabb::new(v(0.0, 0.0, 0.0), v(sx, depth, sz)),
        Aabb::new(v(0.0, sy - depth, 0.0), v(sx, sy, sz)),
        Aabb::new(v(bridge_x0, depth, TWIN_BRIDGE_Z[0]), v(bridge_x1, sy - depth, TWIN_BRIDGE_Z[1])),
    ])
}

/// Latitude-longitude sphere, used as a convex curved fixture.
pub fn uv_sphere<T: Scalar>(center: Vec3<T>, radius: T, stacks: usize, slices: usize) -> TriangleMesh<T> {
    assert!(stacks >= 2 && slices >= 3);
    let pi = T::PI();
    let mut vertices = vec![center + Vec3::new(T::zero(), T::zero(), -radius)];
    for s in 1..stacks {
        let phi = -pi * lit(0.5) + pi * from_usize::<T>(s) / from_usize::<T>(stacks);
        for k in 0..slices {
            let theta = (pi + pi) * from_usize::<T>(k) / from_usize::<T>(slices);
            vertices.push(
                center + Vec3::new(radius * phi.cos() * theta.cos(), radius * phi.cos() * theta.sin(), radius * phi.sin()),
            );
        }
    }
    vertices.push(center + Vec3::new(T::zero(), T::zero(), radius));
    let top = vertices.len() - 1;
    let ring = |s: usize, k: usize| 1 + (s - 1) * slices + (k % slices);
    let mut triangles = Vec::new();
    for k in 0..slices {
        triangles.push([0, ring(1, k + 1), ring(1, k)]);
        triangles.push([top, ring(stacks - 1, k), ring(stacks - 1, k + 1)]);
    }
    for s in 1..stacks - 1 {
        for k in 0..slices {
            triangles.push([ring(s, k), ring(s, k + 1), ring(s + 1, k + 1)]);
            triangles.push([ring(s, k), ring(s + 1, k + 1), ring(s + 1, k)]);
        }
    }
    TriangleMesh::new(vertices, triangles).expect("sphere is a valid mesh")
}
