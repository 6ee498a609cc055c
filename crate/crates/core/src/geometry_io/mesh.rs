use std::collections::{HashMap, HashSet};

use crate::error::{PlanError, Result};
use crate::geom::{Aabb, Vec3};
use crate::scalar::{lit, Scalar};

/// Default distance below which two vertices are merged.
pub const DEFAULT_WELD_TOL: f64 = 1e-6;
/// Default area below which a triangle counts as degenerate.
pub const DEFAULT_MIN_AREA: f64 = 1e-9;

/// Indexed triangle mesh of the inspected structure.
///
/// Construction checks that every index is in range and every coordinate is
/// finite. The bounding box covers referenced vertices only.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh<T> {
    vertices: Vec<Vec3<T>>,
    triangles: Vec<[usize; 3]>,
    bbox: Aabb<T>,
}

impl<T: Scalar> TriangleMesh<T> {
    pub fn new(vertices: Vec<Vec3<T>>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(PlanError::EmptyMesh);
        }
        if let Some(v) = vertices.iter().find(|v| !v.is_finite()) {
            return Err(PlanError::MalformedFile(format!("non-finite vertex {v:?}")));
        }
        let n = vertices.len();
        if let Some(t) = triangles.iter().find(|t| t.iter().any(|&i| i >= n)) {
            return Err(PlanError::MalformedFile(format!(
                "triangle {t:?} references a vertex outside 0..{n}"
            )));
        }
        let bbox = Aabb::from_points(triangles.iter().flatten().map(|&i| vertices[i]))
            .expect("non-empty triangle list");
        Ok(Self {
            vertices,
            triangles,
            bbox,
        })
    }

    /// Builds an unwelded mesh from a triangle soup (three fresh vertices per triangle).
    pub fn from_soup(soup: &[[Vec3<T>; 3]]) -> Result<Self> {
        let vertices = soup.iter().flatten().copied().collect();
        let triangles = (0..soup.len()).map(|i| [3 * i, 3 * i + 1, 3 * i + 2]).collect();
        Self::new(vertices, triangles)
    }

    pub fn vertices(&self) -> &[Vec3<T>] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn bbox(&self) -> Aabb<T> {
        self.bbox
    }

    pub fn triangle(&self, i: usize) -> [Vec3<T>; 3] {
        let [a, b, c] = self.triangles[i];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn triangle_area(&self, i: usize) -> T {
        let [a, b, c] = self.triangle(i);
        (b - a).cross(c - a).norm() * lit(0.5)
    }

    /// Uniformly scales all coordinates about the origin (unit conversion).
    pub fn scaled(&self, factor: T) -> Result<Self> {
        if !(factor > T::zero()) || !factor.is_finite() {
            return Err(PlanError::param("scale", format!("must be positive, got {factor}")));
        }
        Self::new(
            self.vertices.iter().map(|&v| v * factor).collect(),
            self.triangles.clone(),
        )
    }

    /// Converts the mesh to another scalar type.
    pub fn cast<U: Scalar>(&self) -> TriangleMesh<U> {
        TriangleMesh::new(
            self.vertices.iter().map(|v| v.cast()).collect(),
            self.triangles.clone(),
        )
        .expect("casting preserves validity")
    }
}

/// Welds vertices within `weld_tol`, drops zero-area and duplicate triangles,
/// and removes unreferenced vertices.
///
/// Welding is greedy in vertex order: a vertex joins the lowest-indexed
/// representative within `weld_tol`, otherwise it becomes a representative.
/// Representatives are therefore pairwise farther apart than `weld_tol`, which
/// makes the operation idempotent.
pub fn preprocess<T: Scalar>(mesh: &TriangleMesh<T>, weld_tol: T, min_area: T) -> Result<TriangleMesh<T>> {
    let (reps, remap) = weld(&mesh.vertices, weld_tol);

    let mut seen = HashSet::new();
    let mut triangles = Vec::with_capacity(mesh.triangles.len());
    for t in &mesh.triangles {
        let t = [remap[t[0]], remap[t[1]], remap[t[2]]];
        if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            continue;
        }
        let [a, b, c] = [reps[t[0]], reps[t[1]], reps[t[2]]];
        let area = (b - a).cross(c - a).norm() * lit(0.5);
        if !(area >= min_area) || area == T::zero() {
            continue;
        }
        let mut key = t;
        key.sort_unstable();
        if seen.insert(key) {
            triangles.push(t);
        }
    }
    if triangles.is_empty() {
        return Err(PlanError::EmptyMesh);
    }

    // compact, keeping representative order
    let mut used = vec![false; reps.len()];
    for &i in triangles.iter().flatten() {
        used[i] = true;
    }
    let mut new_index = vec![usize::MAX; reps.len()];
    let mut vertices = Vec::new();
    for (i, v) in reps.iter().enumerate() {
        if used[i] {
            new_index[i] = vertices.len();
            vertices.push(*v);
        }
    }
    for t in &mut triangles {
        for i in t.iter_mut() {
            *i = new_index[*i];
        }
    }
    TriangleMesh::new(vertices, triangles)
}

fn weld<T: Scalar>(vertices: &[Vec3<T>], tol: T) -> (Vec<Vec3<T>>, Vec<usize>) {
    let mut reps: Vec<Vec3<T>> = Vec::new();
    let mut remap = Vec::with_capacity(vertices.len());

    if !(tol > T::zero()) {
        let mut exact: HashMap<[u64; 3], usize> = HashMap::new();
        for v in vertices {
            let key = [bits(v.x), bits(v.y), bits(v.z)];
            let id = *exact.entry(key).or_insert_with(|| {
                reps.push(*v);
                reps.len() - 1
            });
            remap.push(id);
        }
        return (reps, remap);
    }

    let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    for v in vertices {
        let cell = cell_of(*v, tol);
        let mut best: Option<usize> = None;
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let key = [cell[0] + dx, cell[1] + dy, cell[2] + dz];
                    if let Some(ids) = grid.get(&key) {
                        for &id in ids {
                            if reps[id].distance(*v) <= tol && best.is_none_or(|b| id < b) {
                                best = Some(id);
                            }
                        }
                    }
                }
            }
        }
        let id = match best {
            Some(id) => id,
            None => {
                reps.push(*v);
                let id = reps.len() - 1;
                grid.entry(cell).or_default().push(id);
                id
            }
        };
        remap.push(id);
    }
    (reps, remap)
}

fn bits<T: Scalar>(x: T) -> u64 {
    // +0.0 and -0.0 must weld together
    let x = x.to_f64().unwrap_or(f64::NAN);
    if x == 0.0 {
        0
    } else {
        x.to_bits()
    }
}

fn cell_of<T: Scalar>(v: Vec3<T>, tol: T) -> [i64; 3] {
    let c = |x: T| (x / tol).floor().to_i64().unwrap_or(if x > T::zero() { i64::MAX / 2 } else { i64::MIN / 2 });
    [c(v.x), c(v.y), c(v.z)]
}
