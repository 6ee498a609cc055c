//! Offsetting slice contours outward by the working distance.

use crate::error::{PlanError, Result};
use crate::geom::Vec3;
use crate::scalar::{lit, Scalar};
use crate::viewpoints::slice::signed_area;
use crate::viewpoints::{SliceContour, Viewpoint};

/// Unit in-plane direction of `q − p`, or `None` if the points coincide in xy.
fn direction<T: Scalar>(p: Vec3<T>, q: Vec3<T>) -> Option<Vec3<T>> {
    Vec3::new(q.x - p.x, q.y - p.y, T::zero()).normalized()
}

/// Right-hand normal of a direction in the slice plane.
fn right_normal<T: Scalar>(d: Vec3<T>) -> Vec3<T> {
    Vec3::new(d.y, -d.x, T::zero())
}

/// Outward viewpoints for every contour point, with the open-contour side
/// chosen away from the contour's own centroid.
pub fn offset_contour<T: Scalar>(contour: &SliceContour<T>, d: T) -> Result<Vec<Viewpoint<T>>> {
    let c = centroid(&contour.points);
    offset_contour_from(contour, d, c)
}

pub(crate) fn centroid<T: Scalar>(points: &[Vec3<T>]) -> Vec3<T> {
    let n = T::from_usize(points.len().max(1)).expect("count fits");
    points.iter().fold(Vec3::zero(), |a, &p| a + p) / n
}

/// Places a viewpoint at distance `d` from each contour point along the
/// outward normal, heading back at the point.
///
/// The normal at a vertex bisects the normals of its two edges, so corner
/// viewpoints sit on the bisector at exactly `d`. For closed contours outward
/// follows the winding (left of travel is inside for counter-clockwise
/// contours). Open contours face away from `reference`, normally the centroid
/// of the cluster the contour belongs to.
pub fn offset_contour_from<T: Scalar>(contour: &SliceContour<T>, d: T, reference: Vec3<T>) -> Result<Vec<Viewpoint<T>>> {
    let pts = &contour.points;
    let n = pts.len();
    if n < 2 {
        return Err(PlanError::param("contour", "needs at least two points"));
    }

    let edge_count = if contour.closed { n } else { n - 1 };
    let mut edges: Vec<Vec3<T>> = Vec::with_capacity(edge_count);
    for i in 0..edge_count {
        let dir = direction(pts[i], pts[(i + 1) % n])
            .ok_or_else(|| PlanError::param("contour", "consecutive points coincide"))?;
        edges.push(dir);
    }

    let side = if contour.closed {
        let area = signed_area(pts);
        let perimeter: T = (0..n).map(|i| pts[i].distance(pts[(i + 1) % n])).sum();
        if area.abs() <= lit::<T>(1e-9) * perimeter * perimeter {
            return Err(PlanError::DegenerateContour);
        }
        if area > T::zero() {
            T::one()
        } else {
            -T::one()
        }
    } else {
        let score: T = (0..n)
            .map(|i| {
                let e = edges[i.min(edge_count - 1)];
                right_normal(e).dot(pts[i] - reference)
            })
            .sum();
        if score < T::zero() {
            -T::one()
        } else {
            T::one()
        }
    };

    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (incoming, outgoing) = if contour.closed {
            (edges[(i + n - 1) % n], edges[i])
        } else if i == 0 {
            (edges[0], edges[0])
        } else if i == n - 1 {
            (edges[n - 2], edges[n - 2])
        } else {
            (edges[i - 1], edges[i])
        };
        let bisector = right_normal(incoming) + right_normal(outgoing);
        // a hairpin turn has no bisector; face along the incoming direction
        let normal = bisector.normalized().unwrap_or(incoming) * side;
        out.push(Viewpoint {
            position: pts[i] + normal * d,
            // 0 - x rather than -x keeps negative zeros out of exported headings
            heading: Vec3::new(T::zero() - normal.x, T::zero() - normal.y, T::zero()),
            surface_point: pts[i],
            layer: 0,
            cluster: contour.cluster_id,
            contour: 0,
            arc: T::zero(),
        });
    }
    Ok(out)
}
