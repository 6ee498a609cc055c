//! Back-and-forth baseline ordering.
//!
//! Layers are swept bottom to top. Within a layer, clusters are visited in
//! ascending id and each contour is traversed completely before the next.
//! The sweep direction alternates between layers: the first non-empty layer
//! goes clockwise (seen from above), the next counter-clockwise, and so on.
//! Closed contours always start at their first viewpoint; open contours are
//! walked from the appropriate end.

use crate::error::{PlanError, Result};
use crate::pathcost::{fitness, CostMatrix, PathKind};
use crate::scalar::Scalar;
use crate::viewpoints::ViewpointSet;

/// Direction of travel around a contour, seen from above.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    Clockwise,
    CounterClockwise,
}

/// Boustrophedon ordering of `vps` and its open-path fitness.
pub fn baf_path<T: Scalar>(vps: &ViewpointSet<T>, cm: &CostMatrix<T>) -> Result<(Vec<usize>, T)> {
    baf_path_kind(vps, cm, PathKind::Open)
}

pub fn baf_path_kind<T: Scalar>(vps: &ViewpointSet<T>, cm: &CostMatrix<T>, kind: PathKind) -> Result<(Vec<usize>, T)> {
    let order = baf_order(vps)?;
    let f = fitness(&order, cm, kind)?;
    Ok((order, f))
}

/// Just the ordering, see the module docs.
pub fn baf_order<T: Scalar>(vps: &ViewpointSet<T>) -> Result<Vec<usize>> {
    let m = vps.len();
    if m < 2 {
        return Err(PlanError::TooFewViewpoints(m));
    }
    // (layer, cluster, contour) groups in stored order, members by arc
    let mut groups: Vec<((usize, usize, usize), Vec<usize>)> = Vec::new();
    for (i, v) in vps.viewpoints.iter().enumerate() {
        let key = (v.layer, v.cluster, v.contour);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(i),
            None => groups.push((key, vec![i])),
        }
    }
    for (_, members) in &mut groups {
        members.sort_by(|&a, &b| {
            vps.viewpoints[a]
                .arc
                .partial_cmp(&vps.viewpoints[b].arc)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
    }
    groups.sort_by_key(|(k, _)| *k);

    let mut order = Vec::with_capacity(m);
    let mut layer_rank = 0usize;
    let mut current_layer = None;
    for ((layer, _, contour), members) in &groups {
        if current_layer != Some(*layer) {
            if current_layer.is_some() {
                layer_rank += 1;
            }
            current_layer = Some(*layer);
        }
        let sweep = if layer_rank.is_multiple_of(2) {
            Sweep::Clockwise
        } else {
            Sweep::CounterClockwise
        };
        let closed = vps.contours.get(*contour).is_none_or(|c| c.closed);
        // stored arc order is counter-clockwise for closed contours
        match (sweep, closed) {
            (Sweep::CounterClockwise, _) => order.extend(members.iter().copied()),
            (Sweep::Clockwise, true) => {
                order.push(members[0]);
                order.extend(members[1..].iter().rev().copied());
            }
            (Sweep::Clockwise, false) => order.extend(members.iter().rev().copied()),
        }
    }
    Ok(order)
}
