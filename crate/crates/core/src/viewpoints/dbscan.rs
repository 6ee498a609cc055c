//! Density-based clustering of planar points.
//!
//! Classic DBSCAN: a point with at least `min_pts` points (itself included)
//! within `eps` is a core point; clusters grow through core points and absorb
//! border points. Neighbor queries use a uniform grid of cell size `eps`.

use std::collections::HashMap;

use crate::scalar::Scalar;

/// Cluster label per point; `None` marks noise. Labels are numbered in order of
/// discovery, scanning points by index.
pub fn dbscan<T: Scalar>(points: &[[T; 2]], eps: T, min_pts: usize) -> Vec<Option<usize>> {
    let n = points.len();
    let mut labels: Vec<Option<usize>> = vec![None; n];
    if n == 0 || !(eps > T::zero()) {
        return labels;
    }
    let cell = |p: [T; 2]| {
        (
            (p[0] / eps).floor().to_i64().unwrap_or(0),
            (p[1] / eps).floor().to_i64().unwrap_or(0),
        )
    };
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, &p) in points.iter().enumerate() {
        grid.entry(cell(p)).or_default().push(i);
    }
    let eps2 = eps * eps;
    let neighbors = |i: usize, out: &mut Vec<usize>| {
        out.clear();
        let p = points[i];
        let (cx, cy) = cell(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = grid.get(&(cx + dx, cy + dy)) {
                    for &j in ids {
                        let (ex, ey) = (points[j][0] - p[0], points[j][1] - p[1]);
                        if ex * ex + ey * ey <= eps2 {
                            out.push(j);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
    };

    let mut visited = vec![false; n];
    let mut buf = Vec::new();
    let mut next_label = 0;
    for i in 0..n {
        if visited[i] {
            continue;
        }
        visited[i] = true;
        neighbors(i, &mut buf);
        if buf.len() < min_pts {
            continue;
        }
        let label = next_label;
        next_label += 1;
        labels[i] = Some(label);
        let mut queue: Vec<usize> = buf.clone();
        let mut head = 0;
        while head < queue.len() {
            let j = queue[head];
            head += 1;
            if labels[j].is_none() {
                labels[j] = Some(label);
            }
            if visited[j] {
                continue;
            }
            visited[j] = true;
            neighbors(j, &mut buf);
            if buf.len() >= min_pts {
                queue.extend(buf.iter().copied().filter(|&k| !visited[k] || labels[k].is_none()));
            }
        }
    }
    labels
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Connected components of the eps-graph restricted to core points, with
    /// border points attached; brute force O(n²).
    fn brute_force_core_components(points: &[[f64; 2]], eps: f64, min_pts: usize) -> Vec<Option<usize>> {
        let n = points.len();
        let near = |i: usize, j: usize| {
            let (dx, dy) = (points[i][0] - points[j][0], points[i][1] - points[j][1]);
            dx * dx + dy * dy <= eps * eps
        };
        let core: Vec<bool> = (0..n).map(|i| (0..n).filter(|&j| near(i, j)).count() >= min_pts).collect();
        let mut comp = vec![None; n];
        let mut c = 0;
        for s in 0..n {
            if !core[s] || comp[s].is_some() {
                continue;
            }
            let mut stack = vec![s];
            comp[s] = Some(c);
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    if core[j] && comp[j].is_none() && near(i, j) {
                        comp[j] = Some(c);
                        stack.push(j);
                    }
                }
            }
            c += 1;
        }
        comp
    }

    #[test]
    fn two_blobs_and_noise() {
        let mut pts = Vec::new();
        for i in 0..10 {
            pts.push([i as f64, 0.0]);
            pts.push([100.0 + i as f64, 0.0]);
        }
        pts.push([50.0, 50.0]);
        let l = dbscan(&pts, 1.5, 3);
        assert_eq!(l[0], Some(0));
        assert_eq!(l[1], Some(1));
        assert_eq!(l[20], None);
        assert!(l.iter().step_by(2).take(10).all(|&x| x == Some(0)));
    }

    #[test]
    fn empty_input() {
        assert!(dbscan::<f64>(&[], 1.0, 3).is_empty());
    }

    proptest! {
        #[test]
        fn core_points_match_brute_force(
            pts in prop::collection::vec((0.0f64..50.0, 0.0f64..50.0), 1..60),
            eps in 1.0f64..10.0,
            min_pts in 1usize..5,
        ) {
            let pts: Vec<[f64; 2]> = pts.into_iter().map(|(x, y)| [x, y]).collect();
            let got = dbscan(&pts, eps, min_pts);
            let want = brute_force_core_components(&pts, eps, min_pts);
            // core points: same partition (labels may be permuted)
            let mut map = HashMap::new();
            for (g, w) in got.iter().zip(&want) {
                if let Some(w) = w {
                    let g = g.expect("core point labelled");
                    prop_assert_eq!(*map.entry(*w).or_insert(g), g);
                }
            }
            let distinct: std::collections::HashSet<_> = map.values().collect();
            prop_assert_eq!(distinct.len(), map.len());
        }
    }
}
