//! Exhaustive search for small instances.

use crate::error::{PlanError, Result};
use crate::pathcost::{fitness_unchecked, CostMatrix, PathKind};
use crate::scalar::Scalar;

/// Largest instance the exhaustive search accepts.
pub const MAX_EXHAUSTIVE: usize = 10;

/// Optimal ordering by enumeration.
///
/// Open paths are enumerated up to reversal (first index below last), closed
/// tours up to rotation and reversal (fixed start, second below last).
pub fn exhaustive_optimum<T: Scalar>(cm: &CostMatrix<T>, kind: PathKind, limit: usize) -> Result<(Vec<usize>, T)> {
    let m = cm.size();
    let limit = limit.min(MAX_EXHAUSTIVE);
    if m > limit {
        return Err(PlanError::TooManyViewpoints { count: m, limit });
    }
    if m < 2 {
        return Err(PlanError::TooFewViewpoints(m));
    }
    let mut perm: Vec<usize> = (0..m).collect();
    let mut best = (perm.clone(), fitness_unchecked(&perm, cm, kind));
    loop {
        let canonical = match kind {
            PathKind::Open => perm[0] < perm[m - 1],
            PathKind::Closed => perm[0] == 0 && (m < 3 || perm[1] < perm[m - 1]),
        };
        if canonical {
            let f = fitness_unchecked(&perm, cm, kind);
            if f < best.1 {
                best = (perm.clone(), f);
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(best)
}

/// Advances to the next lexicographic permutation; false after the last one.
fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec3;
    use crate::pathcost::CostWeights;

    #[test]
    fn permutation_count() {
        let mut p = vec![0, 1, 2, 3];
        let mut n = 1;
        while next_permutation(&mut p) {
            n += 1;
        }
        assert_eq!(n, 24);
    }

    #[test]
    fn line_optimum_walks_the_line() {
        let pts: Vec<_> = [3.0, 0.0, 2.0, 1.0].iter().map(|&x| Vec3::new(x, 0.0, 0.0)).collect();
        let cm = CostMatrix::from_points(&pts, CostWeights::new(1.0, 2.0).unwrap()).unwrap();
        let (order, f) = exhaustive_optimum(&cm, PathKind::Open, 10).unwrap();
        assert_eq!(f, 3.0);
        assert_eq!(order, vec![0, 2, 3, 1]);
        let (_, tour) = exhaustive_optimum(&cm, PathKind::Closed, 10).unwrap();
        assert_eq!(tour, 6.0);
    }

    #[test]
    fn two_points() {
        let pts = [Vec3::new(0.0, 0.0, 0.0), Vec3::new(0.0, 0.0, 4.0)];
        let cm = CostMatrix::from_points(&pts, CostWeights::new(1.0, 2.0).unwrap()).unwrap();
        assert_eq!(exhaustive_optimum(&cm, PathKind::Open, 10).unwrap().1, 8.0);
    }

    #[test]
    fn limit_enforced() {
        let pts: Vec<_> = (0..11).map(|i| Vec3::new(i as f64, 0.0, 0.0)).collect();
        let cm = CostMatrix::from_points(&pts, CostWeights::default()).unwrap();
        assert!(matches!(
            exhaustive_optimum(&cm, PathKind::Open, 10),
            Err(PlanError::TooManyViewpoints { count: 11, limit: 10 })
        ));
    }
}
