//! Anisotropic travel cost between viewpoints and path fitness.

use crate::error::{PlanError, Result};
use crate::geom::Vec3;
use crate::scalar::{lit, Scalar};
use crate::viewpoints::ViewpointSet;

/// Weights on horizontal and vertical travel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostWeights<T> {
    pub w1: T,
    pub w2: T,
}

impl<T: Scalar> CostWeights<T> {
    pub fn new(w1: T, w2: T) -> Result<Self> {
        let w = Self { w1, w2 };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.w1 >= T::zero()) || !self.w1.is_finite() {
            return Err(PlanError::param("w1", format!("must be finite and >= 0, got {}", self.w1)));
        }
        if !(self.w2 >= T::zero()) || !self.w2.is_finite() {
            return Err(PlanError::param("w2", format!("must be finite and >= 0, got {}", self.w2)));
        }
        if !(self.w1 + self.w2 > T::zero()) {
            return Err(PlanError::param("w1", "w1 + w2 must be positive"));
        }
        Ok(())
    }
}

impl<T: Scalar> Default for CostWeights<T> {
    fn default() -> Self {
        Self { w1: T::one(), w2: lit(2.0) }
    }
}

/// Whether fitness counts the edge back to the first viewpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathKind {
    /// Hamiltonian path, `m − 1` edges.
    #[default]
    Open,
    /// Tour that returns to its start, `m` edges.
    Closed,
}

/// `w1·‖Δxy‖ + w2·|Δz|`.
#[inline]
pub fn edge_cost<T: Scalar>(a: Vec3<T>, b: Vec3<T>, w: &CostWeights<T>) -> T {
    let d = b - a;
    w.w1 * d.norm_xy() + w.w2 * d.z.abs()
}

/// Dense row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T> {
    size: usize,
    data: Vec<T>,
}

impl<T: Copy> SquareMatrix<T> {
    pub fn filled(size: usize, value: T) -> Self {
        Self {
            size,
            data: vec![value; size * size],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.size + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.size + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.size..(i + 1) * self.size]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }
}

/// Symmetric, zero-diagonal matrix of edge costs. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix<T> {
    values: SquareMatrix<T>,
    weights: CostWeights<T>,
}

impl<T: Scalar> CostMatrix<T> {
    /// Costs between every pair of `points`.
    pub fn from_points(points: &[Vec3<T>], weights: CostWeights<T>) -> Result<Self> {
        weights.validate()?;
        if points.len() < 2 {
            return Err(PlanError::TooFewViewpoints(points.len()));
        }
        let m = points.len();
        let mut values = SquareMatrix::filled(m, T::zero());
        for i in 0..m {
            for j in (i + 1)..m {
                let c = edge_cost(points[i], points[j], &weights);
                values.set(i, j, c);
                values.set(j, i, c);
            }
        }
        Ok(Self { values, weights })
    }

    pub fn size(&self) -> usize {
        self.values.size()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values.get(i, j)
    }

    pub fn values(&self) -> &SquareMatrix<T> {
        &self.values
    }

    pub fn weights(&self) -> CostWeights<T> {
        self.weights
    }
}

/// Cost matrix over the positions of a viewpoint set.
pub fn build_cost_matrix<T: Scalar>(vps: &ViewpointSet<T>, w: CostWeights<T>) -> Result<CostMatrix<T>> {
    let pts: Vec<_> = vps.viewpoints.iter().map(|v| v.position).collect();
    CostMatrix::from_points(&pts, w)
}

/// Sum of consecutive edge costs along `order`, without validation.
#[inline]
pub(crate) fn fitness_unchecked<T: Scalar>(order: &[usize], cm: &CostMatrix<T>, kind: PathKind) -> T {
    let mut total = T::zero();
    for w in order.windows(2) {
        total = total + cm.get(w[0], w[1]);
    }
    if kind == PathKind::Closed && order.len() > 1 {
        total = total + cm.get(order[order.len() - 1], order[0]);
    }
    total
}

/// Checks that `order` visits each of `0..m` exactly once.
pub fn check_permutation(order: &[usize], m: usize) -> Result<()> {
    if order.len() != m {
        return Err(PlanError::NotAPermutation(m));
    }
    let mut seen = vec![false; m];
    for &i in order {
        if i >= m || std::mem::replace(&mut seen[i], true) {
            return Err(PlanError::NotAPermutation(m));
        }
    }
    Ok(())
}

/// Fitness `J` of an open Hamiltonian path.
pub fn path_fitness<T: Scalar>(order: &[usize], cm: &CostMatrix<T>) -> Result<T> {
    fitness(order, cm, PathKind::Open)
}

/// Fitness `J` of an open path or closed tour.
pub fn fitness<T: Scalar>(order: &[usize], cm: &CostMatrix<T>, kind: PathKind) -> Result<T> {
    check_permutation(order, cm.size())?;
    Ok(fitness_unchecked(order, cm, kind))
}
