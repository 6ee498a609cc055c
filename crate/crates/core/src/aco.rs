//! Ant colony optimization over a [`CostMatrix`].
//!
//! Ant-system search: every iteration each ant builds a full ordering by
//! roulette selection on `τ^a·η^b`, then all pheromone trails evaporate by `ρ`
//! and every ant deposits on the edges it used.
//!
//! Ants within an iteration are built in parallel. Each ant draws from its own
//! ChaCha stream derived from `(seed, iteration, ant)` and the pheromone
//! update runs after all ants finish, so results are bit-identical to a
//! sequential run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{PlanError, Result};
use crate::pathcost::{fitness_unchecked, CostMatrix, PathKind, SquareMatrix};
use crate::scalar::{lit, Scalar};

/// Lower bound on every off-diagonal pheromone level.
pub const TAU_MIN: f64 = 1e-12;
/// Heuristic value used for zero-cost edges.
pub const ETA_MAX: f64 = 1e12;
/// Edge costs are floored at this value when computing deposits.
pub const COST_FLOOR: f64 = 1e-9;

/// How much pheromone an ant leaves on each edge of its path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DepositRule {
    /// `Q / F_ij` on each traversed edge.
    #[default]
    Edge,
    /// `Q / J_k` on each edge of ant k's path (classical ant system).
    Tour,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcoParams<T> {
    pub n_ants: usize,
    /// Pheromone exponent.
    pub alpha: T,
    /// Heuristic exponent.
    pub beta: T,
    pub q: T,
    /// Evaporation rate.
    pub rho: T,
    pub max_iterations: usize,
    pub seed: u64,
    pub tau0: T,
    pub deposit_rule: DepositRule,
    pub path_kind: PathKind,
}

impl<T: Scalar> Default for AcoParams<T> {
    fn default() -> Self {
        Self {
            n_ants: 100,
            alpha: T::one(),
            beta: T::one(),
            q: T::one(),
            rho: lit(0.05),
            max_iterations: 500,
            seed: 0,
            tau0: T::one(),
            deposit_rule: DepositRule::Edge,
            path_kind: PathKind::Open,
        }
    }
}

impl<T: Scalar> AcoParams<T> {
    pub fn validate(&self) -> Result<()> {
        if self.n_ants < 1 {
            return Err(PlanError::param("n_ants", "must be at least 1"));
        }
        if !(self.alpha >= T::zero()) || !self.alpha.is_finite() {
            return Err(PlanError::param("alpha", format!("must be >= 0, got {}", self.alpha)));
        }
        if !(self.beta >= T::zero()) || !self.beta.is_finite() {
            return Err(PlanError::param("beta", format!("must be >= 0, got {}", self.beta)));
        }
        if !(self.q > T::zero()) || !self.q.is_finite() {
            return Err(PlanError::param("q", format!("must be > 0, got {}", self.q)));
        }
        if !(self.rho > T::zero() && self.rho < T::one()) {
            return Err(PlanError::param("rho", format!("must lie in (0, 1), got {}", self.rho)));
        }
        if self.max_iterations < 1 {
            return Err(PlanError::param("max_iterations", "must be at least 1"));
        }
        if !(self.tau0 > T::zero()) || !self.tau0.is_finite() {
            return Err(PlanError::param("tau0", format!("must be > 0, got {}", self.tau0)));
        }
        Ok(())
    }
}

/// Pheromone trails and the fixed heuristic `η_ij = 1/F_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct PheromoneState<T> {
    pub tau: SquareMatrix<T>,
    pub eta: SquareMatrix<T>,
}

impl<T: Scalar> PheromoneState<T> {
    pub fn new(cm: &CostMatrix<T>, tau0: T) -> Self {
        let m = cm.size();
        let eta_max = lit::<T>(ETA_MAX);
        let mut tau = SquareMatrix::filled(m, tau0);
        let mut eta = SquareMatrix::filled(m, T::zero());
        for i in 0..m {
            tau.set(i, i, T::zero());
            for j in 0..m {
                if i != j {
                    let f = cm.get(i, j);
                    let e = if f > T::zero() { (T::one() / f).min(eta_max) } else { eta_max };
                    eta.set(i, j, e);
                }
            }
        }
        Self { tau, eta }
    }

    pub fn size(&self) -> usize {
        self.tau.size()
    }

    /// Smallest off-diagonal pheromone level.
    pub fn min_tau(&self) -> T {
        let m = self.size();
        let mut lo = T::infinity();
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    lo = lo.min(self.tau.get(i, j));
                }
            }
        }
        lo
    }
}

#[inline]
fn pow<T: Scalar>(x: T, e: T) -> T {
    if e == T::one() {
        x
    } else if e == T::zero() {
        T::one()
    } else {
        x.powf(e)
    }
}

/// `τ_ij^a · η_ij^b` for every pair, recomputed once per iteration.
fn desirability<T: Scalar>(state: &PheromoneState<T>, a: T, b: T) -> SquareMatrix<T> {
    let m = state.size();
    let mut w = SquareMatrix::filled(m, T::zero());
    let out = w.as_mut_slice();
    for (k, (t, e)) in state.tau.as_slice().iter().zip(state.eta.as_slice()).enumerate() {
        if k / m != k % m {
            out[k] = pow(*t, a) * pow(*e, b);
        }
    }
    w
}

/// Probability of moving from `current` to each node in `unvisited`, in order.
///
/// Falls back to a uniform distribution when every weight is zero or the sum
/// is not finite.
pub fn transition_probabilities<T: Scalar>(
    state: &PheromoneState<T>,
    current: usize,
    unvisited: &[usize],
    a: T,
    b: T,
) -> Result<Vec<T>> {
    if unvisited.is_empty() {
        return Err(PlanError::param("unvisited", "must not be empty"));
    }
    if unvisited.contains(&current) {
        return Err(PlanError::param("unvisited", "must not contain the current node"));
    }
    let weights: Vec<T> = unvisited
        .iter()
        .map(|&j| pow(state.tau.get(current, j), a) * pow(state.eta.get(current, j), b))
        .collect();
    let total: T = weights.iter().copied().sum();
    let n = T::from_usize(unvisited.len()).expect("count fits");
    if !(total > T::zero()) || !total.is_finite() {
        return Ok(vec![T::one() / n; unvisited.len()]);
    }
    Ok(weights.into_iter().map(|w| w / total).collect())
}

/// Random stream for one ant in one iteration.
pub fn ant_rng(seed: u64, iteration: usize, ant: usize, n_ants: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((iteration as u64).wrapping_mul(n_ants as u64).wrapping_add(ant as u64));
    rng
}

fn construct_with<T: Scalar, R: Rng + ?Sized>(weights: &SquareMatrix<T>, rng: &mut R) -> Vec<usize> {
    let m = weights.size();
    let start = rng.gen_range(0..m);
    let mut tour = Vec::with_capacity(m);
    tour.push(start);
    let mut unvisited: Vec<usize> = (0..m).filter(|&j| j != start).collect();
    let mut cur = start;
    while !unvisited.is_empty() {
        let row = weights.row(cur);
        let total: T = unvisited.iter().map(|&j| row[j]).sum();
        let pick = if total > T::zero() && total.is_finite() {
            let u = T::from_f64(rng.gen::<f64>()).expect("unit interval") * total;
            let mut acc = T::zero();
            let mut chosen = unvisited.len() - 1;
            for (k, &j) in unvisited.iter().enumerate() {
                acc = acc + row[j];
                if acc > u {
                    chosen = k;
                    break;
                }
            }
            chosen
        } else {
            rng.gen_range(0..unvisited.len())
        };
        cur = unvisited.remove(pick);
        tour.push(cur);
    }
    tour
}

/// One ant's ordering: uniform random start, then roulette steps until every
/// node is visited.
pub fn construct_tour<T: Scalar, R: Rng + ?Sized>(
    state: &PheromoneState<T>,
    cm: &CostMatrix<T>,
    params: &AcoParams<T>,
    rng: &mut R,
) -> Vec<usize> {
    debug_assert_eq!(state.size(), cm.size());
    construct_with(&desirability(state, params.alpha, params.beta), rng)
}

/// Evaporates every trail by `ρ`, then adds each ant's deposit on the edges
/// it traversed (both directions). Trails are floored at [`TAU_MIN`].
pub fn deposit_and_evaporate<T: Scalar>(
    state: &mut PheromoneState<T>,
    tours: &[(Vec<usize>, T)],
    cm: &CostMatrix<T>,
    params: &AcoParams<T>,
) {
    let m = state.size();
    let keep = T::one() - params.rho;
    for (k, t) in state.tau.as_mut_slice().iter_mut().enumerate() {
        if k / m != k % m {
            *t = *t * keep;
        }
    }
    let floor = lit::<T>(COST_FLOOR);
    for (tour, fitness) in tours {
        let per_tour = params.q / fitness.max(floor);
        let mut add = |i: usize, j: usize| {
            let amount = match params.deposit_rule {
                DepositRule::Edge => params.q / cm.get(i, j).max(floor),
                DepositRule::Tour => per_tour,
            };
            state.tau.set(i, j, state.tau.get(i, j) + amount);
            state.tau.set(j, i, state.tau.get(j, i) + amount);
        };
        for w in tour.windows(2) {
            add(w[0], w[1]);
        }
        if params.path_kind == PathKind::Closed && tour.len() > 1 {
            add(tour[tour.len() - 1], tour[0]);
        }
    }
    let tau_min = lit::<T>(TAU_MIN);
    for (k, t) in state.tau.as_mut_slice().iter_mut().enumerate() {
        if k / m != k % m && !(*t >= tau_min) {
            *t = tau_min;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcoResult<T> {
    pub best_order: Vec<usize>,
    pub best_fitness: T,
    /// Best-so-far fitness after each iteration.
    pub history: Vec<T>,
    pub iterations_run: usize,
}

/// What an observer sees at the end of each iteration.
pub struct IterationReport<'a, T> {
    /// Zero-based iteration index.
    pub iteration: usize,
    /// Trails used to build this iteration's ants.
    pub before_update: &'a PheromoneState<T>,
    /// Trails after evaporation and deposit.
    pub after_update: &'a PheromoneState<T>,
    pub tours: &'a [(Vec<usize>, T)],
    pub best_fitness: T,
}

/// Runs the colony for `max_iterations` and returns the best ordering seen.
pub fn solve<T: Scalar>(cm: &CostMatrix<T>, params: &AcoParams<T>) -> Result<AcoResult<T>> {
    solve_with_observer(cm, params, |_| {})
}

/// [`solve`] with a callback after every iteration.
pub fn solve_with_observer<T: Scalar, F>(cm: &CostMatrix<T>, params: &AcoParams<T>, mut observer: F) -> Result<AcoResult<T>>
where
    F: FnMut(&IterationReport<'_, T>),
{
    params.validate()?;
    let m = cm.size();
    if m < 2 {
        return Err(PlanError::TooFewViewpoints(m));
    }
    let mut state = PheromoneState::new(cm, params.tau0);
    let mut best: Option<(Vec<usize>, T)> = None;
    let mut history = Vec::with_capacity(params.max_iterations);

    for iteration in 0..params.max_iterations {
        let weights = desirability(&state, params.alpha, params.beta);
        let tours: Vec<(Vec<usize>, T)> = (0..params.n_ants)
            .into_par_iter()
            .map(|ant| {
                let mut rng = ant_rng(params.seed, iteration, ant, params.n_ants);
                let tour = construct_with(&weights, &mut rng);
                let f = fitness_unchecked(&tour, cm, params.path_kind);
                (tour, f)
            })
            .collect();

        for (tour, f) in &tours {
            if best.as_ref().is_none_or(|(_, bf)| *f < *bf) {
                best = Some((tour.clone(), *f));
            }
        }
        let before = state.clone();
        deposit_and_evaporate(&mut state, &tours, cm, params);
        let best_fitness = best.as_ref().expect("at least one ant").1;
        history.push(best_fitness);
        observer(&IterationReport {
            iteration,
            before_update: &before,
            after_update: &state,
            tours: &tours,
            best_fitness,
        });
    }

    let (best_order, best_fitness) = best.expect("at least one iteration");
    Ok(AcoResult {
        best_order,
        best_fitness,
        iterations_run: history.len(),
        history,
    })
}
