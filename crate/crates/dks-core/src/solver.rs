//! The q-random coordinate constrained descent loops.
//!
//! One iteration samples q coordinates uniformly, solves the restricted
//! subproblem over them (quadratic proximal for rcc1, linear for rcc2), and
//! writes the solution back — non-improving moves are accepted. A run stops
//! at the iteration budget, at the first integer point, or (rcc1 only) when
//! two consecutive objective values differ by less than `obj_tol`.
//! [`run`] orchestrates restarts from fresh initial points and tracks the
//! best relaxation bound and the best integer solution across them.

use std::fmt;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{induced_edge_count, Graph, GraphError};
use crate::objective::DEFAULT_REFRESH_EVERY;
use crate::objective::{full_evaluate, stable_sum, FeasiblePoint, ObjectiveCache, ObjectiveError};
use crate::scalar::{cast, Scalar};
use crate::subproblem::{
    proximal_weights, solve_linear, solve_quadratic, SubproblemError, SubproblemInstance,
    WeightMode, DEFAULT_WEIGHT_FLOOR,
};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("k = {k} outside the valid range 3..={max} for n = {n}")]
    InvalidK { k: usize, n: usize, max: usize },
    #[error("q = {q} outside the valid range 2..={n}")]
    InvalidQ { q: usize, n: usize },
    #[error("max_restarts must be at least 1")]
    NoRestartBudget,
    #[error("initial point was built for k = {x0_k}, config expects k = {cfg_k}")]
    KMismatch { x0_k: usize, cfg_k: usize },
    #[error("best value must be positive, got {0}")]
    NonPositiveBest(f64),
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
    #[error(transparent)]
    Subproblem(#[from] SubproblemError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Which restricted subproblem drives the update.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    /// Separable quadratic proximal subproblem (water-filling).
    Rcc1,
    /// Linear subproblem (continuous knapsack).
    Rcc2,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Rcc1 => write!(f, "rcc1"),
            Algorithm::Rcc2 => write!(f, "rcc2"),
        }
    }
}

/// Initial-point policy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitKind {
    /// Random feasible point below [`AUTO_RANDOM_INIT_LIMIT`] vertices,
    /// uniform k/n above.
    Auto,
    /// Uniform sample of the box projected onto the capped simplex.
    RandomSimplex,
    /// All coordinates k/n.
    UniformKOverN,
}

/// Above this vertex count `InitKind::Auto` switches from random feasible
/// starting points to the uniform k/n vector.
pub const AUTO_RANDOM_INIT_LIMIT: usize = 1 << 13;

/// Why a single descent run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TerminationReason {
    MaxIters,
    IntegerPointFound,
    /// Two consecutive objective values within `obj_tol` (rcc1 only).
    ObjectiveStalled,
}

impl fmt::Display for TerminationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TerminationReason::MaxIters => write!(f, "max_iters"),
            TerminationReason::IntegerPointFound => write!(f, "integer_point_found"),
            TerminationReason::ObjectiveStalled => write!(f, "objective_stalled"),
        }
    }
}

/// Full solver configuration for one experiment.
#[derive(Clone, Debug)]
pub struct SolverConfig<T> {
    pub algorithm: Algorithm,
    pub k: usize,
    pub q: usize,
    pub max_iters: usize,
    pub max_restarts: usize,
    /// Stall tolerance on consecutive objective values (rcc1 only).
    pub obj_tol: T,
    /// Distance from 0/1 below which a coordinate counts as integral.
    pub int_tol: T,
    pub seed: u64,
    pub init: InitKind,
    pub weight_mode: WeightMode<T>,
    pub weight_floor: T,
    /// Updates between full recomputes of the objective cache.
    pub refresh_every: usize,
}

impl<T: Scalar> SolverConfig<T> {
    pub fn new(algorithm: Algorithm, k: usize, q: usize) -> Self {
        SolverConfig {
            algorithm,
            k,
            q,
            max_iters: 1000,
            max_restarts: 1,
            obj_tol: cast(1e-7),
            int_tol: cast(1e-6),
            seed: 0,
            init: InitKind::Auto,
            weight_mode: WeightMode::Degree,
            weight_floor: cast(DEFAULT_WEIGHT_FLOOR),
            refresh_every: DEFAULT_REFRESH_EVERY,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_budget(mut self, max_iters: usize, max_restarts: usize) -> Self {
        self.max_iters = max_iters;
        self.max_restarts = max_restarts;
        self
    }

    pub fn with_init(mut self, init: InitKind) -> Self {
        self.init = init;
        self
    }

    pub fn validate(&self, g: &Graph) -> Result<(), SolverError> {
        let n = g.n();
        if n < 5 || self.k < 3 || self.k > n - 2 {
            return Err(SolverError::InvalidK {
                k: self.k,
                n,
                max: n.saturating_sub(2),
            });
        }
        if self.q < 2 || self.q > n {
            return Err(SolverError::InvalidQ { q: self.q, n });
        }
        if self.max_restarts == 0 {
            return Err(SolverError::NoRestartBudget);
        }
        Ok(())
    }
}

/// Report of a full multi-restart run.
#[derive(Clone, Debug)]
pub struct RunReport<T> {
    /// Best relaxation objective seen at any iterate of any restart.
    pub best_bound: T,
    /// Best integer objective 2·|E(S)| over the rounded candidates.
    pub best_integer_value: Option<T>,
    /// Vertex set attaining `best_integer_value` (internal ids, sorted).
    pub best_vertex_set: Option<Vec<u32>>,
    /// Restart index that produced the best integer value.
    pub best_restart: Option<usize>,
    pub iterations_total: usize,
    pub restarts_used: usize,
    pub wall_time_seconds: f64,
    /// Termination reason of each restart, in order.
    pub termination: Vec<TerminationReason>,
    /// True iff the best integer value equals k(k−1), i.e. the solution is
    /// a clique and therefore provably optimal.
    pub is_clique_certified: bool,
}

/// Deterministic per-restart seed stream (splitmix64 over (seed, index)).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Builds a feasible starting point.
///
/// `RandomSimplex` draws n independent uniforms and projects them onto the
/// capped simplex by running the water-filling subproblem over all n
/// coordinates with unit proximal weights.
pub fn initial_point<T: Scalar, R: Rng>(
    n: usize,
    k: usize,
    init: InitKind,
    rng: &mut R,
) -> Result<FeasiblePoint<T>, SolverError> {
    let resolved = match init {
        InitKind::Auto => {
            if n <= AUTO_RANDOM_INIT_LIMIT {
                InitKind::RandomSimplex
            } else {
                InitKind::UniformKOverN
            }
        }
        other => other,
    };
    match resolved {
        InitKind::UniformKOverN => Ok(FeasiblePoint::uniform(n, k)),
        InitKind::RandomSimplex => {
            // sampling f64 keeps the stream identical across scalar types
            let sample: Vec<T> = (0..n).map(|_| cast(rng.random::<f64>())).collect();
            let inst = SubproblemInstance::quadratic(
                sample,
                vec![T::zero(); n],
                vec![T::one(); n],
                cast(k as f64),
            );
            let res = solve_quadratic(&inst)?;
            Ok(FeasiblePoint::new(res.values, k)?)
        }
        InitKind::Auto => unreachable!(),
    }
}

/// Uniform q-subset sampler with a persistent permutation buffer, so each
/// draw costs O(q) regardless of n.
#[derive(Clone, Debug)]
pub struct CoordinateSampler {
    perm: Vec<u32>,
}

impl CoordinateSampler {
    pub fn new(n: usize) -> Self {
        CoordinateSampler {
            perm: (0..n as u32).collect(),
        }
    }

    /// Draws q distinct coordinates, uniformly among all q-subsets
    /// (partial Fisher–Yates over the persistent permutation).
    pub fn sample<R: Rng>(&mut self, q: usize, rng: &mut R, out: &mut Vec<u32>) {
        let n = self.perm.len();
        debug_assert!(q <= n);
        out.clear();
        for i in 0..q {
            let j = rng.random_range(i..n);
            self.perm.swap(i, j);
            out.push(self.perm[i]);
        }
    }
}

/// One-shot convenience wrapper around [`CoordinateSampler`].
pub fn sample_coordinates<R: Rng>(n: usize, q: usize, rng: &mut R) -> Vec<u32> {
    let mut sampler = CoordinateSampler::new(n);
    let mut out = Vec::with_capacity(q);
    sampler.sample(q, rng, &mut out);
    out
}

/// A single descent run driven one iteration at a time.
///
/// [`run_single`] wraps this with the stopping rules; tests drive `step`
/// directly to observe per-iteration state.
pub struct DescentRun<'a, T> {
    graph: &'a Graph,
    algorithm: Algorithm,
    q: usize,
    int_tol: T,
    weights: &'a [T],
    cache: ObjectiveCache<T>,
    rng: ChaCha8Rng,
    sampler: CoordinateSampler,
    block: Vec<u32>,
    best_bound: T,
    iterations: usize,
}

impl<'a, T: Scalar> DescentRun<'a, T> {
    pub fn new(
        graph: &'a Graph,
        cfg: &SolverConfig<T>,
        weights: &'a [T],
        x0: &FeasiblePoint<T>,
        rng: ChaCha8Rng,
    ) -> Result<Self, SolverError> {
        if x0.k() != cfg.k {
            return Err(SolverError::KMismatch {
                x0_k: x0.k(),
                cfg_k: cfg.k,
            });
        }
        if cfg.q < 2 || cfg.q > graph.n() {
            return Err(SolverError::InvalidQ {
                q: cfg.q,
                n: graph.n(),
            });
        }
        let cache = full_evaluate(graph, x0)?.with_refresh_every(cfg.refresh_every);
        let best_bound = cache.value();
        Ok(DescentRun {
            graph,
            algorithm: cfg.algorithm,
            q: cfg.q,
            int_tol: cfg.int_tol,
            weights,
            cache,
            rng,
            sampler: CoordinateSampler::new(graph.n()),
            block: Vec::with_capacity(cfg.q),
            best_bound,
            iterations: 0,
        })
    }

    #[inline]
    pub fn cache(&self) -> &ObjectiveCache<T> {
        &self.cache
    }

    #[inline]
    pub fn value(&self) -> T {
        self.cache.value()
    }

    #[inline]
    pub fn best_bound(&self) -> T {
        self.best_bound
    }

    #[inline]
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// True when every coordinate is within `int_tol` of 0 or 1 and the
    /// rounded coordinates sum to k.
    pub fn is_integer_point(&self) -> bool {
        let mut ones = 0usize;
        let half = cast::<T>(0.5);
        for &v in self.cache.coords() {
            let (nearest, dist) = if v >= half {
                (1usize, (v - T::one()).abs())
            } else {
                (0usize, v.abs())
            };
            if dist > self.int_tol {
                return false;
            }
            ones += nearest;
        }
        ones == self.cache.k()
    }

    /// Runs one iteration: sample a block, solve the restricted subproblem,
    /// apply the update. Returns the new objective value.
    pub fn step(&mut self) -> Result<T, SolverError> {
        let q = self.q;
        let mut block = std::mem::take(&mut self.block);
        self.sampler.sample(q, &mut self.rng, &mut block);
        // ascending order makes the knapsack tie-break global, not
        // block-positional, so runs are reproducible coordinate-wise
        block.sort_unstable();

        let gradient = self.cache.partial_gradient(&block)?;
        let current: Vec<T> = block
            .iter()
            .map(|&j| self.cache.coords()[j as usize])
            .collect();
        // the budget the untouched coordinates leave for the block
        let target = stable_sum(&current);

        let result = match self.algorithm {
            Algorithm::Rcc2 => {
                let inst = SubproblemInstance::linear(gradient, current, target);
                solve_linear(&inst)?
            }
            Algorithm::Rcc1 => {
                let weights: Vec<T> = block.iter().map(|&j| self.weights[j as usize]).collect();
                let inst = SubproblemInstance::quadratic(gradient, current, weights, target);
                solve_quadratic(&inst)?
            }
        };

        self.cache
            .apply_update(self.graph, &block, &result.values)?;
        self.block = block;
        self.iterations += 1;
        if self.cache.value() > self.best_bound {
            self.best_bound = self.cache.value();
        }
        Ok(self.cache.value())
    }
}

/// Outcome of one restart.
#[derive(Clone, Debug)]
pub struct SingleRunOutcome<T> {
    pub point: FeasiblePoint<T>,
    pub termination: TerminationReason,
    pub iterations: usize,
    pub best_bound: T,
}

fn run_single_inner<T: Scalar>(
    g: &Graph,
    cfg: &SolverConfig<T>,
    weights: &[T],
    x0: &FeasiblePoint<T>,
    rng: ChaCha8Rng,
) -> Result<SingleRunOutcome<T>, SolverError> {
    let mut run = DescentRun::new(g, cfg, weights, x0, rng)?;
    let mut termination = TerminationReason::MaxIters;
    for _ in 0..cfg.max_iters {
        if run.is_integer_point() {
            termination = TerminationReason::IntegerPointFound;
            break;
        }
        let previous = run.value();
        let value = run.step()?;
        if cfg.algorithm == Algorithm::Rcc1 && (value - previous).abs() < cfg.obj_tol {
            termination = TerminationReason::ObjectiveStalled;
            break;
        }
    }
    if termination == TerminationReason::MaxIters && run.is_integer_point() {
        termination = TerminationReason::IntegerPointFound;
    }
    let iterations = run.iterations();
    let best_bound = run.best_bound();
    let point = run.cache().to_point()?;
    Ok(SingleRunOutcome {
        point,
        termination,
        iterations,
        best_bound,
    })
}

/// Runs one descent from `x0` with the stopping rules of `cfg`.
///
/// The coordinate-sampling stream is seeded from `cfg.seed` directly; use
/// [`run`] for the multi-restart orchestration.
pub fn run_single<T: Scalar>(
    g: &Graph,
    cfg: &SolverConfig<T>,
    x0: &FeasiblePoint<T>,
) -> Result<SingleRunOutcome<T>, SolverError> {
    cfg.validate(g)?;
    let weights = proximal_weights(g, cfg.weight_mode, cfg.weight_floor);
    let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    run_single_inner(g, cfg, &weights, x0, rng)
}

/// Extracts an integer candidate from a fractional point: the k coordinates
/// with the largest values, ties broken by higher degree, then lower index.
pub fn round_to_integer<T: Scalar>(g: &Graph, x: &[T], k: usize) -> Vec<u32> {
    let mut order: Vec<u32> = (0..x.len() as u32).collect();
    order.sort_by(|&a, &b| {
        let (a, b) = (a as usize, b as usize);
        x[b].partial_cmp(&x[a])
            .expect("coordinates are finite")
            .then_with(|| g.degree(b).cmp(&g.degree(a)))
            .then_with(|| a.cmp(&b))
    });
    let mut set: Vec<u32> = order[..k.min(x.len())].to_vec();
    set.sort_unstable();
    set
}

/// (best − found) / best · 100.
pub fn percent_deviation<T: Scalar>(best_value: T, found_value: T) -> Result<T, SolverError> {
    if best_value <= T::zero() {
        return Err(SolverError::NonPositiveBest(best_value.to_f64_lossy()));
    }
    Ok((best_value - found_value) / best_value * cast(100.0))
}

/// Full multi-restart solve: up to `max_restarts` descents from fresh
/// initial points, early-stopped once the clique certificate k(k−1) is hit.
pub fn run<T: Scalar>(g: &Graph, cfg: &SolverConfig<T>) -> Result<RunReport<T>, SolverError> {
    cfg.validate(g)?;
    let started = Instant::now();
    let weights = proximal_weights(g, cfg.weight_mode, cfg.weight_floor);
    let clique_value = cast::<T>((cfg.k * (cfg.k - 1)) as f64);

    let mut best_bound = T::neg_infinity();
    let mut best_integer_value: Option<T> = None;
    let mut best_vertex_set: Option<Vec<u32>> = None;
    let mut best_restart: Option<usize> = None;
    let mut termination = Vec::new();
    let mut iterations_total = 0usize;
    let mut restarts_used = 0usize;

    for restart in 0..cfg.max_restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, restart as u64));
        let x0 = initial_point::<T, _>(g.n(), cfg.k, cfg.init, &mut rng)?;
        let outcome = run_single_inner(g, cfg, &weights, &x0, rng)?;

        restarts_used += 1;
        iterations_total += outcome.iterations;
        termination.push(outcome.termination);
        if outcome.best_bound > best_bound {
            best_bound = outcome.best_bound;
        }

        let set = round_to_integer(g, outcome.point.coords(), cfg.k);
        let value = cast::<T>(2.0 * induced_edge_count(g, &set)? as f64);
        if value > best_bound {
            // an integer candidate is itself a feasible point of the relaxation
            best_bound = value;
        }
        if best_integer_value.is_none_or(|cur| value > cur) {
            best_integer_value = Some(value);
            best_vertex_set = Some(set);
            best_restart = Some(restart);
        }
        if best_integer_value == Some(clique_value) {
            break; // provably optimal, spare the remaining restarts
        }
    }

    Ok(RunReport {
        best_bound,
        best_integer_value,
        best_vertex_set,
        best_restart,
        iterations_total,
        restarts_used,
        wall_time_seconds: started.elapsed().as_secs_f64(),
        termination,
        is_clique_certified: best_integer_value == Some(clique_value),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GeneratorSpec};

    fn k5() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            for j in (i + 1)..5 {
                edges.push((i, j));
            }
        }
        Graph::from_edges(5, &edges).unwrap()
    }

    #[test]
    fn uniform_initial_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p = initial_point::<f64, _>(4, 3, InitKind::UniformKOverN, &mut rng).unwrap();
        assert_eq!(p.coords(), &[0.75, 0.75, 0.75, 0.75]);
    }

    #[test]
    fn random_initial_point_is_feasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for k in [3usize, 10, 60] {
            let p = initial_point::<f64, _>(64, k, InitKind::RandomSimplex, &mut rng).unwrap();
            let sum: f64 = p.coords().iter().sum();
            assert!((sum - k as f64).abs() <= 1e-9);
            assert!(p.coords().iter().all(|&v| (0.0..=1.0).contains(&v)));
        }
    }

    #[test]
    fn auto_init_switches_on_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let small = initial_point::<f64, _>(16, 4, InitKind::Auto, &mut rng).unwrap();
        assert!(small.coords().iter().any(|&v| v != small.coords()[0]));
        let big = initial_point::<f64, _>(AUTO_RANDOM_INIT_LIMIT + 1, 4, InitKind::Auto, &mut rng)
            .unwrap();
        assert!(big.coords().iter().all(|&v| v == big.coords()[0]));
    }

    #[test]
    fn sampler_q_equals_n_returns_everything() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = sample_coordinates(9, 9, &mut rng);
        s.sort_unstable();
        assert_eq!(s, (0..9).collect::<Vec<u32>>());
    }

    #[test]
    fn sampler_is_deterministic_for_fixed_seed() {
        let a = sample_coordinates(50, 7, &mut ChaCha8Rng::seed_from_u64(5));
        let b = sample_coordinates(50, 7, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
    }

    #[test]
    fn sampler_inclusion_frequency_matches_q_over_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut sampler = CoordinateSampler::new(20);
        let mut hits = [0u32; 20];
        let mut block = Vec::new();
        let draws = 100_000;
        for _ in 0..draws {
            sampler.sample(5, &mut rng, &mut block);
            for &j in &block {
                hits[j as usize] += 1;
            }
        }
        for (j, &h) in hits.iter().enumerate() {
            let freq = h as f64 / draws as f64;
            assert!(
                (freq - 0.25).abs() <= 0.01,
                "coordinate {j} frequency {freq}"
            );
        }
    }

    #[test]
    fn distinct_coordinates_in_every_draw() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut sampler = CoordinateSampler::new(12);
        let mut block = Vec::new();
        for _ in 0..200 {
            sampler.sample(6, &mut rng, &mut block);
            let mut sorted = block.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), 6);
        }
    }

    #[test]
    fn rcc2_on_k5_reaches_six_quickly() {
        let g = k5();
        let cfg = SolverConfig::<f64>::new(Algorithm::Rcc2, 3, 5).with_seed(2);
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(2, 0));
        let x0 = initial_point(5, 3, InitKind::RandomSimplex, &mut rng).unwrap();
        let out = run_single(&g, &cfg, &x0).unwrap();
        assert_eq!(out.termination, TerminationReason::IntegerPointFound);
        assert!(out.iterations <= 5, "took {} iterations", out.iterations);
        // every 3-subset of K5 is a triangle: the integer point scores 6
        let set = round_to_integer(&g, out.point.coords(), 3);
        assert_eq!(2 * induced_edge_count(&g, &set).unwrap(), 6);
        // the relaxation bound can only be better (on K5 it peaks interior)
        assert!(out.best_bound >= 6.0 - 1e-9);
    }

    #[test]
    fn rcc2_detects_integer_start_immediately() {
        let g = generate(&GeneratorSpec::erdos_renyi(16, 0.4, 4))
            .unwrap()
            .graph;
        let mut x = vec![0.0f64; 16];
        for v in [1usize, 3, 7, 11] {
            x[v] = 1.0;
        }
        let x0 = FeasiblePoint::new(x, 4).unwrap();
        let cfg = SolverConfig::<f64>::new(Algorithm::Rcc2, 4, 6);
        let out = run_single(&g, &cfg, &x0).unwrap();
        assert_eq!(out.termination, TerminationReason::IntegerPointFound);
        assert_eq!(out.iterations, 0);
    }

    #[test]
    fn rcc2_with_full_block_takes_gradient_top_k() {
        let g = generate(&GeneratorSpec::erdos_renyi(24, 0.3, 8))
            .unwrap()
            .graph;
        let k = 5;
        let x0 = FeasiblePoint::<f64>::uniform(24, k);
        let cache = full_evaluate(&g, &x0).unwrap();
        let mut cfg = SolverConfig::<f64>::new(Algorithm::Rcc2, k, 24).with_seed(3);
        cfg.max_iters = 1;
        let out = run_single(&g, &cfg, &x0).unwrap();
        // expected: unit mass on the k best gradient coordinates (index ties)
        let all: Vec<u32> = (0..24).collect();
        let c = cache.partial_gradient(&all).unwrap();
        let mut order: Vec<usize> = (0..24).collect();
        order.sort_by(|&a, &b| c[b].partial_cmp(&c[a]).unwrap().then(a.cmp(&b)));
        for (j, &v) in out.point.coords().iter().enumerate() {
            let expected = if order[..k].contains(&j) { 1.0 } else { 0.0 };
            assert!((v - expected).abs() <= 1e-9, "coord {j}: {v}");
        }
    }

    #[test]
    fn feasibility_preserved_across_iterations() {
        let g = generate(&GeneratorSpec::erdos_renyi(128, 0.3, 6))
            .unwrap()
            .graph;
        for algorithm in [Algorithm::Rcc1, Algorithm::Rcc2] {
            let cfg = SolverConfig::<f64>::new(algorithm, 10, 16).with_seed(11);
            let weights = proximal_weights(&g, cfg.weight_mode, cfg.weight_floor);
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(11, 0));
            let x0 = initial_point(128, 10, InitKind::RandomSimplex, &mut rng).unwrap();
            let mut run = DescentRun::new(&g, &cfg, &weights, &x0, rng).unwrap();
            for _ in 0..500 {
                run.step().unwrap();
                let sum = stable_sum(run.cache().coords());
                assert!((sum - 10.0).abs() <= 1e-9);
                assert!(run
                    .cache()
                    .coords()
                    .iter()
                    .all(|&v| (-1e-12..=1.0 + 1e-12).contains(&v)));
            }
        }
    }

    #[test]
    fn run_is_reproducible_for_fixed_seed() {
        let g = generate(&GeneratorSpec::erdos_renyi(64, 0.3, 15))
            .unwrap()
            .graph;
        let cfg = SolverConfig::<f64>::new(Algorithm::Rcc2, 6, 10)
            .with_seed(77)
            .with_budget(200, 3);
        let a = run(&g, &cfg).unwrap();
        let b = run(&g, &cfg).unwrap();
        assert_eq!(a.best_bound, b.best_bound);
        assert_eq!(a.best_integer_value, b.best_integer_value);
        assert_eq!(a.best_vertex_set, b.best_vertex_set);
        assert_eq!(a.iterations_total, b.iterations_total);
        assert_eq!(a.termination, b.termination);
    }

    #[test]
    fn planted_clique_is_recovered_and_certified() {
        let out = generate(&GeneratorSpec::planted(512, 0.25, 20, 7)).unwrap();
        let cfg = SolverConfig::<f64>::new(Algorithm::Rcc2, 20, 64)
            .with_seed(1)
            .with_budget(1000, 20);
        let report = run(&out.graph, &cfg).unwrap();
        assert_eq!(report.best_integer_value, Some(380.0));
        assert!(report.is_clique_certified);
        assert_eq!(report.best_vertex_set.unwrap(), out.planted.unwrap());
        // certificate stops the restart budget early
        assert!(report.restarts_used <= 20);
    }

    #[test]
    fn certificate_threshold_is_k_times_k_minus_one() {
        // k = 30 with a planted 30-clique: certificate value 870
        let out = generate(&GeneratorSpec::planted(200, 0.1, 30, 3)).unwrap();
        let cfg = SolverConfig::<f64>::new(Algorithm::Rcc2, 30, 40)
            .with_seed(5)
            .with_budget(800, 30);
        let report = run(&out.graph, &cfg).unwrap();
        if report.is_clique_certified {
            assert_eq!(report.best_integer_value, Some(870.0));
        } else {
            assert!(report.best_integer_value < Some(870.0));
        }
    }

    #[test]
    fn degenerate_budget_echoes_rounded_initial_point() {
        let g = generate(&GeneratorSpec::erdos_renyi(32, 0.4, 2))
            .unwrap()
            .graph;
        let mut cfg = SolverConfig::<f64>::new(Algorithm::Rcc2, 5, 8)
            .with_seed(9)
            .with_init(InitKind::UniformKOverN);
        cfg.max_iters = 0;
        cfg.max_restarts = 1;
        let report = run(&g, &cfg).unwrap();
        // uniform x0: rounding keeps the top-k by degree (value ties)
        let x0 = FeasiblePoint::<f64>::uniform(32, 5);
        let set = round_to_integer(&g, x0.coords(), 5);
        let expected = 2.0 * induced_edge_count(&g, &set).unwrap() as f64;
        assert_eq!(report.best_integer_value, Some(expected));
        assert_eq!(report.iterations_total, 0);
        assert_eq!(report.termination, vec![TerminationReason::MaxIters]);
    }

    #[test]
    fn rounding_rules() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        // plain top-k
        assert_eq!(round_to_integer(&g, &[0.9, 0.8, 0.1, 0.2], 2), vec![0, 1]);
        // 0/1 point keeps its support
        assert_eq!(round_to_integer(&g, &[0.0, 1.0, 1.0, 0.0], 2), vec![1, 2]);
        // value ties: degree decides first (deg(2)=3), then lowest index (0)
        assert_eq!(round_to_integer(&g, &[0.5, 0.5, 0.5, 0.1], 2), vec![0, 2]);
    }

    #[test]
    fn rounded_value_never_exceeds_oracle_optimum() {
        use crate::oracle::exhaustive_dks;
        for seed in 0..10u64 {
            let g = generate(&GeneratorSpec::erdos_renyi(14, 0.4, 100 + seed))
                .unwrap()
                .graph;
            let cfg = SolverConfig::<f64>::new(Algorithm::Rcc2, 4, 6)
                .with_seed(seed)
                .with_budget(100, 2);
            let report = run(&g, &cfg).unwrap();
            let best = exhaustive_dks(&g, 4).unwrap().optimum;
            assert!(report.best_integer_value.unwrap() <= 2.0 * best as f64);
        }
    }

    #[test]
    fn deviation_formula() {
        assert_eq!(percent_deviation(100.0, 100.0).unwrap(), 0.0);
        assert_eq!(percent_deviation(100.0, 98.0).unwrap(), 2.0);
        // a reported deviation of 0.90 means found ≈ 0.991·best
        let best = 5000.0f64;
        let dev = percent_deviation(best, 0.991 * best).unwrap();
        assert!((dev - 0.9).abs() <= 1e-9);
        assert!(percent_deviation(0.0, 1.0).is_err());
        assert!(percent_deviation(-3.0, 1.0).is_err());
    }

    #[test]
    fn config_validation() {
        let g = generate(&GeneratorSpec::erdos_renyi(32, 0.4, 2))
            .unwrap()
            .graph;
        let bad_k = SolverConfig::<f64>::new(Algorithm::Rcc2, 2, 8);
        assert!(matches!(run(&g, &bad_k), Err(SolverError::InvalidK { .. })));
        let bad_k_high = SolverConfig::<f64>::new(Algorithm::Rcc2, 31, 8);
        assert!(run(&g, &bad_k_high).is_err());
        let bad_q = SolverConfig::<f64>::new(Algorithm::Rcc2, 5, 1);
        assert!(matches!(run(&g, &bad_q), Err(SolverError::InvalidQ { .. })));
        let mut bad_restarts = SolverConfig::<f64>::new(Algorithm::Rcc2, 5, 8);
        bad_restarts.max_restarts = 0;
        assert!(matches!(
            run(&g, &bad_restarts),
            Err(SolverError::NoRestartBudget)
        ));
    }

    #[test]
    fn stall_only_reported_by_rcc1() {
        let g = generate(&GeneratorSpec::erdos_renyi(64, 0.5, 33))
            .unwrap()
            .graph;
        let cfg = SolverConfig::<f64>::new(Algorithm::Rcc1, 6, 8)
            .with_seed(4)
            .with_budget(5000, 2);
        let report = run(&g, &cfg).unwrap();
        // rcc1 on a uniform-degree-ish graph stalls or hits the budget
        for reason in &report.termination {
            assert_ne!(
                (
                    *reason == TerminationReason::ObjectiveStalled,
                    cfg.algorithm
                ),
                (true, Algorithm::Rcc2)
            );
        }
        let cfg2 = SolverConfig::<f64>::new(Algorithm::Rcc2, 6, 8)
            .with_seed(4)
            .with_budget(5000, 2);
        let report2 = run(&g, &cfg2).unwrap();
        assert!(report2
            .termination
            .iter()
            .all(|r| *r != TerminationReason::ObjectiveStalled));
    }

    #[test]
    fn derive_seed_spreads_indices() {
        let s = derive_seed(42, 0);
        let t = derive_seed(42, 1);
        let u = derive_seed(43, 0);
        assert_ne!(s, t);
        assert_ne!(s, u);
        assert_eq!(s, derive_seed(42, 0));
    }
}
