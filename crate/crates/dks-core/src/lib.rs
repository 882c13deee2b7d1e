//! Densest k-subgraph solvers over the continuous relaxation
//! max xᵀAx s.t. Σx = k, 0 ≤ x ≤ 1.
//!
//! Two q-random coordinate constrained descent algorithms are provided:
//! rcc1 re-optimizes each sampled coordinate block through a separable
//! quadratic proximal subproblem (water-filling), rcc2 through a linear
//! one (continuous knapsack). The crate also ships seeded instance
//! generators, edge-list loaders, exact small-instance oracles, and the
//! restart orchestration that extracts and certifies integer solutions.
//!
//! The numeric modules are generic over [`Scalar`] (`f32`/`f64`); the
//! aliases at the bottom pin the default `f64` instantiation.
//!
//! ```
//! use dks_core::{generate, run, Algorithm, GeneratorSpec, SolverConfig64};
//!
//! // plant an 8-clique in G(64, 0.2) and recover it
//! let instance = generate(&GeneratorSpec::planted(64, 0.2, 8, 1)).unwrap();
//! let mut cfg = SolverConfig64::new(Algorithm::Rcc2, 8, 16).with_seed(1);
//! cfg.max_iters = 200;
//! cfg.max_restarts = 10;
//! let report = run(&instance.graph, &cfg).unwrap();
//! assert_eq!(report.best_integer_value, Some(56.0)); // 8·7, a certified clique
//! assert!(report.is_clique_certified);
//! ```

pub mod graph;
pub mod objective;
pub mod oracle;
pub mod scalar;
pub mod solver;
pub mod subproblem;

pub use graph::{
    generate, induced_edge_count, load_edge_list, load_matrix, Generated, GeneratorKind,
    GeneratorSpec, Graph, GraphError, LoadedGraph,
};
pub use objective::{full_evaluate, FeasiblePoint, ObjectiveCache, ObjectiveError};
pub use oracle::{exhaustive_dks, greedy_peel, OracleError, OracleResult};
pub use scalar::Scalar;
pub use solver::{
    initial_point, percent_deviation, round_to_integer, run, run_single, sample_coordinates,
    Algorithm, InitKind, RunReport, SolverConfig, SolverError, TerminationReason,
};
pub use subproblem::{
    proximal_weights, solve_linear, solve_quadratic, SubproblemError, SubproblemInstance,
    SubproblemResult, WeightMode,
};

/// Concrete aliases for the default double-precision instantiation.
pub type FeasiblePoint64 = FeasiblePoint<f64>;
pub type SolverConfig64 = SolverConfig<f64>;
pub type RunReport64 = RunReport<f64>;
