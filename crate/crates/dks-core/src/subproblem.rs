//! Per-iteration restricted subproblems, solved in closed form.
//!
//! Both algorithms re-optimize a random coordinate block J subject to the
//! budget r = k − Σ_{j∉J} x_j carried by the untouched coordinates:
//!
//! * the linear subproblem (continuous knapsack) maximizes
//!   Σ c_j·(u_j − x_j) over the capped-simplex slice and is solved greedily
//!   by descending coefficient, leaving at most one fractional coordinate;
//! * the quadratic subproblem adds the separable proximal term
//!   −Σ (L_j/2)(u_j − x_j)² and is solved by water-filling: bisect the dual
//!   multiplier λ through the per-coordinate clipped closed form
//!   u_j(λ) = clip(x_j + (c_j − λ)/L_j, 0, 1).
//!
//! No external LP/QP solver is involved.

use thiserror::Error;

use crate::graph::Graph;
use crate::objective::stable_sum;
use crate::scalar::{cast, Scalar};

#[derive(Debug, Error)]
pub enum SubproblemError {
    #[error("target sum {r} outside [0, {q}]")]
    TargetOutOfRange { r: f64, q: usize },
    #[error("instance fields have mismatched lengths: c {c}, x {x}, weights {w}")]
    ShapeMismatch { c: usize, x: usize, w: usize },
    #[error("proximal weight at {index} is {value}; weights must be positive")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("non-finite input at coordinate {0}")]
    NonFiniteInput(usize),
    #[error("bisection exhausted with residual {residual} and no interior coordinate")]
    BisectionStalled { residual: f64 },
}

/// One restricted subproblem over a coordinate block of size q.
#[derive(Clone, Debug)]
pub struct SubproblemInstance<T> {
    /// Partial gradient coefficients c_j = ∇_j f(x).
    pub gradient: Vec<T>,
    /// Current values x_j on the block.
    pub current: Vec<T>,
    /// Proximal weights L_j (quadratic variant; empty for linear).
    pub weights: Vec<T>,
    /// Target sum r = k − Σ_{j∉J} x_j.
    pub target_sum: T,
}

impl<T: Scalar> SubproblemInstance<T> {
    pub fn linear(gradient: Vec<T>, current: Vec<T>, target_sum: T) -> Self {
        SubproblemInstance {
            gradient,
            current,
            weights: Vec::new(),
            target_sum,
        }
    }

    pub fn quadratic(gradient: Vec<T>, current: Vec<T>, weights: Vec<T>, target_sum: T) -> Self {
        SubproblemInstance {
            gradient,
            current,
            weights,
            target_sum,
        }
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.gradient.len()
    }
}

/// Solution of a restricted subproblem.
#[derive(Clone, Debug)]
pub struct SubproblemResult<T> {
    /// New coordinate values over the block.
    pub values: Vec<T>,
    /// Equality-constraint multiplier (quadratic variant only).
    pub dual: Option<T>,
    /// Coordinates at the lower box bound.
    pub n_lower: usize,
    /// Coordinates at the upper box bound.
    pub n_upper: usize,
}

fn count_active<T: Scalar>(values: &[T]) -> (usize, usize) {
    let mut lower = 0;
    let mut upper = 0;
    for &v in values {
        if v == T::zero() {
            lower += 1;
        } else if v == T::one() {
            upper += 1;
        }
    }
    (lower, upper)
}

fn checked_target<T: Scalar>(r: T, q: usize) -> Result<T, SubproblemError> {
    let qf = cast::<T>(q as f64);
    if !r.is_finite() || r < -T::FEAS_TOL || r > qf + T::FEAS_TOL {
        return Err(SubproblemError::TargetOutOfRange {
            r: r.to_f64_lossy(),
            q,
        });
    }
    Ok(r.max(T::zero()).min(qf))
}

/// Maximizes Σ c_j(u_j − x_j) subject to Σ u_j = r and 0 ≤ u_j ≤ 1.
///
/// Greedy fill in descending-c order (ties broken by ascending index):
/// whole units while the budget allows, then one fractional remainder.
pub fn solve_linear<T: Scalar>(
    inst: &SubproblemInstance<T>,
) -> Result<SubproblemResult<T>, SubproblemError> {
    let q = inst.q();
    if inst.current.len() != q {
        return Err(SubproblemError::ShapeMismatch {
            c: q,
            x: inst.current.len(),
            w: inst.weights.len(),
        });
    }
    for (i, &c) in inst.gradient.iter().enumerate() {
        if !c.is_finite() {
            return Err(SubproblemError::NonFiniteInput(i));
        }
    }
    let r = checked_target(inst.target_sum, q)?;

    let mut order: Vec<usize> = (0..q).collect();
    order.sort_by(|&a, &b| {
        inst.gradient[b]
            .partial_cmp(&inst.gradient[a])
            .expect("finite gradients")
            .then(a.cmp(&b))
    });

    let mut values = vec![T::zero(); q];
    let mut remaining = r;
    for &idx in &order {
        if remaining <= T::zero() {
            break;
        }
        let take = remaining.min(T::one());
        values[idx] = take;
        remaining = remaining - take;
    }
    let (n_lower, n_upper) = count_active(&values);
    Ok(SubproblemResult {
        values,
        dual: None,
        n_lower,
        n_upper,
    })
}

/// Maximizes Σ c_j(u_j − x_j) − Σ (L_j/2)(u_j − x_j)² subject to
/// Σ u_j = r and 0 ≤ u_j ≤ 1, by bisecting the dual multiplier of the
/// equality constraint.
pub fn solve_quadratic<T: Scalar>(
    inst: &SubproblemInstance<T>,
) -> Result<SubproblemResult<T>, SubproblemError> {
    let q = inst.q();
    if inst.current.len() != q || inst.weights.len() != q {
        return Err(SubproblemError::ShapeMismatch {
            c: q,
            x: inst.current.len(),
            w: inst.weights.len(),
        });
    }
    for i in 0..q {
        if !inst.gradient[i].is_finite() || !inst.current[i].is_finite() {
            return Err(SubproblemError::NonFiniteInput(i));
        }
        if inst.weights[i] <= T::zero() || !inst.weights[i].is_finite() {
            return Err(SubproblemError::NonPositiveWeight {
                index: i,
                value: inst.weights[i].to_f64_lossy(),
            });
        }
    }
    let r = checked_target(inst.target_sum, q)?;
    if q == 0 {
        return Ok(SubproblemResult {
            values: Vec::new(),
            dual: Some(T::zero()),
            n_lower: 0,
            n_upper: 0,
        });
    }

    let one = T::one();
    let two = cast::<T>(2.0);
    // At λ = lo every unclipped value is ≥ 2 (all clip to 1, Σ = q ≥ r);
    // at λ = hi every unclipped value is ≤ −1 (all clip to 0, Σ = 0 ≤ r).
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for i in 0..q {
        lo = lo.min(inst.gradient[i] - inst.weights[i] * (two - inst.current[i]));
        hi = hi.max(inst.gradient[i] + inst.weights[i] * (inst.current[i] + one));
    }

    let mut values = vec![T::zero(); q];
    let eval = |lambda: T, values: &mut [T]| -> T {
        for (i, v) in values.iter_mut().enumerate() {
            let raw = inst.current[i] + (inst.gradient[i] - lambda) / inst.weights[i];
            *v = raw.max(T::zero()).min(one);
        }
        stable_sum(values)
    };

    let mut lambda = (lo + hi) / two;
    let mut sum = eval(lambda, &mut values);
    for _ in 0..500 {
        if (sum - r).abs() <= T::SUM_TOL {
            break;
        }
        if hi - lo <= T::WIDTH_TOL * (one + lambda.abs()) {
            break;
        }
        if sum > r {
            lo = lambda;
        } else {
            hi = lambda;
        }
        lambda = (lo + hi) / two;
        sum = eval(lambda, &mut values);
    }

    // Distribute the residual over the strictly interior coordinates so the
    // block sum meets r essentially exactly.
    let deficit = r - stable_sum(&values);
    if deficit != T::zero() {
        let free: Vec<usize> = (0..q)
            .filter(|&i| values[i] > T::zero() && values[i] < one)
            .collect();
        if free.is_empty() {
            if deficit.abs() > T::FEAS_TOL {
                return Err(SubproblemError::BisectionStalled {
                    residual: deficit.to_f64_lossy(),
                });
            }
        } else {
            let shift = deficit / cast::<T>(free.len() as f64);
            for &i in &free {
                values[i] = (values[i] + shift).max(T::zero()).min(one);
            }
        }
    }

    let (n_lower, n_upper) = count_active(&values);
    Ok(SubproblemResult {
        values,
        dual: Some(lambda),
        n_lower,
        n_upper,
    })
}

/// Proximal-weight profiles for the quadratic subproblem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightMode<T> {
    /// L_j = 2·deg(j); the default. The objective's literal coordinatewise
    /// constant is zero (the adjacency diagonal is zero), which would make
    /// the proximal subproblem ill-posed, so the weight instead scales with
    /// how strongly coordinate j couples to the rest.
    Degree,
    /// L_j = 2·√deg(j).
    SqrtDegree,
    /// A single user-supplied value for every coordinate.
    Constant(T),
}

/// Lower bound applied to every proximal weight so isolated vertices still
/// get a positive weight.
pub const DEFAULT_WEIGHT_FLOOR: f64 = 1e-6;

/// Per-vertex proximal weights L_j, floored at `floor` (> 0).
pub fn proximal_weights<T: Scalar>(g: &Graph, mode: WeightMode<T>, floor: T) -> Vec<T> {
    debug_assert!(floor > T::zero());
    let two = cast::<T>(2.0);
    (0..g.n())
        .map(|v| {
            let w = match mode {
                WeightMode::Degree => two * cast::<T>(g.degree(v) as f64),
                WeightMode::SqrtDegree => two * cast::<T>(g.degree(v) as f64).sqrt(),
                WeightMode::Constant(c) => c,
            };
            w.max(floor)
        })
        .collect()
}
