//! The relaxation objective f(x) = xᵀAx: exact evaluation, incremental
//! maintenance under coordinate-block updates, and partial gradients.
//!
//! The cache keeps y = A·x alongside f. A block update of the coordinates
//! in J costs O(Σ_{j∈J} deg j): each delta is pushed along its adjacency
//! row, and the ΔᵀAΔ correction is accumulated over the subgraph induced
//! on J. Every `refresh_every` updates the cache is rebuilt from scratch to
//! bound floating-point drift.

use thiserror::Error;

use crate::graph::Graph;
use crate::scalar::{cast, Scalar};

#[derive(Debug, Error)]
pub enum ObjectiveError {
    #[error("point has {got} coordinates but the graph has {expected} vertices")]
    LengthMismatch { got: usize, expected: usize },
    #[error("coordinate {coord} = {value} outside [0,1]")]
    OutOfBox { coord: usize, value: f64 },
    #[error("coordinate sum {sum} differs from k = {k} by more than {tol}")]
    SumMismatch { sum: f64, k: usize, tol: f64 },
    #[error("coordinate {0} out of range")]
    CoordOutOfRange(usize),
    #[error("coordinate {0} appears twice in one update block")]
    DuplicateCoord(usize),
    #[error("update has {values} values for {coords} coordinates")]
    UpdateShape { coords: usize, values: usize },
}

/// A point of the relaxation feasible set: 0 ≤ x_i ≤ 1, Σ x_i = k.
#[derive(Clone, Debug)]
pub struct FeasiblePoint<T> {
    x: Vec<T>,
    k: usize,
}

/// Compensated (Neumaier) sum; keeps the measurement error near one ulp
/// even for tens of thousands of terms.
pub fn stable_sum<T: Scalar>(values: &[T]) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp = comp + ((sum - t) + v);
        } else {
            comp = comp + ((v - t) + sum);
        }
        sum = t;
    }
    sum + comp
}

impl<T: Scalar> FeasiblePoint<T> {
    /// Validates the box and sum constraints to `Scalar::FEAS_TOL`.
    pub fn new(x: Vec<T>, k: usize) -> Result<Self, ObjectiveError> {
        let tol = T::FEAS_TOL;
        for (i, &v) in x.iter().enumerate() {
            if v < -tol || v > T::one() + tol {
                return Err(ObjectiveError::OutOfBox {
                    coord: i,
                    value: v.to_f64_lossy(),
                });
            }
        }
        let sum = stable_sum(&x);
        if (sum - cast::<T>(k as f64)).abs() > tol {
            return Err(ObjectiveError::SumMismatch {
                sum: sum.to_f64_lossy(),
                k,
                tol: tol.to_f64_lossy(),
            });
        }
        Ok(FeasiblePoint { x, k })
    }

    /// All coordinates k/n.
    pub fn uniform(n: usize, k: usize) -> Self {
        let v = cast::<T>(k as f64 / n as f64);
        FeasiblePoint { x: vec![v; n], k }
    }

    #[inline]
    pub fn coords(&self) -> &[T] {
        &self.x
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn into_coords(self) -> Vec<T> {
        self.x
    }
}

/// Default update count between full recomputes of the cache.
pub const DEFAULT_REFRESH_EVERY: usize = 1024;

/// Cached objective state for one descent run: the point itself,
/// y = A·x, f = xᵀAx, and the refresh bookkeeping.
#[derive(Clone, Debug)]
pub struct ObjectiveCache<T> {
    x: Vec<T>,
    k: usize,
    y: Vec<T>,
    f: T,
    updates_since_refresh: usize,
    refresh_every: usize,
    // scratch for block updates; lives here so the hot loop never allocates
    in_block: Vec<bool>,
    delta: Vec<T>,
}

/// Computes exact y = A·x and f = xᵀAx from scratch in O(m + n).
pub fn full_evaluate<T: Scalar>(
    g: &Graph,
    point: &FeasiblePoint<T>,
) -> Result<ObjectiveCache<T>, ObjectiveError> {
    if point.coords().len() != g.n() {
        return Err(ObjectiveError::LengthMismatch {
            got: point.coords().len(),
            expected: g.n(),
        });
    }
    let mut cache = ObjectiveCache {
        x: point.coords().to_vec(),
        k: point.k(),
        y: vec![T::zero(); g.n()],
        f: T::zero(),
        updates_since_refresh: 0,
        refresh_every: DEFAULT_REFRESH_EVERY,
        in_block: vec![false; g.n()],
        delta: vec![T::zero(); g.n()],
    };
    cache.recompute(g);
    Ok(cache)
}

impl<T: Scalar> ObjectiveCache<T> {
    pub fn with_refresh_every(mut self, every: usize) -> Self {
        self.refresh_every = every.max(1);
        self
    }

    #[inline]
    pub fn coords(&self) -> &[T] {
        &self.x
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// Current objective value xᵀAx (counts each edge twice).
    #[inline]
    pub fn value(&self) -> T {
        self.f
    }

    /// y_j = Σ_{l ∈ adj(j)} x_l; the partial gradient is 2·y_j.
    #[inline]
    pub fn field(&self, j: usize) -> T {
        self.y[j]
    }

    pub fn updates_since_refresh(&self) -> usize {
        self.updates_since_refresh
    }

    pub fn to_point(&self) -> Result<FeasiblePoint<T>, ObjectiveError> {
        FeasiblePoint::new(self.x.clone(), self.k)
    }

    fn recompute(&mut self, g: &Graph) {
        for v in 0..g.n() {
            let mut acc = T::zero();
            for &u in g.neighbors(v) {
                acc = acc + self.x[u as usize];
            }
            self.y[v] = acc;
        }
        let mut f = T::zero();
        for v in 0..g.n() {
            f = f + self.x[v] * self.y[v];
        }
        self.f = f;
        self.updates_since_refresh = 0;
    }

    /// Partial gradient ∇_J f(x) = (2·y_j)_{j∈J}.
    pub fn partial_gradient(&self, block: &[u32]) -> Result<Vec<T>, ObjectiveError> {
        let mut out = vec![T::zero(); block.len()];
        self.partial_gradient_into(block, &mut out)?;
        Ok(out)
    }

    pub fn partial_gradient_into(
        &self,
        block: &[u32],
        out: &mut [T],
    ) -> Result<(), ObjectiveError> {
        debug_assert_eq!(block.len(), out.len());
        let two = cast::<T>(2.0);
        for (o, &j) in out.iter_mut().zip(block) {
            let j = j as usize;
            if j >= self.x.len() {
                return Err(ObjectiveError::CoordOutOfRange(j));
            }
            *o = two * self.y[j];
        }
        Ok(())
    }

    /// Replaces x on the coordinates of `block` with `new_values`,
    /// updating y and f incrementally.
    pub fn apply_update(
        &mut self,
        g: &Graph,
        block: &[u32],
        new_values: &[T],
    ) -> Result<(), ObjectiveError> {
        if block.len() != new_values.len() {
            return Err(ObjectiveError::UpdateShape {
                coords: block.len(),
                values: new_values.len(),
            });
        }
        let n = self.x.len();
        for (at, &j) in block.iter().enumerate() {
            let j = j as usize;
            if j >= n {
                for &seen in &block[..at] {
                    self.in_block[seen as usize] = false;
                }
                return Err(ObjectiveError::CoordOutOfRange(j));
            }
            if self.in_block[j] {
                for &seen in &block[..at] {
                    self.in_block[seen as usize] = false;
                }
                return Err(ObjectiveError::DuplicateCoord(j));
            }
            self.in_block[j] = true;
        }

        let two = cast::<T>(2.0);
        // linear term 2·Σ y_j·d_j against the old field
        let mut linear = T::zero();
        for (&j, &u) in block.iter().zip(new_values) {
            let j = j as usize;
            let d = u - self.x[j];
            self.delta[j] = d;
            linear = linear + self.y[j] * d;
        }
        // ΔᵀAΔ over the subgraph induced on the block: each inside edge is
        // visited from both endpoints, which is exactly the ordered sum.
        let mut quad = T::zero();
        for &j in block {
            let j = j as usize;
            let dj = self.delta[j];
            if dj == T::zero() {
                continue;
            }
            for &l in g.neighbors(j) {
                let l = l as usize;
                if self.in_block[l] {
                    quad = quad + dj * self.delta[l];
                }
            }
        }
        self.f = self.f + two * linear + quad;
        // push deltas along adjacency rows, then commit x and clear marks
        for &j in block {
            let j = j as usize;
            let d = self.delta[j];
            if d != T::zero() {
                for &l in g.neighbors(j) {
                    let l = l as usize;
                    self.y[l] = self.y[l] + d;
                }
            }
        }
        for (&j, &u) in block.iter().zip(new_values) {
            let j = j as usize;
            self.x[j] = u;
            self.in_block[j] = false;
            self.delta[j] = T::zero();
        }

        self.updates_since_refresh += 1;
        if self.updates_since_refresh >= self.refresh_every {
            self.recompute(g);
        }
        Ok(())
    }
}
