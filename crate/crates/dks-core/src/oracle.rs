//! Exact and independent reference solvers for small instances, used by
//! tests and the acceptance suite.
//!
//! `exhaustive_dks` walks all k-subsets in revolving-door order, so each
//! successor differs from its predecessor by a single swap and the induced
//! edge count is maintained incrementally. The subproblem reference solvers
//! at the bottom solve the restricted problems by brute force (coefficient
//! selection, 3^q active-set enumeration) and share no code with the
//! production solvers in [`crate::subproblem`].

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::graph::Graph;

/// Hard cap on the number of k-subsets the exhaustive oracle will examine.
pub const SUBSET_GUARD: u128 = 100_000_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("k = {k} exceeds n = {n}")]
    KTooLarge { k: usize, n: usize },
    #[error(
        "C({n}, {k}) = {subsets} exceeds the {guard} subset guard; \
         use the heuristic solver path instead"
    )]
    GuardExceeded {
        n: usize,
        k: usize,
        subsets: u128,
        guard: u128,
    },
}

/// Result of an exhaustive densest-k-subgraph search.
#[derive(Clone, Debug)]
pub struct OracleResult {
    /// Maximum induced edge count over all k-subsets.
    pub optimum: usize,
    /// A subset attaining the optimum (sorted).
    pub argmax_set: Vec<u32>,
    /// Subsets visited; less than C(n,k) when a perfect clique ended the
    /// search early.
    pub subsets_examined: u64,
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
        if acc > SUBSET_GUARD * 2 {
            return u128::MAX / 2;
        }
    }
    acc
}

struct Enumeration<'g> {
    g: &'g Graph,
    member: Vec<bool>,
    inside: usize,
    best: usize,
    best_set: Vec<u32>,
    examined: u64,
    target: usize,
    done: bool,
}

impl Enumeration<'_> {
    fn add(&mut self, v: usize) {
        let mut gain = 0;
        for &u in self.g.neighbors(v) {
            if self.member[u as usize] {
                gain += 1;
            }
        }
        self.inside += gain;
        self.member[v] = true;
    }

    fn remove(&mut self, v: usize) {
        self.member[v] = false;
        let mut loss = 0;
        for &u in self.g.neighbors(v) {
            if self.member[u as usize] {
                loss += 1;
            }
        }
        self.inside -= loss;
    }

    fn visit(&mut self) {
        self.examined += 1;
        if self.inside > self.best || self.best_set.is_empty() {
            self.best = self.inside;
            self.best_set = (0..self.member.len())
                .filter(|&v| self.member[v])
                .map(|v| v as u32)
                .collect();
            if self.best >= self.target {
                self.done = true; // a clique cannot be beaten
            }
        }
    }

    // Revolving-door order: A(n,k) = A(n-1,k) then reverse(A(n-1,k-1))×{n-1}.
    // `forward` walks A(n,k) from {0..k-1} to {0..k-2, n-1}; `backward`
    // walks it in reverse. Consecutive subsets differ by one swap.
    fn forward(&mut self, n: usize, k: usize) {
        if self.done {
            return;
        }
        if k == 0 || k == n {
            self.visit();
            return;
        }
        self.forward(n - 1, k);
        if self.done {
            return;
        }
        self.add(n - 1);
        self.remove(if k >= 2 { k - 2 } else { n - 2 });
        self.backward(n - 1, k - 1);
    }

    fn backward(&mut self, n: usize, k: usize) {
        if self.done {
            return;
        }
        if k == 0 || k == n {
            self.visit();
            return;
        }
        self.forward(n - 1, k - 1);
        if self.done {
            return;
        }
        self.add(if k >= 2 { k - 2 } else { n - 2 });
        self.remove(n - 1);
        self.backward(n - 1, k);
    }
}

/// Exhaustively finds a densest k-subgraph.
///
/// Errors when C(n,k) exceeds [`SUBSET_GUARD`]. Stops early once a subset
/// reaches k(k−1)/2 inside edges, since no subset can beat a clique.
pub fn exhaustive_dks(g: &Graph, k: usize) -> Result<OracleResult, OracleError> {
    let n = g.n();
    if k > n {
        return Err(OracleError::KTooLarge { k, n });
    }
    let subsets = binomial(n, k);
    if subsets > SUBSET_GUARD {
        return Err(OracleError::GuardExceeded {
            n,
            k,
            subsets,
            guard: SUBSET_GUARD,
        });
    }

    if k == 0 {
        return Ok(OracleResult {
            optimum: 0,
            argmax_set: Vec::new(),
            subsets_examined: 1,
        });
    }
    if k == 1 {
        return Ok(OracleResult {
            optimum: 0,
            argmax_set: vec![0],
            subsets_examined: n as u64,
        });
    }
    if k == 2 {
        // any edge is optimal; scan pairs only when the graph is empty
        if g.m() > 0 {
            let v = (0..n).find(|&v| g.degree(v) > 0).expect("m > 0");
            let u = g.neighbors(v)[0];
            let mut set = vec![v as u32, u];
            set.sort_unstable();
            let examined = (0..v).map(|a| (n - 1 - a) as u64).sum::<u64>() + 1;
            return Ok(OracleResult {
                optimum: 1,
                argmax_set: set,
                subsets_examined: examined,
            });
        }
        return Ok(OracleResult {
            optimum: 0,
            argmax_set: vec![0, 1],
            subsets_examined: subsets as u64,
        });
    }

    let mut e = Enumeration {
        g,
        member: vec![false; n],
        inside: 0,
        best: 0,
        best_set: Vec::new(),
        examined: 0,
        target: k * (k - 1) / 2,
        done: false,
    };
    for v in 0..k {
        e.add(v);
    }
    e.forward(n, k);
    e.best_set.sort_unstable();
    Ok(OracleResult {
        optimum: e.best,
        argmax_set: e.best_set,
        subsets_examined: e.examined,
    })
}

/// Cheap constructive baseline: repeatedly removes a minimum-degree vertex
/// (ties to the lowest index) until k vertices remain.
pub fn greedy_peel(g: &Graph, k: usize) -> Vec<u32> {
    let n = g.n();
    if k >= n {
        return (0..n as u32).collect();
    }
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> =
        (0..n).map(|v| Reverse((degree[v], v as u32))).collect();
    let mut remaining = n;
    while remaining > k {
        let Reverse((d, v)) = heap.pop().expect("heap tracks all alive vertices");
        if !alive[v as usize] || d != degree[v as usize] {
            continue; // stale entry
        }
        alive[v as usize] = false;
        remaining -= 1;
        for &u in g.neighbors(v as usize) {
            let u = u as usize;
            if alive[u] {
                degree[u] -= 1;
                heap.push(Reverse((degree[u], u as u32)));
            }
        }
    }
    (0..n as u32).filter(|&v| alive[v as usize]).collect()
}

// ---------------------------------------------------------------------------
// Reference solvers for the restricted subproblems (f64, desk scale).
// ---------------------------------------------------------------------------

/// Continuous-knapsack reference: repeated argmax selection instead of a
/// sort. Ties break toward the lower index, matching the documented rule.
pub fn knapsack_by_selection(c: &[f64], r: f64) -> Vec<f64> {
    let q = c.len();
    let mut values = vec![0.0; q];
    let mut taken = vec![false; q];
    let mut remaining = r.clamp(0.0, q as f64);
    for _ in 0..q {
        if remaining <= 0.0 {
            break;
        }
        let mut pick = usize::MAX;
        for j in 0..q {
            if !taken[j] && (pick == usize::MAX || c[j] > c[pick]) {
                pick = j;
            }
        }
        taken[pick] = true;
        let take = remaining.min(1.0);
        values[pick] = take;
        remaining -= take;
    }
    values
}

/// Water-filling reference: enumerates all 3^q lower/upper/free patterns and
/// returns the unique one whose closed-form solution satisfies the KKT
/// conditions. `None` only for infeasible targets.
pub fn quadratic_by_active_sets(c: &[f64], x: &[f64], w: &[f64], r: f64) -> Option<Vec<f64>> {
    let q = c.len();
    assert!(q <= 12, "3^q enumeration is for desk-scale q");
    let tol = 1e-9;
    let patterns = 3usize.pow(q as u32);
    for pat in 0..patterns {
        let mut code = pat;
        let mut state = vec![0u8; q]; // 0 lower, 1 upper, 2 free
        for s in state.iter_mut() {
            *s = (code % 3) as u8;
            code /= 3;
        }
        let fixed_sum: f64 = state
            .iter()
            .enumerate()
            .filter(|&(_, &s)| s == 1)
            .map(|_| 1.0)
            .sum();
        let free: Vec<usize> = (0..q).filter(|&j| state[j] == 2).collect();

        let lambda = if free.is_empty() {
            if (fixed_sum - r).abs() > tol {
                continue;
            }
            // any multiplier between the binding conditions works
            let lo = (0..q)
                .filter(|&j| state[j] == 0)
                .map(|j| c[j] + w[j] * x[j])
                .fold(f64::NEG_INFINITY, f64::max);
            let hi = (0..q)
                .filter(|&j| state[j] == 1)
                .map(|j| c[j] - w[j] * (1.0 - x[j]))
                .fold(f64::INFINITY, f64::min);
            if lo > hi + tol {
                continue;
            }
            lo.max(hi.min(0.5 * (lo + hi)))
        } else {
            let inv_sum: f64 = free.iter().map(|&j| 1.0 / w[j]).sum();
            let base: f64 = free.iter().map(|&j| x[j] + c[j] / w[j]).sum();
            (base - (r - fixed_sum)) / inv_sum
        };

        let mut u = vec![0.0; q];
        let mut ok = true;
        for j in 0..q {
            match state[j] {
                0 => {
                    u[j] = 0.0;
                    if c[j] + w[j] * x[j] > lambda + tol {
                        ok = false;
                        break;
                    }
                }
                1 => {
                    u[j] = 1.0;
                    if c[j] - w[j] * (1.0 - x[j]) < lambda - tol {
                        ok = false;
                        break;
                    }
                }
                _ => {
                    let v = x[j] + (c[j] - lambda) / w[j];
                    if !(-tol..=1.0 + tol).contains(&v) {
                        ok = false;
                        break;
                    }
                    u[j] = v.clamp(0.0, 1.0);
                }
            }
        }
        if ok {
            return Some(u);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, induced_edge_count, GeneratorSpec, Graph};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn k5() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            for j in (i + 1)..5 {
                edges.push((i, j));
            }
        }
        Graph::from_edges(5, &edges).unwrap()
    }

    /// Second, independent enumerator: plain lexicographic recursion with
    /// full recount per subset.
    fn naive_best(g: &Graph, k: usize) -> usize {
        fn rec(g: &Graph, k: usize, start: usize, chosen: &mut Vec<u32>, best: &mut usize) {
            if chosen.len() == k {
                let e = induced_edge_count(g, chosen).unwrap();
                if e > *best {
                    *best = e;
                }
                return;
            }
            let need = k - chosen.len();
            for v in start..=(g.n() - need) {
                chosen.push(v as u32);
                rec(g, k, v + 1, chosen, best);
                chosen.pop();
            }
        }
        let mut best = 0;
        rec(g, k, 0, &mut Vec::new(), &mut best);
        best
    }

    #[test]
    fn k5_triples_are_triangles() {
        let res = exhaustive_dks(&k5(), 3).unwrap();
        assert_eq!(res.optimum, 3);
        assert_eq!(res.argmax_set.len(), 3);
        assert_eq!(
            induced_edge_count(&k5(), &res.argmax_set).unwrap(),
            res.optimum
        );
        // first visited subset is already a triangle
        assert_eq!(res.subsets_examined, 1);
    }

    #[test]
    fn planted_clique_is_found() {
        let out = generate(&GeneratorSpec::planted(12, 0.2, 5, 3)).unwrap();
        let res = exhaustive_dks(&out.graph, 5).unwrap();
        assert_eq!(res.optimum, 10);
        assert_eq!(res.argmax_set, out.planted.unwrap());
    }

    #[test]
    fn matches_independent_enumerator_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        for trial in 0..50 {
            let n = rng.random_range(5..=14usize);
            let k = rng.random_range(1..=7.min(n));
            let p = rng.random_range(0.1..0.8);
            let g = generate(&GeneratorSpec::erdos_renyi(n, p, trial))
                .unwrap()
                .graph;
            let res = exhaustive_dks(&g, k).unwrap();
            assert_eq!(res.optimum, naive_best(&g, k), "n={n} k={k} trial={trial}");
            assert_eq!(
                induced_edge_count(&g, &res.argmax_set).unwrap(),
                res.optimum
            );
        }
    }

    #[test]
    fn full_enumeration_count_without_early_exit() {
        // empty graph: no clique target hit, so every subset is visited
        let g = Graph::from_edges(9, &[]).unwrap();
        let res = exhaustive_dks(&g, 4).unwrap();
        assert_eq!(res.optimum, 0);
        assert_eq!(res.subsets_examined, 126); // C(9,4)
    }

    #[test]
    fn guard_rejects_oversized_instances() {
        let g = Graph::from_edges(100, &[(0, 1)]).unwrap();
        let err = exhaustive_dks(&g, 50).unwrap_err();
        assert!(matches!(err, OracleError::GuardExceeded { .. }));
        assert!(exhaustive_dks(&g, 101).is_err());
    }

    #[test]
    fn degenerate_k_values() {
        let g = k5();
        assert_eq!(exhaustive_dks(&g, 0).unwrap().optimum, 0);
        assert_eq!(exhaustive_dks(&g, 1).unwrap().optimum, 0);
        assert_eq!(exhaustive_dks(&g, 2).unwrap().optimum, 1);
        assert_eq!(exhaustive_dks(&g, 5).unwrap().optimum, 10);
    }

    #[test]
    fn peel_keeps_clique_over_isolated_vertices() {
        // K4 on {0..3} plus isolated vertices 4..7
        let mut edges = Vec::new();
        for i in 0..4u32 {
            for j in (i + 1)..4 {
                edges.push((i, j));
            }
        }
        let g = Graph::from_edges(8, &edges).unwrap();
        assert_eq!(greedy_peel(&g, 4), vec![0, 1, 2, 3]);
    }

    #[test]
    fn peel_on_path_keeps_adjacent_pair() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let kept = greedy_peel(&g, 2);
        assert_eq!(kept, vec![2, 3]);
        assert_eq!(induced_edge_count(&g, &kept).unwrap(), 1);
    }

    #[test]
    fn peel_value_never_exceeds_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for trial in 0..20 {
            let n = rng.random_range(6..=12usize);
            let k = rng.random_range(2..=5.min(n));
            let g = generate(&GeneratorSpec::erdos_renyi(n, 0.4, 1000 + trial))
                .unwrap()
                .graph;
            let peel = induced_edge_count(&g, &greedy_peel(&g, k)).unwrap();
            let best = exhaustive_dks(&g, k).unwrap().optimum;
            assert!(peel <= best);
        }
    }

    #[test]
    fn oracle_beats_random_subsets() {
        let g = generate(&GeneratorSpec::erdos_renyi(16, 0.4, 21))
            .unwrap()
            .graph;
        let best = exhaustive_dks(&g, 5).unwrap().optimum;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let mut ids: Vec<u32> = (0..16).collect();
            for i in 0..5 {
                let j = rng.random_range(i..16);
                ids.swap(i, j);
            }
            assert!(induced_edge_count(&g, &ids[..5]).unwrap() <= best);
        }
    }

    #[test]
    fn knapsack_reference_basics() {
        assert_eq!(
            knapsack_by_selection(&[3.0, 1.0, 2.0], 2.0),
            vec![1.0, 0.0, 1.0]
        );
        assert_eq!(
            knapsack_by_selection(&[3.0, 1.0, 2.0], 1.5),
            vec![1.0, 0.0, 0.5]
        );
        assert_eq!(knapsack_by_selection(&[5.0, 5.0], 1.0), vec![1.0, 0.0]);
    }

    #[test]
    fn active_set_reference_on_hand_instances() {
        let u = quadratic_by_active_sets(&[1.0, 1.0], &[0.5, 0.5], &[2.0, 2.0], 1.0).unwrap();
        assert!((u[0] - 0.5).abs() <= 1e-9 && (u[1] - 0.5).abs() <= 1e-9);
        let u = quadratic_by_active_sets(&[4.0, 0.0], &[0.5, 0.5], &[2.0, 2.0], 1.0).unwrap();
        assert_eq!(u, vec![1.0, 0.0]);
    }
}
