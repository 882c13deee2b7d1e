//! Immutable sparse graph representation, instance loaders, and seeded
//! random generators.
//!
//! A [`Graph`] is a simple undirected graph stored in compressed sparse
//! adjacency form: one sorted neighbor slice per vertex. Construction
//! normalizes, sorts, and merges duplicate edges; after construction the
//! structure is immutable and safe to share across concurrent solver runs.

use std::collections::HashMap;
use std::io::BufRead;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("empty input: no edges found")]
    EmptyInput,
    #[error("line {line}: malformed edge line: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("vertex id {id} out of range for graph with {n} vertices")]
    VertexOutOfRange { id: usize, n: usize },
    #[error("duplicate vertex {id} in vertex set")]
    DuplicateVertex { id: usize },
    #[error("self-loop at vertex {id}")]
    SelfLoop { id: usize },
    #[error("generator spec invalid: {0}")]
    InvalidSpec(String),
    #[error("matrix body has {got} entries; expected n*n, n(n-1)/2 or n(n+1)/2 for n={n}")]
    MatrixShape { got: usize, n: usize },
    #[error("graph invariant violated: {0}")]
    InvariantViolation(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Simple undirected graph in compressed sparse adjacency form.
#[derive(Clone, Debug)]
pub struct Graph {
    /// `neighbors[offsets[v]..offsets[v+1]]` is the sorted neighbor list of `v`.
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    m: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) are merged silently; self-loops and out-of-range
    /// endpoints are errors.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        Ok(Self::build(n, edges.to_vec())?.0)
    }

    /// CSR construction; returns the number of duplicate edges merged.
    fn build(n: usize, mut pairs: Vec<(u32, u32)>) -> Result<(Self, usize), GraphError> {
        for &(u, v) in &pairs {
            if u == v {
                return Err(GraphError::SelfLoop { id: u as usize });
            }
            let hi = u.max(v) as usize;
            if hi >= n {
                return Err(GraphError::VertexOutOfRange { id: hi, n });
            }
        }
        for p in pairs.iter_mut() {
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
        }
        pairs.sort_unstable();
        let before = pairs.len();
        pairs.dedup();
        let duplicates = before - pairs.len();
        let m = pairs.len();

        let mut degree = vec![0usize; n];
        for &(a, b) in &pairs {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        // Filling in sorted-pair order leaves every row ascending: row v first
        // receives endpoints u < v (ordered), then endpoints w > v (ordered).
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0u32; 2 * m];
        for &(a, b) in &pairs {
            neighbors[cursor[a as usize]] = b;
            cursor[a as usize] += 1;
            neighbors[cursor[b as usize]] = a;
            cursor[b as usize] += 1;
        }
        Ok((
            Graph {
                offsets,
                neighbors,
                m,
            },
            duplicates,
        ))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Sorted neighbor list of `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|v| self.degree(v)).collect()
    }

    /// Checks the structural invariants: sorted neighbor lists, no
    /// self-loops or duplicates, symmetry, and degree sum = 2m.
    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.n();
        let mut deg_sum = 0usize;
        for v in 0..n {
            let nb = self.neighbors(v);
            deg_sum += nb.len();
            for w in nb.windows(2) {
                if w[0] >= w[1] {
                    return Err(GraphError::InvariantViolation(format!(
                        "neighbor list of {v} not strictly ascending"
                    )));
                }
            }
            for &u in nb {
                if u as usize == v {
                    return Err(GraphError::InvariantViolation(format!("self-loop at {v}")));
                }
                if u as usize >= n {
                    return Err(GraphError::InvariantViolation(format!(
                        "neighbor {u} of {v} out of range"
                    )));
                }
                if !self.has_edge(u as usize, v) {
                    return Err(GraphError::InvariantViolation(format!(
                        "edge ({v},{u}) not symmetric"
                    )));
                }
            }
        }
        if deg_sum != 2 * self.m {
            return Err(GraphError::InvariantViolation(format!(
                "degree sum {deg_sum} != 2m = {}",
                2 * self.m
            )));
        }
        Ok(())
    }
}

/// Number of edges with both endpoints in `set`.
pub fn induced_edge_count(g: &Graph, set: &[u32]) -> Result<usize, GraphError> {
    let n = g.n();
    let mut member = vec![false; n];
    for &v in set {
        let v = v as usize;
        if v >= n {
            return Err(GraphError::VertexOutOfRange { id: v, n });
        }
        if member[v] {
            return Err(GraphError::DuplicateVertex { id: v });
        }
        member[v] = true;
    }
    let mut count = 0usize;
    for &v in set {
        for &u in g.neighbors(v as usize) {
            // count each inside edge once, from its lower endpoint
            if u as usize > v as usize && member[u as usize] {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// A graph loaded from a text stream, with relabeling map and
/// load diagnostics.
#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// `labels[v]` is the original id of internal vertex `v`.
    pub labels: Vec<u64>,
    pub self_loops_dropped: usize,
    pub duplicates_merged: usize,
    /// Data lines carrying a third (weight) column; weights are ignored.
    pub weighted_lines_ignored: usize,
    /// `(n, m)` from an accepted header line, if any.
    pub header: Option<(usize, usize)>,
}

/// Loads a whitespace-separated edge list.
///
/// Lines starting with `#` or `%` are comments. Data lines hold two vertex
/// ids (a third numeric column is tolerated and ignored as a weight). An
/// optional first data line `n m` is treated as a header when `m` equals
/// the number of subsequent data lines. Vertex ids are relabeled to a dense
/// `0..n-1` range in first-appearance order, except that a consistent
/// header keeps the file's own 0-based ids (so isolated vertices survive).
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<LoadedGraph, GraphError> {
    let mut rows: Vec<(u64, u64)> = Vec::new();
    let mut weighted_lines_ignored = 0usize;
    let mut first_row_plain = false;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = t.split_whitespace().collect();
        if tokens.len() != 2 && tokens.len() != 3 {
            return Err(GraphError::MalformedLine {
                line: lineno,
                reason: format!("expected 2 or 3 fields, found {}", tokens.len()),
            });
        }
        let parse = |s: &str| -> Result<u64, GraphError> {
            s.parse::<u64>().map_err(|_| GraphError::MalformedLine {
                line: lineno,
                reason: format!("bad vertex id {s:?}"),
            })
        };
        let u = parse(tokens[0])?;
        let v = parse(tokens[1])?;
        if tokens.len() == 3 {
            tokens[2]
                .parse::<f64>()
                .map_err(|_| GraphError::MalformedLine {
                    line: lineno,
                    reason: format!("bad weight {:?}", tokens[2]),
                })?;
            weighted_lines_ignored += 1;
        }
        if rows.is_empty() {
            first_row_plain = tokens.len() == 2;
        }
        rows.push((u, v));
    }
    if rows.is_empty() {
        return Err(GraphError::EmptyInput);
    }

    // Header rule: a plain two-token first data line "n m" is a header iff
    // m matches the number of remaining data lines.
    let mut header = None;
    let mut data = &rows[..];
    if first_row_plain && rows[0].1 as usize == rows.len() - 1 {
        let (hn, hm) = rows[0];
        header = Some((hn as usize, hm as usize));
        data = &rows[1..];
    }

    let mut self_loops_dropped = 0usize;
    let surviving: Vec<(u64, u64)> = data
        .iter()
        .copied()
        .filter(|&(u, v)| {
            if u == v {
                self_loops_dropped += 1;
                false
            } else {
                true
            }
        })
        .collect();
    if surviving.is_empty() {
        return Err(GraphError::EmptyInput);
    }

    // A header whose declared n covers every id keeps identity labels,
    // so files may contain isolated vertices.
    let (n, labels, pairs) = match header {
        Some((hn, _))
            if hn <= u32::MAX as usize
                && surviving
                    .iter()
                    .all(|&(u, v)| (u as usize) < hn && (v as usize) < hn) =>
        {
            let labels: Vec<u64> = (0..hn as u64).collect();
            let pairs = surviving
                .iter()
                .map(|&(u, v)| (u as u32, v as u32))
                .collect();
            (hn, labels, pairs)
        }
        _ => {
            let mut index: HashMap<u64, u32> = HashMap::new();
            let mut labels: Vec<u64> = Vec::new();
            let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(surviving.len());
            for &(u, v) in &surviving {
                let mut id = |raw: u64| -> u32 {
                    *index.entry(raw).or_insert_with(|| {
                        labels.push(raw);
                        (labels.len() - 1) as u32
                    })
                };
                let a = id(u);
                let b = id(v);
                pairs.push((a, b));
            }
            (labels.len(), labels, pairs)
        }
    };

    let (graph, duplicates_merged) = Graph::build(n, pairs)?;
    Ok(LoadedGraph {
        graph,
        labels,
        self_loops_dropped,
        duplicates_merged,
        weighted_lines_ignored,
        header,
    })
}

/// Best-effort loader for "n d"-header 0/1 adjacency-matrix instance files.
///
/// After the two-token header the body must contain n*n entries (full
/// matrix), n(n-1)/2 (strict lower triangle, row-major), or n(n+1)/2
/// (lower triangle with diagonal). Diagonal entries are ignored.
pub fn load_matrix<R: BufRead>(reader: R) -> Result<LoadedGraph, GraphError> {
    let mut lines = reader.lines().enumerate();
    let n = loop {
        match lines.next() {
            None => return Err(GraphError::EmptyInput),
            Some((idx, line)) => {
                let line = line?;
                let t = line.trim();
                if t.is_empty() || t.starts_with('#') || t.starts_with('%') {
                    continue;
                }
                let tokens: Vec<&str> = t.split_whitespace().collect();
                if tokens.len() != 2 {
                    return Err(GraphError::MalformedLine {
                        line: idx + 1,
                        reason: "expected header \"n d\"".into(),
                    });
                }
                let n: usize = tokens[0].parse().map_err(|_| GraphError::MalformedLine {
                    line: idx + 1,
                    reason: format!("bad vertex count {:?}", tokens[0]),
                })?;
                if n > (1 << 20) {
                    return Err(GraphError::MalformedLine {
                        line: idx + 1,
                        reason: format!("vertex count {n} too large for a matrix instance"),
                    });
                }
                tokens[1]
                    .parse::<f64>()
                    .map_err(|_| GraphError::MalformedLine {
                        line: idx + 1,
                        reason: format!("bad density {:?}", tokens[1]),
                    })?;
                break n;
            }
        }
    };
    if n == 0 {
        return Err(GraphError::EmptyInput);
    }

    let mut bits: Vec<u8> = Vec::new();
    for (idx, line) in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with('%') {
            continue;
        }
        for tok in t.split_whitespace() {
            match tok {
                "0" => bits.push(0),
                "1" => bits.push(1),
                other => {
                    return Err(GraphError::MalformedLine {
                        line: idx + 1,
                        reason: format!("expected 0/1 entry, found {other:?}"),
                    })
                }
            }
        }
    }

    let full = n * n;
    let strict = n * (n - 1) / 2;
    let with_diag = n * (n + 1) / 2;
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    if bits.len() == full {
        for i in 0..n {
            for j in 0..i {
                if bits[i * n + j] == 1 {
                    pairs.push((j as u32, i as u32));
                }
            }
        }
    } else if bits.len() == strict {
        let mut at = 0usize;
        for i in 1..n {
            for j in 0..i {
                if bits[at] == 1 {
                    pairs.push((j as u32, i as u32));
                }
                at += 1;
            }
        }
    } else if bits.len() == with_diag {
        let mut at = 0usize;
        for i in 0..n {
            for j in 0..=i {
                if bits[at] == 1 && i != j {
                    pairs.push((j as u32, i as u32));
                }
                at += 1;
            }
        }
    } else {
        return Err(GraphError::MatrixShape { got: bits.len(), n });
    }

    let (graph, duplicates_merged) = Graph::build(n, pairs)?;
    let m = graph.m();
    Ok(LoadedGraph {
        graph,
        labels: (0..n as u64).collect(),
        self_loops_dropped: 0,
        duplicates_merged,
        weighted_lines_ignored: 0,
        header: Some((n, m)),
    })
}

/// Which random-graph family to generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    ErdosRenyi,
    Planted,
}

/// Parameters for the seeded random-graph generators.
#[derive(Clone, Debug)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    /// Edge probability in (0, 1].
    pub p: f64,
    /// Size of the planted complete subgraph (planted kind only).
    pub planted_k: Option<usize>,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Self {
        GeneratorSpec {
            kind: GeneratorKind::ErdosRenyi,
            n,
            p,
            planted_k: None,
            seed,
        }
    }

    pub fn planted(n: usize, p: f64, planted_k: usize, seed: u64) -> Self {
        GeneratorSpec {
            kind: GeneratorKind::Planted,
            n,
            p,
            planted_k: Some(planted_k),
            seed,
        }
    }

    fn validate(&self) -> Result<(), GraphError> {
        if self.n < 2 {
            return Err(GraphError::InvalidSpec(format!(
                "n = {} but at least 2 vertices are required",
                self.n
            )));
        }
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(GraphError::InvalidSpec(format!(
                "p = {} outside (0, 1]",
                self.p
            )));
        }
        if self.kind == GeneratorKind::Planted {
            match self.planted_k {
                Some(k) if (3..=self.n).contains(&k) => {}
                Some(k) => {
                    return Err(GraphError::InvalidSpec(format!(
                        "planted_k = {k} outside 3..=n"
                    )))
                }
                None => {
                    return Err(GraphError::InvalidSpec(
                        "planted generator requires planted_k".into(),
                    ))
                }
            }
        }
        Ok(())
    }
}

/// A generated instance; `planted` holds the planted vertex set when the
/// spec asked for one.
#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: Graph,
    pub planted: Option<Vec<u32>>,
}

/// Pair-iteration cutoff: above this the generator switches to geometric
/// skip-length sampling, which runs in O(m) expected time.
const DENSE_PAIR_LIMIT: usize = 1 << 13;

/// Generates an instance from `spec`, deterministically for a fixed seed.
pub fn generate(spec: &GeneratorSpec) -> Result<Generated, GraphError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let mut pairs = erdos_renyi_pairs(n, spec.p, &mut rng);

    let planted = match spec.kind {
        GeneratorKind::ErdosRenyi => None,
        GeneratorKind::Planted => {
            let k = spec.planted_k.expect("validated");
            let mut ids: Vec<u32> = (0..n as u32).collect();
            for i in 0..k {
                let j = rng.random_range(i..n);
                ids.swap(i, j);
            }
            let mut chosen = ids[..k].to_vec();
            chosen.sort_unstable();
            for a in 0..k {
                for b in (a + 1)..k {
                    pairs.push((chosen[a], chosen[b]));
                }
            }
            Some(chosen)
        }
    };

    let (graph, _) = Graph::build(n, pairs)?;
    Ok(Generated { graph, planted })
}

fn erdos_renyi_pairs(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(u32, u32)> {
    let total = n * (n - 1) / 2;
    let mut pairs = Vec::with_capacity((p * total as f64 * 1.05) as usize + 16);
    if p >= 1.0 {
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                pairs.push((i, j));
            }
        }
        return pairs;
    }
    if n <= DENSE_PAIR_LIMIT {
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                if rng.random_bool(p) {
                    pairs.push((i, j));
                }
            }
        }
        return pairs;
    }
    // Geometric skipping over the linearized pair index: the gap to the
    // next included pair is Geometric(p).
    let ln_q = (1.0 - p).ln();
    let mut t: usize = 0;
    let mut row = 0usize;
    let mut row_end = n - 1; // pairs before row i+1
    loop {
        let u: f64 = rng.random();
        let gap = ((1.0 - u).ln() / ln_q).floor();
        if !gap.is_finite() || gap >= (total - t) as f64 {
            break;
        }
        t += gap as usize;
        while t >= row_end {
            row += 1;
            row_end += n - 1 - row;
        }
        let row_start = row_end - (n - 1 - row);
        let j = row + 1 + (t - row_start);
        pairs.push((row as u32, j as u32));
        t += 1;
        if t >= total {
            break;
        }
    }
    pairs
}
