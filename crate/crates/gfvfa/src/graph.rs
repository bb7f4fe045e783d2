//! Undirected weighted graphs and their shift operators.
//!
//! A graph is stored as a dense symmetric weight matrix `W` with zero
//! diagonal and non-negative entries. The spectral machinery in this crate
//! diagonalizes a *shift operator* derived from the graph: either the
//! combinatorial Laplacian `L = D - W` (with `D` the diagonal degree matrix)
//! or the weighted adjacency `W` itself.
//!
//! Dense storage is deliberate: every experiment in this crate runs at desk
//! scale (up to a few thousand vertices) where the `O(N^3)`
//! eigendecomposition dominates anyway.
//!
//! Vertex indices are 1-based in all file formats and in the CLI, matching
//! the usual signal-processing convention; in-memory matrices are 0-based.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Which matrix acts as the graph shift operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftKind {
    /// Combinatorial Laplacian `L = D - W`.
    Laplacian,
    /// Weighted adjacency `W`.
    Adjacency,
}

impl std::fmt::Display for ShiftKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ShiftKind::Laplacian => write!(f, "laplacian"),
            ShiftKind::Adjacency => write!(f, "adjacency"),
        }
    }
}

/// An undirected weighted graph.
///
/// Invariants enforced at construction:
/// * `W` is square and symmetric,
/// * the diagonal is exactly zero (no self-loops),
/// * all weights are non-negative and finite,
/// * there is at least one vertex.
#[derive(Debug, Clone)]
pub struct Graph {
    weights: DMatrix<f64>,
    shift_kind: ShiftKind,
}

impl Graph {
    /// Validate a weight matrix and wrap it as a graph.
    pub fn new(weights: DMatrix<f64>, shift_kind: ShiftKind) -> Result<Self> {
        let n = weights.nrows();
        if n == 0 {
            return Err(Error::InvalidGraph("graph needs at least 1 vertex".into()));
        }
        if weights.ncols() != n {
            return Err(Error::InvalidGraph(format!(
                "weight matrix must be square, got {}x{}",
                n,
                weights.ncols()
            )));
        }
        for i in 0..n {
            if weights[(i, i)] != 0.0 {
                return Err(Error::InvalidGraph(format!(
                    "nonzero diagonal entry at vertex {}",
                    i + 1
                )));
            }
            for j in 0..i {
                let w = weights[(i, j)];
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::InvalidGraph(format!(
                        "weight ({}, {}) = {} is not a finite non-negative value",
                        i + 1,
                        j + 1,
                        w
                    )));
                }
                if w != weights[(j, i)] {
                    return Err(Error::InvalidGraph(format!(
                        "weights are not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self {
            weights,
            shift_kind,
        })
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.weights.nrows()
    }

    /// The symmetric weight matrix `W`.
    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn shift_kind(&self) -> ShiftKind {
        self.shift_kind
    }

    /// Replace the shift-operator choice, keeping the weights.
    pub fn with_shift(mut self, shift_kind: ShiftKind) -> Self {
        self.shift_kind = shift_kind;
        self
    }

    /// Weighted degree of a vertex (0-based), i.e. its row sum.
    pub fn degree(&self, vertex: usize) -> f64 {
        self.weights.row(vertex).sum()
    }

    /// Combinatorial Laplacian `L = D - W`.
    ///
    /// Symmetric by construction; every row sums to zero.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let n = self.vertex_count();
        let mut l = -self.weights.clone();
        for i in 0..n {
            l[(i, i)] = self.degree(i);
        }
        l
    }

    /// The matrix selected by [`ShiftKind`].
    pub fn shift_matrix(&self) -> DMatrix<f64> {
        match self.shift_kind {
            ShiftKind::Laplacian => self.laplacian(),
            ShiftKind::Adjacency => self.weights.clone(),
        }
    }

    /// Undirected edges as `(u, v, w)` triples with `u < v` (0-based),
    /// sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                let w = self.weights[(u, v)];
                if w != 0.0 {
                    out.push((u, v, w));
                }
            }
        }
        out
    }
}

/// Unit-weight cycle on `n >= 3` vertices: vertex `i` connects to
/// `(i + 1) mod n`.
pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "cycle graph needs at least 3 vertices, got {n}"
        )));
    }
    let mut w = DMatrix::zeros(n, n);
    for i in 0..n {
        let j = (i + 1) % n;
        w[(i, j)] = 1.0;
        w[(j, i)] = 1.0;
    }
    Graph::new(w, ShiftKind::Laplacian)
}

/// k-nearest-neighbor graph over point coordinates with Gaussian weights.
///
/// Each point is linked to its `k` nearest Euclidean neighbors (ties broken
/// by lowest index) and the edge set is symmetrized by union. Edge weights
/// are `exp(-d^2 / scale^2)`; `scale = None` selects the mean distance over
/// all included edges.
pub fn knn_graph(points: &[Vec<f64>], k: usize, scale: Option<f64>) -> Result<Graph> {
    let m = points.len();
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if k >= m {
        return Err(Error::InvalidArgument(format!(
            "k = {k} requires at least {} points, got {m}",
            k + 1
        )));
    }
    let dim = points[0].len();
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(Error::InvalidArgument(format!(
                "point {} has {} coordinates, expected {dim}",
                i + 1,
                p.len()
            )));
        }
        if p.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "point {} has a non-finite coordinate",
                i + 1
            )));
        }
    }
    if let Some(s) = scale {
        if !s.is_finite() || s <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "scale must be a positive real, got {s}"
            )));
        }
    }

    let dist = |a: &[f64], b: &[f64]| -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    };

    // Union of per-point nearest-neighbor selections.
    let mut edge_dist: std::collections::BTreeMap<(usize, usize), f64> =
        std::collections::BTreeMap::new();
    for i in 0..m {
        let mut others: Vec<(usize, f64)> = (0..m)
            .filter(|&j| j != i)
            .map(|j| (j, dist(&points[i], &points[j])))
            .collect();
        // Deterministic tie-break: distance first, lowest index second.
        others.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
        for &(j, d) in others.iter().take(k) {
            let key = (i.min(j), i.max(j));
            edge_dist.entry(key).or_insert(d);
        }
    }

    let s = match scale {
        Some(s) => s,
        None => {
            let sum: f64 = edge_dist.values().sum();
            sum / edge_dist.len() as f64
        }
    };

    let mut w = DMatrix::zeros(m, m);
    for (&(u, v), &d) in &edge_dist {
        // Coincident points get weight 1 even when the auto scale collapses.
        let weight = if d == 0.0 {
            1.0
        } else {
            (-d * d / (s * s)).exp()
        };
        w[(u, v)] = weight;
        w[(v, u)] = weight;
    }
    Graph::new(w, ShiftKind::Laplacian)
}

/// Parse a whitespace-separated edge list.
///
/// Each data line is `u v w` with 1-based vertex indices and a positive
/// weight; `#` starts a comment line. The vertex count is the largest index
/// mentioned. Self-loops and repeated edges (in either orientation) are
/// rejected.
pub fn from_edge_list(text: &str) -> Result<Graph> {
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut n = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 'u v w', got {} fields", fields.len()),
            });
        }
        let u: usize = fields[0].parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("bad vertex index '{}'", fields[0]),
        })?;
        let v: usize = fields[1].parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("bad vertex index '{}'", fields[1]),
        })?;
        let w: f64 = fields[2].parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("bad weight '{}'", fields[2]),
        })?;
        if u == 0 || v == 0 {
            return Err(Error::Parse {
                line: line_no,
                message: "vertex indices are 1-based".into(),
            });
        }
        if u == v {
            return Err(Error::Parse {
                line: line_no,
                message: format!("self-loop at vertex {u}"),
            });
        }
        if !w.is_finite() || w <= 0.0 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("weight must be positive, got {w}"),
            });
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("duplicate edge ({u}, {v})"),
            });
        }
        n = n.max(u).max(v);
        edges.push((u - 1, v - 1, w));
    }
    if edges.is_empty() {
        return Err(Error::InvalidGraph("edge list is empty".into()));
    }
    let mut weights = DMatrix::zeros(n, n);
    for (u, v, w) in edges {
        weights[(u, v)] = w;
        weights[(v, u)] = w;
    }
    Graph::new(weights, ShiftKind::Laplacian)
}

/// Serialize a graph in the edge-list format accepted by
/// [`from_edge_list`]: one `u v w` line per edge, 1-based, sorted.
pub fn to_edge_list(graph: &Graph) -> String {
    let mut out = String::new();
    for (u, v, w) in graph.edges() {
        out.push_str(&format!("{} {} {}\n", u + 1, v + 1, w));
    }
    out
}

/// Seeded sensor-network graph: `n` points uniform in the unit square,
/// joined by [`knn_graph`]. Returns the graph and the coordinates.
pub fn sensor_graph(n: usize, k: usize, seed: u64) -> Result<(Graph, Vec<Vec<f64>>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<f64>> = (0..n)
        .map(|_| vec![rng.random::<f64>(), rng.random::<f64>()])
        .collect();
    let graph = knn_graph(&points, k, None)?;
    Ok((graph, points))
}

/// Seeded community graph template: one Gaussian point cloud per community,
/// centers equally spaced on the unit circle, joined by [`knn_graph`].
///
/// Vertices are numbered community by community, so a template like
/// `&[27, 37]` puts vertices 1..=27 in the first community and 28..=64 in
/// the second.
pub fn community_graph(
    sizes: &[usize],
    k: usize,
    spread: f64,
    seed: u64,
) -> Result<(Graph, Vec<Vec<f64>>)> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::InvalidArgument(
            "community sizes must be positive".into(),
        ));
    }
    if !spread.is_finite() || spread <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "spread must be positive, got {spread}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::new();
    let c = sizes.len();
    for (ci, &size) in sizes.iter().enumerate() {
        let angle = 2.0 * std::f64::consts::PI * ci as f64 / c as f64;
        let (cx, cy) = (angle.cos(), angle.sin());
        for _ in 0..size {
            let dx: f64 = rng.sample(StandardNormal);
            let dy: f64 = rng.sample(StandardNormal);
            points.push(vec![cx + spread * dx, cy + spread * dy]);
        }
    }
    let graph = knn_graph(&points, k, None)?;
    Ok((graph, points))
}
