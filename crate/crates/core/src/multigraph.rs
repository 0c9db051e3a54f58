//! Undirected multigraphs with loops, stored as symmetric adjacency matrices.
//!
//! Entry `(u, v)` with `u != v` is the number of parallel edges between `u`
//! and `v`; the diagonal entry `(u, u)` is the number of loops on `u`.
//!
//! **Degree convention:** a loop contributes 1 to the degree of its vertex,
//! so the degree of `u` is the row sum of the adjacency matrix. This differs
//! from the common convention where a loop counts twice; with it the polarity
//! graphs of projective planes, whose absolute points carry one loop each,
//! are `(q + 1)`-regular with adjacency equal to the symmetric incidence
//! matrix.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// A finite undirected multigraph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct Multigraph {
    n: usize,
    adj: Vec<u32>,
}

/// Wire form of the JSON graph format `{"n": int, "adj": [[int, ...], ...]}`.
#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    adj: Vec<Vec<i64>>,
}

impl TryFrom<RawGraph> for Multigraph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        if raw.adj.len() != raw.n {
            return Err(Error::Parse(format!(
                "\"n\" is {} but \"adj\" has {} rows",
                raw.n,
                raw.adj.len()
            )));
        }
        Multigraph::from_matrix(&raw.adj)
    }
}

impl From<Multigraph> for RawGraph {
    fn from(g: Multigraph) -> Self {
        RawGraph {
            n: g.n,
            adj: g.rows(),
        }
    }
}

/// Per-vertex degrees, with the common value when the graph is regular.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub degrees: Vec<u64>,
    pub regular_k: Option<u64>,
}

/// Girth of a multigraph; forests have infinite girth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("infinity"),
        }
    }
}

/// Named graphs available without construction code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Cycle(usize),
    Petersen,
    Complete(usize),
}

impl FromStr for Builtin {
    type Err = Error;

    /// Accepts `petersen`, `cycle(n)` and `complete(n)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "petersen" {
            return Ok(Builtin::Petersen);
        }
        let parametrized = |prefix: &str| -> Option<usize> {
            s.strip_prefix(prefix)?
                .strip_prefix('(')?
                .strip_suffix(')')?
                .trim()
                .parse()
                .ok()
        };
        if let Some(n) = parametrized("cycle") {
            return Ok(Builtin::Cycle(n));
        }
        if let Some(n) = parametrized("complete") {
            return Ok(Builtin::Complete(n));
        }
        Err(Error::UnknownName(s))
    }
}

impl Multigraph {
    /// Validates a square integer matrix and wraps it as a multigraph.
    pub fn from_matrix<R: AsRef<[i64]>>(entries: &[R]) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut adj = Vec::with_capacity(n * n);
        for (row, r) in entries.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::NotSquare {
                    row,
                    len: r.len(),
                    n,
                });
            }
            for (col, &value) in r.iter().enumerate() {
                if value < 0 {
                    return Err(Error::NegativeEntry { row, col, value });
                }
                let v = u32::try_from(value).map_err(|_| Error::EntryTooLarge { row, col, value })?;
                adj.push(v);
            }
        }
        for u in 0..n {
            for v in u + 1..n {
                if adj[u * n + v] != adj[v * n + u] {
                    return Err(Error::AsymmetricMatrix { row: u, col: v });
                }
            }
        }
        Ok(Multigraph { n, adj })
    }

    /// Builds from an already-symmetric flat row-major buffer.
    pub(crate) fn from_flat_unchecked(n: usize, adj: Vec<u32>) -> Self {
        debug_assert_eq!(adj.len(), n * n);
        debug_assert!((0..n).all(|u| (0..n).all(|v| adj[u * n + v] == adj[v * n + u])));
        Multigraph { n, adj }
    }

    pub fn builtin(which: Builtin) -> Result<Self> {
        match which {
            Builtin::Cycle(0) | Builtin::Complete(0) => Err(Error::PreconditionsNotMet(
                "order must be at least 1".into(),
            )),
            Builtin::Cycle(n) => {
                let mut adj = vec![0u32; n * n];
                for u in 0..n {
                    let v = (u + 1) % n;
                    if u == v {
                        adj[u * n + u] += 1;
                    } else {
                        adj[u * n + v] += 1;
                        adj[v * n + u] += 1;
                    }
                }
                Ok(Multigraph::from_flat_unchecked(n, adj))
            }
            Builtin::Complete(n) => {
                let adj = (0..n * n)
                    .map(|i| u32::from(i / n != i % n))
                    .collect();
                Ok(Multigraph::from_flat_unchecked(n, adj))
            }
            Builtin::Petersen => {
                let mut edges = Vec::new();
                for i in 0..5 {
                    edges.push((i, (i + 1) % 5));
                    edges.push((i, i + 5));
                    edges.push((5 + i, 5 + (i + 2) % 5));
                }
                Ok(Multigraph::from_edges(10, &edges))
            }
        }
    }

    /// Simple graph from an edge list; repeated pairs add multiplicity.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![0u32; n * n];
        for &(u, v) in edges {
            if u == v {
                adj[u * n + u] += 1;
            } else {
                adj[u * n + v] += 1;
                adj[v * n + u] += 1;
            }
        }
        Multigraph::from_flat_unchecked(n, adj)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn entry(&self, u: usize, v: usize) -> u32 {
        self.adj[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[u32] {
        &self.adj[u * self.n..(u + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|u| self.row(u).iter().map(|&x| i64::from(x)).collect())
            .collect()
    }

    pub fn loops(&self, u: usize) -> u32 {
        self.entry(u, u)
    }

    pub fn trace(&self) -> u64 {
        (0..self.n).map(|u| u64::from(self.loops(u))).sum()
    }

    pub fn degree(&self, u: usize) -> u64 {
        self.row(u).iter().map(|&x| u64::from(x)).sum()
    }

    pub fn has_multi_edge(&self) -> bool {
        (0..self.n).any(|u| (u + 1..self.n).any(|v| self.entry(u, v) >= 2))
    }

    /// No loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        self.trace() == 0 && !self.has_multi_edge()
    }

    pub fn adjacency(&self) -> IntMatrix {
        IntMatrix::from_fn(self.n, |u, v| BigInt::from(self.entry(u, v)))
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(u)
            .iter()
            .enumerate()
            .filter(|&(_, &m)| m > 0)
            .map(|(v, _)| v)
    }

    pub fn regularity(&self) -> DegreeProfile {
        let degrees: Vec<u64> = (0..self.n).map(|u| self.degree(u)).collect();
        let regular_k = match degrees.split_first() {
            Some((&first, rest)) if rest.iter().all(|&d| d == first) => Some(first),
            _ => None,
        };
        DegreeProfile { degrees, regular_k }
    }

    /// The common degree, or `NotRegular`.
    pub fn regular_degree(&self) -> Result<u64> {
        self.regularity().regular_k.ok_or(Error::NotRegular)
    }

    fn bfs_distances(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for v in self.neighbors(u) {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_distances(0).iter().all(Option::is_some)
    }

    /// Largest distance between two vertices; `None` when disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for s in 0..self.n {
            for d in self.bfs_distances(s) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    /// Minimum length of a non-backtracking closed walk.
    ///
    /// The search runs over edge instances: parallel edges and loops are
    /// distinct instances, and a walk may not reuse the instance it just
    /// traversed. Lengths beyond `2n + 1` are reported as infinite.
    pub fn girth(&self) -> Girth {
        // Incidence lists of (instance id, far endpoint).
        let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.n];
        let mut next_id = 0;
        for u in 0..self.n {
            for v in u..self.n {
                for _ in 0..self.entry(u, v) {
                    incident[u].push((next_id, v));
                    if u != v {
                        incident[v].push((next_id, u));
                    }
                    next_id += 1;
                }
            }
        }
        let cap = 2 * self.n + 1;
        let mut best: Option<usize> = None;
        for s in 0..self.n {
            let limit = best.map_or(cap, |b| b - 1);
            let mut seen = vec![false; next_id * self.n];
            let mut queue = VecDeque::new();
            for &(id, w) in &incident[s] {
                if w == s {
                    return Girth::Finite(1);
                }
                if !seen[id * self.n + w] {
                    seen[id * self.n + w] = true;
                    queue.push_back((w, id, 1usize));
                }
            }
            'bfs: while let Some((u, last, d)) = queue.pop_front() {
                if d >= limit {
                    break;
                }
                for &(id, w) in &incident[u] {
                    if id == last {
                        continue;
                    }
                    if w == s {
                        best = Some(best.map_or(d + 1, |b| b.min(d + 1)));
                        break 'bfs;
                    }
                    let key = id * self.n + w;
                    if !seen[key] {
                        seen[key] = true;
                        queue.push_back((w, id, d + 1));
                    }
                }
            }
        }
        best.map_or(Girth::Infinite, Girth::Finite)
    }

    /// Number of walks of length `i` from `u` to `v`, i.e. `(A^i)[u][v]`.
    pub fn walk_count(&self, u: usize, v: usize, i: u32) -> Result<BigInt> {
        for w in [u, v] {
            if w >= self.n {
                return Err(Error::VertexOutOfRange { vertex: w, n: self.n });
            }
        }
        Ok(self.adjacency().pow(i)[(u, v)].clone())
    }

    /// Graph on `2n` vertices with adjacency `[[0, A], [A^T, 0]]`.
    pub fn bipartite_double(&self) -> Multigraph {
        let n = self.n;
        let m = 2 * n;
        let mut adj = vec![0u32; m * m];
        for u in 0..n {
            for v in 0..n {
                let a = self.entry(u, v);
                adj[u * m + n + v] = a;
                adj[(n + v) * m + u] = a;
            }
        }
        Multigraph::from_flat_unchecked(m, adj)
    }

    /// Adds `t` loops to every vertex of a regular graph.
    pub fn degree_shift(&self, t: u32) -> Result<Multigraph> {
        self.regular_degree()?;
        let mut adj = self.adj.clone();
        for u in 0..self.n {
            adj[u * self.n + u] += t;
        }
        Ok(Multigraph::from_flat_unchecked(self.n, adj))
    }

    /// Relabels vertices so that new vertex `i` is old vertex `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Multigraph {
        let n = self.n;
        assert_eq!(perm.len(), n);
        let mut adj = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                adj[i * n + j] = self.entry(perm[i], perm[j]);
            }
        }
        Multigraph::from_flat_unchecked(n, adj)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Edge-list text: a header `n k` (or `n` for irregular graphs), then
    /// one `u v mult` line per vertex pair `u <= v` with nonzero entry.
    pub fn to_edge_list(&self) -> String {
        let mut out = match self.regularity().regular_k {
            Some(k) => format!("{} {}\n", self.n, k),
            None => format!("{}\n", self.n),
        };
        for u in 0..self.n {
            for v in u..self.n {
                let m = self.entry(u, v);
                if m > 0 {
                    out.push_str(&format!("{u} {v} {m}\n"));
                }
            }
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty edge list".into()))?;
        let nums = parse_ints(header)?;
        let (n, declared_k) = match nums.as_slice() {
            [n] => (*n, None),
            [n, k] => (*n, Some(*k)),
            _ => return Err(Error::Parse(format!("bad header line {header:?}"))),
        };
        let n = usize::try_from(n).map_err(|_| Error::Parse("negative order".into()))?;
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut adj = vec![vec![0i64; n]; n];
        for line in lines {
            let nums = parse_ints(line)?;
            let [u, v, m] = nums.as_slice() else {
                return Err(Error::Parse(format!("expected `u v mult`, got {line:?}")));
            };
            let (u, v) = (to_vertex(*u, n)?, to_vertex(*v, n)?);
            if *m < 0 {
                return Err(Error::NegativeEntry { row: u, col: v, value: *m });
            }
            adj[u][v] += m;
            if u != v {
                adj[v][u] += m;
            }
        }
        let g = Multigraph::from_matrix(&adj)?;
        if let Some(k) = declared_k {
            if g.regularity().regular_k != Some(k as u64) {
                return Err(Error::Parse(format!(
                    "header declares degree {k} but the edges do not form a {k}-regular graph"
                )));
            }
        }
        Ok(g)
    }

    /// Reads either format, choosing JSON when the first non-blank
    /// character is `{`.
    pub fn parse_auto(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_edge_list(text)
        }
    }

    /// Graphviz rendering; loops become self-edges and parallel edges repeat.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for u in 0..self.n {
            out.push_str(&format!("  {u};\n"));
        }
        for u in 0..self.n {
            for v in u..self.n {
                for _ in 0..self.entry(u, v) {
                    out.push_str(&format!("  {u} -- {v};\n"));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

fn parse_ints(line: &str) -> Result<Vec<i64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| Error::Parse(format!("not an integer: {t:?}")))
        })
        .collect()
}

fn to_vertex(x: i64, n: usize) -> Result<usize> {
    usize::try_from(x)
        .ok()
        .filter(|&v| v < n)
        .ok_or(Error::VertexOutOfRange {
            vertex: x.max(0) as usize,
            n,
        })
}

impl fmt::Debug for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multigraph(n={}, adj={:?})", self.n, self.rows())
    }
}
