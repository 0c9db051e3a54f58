//! Exhaustive enumeration of small connected regular multigraphs.
//!
//! Labelled graphs are generated row by row over the upper triangle of the
//! adjacency matrix. Every row must reach the degree exactly, and the
//! labelling must be a breadth-first order: the vertices first reached from
//! row `u` form a contiguous block right after the already reached ones,
//! with non-increasing multiplicities inside the block. Every connected
//! graph has such a labelling, so nothing is lost; duplicates are removed by
//! a canonical form.
//!
//! The canonical form is the lexicographically smallest column-major listing
//! of the upper triangle, `(0,0), (0,1), (1,1), (0,2), ...`, over all vertex
//! orders that list colour-refinement classes in increasing order.
//!
//! The search tree is split by the choice of the first row; partitions run
//! independently and can be checkpointed.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::three_ev_bound;
use crate::error::{Error, Result};
use crate::multigraph::{Girth, Multigraph};
use crate::spectral::{
    certify_three_eigenvalues, extremal_conditions_for, CertificateJson, ExtremalReport,
    ThreeEigCertificate,
};

pub const DEFAULT_MAX_N: usize = 10;
pub const DEFAULT_MAX_K: u32 = 4;
pub const CAP_ENV: &str = "SPECTRA_CAP_N";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub k: u32,
    pub n_min: usize,
    pub n_max: usize,
    pub allow_loops: bool,
    pub allow_multi: bool,
    /// Cap on any adjacency entry; defaults to `k`.
    pub max_entry: u32,
}

impl SearchSpec {
    pub fn new(k: u32, n_min: usize, n_max: usize) -> Self {
        SearchSpec {
            k,
            n_min,
            n_max,
            allow_loops: false,
            allow_multi: false,
            max_entry: k,
        }
    }

    pub fn loops(mut self, allow: bool) -> Self {
        self.allow_loops = allow;
        self
    }

    pub fn multi(mut self, allow: bool) -> Self {
        self.allow_multi = allow;
        self
    }

    fn edge_cap(&self) -> u32 {
        if self.allow_multi {
            self.max_entry.min(self.k)
        } else {
            self.max_entry.min(1)
        }
    }

    fn loop_cap(&self) -> u32 {
        if self.allow_loops {
            self.max_entry.min(self.k)
        } else {
            0
        }
    }
}

/// Limits on the search range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchCaps {
    pub max_n: usize,
    pub max_k: u32,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps {
            max_n: DEFAULT_MAX_N,
            max_k: DEFAULT_MAX_K,
        }
    }
}

impl SearchCaps {
    /// Defaults, with the order cap overridden by `SPECTRA_CAP_N` when set.
    pub fn from_env() -> Result<Self> {
        let mut caps = SearchCaps::default();
        if let Ok(v) = std::env::var(CAP_ENV) {
            caps.max_n = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{CAP_ENV} is not an integer: {v:?}")))?;
        }
        Ok(caps)
    }

    pub fn check(&self, spec: &SearchSpec) -> Result<()> {
        if spec.n_max > self.max_n {
            return Err(Error::CapExceeded(format!(
                "n_max = {} exceeds the order cap {}",
                spec.n_max, self.max_n
            )));
        }
        if spec.k > self.max_k {
            return Err(Error::CapExceeded(format!(
                "k = {} exceeds the degree cap {}",
                spec.k, self.max_k
            )));
        }
        if spec.n_min == 0 || spec.n_min > spec.n_max {
            return Err(Error::PreconditionsNotMet(format!(
                "order range {}..={} is empty or starts at 0",
                spec.n_min, spec.n_max
            )));
        }
        Ok(())
    }
}

/// Isomorphism-invariant key of a multigraph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub n: usize,
    /// Column-major upper triangle of the canonically relabelled adjacency.
    pub listing: Vec<u32>,
}

impl CanonicalForm {
    pub fn to_graph(&self) -> Multigraph {
        let n = self.n;
        let mut adj = vec![0u32; n * n];
        let mut it = self.listing.iter();
        for j in 0..n {
            for i in 0..=j {
                let x = *it.next().expect("listing length n(n+1)/2");
                adj[i * n + j] = x;
                adj[j * n + i] = x;
            }
        }
        Multigraph::from_flat_unchecked(n, adj)
    }
}

/// Stable colour refinement; colours are ranks of sorted signatures, so
/// they are invariant under relabelling.
fn refine_colors(g: &Multigraph) -> Vec<usize> {
    let n = g.order();
    let rank = |sigs: &[Vec<u64>]| -> Vec<usize> {
        let distinct: BTreeSet<&Vec<u64>> = sigs.iter().collect();
        let order: BTreeMap<&Vec<u64>, usize> =
            distinct.into_iter().enumerate().map(|(i, s)| (s, i)).collect();
        sigs.iter().map(|s| order[s]).collect()
    };
    let initial: Vec<Vec<u64>> = (0..n)
        .map(|v| {
            let mut mults: Vec<u64> = (0..n)
                .filter(|&w| w != v)
                .map(|w| u64::from(g.entry(v, w)))
                .filter(|&m| m > 0)
                .collect();
            mults.sort_unstable();
            let mut sig = vec![u64::from(g.loops(v))];
            sig.extend(mults);
            sig
        })
        .collect();
    let mut colors = rank(&initial);
    loop {
        let sigs: Vec<Vec<u64>> = (0..n)
            .map(|v| {
                let mut nb: Vec<(u64, u64)> = (0..n)
                    .filter(|&w| w != v && g.entry(v, w) > 0)
                    .map(|w| (colors[w] as u64, u64::from(g.entry(v, w))))
                    .collect();
                nb.sort_unstable();
                let mut sig = vec![colors[v] as u64];
                sig.extend(nb.into_iter().flat_map(|(c, m)| [c, m]));
                sig
            })
            .collect();
        let next = rank(&sigs);
        let classes = |c: &[usize]| c.iter().collect::<BTreeSet<_>>().len();
        if classes(&next) == classes(&colors) {
            return next;
        }
        colors = next;
    }
}

/// Canonical form and a relabelling achieving it (`perm[i]` is the old
/// vertex placed at position `i`).
pub fn canonical_form_with_perm(g: &Multigraph) -> (CanonicalForm, Vec<usize>) {
    let n = g.order();
    let colors = refine_colors(g);
    let mut targets = colors.clone();
    targets.sort_unstable();

    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    let mut listing = Vec::with_capacity(n * (n + 1) / 2);
    for (j, &target) in targets.iter().enumerate() {
        let mut best: Option<Vec<u32>> = None;
        let mut next = Vec::new();
        for prefix in &frontier {
            for v in 0..n {
                if colors[v] != target || prefix.contains(&v) {
                    continue;
                }
                let mut column: Vec<u32> = prefix.iter().map(|&w| g.entry(w, v)).collect();
                column.push(g.loops(v));
                match best.as_ref().map(|b| column.cmp(b)) {
                    Some(std::cmp::Ordering::Greater) => continue,
                    Some(std::cmp::Ordering::Less) | None => {
                        best = Some(column);
                        next.clear();
                    }
                    Some(std::cmp::Ordering::Equal) => {}
                }
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        debug_assert!(next.iter().all(|p| p.len() == j + 1));
        listing.extend(best.expect("a vertex of every colour remains"));
        frontier = next;
    }
    let perm = frontier.swap_remove(0);
    (CanonicalForm { n, listing }, perm)
}

pub fn canonical_form(g: &Multigraph) -> CanonicalForm {
    canonical_form_with_perm(g).0
}

/// Backtracking generator for one order `n`.
struct Generator<'a> {
    n: usize,
    k: u32,
    edge_cap: u32,
    loop_cap: u32,
    adj: Vec<u32>,
    deg: Vec<u32>,
    found: &'a mut BTreeSet<CanonicalForm>,
}

impl Generator<'_> {
    fn set(&mut self, u: usize, v: usize, m: u32) {
        let n = self.n;
        let old = self.adj[u * n + v];
        self.adj[u * n + v] = m;
        if u == v {
            self.deg[u] = self.deg[u] + m - old;
        } else {
            self.adj[v * n + u] = m;
            self.deg[u] = self.deg[u] + m - old;
            self.deg[v] = self.deg[v] + m - old;
        }
    }

    /// Starts row `u`, with vertices `0..reached` already reached.
    fn row(&mut self, u: usize, reached: usize) {
        if u == self.n {
            let g = Multigraph::from_flat_unchecked(self.n, self.adj.clone());
            debug_assert!(g.regularity().regular_k == Some(u64::from(self.k)));
            debug_assert!(g.is_connected());
            self.found.insert(canonical_form(&g));
            return;
        }
        if u >= reached {
            return;
        }
        let rem = self.k - self.deg[u];
        for l in 0..=rem.min(self.loop_cap) {
            self.set(u, u, l);
            self.old_entries(u, u + 1, reached);
        }
        self.set(u, u, 0);
    }

    /// Entries `(u, v)` for already-reached `v >= from`.
    fn old_entries(&mut self, u: usize, v: usize, reached: usize) {
        if v == reached {
            let rem = self.k - self.deg[u];
            self.new_block(u, reached, rem, self.edge_cap);
            return;
        }
        let rem = self.k - self.deg[u];
        let cap = rem.min(self.edge_cap).min(self.k - self.deg[v]);
        for m in 0..=cap {
            self.set(u, v, m);
            self.old_entries(u, v + 1, reached);
        }
        self.set(u, v, 0);
    }

    /// Newly reached vertices `reached..v`, multiplicities non-increasing.
    fn new_block(&mut self, u: usize, v: usize, rem: u32, prev: u32) {
        if rem == 0 {
            self.row(u + 1, v);
            return;
        }
        if v == self.n {
            return;
        }
        for m in (1..=rem.min(prev)).rev() {
            self.set(u, v, m);
            self.new_block(u, v + 1, rem - m, m);
        }
        self.set(u, v, 0);
    }
}

/// First-row choices for order `n`: `(loops on vertex 0, multiplicities to
/// vertices 1, 2, ...)`, in a fixed order.
fn first_rows(spec: &SearchSpec, n: usize) -> Vec<(u32, Vec<u32>)> {
    fn parts(rem: u32, max: u32, slots: usize, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(acc.clone());
            return;
        }
        if slots == 0 {
            return;
        }
        for m in (1..=rem.min(max)).rev() {
            acc.push(m);
            parts(rem - m, m, slots - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    for l in 0..=spec.k.min(spec.loop_cap()) {
        let mut blocks = Vec::new();
        parts(spec.k - l, spec.edge_cap(), n - 1, &mut Vec::new(), &mut blocks);
        out.extend(blocks.into_iter().map(|b| (l, b)));
    }
    out
}

fn run_partition(spec: &SearchSpec, n: usize, first: &(u32, Vec<u32>)) -> BTreeSet<CanonicalForm> {
    let mut found = BTreeSet::new();
    let mut gen = Generator {
        n,
        k: spec.k,
        edge_cap: spec.edge_cap(),
        loop_cap: spec.loop_cap(),
        adj: vec![0; n * n],
        deg: vec![0; n],
        found: &mut found,
    };
    let (loops, block) = first;
    gen.set(0, 0, *loops);
    for (i, &m) in block.iter().enumerate() {
        gen.set(0, i + 1, m);
    }
    gen.row(1, 1 + block.len());
    found
}

/// Progress file recording finished first-row partitions and their graphs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub spec: Option<SearchSpec>,
    /// Keyed by `"n/partition"`.
    pub completed: BTreeMap<String, Vec<CanonicalForm>>,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Ok(Checkpoint::default());
        }
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string(self)?)?;
        fs::rename(tmp, path)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    pub checkpoint: Option<PathBuf>,
}

/// Every connected `k`-regular multigraph in range, once per isomorphism
/// class, sorted by canonical form.
pub fn enumerate(spec: &SearchSpec) -> Result<Vec<Multigraph>> {
    enumerate_with(spec, SearchCaps::default(), &RunOptions::default())
}

pub fn enumerate_with(
    spec: &SearchSpec,
    caps: SearchCaps,
    opts: &RunOptions,
) -> Result<Vec<Multigraph>> {
    Ok(enumerate_forms(spec, caps, opts)?
        .iter()
        .map(CanonicalForm::to_graph)
        .collect())
}

pub fn enumerate_forms(
    spec: &SearchSpec,
    caps: SearchCaps,
    opts: &RunOptions,
) -> Result<Vec<CanonicalForm>> {
    caps.check(spec)?;
    let mut checkpoint = match &opts.checkpoint {
        Some(path) => Checkpoint::load(path)?,
        None => Checkpoint::default(),
    };
    match &checkpoint.spec {
        Some(s) if s != spec => {
            return Err(Error::PreconditionsNotMet(
                "checkpoint was written for a different search".into(),
            ))
        }
        _ => checkpoint.spec = Some(spec.clone()),
    }

    let mut tasks = Vec::new();
    for n in spec.n_min..=spec.n_max {
        for (i, first) in first_rows(spec, n).into_iter().enumerate() {
            let key = format!("{n}/{i}");
            if !checkpoint.completed.contains_key(&key) {
                tasks.push((key, n, first));
            }
        }
    }
    let mut all: BTreeSet<CanonicalForm> = BTreeSet::new();

    let shared = Mutex::new(checkpoint);
    let work = || -> Result<()> {
        tasks.par_iter().try_for_each(|(key, n, first)| {
            let found = run_partition(spec, *n, first);
            let mut cp = shared.lock().expect("checkpoint lock");
            cp.completed.insert(key.clone(), found.into_iter().collect());
            if let Some(path) = &opts.checkpoint {
                cp.save(path)?;
            }
            Ok(())
        })
    };
    if opts.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?
            .install(work)?;
    } else {
        work()?;
    }
    let checkpoint = shared.into_inner().expect("checkpoint lock");
    for forms in checkpoint.completed.values() {
        all.extend(forms.iter().cloned());
    }
    Ok(all.into_iter().collect())
}

/// One enumerated graph with its spectral annotations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoundGraph {
    pub graph: Multigraph,
    pub certificate: Option<ThreeEigCertificate>,
    /// `three_ev_bound(k)`.
    pub bound: u64,
    /// `q^2 + q + 1` with `q = k - 1`.
    pub extremal_order: u64,
    pub has_multi_edge: bool,
    /// Necessary conditions at the extremal order, when it applies.
    pub extremal_report: Option<ExtremalReport>,
}

impl FoundGraph {
    pub fn order(&self) -> usize {
        self.graph.order()
    }

    pub fn within_bound(&self) -> bool {
        self.order() as u64 <= self.bound
    }

    /// Simple, girth 5 and diameter 2.
    pub fn is_moore_graph(&self) -> bool {
        self.graph.is_simple()
            && self.graph.girth() == Girth::Finite(5)
            && self.graph.diameter() == Some(2)
    }

    pub fn to_record(&self) -> FoundRecord {
        FoundRecord {
            n: self.order(),
            adj: self.graph.rows(),
            certificate: self.certificate.as_ref().map(ThreeEigCertificate::to_json),
            eigenvalues: self.certificate.as_ref().map(|c| {
                c.eigenvalues()
                    .iter()
                    .map(|(v, m)| (v.to_string(), *m))
                    .collect()
            }),
            three_ev_bound: self.bound.to_string(),
            within_bound: self.within_bound(),
            extremal_order: self.order() as u64 == self.extremal_order,
            has_multi_edge: self.has_multi_edge,
            extremal_conditions: self.extremal_report.clone(),
        }
    }
}

/// JSON-lines record of a found graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoundRecord {
    pub n: usize,
    pub adj: Vec<Vec<i64>>,
    pub certificate: Option<CertificateJson>,
    pub eigenvalues: Option<Vec<(String, u64)>>,
    pub three_ev_bound: String,
    pub within_bound: bool,
    pub extremal_order: bool,
    pub has_multi_edge: bool,
    pub extremal_conditions: Option<ExtremalReport>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub spec: SearchSpec,
    /// Number of isomorphism classes enumerated.
    pub enumerated: usize,
    /// Three-eigenvalue hits, in canonical order.
    pub graphs: Vec<FoundGraph>,
}

impl SearchResult {
    pub fn to_json_lines(&self) -> String {
        self.graphs
            .iter()
            .map(|g| serde_json::to_string(&g.to_record()).expect("record serializes") + "\n")
            .collect()
    }
}

fn annotate(g: Multigraph, k: u64) -> Result<FoundGraph> {
    let certificate = certify_three_eigenvalues(&g)?;
    let bound = three_ev_bound(k)
        .exact_value()
        .and_then(|r| num_traits::ToPrimitive::to_u64(&r.to_integer()))
        .expect("integral bound");
    let q = k.saturating_sub(1);
    let extremal_order = q * q + q + 1;
    let extremal_report = match &certificate {
        Some(c) if g.order() as u64 == extremal_order => Some(extremal_conditions_for(&g, c)),
        _ => None,
    };
    Ok(FoundGraph {
        has_multi_edge: g.has_multi_edge(),
        graph: g,
        certificate,
        bound,
        extremal_order,
        extremal_report,
    })
}

/// Enumerates and keeps the graphs with exactly three distinct eigenvalues.
pub fn classify_three_ev(spec: &SearchSpec) -> Result<SearchResult> {
    classify_three_ev_with(spec, SearchCaps::default(), &RunOptions::default())
}

pub fn classify_three_ev_with(
    spec: &SearchSpec,
    caps: SearchCaps,
    opts: &RunOptions,
) -> Result<SearchResult> {
    let forms = enumerate_forms(spec, caps, opts)?;
    let enumerated = forms.len();
    let graphs = forms
        .par_iter()
        .map(|f| annotate(f.to_graph(), u64::from(spec.k)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|f| f.certificate.is_some())
        .collect();
    Ok(SearchResult {
        spec: spec.clone(),
        enumerated,
        graphs,
    })
}

/// No found graph of order at least `q^2 + q + 1` has a multiple edge.
pub fn verify_lemma32(result: &SearchResult) -> bool {
    result
        .graphs
        .iter()
        .filter(|g| g.order() as u64 >= g.extremal_order)
        .all(|g| !g.has_multi_edge)
}
