//! Labelled multigraphs (loops and parallel edges allowed) with 2-core,
//! pre-kernel and kernel extraction and connectivity predicates.
//!
//! A [`Multigraph`] stores vertices by compact index `0..vertex_count` and
//! remembers the external label of each one, so sub-structures such as the
//! kernel keep the labels of the graph they came from.

mod connectivity;
mod degseq;
mod structure;

pub use connectivity::{is_connected, is_simple, is_two_connected, is_two_edge_connected};
pub use degseq::DegreeSequence;
pub use structure::{kernel, pre_kernel, two_core};

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Multigraph {
    labels: Vec<usize>,
    /// Compact endpoints, each pair stored with `u <= v`.
    edges: Vec<(usize, usize)>,
}

impl Multigraph {
    /// Graph on `0..vertex_count` with identity labels.
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let edges: Vec<_> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        if let Some(&(_, v)) = edges.iter().find(|&&(_, v)| v >= vertex_count) {
            return Err(Error::domain(format!(
                "edge endpoint {v} out of range for {vertex_count} vertices"
            )));
        }
        Ok(Multigraph { labels: (0..vertex_count).collect(), edges })
    }

    /// Graph whose compact vertex `i` carries `labels[i]`. Edges use compact
    /// indices.
    pub(crate) fn from_parts(labels: Vec<usize>, edges: Vec<(usize, usize)>) -> Self {
        debug_assert!(edges.iter().all(|&(u, v)| u <= v && v < labels.len()));
        Multigraph { labels, edges }
    }

    pub fn empty() -> Self {
        Multigraph { labels: Vec::new(), edges: Vec::new() }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Edges in compact indices.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    /// Edges expressed in external labels.
    pub fn labelled_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(u, v)| {
            let (a, b) = (self.labels[u], self.labels[v]);
            (a.min(b), a.max(b))
        })
    }

    /// Degrees by compact index; a loop adds 2.
    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.vertex_count()];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(u, v)| u == v).count()
    }

    /// Sub-multigraph induced by the vertices with `keep[v]`, labels preserved.
    pub fn induced(&self, keep: &[bool]) -> Multigraph {
        let mut remap = vec![usize::MAX; self.vertex_count()];
        let mut labels = Vec::new();
        for (v, &k) in keep.iter().enumerate() {
            if k {
                remap[v] = labels.len();
                labels.push(self.labels[v]);
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| keep[u] && keep[v])
            .map(|&(u, v)| (remap[u], remap[v]))
            .collect();
        Multigraph { labels, edges }
    }

    /// Sorted labels and sorted labelled edge list; two graphs are equal
    /// iff these agree.
    pub fn canonical(&self) -> (Vec<usize>, Vec<(usize, usize)>) {
        let mut labels = self.labels.clone();
        labels.sort_unstable();
        let mut edges: Vec<_> = self.labelled_edges().collect();
        edges.sort_unstable();
        (labels, edges)
    }

    pub(crate) fn adjacency(&self) -> Adjacency {
        Adjacency::build(self.vertex_count(), &self.edges)
    }

    /// Edge-list text: `"n m"` then one `"u v"` line per edge, using labels.
    /// `n` is one more than the largest label so every endpoint is in range.
    pub fn to_edge_list(&self) -> String {
        let universe = self.labels.iter().max().map_or(0, |&l| l + 1);
        let mut out = format!("{} {}\n", universe, self.edge_count());
        for (u, v) in self.labelled_edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace().map(|t| {
            t.parse::<usize>().map_err(|e| Error::Parse(format!("bad integer {t:?}: {e}")))
        });
        let mut next = |what: &str| {
            tokens.next().unwrap_or_else(|| Err(Error::Parse(format!("missing {what}"))))
        };
        let n = next("vertex count")?;
        let m = next("edge count")?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let u = next("edge endpoint")?;
            let v = next("edge endpoint")?;
            edges.push((u, v));
        }
        if tokens.next().is_some() {
            return Err(Error::Parse("trailing data after edge list".into()));
        }
        Multigraph::new(n, edges)
    }
}

impl PartialEq for Multigraph {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl Eq for Multigraph {}

/// CSR incidence lists. Each non-loop edge appears at both endpoints,
/// a loop appears once at its vertex.
pub(crate) struct Adjacency {
    offsets: Vec<usize>,
    incidences: Vec<(usize, usize)>,
}

impl Adjacency {
    fn build(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut counts = vec![0usize; n + 1];
        for &(u, v) in edges {
            counts[u + 1] += 1;
            if u != v {
                counts[v + 1] += 1;
            }
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let offsets = counts.clone();
        let mut fill = counts;
        let mut incidences = vec![(0, 0); offsets[n]];
        for (e, &(u, v)) in edges.iter().enumerate() {
            incidences[fill[u]] = (v, e);
            fill[u] += 1;
            if u != v {
                incidences[fill[v]] = (u, e);
                fill[v] += 1;
            }
        }
        Adjacency { offsets, incidences }
    }

    /// `(neighbour, edge id)` pairs at `v`.
    pub(crate) fn at(&self, v: usize) -> &[(usize, usize)] {
        &self.incidences[self.offsets[v]..self.offsets[v + 1]]
    }

    pub(crate) fn len(&self) -> usize {
        self.offsets.len() - 1
    }
}
