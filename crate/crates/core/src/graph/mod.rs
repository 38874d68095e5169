//! Finite simple graphs with structured vertex labels, and the generators
//! for the W(n,k) family and its relatives.
//!
//! Vertices of W(n,k) are `v(i,j)` and `w(i,j)` for ring `i` in `1..=n` and
//! column `j` in `1..=k`. The canonical vertex order is ring-major and
//! column-minor with the whole V side first:
//!
//! ```text
//! v(1,1) .. v(1,k), v(2,1) .. v(n,k), w(1,1) .. w(n,k)
//! ```
//!
//! so `A^2 - (k+1)I` is literally block diagonal and each ring occupies `k`
//! consecutive indices.

mod families;
mod io;
mod matrix;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use families::{
    build_complete_bipartite_minus_matching, build_cube, build_cycle, build_heawood, build_path,
    build_pnk, build_pnk_with_cap, build_wnk, build_wnk_with_cap, wnk_index, DEFAULT_SIZE_CAP,
};
pub use io::{load_graph, save_graph, GraphFile, FORMAT_VERSION};
pub use matrix::{
    adjacency_matrix, column_adjacency, cycle_multigraph_adjacency, ring_adjacency,
    square_decompose, IntMatrix, SquareBlocks,
};

/// Bipartition class of a labelled vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    V,
    W,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexLabel {
    pub side: Side,
    /// 1-based ring index `i`.
    pub ring: usize,
    /// 1-based column index `j`.
    pub column: usize,
}

impl VertexLabel {
    pub fn v(ring: usize, column: usize) -> Self {
        VertexLabel {
            side: Side::V,
            ring,
            column,
        }
    }

    pub fn w(ring: usize, column: usize) -> Self {
        VertexLabel {
            side: Side::W,
            ring,
            column,
        }
    }
}

impl std::fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self.side {
            Side::V => 'v',
            Side::W => 'w',
        };
        write!(f, "{s}({},{})", self.ring, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Wnk { n: usize, k: usize },
    Pnk { n: usize, k: usize },
    Heawood,
    Cycle { n: usize },
    Other,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Wnk { .. } => "wnk",
            Family::Pnk { .. } => "pnk",
            Family::Heawood => "heawood",
            Family::Cycle { .. } => "cycle",
            Family::Other => "other",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::Wnk { n, k } => write!(f, "W({n},{k})"),
            Family::Pnk { n, k } => write!(f, "P({n},{k})"),
            Family::Heawood => f.write_str("Heawood"),
            Family::Cycle { n } => write!(f, "C({n})"),
            Family::Other => f.write_str("other"),
        }
    }
}

/// An undirected simple graph. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    labels: Option<Vec<VertexLabel>>,
    family: Family,
}

impl Graph {
    /// Build a graph from an edge list, rejecting loops, out-of-range
    /// endpoints and repeated edges (in either orientation).
    pub fn from_edges(
        order: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        labels: Option<Vec<VertexLabel>>,
        family: Family,
    ) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != order {
                return Err(Error::Validation(format!(
                    "{} labels for {order} vertices",
                    l.len()
                )));
            }
        }
        let mut adj = vec![Vec::new(); order];
        for (u, v) in edges {
            if u >= order || v >= order {
                return Err(Error::Validation(format!(
                    "edge [{u}, {v}] out of range for order {order}"
                )));
            }
            if u == v {
                return Err(Error::Validation(format!("loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, nbrs) in adj.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if let Some(w) = nbrs.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (u.min(w[0]), u.max(w[0]));
                return Err(Error::Validation(format!("duplicate edge [{a}, {b}]")));
            }
        }
        Ok(Graph {
            adj,
            labels,
            family,
        })
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn labels(&self) -> Option<&[VertexLabel]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> Option<VertexLabel> {
        self.labels.as_ref().map(|l| l[v])
    }

    /// Index of the vertex carrying `label`, if the graph is labelled.
    pub fn find(&self, label: VertexLabel) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|&l| l == label)
    }

    /// Sorted neighbour list.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|n| n.len() == d).then_some(d)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, n)| n.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// A proper 2-colouring (`false`/`true` per vertex), or `None` if the
    /// graph has an odd cycle. Each component's first vertex gets `false`.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut color: Vec<Option<bool>> = vec![None; self.order()];
        let mut queue = VecDeque::new();
        for s in 0..self.order() {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &v in &self.adj[u] {
                    match color[v] {
                        None => {
                            color[v] = Some(!cu);
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(Option::unwrap).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    pub fn is_connected(&self) -> bool {
        if self.order() == 0 {
            return true;
        }
        self.bfs_distances(0).iter().all(Option::is_some)
    }

    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.order()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap() + 1;
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let n = self.order();
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            dist.fill(usize::MAX);
            parent.fill(usize::MAX);
            dist[s] = 0;
            queue.clear();
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    } else if parent[u] != v {
                        let len = dist[u] + dist[v] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Induced subgraph on the vertices not in `removed`, keeping relative
    /// order and labels.
    pub fn without_vertices(&self, removed: &[usize], family: Family) -> Result<Graph> {
        let mut keep = vec![true; self.order()];
        for &r in removed {
            keep[r] = false;
        }
        let mut new_index = vec![usize::MAX; self.order()];
        let mut next = 0;
        for (v, &kept) in keep.iter().enumerate() {
            if kept {
                new_index[v] = next;
                next += 1;
            }
        }
        let edges: Vec<_> = self
            .edges()
            .filter(|&(u, v)| keep[u] && keep[v])
            .map(|(u, v)| (new_index[u], new_index[v]))
            .collect();
        let labels = self.labels.as_ref().map(|l| {
            l.iter()
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(l, _)| *l)
                .collect()
        });
        Graph::from_edges(next, edges, labels, family)
    }

    /// Degree value -> number of vertices with that degree, ascending.
    pub fn degree_profile(&self) -> Vec<(usize, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for d in self.degrees() {
            *counts.entry(d).or_insert(0usize) += 1;
        }
        counts.into_iter().collect()
    }
}
