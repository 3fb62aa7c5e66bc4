//! Immutable simple undirected graphs.
//!
//! Nodes are dense `0..node_count` indices. Neighbor lists are sorted, which
//! keeps edge lookups logarithmic and iteration order deterministic.

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

/// Correspondence between the nodes of an induced subgraph and the graph it
/// was taken from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdMap {
    /// `to_original[new] = old`
    pub to_original: Vec<usize>,
    /// `from_original[old] = Some(new)` for kept nodes.
    pub from_original: Vec<Option<usize>>,
}

impl IdMap {
    pub fn len(&self) -> usize {
        self.to_original.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_original.is_empty()
    }

    /// Restrict a per-node vector of the original graph to the kept nodes.
    pub fn project<T: Clone>(&self, values: &[T]) -> Vec<T> {
        self.to_original.iter().map(|&o| values[o].clone()).collect()
    }
}

/// Descriptive statistics of a network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphStats {
    pub n: usize,
    pub component_count: usize,
    pub mean_degree: f64,
    pub max_degree: usize,
    pub density: f64,
    /// Transitivity: 3 x triangles / connected triples.
    pub global_clustering: f64,
}

impl Graph {
    /// A graph with `n` isolated nodes.
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Build a graph from an edge list. Duplicate and reversed pairs collapse
    /// into one edge; self-loops and out-of-range ids are rejected.
    pub fn from_edge_list(pairs: &[(usize, usize)], n: usize) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::invalid(format!(
                    "edge ({a}, {b}) references a node outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::invalid(format!("self-loop at node {a}")));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        let mut edge_count = 0;
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
            nbrs.dedup();
            edge_count += nbrs.len();
        }
        Ok(Graph {
            adjacency,
            edge_count: edge_count / 2,
        })
    }

    /// Build from neighbor lists that are already symmetric and loop-free.
    pub(crate) fn from_adjacency(mut adjacency: Vec<Vec<usize>>) -> Self {
        let mut ends = 0;
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
            nbrs.dedup();
            ends += nbrs.len();
        }
        debug_assert!(ends % 2 == 0);
        Graph {
            adjacency,
            edge_count: ends / 2,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    /// Sorted neighbors of `i`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Edges as `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, nbrs)| nbrs.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
    }

    /// Subgraph induced by `keep`. Kept nodes are renumbered in ascending order
    /// of their original ids; ids in `keep` that are out of range are ignored.
    pub fn induced_subgraph(&self, keep: &[usize]) -> (Graph, IdMap) {
        let n = self.node_count();
        let mut from_original = vec![None; n];
        let mut to_original: Vec<usize> = keep.iter().copied().filter(|&i| i < n).collect();
        to_original.sort_unstable();
        to_original.dedup();
        for (new, &old) in to_original.iter().enumerate() {
            from_original[old] = Some(new);
        }
        let adjacency = to_original
            .iter()
            .map(|&old| {
                self.adjacency[old]
                    .iter()
                    .filter_map(|&nb| from_original[nb])
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>();
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        (
            Graph {
                adjacency,
                edge_count,
            },
            IdMap {
                to_original,
                from_original,
            },
        )
    }

    /// Connected components, largest first (ties broken by smallest member).
    /// Each component lists its nodes in ascending order.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &w in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        // stable sort keeps discovery order (smallest member) among equal sizes
        out.sort_by(|a, b| b.len().cmp(&a.len()));
        out
    }

    /// Number of triangles, counting each once.
    pub fn triangle_count(&self) -> usize {
        let mut count = 0;
        for (a, b) in self.edges() {
            // count common neighbors c > b so each triangle a<b<c is seen once
            let (na, nb) = (&self.adjacency[a], &self.adjacency[b]);
            let (mut i, mut j) = (0, 0);
            while i < na.len() && j < nb.len() {
                match na[i].cmp(&nb[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        if na[i] > b {
                            count += 1;
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        count
    }

    pub fn stats(&self) -> Result<GraphStats> {
        graph_stats(self)
    }
}

/// Table-style descriptive statistics. Requires at least two nodes.
pub fn graph_stats(g: &Graph) -> Result<GraphStats> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::invalid(format!(
            "graph statistics need at least 2 nodes, got {n}"
        )));
    }
    let m = g.edge_count() as f64;
    let triples: usize = (0..n)
        .map(|i| {
            let d = g.degree(i);
            d * d.saturating_sub(1) / 2
        })
        .sum();
    let global_clustering = if triples == 0 {
        0.0
    } else {
        3.0 * g.triangle_count() as f64 / triples as f64
    };
    Ok(GraphStats {
        n,
        component_count: g.components().len(),
        mean_degree: 2.0 * m / n as f64,
        max_degree: (0..n).map(|i| g.degree(i)).max().unwrap_or(0),
        density: 2.0 * m / (n as f64 * (n as f64 - 1.0)),
        global_clustering,
    })
}
