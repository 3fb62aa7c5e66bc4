//! Test-network generation from an exponential random graph model with
//! edge, alternating k-star, alternating k-triangle and alternating
//! two-path statistics.
//!
//! With decay `lambda` and `r = 1 - 1/lambda` the statistics are the
//! geometrically weighted closed forms
//!
//! ```text
//! L   = |E|
//! AS  = lambda^2 * sum_i [ r^deg(i) - 1 + deg(i)/lambda ]
//! AT  = lambda   * sum_{(i,j) in E} [ 1 - r^SP(i,j) ]
//! A2P = lambda   * sum_{i<j}        [ 1 - r^SP(i,j) ]
//! ```
//!
//! where `SP(i,j)` is the number of common neighbors. `AS` equals the
//! alternating sum `S2 - S3/lambda + S4/lambda^2 - ...` of k-star counts.

use fixedbitset::FixedBitSet;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErgmParams {
    pub edge: f64,
    pub alt_k_star: f64,
    pub alt_k_triangle: f64,
    pub alt_two_path: f64,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    pub n: usize,
}

fn default_lambda() -> f64 {
    2.0
}

impl ErgmParams {
    /// Parameters of the 500-node simulated network used in the missing
    /// data experiments.
    pub fn reference_500() -> Self {
        ErgmParams {
            edge: -4.0,
            alt_k_star: 0.2,
            alt_k_triangle: 1.0,
            alt_two_path: -0.2,
            lambda: 2.0,
            n: 500,
        }
    }

    fn theta(&self) -> [f64; 4] {
        [self.edge, self.alt_k_star, self.alt_k_triangle, self.alt_two_path]
    }

    fn validate(&self) -> Result<()> {
        if !(self.lambda > 1.0) || !self.lambda.is_finite() {
            return Err(Error::invalid(format!("lambda must exceed 1, got {}", self.lambda)));
        }
        if self.n < 2 {
            return Err(Error::invalid(format!("need at least 2 nodes, got {}", self.n)));
        }
        if self.theta().iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("ERGM parameters must be finite"));
        }
        Ok(())
    }
}

/// `(L, AS, AT, A2P)` computed from scratch.
pub fn ergm_statistics(g: &Graph, lambda: f64) -> [f64; 4] {
    let r = 1.0 - 1.0 / lambda;
    let n = g.node_count();
    let edges = g.edge_count() as f64;
    let alt_star = lambda
        * lambda
        * (0..n)
            .map(|i| {
                let d = g.degree(i) as f64;
                r.powf(d) - 1.0 + d / lambda
            })
            .sum::<f64>();
    let mut alt_tri = 0.0;
    let mut alt_two_path = 0.0;
    for a in 0..n {
        for b in a + 1..n {
            let sp = common_neighbors(g.neighbors(a), g.neighbors(b));
            if sp == 0 {
                continue;
            }
            let w = 1.0 - r.powi(sp as i32);
            alt_two_path += w;
            if g.has_edge(a, b) {
                alt_tri += w;
            }
        }
    }
    [edges, alt_star, lambda * alt_tri, lambda * alt_two_path]
}

fn common_neighbors(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Mutable graph state for edge-toggle MCMC: bit rows for O(n/64) shared
/// partner counts plus neighbor lists for iteration.
pub(crate) struct ToggleGraph {
    rows: Vec<FixedBitSet>,
    nbrs: Vec<Vec<usize>>,
    /// `pow_r[k] = r^k`
    pow_r: Vec<f64>,
    lambda: f64,
}

impl ToggleGraph {
    pub(crate) fn empty(n: usize, lambda: f64) -> Self {
        let r = 1.0 - 1.0 / lambda;
        let pow_r = (0..=n).scan(1.0, |acc, _| {
            let v = *acc;
            *acc *= r;
            Some(v)
        });
        ToggleGraph {
            rows: vec![FixedBitSet::with_capacity(n); n],
            nbrs: vec![Vec::new(); n],
            pow_r: pow_r.collect(),
            lambda,
        }
    }

    #[cfg(test)]
    pub(crate) fn from_graph(g: &Graph, lambda: f64) -> Self {
        let mut t = ToggleGraph::empty(g.node_count(), lambda);
        for (a, b) in g.edges() {
            t.add(a, b);
        }
        t
    }

    fn has(&self, a: usize, b: usize) -> bool {
        self.rows[a].contains(b)
    }

    fn add(&mut self, a: usize, b: usize) {
        self.rows[a].insert(b);
        self.rows[b].insert(a);
        self.nbrs[a].push(b);
        self.nbrs[b].push(a);
    }

    fn remove(&mut self, a: usize, b: usize) {
        self.rows[a].set(b, false);
        self.rows[b].set(a, false);
        let pa = self.nbrs[a].iter().position(|&x| x == b).expect("edge present");
        self.nbrs[a].swap_remove(pa);
        let pb = self.nbrs[b].iter().position(|&x| x == a).expect("edge present");
        self.nbrs[b].swap_remove(pb);
    }

    fn shared(&self, a: usize, b: usize) -> usize {
        self.rows[a].intersection_count(&self.rows[b])
    }

    /// Change in `(L, AS, AT, A2P)` from adding the absent edge `(i, j)`.
    pub(crate) fn add_delta(&self, i: usize, j: usize) -> [f64; 4] {
        debug_assert!(!self.has(i, j));
        let p = &self.pow_r;
        let (di, dj) = (self.nbrs[i].len(), self.nbrs[j].len());
        let d_star = self.lambda * ((1.0 - p[di]) + (1.0 - p[dj]));

        let sp_ij = self.shared(i, j);
        let mut d_tri = self.lambda * (1.0 - p[sp_ij]);
        for k in self.rows[i].intersection(&self.rows[j]) {
            d_tri += p[self.shared(i, k)] + p[self.shared(j, k)];
        }

        let mut d_two_path = 0.0;
        for &k in &self.nbrs[j] {
            d_two_path += p[self.shared(i, k)];
        }
        for &k in &self.nbrs[i] {
            d_two_path += p[self.shared(j, k)];
        }
        [1.0, d_star, d_tri, d_two_path]
    }

    pub(crate) fn to_graph(&self) -> Graph {
        Graph::from_adjacency(self.nbrs.clone())
    }
}

/// Simulate a graph by single-dyad toggle Metropolis sampling from the
/// empty graph, returning the state after `burn_in` proposals.
pub fn ergm_simulate(p: &ErgmParams, burn_in: u64, rng_seed: u64) -> Result<Graph> {
    p.validate()?;
    let theta = p.theta();
    let n = p.n;
    let mut state = ToggleGraph::empty(n, p.lambda);
    let mut rng = rng_from_seed(rng_seed);
    for _ in 0..burn_in {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let present = state.has(i, j);
        if present {
            state.remove(i, j);
        }
        let delta = state.add_delta(i, j);
        let mut log_ratio: f64 = theta.iter().zip(delta).map(|(t, d)| t * d).sum();
        if present {
            log_ratio = -log_ratio;
        }
        let accepted = log_ratio >= 0.0 || rng.random::<f64>() < log_ratio.exp();
        // a present edge stays when the removal is rejected; an absent edge
        // is added when the addition is accepted
        if accepted != present {
            state.add(i, j);
        }
    }
    Ok(state.to_graph())
}
