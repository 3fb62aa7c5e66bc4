//! The autologistic actor attribute model.
//!
//! `P(Y = y | X = x) = exp(theta . z(y, x, w)) / kappa(theta)` with the five
//! statistics
//!
//! * Density    `sum_i y_i`
//! * Activity   `sum_i y_i deg(i)`
//! * Contagion  `sum_{(i,j) in E} y_i y_j`
//! * Binary     `sum_i y_i u_i`
//! * Continuous `sum_i y_i v_i`
//!
//! Outcomes are simulated with a single-node toggle Metropolis chain. The
//! chain can be restricted to a subset of free nodes, which is how
//! conditional estimation on snowball samples holds the outermost wave fixed.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::effects::{ParameterVector, StatisticsVector};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed::rng_from_seed;

/// Per-node covariates and outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeTable {
    pub binary: Vec<bool>,
    pub continuous: Vec<f64>,
    pub outcome: Vec<bool>,
}

impl AttributeTable {
    pub fn new(binary: Vec<bool>, continuous: Vec<f64>, outcome: Vec<bool>) -> Result<Self> {
        let t = AttributeTable {
            binary,
            continuous,
            outcome,
        };
        let n = t.binary.len();
        if t.continuous.len() != n || t.outcome.len() != n {
            return Err(Error::invalid(format!(
                "attribute columns differ in length: binary {}, continuous {}, outcome {}",
                n,
                t.continuous.len(),
                t.outcome.len()
            )));
        }
        if let Some(i) = t.continuous.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "continuous covariate of node {i} is not finite"
            )));
        }
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.binary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.binary.is_empty()
    }

    /// Same covariates with a different outcome vector.
    pub fn with_outcome(&self, outcome: Vec<bool>) -> Result<Self> {
        AttributeTable::new(self.binary.clone(), self.continuous.clone(), outcome)
    }

    pub fn positive_count(&self) -> usize {
        self.outcome.iter().filter(|&&y| y).count()
    }

    /// Rows for the nodes of an induced subgraph, in subgraph order.
    pub fn project(&self, to_original: &[usize]) -> Self {
        AttributeTable {
            binary: to_original.iter().map(|&o| self.binary[o]).collect(),
            continuous: to_original.iter().map(|&o| self.continuous[o]).collect(),
            outcome: to_original.iter().map(|&o| self.outcome[o]).collect(),
        }
    }

    pub(crate) fn check_matches(&self, g: &Graph) -> Result<()> {
        if self.len() != g.node_count() {
            return Err(Error::invalid(format!(
                "attribute table has {} rows but the graph has {} nodes",
                self.len(),
                g.node_count()
            )));
        }
        Ok(())
    }
}

/// Full recount of the sufficient statistics.
pub fn statistics(g: &Graph, attrs: &AttributeTable) -> Result<StatisticsVector> {
    attrs.check_matches(g)?;
    Ok(count_statistics(g, attrs, &attrs.outcome))
}

pub(crate) fn count_statistics(g: &Graph, attrs: &AttributeTable, y: &[bool]) -> StatisticsVector {
    let mut z = StatisticsVector::ZERO;
    for i in 0..g.node_count() {
        if y[i] {
            z.0[0] += 1.0;
            z.0[1] += g.degree(i) as f64;
            if attrs.binary[i] {
                z.0[3] += 1.0;
            }
            z.0[4] += attrs.continuous[i];
        }
    }
    for (a, b) in g.edges() {
        if y[a] && y[b] {
            z.0[2] += 1.0;
        }
    }
    z
}

/// Change in the statistics when `y_i` goes from 0 to 1, all other
/// outcomes (taken from `attrs.outcome`) fixed.
pub fn change_statistics(g: &Graph, attrs: &AttributeTable, i: usize) -> StatisticsVector {
    change_for(g, attrs, &attrs.outcome, i)
}

#[inline]
fn change_for(g: &Graph, attrs: &AttributeTable, y: &[bool], i: usize) -> StatisticsVector {
    let nbrs = g.neighbors(i);
    let positive_nbrs = nbrs.iter().filter(|&&j| y[j]).count();
    StatisticsVector([
        1.0,
        nbrs.len() as f64,
        positive_nbrs as f64,
        if attrs.binary[i] { 1.0 } else { 0.0 },
        attrs.continuous[i],
    ])
}

/// Unnormalized log-probability `theta . z`.
pub fn log_weight(theta: &ParameterVector, z: &StatisticsVector) -> f64 {
    theta.dot(z)
}

/// Settings for [`simulate_outcomes`].
#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub burn_in: usize,
    pub spacing: usize,
    pub sample_count: usize,
    /// Nodes whose outcomes may toggle; `None` means every node.
    pub free_nodes: Option<Vec<usize>>,
    /// Starting outcome vector; `None` starts free nodes at 0 and fixed nodes
    /// at their observed outcome.
    pub initial: Option<Vec<bool>>,
    pub rng_seed: u64,
}

impl SimulationConfig {
    pub fn new(burn_in: usize, spacing: usize, sample_count: usize, rng_seed: u64) -> Self {
        SimulationConfig {
            burn_in,
            spacing,
            sample_count,
            free_nodes: None,
            initial: None,
            rng_seed,
        }
    }
}

/// Outcome of a single Metropolis proposal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub node: usize,
    pub accepted: bool,
}

/// A Metropolis chain over outcome vectors on a fixed graph and covariates.
///
/// Statistics are tracked incrementally from change statistics; debug builds
/// verify the running tally against a full recount whenever it is read.
pub struct OutcomeChain<'a> {
    graph: &'a Graph,
    attrs: &'a AttributeTable,
    theta: ParameterVector,
    free: Vec<usize>,
    y: Vec<bool>,
    stats: StatisticsVector,
    rng: ChaCha8Rng,
}

impl<'a> OutcomeChain<'a> {
    /// Start a chain at `initial`. Only nodes in `free` are ever proposed.
    pub fn new(
        graph: &'a Graph,
        attrs: &'a AttributeTable,
        theta: ParameterVector,
        free: Vec<usize>,
        initial: Vec<bool>,
        rng_seed: u64,
    ) -> Result<Self> {
        attrs.check_matches(graph)?;
        if free.is_empty() {
            return Err(Error::invalid("no free nodes to simulate"));
        }
        if let Some(&bad) = free.iter().find(|&&i| i >= graph.node_count()) {
            return Err(Error::invalid(format!("free node {bad} is not in the graph")));
        }
        if initial.len() != graph.node_count() {
            return Err(Error::invalid(format!(
                "initial outcome vector has {} entries, graph has {} nodes",
                initial.len(),
                graph.node_count()
            )));
        }
        if !theta.is_finite() {
            return Err(Error::invalid("parameters must be finite"));
        }
        let stats = count_statistics(graph, attrs, &initial);
        Ok(OutcomeChain {
            graph,
            attrs,
            theta,
            free,
            y: initial,
            stats,
            rng: rng_from_seed(rng_seed),
        })
    }

    pub fn set_theta(&mut self, theta: ParameterVector) {
        self.theta = theta;
    }

    pub fn theta(&self) -> ParameterVector {
        self.theta
    }

    pub fn free_nodes(&self) -> &[usize] {
        &self.free
    }

    pub fn outcomes(&self) -> &[bool] {
        &self.y
    }

    pub fn statistics(&self) -> StatisticsVector {
        debug_assert!({
            let full = count_statistics(self.graph, self.attrs, &self.y);
            (0..5).all(|k| (full.0[k] - self.stats.0[k]).abs() <= 1e-6 * (1.0 + full.0[k].abs()))
        });
        self.stats
    }

    /// Propose toggling one uniformly chosen free node.
    #[inline]
    pub fn step(&mut self) -> Step {
        let node = self.free[self.rng.random_range(0..self.free.len())];
        let mut delta = change_for(self.graph, self.attrs, &self.y, node);
        if self.y[node] {
            delta = -delta;
        }
        let log_ratio = self.theta.dot(&delta);
        let accepted = log_ratio >= 0.0 || self.rng.random::<f64>() < log_ratio.exp();
        if accepted {
            self.y[node] = !self.y[node];
            self.stats += delta;
        }
        Step { node, accepted }
    }

    pub fn run(&mut self, steps: usize) {
        for _ in 0..steps {
            self.step();
        }
    }
}

/// Simulate outcome vectors by single-node toggle Metropolis sampling.
///
/// Returns `sample_count` vectors taken every `spacing` proposals after
/// `burn_in` proposals. Nodes outside `free_nodes` keep their starting value.
pub fn simulate_outcomes(
    g: &Graph,
    attrs: &AttributeTable,
    theta: &ParameterVector,
    cfg: &SimulationConfig,
) -> Result<Vec<Vec<bool>>> {
    if cfg.spacing == 0 || cfg.sample_count == 0 {
        return Err(Error::invalid("spacing and sample_count must be at least 1"));
    }
    attrs.check_matches(g)?;
    let free = cfg
        .free_nodes
        .clone()
        .unwrap_or_else(|| (0..g.node_count()).collect());
    let initial = match &cfg.initial {
        Some(y) => y.clone(),
        None => {
            let mut y = attrs.outcome.clone();
            for &i in &free {
                if i < y.len() {
                    y[i] = false;
                }
            }
            y
        }
    };
    let mut chain = OutcomeChain::new(g, attrs, *theta, free, initial, cfg.rng_seed)?;
    chain.run(cfg.burn_in);
    let mut out = Vec::with_capacity(cfg.sample_count);
    for _ in 0..cfg.sample_count {
        chain.run(cfg.spacing);
        debug_assert!(chain.statistics().is_finite());
        out.push(chain.outcomes().to_vec());
    }
    Ok(out)
}

/// Largest graph accepted by [`exact_moments`].
pub const EXACT_MAX_NODES: usize = 20;

/// Moments of the model computed by enumerating every outcome vector.
#[derive(Debug, Clone)]
pub struct ExactMoments {
    pub mean: StatisticsVector,
    pub covariance: [[f64; 5]; 5],
    /// `ln kappa(theta)`.
    pub log_kappa: f64,
}

impl ExactMoments {
    pub fn kappa(&self) -> f64 {
        self.log_kappa.exp()
    }
}

/// Exact mean, covariance and normalizing constant by full enumeration of
/// all `2^n` outcome vectors. Every vector's statistics are recounted from
/// scratch.
pub fn exact_moments(
    g: &Graph,
    attrs: &AttributeTable,
    theta: &ParameterVector,
) -> Result<ExactMoments> {
    attrs.check_matches(g)?;
    let n = g.node_count();
    if n > EXACT_MAX_NODES {
        return Err(Error::invalid(format!(
            "exact enumeration is limited to {EXACT_MAX_NODES} nodes, graph has {n}"
        )));
    }
    let states = 1usize << n;
    let mut zs = Vec::with_capacity(states);
    let mut logw = Vec::with_capacity(states);
    let mut y = vec![false; n];
    for mask in 0..states {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = mask >> i & 1 == 1;
        }
        let z = count_statistics(g, attrs, &y);
        logw.push(theta.dot(&z));
        zs.push(z);
    }
    let max = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logw.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = weights.iter().sum();
    let mut mean = [0.0; 5];
    for (z, w) in zs.iter().zip(&weights) {
        for k in 0..5 {
            mean[k] += w * z.0[k];
        }
    }
    mean.iter_mut().for_each(|m| *m /= total);
    let mut cov = [[0.0; 5]; 5];
    for (z, w) in zs.iter().zip(&weights) {
        for a in 0..5 {
            for b in 0..5 {
                cov[a][b] += w * (z.0[a] - mean[a]) * (z.0[b] - mean[b]);
            }
        }
    }
    cov.iter_mut().flatten().for_each(|c| *c /= total);
    Ok(ExactMoments {
        mean: StatisticsVector(mean),
        covariance: cov,
        log_kappa: max + total.ln(),
    })
}
