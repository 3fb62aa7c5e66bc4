//! Network sampling: link-tracing snowball samples and random node samples.

use std::collections::HashSet;

use rand::seq::index;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, IdMap};
use crate::seed::{derive_seed, rng_from_seed};

/// How seeds (wave 0) are chosen.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeedSpec {
    /// Draw this many seeds uniformly without replacement.
    Count(usize),
    /// Use exactly these nodes.
    Nodes(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnowballConfig {
    pub seeds: SeedSpec,
    pub waves: usize,
    /// Maximum number of ties traced from each node; `None` follows all
    /// ties (breadth-first sampling).
    pub max_follow: Option<usize>,
    pub rng_seed: u64,
}

/// A snowball sample and its wave structure. All node ids are local to
/// `graph` unless stated otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct SnowballSample {
    /// Subgraph induced by every sampled node.
    pub graph: Graph,
    /// Wave of each sampled node, in `0..=waves`.
    pub wave_of: Vec<usize>,
    /// Number of waves that were traced. Nodes with this label form the
    /// outermost wave.
    pub waves: usize,
    /// `origin_ids[local] = id in the source graph`
    pub origin_ids: Vec<usize>,
    /// Ties traced while sampling, as `(parent, child)` local ids.
    pub followed_edges: Vec<(usize, usize)>,
}

impl SnowballSample {
    pub fn node_count(&self) -> usize {
        self.wave_of.len()
    }

    /// Nodes whose wave is strictly inside the outermost wave.
    pub fn inner_nodes(&self) -> Vec<usize> {
        (0..self.node_count())
            .filter(|&i| self.wave_of[i] < self.waves)
            .collect()
    }

    pub fn wave_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.waves + 1];
        for &w in &self.wave_of {
            sizes[w] += 1;
        }
        sizes
    }
}

/// Draw a snowball sample.
///
/// Each node of wave `k - 1` traces up to `max_follow` of its not yet traced
/// ties, chosen uniformly at random. Reached nodes that are not already in
/// the sample form wave `k`; a tie that leads back into the sample uses up
/// one of the node's choices. Nodes are claimed by the first tracer to reach
/// them. The returned graph is induced by all sampled nodes, so it also
/// contains ties that were never traced.
pub fn snowball(g: &Graph, cfg: &SnowballConfig) -> Result<SnowballSample> {
    let n = g.node_count();
    let mut rng = rng_from_seed(cfg.rng_seed);
    let seeds: Vec<usize> = match &cfg.seeds {
        SeedSpec::Count(k) => {
            if *k == 0 || *k > n {
                return Err(Error::invalid(format!(
                    "seed count {k} must be in 1..={n}"
                )));
            }
            let mut s = index::sample(&mut rng, n, *k).into_vec();
            s.sort_unstable();
            s
        }
        SeedSpec::Nodes(nodes) => {
            let mut s = nodes.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                return Err(Error::invalid("no seed nodes given"));
            }
            if let Some(&bad) = s.iter().find(|&&i| i >= n) {
                return Err(Error::invalid(format!("seed node {bad} is not in the graph")));
            }
            s
        }
    };
    if cfg.max_follow == Some(0) {
        return Err(Error::invalid("max_follow must be at least 1"));
    }

    let mut wave_of: Vec<Option<usize>> = vec![None; n];
    for &s in &seeds {
        wave_of[s] = Some(0);
    }
    let mut traced = Vec::new();
    let mut traced_ties: HashSet<(usize, usize)> = HashSet::new();
    let tie = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut frontier = seeds;
    let mut candidates = Vec::new();
    for wave in 1..=cfg.waves {
        let mut next = Vec::new();
        for &node in &frontier {
            candidates.clear();
            candidates.extend(
                g.neighbors(node)
                    .iter()
                    .copied()
                    .filter(|&j| !traced_ties.contains(&tie(node, j))),
            );
            if let Some(m) = cfg.max_follow.filter(|&m| m < candidates.len()) {
                // the chosen elements are returned as a separate slice, not
                // necessarily at the front
                let (chosen, _) = candidates.partial_shuffle(&mut rng, m);
                let mut chosen = chosen.to_vec();
                chosen.sort_unstable();
                candidates.clear();
                candidates.extend(chosen);
            }
            for &c in &candidates {
                traced_ties.insert(tie(node, c));
                traced.push((node, c));
                if wave_of[c].is_none() {
                    wave_of[c] = Some(wave);
                    next.push(c);
                }
            }
        }
        frontier = next;
    }

    let sampled: Vec<usize> = (0..n).filter(|&i| wave_of[i].is_some()).collect();
    let (graph, map) = g.induced_subgraph(&sampled);
    let local = |i: usize| map.from_original[i].expect("sampled node");
    Ok(SnowballSample {
        graph,
        wave_of: map
            .to_original
            .iter()
            .map(|&o| wave_of[o].expect("sampled node"))
            .collect(),
        waves: cfg.waves,
        followed_edges: traced.iter().map(|&(a, b)| (local(a), local(b))).collect(),
        origin_ids: map.to_original,
    })
}

/// Subgraph induced by `k` nodes drawn uniformly without replacement.
pub fn random_node_sample(g: &Graph, k: usize, rng_seed: u64) -> Result<(Graph, IdMap)> {
    let n = g.node_count();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("sample size {k} must be in 1..={n}")));
    }
    let mut rng = rng_from_seed(rng_seed);
    let keep = index::sample(&mut rng, n, k).into_vec();
    Ok(g.induced_subgraph(&keep))
}

/// Sample-size distribution of one `(waves, seeds, m)` cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeDistribution {
    pub waves: usize,
    pub seeds: usize,
    pub max_follow: Option<usize>,
    pub replicates: usize,
    pub mean: f64,
    pub sd: f64,
    pub min: usize,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: usize,
}

/// Replicate snowball draws over a grid and summarize the sample sizes.
/// Cells whose seed count exceeds the graph size are skipped.
pub fn sample_size_sweep(
    g: &Graph,
    waves: &[usize],
    seeds: &[usize],
    max_follow: &[Option<usize>],
    replicates: usize,
    rng_seed: u64,
) -> Vec<SizeDistribution> {
    let mut rows = Vec::new();
    for &l in waves {
        for &s in seeds {
            if s == 0 || s > g.node_count() {
                continue;
            }
            for &m in max_follow {
                let mut sizes: Vec<usize> = (0..replicates)
                    .map(|r| {
                        let cfg = SnowballConfig {
                            seeds: SeedSpec::Count(s),
                            waves: l,
                            max_follow: m,
                            rng_seed: derive_seed(
                                rng_seed,
                                &[l as u64, s as u64, m.map_or(0, |m| m as u64 + 1), r as u64],
                            ),
                        };
                        snowball(g, &cfg).map(|x| x.node_count()).unwrap_or(0)
                    })
                    .collect();
                sizes.sort_unstable();
                rows.push(size_row(l, s, m, &sizes));
            }
        }
    }
    rows
}

fn size_row(waves: usize, seeds: usize, max_follow: Option<usize>, sorted: &[usize]) -> SizeDistribution {
    let k = sorted.len();
    let as_f: Vec<f64> = sorted.iter().map(|&v| v as f64).collect();
    let mean = if k == 0 { f64::NAN } else { as_f.iter().sum::<f64>() / k as f64 };
    let sd = if k < 2 {
        0.0
    } else {
        (as_f.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1) as f64).sqrt()
    };
    SizeDistribution {
        waves,
        seeds,
        max_follow,
        replicates: k,
        mean,
        sd,
        min: sorted.first().copied().unwrap_or(0),
        q25: quantile(&as_f, 0.25),
        median: quantile(&as_f, 0.5),
        q75: quantile(&as_f, 0.75),
        max: sorted.last().copied().unwrap_or(0),
    }
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}
