//! Simulation experiments: replicate outcome vectors on a fixed network,
//! apply a sampling scheme to each, estimate, and summarize RMSE and
//! type I/II error rates with Wilson and BCa intervals.
//!
//! All randomness is derived from the master seed. Sampling and estimation
//! seeds depend on the cell's parameters and the replicate index, not on the
//! cell's position in a sweep, so a cell gives the same result alone or as
//! part of any grid.

use std::fmt;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};
use statrs::distribution::{ContinuousCDF, Normal as StdNormal};

use crate::effects::{Effect, ParameterVector, NUM_EFFECTS};
use crate::ergm::{ergm_simulate, ErgmParams};
use crate::error::{Error, Result};
use crate::estimate::{conditional_estimate, estimate, EstimationConfig, EstimationResult};
use crate::graph::Graph;
use crate::model::{simulate_outcomes, AttributeTable, SimulationConfig};
use crate::sampling::{random_node_sample, snowball, SeedSpec, SnowballConfig};
use crate::seed::{derive_seed, rng_from_seed, stream};

/// Normal quantile for two-sided 95% intervals.
pub const Z_95: f64 = 1.959964;

/// Bootstrap resamples used for BCa intervals.
pub const BCA_REPLICATES: usize = 20_000;

pub fn rmse(estimates: &[f64], truth: f64) -> Result<f64> {
    if estimates.is_empty() {
        return Err(Error::invalid("rmse of an empty list"));
    }
    let mse = estimates.iter().map(|e| (e - truth).powi(2)).sum::<f64>() / estimates.len() as f64;
    Ok(mse.sqrt())
}

/// Failure to detect a nonzero effect: wrong sign, or `|estimate| <= 2 se`.
pub fn type2_indicator(estimate: f64, se: f64, truth: f64) -> bool {
    estimate.signum() != truth.signum() || estimate.abs() <= 2.0 * se
}

/// False detection of a zero effect: `|estimate| > 2 se`.
pub fn type1_indicator(estimate: f64, se: f64) -> bool {
    estimate.abs() > 2.0 * se
}

/// Wilson score interval for `k` successes in `n` trials at `z = 1.959964`.
pub fn wilson_interval(k: usize, n: usize) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::invalid("Wilson interval needs at least one trial"));
    }
    if k > n {
        return Err(Error::invalid(format!("{k} successes out of {n} trials")));
    }
    let (kf, nf) = (k as f64, n as f64);
    let p = kf / nf;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = Z_95 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    let lo = if k == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (center + half).min(1.0) };
    Ok((lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BcaInterval {
    pub lo: f64,
    pub hi: f64,
    pub z0: f64,
    pub acceleration: f64,
    /// All values were equal; the interval has zero width.
    pub degenerate: bool,
}

/// Bias-corrected and accelerated bootstrap interval for the mean.
///
/// Each of `replicates` resamples draws `n` indices with
/// `random_range(0..n)` from a ChaCha8 stream seeded by `rng_seed`. The bias
/// term is `z0 = Phi^-1(q)` where `q` is the fraction of resample means below
/// the observed mean, ties counting one half, clamped to
/// `[1/(2R), 1 - 1/(2R)]`; the acceleration is the jackknife skewness
/// `sum d^3 / (6 (sum d^2)^1.5)` with `d = mean(jack) - jack_i`. Endpoint
/// `alpha` is the order statistic `boot[ceil(alpha R) - 1]` of the sorted
/// resample means.
pub fn bca_interval(values: &[f64], confidence: f64, replicates: usize, rng_seed: u64) -> Result<BcaInterval> {
    use rand::Rng;
    let n = values.len();
    if n < 2 {
        return Err(Error::invalid("BCa interval needs at least two values"));
    }
    if !(confidence > 0.0 && confidence < 1.0) || replicates < 2 {
        return Err(Error::invalid("confidence must be in (0, 1) and replicates at least 2"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("BCa interval of non-finite values"));
    }
    let sum: f64 = values.iter().sum();
    let mean = sum / n as f64;
    if values.iter().all(|&v| v == values[0]) {
        return Ok(BcaInterval { lo: values[0], hi: values[0], z0: 0.0, acceleration: 0.0, degenerate: true });
    }

    let mut rng = rng_from_seed(rng_seed);
    let mut boot: Vec<f64> = (0..replicates)
        .map(|_| (0..n).map(|_| values[rng.random_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    let r = replicates as f64;
    let below = boot.iter().filter(|&&b| b < mean).count() as f64;
    let ties = boot.iter().filter(|&&b| b == mean).count() as f64;
    let below = (below + 0.5 * ties) / r;
    let std = StdNormal::standard();
    let z0 = std.inverse_cdf(below.clamp(0.5 / r, 1.0 - 0.5 / r));

    let jack: Vec<f64> = values.iter().map(|v| (sum - v) / (n - 1) as f64).collect();
    let jack_mean = jack.iter().sum::<f64>() / n as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for j in &jack {
        let d = jack_mean - j;
        num += d * d * d;
        den += d * d;
    }
    let acceleration = if den > 0.0 { num / (6.0 * den.powf(1.5)) } else { 0.0 };

    boot.sort_by(f64::total_cmp);
    let tail = (1.0 - confidence) / 2.0;
    let endpoint = |alpha: f64| {
        let z = std.inverse_cdf(alpha);
        let adjusted = std.cdf(z0 + (z0 + z) / (1.0 - acceleration * (z0 + z)));
        let idx = ((adjusted * r).ceil() as usize).clamp(1, replicates) - 1;
        boot[idx]
    };
    Ok(BcaInterval {
        lo: endpoint(tail),
        hi: endpoint(1.0 - tail),
        z0,
        acceleration,
        degenerate: false,
    })
}

/// Limit on ties traced per node; `None` traces all of them. Written as an
/// integer or `"inf"` in config files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FollowLimit(pub Option<usize>);

impl fmt::Display for FollowLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(m) => write!(f, "{m}"),
            None => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for FollowLimit {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("inf") {
            return Ok(FollowLimit(None));
        }
        match s.parse::<usize>() {
            Ok(m) if m >= 1 => Ok(FollowLimit(Some(m))),
            _ => Err(Error::invalid(format!("tie limit must be a positive integer or inf, got {s:?}"))),
        }
    }
}

impl Serialize for FollowLimit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            Some(m) => s.serialize_u64(m as u64),
            None => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for FollowLimit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = FollowLimit;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a positive integer or \"inf\"")
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> std::result::Result<FollowLimit, E> {
                if v == 0 {
                    return Err(E::custom("tie limit must be at least 1"));
                }
                Ok(FollowLimit(Some(v as usize)))
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> std::result::Result<FollowLimit, E> {
                if v < 1 {
                    return Err(E::custom("tie limit must be at least 1"));
                }
                Ok(FollowLimit(Some(v as usize)))
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> std::result::Result<FollowLimit, E> {
                v.parse().map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NetworkSource {
    File {
        path: PathBuf,
        #[serde(default)]
        one_based: bool,
    },
    Ergm {
        params: ErgmParams,
        burn_in: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AttributeSpec {
    /// Fraction of nodes (rounded) given binary covariate 1.
    pub binary_fraction: f64,
    pub continuous_mean: f64,
    pub continuous_sd: f64,
}

impl Default for AttributeSpec {
    fn default() -> Self {
        AttributeSpec {
            binary_fraction: 0.5,
            continuous_mean: 0.0,
            continuous_sd: 1.0,
        }
    }
}

/// Covariates for `n` nodes: exactly `round(binary_fraction n)` ones placed
/// uniformly at random, and independent normal continuous values. Outcomes
/// are all zero.
pub fn draw_covariates(n: usize, spec: &AttributeSpec, rng_seed: u64) -> Result<AttributeTable> {
    if !(0.0..=1.0).contains(&spec.binary_fraction) {
        return Err(Error::invalid("binary fraction must lie in [0, 1]"));
    }
    let normal = Normal::new(spec.continuous_mean, spec.continuous_sd)
        .map_err(|e| Error::invalid(format!("continuous law: {e}")))?;
    let mut rng = rng_from_seed(rng_seed);
    let ones = (spec.binary_fraction * n as f64).round() as usize;
    let mut binary: Vec<bool> = (0..n).map(|i| i < ones).collect();
    binary.shuffle(&mut rng);
    let continuous = (0..n).map(|_| normal.sample(&mut rng)).collect();
    AttributeTable::new(binary, continuous, vec![false; n])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SamplingScheme {
    None,
    RandomNode {
        sizes: Vec<usize>,
    },
    Snowball {
        waves: Vec<usize>,
        seeds: Vec<usize>,
        max_follow: Vec<FollowLimit>,
    },
}

/// One sampling condition of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SamplingCell {
    Full,
    RandomNode { size: usize },
    Snowball { waves: usize, seeds: usize, max_follow: FollowLimit },
}

impl SamplingCell {
    fn key(&self) -> [u64; 4] {
        match *self {
            SamplingCell::Full => [0, 0, 0, 0],
            SamplingCell::RandomNode { size } => [1, size as u64, 0, 0],
            SamplingCell::Snowball { waves, seeds, max_follow } => {
                [2, waves as u64, seeds as u64, max_follow.0.map_or(u64::MAX, |m| m as u64)]
            }
        }
    }

    pub fn scheme_name(&self) -> &'static str {
        match self {
            SamplingCell::Full => "none",
            SamplingCell::RandomNode { .. } => "random",
            SamplingCell::Snowball { .. } => "snowball",
        }
    }
}

impl fmt::Display for SamplingCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SamplingCell::Full => f.write_str("full network"),
            SamplingCell::RandomNode { size } => write!(f, "random nodes, size {size}"),
            SamplingCell::Snowball { waves, seeds, max_follow } => {
                write!(f, "snowball, {waves} waves, {seeds} seeds, m={max_follow}")
            }
        }
    }
}

impl SamplingScheme {
    /// Cells in grid order (waves, then seeds, then m for snowball).
    pub fn cells(&self) -> Vec<SamplingCell> {
        match self {
            SamplingScheme::None => vec![SamplingCell::Full],
            SamplingScheme::RandomNode { sizes } => {
                sizes.iter().map(|&size| SamplingCell::RandomNode { size }).collect()
            }
            SamplingScheme::Snowball { waves, seeds, max_follow } => {
                let mut cells = Vec::new();
                for &w in waves {
                    for &s in seeds {
                        for &m in max_follow {
                            cells.push(SamplingCell::Snowball { waves: w, seeds: s, max_follow: m });
                        }
                    }
                }
                cells
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub network: NetworkSource,
    pub true_theta: ParameterVector,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default)]
    pub attributes: AttributeSpec,
    #[serde(default = "default_sampling")]
    pub sampling: SamplingScheme,
    #[serde(default)]
    pub estimation: EstimationConfig,
    /// Effect whose true parameter is set to zero for a type I study.
    #[serde(default)]
    pub zero_effect: Option<Effect>,
    /// Density used when `zero_effect` is Activity, which otherwise leaves
    /// almost no positive outcomes.
    #[serde(default)]
    pub density_override: Option<f64>,
    #[serde(default = "default_outcome_burn_in")]
    pub outcome_burn_in: usize,
    #[serde(default = "default_outcome_spacing")]
    pub outcome_spacing: usize,
    /// Draw one sample per cell and reuse it for every replicate.
    #[serde(default)]
    pub reuse_sample: bool,
    #[serde(default)]
    pub rng_seed: u64,
}

fn default_replicates() -> usize {
    100
}
fn default_sampling() -> SamplingScheme {
    SamplingScheme::None
}
fn default_outcome_burn_in() -> usize {
    1_000_000
}
fn default_outcome_spacing() -> usize {
    100_000
}

impl ExperimentConfig {
    pub fn new(network: NetworkSource, true_theta: ParameterVector) -> Self {
        ExperimentConfig {
            network,
            true_theta,
            replicates: default_replicates(),
            attributes: AttributeSpec::default(),
            sampling: SamplingScheme::None,
            estimation: EstimationConfig::default(),
            zero_effect: None,
            density_override: None,
            outcome_burn_in: default_outcome_burn_in(),
            outcome_spacing: default_outcome_spacing(),
            reuse_sample: false,
            rng_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates < 2 {
            return Err(Error::invalid("an experiment needs at least 2 replicates"));
        }
        if !self.true_theta.is_finite() {
            return Err(Error::invalid("true parameters must be finite"));
        }
        if self.estimation.free_nodes.is_some() {
            return Err(Error::invalid("free nodes are chosen by the sampling scheme, not the config"));
        }
        if self.outcome_spacing == 0 {
            return Err(Error::invalid("outcome spacing must be at least 1"));
        }
        let empty = match &self.sampling {
            SamplingScheme::None => false,
            SamplingScheme::RandomNode { sizes } => sizes.is_empty(),
            SamplingScheme::Snowball { waves, seeds, max_follow } => {
                if waves.contains(&0) || seeds.contains(&0) {
                    return Err(Error::invalid("snowball waves and seeds must be at least 1"));
                }
                waves.is_empty() || seeds.is_empty() || max_follow.is_empty()
            }
        };
        if empty {
            return Err(Error::invalid("sampling grid has no cells"));
        }
        Ok(())
    }

    /// True parameters after applying `zero_effect` and the density
    /// override.
    pub fn effective_theta(&self) -> ParameterVector {
        let mut theta = self.true_theta;
        if let Some(e) = self.zero_effect {
            theta[e] = 0.0;
            if e == Effect::Activity {
                if let Some(d) = self.density_override {
                    theta[Effect::Density] = d;
                }
            }
        }
        theta
    }
}

/// Network, covariates and simulated outcomes shared by every cell.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub graph: Graph,
    /// Covariates; the outcome column is unused.
    pub covariates: AttributeTable,
    pub theta: ParameterVector,
    pub outcomes: Vec<Vec<bool>>,
    /// SHA-256 of the outcome vectors, one `0`/`1` line per replicate.
    pub outcome_hash: String,
}

impl Experiment {
    pub fn prepare(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let master = config.rng_seed;
        let graph = match &config.network {
            NetworkSource::File { path, one_based } => crate::io::read_edge_list(path, *one_based)?,
            NetworkSource::Ergm { params, burn_in } => {
                ergm_simulate(params, *burn_in, derive_seed(master, &[stream::NETWORK]))?
            }
        };
        Experiment::with_graph(config, graph)
    }

    /// Like [`Experiment::prepare`] with the network supplied directly.
    pub fn with_graph(config: &ExperimentConfig, graph: Graph) -> Result<Self> {
        config.validate()?;
        let master = config.rng_seed;
        let covariates = draw_covariates(
            graph.node_count(),
            &config.attributes,
            derive_seed(master, &[stream::COVARIATES]),
        )?;
        let theta = config.effective_theta();
        let sim = SimulationConfig::new(
            config.outcome_burn_in,
            config.outcome_spacing,
            config.replicates,
            derive_seed(master, &[stream::OUTCOMES]),
        );
        let outcomes = simulate_outcomes(&graph, &covariates, &theta, &sim)?;
        let outcome_hash = hash_outcomes(&outcomes);
        Ok(Experiment {
            config: config.clone(),
            graph,
            covariates,
            theta,
            outcomes,
            outcome_hash,
        })
    }

    fn replicate(&self, cell: SamplingCell, r: usize) -> ReplicateRecord {
        let master = self.config.rng_seed;
        let key = cell.key();
        let sample_rep = if self.config.reuse_sample { 0 } else { r as u64 };
        let sample_seed = derive_seed(master, &[stream::SAMPLING, key[0], key[1], key[2], key[3], sample_rep]);
        let est_cfg = EstimationConfig {
            rng_seed: derive_seed(master, &[stream::ESTIMATION, key[0], key[1], key[2], key[3], r as u64]),
            ..self.config.estimation.clone()
        };
        let attrs = AttributeTable {
            outcome: self.outcomes[r].clone(),
            ..self.covariates.clone()
        };
        let (sample_size, result) = match cell {
            SamplingCell::Full => (self.graph.node_count(), estimate(&self.graph, &attrs, &est_cfg)),
            SamplingCell::RandomNode { size } => match random_node_sample(&self.graph, size, sample_seed) {
                Ok((g, map)) => (size, estimate(&g, &attrs.project(&map.to_original), &est_cfg)),
                Err(e) => (0, Err(e)),
            },
            SamplingCell::Snowball { waves, seeds, max_follow } => {
                let cfg = SnowballConfig {
                    seeds: SeedSpec::Count(seeds),
                    waves,
                    max_follow: max_follow.0,
                    rng_seed: sample_seed,
                };
                match snowball(&self.graph, &cfg) {
                    Ok(s) => {
                        let local = attrs.project(&s.origin_ids);
                        (s.node_count(), conditional_estimate(&s, &local, &est_cfg))
                    }
                    Err(e) => (0, Err(e)),
                }
            }
        };
        ReplicateRecord::new(r, sample_size, result)
    }

    /// Run every replicate of one cell and summarize.
    pub fn run_cell(&self, cell: SamplingCell) -> Result<ExperimentSummary> {
        if let SamplingCell::RandomNode { size } = cell {
            if size == 0 || size > self.graph.node_count() {
                return Err(Error::invalid(format!(
                    "sample size {size} outside 1..={}",
                    self.graph.node_count()
                )));
            }
        }
        if let SamplingCell::Snowball { seeds, .. } = cell {
            if seeds == 0 || seeds > self.graph.node_count() {
                return Err(Error::invalid(format!("seed count {seeds} outside 1..={}", self.graph.node_count())));
            }
        }
        let records: Vec<ReplicateRecord> = (0..self.outcomes.len())
            .into_par_iter()
            .map(|r| self.replicate(cell, r))
            .collect();
        summarize(cell, self.theta, &records, self.config.rng_seed, &self.outcome_hash)
    }
}

fn hash_outcomes(outcomes: &[Vec<bool>]) -> String {
    let mut h = Sha256::new();
    for y in outcomes {
        let line: Vec<u8> = y.iter().map(|&b| if b { b'1' } else { b'0' }).chain([b'\n']).collect();
        h.update(&line);
    }
    hex::encode(h.finalize())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicateRecord {
    pub replicate: usize,
    pub sample_size: usize,
    pub free_count: usize,
    pub converged: bool,
    pub theta_hat: [f64; NUM_EFFECTS],
    pub std_errors: [f64; NUM_EFFECTS],
    pub t_ratios: [f64; NUM_EFFECTS],
    /// Failure flag or error message when the estimate is unusable.
    pub error: Option<String>,
}

impl ReplicateRecord {
    fn new(replicate: usize, sample_size: usize, result: Result<EstimationResult>) -> Self {
        match result {
            Ok(r) => ReplicateRecord {
                replicate,
                sample_size,
                free_count: r.free_count,
                converged: r.converged,
                theta_hat: r.theta_hat.0,
                std_errors: r.std_errors.0,
                t_ratios: r.t_ratios.0,
                error: r.failure.map(|f| format!("{f:?}")),
            },
            Err(e) => ReplicateRecord {
                replicate,
                sample_size,
                free_count: 0,
                converged: false,
                theta_hat: [f64::NAN; NUM_EFFECTS],
                std_errors: [f64::NAN; NUM_EFFECTS],
                t_ratios: [f64::NAN; NUM_EFFECTS],
                error: Some(e.to_string()),
            },
        }
    }
}

/// A proportion with its Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rate {
    pub successes: usize,
    pub trials: usize,
    pub rate: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Rate {
    fn new(successes: usize, trials: usize) -> Result<Self> {
        let (lo, hi) = wilson_interval(successes, trials)?;
        Ok(Rate {
            successes,
            trials,
            rate: successes as f64 / trials as f64,
            lo,
            hi,
        })
    }

    pub fn overlaps(&self, other: &Rate) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RmseSummary {
    pub rmse: f64,
    pub lo: f64,
    pub hi: f64,
    pub degenerate: bool,
}

impl RmseSummary {
    pub fn overlaps(&self, other: &RmseSummary) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectSummary {
    pub effect: Effect,
    pub true_value: f64,
    pub rmse: Option<RmseSummary>,
    /// Set when the true value is zero.
    pub type1: Option<Rate>,
    /// Set when the true value is nonzero.
    pub type2: Option<Rate>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub cell: SamplingCell,
    pub sample_size_mean: f64,
    pub effects: Vec<EffectSummary>,
    pub converged_count: usize,
    pub total: usize,
    /// No replicate converged, so no rates or RMSE are available.
    pub degenerate: bool,
    pub outcome_hash: String,
    pub records: Vec<ReplicateRecord>,
}

impl ExperimentSummary {
    pub fn effect(&self, e: Effect) -> &EffectSummary {
        &self.effects[e.index()]
    }

    pub fn converged_fraction(&self) -> f64 {
        self.converged_count as f64 / self.total as f64
    }

    pub fn convergence_rate(&self) -> Result<Rate> {
        Rate::new(self.converged_count, self.total)
    }
}

/// Aggregate replicate records; rates and RMSE use converged replicates
/// only.
pub fn summarize(
    cell: SamplingCell,
    truth: ParameterVector,
    records: &[ReplicateRecord],
    master_seed: u64,
    outcome_hash: &str,
) -> Result<ExperimentSummary> {
    if records.is_empty() {
        return Err(Error::invalid("no replicate records to summarize"));
    }
    let converged: Vec<&ReplicateRecord> = records.iter().filter(|r| r.converged).collect();
    let key = cell.key();
    let mut effects = Vec::with_capacity(NUM_EFFECTS);
    for e in Effect::ALL {
        let k = e.index();
        let t = truth[e];
        let mut s = EffectSummary {
            effect: e,
            true_value: t,
            rmse: None,
            type1: None,
            type2: None,
        };
        if !converged.is_empty() {
            let est: Vec<f64> = converged.iter().map(|r| r.theta_hat[k]).collect();
            let point = rmse(&est, t)?;
            let squared: Vec<f64> = est.iter().map(|x| (x - t).powi(2)).collect();
            let boot_seed = derive_seed(master_seed, &[stream::BOOTSTRAP, key[0], key[1], key[2], key[3], k as u64]);
            let (lo, hi, degenerate) = if squared.len() < 2 {
                (point, point, true)
            } else {
                let b = bca_interval(&squared, 0.95, BCA_REPLICATES, boot_seed)?;
                // the point estimate belongs to its interval even when the
                // bias correction shifts both endpoints past it
                (b.lo.sqrt().min(point), b.hi.sqrt().max(point), b.degenerate)
            };
            s.rmse = Some(RmseSummary { rmse: point, lo, hi, degenerate });
            let n = converged.len();
            if t == 0.0 {
                let k1 = converged.iter().filter(|r| type1_indicator(r.theta_hat[k], r.std_errors[k])).count();
                s.type1 = Some(Rate::new(k1, n)?);
            } else {
                let k2 = converged
                    .iter()
                    .filter(|r| type2_indicator(r.theta_hat[k], r.std_errors[k], t))
                    .count();
                s.type2 = Some(Rate::new(k2, n)?);
            }
        }
        effects.push(s);
    }
    Ok(ExperimentSummary {
        cell,
        sample_size_mean: records.iter().map(|r| r.sample_size as f64).sum::<f64>() / records.len() as f64,
        effects,
        converged_count: converged.len(),
        total: records.len(),
        degenerate: converged.is_empty(),
        outcome_hash: outcome_hash.to_owned(),
        records: records.to_vec(),
    })
}

/// Run an experiment whose sampling scheme has exactly one cell.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentSummary> {
    let cells = config.sampling.cells();
    if cells.len() != 1 {
        return Err(Error::invalid(format!(
            "sampling scheme has {} cells; use a sweep for grids",
            cells.len()
        )));
    }
    Experiment::prepare(config)?.run_cell(cells[0])
}

#[derive(Debug)]
pub struct SweepResult {
    pub outcome_hash: String,
    pub cells: Vec<(SamplingCell, Result<ExperimentSummary>)>,
}

impl SweepResult {
    pub fn summaries(&self) -> impl Iterator<Item = &ExperimentSummary> {
        self.cells.iter().filter_map(|(_, r)| r.as_ref().ok())
    }
}

/// Run every cell of the sampling grid on one shared set of outcomes. A
/// failing cell is reported in place without stopping the others.
pub fn sweep(config: &ExperimentConfig) -> Result<SweepResult> {
    let exp = Experiment::prepare(config)?;
    Ok(sweep_prepared(&exp))
}

pub fn sweep_prepared(exp: &Experiment) -> SweepResult {
    let cells = exp
        .config
        .sampling
        .cells()
        .into_iter()
        .map(|c| (c, exp.run_cell(c)))
        .collect();
    SweepResult {
        outcome_hash: exp.outcome_hash.clone(),
        cells,
    }
}
