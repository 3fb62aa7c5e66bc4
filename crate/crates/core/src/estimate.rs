//! Maximum likelihood estimation by three-phase Robbins-Monro stochastic
//! approximation.
//!
//! The estimator solves `E_theta[z] = z_obs` using statistics simulated by an
//! [`OutcomeChain`] that starts at the observed outcomes and is carried
//! across all phases:
//!
//! 1. Simulate at the starting value and estimate the statistic covariance
//!    `D`. Further rounds try damped Newton steps `theta - c D^-1 (mean z_sim
//!    - z_obs)`, keeping a step only if the Mahalanobis distance of the
//!    simulated mean from `z_obs` shrinks and halving `c` otherwise.
//! 2. Iterate `theta <- theta - a D^-1 (z_sim - z_obs)` in subphases, halving
//!    the gain `a` after each subphase and restarting from the subphase's
//!    average `theta`. Steps larger than the trust radius are shrunk, and
//!    repeated shrinking aborts the run.
//! 3. Simulate at the final value, on a new chain started from all-zero
//!    free outcomes so that poor mixing cannot hide a bad fit. Convergence t-ratios are
//!    `(mean z_sim - z_obs) / sd z_sim`, and standard errors come from the
//!    inverse of the simulated covariance (the Fisher information of the
//!    exponential family).
//!
//! When phase 3 narrowly misses the threshold, phases 2 and 3 can be rerun
//! from the estimate with the phase-3 covariance as `D` and a smaller gain.
//!
//! Conditional estimation runs the same procedure with the chain restricted
//! to the inner waves of a snowball sample.

use nalgebra::{SMatrix, SVector};
use serde::{Deserialize, Serialize};

use crate::effects::{Effect, ParameterVector, StatisticsVector, NUM_EFFECTS};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::{count_statistics, AttributeTable, OutcomeChain};
use crate::sampling::SnowballSample;
use crate::seed::derive_seed;

type Mat5 = SMatrix<f64, NUM_EFFECTS, NUM_EFFECTS>;
type Vec5 = SVector<f64, NUM_EFFECTS>;

/// Minimum relative pivot of the phase-3 correlation matrix before it is
/// treated as singular.
const SINGULAR_PIVOT: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EstimationConfig {
    pub phase1_samples: usize,
    /// Simulation rounds in phase 1; each after the first tries a Newton step.
    pub phase1_rounds: usize,
    /// Initial damping of the phase-1 Newton steps (0 disables them).
    pub phase1_step: f64,
    pub phase2_subphases: usize,
    pub phase2_initial_gain: f64,
    /// Weight of the diagonal in the phase-2 scaling matrix
    /// `(1 - w) Cov + w diag(Cov)`; 1 gives pure diagonal scaling.
    pub phase2_diagonalize: f64,
    /// Extra steps allowed in a subphase beyond its minimum length
    /// `2^(4k/3) (7 + p)` before it is cut off.
    pub phase2_extra_steps: usize,
    pub phase3_samples: usize,
    /// Run phase 3 on a new chain started with every free outcome at 0
    /// instead of continuing the phase-2 chain.
    pub phase3_fresh_start: bool,
    /// Proposals between successive simulated statistics; `None` uses ten
    /// per free node.
    pub mcmc_spacing: Option<usize>,
    /// Proposals discarded before phases 1 and 3; `None` uses ten spacings.
    pub burn_in: Option<usize>,
    /// Cap on the total number of phase-2 iterations.
    pub max_iterations: usize,
    /// Largest allowed per-effect change of theta in one phase-2 step.
    pub trust_radius: f64,
    /// Consecutive clamped steps that abort the estimation.
    pub max_consecutive_clamps: usize,
    pub convergence_threshold: f64,
    /// Repeats of phases 2 and 3, started from the previous estimate, when
    /// phase 3 misses the convergence threshold.
    pub max_restarts: usize,
    /// A repeat is only tried when every |t| is below this.
    pub restart_threshold: f64,
    /// Initial phase-2 gain of a repeat relative to `phase2_initial_gain`.
    pub restart_gain_factor: f64,
    pub rng_seed: u64,
    /// Nodes whose outcomes are simulated; `None` means all nodes.
    pub free_nodes: Option<Vec<usize>>,
    pub initial_theta: Option<ParameterVector>,
}

impl Default for EstimationConfig {
    fn default() -> Self {
        EstimationConfig {
            phase1_samples: 100,
            phase1_rounds: 4,
            phase1_step: 1.0,
            phase2_subphases: 5,
            phase2_initial_gain: 0.1,
            phase2_diagonalize: 0.0,
            phase2_extra_steps: 200,
            phase3_samples: 1000,
            phase3_fresh_start: true,
            mcmc_spacing: None,
            burn_in: None,
            max_iterations: 20_000,
            trust_radius: 1.0,
            max_consecutive_clamps: 3,
            convergence_threshold: 0.1,
            max_restarts: 1,
            restart_threshold: 0.5,
            restart_gain_factor: 0.25,
            rng_seed: 0,
            free_nodes: None,
            initial_theta: None,
        }
    }
}

impl EstimationConfig {
    fn validate(&self) -> Result<()> {
        if self.phase1_samples < 10 || self.phase3_samples < 10 {
            return Err(Error::invalid("phase 1 and phase 3 need at least 10 samples"));
        }
        if !(self.phase2_initial_gain > 0.0) || !(self.trust_radius > 0.0) {
            return Err(Error::invalid("gain and trust radius must be positive"));
        }
        if !(0.0..=1.0).contains(&self.phase2_diagonalize) {
            return Err(Error::invalid("phase2_diagonalize must lie in [0, 1]"));
        }
        if self.mcmc_spacing == Some(0) {
            return Err(Error::invalid("mcmc spacing must be at least 1"));
        }
        Ok(())
    }

    /// Minimum length of phase-2 subphase `k` (0-based).
    pub fn subphase_min_steps(&self, k: usize) -> usize {
        let base = (7 + NUM_EFFECTS) as f64;
        (2f64.powf(4.0 * k as f64 / 3.0) * base).round() as usize
    }
}

/// Why an estimation did not produce a usable result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EstimationFailure {
    /// Phase 2 needed repeated clamping or produced non-finite values.
    Diverged,
    /// A statistic had no variance in phase 3.
    ZeroVariance,
    /// The phase-3 covariance matrix could not be inverted.
    SingularCovariance,
}

/// Phase-3 simulation summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Phase3Summary {
    pub observed: StatisticsVector,
    pub mean: StatisticsVector,
    pub sd: StatisticsVector,
    pub covariance: [[f64; NUM_EFFECTS]; NUM_EFFECTS],
    pub samples: usize,
}

impl Phase3Summary {
    /// Monte-Carlo standard error of the simulated mean of each statistic.
    pub fn mc_standard_error(&self) -> StatisticsVector {
        StatisticsVector(self.sd.0.map(|s| s / (self.samples as f64).sqrt()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationResult {
    pub theta_hat: ParameterVector,
    pub std_errors: ParameterVector,
    pub t_ratios: ParameterVector,
    pub converged: bool,
    pub significant: [bool; NUM_EFFECTS],
    pub free_count: usize,
    pub fixed_count: usize,
    pub failure: Option<EstimationFailure>,
    /// Gain used in each phase-2 subphase.
    pub gains: Vec<f64>,
    pub phase2_iterations: usize,
    /// Times phases 2 and 3 were repeated from the previous estimate.
    pub restarts: usize,
    pub phase3: Option<Phase3Summary>,
}

impl EstimationResult {
    pub fn is_significant(&self, e: Effect) -> bool {
        self.significant[e.index()]
    }

    fn aborted(theta: ParameterVector, free: usize, fixed: usize, gains: Vec<f64>, iters: usize) -> Self {
        EstimationResult {
            theta_hat: theta,
            std_errors: ParameterVector([f64::NAN; NUM_EFFECTS]),
            t_ratios: ParameterVector([f64::NAN; NUM_EFFECTS]),
            converged: false,
            significant: [false; NUM_EFFECTS],
            free_count: free,
            fixed_count: fixed,
            failure: Some(EstimationFailure::Diverged),
            gains,
            phase2_iterations: iters,
            restarts: 0,
            phase3: None,
        }
    }
}

/// Density at the logit of the observed positive fraction, other effects 0.
pub fn initial_theta(g: &Graph, attrs: &AttributeTable) -> Result<ParameterVector> {
    attrs.check_matches(g)?;
    initial_theta_over(attrs, &(0..g.node_count()).collect::<Vec<_>>())
}

fn initial_theta_over(attrs: &AttributeTable, nodes: &[usize]) -> Result<ParameterVector> {
    let positives = nodes.iter().filter(|&&i| attrs.outcome[i]).count();
    if positives == 0 || positives == nodes.len() {
        return Err(Error::degenerate(format!(
            "{positives} of {} outcomes are positive; no variation to estimate from",
            nodes.len()
        )));
    }
    let p = positives as f64 / nodes.len() as f64;
    Ok(ParameterVector::new((p / (1.0 - p)).ln(), 0.0, 0.0, 0.0, 0.0))
}

/// Unconditional (or, with `cfg.free_nodes`, conditional) estimation.
pub fn estimate(g: &Graph, attrs: &AttributeTable, cfg: &EstimationConfig) -> Result<EstimationResult> {
    cfg.validate()?;
    attrs.check_matches(g)?;
    let n = g.node_count();
    let free: Vec<usize> = match &cfg.free_nodes {
        Some(f) => {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            if let Some(&bad) = f.iter().find(|&&i| i >= n) {
                return Err(Error::invalid(format!("free node {bad} is not in the graph")));
            }
            f
        }
        None => (0..n).collect(),
    };
    if free.is_empty() {
        return Err(Error::invalid("no free nodes to estimate from"));
    }
    let free_count = free.len();
    let fixed_count = n - free_count;
    let theta0 = match cfg.initial_theta {
        Some(t) => {
            initial_theta_over(attrs, &free)?;
            t
        }
        None => initial_theta_over(attrs, &free)?,
    };
    if !theta0.is_finite() {
        return Err(Error::invalid("initial parameters must be finite"));
    }

    let observed = count_statistics(g, attrs, &attrs.outcome);
    let spacing = cfg.mcmc_spacing.unwrap_or(10 * free_count);
    let burn_in = cfg.burn_in.unwrap_or(10 * spacing);
    let mut chain = OutcomeChain::new(g, attrs, theta0, free, attrs.outcome.clone(), cfg.rng_seed)?;

    // Phase 1: simulate at the current value and take damped Newton steps.
    // A step is kept only if the Mahalanobis distance between the simulated
    // mean and the observed statistics shrinks; otherwise it is halved. The
    // covariance at the accepted value becomes the phase-2 scaling matrix.
    let phase1_at = |chain: &mut OutcomeChain, theta: ParameterVector| {
        chain.set_theta(theta);
        chain.run(burn_in);
        let mut draws = Vec::with_capacity(cfg.phase1_samples);
        for _ in 0..cfg.phase1_samples {
            chain.run(spacing);
            draws.push(chain.statistics());
        }
        let (mean, cov) = moments(&draws);
        let dev = mean - Vec5::from(observed.0);
        let sd: [f64; NUM_EFFECTS] = std::array::from_fn(|k| cov[(k, k)].sqrt());
        let inv = if sd.iter().all(|&s| s > 0.0) { inverse_covariance(&cov, &sd) } else { None };
        let distance = inv.map(|inv| dev.dot(&(inv * dev)));
        (cov, dev, inv, distance)
    };
    let mut theta = theta0;
    let (mut cov1, mut dev1, mut inv1, distance) = phase1_at(&mut chain, theta);
    if let Some(k) = (0..NUM_EFFECTS).find(|&k| !(cov1[(k, k)] > 0.0)) {
        return Err(Error::degenerate(format!(
            "{} statistic does not vary under simulation",
            Effect::ALL[k]
        )));
    }
    let mut distance = distance.unwrap_or(f64::INFINITY);
    let mut damping = cfg.phase1_step;
    for _ in 1..cfg.phase1_rounds {
        let Some(inv) = inv1 else { break };
        if damping <= 0.0 {
            break;
        }
        let newton = inv * dev1;
        let candidate = ParameterVector(std::array::from_fn(|e| theta.0[e] - damping * newton[e]));
        if !candidate.is_finite() {
            damping /= 2.0;
            continue;
        }
        let (cov, dev, inv, d) = phase1_at(&mut chain, candidate);
        match d {
            Some(d) if d < distance => {
                theta = candidate;
                (cov1, dev1, inv1, distance) = (cov, dev, inv, d);
            }
            _ => damping /= 2.0,
        }
    }
    let var1: [f64; NUM_EFFECTS] = std::array::from_fn(|k| cov1[(k, k)]);
    let sd1 = var1.map(f64::sqrt);
    let w = cfg.phase2_diagonalize;
    let blended = Mat5::from_fn(|a, b| if a == b { cov1[(a, b)] } else { (1.0 - w) * cov1[(a, b)] });
    // fall back to the diagonal when the blend cannot be inverted
    let scale_inv = inverse_covariance(&blended, &sd1)
        .unwrap_or_else(|| Mat5::from_diagonal(&Vec5::from(var1.map(|v| 1.0 / v))));

    let mut gain0 = cfg.phase2_initial_gain;
    let mut scale_inv = scale_inv;
    let mut iterations = 0usize;
    let mut restarts = 0usize;
    loop {
        let (next, gains) = match phase2(&mut chain, cfg, observed, theta, &scale_inv, gain0, spacing, &mut iterations) {
            Ok(v) => v,
            Err((at, gains)) => {
                let mut r = EstimationResult::aborted(at, free_count, fixed_count, gains, iterations);
                r.restarts = restarts;
                return Ok(r);
            }
        };
        theta = next;
        let (result, inv) = if cfg.phase3_fresh_start {
            // a chain that has not seen the observed outcomes, so slow mixing
            // cannot hold the simulated mean near them
            let mut start = attrs.outcome.clone();
            for &i in chain.free_nodes() {
                start[i] = false;
            }
            let seed = derive_seed(cfg.rng_seed, &[restarts as u64]);
            let mut fresh = OutcomeChain::new(g, attrs, theta, chain.free_nodes().to_vec(), start, seed)?;
            phase3(&mut fresh, cfg, observed, theta, burn_in)
        } else {
            phase3(&mut chain, cfg, observed, theta, burn_in)
        };
        let retry = !result.converged
            && result.failure.is_none()
            && restarts < cfg.max_restarts
            && result.t_ratios.0.iter().all(|t| t.abs() < cfg.restart_threshold);
        if !retry {
            return Ok(EstimationResult {
                free_count,
                fixed_count,
                gains,
                phase2_iterations: iterations,
                restarts,
                ..result
            });
        }
        // the phase-3 covariance is a better estimate near the solution
        if let Some(inv) = inv {
            scale_inv = inv;
        }
        gain0 = cfg.phase2_initial_gain * cfg.restart_gain_factor;
        restarts += 1;
    }
}

/// Robbins-Monro iterations with a gain halving each subphase. Returns the
/// final value, or the value at which the run diverged.
#[allow(clippy::too_many_arguments)]
fn phase2(
    chain: &mut OutcomeChain,
    cfg: &EstimationConfig,
    observed: StatisticsVector,
    mut theta: ParameterVector,
    scale_inv: &Mat5,
    mut gain: f64,
    spacing: usize,
    iterations: &mut usize,
) -> std::result::Result<(ParameterVector, Vec<f64>), (ParameterVector, Vec<f64>)> {
    let mut gains = Vec::with_capacity(cfg.phase2_subphases);
    let mut clamps = 0usize;
    'subphases: for k in 0..cfg.phase2_subphases {
        gains.push(gain);
        let min_steps = cfg.subphase_min_steps(k);
        let max_steps = min_steps + cfg.phase2_extra_steps;
        let mut theta_sum = [0.0; NUM_EFFECTS];
        let mut steps = 0usize;
        let mut prev_dev: Option<[f64; NUM_EFFECTS]> = None;
        let mut lag_products = [0.0; NUM_EFFECTS];
        while steps < max_steps {
            if *iterations >= cfg.max_iterations {
                if steps > 0 {
                    theta = ParameterVector(theta_sum.map(|s| s / steps as f64));
                }
                break 'subphases;
            }
            chain.set_theta(theta);
            chain.run(spacing);
            let dev = (chain.statistics() - observed).0;
            let newton = scale_inv * Vec5::from(dev);
            let mut step: [f64; NUM_EFFECTS] = std::array::from_fn(|e| -gain * newton[e]);
            if step.iter().any(|s| !s.is_finite()) {
                return Err((theta, gains));
            }
            let largest = step.iter().fold(0.0f64, |m, s| m.max(s.abs()));
            if largest > cfg.trust_radius {
                clamps += 1;
                if clamps >= cfg.max_consecutive_clamps {
                    return Err((theta, gains));
                }
                let shrink = cfg.trust_radius / largest;
                step.iter_mut().for_each(|s| *s *= shrink);
            } else {
                clamps = 0;
            }
            for e in 0..NUM_EFFECTS {
                theta.0[e] += step[e];
                theta_sum[e] += theta.0[e];
            }
            if let Some(prev) = prev_dev {
                for e in 0..NUM_EFFECTS {
                    lag_products[e] += prev[e] * dev[e];
                }
            }
            prev_dev = Some(dev);
            steps += 1;
            *iterations += 1;
            // deviations oscillating around zero for every effect: done
            if steps >= min_steps && lag_products.iter().all(|&p| p < 0.0) {
                break;
            }
        }
        theta = ParameterVector(theta_sum.map(|s| s / steps.max(1) as f64));
        if !theta.is_finite() {
            return Err((theta, gains));
        }
        gain /= 2.0;
    }
    Ok((theta, gains))
}

/// Convergence check and standard errors at `theta`. Also returns the
/// inverse simulated covariance when it exists.
fn phase3(
    chain: &mut OutcomeChain,
    cfg: &EstimationConfig,
    observed: StatisticsVector,
    theta: ParameterVector,
    burn_in: usize,
) -> (EstimationResult, Option<Mat5>) {
    let spacing = cfg.mcmc_spacing.unwrap_or(10 * chain.free_nodes().len());
    chain.set_theta(theta);
    chain.run(burn_in);
    let mut draws = Vec::with_capacity(cfg.phase3_samples);
    for _ in 0..cfg.phase3_samples {
        chain.run(spacing);
        draws.push(chain.statistics());
    }
    let (mean, cov) = moments(&draws);
    let sd: [f64; NUM_EFFECTS] = std::array::from_fn(|k| cov[(k, k)].sqrt());
    let t_ratios = ParameterVector(std::array::from_fn(|k| (mean[k] - observed.0[k]) / sd[k]));
    let summary = Phase3Summary {
        observed,
        mean: StatisticsVector(std::array::from_fn(|k| mean[k])),
        sd: StatisticsVector(sd),
        covariance: std::array::from_fn(|a| std::array::from_fn(|b| cov[(a, b)])),
        samples: draws.len(),
    };

    let mut failure = None;
    let mut inverse = None;
    let mut std_errors = ParameterVector([f64::NAN; NUM_EFFECTS]);
    if sd.iter().any(|&s| !(s > 0.0)) {
        failure = Some(EstimationFailure::ZeroVariance);
    } else {
        match inverse_covariance(&cov, &sd) {
            Some(inv) => {
                std_errors = ParameterVector(std::array::from_fn(|k| inv[(k, k)].sqrt()));
                inverse = Some(inv);
            }
            None => failure = Some(EstimationFailure::SingularCovariance),
        }
    }
    let converged = failure.is_none()
        && t_ratios.0.iter().all(|t| t.abs() < cfg.convergence_threshold);
    let significant = std::array::from_fn(|k| {
        failure.is_none() && theta.0[k].abs() > 2.0 * std_errors.0[k]
    });
    let result = EstimationResult {
        theta_hat: theta,
        std_errors,
        t_ratios,
        converged,
        significant,
        free_count: 0,
        fixed_count: 0,
        failure,
        gains: Vec::new(),
        phase2_iterations: 0,
        restarts: 0,
        phase3: Some(summary),
    };
    (result, inverse)
}


/// Estimation conditional on a snowball sample: outcomes of the outermost
/// wave enter the statistics but are never simulated. `attrs` must be indexed
/// by the sample's local node ids.
pub fn conditional_estimate(
    sample: &SnowballSample,
    attrs: &AttributeTable,
    cfg: &EstimationConfig,
) -> Result<EstimationResult> {
    let inner = sample.inner_nodes();
    if inner.is_empty() {
        return Err(Error::invalid(
            "every sampled node is in the outermost wave; nothing to estimate conditionally",
        ));
    }
    let cfg = EstimationConfig {
        free_nodes: Some(inner),
        ..cfg.clone()
    };
    estimate(&sample.graph, attrs, &cfg)
}

/// Sample mean and covariance (n - 1 denominator).
fn moments(samples: &[StatisticsVector]) -> (Vec5, Mat5) {
    let n = samples.len() as f64;
    let mut mean = Vec5::zeros();
    for z in samples {
        mean += Vec5::from(z.0);
    }
    mean /= n;
    let mut cov = Mat5::zeros();
    for z in samples {
        let d = Vec5::from(z.0) - mean;
        cov += d * d.transpose();
    }
    cov /= (n - 1.0).max(1.0);
    (mean, cov)
}

/// Inverse covariance via the correlation matrix, or `None` when the matrix
/// is numerically singular.
fn inverse_covariance(cov: &Mat5, sd: &[f64; NUM_EFFECTS]) -> Option<Mat5> {
    let corr = Mat5::from_fn(|a, b| cov[(a, b)] / (sd[a] * sd[b]));
    let chol = corr.cholesky()?;
    let l = chol.l();
    if (0..NUM_EFFECTS).any(|k| l[(k, k)] * l[(k, k)] < SINGULAR_PIVOT) {
        return None;
    }
    let inv_corr = chol.inverse();
    let inv = Mat5::from_fn(|a, b| inv_corr[(a, b)] / (sd[a] * sd[b]));
    inv.iter().all(|v| v.is_finite()).then_some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{simulate_outcomes, SimulationConfig};
    use crate::sampling::{snowball, SeedSpec, SnowballConfig};

    fn ring_with_chords(n: usize) -> Graph {
        let mut pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        pairs.extend((0..n).step_by(3).map(|i| (i, (i + n / 2) % n)));
        Graph::from_edge_list(&pairs, n).unwrap()
    }

    fn attrs_for(n: usize, y: Vec<bool>) -> AttributeTable {
        AttributeTable::new(
            (0..n).map(|i| i % 2 == 0).collect(),
            (0..n).map(|i| ((i * 37 % 11) as f64 - 5.0) / 3.0).collect(),
            y,
        )
        .unwrap()
    }

    #[test]
    fn initial_theta_cases() {
        let g = Graph::empty(20);
        let y: Vec<bool> = (0..20).map(|i| i < 3).collect();
        let t = initial_theta(&g, &attrs_for(20, y)).unwrap();
        assert!((t.density() - (0.15f64 / 0.85).ln()).abs() < 1e-12);
        assert!((t.density() + 1.7346).abs() < 1e-4);
        assert_eq!(&t.0[1..], &[0.0; 4]);

        let half: Vec<bool> = (0..20).map(|i| i < 10).collect();
        assert_eq!(initial_theta(&g, &attrs_for(20, half)).unwrap(), ParameterVector::ZERO);

        assert!(matches!(
            initial_theta(&g, &attrs_for(20, vec![true; 20])),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn gain_halves_each_subphase() {
        let n = 60;
        let g = ring_with_chords(n);
        let base = attrs_for(n, vec![false; n]);
        let truth = ParameterVector::new(-1.0, 0.1, 0.3, 0.5, 0.5);
        let y = simulate_outcomes(&g, &base, &truth, &SimulationConfig::new(20_000, 1, 1, 4))
            .unwrap()
            .remove(0);
        let attrs = base.with_outcome(y).unwrap();
        let r = estimate(&g, &attrs, &EstimationConfig { rng_seed: 5, ..Default::default() }).unwrap();
        assert_eq!(r.gains.len(), 5);
        for w in r.gains.windows(2) {
            assert_eq!(w[1], w[0] / 2.0);
        }
        assert!(r.theta_hat.is_finite());
        if r.converged {
            assert!(r.std_errors.0.iter().all(|&s| s > 0.0));
            for k in 0..NUM_EFFECTS {
                assert_eq!(r.significant[k], r.theta_hat.0[k].abs() > 2.0 * r.std_errors.0[k]);
                assert!(r.t_ratios.0[k].abs() < 0.1);
            }
        }
    }

    #[test]
    fn all_positive_outcomes_are_degenerate() {
        let g = ring_with_chords(12);
        let attrs = attrs_for(12, vec![true; 12]);
        assert!(matches!(
            estimate(&g, &attrs, &EstimationConfig::default()),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn exhausted_snowball_equals_unconditional() {
        // a connected 12-node graph is exhausted long before 20 waves
        let g = ring_with_chords(12);
        let y: Vec<bool> = (0..12).map(|i| i % 4 == 0 || i == 5).collect();
        let sample = snowball(
            &g,
            &SnowballConfig {
                seeds: SeedSpec::Nodes(vec![0]),
                waves: 20,
                max_follow: None,
                rng_seed: 0,
            },
        )
        .unwrap();
        assert_eq!(sample.origin_ids, (0..12).collect::<Vec<_>>());
        let attrs = attrs_for(12, y);
        let cfg = EstimationConfig { rng_seed: 11, ..Default::default() };
        let cond = conditional_estimate(&sample, &attrs, &cfg).unwrap();
        let full = estimate(&g, &attrs, &cfg).unwrap();
        assert_eq!(cond, full);
    }

    #[test]
    fn zero_wave_sample_is_rejected() {
        let g = ring_with_chords(12);
        let sample = snowball(
            &g,
            &SnowballConfig {
                seeds: SeedSpec::Count(4),
                waves: 0,
                max_follow: None,
                rng_seed: 0,
            },
        )
        .unwrap();
        let attrs = attrs_for(4, vec![true, false, false, true]);
        assert!(matches!(
            conditional_estimate(&sample, &attrs, &EstimationConfig::default()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn deterministic_given_seed() {
        let g = ring_with_chords(24);
        let y: Vec<bool> = (0..24).map(|i| i % 3 == 0 || i % 7 == 1).collect();
        let attrs = attrs_for(24, y);
        let cfg = EstimationConfig { rng_seed: 3, ..Default::default() };
        assert_eq!(estimate(&g, &attrs, &cfg).unwrap(), estimate(&g, &attrs, &cfg).unwrap());
    }
}
