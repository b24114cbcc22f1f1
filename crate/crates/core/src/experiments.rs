//! Distinguisher trials, threshold sweeps, the 7-sample edge amplifier and
//! the approximation checker. Sweeps are empirical evidence only.

use std::collections::BTreeMap;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::embeddings::{EmbeddingError, EmbeddingInstance, EmbeddingKind, EmbeddingParams};
use crate::graph::{GraphOracle, QueryError, VertexId};
use crate::inputs::{InputError, Side};
use crate::protocol::{gen_promise_instance, run_reduction, Transcript};
use crate::seed::{derive_seed, rng_from_seed};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("distinguisher {name} does not support {kind}")]
    Unsupported { name: &'static str, kind: &'static str },
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("trial {trial}: {source}")]
    Query { trial: usize, source: QueryError },
    #[error("{0}")]
    InvalidConfig(String),
}

/// A query algorithm that guesses which side of the promise an instance is
/// on. It sees the public shape of the construction, never the inputs.
pub trait Distinguisher: Sync {
    fn name(&self) -> &'static str;

    fn supports(&self, kind: EmbeddingKind) -> bool;

    fn guess(
        &self,
        params: &EmbeddingParams,
        oracle: &mut dyn GraphOracle,
        budget: u64,
        rng: &mut ChaCha8Rng,
    ) -> Result<Side, QueryError>;
}

/// Pair queries inside blocks visited in random order, one per block; any
/// edge means the hidden clique is there.
#[derive(Clone, Copy, Debug, Default)]
pub struct PairProbe;

impl Distinguisher for PairProbe {
    fn name(&self) -> &'static str {
        "pair-probe"
    }

    fn supports(&self, kind: EmbeddingKind) -> bool {
        kind == EmbeddingKind::CliqueHiding
    }

    fn guess(
        &self,
        params: &EmbeddingParams,
        oracle: &mut dyn GraphOracle,
        budget: u64,
        rng: &mut ChaCha8Rng,
    ) -> Result<Side, QueryError> {
        let EmbeddingParams::CliqueHiding(p) = params else {
            return Err(unsupported(self, params));
        };
        let mut order: Vec<usize> = (0..p.blocks).collect();
        order.shuffle(rng);
        for &j in order.iter().take(clamp(budget, p.blocks)) {
            let v = p.base_vertices + j * p.l;
            if oracle.pair(v, v + 1)? {
                return Ok(Side::Intersecting);
            }
        }
        Ok(Side::Disjoint)
    }
}

/// One degree query on the first `U_j` vertex per block, blocks in random
/// order. A nonzero degree marks the intersecting block.
#[derive(Clone, Copy, Debug, Default)]
pub struct DegreeScan;

impl Distinguisher for DegreeScan {
    fn name(&self) -> &'static str {
        "degree-scan"
    }

    fn supports(&self, kind: EmbeddingKind) -> bool {
        kind == EmbeddingKind::DegreeOnly
    }

    fn guess(
        &self,
        params: &EmbeddingParams,
        oracle: &mut dyn GraphOracle,
        budget: u64,
        rng: &mut ChaCha8Rng,
    ) -> Result<Side, QueryError> {
        let EmbeddingParams::DegreeOnly(p) = params else {
            return Err(unsupported(self, params));
        };
        let mut order: Vec<usize> = (0..p.blocks).collect();
        order.shuffle(rng);
        for &j in order.iter().take(clamp(budget, p.blocks)) {
            if oracle.degree(j * p.k)? > 0 {
                return Ok(Side::Intersecting);
            }
        }
        Ok(Side::Disjoint)
    }
}

/// Samples `budget` uniform edges and reports intersecting as soon as one
/// falls in `A × B ∪ A′ × B′`, the cross edges that only exist on hit
/// coordinates.
#[derive(Clone, Copy, Debug, Default)]
pub struct EdgeSampleTester;

impl EdgeSampleTester {
    pub fn hidden(l: usize, u: VertexId, v: VertexId) -> bool {
        let (u, v) = (u.min(v), u.max(v));
        let part = |w: VertexId| w / l;
        matches!((part(u), part(v)), (0, 2) | (1, 3))
    }
}

impl Distinguisher for EdgeSampleTester {
    fn name(&self) -> &'static str {
        "edge-sample"
    }

    fn supports(&self, kind: EmbeddingKind) -> bool {
        kind == EmbeddingKind::Triangle
    }

    fn guess(
        &self,
        params: &EmbeddingParams,
        oracle: &mut dyn GraphOracle,
        budget: u64,
        _rng: &mut ChaCha8Rng,
    ) -> Result<Side, QueryError> {
        let EmbeddingParams::Triangle(p) = params else {
            return Err(unsupported(self, params));
        };
        for _ in 0..budget {
            let (u, v) = oracle.random_edge()?;
            if Self::hidden(p.l, u, v) {
                return Ok(Side::Intersecting);
            }
        }
        Ok(Side::Disjoint)
    }
}

fn unsupported(d: &dyn Distinguisher, params: &EmbeddingParams) -> QueryError {
    QueryError::CapabilityViolation(format!("{} cannot run on {}", d.name(), params.kind().as_str()))
}

fn clamp(budget: u64, blocks: usize) -> usize {
    usize::try_from(budget).unwrap_or(usize::MAX).min(blocks)
}

pub fn reference_distinguishers() -> Vec<Box<dyn Distinguisher>> {
    vec![Box::new(PairProbe), Box::new(DegreeScan), Box::new(EdgeSampleTester)]
}

pub fn distinguisher_by_name(name: &str) -> Option<Box<dyn Distinguisher>> {
    reference_distinguishers().into_iter().find(|d| d.name() == name)
}

/// Number of samples the amplifier draws.
pub const AMPLIFIER_SAMPLES: usize = 7;

/// Draws exactly seven edges. Returns `false` if any lies in the hidden
/// region, `true` otherwise.
pub fn edge_sampling_amplifier<E>(
    mut sampler: impl FnMut() -> Result<(VertexId, VertexId), E>,
    hidden: impl Fn(VertexId, VertexId) -> bool,
) -> Result<bool, E> {
    let mut any = false;
    for _ in 0..AMPLIFIER_SAMPLES {
        let (u, v) = sampler()?;
        any |= hidden(u, v);
    }
    Ok(!any)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ApproxOutcome {
    pub success_rate: f64,
    pub pass: bool,
}

/// `z` for a two-sided 95% interval.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Runs `estimator` `trials` times and checks the `(1 ± ε)` success rate
/// against `2/3` minus the normal-approximation slack at 95%.
pub fn approx_checker(
    mut estimator: impl FnMut(&mut ChaCha8Rng) -> f64,
    truth: f64,
    epsilon: f64,
    trials: usize,
    seed: u64,
) -> Result<ApproxOutcome, ExperimentError> {
    if epsilon.is_nan() || epsilon <= 0.0 || trials < 30 {
        return Err(ExperimentError::InvalidConfig(format!(
            "approximation check needs epsilon > 0 and at least 30 trials, got {epsilon} and {trials}"
        )));
    }
    let hits = (0..trials)
        .filter(|&i| {
            let mut rng = rng_from_seed(derive_seed(seed, i as u64));
            (estimator(&mut rng) - truth).abs() <= epsilon * truth.abs()
        })
        .count();
    let rate = hits as f64 / trials as f64;
    let slack = Z95 * ((2.0 / 9.0) / trials as f64).sqrt();
    Ok(ApproxOutcome { success_rate: rate, pass: rate >= 2.0 / 3.0 - slack })
}

/// Wilson score interval at `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let centre = p + z2 / (2.0 * n);
    let spread = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let denom = 1.0 + z2 / n;
    (((centre - spread) / denom).max(0.0), ((centre + spread) / denom).min(1.0))
}

/// One row of trial statistics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub kind: &'static str,
    /// Input length of the underlying two-party problem.
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "T")]
    pub t: u64,
    pub trials: usize,
    pub success: f64,
    pub mean_bits: f64,
    pub max_bits_per_query: u64,
    #[serde(skip)]
    pub successes: usize,
    #[serde(skip)]
    pub invalid: usize,
}

/// Outcome of a single trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub truth: Side,
    pub guess: Option<Side>,
    pub bits: u64,
    pub max_bits: u64,
    pub queries: usize,
}

impl TrialOutcome {
    pub fn correct(&self) -> bool {
        self.guess == Some(self.truth)
    }
}

/// Trial `i` draws a fresh promise instance from `derive_seed(seed, i)`, side
/// by a fair coin, and runs `d` through the two-party simulation.
pub fn run_trial(
    template: &EmbeddingInstance,
    d: &dyn Distinguisher,
    budget: u64,
    trial: usize,
    seed: u64,
) -> Result<TrialOutcome, ExperimentError> {
    run_trial_traced(template, d, budget, trial, seed).map(|(o, _)| o)
}

/// [`run_trial`], keeping the transcript.
pub fn run_trial_traced(
    template: &EmbeddingInstance,
    d: &dyn Distinguisher,
    budget: u64,
    trial: usize,
    seed: u64,
) -> Result<(TrialOutcome, Transcript), ExperimentError> {
    let trial_seed = derive_seed(seed, trial as u64);
    let params = template.params();
    let pair = gen_promise_instance(params.input_len(), params.promise(), derive_seed(trial_seed, 0))?;
    let inst = template.with_inputs(pair, trial_seed)?;
    let (out, transcript) = run_reduction(&inst, Some(budget), derive_seed(trial_seed, 1), |oracle, rng| {
        d.guess(params, oracle, budget, rng)
    });
    let guess = match out {
        Ok(side) => Some(side),
        Err(QueryError::BudgetExceeded { .. }) => None,
        Err(source) => return Err(ExperimentError::Query { trial, source }),
    };
    let outcome = TrialOutcome {
        truth: inst.side(),
        guess,
        bits: transcript.total_bits(),
        max_bits: transcript.max_bits(),
        queries: transcript.len(),
    };
    Ok((outcome, transcript))
}

/// Resolves `params` into a reusable layout, refusing kinds `d` cannot run on.
pub fn template_for(params: &EmbeddingParams, d: &dyn Distinguisher) -> Result<EmbeddingInstance, ExperimentError> {
    let params = params.clone().resolve()?;
    if !d.supports(params.kind()) {
        return Err(ExperimentError::Unsupported { name: d.name(), kind: params.kind().as_str() });
    }
    let pair = gen_promise_instance(params.input_len(), params.promise(), 0)?;
    Ok(EmbeddingInstance::build(params, pair, 0)?)
}

/// Runs `trials` independent trials in parallel. A trial that overruns the
/// budget is invalid and counts as a failure.
pub fn run_distinguisher_trials(
    params: &EmbeddingParams,
    d: &dyn Distinguisher,
    budget: u64,
    trials: usize,
    seed: u64,
) -> Result<SweepRow, ExperimentError> {
    let template = template_for(params, d)?;
    trials_on(&template, d, budget, trials, seed)
}

fn trials_on(
    template: &EmbeddingInstance,
    d: &dyn Distinguisher,
    budget: u64,
    trials: usize,
    seed: u64,
) -> Result<SweepRow, ExperimentError> {
    if trials == 0 {
        return Err(ExperimentError::InvalidConfig("trials must be at least 1".into()));
    }
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(template, d, budget, i, seed))
        .collect::<Result<_, _>>()?;
    let successes = outcomes.iter().filter(|o| o.correct()).count();
    let bits: u64 = outcomes.iter().map(|o| o.bits).sum();
    Ok(SweepRow {
        kind: template.kind().as_str(),
        n: template.params().input_len(),
        t: budget,
        trials,
        success: successes as f64 / trials as f64,
        mean_bits: bits as f64 / trials as f64,
        max_bits_per_query: outcomes.iter().map(|o| o.max_bits).max().unwrap_or(0),
        successes,
        invalid: outcomes.iter().filter(|o| o.guess.is_none()).count(),
    })
}

/// Target success probability.
pub const TARGET: f64 = 2.0 / 3.0;
pub const SWEEP_TRIALS: usize = 400;

/// The smallest budget whose Wilson lower bound clears `2/3`, per `N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    pub row: SweepRow,
    /// Non-monotone success was seen; the search was rerun at twice the trials.
    pub warning: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    /// `N` values skipped, with the reason.
    pub skipped: Vec<(usize, String)>,
}

impl SweepResult {
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        w.write_record(SWEEP_HEADER)?;
        for p in &self.points {
            w.serialize(&p.row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Least-squares slope of `log T*` against `log N`.
    pub fn log_log_slope(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .points
            .iter()
            .filter(|p| p.row.t > 0)
            .map(|p| ((p.row.n as f64).ln(), (p.row.t as f64).ln()))
            .collect();
        log_log_fit(&pts)
    }
}

pub const SWEEP_HEADER: [&str; 7] = ["kind", "N", "T", "trials", "success", "mean_bits", "max_bits_per_query"];

fn log_log_fit(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn clears(row: &SweepRow) -> bool {
    wilson_interval(row.successes as u64, row.trials as u64, Z95).0 >= TARGET
}

struct Search<'a> {
    template: &'a EmbeddingInstance,
    d: &'a dyn Distinguisher,
    trials: usize,
    seed: u64,
    cache: BTreeMap<u64, SweepRow>,
}

impl Search<'_> {
    fn eval(&mut self, t: u64) -> Result<bool, ExperimentError> {
        if !self.cache.contains_key(&t) {
            let row = trials_on(self.template, self.d, t, self.trials, self.seed)?;
            self.cache.insert(t, row);
        }
        Ok(clears(&self.cache[&t]))
    }

    /// Binary search over `(0, hi]`, growing `hi` from `2N` up to `64N`.
    fn run(&mut self, big_n: u64) -> Result<Option<u64>, ExperimentError> {
        let mut hi = 2 * big_n.max(1);
        while !self.eval(hi)? {
            if hi >= 64 * big_n.max(1) {
                return Ok(None);
            }
            hi *= 2;
        }
        let mut lo = 0;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.eval(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(Some(hi))
    }

    fn monotone(&self) -> bool {
        let mut seen_pass = false;
        for row in self.cache.values() {
            let ok = clears(row);
            if seen_pass && !ok {
                return false;
            }
            seen_pass |= ok;
        }
        true
    }
}

/// For each `N`, the minimal budget reaching success `2/3` (Wilson lower
/// bound at 95%) over `trials` trials. All budgets at one `N` share trial
/// seeds, so the comparison between budgets is paired.
pub fn threshold_sweep(
    grid: &[usize],
    make_params: impl Fn(usize) -> EmbeddingParams,
    d: &dyn Distinguisher,
    trials: usize,
    seed: u64,
) -> Result<SweepResult, ExperimentError> {
    let mut result = SweepResult::default();
    for &big_n in grid {
        let template = match template_for(&make_params(big_n), d) {
            Ok(t) => t,
            Err(ExperimentError::Embedding(e)) => {
                result.skipped.push((big_n, e.to_string()));
                continue;
            }
            Err(e) => return Err(e),
        };
        let n_seed = derive_seed(seed, big_n as u64);
        let mut search = Search { template: &template, d, trials, seed: n_seed, cache: BTreeMap::new() };
        let mut found = search.run(big_n as u64)?;
        let mut warning = false;
        if !search.monotone() {
            warning = true;
            search = Search { template: &template, d, trials: 2 * trials, seed: n_seed, cache: BTreeMap::new() };
            found = search.run(big_n as u64)?;
        }
        match found {
            Some(t) => result.points.push(SweepPoint { row: search.cache[&t].clone(), warning }),
            None => result.skipped.push((big_n, format!("no budget up to 64N reached success {TARGET:.4}"))),
        }
    }
    Ok(result)
}

/// Exact success probability of [`PairProbe`] or [`DegreeScan`] with budget
/// `t` on `N` blocks under a fair side coin: `1/2 + min(t, N)/(2N)`.
pub fn scanner_success(t: u64, big_n: usize) -> f64 {
    0.5 + (t.min(big_n as u64) as f64) / (2.0 * big_n as f64)
}

/// Uniform sampler over a fixed edge list, for amplifier experiments.
pub fn uniform_edge_sampler<'a, R: RngCore>(
    edges: &'a [(VertexId, VertexId)],
    rng: &'a mut R,
) -> impl FnMut() -> Result<(VertexId, VertexId), QueryError> + 'a {
    move || {
        if edges.is_empty() {
            return Err(QueryError::NoEdges);
        }
        Ok(edges[rng.gen_range(0..edges.len())])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embeddings::{BaseGraph, CliqueHidingParams, DegreeOnlyParams, TriangleParams};

    fn clique(blocks: usize) -> EmbeddingParams {
        EmbeddingParams::CliqueHiding(CliqueHidingParams::new(BaseGraph::Empty { n: 1 }, 3, blocks))
    }

    #[test]
    fn zero_budget_is_a_coin_flip() {
        let row = run_distinguisher_trials(&clique(32), &PairProbe, 0, 1000, 3).unwrap();
        assert!((row.success - 0.5).abs() <= 0.05, "{}", row.success);
        assert_eq!(row.max_bits_per_query, 0);
    }

    #[test]
    fn full_budget_always_wins() {
        let row = run_distinguisher_trials(&clique(32), &PairProbe, 320, 300, 4).unwrap();
        assert!(row.success >= 0.95);
        assert_eq!(row.max_bits_per_query, 2);
        assert_eq!(row.invalid, 0);
        let row = run_distinguisher_trials(&EmbeddingParams::DegreeOnly(DegreeOnlyParams::new(48, 2)), &DegreeScan, 8, 200, 5)
            .unwrap();
        assert_eq!(row.success, 1.0);
    }

    #[test]
    fn wrong_kind_is_refused() {
        let e = run_distinguisher_trials(&EmbeddingParams::DegreeOnly(DegreeOnlyParams::new(12, 2)), &PairProbe, 4, 10, 0);
        assert!(matches!(e, Err(ExperimentError::Unsupported { .. })));
    }

    #[test]
    fn edge_sample_tester_detects() {
        let p = EmbeddingParams::Triangle(TriangleParams::new(4, 2));
        // 2k of the 4l^2 edges are hidden: 200 samples miss with prob (15/16)^200
        let row = run_distinguisher_trials(&p, &EdgeSampleTester, 200, 300, 6).unwrap();
        assert!(row.success >= 0.95, "{}", row.success);
        let row = run_distinguisher_trials(&p, &EdgeSampleTester, 0, 300, 6).unwrap();
        assert!(row.success < 0.7, "{}", row.success);
    }

    #[test]
    fn amplifier_draws_exactly_seven() {
        let mut calls = 0;
        let out: Result<bool, ()> = edge_sampling_amplifier(
            || {
                calls += 1;
                Ok((0, 1))
            },
            |_, _| true,
        );
        assert_eq!(out, Ok(false));
        assert_eq!(calls, 7);
        let never: Result<bool, ()> = edge_sampling_amplifier(|| Ok((0, 1)), |_, _| false);
        assert_eq!(never, Ok(true));
    }

    #[test]
    fn approximation_checker() {
        assert!(approx_checker(|_| 10.0, 10.0, 0.1, 100, 0).unwrap().pass);
        let off = approx_checker(|_| 10.0 * 1.2, 10.0, 0.1, 100, 0).unwrap();
        assert_eq!(off.success_rate, 0.0);
        assert!(!off.pass);
        let noisy = approx_checker(|r| 10.0 + r.gen_range(-0.5..=0.5), 10.0, 0.1, 100, 0).unwrap();
        assert!(noisy.pass);
        assert!(approx_checker(|_| 1.0, 1.0, 0.0, 100, 0).is_err());
        assert!(approx_checker(|_| 1.0, 1.0, 0.1, 29, 0).is_err());
    }

    #[test]
    fn wilson_brackets_the_rate() {
        let (lo, hi) = wilson_interval(300, 400, Z95);
        assert!(lo < 0.75 && 0.75 < hi);
        assert!((lo - 0.7053).abs() < 1e-3, "{lo}");
        assert_eq!(wilson_interval(0, 0, Z95), (0.0, 1.0));
    }

    #[test]
    fn sweep_is_deterministic_and_csv_shaped() {
        let a = threshold_sweep(&[16, 32], clique, &PairProbe, 100, 9).unwrap();
        let b = threshold_sweep(&[16, 32], clique, &PairProbe, 100, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.points.len(), 2);
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("kind,N,T,trials,success,mean_bits,max_bits_per_query\nclique-hiding,16,"));
        let mut empty = Vec::new();
        SweepResult::default().write_csv(&mut empty).unwrap();
        assert_eq!(String::from_utf8(empty).unwrap(), "kind,N,T,trials,success,mean_bits,max_bits_per_query\n");
    }
}
