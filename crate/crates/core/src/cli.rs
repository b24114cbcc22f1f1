//! Command-line front end: `gen`, `verify`, `simulate`, `sweep`. Every
//! command is a pure function of its flags and seed.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::embeddings::{
    materialize_capped, BaseGraph, CliqueHidingParams, ConnectivityParams, DegreeOnlyParams, EmbeddingInstance,
    EmbeddingKind, EmbeddingParams, InstanceFile, MaterializeCap, MomentsBlockParams, MomentsHidingParams,
    RCliqueParams, TriangleParams,
};
use crate::experiments::{distinguisher_by_name, run_trial_traced, template_for, threshold_sweep, SWEEP_TRIALS};
use crate::graph::ExplicitGraph;
use crate::inputs::{BitVector, PromisePair, Side};
use crate::protocol::{gen_on_side, gen_promise_instance, TRANSCRIPT_HEADER};
use crate::seed::rng_from_seed;
use crate::verify::{verify_instance, VerificationReport};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;

const SCHEMAS: &str = "\
Embedding parameters (--kind and the flags it reads):
  clique-hiding   --base FAMILY:N --l L --blocks N [--target T] [--augment-connect]
                  input length N; base families: empty, path, cycle, complete, star
  triangle        --l L --k K [--s-size S] [--n N]        input length L*L
  r-clique        --r R --l L --k K [--n N] [--s-budget B] input length L*L
  connectivity    --k K --l L --n N                      input length L*L
  degree-only     --n N --k K                            input length N/(3K), N padded up
  moments-hiding  --s S --alpha A --c C --base FAMILY:N [--blocks N] [--m-tilde M]
                  input length N = blocks; --m-tilde must equal M_s of the base
  moments-block   --s S --alpha A --c C --m-tilde M --n N  input length d/l

Distinguishers: pair-probe (clique-hiding), degree-scan (degree-only),
edge-sample (triangle).

Exit codes: 0 ok, 1 a verification check failed, 2 configuration error.
Environment: QLB_MAX_VERTICES, QLB_MAX_EDGES cap materialization.";

#[derive(Debug, Parser)]
#[command(name = "qlb", version, about = "Query lower-bound constructions: generate, verify, simulate, sweep")]
#[command(after_help = SCHEMAS)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an instance and write it as JSON, plus an edge list if requested.
    #[command(after_help = SCHEMAS)]
    Gen(GenArgs),
    /// Run every gap check for an instance; JSON lines out.
    Verify(VerifyArgs),
    /// Run a distinguisher through the two-party simulation.
    #[command(after_help = SCHEMAS)]
    Simulate(SimulateArgs),
    /// Find the minimal query budget reaching success 2/3 for each N.
    #[command(after_help = SCHEMAS)]
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Disjoint,
    Intersecting,
    Random,
}

#[derive(Clone, Debug, Default, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub s_size: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    /// Cap on hidden cliques through S for r-clique.
    #[arg(long)]
    pub s_budget: Option<u64>,
    #[arg(long)]
    pub base: Option<String>,
    #[arg(long)]
    pub blocks: Option<usize>,
    #[arg(long)]
    pub target: Option<usize>,
    #[arg(long)]
    pub augment_connect: bool,
    #[arg(long)]
    pub s: Option<u32>,
    #[arg(long)]
    pub alpha: Option<usize>,
    #[arg(long)]
    pub c: Option<u64>,
    #[arg(long)]
    pub m_tilde: Option<u128>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value = "random")]
    pub side: SideArg,
    /// Alice's input as a 0/1 string; overrides --side together with --y.
    #[arg(long, requires = "y")]
    pub x: Option<String>,
    #[arg(long, requires = "x")]
    pub y: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Instance JSON path; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Edge-list path, written when the instance fits the materialization cap.
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Include derived metadata (n, m, side, degree table) in the JSON.
    #[arg(long)]
    pub metadata: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Instance JSON written by `gen`.
    #[arg(long)]
    pub instance: PathBuf,
    /// Check this edge list instead of the materialized instance.
    #[arg(long)]
    pub edges: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub distinguisher: String,
    /// Query budget T per trial.
    #[arg(long)]
    pub budget: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Transcript CSV path.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
    /// Summary JSON path; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub distinguisher: String,
    /// Comma-separated values of N; may be empty.
    #[arg(long, default_value = "")]
    pub grid: String,
    #[arg(long, default_value_t = SWEEP_TRIALS)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cli: Cli) -> u8 {
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(&a).map(|_| EXIT_OK),
        Command::Verify(a) => cmd_verify(&a).map(|ok| if ok { EXIT_OK } else { EXIT_VERIFY_FAILED }),
        Command::Simulate(a) => cmd_simulate(&a).map(|_| EXIT_OK),
        Command::Sweep(a) => cmd_sweep(&a).map(|_| EXIT_OK),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_CONFIG
        }
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str, kind: EmbeddingKind) -> Result<T> {
    v.ok_or_else(|| anyhow!("{} needs --{flag}", kind.as_str()))
}

fn base(spec: Option<&str>, kind: EmbeddingKind) -> Result<BaseGraph> {
    let spec = spec.ok_or_else(|| anyhow!("{} needs --base FAMILY:N", kind.as_str()))?;
    BaseGraph::parse_family(spec).ok_or_else(|| anyhow!("unknown base graph {spec:?}; expected FAMILY:N"))
}

impl ParamArgs {
    pub fn kind(&self) -> Result<EmbeddingKind> {
        let name = self.kind.as_deref().ok_or_else(|| anyhow!("--kind is required"))?;
        EmbeddingKind::parse(name).ok_or_else(|| {
            let all: Vec<&str> = EmbeddingKind::ALL.iter().map(|k| k.as_str()).collect();
            anyhow!("unknown kind {name:?}; expected one of {}", all.join(", "))
        })
    }

    /// Primary parameters for the chosen kind, unresolved.
    pub fn to_params(&self) -> Result<EmbeddingParams> {
        let kind = self.kind()?;
        Ok(match kind {
            EmbeddingKind::CliqueHiding => {
                let mut p = CliqueHidingParams::new(
                    base(self.base.as_deref().or(Some("empty:1")), kind)?,
                    need(self.l, "l", kind)?,
                    need(self.blocks, "blocks", kind)?,
                )
                .with_augment_connect(self.augment_connect);
                if let Some(t) = self.target {
                    p = p.with_target(t);
                }
                EmbeddingParams::CliqueHiding(p)
            }
            EmbeddingKind::Triangle => {
                let mut p = TriangleParams::new(need(self.l, "l", kind)?, need(self.k, "k", kind)?);
                if let Some(s) = self.s_size {
                    p = p.with_s_size(s);
                }
                if let Some(n) = self.n {
                    p = p.with_n(n);
                }
                EmbeddingParams::Triangle(p)
            }
            EmbeddingKind::RClique => {
                let mut p = RCliqueParams::new(need(self.r, "r", kind)?, need(self.l, "l", kind)?, need(self.k, "k", kind)?);
                if let Some(n) = self.n {
                    p = p.with_n(n);
                }
                if let Some(b) = self.s_budget {
                    p = p.with_budget(b);
                }
                EmbeddingParams::RClique(p)
            }
            EmbeddingKind::Connectivity => EmbeddingParams::Connectivity(ConnectivityParams::new(
                need(self.k, "k", kind)?,
                need(self.l, "l", kind)?,
                need(self.n, "n", kind)?,
            )),
            EmbeddingKind::DegreeOnly => {
                EmbeddingParams::DegreeOnly(DegreeOnlyParams::new(need(self.n, "n", kind)?, need(self.k, "k", kind)?))
            }
            EmbeddingKind::MomentsHiding => {
                let mut p = MomentsHidingParams::new(
                    need(self.s, "s", kind)?,
                    need(self.alpha, "alpha", kind)?,
                    need(self.c, "c", kind)?,
                    base(self.base.as_deref(), kind)?,
                );
                if let Some(b) = self.blocks {
                    p = p.with_blocks(b);
                }
                if let Some(m) = self.m_tilde {
                    p = p.with_m_tilde(m);
                }
                EmbeddingParams::MomentsHiding(p)
            }
            EmbeddingKind::MomentsBlock => EmbeddingParams::MomentsBlock(MomentsBlockParams::new(
                need(self.s, "s", kind)?,
                need(self.alpha, "alpha", kind)?,
                need(self.c, "c", kind)?,
                need(self.m_tilde, "m-tilde", kind)?,
                need(self.n, "n", kind)?,
            )),
        })
    }

    /// Parameters for a sweep point with input length `big_n`.
    fn at_size(&self, big_n: usize) -> Result<EmbeddingParams> {
        let mut a = self.clone();
        let kind = a.kind()?;
        match kind {
            EmbeddingKind::CliqueHiding => {
                a.blocks = Some(big_n);
                a.l = a.l.or(Some(3));
            }
            EmbeddingKind::DegreeOnly => {
                let k = a.k.unwrap_or(1);
                a.k = Some(k);
                a.n = Some(3 * k * big_n);
            }
            EmbeddingKind::Triangle => {
                let l = (big_n as f64).sqrt().round() as usize;
                if l * l != big_n {
                    bail!("triangle needs N = l*l, got {big_n}");
                }
                a.l = Some(l);
                a.k = a.k.or(Some(1));
            }
            _ => bail!("sweeps are defined for clique-hiding, degree-only and triangle"),
        }
        a.to_params()
    }
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn bits(s: &str, flag: &str) -> Result<BitVector> {
    BitVector::from_binary_str(s).ok_or_else(|| anyhow!("--{flag} must be a 0/1 string"))
}

/// Builds the instance described by `a`.
pub fn gen_instance(a: &GenArgs) -> Result<EmbeddingInstance> {
    let params = a.params.to_params()?.resolve()?;
    let (len, promise) = (params.input_len(), params.promise());
    let pair = match (&a.x, &a.y) {
        (Some(x), Some(y)) => PromisePair::new(bits(x, "x")?, bits(y, "y")?, promise)?,
        _ => match a.side {
            SideArg::Random => gen_promise_instance(len, promise, a.seed)?,
            SideArg::Disjoint => gen_on_side(len, promise, Side::Disjoint, &mut rng_from_seed(a.seed))?,
            SideArg::Intersecting => gen_on_side(len, promise, Side::Intersecting, &mut rng_from_seed(a.seed))?,
        },
    };
    Ok(EmbeddingInstance::build(params, pair, a.seed)?)
}

pub fn cmd_gen(a: &GenArgs) -> Result<()> {
    let inst = gen_instance(a)?;
    let mut json = inst.to_json(a.metadata);
    json.push('\n');
    write_out(a.out.as_deref(), json.as_bytes())?;
    if let Some(path) = &a.edges {
        match materialize_capped(&inst, MaterializeCap::from_env()) {
            Ok(g) => fs::write(path, g.to_edge_list()).with_context(|| format!("writing {}", path.display()))?,
            Err(e) => eprintln!("warning: edge list not written: {e}"),
        }
    }
    Ok(())
}

pub fn load_instance(path: &Path) -> Result<EmbeddingInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: InstanceFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(EmbeddingInstance::from_file(&file)?)
}

/// Writes the reports; `Ok(true)` iff every check passed.
pub fn cmd_verify(a: &VerifyArgs) -> Result<bool> {
    let inst = load_instance(&a.instance)?;
    let reports = match &a.edges {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let g = ExplicitGraph::parse_edge_list(&text).with_context(|| format!("parsing {}", path.display()))?;
            verify_instance(&inst, &g)
        }
        None => match materialize_capped(&inst, MaterializeCap::from_env()) {
            Ok(g) => verify_instance(&inst, &g),
            Err(e) => vec![VerificationReport::refused(
                "materialize",
                crate::verify::Quantity::EdgeCount,
                e.to_string(),
            )],
        },
    };
    let mut out = String::new();
    for r in &reports {
        out.push_str(&r.to_json_line());
        out.push('\n');
    }
    write_out(a.out.as_deref(), out.as_bytes())?;
    Ok(reports.iter().all(|r| r.pass))
}

#[derive(Debug, Serialize)]
pub struct SimulateSummary {
    pub kind: &'static str,
    pub distinguisher: &'static str,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "T")]
    pub t: u64,
    pub trials: usize,
    pub success: f64,
    pub invalid_trials: usize,
    pub mean_bits: f64,
    pub max_bits_per_query: u64,
    pub mean_queries: f64,
}

pub fn cmd_simulate(a: &SimulateArgs) -> Result<SimulateSummary> {
    let d = distinguisher_by_name(&a.distinguisher)
        .ok_or_else(|| anyhow!("unknown distinguisher {:?}", a.distinguisher))?;
    if a.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let template = template_for(&a.params.to_params()?, d.as_ref())?;
    let mut csv = a
        .transcript
        .as_ref()
        .map(|p| -> Result<_> {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_path(p)
                .with_context(|| format!("writing {}", p.display()))?;
            w.write_record(TRANSCRIPT_HEADER)?;
            Ok(w)
        })
        .transpose()?;
    let (mut wins, mut invalid, mut bits, mut queries, mut max_bits) = (0, 0, 0u64, 0usize, 0u64);
    for trial in 0..a.trials {
        let (o, transcript) = run_trial_traced(&template, d.as_ref(), a.budget, trial, a.seed)?;
        wins += usize::from(o.correct());
        invalid += usize::from(o.guess.is_none());
        bits += o.bits;
        queries += o.queries;
        max_bits = max_bits.max(o.max_bits);
        if let Some(w) = csv.as_mut() {
            transcript.write_csv(trial, w)?;
        }
    }
    if let Some(mut w) = csv {
        w.flush()?;
    }
    let t = a.trials as f64;
    let summary = SimulateSummary {
        kind: template.kind().as_str(),
        distinguisher: d.name(),
        n: template.params().input_len(),
        t: a.budget,
        trials: a.trials,
        success: wins as f64 / t,
        invalid_trials: invalid,
        mean_bits: bits as f64 / t,
        max_bits_per_query: max_bits,
        mean_queries: queries as f64 / t,
    };
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    write_out(a.out.as_deref(), json.as_bytes())?;
    Ok(summary)
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<()> {
    let d = distinguisher_by_name(&a.distinguisher)
        .ok_or_else(|| anyhow!("unknown distinguisher {:?}", a.distinguisher))?;
    let kind = a.params.kind()?;
    if !d.supports(kind) {
        bail!("distinguisher {} does not support {}", d.name(), kind.as_str());
    }
    let mut grid = Vec::new();
    for item in a.grid.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let big_n: usize = item.parse().with_context(|| format!("bad --grid entry {item:?}"))?;
        match a.params.at_size(big_n) {
            Ok(_) => grid.push(big_n),
            Err(e) => eprintln!("warning: skipping N = {big_n}: {e:#}"),
        }
    }
    let params = a.params.clone();
    let result = threshold_sweep(
        &grid,
        |big_n| params.at_size(big_n).expect("checked above"),
        d.as_ref(),
        a.trials,
        a.seed,
    )?;
    for (big_n, why) in &result.skipped {
        eprintln!("warning: skipping N = {big_n}: {why}");
    }
    for p in result.points.iter().filter(|p| p.warning) {
        eprintln!("warning: N = {}: non-monotone success, reran at {} trials", p.row.n, p.row.trials);
    }
    let mut buf = Vec::new();
    result.write_csv(&mut buf)?;
    write_out(a.out.as_deref(), &buf)
}
