//! Two-party simulation of graph queries.
//!
//! Alice holds `x`, Bob holds `y`. Each lazy rule reads at most one value
//! `xⱼ ∧ yⱼ`, which the parties settle by Alice sending `xⱼ` and Bob sending
//! `yⱼ`: two bits, charged whether or not a shorter exchange would do.
//! Everything else (the construction's public structure and the shared
//! randomness `ρ`) is free.

use std::io::Write;

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::embeddings::{CoordinateSource, EmbeddingInstance};
use crate::graph::{GraphOracle, Query, QueryAnswer, QueryError, QueryKind};
use crate::inputs::{BitVector, InputError, Promise, PromisePair, Side};
use crate::seed::{derive_seed, rng_from_seed};

/// Bits charged for one coordinate exchange.
pub const BITS_PER_EXCHANGE: u64 = 2;

/// Draws a pair satisfying `promise`. The side is a fair coin (always
/// disjoint under [`Promise::Disjoint`]); given the side, the pair is uniform
/// among pairs with that intersection size.
pub fn gen_promise_instance(n: usize, promise: Promise, seed: u64) -> Result<PromisePair, InputError> {
    let mut rng = rng_from_seed(seed);
    let side = match promise {
        Promise::Disjoint => Side::Disjoint,
        _ if rng.gen::<bool>() => Side::Intersecting,
        _ => Side::Disjoint,
    };
    gen_on_side(n, promise, side, &mut rng)
}

/// Draws a uniform pair on a fixed side of `promise`.
pub fn gen_on_side<R: Rng + ?Sized>(
    n: usize,
    promise: Promise,
    side: Side,
    rng: &mut R,
) -> Result<PromisePair, InputError> {
    let hits = match side {
        Side::Disjoint => 0,
        Side::Intersecting => promise.intersecting_size().ok_or(InputError::Infeasible { promise, n })?,
    };
    if n == 0 || hits > n || promise == (Promise::KIntersectOrDisjoint { k: 0 }) {
        return Err(InputError::Infeasible { promise, n });
    }
    let mut x = BitVector::zeros(n);
    let mut y = BitVector::zeros(n);
    let mut hot = vec![false; n];
    for j in sample(rng, n, hits) {
        hot[j] = true;
    }
    for (j, &is_hot) in hot.iter().enumerate() {
        if is_hot {
            x.set(j, true);
            y.set(j, true);
        } else {
            // uniform over 00, 10, 01
            match rng.gen_range(0..3) {
                1 => x.set(j, true),
                2 => y.set(j, true),
                _ => {}
            }
        }
    }
    PromisePair::new(x, y, promise)
}

/// `x ∥ x ∥ … ∥ x` (`k` copies).
pub fn replicate_input(x: &BitVector, k: usize) -> BitVector {
    let mut bits = Vec::with_capacity(x.len() * k);
    for _ in 0..k {
        bits.extend_from_slice(x.bits());
    }
    BitVector::from_bits(bits)
}

/// Lifts a unique-intersection pair to the `{0, k}` promise by replication.
pub fn replicate_pair(pair: &PromisePair, k: usize) -> Result<PromisePair, InputError> {
    PromisePair::new(
        replicate_input(pair.x(), k),
        replicate_input(pair.y(), k),
        Promise::KIntersectOrDisjoint { k },
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PartyName {
    Alice,
    Bob,
}

/// One party: its own input and nothing else.
#[derive(Debug)]
pub struct Party {
    name: PartyName,
    input: BitVector,
    reads: u64,
}

impl Party {
    pub fn new(name: PartyName, input: BitVector) -> Self {
        Party { name, input, reads: 0 }
    }

    pub fn name(&self) -> PartyName {
        self.name
    }

    /// Sends bit `j` of this party's input.
    fn send(&mut self, j: usize) -> Result<bool, QueryError> {
        if j >= self.input.len() {
            return Err(QueryError::CapabilityViolation(format!(
                "{:?} asked for coordinate {j} of a {}-bit input",
                self.name,
                self.input.len()
            )));
        }
        self.reads += 1;
        Ok(self.input.get(j))
    }

    pub fn reads(&self) -> u64 {
        self.reads
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranscriptEntry {
    pub query: Query,
    pub bits: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Transcript {
    entries: Vec<TranscriptEntry>,
    total_bits: u64,
}

impl Transcript {
    pub fn push(&mut self, query: Query, bits: u64) {
        self.entries.push(TranscriptEntry { query, bits });
        self.total_bits += bits;
    }

    pub fn entries(&self) -> &[TranscriptEntry] {
        &self.entries
    }

    pub fn total_bits(&self) -> u64 {
        self.total_bits
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_bits(&self) -> u64 {
        self.entries.iter().map(|e| e.bits).max().unwrap_or(0)
    }

    /// Appends CSV rows `trial, query_index, query_kind, bits, cumulative_bits`.
    pub fn write_csv<W: Write>(&self, trial: usize, out: &mut csv::Writer<W>) -> csv::Result<()> {
        let mut cumulative = 0;
        for (i, e) in self.entries.iter().enumerate() {
            cumulative += e.bits;
            out.write_record([
                trial.to_string(),
                i.to_string(),
                e.query.kind().to_string(),
                e.bits.to_string(),
                cumulative.to_string(),
            ])?;
        }
        Ok(())
    }
}

pub const TRANSCRIPT_HEADER: [&str; 5] = ["trial", "query_index", "query_kind", "bits", "cumulative_bits"];

/// Alice, Bob, their shared randomness `ρ`, and the transcript so far.
#[derive(Debug)]
pub struct ProtocolSession {
    alice: Party,
    bob: Party,
    rho: ChaCha8Rng,
    transcript: Transcript,
    exchanges: u64,
    announced: Option<usize>,
}

impl ProtocolSession {
    pub fn new(x: BitVector, y: BitVector, seed: u64) -> Self {
        ProtocolSession {
            alice: Party::new(PartyName::Alice, x),
            bob: Party::new(PartyName::Bob, y),
            rho: rng_from_seed(seed),
            transcript: Transcript::default(),
            exchanges: 0,
            announced: None,
        }
    }

    /// Hands `x` to Alice and `y` to Bob.
    pub fn from_pair(pair: &PromisePair, seed: u64) -> Self {
        Self::new(pair.x().clone(), pair.y().clone(), seed)
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn into_transcript(self) -> Transcript {
        self.transcript
    }

    /// First coordinate at which the parties found `xⱼ = yⱼ = 1`, if any.
    /// Recorded only; the two exchanged bits already determine it.
    pub fn announced(&self) -> Option<usize> {
        self.announced
    }

    pub fn alice(&self) -> &Party {
        &self.alice
    }

    pub fn bob(&self) -> &Party {
        &self.bob
    }

    /// Answers `q` on `inst` using only the parties' exchanged bits and `ρ`,
    /// appending one transcript entry.
    pub fn simulate_query(&mut self, inst: &EmbeddingInstance, q: Query) -> Result<QueryAnswer, QueryError> {
        if inst.inputs().len() != self.alice.input.len() {
            return Err(QueryError::CapabilityViolation(format!(
                "session holds {}-bit inputs but the instance expects {}",
                self.alice.input.len(),
                inst.inputs().len()
            )));
        }
        let mut channel = Channel {
            alice: &mut self.alice,
            bob: &mut self.bob,
            exchanges: 0,
            announced: &mut self.announced,
        };
        let answer = inst.answer_with(q, &mut self.rho, &mut channel)?;
        let exchanges = channel.exchanges;
        self.exchanges += exchanges;
        if self.alice.reads != self.exchanges || self.bob.reads != self.exchanges {
            return Err(QueryError::CapabilityViolation(format!(
                "input reads outside the channel: alice {}, bob {}, exchanges {}",
                self.alice.reads, self.bob.reads, self.exchanges
            )));
        }
        self.transcript.push(q, exchanges * BITS_PER_EXCHANGE);
        Ok(answer)
    }
}

/// The only path from a lazy rule to the inputs: each read is one exchange
/// in which each party sends one bit of its own input.
struct Channel<'s> {
    alice: &'s mut Party,
    bob: &'s mut Party,
    exchanges: u64,
    announced: &'s mut Option<usize>,
}

impl CoordinateSource for Channel<'_> {
    fn both(&mut self, j: usize) -> Result<bool, QueryError> {
        let a = self.alice.send(j)?;
        let b = self.bob.send(j)?;
        self.exchanges += 1;
        let hit = a && b;
        if hit && self.announced.is_none() {
            *self.announced = Some(j);
        }
        Ok(hit)
    }
}

/// A [`GraphOracle`] whose every answer comes out of a protocol session,
/// with an optional query budget.
pub struct SimulatedOracle<'a> {
    inst: &'a EmbeddingInstance,
    session: &'a mut ProtocolSession,
    budget: Option<u64>,
    answered: u64,
}

impl<'a> SimulatedOracle<'a> {
    pub fn new(inst: &'a EmbeddingInstance, session: &'a mut ProtocolSession, budget: Option<u64>) -> Self {
        SimulatedOracle { inst, session, budget, answered: 0 }
    }

    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    pub fn remaining(&self) -> Option<u64> {
        self.budget.map(|b| b.saturating_sub(self.answered))
    }
}

impl GraphOracle for SimulatedOracle<'_> {
    fn vertex_count(&self) -> usize {
        self.inst.vertex_count()
    }

    fn supports(&self, kind: QueryKind) -> bool {
        self.inst.supports(kind)
    }

    fn query(&mut self, q: Query) -> Result<QueryAnswer, QueryError> {
        if let Some(budget) = self.budget {
            if self.answered >= budget {
                return Err(QueryError::BudgetExceeded { budget });
            }
        }
        let answer = self.session.simulate_query(self.inst, q)?;
        self.answered += 1;
        Ok(answer)
    }

    fn queries_answered(&self) -> u64 {
        self.answered
    }
}

/// The reduction protocol: runs `algorithm` with every query answered by
/// the two parties. The algorithm's own coins come from the shared
/// randomness (child seed 1); `ρ` for random-edge queries is child seed 0.
pub fn run_reduction<T, F>(
    inst: &EmbeddingInstance,
    budget: Option<u64>,
    seed: u64,
    algorithm: F,
) -> (Result<T, QueryError>, Transcript)
where
    F: FnOnce(&mut dyn GraphOracle, &mut ChaCha8Rng) -> Result<T, QueryError>,
{
    let mut session = ProtocolSession::from_pair(inst.inputs(), derive_seed(seed, 0));
    let mut coins = rng_from_seed(derive_seed(seed, 1));
    let out = {
        let mut oracle = SimulatedOracle::new(inst, &mut session, budget);
        algorithm(&mut oracle, &mut coins)
    };
    (out, session.into_transcript())
}
