//! Lower-bound graph families built from two-party inputs, with lazy query
//! oracles, per-query communication accounting, brute-force verifiers and
//! threshold experiments.

pub mod arith;
pub mod cli;
pub mod embeddings;
pub mod experiments;
pub mod graph;
pub mod inputs;
pub mod protocol;
pub mod seed;
pub mod verify;
