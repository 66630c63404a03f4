//! Exact statevector simulation of the QAOA on MaxCut instances drawn from
//! random-graph ensembles.
//!
//! The crate covers the full loop of a concentration study: generate
//! instances (3-regular via the configuration model, or Erdős–Rényi),
//! compute exact MaxCut values and depth-1 neighborhood censuses, simulate
//! the circuit and its objective, search for angle schedules with a
//! multistart Nelder–Mead, and run the packaged experiments — objective
//! concentration across instances at fixed angles, per-edge correlation
//! estimation, and small-to-large angle transfer. The `qaoa-maxcut` binary
//! exposes all of it behind seeded, reproducible subcommands.
//!
//! Determinism contract: given the same root seed and configuration, every
//! result in this crate is byte-identical, independent of worker-thread
//! count. Randomness flows through named substreams (see [`rng`]) and all
//! parallel reductions run over fixed-size chunks combined in order.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod optimize;
pub mod qaoa;
pub mod report;
pub mod rng;

pub use error::{Error, Result};

/// Resource limits, enforced before work starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest statevector simulation, in qubits.
    pub sim_qubits: usize,
    /// Largest brute-force MaxCut enumeration, in vertices.
    pub brute_force_qubits: usize,
    /// Attempt budget for rejection-sampling generators.
    pub generation_retries: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Self { sim_qubits: 26, brute_force_qubits: 30, generation_retries: 10_000 }
    }
}
