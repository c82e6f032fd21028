//! Exact quantum simulation and equilibrium analysis for a three-agent
//! Kiyotaki-Wright barter economy with quantum goods and entangled strategies.
//!
//! The crate is `no_std` (alloc required). IO, file formats and the CLI live
//! in the companion `qkw-cli` crate.
//!
//! Layering, bottom up:
//! - [`qsim`]: sparse state vectors over labeled qubit registers, controlled
//!   operators, outer products and partial traces.
//! - [`circuit`]: the single-round exchange circuit (matchmaking, entangled
//!   strategies, agreement-controlled swaps, consumption/production) and its
//!   exact branch expansions.
//! - [`channel`]: the round superoperator on the commodity space, steady
//!   states via Markov-chain decomposition, entanglement-decay certificates
//!   and Monte Carlo trajectory sampling.
//! - [`economy`]: storage costs, consumption probabilities and discounted
//!   payoffs.
//! - [`equilibrium`]: best-response search, equilibrium enumeration, phase
//!   diagrams, coalition analysis and goods-flow graphs.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod channel;
pub mod circuit;
pub mod economy;
pub mod equilibrium;
pub mod qsim;

pub use num_complex::Complex64;
