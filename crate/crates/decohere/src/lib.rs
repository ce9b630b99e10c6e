//! Exactly solvable dephasing models for quantum registers.
//!
//! A register of qubits couples diagonally to a bath of environment modes
//! (two-level partners or harmonic oscillators), so populations never move
//! while every off-diagonal element of the reduced density matrix is
//! multiplied by a product of per-mode *decohering factors* with modulus at
//! most one. This crate computes those factors exactly and in closed form,
//! follows them into macroscopic regimes, and applies them to the readout
//! statistics of the order-finding quantum algorithm.
//!
//! Capabilities, by module:
//!
//! - [`registers`]: basis labels, per-qubit couplings, net coupling of a
//!   label, and grouping labels into decoherence-free subspaces (equal
//!   coupling rows).
//! - [`environment`]: discrete baths, thermal weights, oscillator couplings,
//!   and continuum spectral densities with band cutoffs.
//! - [`decoherence`]: exact, thermal, weak-coupling, and oscillator-bath
//!   decohering factors; products over modes; continuum dephasing exponents;
//!   decay-rate fits; and runtime-vs-decoherence-time feasibility checks.
//! - [`density`]: reduced density-matrix evolution under pure dephasing,
//!   plus a brute-force joint-state oracle for cross-checking.
//! - [`shor`]: order-finding readout distributions, their degradation under
//!   decoherence kernels, success probabilities over "good" readouts, and an
//!   efficiency classifier for success-probability models.
//! - [`csvio`]: deterministic CSV output (17-significant-digit round-trip)
//!   and a small reader/summarizer.
//! - [`cli`]: scenario configs and the `decohere` binary's subcommands.
//!
//! Numerical contract: every factor satisfies `|F| <= 1 + 1e-12`; exponents
//! accumulate in log space so products over millions of modes neither
//! underflow nor lose the phase; CSV output is byte-deterministic for a
//! given input regardless of thread count.

pub mod cli;
pub mod csvio;
pub mod decoherence;
pub mod density;
pub mod environment;
pub mod error;
pub mod linalg;
pub mod registers;
pub mod shor;

pub use decoherence::{
    factor_oscillator, factor_two_level_exact, factor_two_level_thermal, factor_weak_coupling,
    product_factor, DecoherenceFactor, DephasingCurve, FeasibilityInput, FeasibilityVerdict,
};
pub use density::{evolve_reduced, DensityMatrix, SystemState};
pub use environment::{BathMode, DiscreteBath, OscillatorCoupling, SpectralDensity, ThermalState};
pub use error::{Error, Result};
pub use registers::{decompose_subspaces, net_coupling, BasisLabel, RegisterSpec};
pub use shor::{
    classify_efficiency, shor_distribution, shor_distribution_decohered, success_probability,
    DecoherenceKernel, EfficiencySpec, ShorDistribution, ShorInstance,
};
