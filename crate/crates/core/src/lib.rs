//! Superlinear threshold detectors and the trigger-pulse control attack on
//! BB84 quantum key distribution.
//!
//! Threshold single-photon detectors whose click probability grows faster
//! than linearly with pulse energy can be remotely controlled: an
//! intercept-resend eavesdropper resends bright trigger pulses instead of
//! single photons, firing the receiver's detectors selectively. The
//! steeper the detector's response, the lower the error rate the attack
//! leaves behind. This crate quantifies that attack surface:
//!
//! - [`detector`] models detector responses: analytic laws (linear
//!   reference, a synthetic superlinear family, the extremal worst case),
//!   pinned stubs, and measured response curves, optionally resolved over
//!   trigger arrival time.
//! - [`attack`] holds the closed-form attack rates (error rate,
//!   transmittance, loss) and the defender's side: a one-way key-rate
//!   bound, its zero crossing, the worst-case attack curve, and region
//!   classification of operating points.
//! - [`scan`] evaluates the attack against concrete detector pairs and
//!   optimizes it over trigger-pulse grids.
//! - [`sim`] is a Monte Carlo protocol simulation and an exact event-tree
//!   enumeration, used as independent oracles for the analytic layer.
//! - [`io`] reads measured response data and writes scan tables with
//!   reproducible bytes.
//!
//! Grid sweeps and simulations run data-parallel by default via the
//! `parallel` feature; disabling it removes the thread-pool dependency
//! while every `*_sequential` entry point keeps producing bit-identical
//! results.

pub mod attack;
pub mod detector;
pub mod error;
pub mod io;
pub mod scan;
pub mod sim;

pub use error::{Error, Result};
