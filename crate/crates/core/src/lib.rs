//! Space-time beamforming for LEO satellite interference networks.
//!
//! A satellite repeats each symbol `M` times at an interval `tau` while moving,
//! so the channel it sees towards a user is the Kronecker product of a
//! temporal (Doppler) steering vector and the spatial UPA response. Users that
//! share an angle of arrival can still be separated through their Doppler
//! signature. This crate provides the channel model, the precoders built on
//! it (MRT, ZF, SLNR and their space-time variants), rate metrics, a seeded
//! Monte Carlo scenario engine and a small TLE/orbit toolkit for checking
//! Doppler feasibility.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod beamform;
pub mod channel;
pub mod ephemeris;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod scenario;
pub mod stats;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Speed of light used throughout the link model (m/s).
pub const SPEED_OF_LIGHT: f64 = 3.0e8;
