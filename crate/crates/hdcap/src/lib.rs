//! Capacity and energy efficiency of hard-decision-detected modulation.
//!
//! The library computes, for M-ary PSK and M-ary on-off frequency-shift
//! keying (OOFSK, with plain FSK as the duty-cycle-1 special case):
//!
//! * exact transition probabilities of the discrete channel induced by
//!   hard-decision detection over AWGN, coherent fading, and noncoherent
//!   Rician fading ([`psk`], [`oofsk`]),
//! * channel capacity / achievable rate in nats per symbol ([`psk`],
//!   [`oofsk`]),
//! * low-SNR expansions: first and second capacity derivatives at zero SNR,
//!   bit energy at zero spectral efficiency, and the wideband slope
//!   ([`psk::psk_lowsnr`]),
//! * bit-energy versus spectral-efficiency curves and their minima
//!   ([`metrics`]),
//! * a seeded Monte Carlo detector simulation that cross-checks every
//!   analytic transition probability ([`simcheck`]).
//!
//! All SNR arguments are linear ratios of average symbol energy to noise
//! spectral density; decibel conversion happens at the caller's boundary.
//! Rates are natural-log (nats/symbol) unless a name says otherwise.
//!
//! The crate is `no_std`-compatible: disable default features and enable
//! `libm` to build without the standard library (allocation is required).

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]
// Negated float comparisons are NaN-rejecting input guards; keep them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod channel;
mod math;
pub mod metrics;
pub mod oofsk;
pub mod psk;
pub mod quad;
pub mod rng;
pub mod simcheck;
pub mod specfun;

use core::fmt;

/// Error type shared by all fallible operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    Domain(&'static str),
    /// An iterative routine exhausted its budget; `at` is the offending
    /// abscissa (SNR, integration point, ...) for diagnostics.
    NoConvergence { what: &'static str, at: f64 },
    /// Inconsistent or incomplete arguments (wrong dimensions, a missing
    /// fading realization, an empty grid, ...).
    Usage(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::NoConvergence { what, at } => {
                write!(f, "no convergence: {what} (at {at:e})")
            }
            Error::Usage(what) => write!(f, "usage error: {what}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
