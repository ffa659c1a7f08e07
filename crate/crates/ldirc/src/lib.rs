//! Exact sum-capacity, GDoF and bit-level scheme simulation for the symmetric
//! linear deterministic interference relay channel (LD-IRC).
//!
//! The crate is organised by capability:
//!
//! * [`ld`]: bit words, the down-shift and the channel input-output maps.
//! * [`capacity`] and [`gdof`]: closed-form capacity, GDoF and upper bounds.
//! * [`schemes`]: regime classification, rate-allocation tables, transmit
//!   layouts and a GF(2) simulator that runs the schemes bit by bit.
//! * [`rate_opt`]: guarded constraint systems and an exhaustive optimizer.
//! * [`gaussian`]: sub-channel bookkeeping that links LD levels to the
//!   Gaussian channel.
//! * [`sweep`] and [`cli`]: grid verification and the command-line front end.

pub mod capacity;
pub mod cli;
pub mod error;
pub mod gaussian;
pub mod gdof;
pub mod gf2;
pub mod ld;
pub mod rate_opt;
pub mod rational;
pub mod schemes;
pub mod sweep;

pub use capacity::{ld_sum_capacity, ld_upper_bounds, BoundSet, LdBound};
pub use error::{Error, Result};
pub use gdof::{gdof, gdof_ic, gdof_upper_bounds, scale_to_ld, GdofBound, GdofParams};
pub use ld::{relay_output, rx_output, shift_down, BitWord, LdParams, Regime};
pub use rational::Q;
