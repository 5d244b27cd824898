//! Loss bounds and constructive schemes for broadcasting a successively
//! refinable source to many receivers over a degraded broadcast channel.
//!
//! Serving `T` receivers with separate source and channel codes costs rate
//! compared to an ideal joint design, but the loss is bounded. This crate
//! computes those bounds in closed form ([`bounds`]), implements the
//! schemes behind them for the Gaussian broadcast channel (time sharing,
//! optimal superposition splits, and a two-parameter near-optimal family;
//! [`schemes`], [`awgn`]), and drives parameter sweeps with reproducible
//! CSV/SVG output ([`cli`]).
//!
//! # Example
//!
//! ```
//! use sepbound::model::{AwgnBroadcast, RateProfile, capacities_from_awgn};
//! use sepbound::bounds::refined_factor;
//! use sepbound::schemes::{optimal_separation_rate, time_sharing_rate};
//!
//! // Three receivers with halving demands: layered time sharing pays
//! // exactly a factor 2 in the worst case of this profile shape.
//! let rates = RateProfile::new(vec![4.0, 2.0, 1.0]).unwrap();
//! assert_eq!(refined_factor(&rates).factor, 2.0);
//!
//! // On a concrete Gaussian channel the superposition solver does better
//! // than time sharing.
//! let channel = AwgnBroadcast::new(3.0, vec![0.5, 1.0, 3.0]).unwrap();
//! let capacities = capacities_from_awgn(&channel);
//! let ts = time_sharing_rate(&rates, &capacities).unwrap();
//! let os = optimal_separation_rate(&rates, &channel).unwrap();
//! assert!(os.rate >= ts.rate);
//! ```

pub mod awgn;
pub mod bounds;
pub mod cli;
pub mod model;
pub mod schemes;

pub use model::{Error, Result};
