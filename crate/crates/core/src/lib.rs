//! Exact rational equilibrium computation for sender-receiver games in which
//! the sender can veto the receiver's proposal.
//!
//! The crate is `no_std` and only needs `alloc`. Every quantity is an exact
//! [`Rational`]; linear programs are solved by a Bland-rule simplex that
//! returns vertices together with dual or Farkas certificates.
//!
//! Module map:
//!
//! - [`lp`]: polytopes, affine functions and the exact simplex.
//! - [`model`]: games, sender/receiver strategies, posteriors and payoffs.
//! - [`participation`]: acceptance sets and the participation structure.
//! - [`verify`]: equilibrium checkers for the limit game and for a finite exit payoff.
//! - [`construct`]: every equilibrium construction plus the [`construct::solve`] dispatcher.
//! - [`threshold`]: exit thresholds, the best partitional equilibrium and the mechanism bound.

#![no_std]
// Errors carry exact values (e.g. the offending v0); they are cold paths.
#![allow(clippy::result_large_err)]

extern crate alloc;

pub mod construct;
pub mod error;
pub mod lp;
pub mod model;
pub mod participation;
pub mod partitions;
pub mod threshold;
pub mod types;
pub mod verify;

pub use error::{Error, Result};
pub use lp::{AffineFn, Halfspace, LpOutcome, LpStatus, Polytope, Rational};
pub use model::{
    GameSpec, LotteryOutcome, MediatedMechanism, PosteriorEntry, PosteriorTable, ReceiverStrategy, SenderStrategy,
    TypeData,
};
pub use participation::{Classification, ParticipationStructure};
pub use types::TypeSet;
