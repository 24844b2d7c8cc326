//! Dispatcher over all constructions.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{
    grid_mixed_search, leader_follower, mediated_three, mixed_three, monotone_interval_eq, nonrevealing,
    partition_structure_eq, two_type, Equilibrium, Provenance, DEFAULT_GRID_RESOLUTION,
};
use crate::error::Result;
use crate::model::GameSpec;
use crate::participation::{participation_structure, Classification};

/// A construction to run, or `Auto` for the full sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Auto,
    Nonrevealing,
    Partition,
    LeaderFollower,
    Mixed3,
    Mediated3,
    Grid { resolution: u32 },
}

/// One construction tried by the dispatcher.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attempt {
    pub provenance: Provenance,
    /// `None` on success, otherwise why it did not apply or failed.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub equilibrium: Option<Equilibrium>,
    pub attempts: Vec<Attempt>,
}

impl SolveOutcome {
    pub fn is_resolved(&self) -> bool {
        self.equilibrium.is_some()
    }
}

struct Log {
    attempts: Vec<Attempt>,
}

impl Log {
    /// Records the attempt; returns the equilibrium if there is one.
    fn record(&mut self, provenance: Provenance, result: Result<Option<Equilibrium>>) -> Option<Equilibrium> {
        let (eq, failure) = match result {
            Ok(Some(eq)) => (Some(eq), None),
            Ok(None) => (None, Some("no equilibrium found".to_string())),
            Err(e) => (None, Some(e.to_string())),
        };
        self.attempts.push(Attempt { provenance, failure });
        eq
    }

    fn skip(&mut self, provenance: Provenance, why: &str) {
        self.attempts.push(Attempt {
            provenance,
            failure: Some(format!("not applicable: {why}")),
        });
    }

    fn done(self, equilibrium: Option<Equilibrium>) -> SolveOutcome {
        SolveOutcome {
            equilibrium,
            attempts: self.attempts,
        }
    }
}

/// Tries, in order: pooling, two types, partition-shaped structure, one
/// dimension, private values, the two three-type structures, and finally a
/// grid search over mixed strategies. The first success wins.
pub fn solve(game: &GameSpec) -> Result<SolveOutcome> {
    solve_with(game, Method::Auto)
}

pub fn solve_with(game: &GameSpec, method: Method) -> Result<SolveOutcome> {
    let mut log = Log { attempts: Vec::new() };
    let found = match method {
        Method::Auto => auto(game, &mut log)?,
        Method::Nonrevealing => log.record(Provenance::Nonrevealing, nonrevealing(game)),
        Method::Partition => {
            let (prov, res) = if game.type_count() == 2 {
                (Provenance::TwoType, two_type(game))
            } else {
                (Provenance::PartitionStructure, partition_structure_eq(game))
            };
            log.record(prov, res.map(Some))
        }
        Method::LeaderFollower => log.record(Provenance::LeaderFollower, leader_follower(game).map(Some)),
        Method::Mixed3 => log.record(Provenance::PosteriorSplitting, mixed_three(game).map(Some)),
        Method::Mediated3 => log.record(Provenance::MediatedPairwise, mediated_three(game).map(Some)),
        Method::Grid { resolution } => log.record(Provenance::GridSearch, grid_mixed_search(game, resolution)),
    };
    Ok(log.done(found))
}

fn auto(game: &GameSpec, log: &mut Log) -> Result<Option<Equilibrium>> {
    if let Some(eq) = log.record(Provenance::Nonrevealing, nonrevealing(game)) {
        return Ok(Some(eq));
    }
    let n = game.type_count();
    if n == 2 {
        if let Some(eq) = log.record(Provenance::TwoType, two_type(game).map(Some)) {
            return Ok(Some(eq));
        }
    } else {
        log.skip(Provenance::TwoType, "needs exactly two types");
    }
    let classification = participation_structure(game)?.classification;
    if classification == Classification::Partition {
        if let Some(eq) = log.record(Provenance::PartitionStructure, partition_structure_eq(game).map(Some)) {
            return Ok(Some(eq));
        }
    } else {
        log.skip(Provenance::PartitionStructure, "maximal sets overlap");
    }
    if game.dim() == 1 {
        if let Some(eq) = log.record(Provenance::MonotoneInterval, monotone_interval_eq(game).map(Some)) {
            return Ok(Some(eq));
        }
    } else {
        log.skip(Provenance::MonotoneInterval, "decisions are not one-dimensional");
    }
    if game.private_values() {
        if let Some(eq) = log.record(Provenance::LeaderFollower, leader_follower(game).map(Some)) {
            return Ok(Some(eq));
        }
    } else {
        log.skip(Provenance::LeaderFollower, "receiver payoff depends on the type");
    }
    if let Classification::Chain3 { .. } = classification {
        if let Some(eq) = log.record(Provenance::PosteriorSplitting, mixed_three(game).map(Some)) {
            return Ok(Some(eq));
        }
    } else {
        log.skip(
            Provenance::PosteriorSplitting,
            "structure is not two pairs sharing a type",
        );
    }
    if classification == Classification::Pairwise3 {
        if let Some(eq) = log.record(Provenance::MediatedPairwise, mediated_three(game).map(Some)) {
            return Ok(Some(eq));
        }
    } else {
        log.skip(Provenance::MediatedPairwise, "structure is not three compatible pairs");
    }
    if n == 3 {
        let eq = log.record(Provenance::GridSearch, grid_mixed_search(game, DEFAULT_GRID_RESOLUTION));
        return Ok(eq);
    }
    log.skip(Provenance::GridSearch, "needs exactly three types");
    Ok(None)
}
