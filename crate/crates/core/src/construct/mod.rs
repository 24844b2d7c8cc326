//! Equilibrium constructions and the dispatcher that tries them in order.
//!
//! Every constructor verifies its own output with the matching checker from
//! [`crate::verify`] before returning it.

mod basic;
mod envy;
mod grid;
mod mediated;
mod mixed;
mod solve;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{self, AffineFn, Halfspace, LpStatus, Polytope, Rational};
use crate::model::{posteriors, GameSpec, MediatedMechanism, ReceiverStrategy, SenderStrategy};
use crate::types::TypeSet;
use crate::verify::{check_limit_equilibrium, constrained_optimum, CheckReport, MediatedReport};

pub use basic::{monotone_interval_eq, nonrevealing, partition_structure_eq, two_type};
pub use envy::{envy_graph, leader_follower, EnvyGraph};
pub use grid::{grid_mixed_search, DEFAULT_GRID_RESOLUTION};
pub use mediated::mediated_three;
pub use mixed::{mixed_three, mixed_three_traced, MixedTrace};
pub use solve::{solve, solve_with, Attempt, Method, SolveOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumKind {
    Nonrevealing,
    FullyRevealing,
    Partitional,
    Mixed,
    Mediated,
}

impl fmt::Display for EquilibriumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EquilibriumKind::Nonrevealing => "nonrevealing",
            EquilibriumKind::FullyRevealing => "fully-revealing",
            EquilibriumKind::Partitional => "partitional",
            EquilibriumKind::Mixed => "mixed",
            EquilibriumKind::Mediated => "mediated",
        };
        f.write_str(s)
    }
}

/// Which construction produced an equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Nonrevealing,
    TwoType,
    PartitionStructure,
    MonotoneInterval,
    LeaderFollower,
    PosteriorSplitting,
    MediatedPairwise,
    GridSearch,
    PartitionSearch,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Nonrevealing => "nonrevealing",
            Provenance::TwoType => "two-type",
            Provenance::PartitionStructure => "partition-structure",
            Provenance::MonotoneInterval => "monotone-interval",
            Provenance::LeaderFollower => "leader-follower",
            Provenance::PosteriorSplitting => "posterior-splitting",
            Provenance::MediatedPairwise => "mediated-pairwise",
            Provenance::GridSearch => "grid-search",
            Provenance::PartitionSearch => "partition-search",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Play {
    Profile {
        sigma: SenderStrategy,
        tau: ReceiverStrategy,
        report: CheckReport,
    },
    Mediated {
        mechanism: MediatedMechanism,
        report: MediatedReport,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equilibrium {
    pub kind: EquilibriumKind,
    pub provenance: Provenance,
    pub play: Play,
    /// Type that mixes in a posterior-splitting equilibrium.
    pub pivot: Option<usize>,
}

impl Equilibrium {
    pub fn sigma(&self) -> Option<&SenderStrategy> {
        match &self.play {
            Play::Profile { sigma, .. } => Some(sigma),
            Play::Mediated { .. } => None,
        }
    }

    pub fn tau(&self) -> Option<&ReceiverStrategy> {
        match &self.play {
            Play::Profile { tau, .. } => Some(tau),
            Play::Mediated { .. } => None,
        }
    }

    pub fn report(&self) -> Option<&CheckReport> {
        match &self.play {
            Play::Profile { report, .. } => Some(report),
            Play::Mediated { .. } => None,
        }
    }

    pub fn mechanism(&self) -> Option<&MediatedMechanism> {
        match &self.play {
            Play::Mediated { mechanism, .. } => Some(mechanism),
            Play::Profile { .. } => None,
        }
    }

    pub fn interim_payoffs(&self) -> &[Rational] {
        match &self.play {
            Play::Profile { report, .. } => &report.interim_payoffs,
            Play::Mediated { report, .. } => &report.interim_payoffs,
        }
    }

    pub fn receiver_ex_ante(&self) -> &Rational {
        match &self.play {
            Play::Profile { report, .. } => &report.receiver_ex_ante,
            Play::Mediated { report, .. } => &report.receiver_ex_ante,
        }
    }

    /// Sets of types pooled on each on-path message, for pure sender strategies.
    pub fn cells(&self) -> Option<Vec<TypeSet>> {
        let sigma = self.sigma()?;
        if !sigma.is_partitional() {
            return None;
        }
        let cells: Vec<TypeSet> = (0..sigma.messages().len())
            .map(|m| sigma.senders_of(m))
            .filter(|s| !s.is_empty())
            .collect();
        Some(cells)
    }
}

fn kind_of(sigma: &SenderStrategy, types: usize) -> EquilibriumKind {
    let on_path = (0..sigma.messages().len())
        .filter(|&m| !sigma.senders_of(m).is_empty())
        .count();
    if on_path == 1 {
        EquilibriumKind::Nonrevealing
    } else if !sigma.is_partitional() {
        EquilibriumKind::Mixed
    } else if on_path == types {
        EquilibriumKind::FullyRevealing
    } else {
        EquilibriumKind::Partitional
    }
}

/// Checks a profile and wraps it. A constructor whose theory guarantees an
/// equilibrium treats failure as an internal error.
fn finish(
    game: &GameSpec,
    provenance: Provenance,
    sigma: SenderStrategy,
    tau: ReceiverStrategy,
    pivot: Option<usize>,
) -> Result<Equilibrium> {
    let report = check_limit_equilibrium(game, &sigma, &tau)?;
    if !report.overall {
        return Err(Error::Internal(format!(
            "{provenance} construction failed its own equilibrium check"
        )));
    }
    Ok(Equilibrium {
        kind: kind_of(&sigma, game.type_count()),
        provenance,
        play: Play::Profile { sigma, tau, report },
        pivot,
    })
}

/// Pads an on-path message list with idle messages so that there are at
/// least as many messages as types. Idle messages repeat the first on-path
/// proposal.
fn pad_messages(game: &GameSpec, names: &mut Vec<String>, proposals: &mut Vec<Vec<Rational>>) {
    let mut i = 1;
    while names.len() < game.type_count() {
        let name = format!("idle-{i}");
        i += 1;
        if names.contains(&name) {
            continue;
        }
        names.push(name);
        proposals.push(proposals[0].clone());
    }
}

/// Pure profile: the types of `cells[i]` send message `i`, answered by
/// `proposals[i]`. Messages are named after their cells.
fn partition_profile(
    game: &GameSpec,
    cells: &[TypeSet],
    proposals: Vec<Vec<Rational>>,
) -> Result<(SenderStrategy, ReceiverStrategy)> {
    let mut names: Vec<String> = cells.iter().map(|c| game.set_label(*c)).collect();
    let mut proposals = proposals;
    let mut assignment = alloc::vec![0usize; game.type_count()];
    for (i, c) in cells.iter().enumerate() {
        for k in c.iter() {
            assignment[k] = i;
        }
    }
    pad_messages(game, &mut names, &mut proposals);
    let sigma = SenderStrategy::pure(names.clone(), &assignment)?;
    Ok((sigma, receiver_map(names, proposals)))
}

fn receiver_map(names: Vec<String>, proposals: Vec<Vec<Rational>>) -> ReceiverStrategy {
    ReceiverStrategy::new(names.into_iter().zip(proposals).collect())
}

/// Prior conditioned on `cell`.
pub(crate) fn conditional_prior(game: &GameSpec, cell: TypeSet) -> Vec<Rational> {
    let prior = game.prior();
    let mass = cell.iter().fold(Rational::zero(), |acc, k| acc + &prior[k]);
    (0..game.type_count())
        .map(|k| {
            if cell.contains(k) {
                &prior[k] / &mass
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// Pure strategy revealing `cells`, with proposals chosen on the optimal
/// faces so that it is an equilibrium if any such choice is. `None` if some
/// cell has no acceptable decision or no choice is incentive compatible.
pub fn partition_equilibrium(game: &GameSpec, cells: &[TypeSet]) -> Result<Option<Equilibrium>> {
    let placeholder = alloc::vec![alloc::vec![Rational::zero(); game.dim()]; cells.len()];
    let (sigma, _) = partition_profile(game, cells, placeholder)?;
    let Some(props) = select_on_faces(game, &sigma)? else {
        return Ok(None);
    };
    let (sigma, tau) = partition_profile(game, cells, props[..cells.len()].to_vec())?;
    finish(game, Provenance::PartitionSearch, sigma, tau, None).map(Some)
}

/// Receiver's constrained-optimal vertex for a cell of a pure strategy.
fn cell_proposal(game: &GameSpec, cell: TypeSet) -> Result<Option<Vec<Rational>>> {
    Ok(constrained_optimum(game, &conditional_prior(game, cell))?.and_then(|o| o.point))
}

/// The face of `X(supp b)` on which the receiver's expected payoff at `b`
/// is maximal, or `None` when `X(supp b)` is empty.
pub(crate) fn optimal_face(game: &GameSpec, belief: &[Rational]) -> Result<Option<Polytope>> {
    let support = crate::verify::support_of(belief);
    let objective = game.expected_receiver(belief);
    let mut poly = game.acceptance_polytope(support);
    let out = lp::maximize(&objective, &poly)?;
    if out.status != LpStatus::Optimal {
        return Ok(None);
    }
    poly.push_equality(&objective, &out.value.expect("optimal"))?;
    Ok(Some(poly))
}

/// Looks for receiver proposals, one per on-path message of `sigma`, that are
/// constrained-optimal at each posterior and make `sigma` incentive
/// compatible. Solves one joint LP over the product of the optimal faces.
///
/// Returns proposals aligned with `sigma`'s messages (off-path messages repeat
/// the first on-path proposal), or `None` when no such selection exists.
pub fn select_on_faces(game: &GameSpec, sigma: &SenderStrategy) -> Result<Option<Vec<Vec<Rational>>>> {
    let table = posteriors(game, sigma)?;
    let mut faces = Vec::new();
    for e in &table.entries {
        match optimal_face(game, &e.belief)? {
            Some(f) => faces.push(f),
            None => return Ok(None),
        }
    }
    let on_path: Vec<usize> = table.entries.iter().map(|e| e.message_index).collect();
    select_with_faces(game, sigma, &on_path, &faces)
}

/// [`select_on_faces`] with the faces supplied by the caller, aligned with
/// the on-path message indices `on_path`.
pub(crate) fn select_with_faces(
    game: &GameSpec,
    sigma: &SenderStrategy,
    on_path: &[usize],
    faces: &[Polytope],
) -> Result<Option<Vec<Vec<Rational>>>> {
    let n = game.dim();
    let total = n * faces.len();
    let mut joint = Polytope::new(total, Vec::new())?;
    for (i, f) in faces.iter().enumerate() {
        for row in f.embed(i * n, total).rows() {
            joint.push(row.clone())?;
        }
    }
    for k in 0..game.type_count() {
        let u = &game.ty(k).sender;
        for (i, &m) in on_path.iter().enumerate() {
            if !sigma.prob(k, m).is_positive() {
                continue;
            }
            for j in (0..faces.len()).filter(|&j| j != i) {
                // U^k(x_i) - U^k(x_j) ≥ 0
                let mut diff = u.embed(i * n, total);
                diff.add_scaled(&u.embed(j * n, total), &-Rational::one());
                joint.push(diff.at_least(&Rational::zero()))?;
            }
        }
    }
    let out = lp::feasible(&joint)?;
    let Some(point) = out.point.filter(|_| out.status == LpStatus::Optimal) else {
        return Ok(None);
    };
    let mut proposals = alloc::vec![point[..n].to_vec(); sigma.messages().len()];
    for (i, &m) in on_path.iter().enumerate() {
        proposals[m] = point[i * n..(i + 1) * n].to_vec();
    }
    Ok(Some(proposals))
}

/// `U(x) = U(y)` on the product space, `x` first.
fn indifference(u: &AffineFn, n: usize) -> [Halfspace; 2] {
    let mut diff = u.embed(0, 2 * n);
    diff.add_scaled(&u.embed(n, 2 * n), &-Rational::one());
    let zero = Rational::zero();
    [diff.at_least(&zero), diff.at_most(&zero)]
}
