//! Acceptance sets and the participation structure: the inclusion-maximal
//! sets of types that some single decision satisfies simultaneously.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lp::{self, LpStatus, Polytope};
use crate::model::GameSpec;
use crate::types::TypeSet;

/// Shape of the participation structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Maximal sets are pairwise disjoint and cover every type.
    Partition,
    /// Three types, every pair compatible, the triple not.
    Pairwise3,
    /// Three types, two maximal pairs sharing `pivot`.
    Chain3 {
        pivot: usize,
    },
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParticipationStructure {
    /// Maximal sets, ordered by size then by bitmask.
    pub maximal: Vec<TypeSet>,
    pub classification: Classification,
}

impl ParticipationStructure {
    /// The maximal set containing type `k` with the smallest index in `maximal`.
    pub fn cell_of(&self, k: usize) -> Option<TypeSet> {
        self.maximal.iter().copied().find(|s| s.contains(k))
    }
}

/// `X(L)`: decisions in X that every type in `set` weakly prefers to exit.
pub fn acceptance_set(game: &GameSpec, set: TypeSet) -> Result<Polytope> {
    if set.is_empty() {
        return Err(Error::EmptySubset);
    }
    if !set.is_subset(game.all_types()) {
        return Err(Error::Internal(alloc::format!("type set {set} exceeds the game")));
    }
    Ok(game.acceptance_polytope(set))
}

/// Whether `X(set)` is nonempty. The empty set is feasible by convention.
pub fn is_acceptable(game: &GameSpec, set: TypeSet) -> Result<bool> {
    Ok(lp::feasible(&game.acceptance_polytope(set))?.status == LpStatus::Optimal)
}

/// Every feasible set of types, indexed by bitmask.
///
/// Sets are visited by increasing size; a set with an infeasible subset of
/// one smaller size is skipped without an LP.
pub fn feasible_sets(game: &GameSpec) -> Result<Vec<bool>> {
    let n = game.type_count();
    let mut ok = alloc::vec![false; 1usize << n];
    ok[0] = true;
    let mut by_size: Vec<u32> = (1u32..(1u32 << n)).collect();
    by_size.sort_by_key(|b| (b.count_ones(), *b));
    for bits in by_size {
        let set = TypeSet::from_bits(bits);
        let pruned = set.iter().any(|k| !ok[(bits & !(1u32 << k)) as usize]);
        if !pruned {
            ok[bits as usize] = is_acceptable(game, set)?;
        }
    }
    Ok(ok)
}

pub fn participation_structure(game: &GameSpec) -> Result<ParticipationStructure> {
    let n = game.type_count();
    let ok = feasible_sets(game)?;
    let mut maximal = Vec::new();
    for bits in 1u32..(1u32 << n) {
        if !ok[bits as usize] {
            continue;
        }
        let is_max = (0..n).all(|k| bits & (1 << k) != 0 || !ok[(bits | (1 << k)) as usize]);
        if is_max {
            maximal.push(TypeSet::from_bits(bits));
        }
    }
    maximal.sort_by_key(|s| (s.len(), s.bits()));
    let classification = classify(n, &maximal);
    Ok(ParticipationStructure {
        maximal,
        classification,
    })
}

fn classify(n: usize, maximal: &[TypeSet]) -> Classification {
    let disjoint = maximal
        .iter()
        .enumerate()
        .all(|(i, a)| maximal[i + 1..].iter().all(|b| a.intersection(*b).is_empty()));
    if disjoint {
        // coverage always holds since every single type is acceptable
        return Classification::Partition;
    }
    if n == 3 && maximal.iter().all(|s| s.len() == 2) {
        match maximal.len() {
            3 => return Classification::Pairwise3,
            2 => {
                let pivot = maximal[0].intersection(maximal[1]);
                if let Some(p) = pivot.iter().next() {
                    return Classification::Chain3 { pivot: p };
                }
            }
            _ => {}
        }
    }
    Classification::Other
}
