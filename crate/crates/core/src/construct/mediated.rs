//! Mediated play for three types whose pairs are each compatible while the
//! triple is not.
//!
//! For each pair `{j, k}` the receiver's optimum `x_jk` over `X({j, k})` is
//! computed at the prior conditioned on the pair. A type reporting `k` is
//! then recommended `x_ik` or `x_jk` with probability 1/2 each. Seeing the
//! recommendation reveals exactly the pair, and the pair posterior is the
//! conditioned prior, so obeying is optimal.

use alloc::vec::Vec;

use super::{cell_proposal, Equilibrium, EquilibriumKind, Play, Provenance};
use crate::error::{Error, Result};
use crate::lp::ratio;
use crate::model::{GameSpec, LotteryOutcome, MediatedMechanism};
use crate::participation::{participation_structure, Classification};
use crate::verify::check_mediated;

/// Builds the pairwise mediator. Fails with [`Error::NotAnEquilibrium`] when
/// the resulting mechanism is not veto-incentive compatible.
pub fn mediated_three(game: &GameSpec) -> Result<Equilibrium> {
    if game.type_count() != 3 {
        return Err(Error::WrongClassification);
    }
    let ps = participation_structure(game)?;
    if ps.classification != Classification::Pairwise3 {
        return Err(Error::WrongClassification);
    }
    let mut pair_decisions = Vec::with_capacity(3);
    for &pair in &ps.maximal {
        let x = cell_proposal(game, pair)?
            .ok_or_else(|| Error::Internal(alloc::format!("pair {pair} has no acceptable decision")))?;
        pair_decisions.push((pair, x));
    }
    let lotteries = (0..3)
        .map(|k| {
            pair_decisions
                .iter()
                .filter(|(pair, _)| pair.contains(k))
                .map(|(pair, x)| LotteryOutcome {
                    label: game.set_label(*pair),
                    probability: ratio(1, 2),
                    decision: x.clone(),
                })
                .collect()
        })
        .collect();
    let mechanism = MediatedMechanism::new(game, lotteries)?;
    let report = check_mediated(game, &mechanism)?;
    if !report.overall {
        return Err(Error::NotAnEquilibrium);
    }
    Ok(Equilibrium {
        kind: EquilibriumKind::Mediated,
        provenance: Provenance::MediatedPairwise,
        play: Play::Mediated { mechanism, report },
        pivot: None,
    })
}
