//! Constructions that need no mixing: pooling everyone, two types, a
//! partition-shaped participation structure, and one-dimensional decisions.

use alloc::vec;
use alloc::vec::Vec;
use num_traits::{Signed, Zero};

use super::{cell_proposal, finish, partition_profile, Equilibrium, Provenance};
use crate::error::{Error, Result};
use crate::lp::{self, AffineFn, Rational};
use crate::model::GameSpec;
use crate::participation::{participation_structure, Classification};
use crate::types::TypeSet;

fn pooled(game: &GameSpec, provenance: Provenance) -> Result<Option<Equilibrium>> {
    let all = game.all_types();
    let Some(x) = cell_proposal(game, all)? else {
        return Ok(None);
    };
    let (sigma, tau) = partition_profile(game, &[all], vec![x])?;
    finish(game, provenance, sigma, tau, None).map(Some)
}

/// Every type sends the same message and the receiver proposes the best
/// decision acceptable to all. `None` when no decision is acceptable to all.
pub fn nonrevealing(game: &GameSpec) -> Result<Option<Equilibrium>> {
    pooled(game, Provenance::Nonrevealing)
}

fn by_cells(game: &GameSpec, cells: &[TypeSet], provenance: Provenance) -> Result<Equilibrium> {
    let mut proposals = Vec::with_capacity(cells.len());
    for &c in cells {
        let x = cell_proposal(game, c)?
            .ok_or_else(|| Error::Internal(alloc::format!("no acceptable decision for cell {c}")))?;
        proposals.push(x);
    }
    let (sigma, tau) = partition_profile(game, cells, proposals)?;
    finish(game, provenance, sigma, tau, None)
}

/// Two types: pool when some decision suits both, otherwise reveal.
pub fn two_type(game: &GameSpec) -> Result<Equilibrium> {
    if game.type_count() != 2 {
        return Err(Error::WrongTypeCount {
            expected: 2,
            found: game.type_count(),
        });
    }
    if let Some(eq) = pooled(game, Provenance::TwoType)? {
        return Ok(eq);
    }
    by_cells(
        game,
        &[TypeSet::singleton(0), TypeSet::singleton(1)],
        Provenance::TwoType,
    )
}

/// When the maximal acceptable sets partition the types, each cell reveals
/// itself and gets its constrained optimum.
pub fn partition_structure_eq(game: &GameSpec) -> Result<Equilibrium> {
    let ps = participation_structure(game)?;
    if ps.classification != Classification::Partition {
        return Err(Error::NotAPartition);
    }
    by_cells(game, &ps.maximal, Provenance::PartitionStructure)
}

/// One-dimensional decisions. Types with a decreasing utility accept every
/// decision below a cutoff, the others every decision above one. Pools when
/// the cutoffs overlap, otherwise separates the two groups.
pub fn monotone_interval_eq(game: &GameSpec) -> Result<Equilibrium> {
    if game.dim() != 1 {
        return Err(Error::NotOneDimensional);
    }
    let x = AffineFn::linear(vec![Rational::from_integer(1.into())]);
    let bound = |f: &AffineFn| -> Result<Rational> {
        lp::maximize(f, game.decisions())?
            .value
            .ok_or_else(|| Error::Internal("decision interval is empty".into()))
    };
    let hi = bound(&x)?;
    let lo = -bound(&x.neg())?;

    let mut falling = TypeSet::EMPTY;
    let mut rising = TypeSet::EMPTY;
    // x₋: smallest upper cutoff; x₊: largest lower cutoff
    let mut x_minus = hi.clone();
    let mut x_plus = lo.clone();
    for k in 0..game.type_count() {
        let t = game.ty(k);
        let slope = &t.sender.coeffs[0];
        if slope.is_zero() {
            // constant utility; acceptable everywhere by validation
            rising.insert(k);
            continue;
        }
        let cut = (&t.reserve - &t.sender.constant) / slope;
        if slope.is_negative() {
            falling.insert(k);
            if cut < x_minus {
                x_minus = cut;
            }
        } else {
            rising.insert(k);
            if cut > x_plus {
                x_plus = cut;
            }
        }
    }
    if x_plus <= x_minus {
        return pooled(game, Provenance::MonotoneInterval)?
            .ok_or_else(|| Error::Internal("overlapping cutoffs but no common decision".into()));
    }
    by_cells(game, &[falling, rising], Provenance::MonotoneInterval)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::EquilibriumKind;
    use crate::lp::{int, ratio, Halfspace, Polytope};
    use crate::model::TypeData;
    use alloc::string::ToString;

    fn lin(c: &[i64]) -> AffineFn {
        AffineFn::linear(c.iter().map(|&v| int(v)).collect())
    }

    fn pt(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn kidnapping() -> GameSpec {
        let hs = |n: &[i64], r: i64| Halfspace::new(pt(n), int(r));
        let x = Polytope::new(2, vec![hs(&[-1, 0], 0), hs(&[0, -1], 0), hs(&[1, 1], 100)]).unwrap();
        let mk = |u: &[i64], r: i64| TypeData {
            name: "t".to_string(),
            prior: ratio(1, 3),
            reserve: int(r),
            sender: lin(u),
            receiver: lin(&[-1, -1]),
        };
        GameSpec::new(x, vec![mk(&[1, -1], 30), mk(&[-1, 1], 40), mk(&[1, 2], 20)]).unwrap()
    }

    fn proposal(eq: &Equilibrium, m: usize) -> Vec<Rational> {
        let sigma = eq.sigma().unwrap();
        eq.tau().unwrap().proposal(&sigma.messages()[m]).unwrap().to_vec()
    }

    #[test]
    fn no_pooling_when_all_three_conflict() {
        assert!(nonrevealing(&kidnapping()).unwrap().is_none());
    }

    #[test]
    fn pooling_two_and_three() {
        let g = kidnapping().restrict([1, 2].into_iter().collect()).unwrap();
        let eq = nonrevealing(&g).unwrap().unwrap();
        assert_eq!(eq.kind, EquilibriumKind::Nonrevealing);
        assert_eq!(proposal(&eq, 0), pt(&[0, 40]));
        assert_eq!(eq.sigma().unwrap().messages().len(), 2);
    }

    #[test]
    fn two_conflicting_types_reveal() {
        let g = kidnapping().restrict([0, 1].into_iter().collect()).unwrap();
        let eq = two_type(&g).unwrap();
        assert_eq!(eq.kind, EquilibriumKind::FullyRevealing);
        assert_eq!(proposal(&eq, 0), pt(&[30, 0]));
        assert_eq!(proposal(&eq, 1), pt(&[0, 40]));
        assert_eq!(partition_structure_eq(&g).unwrap().sigma(), eq.sigma());
    }

    #[test]
    fn two_compatible_types_pool() {
        let g = kidnapping().restrict([0, 2].into_iter().collect()).unwrap();
        let eq = two_type(&g).unwrap();
        assert_eq!(eq.kind, EquilibriumKind::Nonrevealing);
        // prior (1/2, 1/2): minimize x_a + x_b over X({1,3})
        assert_eq!(proposal(&eq, 0), pt(&[30, 0]));
    }

    #[test]
    fn two_type_needs_two_types() {
        assert_eq!(
            two_type(&kidnapping()).unwrap_err(),
            Error::WrongTypeCount { expected: 2, found: 3 }
        );
        assert_eq!(partition_structure_eq(&kidnapping()).unwrap_err(), Error::NotAPartition);
    }

    fn interval_game(types: &[(i64, Rational)]) -> GameSpec {
        let x = Polytope::new(
            1,
            vec![Halfspace::new(pt(&[-1]), int(0)), Halfspace::new(pt(&[1]), int(1))],
        )
        .unwrap();
        let prior = ratio(1, types.len() as i64);
        let ts = types
            .iter()
            .map(|(slope, r)| TypeData {
                name: "t".to_string(),
                prior: prior.clone(),
                reserve: r.clone(),
                sender: lin(&[*slope]),
                receiver: lin(&[-1]),
            })
            .collect();
        GameSpec::new(x, ts).unwrap()
    }

    #[test]
    fn monotone_separating() {
        let g = interval_game(&[(1, ratio(1, 2)), (-1, ratio(-1, 4))]);
        let eq = monotone_interval_eq(&g).unwrap();
        assert_eq!(eq.kind, EquilibriumKind::FullyRevealing);
        let cells = eq.cells().unwrap();
        assert_eq!(cells, vec![TypeSet::singleton(1), TypeSet::singleton(0)]);
        assert_eq!(proposal(&eq, 0), pt(&[0]));
        assert_eq!(proposal(&eq, 1), vec![ratio(1, 2)]);
    }

    #[test]
    fn monotone_pooling() {
        let g = interval_game(&[(1, int(0)), (1, int(0))]);
        let eq = monotone_interval_eq(&g).unwrap();
        assert_eq!(eq.kind, EquilibriumKind::Nonrevealing);
        assert_eq!(proposal(&eq, 0), pt(&[0]));

        let g = interval_game(&[(0, int(0))]);
        assert_eq!(monotone_interval_eq(&g).unwrap().kind, EquilibriumKind::Nonrevealing);
        assert_eq!(
            monotone_interval_eq(&kidnapping()).unwrap_err(),
            Error::NotOneDimensional
        );
    }
}
