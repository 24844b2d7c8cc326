//! Envy between types under private values, and the leader/follower
//! partition built from it.
//!
//! Each type `k` gets the decision `x_k` the receiver would pick knowing the
//! type, breaking ties toward what `k` likes best. Type `k` envies `j` when
//! `U^k(x_j) > U^k(x_k)`. Types are processed by increasing `V(x_k)`: a type
//! that envies some earlier leader follows its favourite one, otherwise it
//! leads and announces itself.

use alloc::vec::Vec;

use super::{finish, partition_profile, Equilibrium, Provenance};
use crate::error::{Error, Result};
use crate::lp::{self, Rational};
use crate::model::GameSpec;
use crate::types::TypeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvyGraph {
    /// `x_k` for every type.
    pub best_decisions: Vec<Vec<Rational>>,
    /// `V(x_k)` for every type.
    pub values: Vec<Rational>,
    /// `(k, j)` whenever `k` envies `j`.
    pub edges: Vec<(usize, usize)>,
    /// Distinct values of `V(x_k)`, ascending, with the types attaining each.
    pub levels: Vec<(Rational, TypeSet)>,
    pub leaders: TypeSet,
    pub followers: TypeSet,
    /// Leader whose message each type sends (a leader maps to itself).
    pub assignment: Vec<usize>,
}

impl EnvyGraph {
    pub fn envies(&self, k: usize, j: usize) -> bool {
        self.edges.contains(&(k, j))
    }
}

pub fn envy_graph(game: &GameSpec) -> Result<EnvyGraph> {
    if !game.private_values() {
        return Err(Error::NotPrivateValues);
    }
    let n = game.type_count();
    let v = &game.ty(0).receiver;
    let mut best = Vec::with_capacity(n);
    for k in 0..n {
        let out = lp::lex_maximize(v, &game.ty(k).sender, &game.acceptance_polytope(TypeSet::singleton(k)))?;
        best.push(
            out.point
                .ok_or_else(|| Error::Internal(alloc::format!("type {} has no acceptable decision", k + 1)))?,
        );
    }
    let values: Vec<Rational> = best.iter().map(|x| v.eval(x)).collect();

    let mut edges = Vec::new();
    for k in 0..n {
        let u = &game.ty(k).sender;
        let own = u.eval(&best[k]);
        for j in (0..n).filter(|&j| j != k) {
            if u.eval(&best[j]) > own {
                edges.push((k, j));
            }
        }
    }

    let mut distinct: Vec<Rational> = values.clone();
    distinct.sort();
    distinct.dedup();
    let levels: Vec<(Rational, TypeSet)> = distinct
        .into_iter()
        .map(|a| {
            let set = (0..n).filter(|&k| values[k] == a).collect();
            (a, set)
        })
        .collect();

    let mut leaders = TypeSet::EMPTY;
    let mut followers = TypeSet::EMPTY;
    let mut assignment: Vec<usize> = (0..n).collect();
    for (_, level) in &levels {
        let earlier = leaders;
        for k in level.iter() {
            let u = &game.ty(k).sender;
            // favourite envied leader; the smallest index wins ties
            let mut pick: Option<(usize, Rational)> = None;
            for l in earlier.iter().filter(|&l| edges.contains(&(k, l))) {
                let val = u.eval(&best[l]);
                if pick.as_ref().is_none_or(|(_, b)| val > *b) {
                    pick = Some((l, val));
                }
            }
            match pick {
                Some((l, _)) => {
                    followers.insert(k);
                    assignment[k] = l;
                }
                None => leaders.insert(k),
            }
        }
    }

    Ok(EnvyGraph {
        best_decisions: best,
        values,
        edges,
        levels,
        leaders,
        followers,
        assignment,
    })
}

/// Partitional equilibrium under private values: each leader reveals itself
/// and gets its own `x_ℓ`; followers pool with their favourite envied leader.
pub fn leader_follower(game: &GameSpec) -> Result<Equilibrium> {
    let graph = envy_graph(game)?;
    let cells: Vec<TypeSet> = graph
        .leaders
        .iter()
        .map(|l| (0..game.type_count()).filter(|&k| graph.assignment[k] == l).collect())
        .collect();
    let proposals = graph.leaders.iter().map(|l| graph.best_decisions[l].clone()).collect();
    let (sigma, tau) = partition_profile(game, &cells, proposals)?;
    finish(game, Provenance::LeaderFollower, sigma, tau, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{int, ratio, AffineFn, Halfspace, Polytope};
    use crate::model::TypeData;
    use alloc::string::ToString;
    use alloc::vec;

    fn lin(c: &[i64]) -> AffineFn {
        AffineFn::linear(c.iter().map(|&v| int(v)).collect())
    }

    fn pt(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn hs(n: &[i64], r: i64) -> Halfspace {
        Halfspace::new(pt(n), int(r))
    }

    fn kidnapping() -> GameSpec {
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

    #[test]
    fn kidnapping_graph() {
        let g = envy_graph(&kidnapping()).unwrap();
        assert_eq!(g.best_decisions, vec![pt(&[30, 0]), pt(&[0, 40]), pt(&[0, 10])]);
        assert_eq!(g.edges, vec![(2, 0), (2, 1)]);
        let lv: Vec<(Rational, u32)> = g.levels.iter().map(|(a, s)| (a.clone(), s.bits())).collect();
        assert_eq!(lv, vec![(int(-40), 0b010), (int(-30), 0b001), (int(-10), 0b100)]);
        assert_eq!(g.leaders, [0, 1].into_iter().collect());
        assert_eq!(g.assignment, vec![0, 1, 1]);
    }

    #[test]
    fn kidnapping_partition() {
        let eq = leader_follower(&kidnapping()).unwrap();
        assert_eq!(
            eq.cells().unwrap(),
            vec![TypeSet::singleton(0), [1, 2].into_iter().collect()]
        );
        assert_eq!(eq.interim_payoffs(), &pt(&[30, 40, 80])[..]);
    }

    #[test]
    fn chain_of_envy() {
        // X = {0 ≤ x1 ≤ 3, 0 ≤ x2 ≤ 10, x1 − x2 ≤ 2}, V = x1
        let x = Polytope::new(
            2,
            vec![
                hs(&[-1, 0], 0),
                hs(&[1, 0], 3),
                hs(&[0, -1], 0),
                hs(&[0, 1], 10),
                hs(&[1, -1], 2),
            ],
        )
        .unwrap();
        let mk = |u: &[i64], r: i64| TypeData {
            name: "t".to_string(),
            prior: ratio(1, 3),
            reserve: int(r),
            sender: lin(u),
            receiver: lin(&[1, 0]),
        };
        let game = GameSpec::new(x, vec![mk(&[-1, -1], -1), mk(&[-1, -1], -2), mk(&[1, -2], 0)]).unwrap();
        let g = envy_graph(&game).unwrap();
        assert_eq!(g.best_decisions, vec![pt(&[1, 0]), pt(&[2, 0]), pt(&[3, 1])]);
        assert_eq!(g.edges, vec![(1, 0), (2, 1)]);
        assert_eq!(g.leaders, [0, 2].into_iter().collect());
        assert_eq!(g.assignment, vec![0, 0, 2]);
        let eq = leader_follower(&game).unwrap();
        assert_eq!(eq.cells().unwrap().len(), 2);
    }

    #[test]
    fn requires_private_values() {
        let base = kidnapping();
        let mut types = base.types().to_vec();
        types[0].receiver = lin(&[1, 0]);
        let g = GameSpec::new(base.decisions().clone(), types).unwrap();
        assert_eq!(envy_graph(&g).unwrap_err(), Error::NotPrivateValues);
    }
}
