//! How low the receiver's exit payoff must be for a no-exit equilibrium to
//! survive, and the resulting bound for mechanism design.
//!
//! At an on-path posterior `p_m`, the receiver could instead serve only a
//! subset `L` of the support and let the rest exit. Keeping everyone is still
//! optimal as long as
//!
//! ```text
//! Σ_k p_m^k V^k(τ(m)) ≥ val(L) + v0 · (1 − Σ_{k∈L} p_m^k)
//! ```
//!
//! where `val(L)` maximizes `Σ_{k∈L} p_m^k V^k` over `X(L)`. Each strict
//! subset gives an upper bound on `v0`.

use alloc::string::String;
use alloc::vec::Vec;
use num_traits::{One, Zero};

use crate::construct::{partition_equilibrium, Equilibrium};
use crate::error::{Error, Result};
use crate::lp::{self, LpStatus, Rational};
use crate::model::{GameSpec, ReceiverStrategy, SenderStrategy};
use crate::partitions::Partitions;
use crate::types::TypeSet;
use crate::verify::check_limit_equilibrium;

/// Largest type count for which all partitions are enumerated.
pub const MAX_PARTITION_TYPES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageThreshold {
    pub message: String,
    /// Largest `v0` at which keeping every type of the support stays optimal.
    pub threshold: Rational,
    /// The served subset behind the binding inequality.
    pub binding: TypeSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdReport {
    pub per_message: Vec<MessageThreshold>,
    /// Minimum over messages before the admissibility cap.
    pub uncapped: Rational,
    /// `min_k min_X V^k`, the largest exit payoff the model admits.
    pub admissibility_cap: Rational,
    /// `min(uncapped, admissibility_cap)`.
    pub overall: Rational,
}

/// Exit threshold of a profile that is an equilibrium of the limit game.
pub fn exit_threshold(game: &GameSpec, sigma: &SenderStrategy, tau: &ReceiverStrategy) -> Result<ThresholdReport> {
    let report = check_limit_equilibrium(game, sigma, tau)?;
    if !report.overall {
        return Err(Error::NotAnEquilibrium);
    }
    let mut per_message = Vec::new();
    for e in &report.posteriors.entries {
        let x = tau
            .proposal(&e.message)
            .ok_or_else(|| Error::MessageUndefined(e.message.clone()))?;
        let lhs = game.expected_receiver(&e.belief).eval(x);
        let mut best: Option<(Rational, TypeSet)> = None;
        let mut strict: Vec<TypeSet> = e.support.subsets().filter(|l| *l != e.support).collect();
        strict.sort_by_key(|l| (core::cmp::Reverse(l.len()), l.bits()));
        for l in strict {
            let weights: Vec<Rational> = (0..game.type_count())
                .map(|k| {
                    if l.contains(k) {
                        e.belief[k].clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            let out = lp::maximize(&game.expected_receiver(&weights), &game.acceptance_polytope(l))?;
            if out.status != LpStatus::Optimal {
                continue;
            }
            let served = l.iter().fold(Rational::zero(), |acc, k| acc + &e.belief[k]);
            let bound = (&lhs - out.value.expect("optimal")) / (Rational::one() - served);
            if best.as_ref().is_none_or(|(b, _)| bound < *b) {
                best = Some((bound, l));
            }
        }
        let (threshold, binding) = best.ok_or_else(|| Error::Internal("no exit alternative".into()))?;
        per_message.push(MessageThreshold {
            message: e.message.clone(),
            threshold,
            binding,
        });
    }
    let uncapped = per_message
        .iter()
        .map(|m| &m.threshold)
        .min()
        .cloned()
        .ok_or_else(|| Error::Internal("no on-path message".into()))?;
    let cap = game.v0_cap().clone();
    let overall = if uncapped < cap { uncapped.clone() } else { cap.clone() };
    Ok(ThresholdReport {
        per_message,
        uncapped,
        admissibility_cap: cap,
        overall,
    })
}

/// Receiver's best ex-ante payoff over partitional equilibria, with an
/// equilibrium attaining it. Partitions are visited in restricted-growth
/// order; the first maximizer is kept.
pub fn best_partitional_value(game: &GameSpec) -> Result<(Rational, Equilibrium)> {
    if game.type_count() > MAX_PARTITION_TYPES {
        return Err(Error::TooManyTypes {
            count: game.type_count(),
            max: MAX_PARTITION_TYPES,
        });
    }
    let mut best: Option<(Rational, Equilibrium)> = None;
    for cells in Partitions::new(game.type_count()) {
        let Some(eq) = partition_equilibrium(game, &cells)? else {
            continue;
        };
        let value = eq.receiver_ex_ante().clone();
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, eq));
        }
    }
    best.ok_or(Error::NoPartitionalEquilibrium)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MechanismBound {
    pub v_star: Rational,
    /// `max_k max_X V^k`.
    pub v_bar: Rational,
    /// Type with the smallest prior (smallest index on ties).
    pub k_min: usize,
    pub p_min: Rational,
    /// `(v_star − (1 − p_min)·v_bar) / p_min`.
    pub bound: Rational,
}

/// Exit payoffs at or below `bound` make any mechanism that lets some type
/// exit worse for the receiver than the best partitional equilibrium.
pub fn mechanism_bound(game: &GameSpec, v_star: &Rational) -> Result<MechanismBound> {
    let mut v_bar: Option<Rational> = None;
    for t in game.types() {
        let out = lp::maximize(&t.receiver, game.decisions())?;
        let v = out
            .value
            .ok_or_else(|| Error::Internal("decision set is empty".into()))?;
        if v_bar.as_ref().is_none_or(|b| v > *b) {
            v_bar = Some(v);
        }
    }
    let v_bar = v_bar.expect("at least one type");
    let (k_min, p_min) = game
        .types()
        .iter()
        .enumerate()
        .fold(None::<(usize, &Rational)>, |acc, (k, t)| match acc {
            Some((_, p)) if *p <= t.prior => acc,
            _ => Some((k, &t.prior)),
        })
        .map(|(k, p)| (k, p.clone()))
        .expect("at least one type");
    let bound = (v_star - (Rational::one() - &p_min) * &v_bar) / &p_min;
    Ok(MechanismBound {
        v_star: v_star.clone(),
        v_bar,
        k_min,
        p_min,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{int, ratio, AffineFn, Halfspace, Polytope};
    use crate::model::TypeData;
    use crate::verify::check_v0_equilibrium;
    use alloc::format;
    use alloc::string::ToString;
    use alloc::vec;

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

    fn equilibrium() -> (SenderStrategy, ReceiverStrategy) {
        let names: Vec<String> = (0..3).map(|i| format!("m{i}")).collect();
        let sigma = SenderStrategy::pure(names.clone(), &[0, 1, 1]).unwrap();
        let tau = ReceiverStrategy::new(
            names
                .into_iter()
                .zip([pt(&[30, 0]), pt(&[0, 40]), pt(&[0, 40])])
                .collect(),
        );
        (sigma, tau)
    }

    #[test]
    fn kidnapping_threshold() {
        let g = kidnapping();
        let (s, t) = equilibrium();
        let r = exit_threshold(&g, &s, &t).unwrap();
        assert_eq!(r.per_message[0].threshold, int(-30));
        assert_eq!(r.per_message[0].binding, TypeSet::EMPTY);
        // serving only type 3 at (0,10): -40 ≥ -5 + v0/2
        assert_eq!(r.per_message[1].threshold, int(-70));
        assert_eq!(r.per_message[1].binding, TypeSet::singleton(2));
        assert_eq!(r.uncapped, int(-70));
        assert_eq!(r.admissibility_cap, int(-100));
        assert_eq!(r.overall, int(-100));
        let below = check_v0_equilibrium(&g, &(&r.overall - int(1)), &s, &t).unwrap();
        assert!(below.overall && below.exit_types.is_empty());
    }

    #[test]
    fn threshold_needs_an_equilibrium() {
        let g = kidnapping();
        let (s, _) = equilibrium();
        let bad = ReceiverStrategy::new(s.messages().iter().map(|m| (m.clone(), pt(&[0, 40]))).collect());
        assert_eq!(exit_threshold(&g, &s, &bad), Err(Error::NotAnEquilibrium));
    }

    #[test]
    fn kidnapping_best_partition_and_bound() {
        let g = kidnapping();
        let (v, eq) = best_partitional_value(&g).unwrap();
        assert_eq!(v, ratio(-110, 3));
        assert_eq!(
            eq.cells().unwrap(),
            vec![TypeSet::singleton(0), [1, 2].into_iter().collect()]
        );
        let b = mechanism_bound(&g, &v).unwrap();
        assert_eq!(b.v_bar, int(0));
        assert_eq!(b.p_min, ratio(1, 3));
        assert_eq!(b.bound, int(-110));
    }

    #[test]
    fn bound_identities() {
        let g = kidnapping();
        let b = mechanism_bound(&g, &int(0)).unwrap();
        assert_eq!(b.bound, int(0));
        let lower = mechanism_bound(&g, &int(-1)).unwrap();
        assert!(lower.bound < b.bound);
    }
}
