//! Exact equilibrium checks.
//!
//! Two regimes share one report type. In the limit game every on-path
//! proposal must be accepted by every type that sends the message, the
//! receiver maximizes over the acceptance set of the posterior's support, and
//! the sender compares raw utilities. With a finite exit payoff `v0` types may
//! reject on path, the receiver's benchmark allows for deliberately induced
//! exits, and the sender compares `max{U, u₀}`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{self, LpOutcome, LpStatus, Rational};
use crate::model::{posteriors, GameSpec, MediatedMechanism, PosteriorTable, ReceiverStrategy, SenderStrategy};
use crate::types::TypeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckMode {
    Limit,
    Exit { v0: Rational },
}

/// Type `ty` rejects the proposal made after `message`, which it sends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExitViolation {
    pub ty: usize,
    pub message: String,
    /// `u₀ − U(τ(m)) > 0`.
    pub shortfall: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoExitSection {
    /// False in the exit regime, where on-path rejection is allowed and only
    /// reported.
    pub enforced: bool,
    pub holds: bool,
    pub violations: Vec<ExitViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageOptimality {
    pub message: String,
    /// Receiver's expected payoff from the proposal actually made.
    pub value: Rational,
    /// Best attainable payoff at this posterior; `None` when the support has
    /// no commonly acceptable decision.
    pub best: Option<Rational>,
    pub best_decision: Option<Vec<Rational>>,
    /// Types the benchmark decision leaves to exit (exit regime only).
    pub best_exit_set: TypeSet,
    /// `best − value`; zero when the proposal is optimal.
    pub gap: Option<Rational>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalitySection {
    pub holds: bool,
    pub per_message: Vec<MessageOptimality>,
}

/// Type `ty`, which sends `message`, strictly gains `gap` by sending
/// `deviation` instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IcViolation {
    pub ty: usize,
    pub message: String,
    pub deviation: String,
    pub gap: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncentiveSection {
    pub holds: bool,
    pub violations: Vec<IcViolation>,
}

impl IncentiveSection {
    /// Largest gain over all violations.
    pub fn max_gap(&self) -> Option<&Rational> {
        self.violations.iter().map(|v| &v.gap).max()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub mode: CheckMode,
    pub posteriors: PosteriorTable,
    pub no_exit: NoExitSection,
    pub constrained_opt: OptimalitySection,
    pub incentive: IncentiveSection,
    pub overall: bool,
    /// Expected approval payoff of each type.
    pub interim_payoffs: Vec<Rational>,
    pub receiver_ex_ante: Rational,
    /// Types that reject some on-path proposal.
    pub exit_types: TypeSet,
}

/// Maximum of the posterior-weighted receiver payoff over the acceptance set
/// of the belief's support. `Ok(None)` when that set is empty.
pub fn constrained_optimum(game: &GameSpec, belief: &[Rational]) -> Result<Option<LpOutcome>> {
    let support = support_of(belief);
    let out = lp::maximize(&game.expected_receiver(belief), &game.acceptance_polytope(support))?;
    Ok(match out.status {
        LpStatus::Optimal => Some(out),
        _ => None,
    })
}

pub(crate) fn support_of(belief: &[Rational]) -> TypeSet {
    (0..belief.len()).filter(|&k| belief[k].is_positive()).collect()
}

fn check_belief(game: &GameSpec, belief: &[Rational]) -> Result<()> {
    if belief.len() != game.type_count() {
        return Err(Error::InvalidBelief(format!(
            "{} entries for {} types",
            belief.len(),
            game.type_count()
        )));
    }
    if belief.iter().any(Signed::is_negative) {
        return Err(Error::InvalidBelief("negative entry".into()));
    }
    let sum = belief.iter().fold(Rational::zero(), |a, b| a + b);
    if !sum.is_one() {
        return Err(Error::InvalidBelief(format!("entries sum to {sum}")));
    }
    Ok(())
}

/// The receiver's best option at `belief` when rejection pays the receiver `v0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExitChoice {
    pub value: Rational,
    pub decision: Vec<Rational>,
    /// Types in the support left to reject the decision.
    pub exit_set: TypeSet,
    /// Best value among choices that keep the whole support on board, if any.
    pub full_participation: Option<Rational>,
}

/// Best receiver choice at `belief` when rejection pays `v0`, which must not
/// exceed any receiver payoff in X.
pub fn receiver_best_with_exit(game: &GameSpec, belief: &[Rational], v0: &Rational) -> Result<ExitChoice> {
    game.check_v0(v0)?;
    best_exit_split(game, belief, v0)
}

/// The enumeration behind [`receiver_best_with_exit`] without the admissibility
/// check on `v0`: for every `L ⊆ supp` with `X(L)` nonempty, the value
/// `max_{X(L)} Σ_{k∈L} b^k V^k + v0·Σ_{k∈supp∖L} b^k`. Ties go to the larger
/// `L`, then to the smaller bitmask.
///
/// Above the admissibility cap the formula no longer equals the payoff
/// actually obtained, because types outside `L` may accept too.
pub fn best_exit_split(game: &GameSpec, belief: &[Rational], v0: &Rational) -> Result<ExitChoice> {
    check_belief(game, belief)?;
    let support = support_of(belief);
    let mut subsets: Vec<TypeSet> = support.subsets().collect();
    subsets.sort_by_key(|s| (core::cmp::Reverse(s.len()), s.bits()));

    let mut best: Option<ExitChoice> = None;
    let mut full = None;
    for l in subsets {
        let weights: Vec<Rational> = (0..belief.len())
            .map(|k| {
                if l.contains(k) {
                    belief[k].clone()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        let out = lp::maximize(&game.expected_receiver(&weights), &game.acceptance_polytope(l))?;
        if out.status != LpStatus::Optimal {
            continue;
        }
        let outside = support
            .difference(l)
            .iter()
            .fold(Rational::zero(), |acc, k| acc + &belief[k]);
        let value = out.value.expect("optimal") + v0 * outside;
        if l == support {
            full = Some(value.clone());
        }
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(ExitChoice {
                value,
                decision: out.point.expect("optimal"),
                exit_set: support.difference(l),
                full_participation: None,
            });
        }
    }
    let mut best = best.expect("X itself is nonempty, so L = ∅ is always available");
    best.full_participation = full;
    Ok(best)
}

struct Prepared<'a> {
    table: PosteriorTable,
    proposals: Vec<&'a [Rational]>,
}

fn prepare<'a>(game: &GameSpec, sigma: &SenderStrategy, tau: &'a ReceiverStrategy) -> Result<Prepared<'a>> {
    sigma.check_for(game)?;
    let proposals = tau.aligned(sigma)?;
    for x in &proposals {
        if x.len() != game.dim() {
            return Err(Error::DimensionMismatch {
                expected: game.dim(),
                found: x.len(),
            });
        }
        if !game.decisions().contains(x) {
            return Err(Error::DecisionOutsideX);
        }
    }
    let table = posteriors(game, sigma)?;
    Ok(Prepared { table, proposals })
}

fn no_exit_section(
    game: &GameSpec,
    sigma: &SenderStrategy,
    prep: &Prepared,
    enforced: bool,
) -> (NoExitSection, TypeSet) {
    let mut violations = Vec::new();
    let mut exit_types = TypeSet::EMPTY;
    for e in &prep.table.entries {
        let x = prep.proposals[e.message_index];
        for k in e.support.iter() {
            let t = game.ty(k);
            let u = t.sender.eval(x);
            if u < t.reserve {
                exit_types.insert(k);
                violations.push(ExitViolation {
                    ty: k,
                    message: sigma.messages()[e.message_index].clone(),
                    shortfall: &t.reserve - u,
                });
            }
        }
    }
    let holds = !enforced || violations.is_empty();
    (
        NoExitSection {
            enforced,
            holds,
            violations,
        },
        exit_types,
    )
}

fn incentive_section(
    game: &GameSpec,
    sigma: &SenderStrategy,
    prep: &Prepared,
    payoff: impl Fn(usize, &[Rational]) -> Rational,
) -> IncentiveSection {
    let mut violations = Vec::new();
    for k in 0..game.type_count() {
        let values: Vec<Rational> = prep.proposals.iter().map(|x| payoff(k, x)).collect();
        for (m, own) in values.iter().enumerate() {
            if !sigma.prob(k, m).is_positive() {
                continue;
            }
            for (d, other) in values.iter().enumerate() {
                if other > own {
                    violations.push(IcViolation {
                        ty: k,
                        message: sigma.messages()[m].clone(),
                        deviation: sigma.messages()[d].clone(),
                        gap: other - own,
                    });
                }
            }
        }
    }
    IncentiveSection {
        holds: violations.is_empty(),
        violations,
    }
}

fn interim(game: &GameSpec, sigma: &SenderStrategy, prep: &Prepared) -> Vec<Rational> {
    (0..game.type_count())
        .map(|k| {
            prep.proposals.iter().enumerate().fold(Rational::zero(), |acc, (m, x)| {
                acc + sigma.prob(k, m) * game.vetoed_payoff(k, x)
            })
        })
        .collect()
}

/// Equilibrium check in the limit game: no on-path rejection, constrained
/// optimality of every on-path proposal, and incentive compatibility.
pub fn check_limit_equilibrium(game: &GameSpec, sigma: &SenderStrategy, tau: &ReceiverStrategy) -> Result<CheckReport> {
    let prep = prepare(game, sigma, tau)?;
    let (no_exit, exit_types) = no_exit_section(game, sigma, &prep, true);

    let mut per_message = Vec::new();
    let mut ex_ante = Rational::zero();
    for e in &prep.table.entries {
        let x = prep.proposals[e.message_index];
        let value = game.expected_receiver(&e.belief).eval(x);
        ex_ante += &e.mass * &value;
        let opt = constrained_optimum(game, &e.belief)?;
        let accepted = game.acceptors(e.support, x) == e.support;
        let (best, best_decision, gap, holds) = match opt {
            Some(out) => {
                let best = out.value.expect("optimal");
                let gap = &best - &value;
                let holds = accepted && gap.is_zero();
                (Some(best), out.point, Some(gap), holds)
            }
            None => (None, None, None, false),
        };
        per_message.push(MessageOptimality {
            message: e.message.clone(),
            value,
            best,
            best_decision,
            best_exit_set: TypeSet::EMPTY,
            gap,
            holds,
        });
    }
    let constrained_opt = OptimalitySection {
        holds: per_message.iter().all(|m| m.holds),
        per_message,
    };
    let incentive = incentive_section(game, sigma, &prep, |k, x| game.ty(k).sender.eval(x));
    let interim_payoffs = interim(game, sigma, &prep);
    Ok(CheckReport {
        mode: CheckMode::Limit,
        overall: no_exit.holds && constrained_opt.holds && incentive.holds,
        posteriors: prep.table,
        no_exit,
        constrained_opt,
        incentive,
        interim_payoffs,
        receiver_ex_ante: ex_ante,
        exit_types,
    })
}

/// Equilibrium check when rejection pays the receiver `v0`.
pub fn check_v0_equilibrium(
    game: &GameSpec,
    v0: &Rational,
    sigma: &SenderStrategy,
    tau: &ReceiverStrategy,
) -> Result<CheckReport> {
    game.check_v0(v0)?;
    let prep = prepare(game, sigma, tau)?;
    let (no_exit, exit_types) = no_exit_section(game, sigma, &prep, false);

    let mut per_message = Vec::new();
    let mut ex_ante = Rational::zero();
    for e in &prep.table.entries {
        let x = prep.proposals[e.message_index];
        let value = e.support.iter().fold(Rational::zero(), |acc, k| {
            acc + &e.belief[k] * game.exit_payoff(k, x, v0)
        });
        ex_ante += &e.mass * &value;
        let best = best_exit_split(game, &e.belief, v0)?;
        let gap = &best.value - &value;
        per_message.push(MessageOptimality {
            message: e.message.clone(),
            holds: gap.is_zero(),
            value,
            best: Some(best.value),
            best_decision: Some(best.decision),
            best_exit_set: best.exit_set,
            gap: Some(gap),
        });
    }
    let constrained_opt = OptimalitySection {
        holds: per_message.iter().all(|m| m.holds),
        per_message,
    };
    let incentive = incentive_section(game, sigma, &prep, |k, x| game.vetoed_payoff(k, x));
    let interim_payoffs = interim(game, sigma, &prep);
    Ok(CheckReport {
        mode: CheckMode::Exit { v0: v0.clone() },
        overall: constrained_opt.holds && incentive.holds,
        posteriors: prep.table,
        no_exit,
        constrained_opt,
        incentive,
        interim_payoffs,
        receiver_ex_ante: ex_ante,
        exit_types,
    })
}

/// Receiver obedience at one recommendation of a mediator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obedience {
    pub label: String,
    pub posterior: Vec<Rational>,
    pub decision: Vec<Rational>,
    pub value: Rational,
    pub best: Option<Rational>,
    pub holds: bool,
}

/// Type `ty` reporting `report` instead of the truth, with the option to
/// reject each recommended decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisreportGain {
    pub ty: usize,
    pub report: usize,
    pub truthful: Rational,
    pub deviating: Rational,
}

impl MisreportGain {
    pub fn gap(&self) -> Rational {
        &self.deviating - &self.truthful
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MediatedReport {
    /// Every type accepts every decision its own lottery recommends.
    pub participation: bool,
    pub obedience: Vec<Obedience>,
    pub misreports: Vec<MisreportGain>,
    pub truthful: bool,
    pub overall: bool,
    pub interim_payoffs: Vec<Rational>,
    pub receiver_ex_ante: Rational,
}

/// Truth-telling (with veto when misreporting), participation and receiver
/// obedience for a mediator.
pub fn check_mediated(game: &GameSpec, mech: &MediatedMechanism) -> Result<MediatedReport> {
    let n = game.type_count();
    if mech.lotteries.len() != n {
        return Err(Error::RowMismatch {
            expected: n,
            found: mech.lotteries.len(),
        });
    }
    let participation = mech.lotteries.iter().enumerate().all(|(k, lottery)| {
        lottery
            .iter()
            .all(|o| o.probability.is_zero() || game.accepts(k, &o.decision))
    });

    let lottery_value = |k: usize, report: usize| {
        mech.lotteries[report].iter().fold(Rational::zero(), |acc, o| {
            acc + &o.probability * game.vetoed_payoff(k, &o.decision)
        })
    };
    let interim_payoffs: Vec<Rational> = (0..n).map(|k| lottery_value(k, k)).collect();
    let mut misreports = Vec::new();
    for (k, truthful) in interim_payoffs.iter().enumerate() {
        for j in (0..n).filter(|&j| j != k) {
            misreports.push(MisreportGain {
                ty: k,
                report: j,
                truthful: truthful.clone(),
                deviating: lottery_value(k, j),
            });
        }
    }
    let truthful = misreports.iter().all(|m| !m.gap().is_positive());

    // joint weight of (type, label), and the decision behind each label
    let prior = game.prior();
    let mut by_label: BTreeMap<&str, (Vec<Rational>, &[Rational])> = BTreeMap::new();
    for (k, lottery) in mech.lotteries.iter().enumerate() {
        for o in lottery.iter().filter(|o| o.probability.is_positive()) {
            let entry = by_label
                .entry(o.label.as_str())
                .or_insert_with(|| (alloc::vec![Rational::zero(); n], o.decision.as_slice()));
            if entry.1 != o.decision.as_slice() {
                return Err(Error::InvalidStrategy(format!(
                    "recommendation {:?} maps to two different decisions",
                    o.label
                )));
            }
            entry.0[k] += &prior[k] * &o.probability;
        }
    }
    let mut obedience = Vec::new();
    let mut ex_ante = Rational::zero();
    for (label, (joint, decision)) in by_label {
        let mass = joint.iter().fold(Rational::zero(), |a, b| a + b);
        let posterior: Vec<Rational> = joint.iter().map(|j| j / &mass).collect();
        let value = game.expected_receiver(&posterior).eval(decision);
        ex_ante += &mass * &value;
        let best = constrained_optimum(game, &posterior)?.and_then(|o| o.value);
        let accepted = game.acceptors(support_of(&posterior), decision) == support_of(&posterior);
        obedience.push(Obedience {
            label: label.into(),
            holds: accepted && best.as_ref() == Some(&value),
            posterior,
            decision: decision.to_vec(),
            value,
            best,
        });
    }
    let overall = participation && truthful && obedience.iter().all(|o| o.holds);
    Ok(MediatedReport {
        participation,
        obedience,
        misreports,
        truthful,
        overall,
        interim_payoffs,
        receiver_ex_ante: ex_ante,
    })
}
