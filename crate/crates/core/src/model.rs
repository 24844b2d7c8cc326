//! Games, strategy profiles, posterior beliefs and the payoff functions of
//! the approval stage.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{self, AffineFn, Halfspace, LpStatus, Polytope, Rational};
use crate::types::{TypeSet, MAX_TYPES};

/// Everything attached to one sender type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeData {
    pub name: String,
    pub prior: Rational,
    /// Reservation utility obtained by rejecting the proposal.
    pub reserve: Rational,
    pub sender: AffineFn,
    pub receiver: AffineFn,
}

/// A validated game: finite types with full-support prior, a bounded
/// nonempty polytope of decisions, affine utilities, and for every type at
/// least one acceptable decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSpec {
    decisions: Polytope,
    types: Vec<TypeData>,
    private_values: bool,
    v0_cap: Rational,
}

impl GameSpec {
    pub fn new(decisions: Polytope, types: Vec<TypeData>) -> Result<Self> {
        if types.is_empty() {
            return Err(Error::EmptyTypeList);
        }
        if types.len() > MAX_TYPES {
            return Err(Error::TooManyTypes {
                count: types.len(),
                max: MAX_TYPES,
            });
        }
        let dim = decisions.dim();
        for t in &types {
            for f in [&t.sender, &t.receiver] {
                if f.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: f.dim(),
                    });
                }
            }
        }
        let mut sum = Rational::zero();
        for (k, t) in types.iter().enumerate() {
            if !t.prior.is_positive() {
                return Err(Error::NonPositivePrior { ty: k });
            }
            sum += &t.prior;
        }
        if !sum.is_one() {
            return Err(Error::PriorNotNormalized { sum });
        }
        if lp::feasible(&decisions)?.status != LpStatus::Optimal {
            return Err(Error::EmptyDecisionSet);
        }
        if !decisions.is_bounded_nonempty()? {
            return Err(Error::UnboundedDecisionSet);
        }
        let private_values = types.windows(2).all(|w| w[0].receiver == w[1].receiver);
        let mut game = GameSpec {
            decisions,
            types,
            private_values,
            v0_cap: Rational::zero(),
        };
        for k in 0..game.type_count() {
            let xk = game.acceptance_polytope(TypeSet::singleton(k));
            if lp::feasible(&xk)?.status != LpStatus::Optimal {
                return Err(Error::TypeUnacceptable { ty: k });
            }
        }
        let mut cap: Option<Rational> = None;
        for t in &game.types {
            let out = lp::maximize(&t.receiver.neg(), &game.decisions)?;
            let min = -out.value.expect("bounded nonempty decision set");
            cap = Some(match cap {
                Some(c) if c <= min => c,
                _ => min,
            });
        }
        game.v0_cap = cap.expect("at least one type");
        Ok(game)
    }

    pub fn dim(&self) -> usize {
        self.decisions.dim()
    }

    pub fn type_count(&self) -> usize {
        self.types.len()
    }

    pub fn all_types(&self) -> TypeSet {
        TypeSet::full(self.type_count())
    }

    pub fn decisions(&self) -> &Polytope {
        &self.decisions
    }

    pub fn types(&self) -> &[TypeData] {
        &self.types
    }

    pub fn ty(&self, k: usize) -> &TypeData {
        &self.types[k]
    }

    pub fn prior(&self) -> Vec<Rational> {
        self.types.iter().map(|t| t.prior.clone()).collect()
    }

    /// True iff every type's receiver utility is coefficient-wise identical.
    pub fn private_values(&self) -> bool {
        self.private_values
    }

    /// `min_k min_{x ∈ X} V^k(x)`: the largest admissible exit payoff.
    pub fn v0_cap(&self) -> &Rational {
        &self.v0_cap
    }

    pub fn check_v0(&self, v0: &Rational) -> Result<()> {
        if *v0 > self.v0_cap {
            return Err(Error::V0TooHigh {
                v0: v0.clone(),
                cap: self.v0_cap.clone(),
            });
        }
        Ok(())
    }

    /// `U^k(x) ≥ u₀^k` as a half-space.
    pub fn acceptance_row(&self, k: usize) -> Halfspace {
        let t = &self.types[k];
        t.sender.at_least(&t.reserve)
    }

    /// X intersected with the acceptance half-space of every type in `set`.
    /// An empty `set` yields X itself.
    pub fn acceptance_polytope(&self, set: TypeSet) -> Polytope {
        let mut p = self.decisions.clone();
        for k in set.iter() {
            p.push(self.acceptance_row(k))
                .expect("utilities match the decision dimension");
        }
        p
    }

    pub fn accepts(&self, k: usize, x: &[Rational]) -> bool {
        let t = &self.types[k];
        t.sender.eval(x) >= t.reserve
    }

    /// Types in `within` that accept `x`.
    pub fn acceptors(&self, within: TypeSet, x: &[Rational]) -> TypeSet {
        within.iter().filter(|&k| self.accepts(k, x)).collect()
    }

    fn check_decision(&self, x: &[Rational]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        if !self.decisions.contains(x) {
            return Err(Error::DecisionOutsideX);
        }
        Ok(())
    }

    /// `max{U^k(x), u₀^k}`: the sender's payoff given the option to reject.
    pub fn approval_payoff(&self, k: usize, x: &[Rational]) -> Result<Rational> {
        self.check_decision(x)?;
        Ok(self.vetoed_payoff(k, x))
    }

    pub(crate) fn vetoed_payoff(&self, k: usize, x: &[Rational]) -> Rational {
        let t = &self.types[k];
        let u = t.sender.eval(x);
        if u >= t.reserve {
            u
        } else {
            t.reserve.clone()
        }
    }

    /// Receiver payoff against type `k` when exit pays `v0`: `V^k(x)` if the
    /// type accepts (ties accept), `v0` otherwise.
    pub fn receiver_payoff_v0(&self, k: usize, x: &[Rational], v0: &Rational) -> Result<Rational> {
        self.check_decision(x)?;
        self.check_v0(v0)?;
        Ok(self.exit_payoff(k, x, v0))
    }

    pub(crate) fn exit_payoff(&self, k: usize, x: &[Rational], v0: &Rational) -> Rational {
        if self.accepts(k, x) {
            self.types[k].receiver.eval(x)
        } else {
            v0.clone()
        }
    }

    /// `Σ_k belief^k V^k` as a single affine function.
    pub fn expected_receiver(&self, belief: &[Rational]) -> AffineFn {
        AffineFn::combination(
            self.dim(),
            belief
                .iter()
                .zip(&self.types)
                .filter(|(b, _)| !b.is_zero())
                .map(|(b, t)| (b, &t.receiver)),
        )
    }

    /// Same game on the types in `keep`, with the prior renormalized.
    pub fn restrict(&self, keep: TypeSet) -> Result<GameSpec> {
        if keep.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mass = keep.iter().fold(Rational::zero(), |acc, k| acc + &self.types[k].prior);
        let types = keep
            .iter()
            .map(|k| {
                let mut t = self.types[k].clone();
                t.prior = &t.prior / &mass;
                t
            })
            .collect();
        GameSpec::new(self.decisions.clone(), types)
    }

    /// Same game with a different prior (one entry per type).
    pub fn with_prior(&self, prior: &[Rational]) -> Result<GameSpec> {
        if prior.len() != self.type_count() {
            return Err(Error::RowMismatch {
                expected: self.type_count(),
                found: prior.len(),
            });
        }
        let types = self
            .types
            .iter()
            .zip(prior)
            .map(|(t, p)| TypeData {
                prior: p.clone(),
                ..t.clone()
            })
            .collect();
        GameSpec::new(self.decisions.clone(), types)
    }

    /// Label for a set of types, e.g. `{1,3}` (1-based indices).
    pub fn set_label(&self, set: TypeSet) -> String {
        format!("{set}")
    }
}

/// A mixed sender strategy: one probability row per type over `messages`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SenderStrategy {
    messages: Vec<String>,
    rows: Vec<Vec<Rational>>,
}

impl SenderStrategy {
    pub fn new(messages: Vec<String>, rows: Vec<Vec<Rational>>) -> Result<Self> {
        for (i, m) in messages.iter().enumerate() {
            if messages[..i].contains(m) {
                return Err(Error::InvalidStrategy(format!("duplicate message {m:?}")));
            }
        }
        for (k, row) in rows.iter().enumerate() {
            if row.len() != messages.len() {
                return Err(Error::InvalidStrategy(format!(
                    "row {} has {} entries for {} messages",
                    k + 1,
                    row.len(),
                    messages.len()
                )));
            }
            if row.iter().any(Signed::is_negative) {
                return Err(Error::InvalidStrategy(format!("row {} has a negative entry", k + 1)));
            }
            let sum = row.iter().fold(Rational::zero(), |a, b| a + b);
            if !sum.is_one() {
                return Err(Error::InvalidStrategy(format!("row {} sums to {sum}", k + 1)));
            }
        }
        Ok(SenderStrategy { messages, rows })
    }

    /// Pure strategy: type `k` sends `messages[assignment[k]]`.
    pub fn pure(messages: Vec<String>, assignment: &[usize]) -> Result<Self> {
        let rows = assignment
            .iter()
            .map(|&m| {
                let mut row = alloc::vec![Rational::zero(); messages.len()];
                if m < row.len() {
                    row[m] = Rational::one();
                }
                row
            })
            .collect();
        SenderStrategy::new(messages, rows)
    }

    pub fn messages(&self) -> &[String] {
        &self.messages
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn prob(&self, k: usize, m: usize) -> &Rational {
        &self.rows[k][m]
    }

    pub fn message_index(&self, name: &str) -> Option<usize> {
        self.messages.iter().position(|m| m == name)
    }

    /// Every row is a unit vector.
    pub fn is_partitional(&self) -> bool {
        self.rows.iter().all(|r| r.iter().filter(|v| !v.is_zero()).count() == 1)
    }

    /// Types that send message `m` with positive probability.
    pub fn senders_of(&self, m: usize) -> TypeSet {
        (0..self.rows.len())
            .filter(|&k| self.rows[k][m].is_positive())
            .collect()
    }

    pub fn check_for(&self, game: &GameSpec) -> Result<()> {
        if self.rows.len() != game.type_count() {
            return Err(Error::RowMismatch {
                expected: game.type_count(),
                found: self.rows.len(),
            });
        }
        if self.messages.len() < game.type_count() {
            return Err(Error::TooFewMessages {
                messages: self.messages.len(),
                types: game.type_count(),
            });
        }
        Ok(())
    }
}

/// A pure receiver strategy: one proposal per message.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReceiverStrategy {
    proposals: BTreeMap<String, Vec<Rational>>,
}

impl ReceiverStrategy {
    pub fn new(proposals: BTreeMap<String, Vec<Rational>>) -> Self {
        ReceiverStrategy { proposals }
    }

    pub fn insert(&mut self, message: String, decision: Vec<Rational>) {
        self.proposals.insert(message, decision);
    }

    pub fn proposal(&self, message: &str) -> Option<&[Rational]> {
        self.proposals.get(message).map(Vec::as_slice)
    }

    pub fn proposals(&self) -> &BTreeMap<String, Vec<Rational>> {
        &self.proposals
    }

    /// Proposals aligned with `sigma`'s message order.
    pub fn aligned(&self, sigma: &SenderStrategy) -> Result<Vec<&[Rational]>> {
        sigma
            .messages()
            .iter()
            .map(|m| self.proposal(m).ok_or_else(|| Error::MessageUndefined(m.clone())))
            .collect()
    }

    pub fn check_for(&self, game: &GameSpec) -> Result<()> {
        for x in self.proposals.values() {
            game.check_decision(x)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosteriorEntry {
    pub message_index: usize,
    pub message: String,
    pub mass: Rational,
    pub belief: Vec<Rational>,
    pub support: TypeSet,
}

/// Posterior beliefs for every message sent with positive probability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosteriorTable {
    pub entries: Vec<PosteriorEntry>,
}

impl PosteriorTable {
    pub fn get(&self, message_index: usize) -> Option<&PosteriorEntry> {
        self.entries.iter().find(|e| e.message_index == message_index)
    }

    /// `Σ_m P(m)·p_m`, which equals the prior.
    pub fn average(&self, type_count: usize) -> Vec<Rational> {
        let mut acc = alloc::vec![Rational::zero(); type_count];
        for e in &self.entries {
            for (a, b) in acc.iter_mut().zip(&e.belief) {
                *a += &e.mass * b;
            }
        }
        acc
    }
}

/// Bayes update of the prior for every on-path message.
pub fn posteriors(game: &GameSpec, sigma: &SenderStrategy) -> Result<PosteriorTable> {
    if sigma.rows().len() != game.type_count() {
        return Err(Error::RowMismatch {
            expected: game.type_count(),
            found: sigma.rows().len(),
        });
    }
    let prior = game.prior();
    let mut entries = Vec::new();
    for (m, name) in sigma.messages().iter().enumerate() {
        let joint: Vec<Rational> = prior.iter().zip(sigma.rows()).map(|(p, row)| p * &row[m]).collect();
        let mass = joint.iter().fold(Rational::zero(), |a, b| a + b);
        if mass.is_zero() {
            continue;
        }
        let belief: Vec<Rational> = joint.iter().map(|j| j / &mass).collect();
        let support = (0..belief.len()).filter(|&k| belief[k].is_positive()).collect();
        entries.push(PosteriorEntry {
            message_index: m,
            message: name.clone(),
            mass,
            belief,
            support,
        });
    }
    Ok(PosteriorTable { entries })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LotteryOutcome {
    /// Recommendation label; equal labels across types denote the same
    /// recommendation, which is what the receiver conditions on.
    pub label: String,
    pub probability: Rational,
    pub decision: Vec<Rational>,
}

/// A mediator: for each reported type, a finite lottery over decisions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MediatedMechanism {
    pub lotteries: Vec<Vec<LotteryOutcome>>,
}

impl MediatedMechanism {
    pub fn new(game: &GameSpec, lotteries: Vec<Vec<LotteryOutcome>>) -> Result<Self> {
        if lotteries.len() != game.type_count() {
            return Err(Error::RowMismatch {
                expected: game.type_count(),
                found: lotteries.len(),
            });
        }
        for (k, lottery) in lotteries.iter().enumerate() {
            let mut sum = Rational::zero();
            for o in lottery {
                if o.probability.is_negative() {
                    return Err(Error::InvalidStrategy(format!(
                        "lottery for type {} has a negative probability",
                        k + 1
                    )));
                }
                game.check_decision(&o.decision)?;
                sum += &o.probability;
            }
            if !sum.is_one() {
                return Err(Error::InvalidStrategy(format!(
                    "lottery for type {} sums to {sum}",
                    k + 1
                )));
            }
        }
        Ok(MediatedMechanism { lotteries })
    }

    /// Expected decision of the lottery for reported type `k`.
    pub fn mean_decision(&self, k: usize) -> Vec<Rational> {
        let lottery = &self.lotteries[k];
        let dim = lottery.first().map_or(0, |o| o.decision.len());
        let mut acc = alloc::vec![Rational::zero(); dim];
        for o in lottery {
            for (a, x) in acc.iter_mut().zip(&o.decision) {
                *a += &o.probability * x;
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{int, ratio};
    use alloc::string::ToString;
    use alloc::vec;

    fn hs(normal: &[i64], rhs: i64) -> Halfspace {
        Halfspace::new(normal.iter().map(|&v| int(v)).collect(), int(rhs))
    }

    fn lin(c: &[i64]) -> AffineFn {
        AffineFn::linear(c.iter().map(|&v| int(v)).collect())
    }

    fn kidnapping() -> GameSpec {
        let x = Polytope::new(2, vec![hs(&[-1, 0], 0), hs(&[0, -1], 0), hs(&[1, 1], 100)]).unwrap();
        let v = lin(&[-1, -1]);
        let mk = |name: &str, u: &[i64], r: i64| TypeData {
            name: name.to_string(),
            prior: ratio(1, 3),
            reserve: int(r),
            sender: lin(u),
            receiver: v.clone(),
        };
        GameSpec::new(
            x,
            vec![mk("1", &[1, -1], 30), mk("2", &[-1, 1], 40), mk("3", &[1, 2], 20)],
        )
        .unwrap()
    }

    #[test]
    fn approval_payoff_takes_the_better_of_accept_and_reject() {
        let g = kidnapping();
        let x = [int(0), int(40)];
        assert_eq!(g.approval_payoff(0, &x).unwrap(), int(30));
        assert_eq!(g.approval_payoff(2, &x).unwrap(), int(80));
        // indifference counts as acceptance
        assert_eq!(g.approval_payoff(1, &x).unwrap(), int(40));
        assert_eq!(g.approval_payoff(0, &[int(200), int(0)]), Err(Error::DecisionOutsideX));
    }

    #[test]
    fn receiver_payoff_with_exit() {
        let g = kidnapping();
        let x = [int(30), int(0)];
        assert_eq!(g.receiver_payoff_v0(1, &x, &int(-1000)).unwrap(), int(-1000));
        assert_eq!(g.receiver_payoff_v0(0, &x, &int(-1000)).unwrap(), int(-30));
        assert!(matches!(
            g.receiver_payoff_v0(0, &x, &int(0)),
            Err(Error::V0TooHigh { .. })
        ));
        assert_eq!(*g.v0_cap(), int(-100));
    }

    #[test]
    fn validation_rejects_bad_games() {
        let g = kidnapping();
        let mut types = g.types().to_vec();
        types[0].prior = int(0);
        assert_eq!(
            GameSpec::new(g.decisions().clone(), types.clone()),
            Err(Error::NonPositivePrior { ty: 0 })
        );
        types[0].prior = ratio(1, 2);
        assert!(matches!(
            GameSpec::new(g.decisions().clone(), types),
            Err(Error::PriorNotNormalized { .. })
        ));
        let mut types = g.types().to_vec();
        types[2].reserve = int(1000);
        assert_eq!(
            GameSpec::new(g.decisions().clone(), types),
            Err(Error::TypeUnacceptable { ty: 2 })
        );
        let half = Polytope::new(2, vec![hs(&[-1, 0], 0)]).unwrap();
        assert_eq!(
            GameSpec::new(half, g.types().to_vec()),
            Err(Error::UnboundedDecisionSet)
        );
    }

    #[test]
    fn private_values_is_derived() {
        assert!(kidnapping().private_values());
    }

    #[test]
    fn posteriors_of_mixed_strategy() {
        let g = kidnapping();
        let sigma = SenderStrategy::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![int(1), int(0), int(0)],
                vec![int(0), int(1), int(0)],
                vec![ratio(1, 3), ratio(2, 3), int(0)],
            ],
        )
        .unwrap();
        let table = posteriors(&g, &sigma).unwrap();
        assert_eq!(table.entries.len(), 2);
        assert_eq!(table.entries[0].belief, vec![ratio(3, 4), int(0), ratio(1, 4)]);
        assert_eq!(table.entries[1].belief, vec![int(0), ratio(3, 5), ratio(2, 5)]);
        assert_eq!(table.average(3), g.prior());
    }

    #[test]
    fn nonrevealing_and_fully_revealing_posteriors() {
        let g = kidnapping();
        let names = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let pooled = SenderStrategy::pure(names.clone(), &[1, 1, 1]).unwrap();
        let table = posteriors(&g, &pooled).unwrap();
        assert_eq!(table.entries.len(), 1);
        assert_eq!(table.entries[0].belief, g.prior());

        let revealing = SenderStrategy::pure(names, &[0, 1, 2]).unwrap();
        let table = posteriors(&g, &revealing).unwrap();
        assert_eq!(table.entries.len(), 3);
        for (k, e) in table.entries.iter().enumerate() {
            assert_eq!(e.support, TypeSet::singleton(k));
            assert_eq!(e.mass, ratio(1, 3));
        }
    }

    #[test]
    fn row_mismatch() {
        let g = kidnapping();
        let sigma = SenderStrategy::pure(vec!["a".into()], &[0, 0]).unwrap();
        assert_eq!(
            posteriors(&g, &sigma),
            Err(Error::RowMismatch { expected: 3, found: 2 })
        );
    }

    #[test]
    fn strategy_rows_must_be_distributions() {
        let bad = SenderStrategy::new(vec!["a".into(), "b".into()], vec![vec![ratio(1, 2), ratio(1, 3)]]);
        assert!(matches!(bad, Err(Error::InvalidStrategy(_))));
    }
}
