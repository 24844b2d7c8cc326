//! Partially revealing equilibrium for three types whose maximal acceptable
//! sets are two pairs sharing a pivot type.
//!
//! Write `A` and `B` for the two other types (`A` the smaller index). The
//! non-pivot types reveal which pair they belong to and the pivot splits
//! between the two messages. Posteriors move along two segments:
//!
//! - `q_t = t·δ_A + (1−t)·p₋B`, on the `{pivot, A}` edge of the simplex;
//! - `q'_t`, the point on the `{pivot, B}` edge with `p` on the chord
//!   between `q_t` and `q'_t`.
//!
//! For each posterior the receiver is indifferent over a face of optimal
//! decisions; `F(t)` is the interval of pivot payoff differences between the
//! two faces. When neither pure partition works, `F(0) < 0 < F(1)` and the
//! search brackets a `t` with `0 ∈ F(t)`. `F` only moves where an optimal
//! face changes, so every step first tries the exact parameter at which the
//! optimal vertices at the two bracket ends tie, then the midpoint.

use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

use super::{finish, optimal_face, partition_profile, receiver_map, select_on_faces, Equilibrium, Provenance};
use crate::error::{Error, Result};
use crate::lp::{self, LpStatus, Polytope, Rational};
use crate::model::{GameSpec, SenderStrategy};
use crate::participation::{participation_structure, Classification};
use crate::types::TypeSet;

const BUDGET: usize = 128;

/// How the equilibrium was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedTrace {
    pub pivot: usize,
    /// The parameter solving `0 ∈ F(t)`; `None` when a pure partition worked.
    pub t: Option<Rational>,
    /// `(q_t, q'_t)` at the solution.
    pub posteriors: Option<(Vec<Rational>, Vec<Rational>)>,
    /// Number of `F(t)` evaluations inside the bracket.
    pub evaluations: usize,
}

/// Pivot payoff range over one optimal face.
struct Side {
    face: Polytope,
    min: Rational,
    max: Rational,
    vertex: Vec<Rational>,
}

fn side(game: &GameSpec, belief: &[Rational], pivot: usize) -> Result<Side> {
    let face = optimal_face(game, belief)?
        .ok_or_else(|| Error::Internal("posterior support has no acceptable decision".into()))?;
    let u = &game.ty(pivot).sender;
    let hi = lp::maximize(u, &face)?;
    let lo = lp::maximize(&u.neg(), &face)?;
    match (hi.status, lo.status) {
        (LpStatus::Optimal, LpStatus::Optimal) => Ok(Side {
            face,
            max: hi.value.expect("optimal"),
            min: -lo.value.expect("optimal"),
            vertex: hi.point.expect("optimal"),
        }),
        _ => Err(Error::Internal("optimal face lost feasibility".into())),
    }
}

struct Segments {
    pivot: usize,
    a: usize,
    prior: Vec<Rational>,
    /// `p₋B`, the `q` segment at `t = 0`.
    q0: Vec<Rational>,
    /// `δ_A − p₋B`.
    dq: Vec<Rational>,
}

impl Segments {
    fn q(&self, t: &Rational) -> Vec<Rational> {
        self.q0.iter().zip(&self.dq).map(|(a, d)| a + t * d).collect()
    }

    /// Unnormalized `q'_t`: `p·q_t^A − p^A·q_t`, affine in `t` and a positive
    /// multiple of `q'_t`.
    fn w(&self, t: &Rational) -> Vec<Rational> {
        let q = self.q(t);
        let qa = q[self.a].clone();
        self.prior
            .iter()
            .zip(&q)
            .map(|(p, qk)| p * &qa - &self.prior[self.a] * qk)
            .collect()
    }

    fn q_prime(&self, t: &Rational) -> Vec<Rational> {
        let w = self.w(t);
        let mass = w.iter().fold(Rational::zero(), |s, v| s + v);
        w.iter().map(|v| v / &mass).collect()
    }

    /// Share of the `q` message in the prior, `p^A / q_t^A`.
    fn lambda(&self, t: &Rational) -> Rational {
        &self.prior[self.a] / &self.q(t)[self.a]
    }
}

/// Root in `t` of `Σ_k f_k(t)·(V^k(v1) − V^k(v2))` for affine weights
/// `f(t) = f(0) + t·(f(1) − f(0))`.
fn tie_point(game: &GameSpec, f0: &[Rational], f1: &[Rational], v1: &[Rational], v2: &[Rational]) -> Option<Rational> {
    if v1 == v2 {
        return None;
    }
    let mut c0 = Rational::zero();
    let mut c1 = Rational::zero();
    for k in 0..game.type_count() {
        let v = &game.ty(k).receiver;
        let d = v.eval(v1) - v.eval(v2);
        c0 += &f0[k] * &d;
        c1 += (&f1[k] - &f0[k]) * &d;
    }
    if c1.is_zero() {
        return None;
    }
    Some(-c0 / c1)
}

struct Eval {
    q: Side,
    qp: Side,
}

impl Eval {
    fn f_min(&self) -> Rational {
        &self.q.min - &self.qp.max
    }
    fn f_max(&self) -> Rational {
        &self.q.max - &self.qp.min
    }
}

pub fn mixed_three(game: &GameSpec) -> Result<Equilibrium> {
    mixed_three_traced(game).map(|(eq, _)| eq)
}

/// [`mixed_three`] together with a record of the search.
pub fn mixed_three_traced(game: &GameSpec) -> Result<(Equilibrium, MixedTrace)> {
    if game.type_count() != 3 {
        return Err(Error::WrongClassification);
    }
    let Classification::Chain3 { pivot } = participation_structure(game)?.classification else {
        return Err(Error::WrongClassification);
    };
    let others: Vec<usize> = (0..3).filter(|&k| k != pivot).collect();
    let (a, b) = (others[0], others[1]);

    // pure partitions first: {{A},{pivot,B}} then {{B},{pivot,A}}
    for (alone, pair) in [(a, b), (b, a)] {
        let cells = [TypeSet::singleton(alone), TypeSet::singleton(pivot).with(pair)];
        let names = cells.iter().map(|c| game.set_label(*c)).collect();
        let mut assignment = vec![1usize; 3];
        assignment[alone] = 0;
        let mut sigma = SenderStrategy::pure(names, &assignment)?;
        sigma = pad(game, sigma);
        if let Some(props) = select_on_faces(game, &sigma)? {
            let (sigma, tau) = partition_profile(game, &cells, props[..2].to_vec())?;
            let eq = finish(game, Provenance::PosteriorSplitting, sigma, tau, Some(pivot))?;
            let trace = MixedTrace {
                pivot,
                t: None,
                posteriors: None,
                evaluations: 0,
            };
            return Ok((eq, trace));
        }
    }

    let prior = game.prior();
    let cond = |pair: TypeSet| super::conditional_prior(game, pair);
    let q0 = cond(TypeSet::singleton(pivot).with(a));
    let mut delta_a = vec![Rational::zero(); 3];
    delta_a[a] = Rational::one();
    let dq = delta_a.iter().zip(&q0).map(|(d, q)| d - q).collect();
    let seg = Segments {
        pivot,
        a,
        prior,
        q0,
        dq,
    };

    let evaluate = |t: &Rational| -> Result<Eval> {
        Ok(Eval {
            q: side(game, &seg.q(t), seg.pivot)?,
            qp: side(game, &seg.q_prime(t), seg.pivot)?,
        })
    };
    let mut lo = Rational::zero();
    let mut hi = Rational::one();
    let mut at_lo = evaluate(&lo)?;
    let mut at_hi = evaluate(&hi)?;
    if !(at_lo.f_max().is_negative() && at_hi.f_min().is_positive()) {
        return Err(Error::Internal(
            "pure partitions failed but F does not change sign".into(),
        ));
    }

    let mut evaluations = 0usize;
    let w0 = seg.w(&Rational::zero());
    let w1 = seg.w(&Rational::one());
    let q1 = seg.q(&Rational::one());
    for _ in 0..BUDGET {
        // exact tie points first, then the midpoint of whatever bracket is left
        let mut steps: Vec<Option<Rational>> = Vec::with_capacity(3);
        steps.extend(tie_point(game, &seg.q0, &q1, &at_lo.q.vertex, &at_hi.q.vertex).map(Some));
        steps.extend(tie_point(game, &w0, &w1, &at_lo.qp.vertex, &at_hi.qp.vertex).map(Some));
        steps.push(None);
        for step in steps {
            let t = step.unwrap_or_else(|| (&lo + &hi) / Rational::from_integer(2.into()));
            if !(t > lo && t < hi) {
                continue;
            }
            evaluations += 1;
            let e = evaluate(&t)?;
            if e.f_max().is_negative() {
                lo = t;
                at_lo = e;
            } else if e.f_min().is_positive() {
                hi = t;
                at_hi = e;
            } else {
                let eq = split(game, &seg, &t, &e)?;
                let trace = MixedTrace {
                    pivot,
                    posteriors: Some((seg.q(&t), seg.q_prime(&t))),
                    t: Some(t),
                    evaluations,
                };
                return Ok((eq, trace));
            }
        }
    }
    Err(Error::BisectionBudgetExceeded { lo, hi })
}

fn pad(game: &GameSpec, sigma: SenderStrategy) -> SenderStrategy {
    let mut names = sigma.messages().to_vec();
    let mut rows = sigma.rows().to_vec();
    while names.len() < game.type_count() {
        names.push(alloc::format!("idle-{}", names.len() - 1));
        for r in &mut rows {
            r.push(Rational::zero());
        }
    }
    SenderStrategy::new(names, rows).expect("padding keeps rows stochastic")
}

/// Builds the profile at a parameter where the two faces admit decisions the
/// pivot is indifferent between.
fn split(game: &GameSpec, seg: &Segments, t: &Rational, e: &Eval) -> Result<Equilibrium> {
    let n = game.dim();
    let mut joint = e.q.face.product(&e.qp.face);
    for row in super::indifference(&game.ty(seg.pivot).sender, n) {
        joint.push(row)?;
    }
    let out = lp::feasible(&joint)?;
    let point = match (out.status, out.point) {
        (LpStatus::Optimal, Some(p)) => p,
        _ => return Err(Error::Internal("pivot indifference infeasible inside F(t)".into())),
    };
    let (x, y) = (point[..n].to_vec(), point[n..].to_vec());

    let q = seg.q(t);
    let qp = seg.q_prime(t);
    let lambda = seg.lambda(t);
    let rows: Vec<Vec<Rational>> = (0..3)
        .map(|k| {
            let s = &lambda * &q[k] / &seg.prior[k];
            vec![s.clone(), Rational::one() - s, Rational::zero()]
        })
        .collect();
    let support = |b: &[Rational]| -> TypeSet { (0..3).filter(|&k| !b[k].is_zero()).collect() };
    let names = vec![
        game.set_label(support(&q)),
        game.set_label(support(&qp)),
        alloc::string::String::from("idle-1"),
    ];
    let sigma = SenderStrategy::new(names.clone(), rows)?;
    let tau = receiver_map(names, vec![x.clone(), y, x]);
    finish(game, Provenance::PosteriorSplitting, sigma, tau, Some(seg.pivot))
}
