#![allow(dead_code)]

pub mod oracle;

use proptest::prelude::*;
use vetotalk_core::lp::{int, ratio};
use vetotalk_core::{AffineFn, GameSpec, Halfspace, Polytope, Rational, TypeData};

pub fn q(num: i64, den: i64) -> Rational {
    ratio(num, den)
}

pub fn pt(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

pub fn lin(c: &[i64]) -> AffineFn {
    AffineFn::linear(pt(c))
}

pub fn hs(normal: &[i64], rhs: i64) -> Halfspace {
    Halfspace::new(pt(normal), int(rhs))
}

pub fn ty(name: &str, prior: Rational, reserve: i64, u: AffineFn, v: AffineFn) -> TypeData {
    TypeData {
        name: name.into(),
        prior,
        reserve: int(reserve),
        sender: u,
        receiver: v,
    }
}

/// `x_a, x_b ≥ 0`, `x_a + x_b ≤ 100`.
pub fn triangle() -> Polytope {
    Polytope::new(2, vec![hs(&[-1, 0], 0), hs(&[0, -1], 0), hs(&[1, 1], 100)]).unwrap()
}

/// Three kidnapper types with a common receiver payoff `-(x_a + x_b)`.
pub fn kidnapping() -> GameSpec {
    kidnapping_with([lin(&[-1, -1]), lin(&[-1, -1]), lin(&[-1, -1])])
}

/// Same sender side, receiver payoffs `x_a/3`, `x_b/3`, `-(x_a + x_b)`.
pub fn kidnapping_mixed() -> GameSpec {
    let third = |c: [i64; 2]| AffineFn::linear(vec![q(c[0], 3), q(c[1], 3)]);
    kidnapping_with([third([1, 0]), third([0, 1]), lin(&[-1, -1])])
}

pub fn kidnapping_with(v: [AffineFn; 3]) -> GameSpec {
    let [v1, v2, v3] = v;
    GameSpec::new(
        triangle(),
        vec![
            ty("1", q(1, 3), 30, lin(&[1, -1]), v1),
            ty("2", q(1, 3), 40, lin(&[-1, 1]), v2),
            ty("3", q(1, 3), 20, lin(&[1, 2]), v3),
        ],
    )
    .unwrap()
}

/// The probability simplex over three pure actions.
pub fn simplex3() -> Polytope {
    Polytope::new(
        3,
        vec![
            hs(&[-1, 0, 0], 0),
            hs(&[0, -1, 0], 0),
            hs(&[0, 0, -1], 0),
            hs(&[1, 1, 1], 1),
            hs(&[-1, -1, -1], -1),
        ],
    )
    .unwrap()
}

/// Cyclic three-type game in which no equilibrium exists but a mediator works.
pub fn cyclic() -> GameSpec {
    GameSpec::new(
        simplex3(),
        vec![
            ty("1", q(1, 3), 0, lin(&[0, -2, 1]), lin(&[2, 0, 1])),
            ty("2", q(1, 3), 0, lin(&[1, 0, -2]), lin(&[1, 2, 0])),
            ty("3", q(1, 3), 0, lin(&[-2, 1, 0]), lin(&[0, 1, 2])),
        ],
    )
    .unwrap()
}

/// Private-values game where type 3 envies 2 and 2 envies 1, nothing else.
pub fn envy_chain() -> GameSpec {
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
    GameSpec::new(
        x,
        vec![
            ty("1", q(1, 3), -1, lin(&[-1, -1]), lin(&[1, 0])),
            ty("2", q(1, 3), -2, lin(&[-1, -1]), lin(&[1, 0])),
            ty("3", q(1, 3), 0, lin(&[1, -2]), lin(&[1, 0])),
        ],
    )
    .unwrap()
}

pub fn single_type() -> GameSpec {
    GameSpec::new(triangle(), vec![ty("only", int(1), 20, lin(&[1, 2]), lin(&[-1, -1]))]).unwrap()
}

// ---- random games ----------------------------------------------------------

/// Raw material for a random game; turned into a [`GameSpec`] by [`build`].
#[derive(Debug, Clone)]
pub struct RawGame {
    pub dim: usize,
    pub bounds: Vec<i64>,
    /// Optional cut `Σ x ≤ cap`.
    pub cap: Option<i64>,
    pub weights: Vec<i64>,
    pub senders: Vec<Vec<i64>>,
    /// Point of the box each type is guaranteed to accept, and slack below it.
    pub anchors: Vec<Vec<i64>>,
    pub slack: Vec<i64>,
    pub receivers: Vec<Vec<i64>>,
    pub private_values: bool,
}

pub fn build(raw: &RawGame) -> GameSpec {
    let d = raw.dim;
    let mut rows = Vec::new();
    for i in 0..d {
        let mut e = vec![0; d];
        e[i] = -1;
        rows.push(hs(&e, 0));
        e[i] = 1;
        rows.push(hs(&e, raw.bounds[i]));
    }
    if let Some(c) = raw.cap {
        rows.push(hs(&vec![1; d], c));
    }
    let x = Polytope::new(d, rows).unwrap();
    let total: i64 = raw.weights.iter().sum();
    let types = (0..raw.weights.len())
        .map(|k| {
            let u = lin(&raw.senders[k]);
            // clamp the anchor into X: scale down until it meets the cut
            let mut anchor: Vec<i64> = raw.anchors[k]
                .iter()
                .zip(&raw.bounds)
                .map(|(a, b)| a % (b + 1))
                .collect();
            if let Some(c) = raw.cap {
                while anchor.iter().sum::<i64>() > c {
                    let i = anchor.iter().position(|&a| a > 0).unwrap();
                    anchor[i] -= 1;
                }
            }
            let reserve = u.eval(&pt(&anchor)) - int(raw.slack[k]);
            let v = if raw.private_values {
                &raw.receivers[0]
            } else {
                &raw.receivers[k]
            };
            TypeData {
                name: format!("{}", k + 1),
                prior: q(raw.weights[k], total),
                reserve,
                sender: u,
                receiver: lin(v),
            }
        })
        .collect();
    GameSpec::new(x, types).unwrap()
}

pub fn raw_game(
    types: std::ops::RangeInclusive<usize>,
    dims: std::ops::RangeInclusive<usize>,
    private: bool,
) -> impl Strategy<Value = RawGame> {
    (types, dims).prop_flat_map(move |(n, d)| {
        (
            prop::collection::vec(1i64..=6, d),
            prop::option::of(2i64..=8),
            prop::collection::vec(1i64..=5, n),
            prop::collection::vec(prop::collection::vec(-3i64..=3, d), n),
            prop::collection::vec(prop::collection::vec(0i64..=6, d), n),
            prop::collection::vec(0i64..=2, n),
            prop::collection::vec(prop::collection::vec(-3i64..=3, d), n),
        )
            .prop_map(
                move |(bounds, cap, weights, senders, anchors, slack, receivers)| RawGame {
                    dim: d,
                    bounds,
                    cap,
                    weights,
                    senders,
                    anchors,
                    slack,
                    receivers,
                    private_values: private,
                },
            )
    })
}

/// Random kidnapping-style game: same decision set and sender side up to
/// perturbed reserves, random type-dependent receiver payoffs.
pub fn kidnapping_family() -> impl Strategy<Value = GameSpec> {
    (
        prop::collection::vec(1i64..=4, 3),
        25i64..=35,
        35i64..=45,
        10i64..=30,
        prop::collection::vec(prop::collection::vec(-4i64..=4, 2), 3),
    )
        .prop_map(|(w, r1, r2, r3, vs)| {
            let total: i64 = w.iter().sum();
            GameSpec::new(
                triangle(),
                vec![
                    ty("1", q(w[0], total), r1, lin(&[1, -1]), lin(&vs[0])),
                    ty("2", q(w[1], total), r2, lin(&[-1, 1]), lin(&vs[1])),
                    ty("3", q(w[2], total), r3, lin(&[1, 2]), lin(&vs[2])),
                ],
            )
            .unwrap()
        })
}

/// Random mixed sender strategy with `messages` messages for `types` types.
pub fn random_sigma(types: usize, messages: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(prop::collection::vec(0i64..=4, messages), types).prop_map(|rows| {
        rows.into_iter()
            .map(|mut r| {
                if r.iter().all(|&v| v == 0) {
                    r[0] = 1;
                }
                let s: i64 = r.iter().sum();
                r.into_iter().map(|v| q(v, s)).collect()
            })
            .collect()
    })
}
