//! Brute-force references that share no code with the library's solvers.
//!
//! Vertices come from solving every square subsystem of the row set by
//! Gaussian elimination; LP optima are maxima over those vertices. Set
//! partitions come from canonicalized assignment vectors.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use vetotalk_core::{AffineFn, GameSpec, Polytope, Rational, TypeSet};

fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = b.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (v, pv) in m[r].iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// All vertices of a bounded polytope, sorted and deduplicated.
pub fn vertices(p: &Polytope) -> Vec<Vec<Rational>> {
    let rows = p.rows();
    let d = p.dim();
    let mut found = BTreeSet::new();
    for combo in combinations(rows.len(), d) {
        let a: Vec<Vec<Rational>> = combo.iter().map(|&i| rows[i].normal.clone()).collect();
        let b: Vec<Rational> = combo.iter().map(|&i| rows[i].rhs.clone()).collect();
        if let Some(x) = solve_square(&a, &b) {
            let inside = rows.iter().all(|r| {
                let lhs = r.normal.iter().zip(&x).fold(Rational::zero(), |s, (c, v)| s + c * v);
                !(&r.rhs - lhs).is_negative()
            });
            if inside {
                found.insert(x);
            }
        }
    }
    found.into_iter().collect()
}

/// Maximum of `f` over the vertices, with every maximizing vertex.
pub fn maximize(f: &AffineFn, p: &Polytope) -> Option<(Rational, Vec<Vec<Rational>>)> {
    let vs = vertices(p);
    let best = vs.iter().map(|v| f.eval(v)).max()?;
    let arg = vs.into_iter().filter(|v| f.eval(v) == best).collect();
    Some((best, arg))
}

pub fn acceptable(game: &GameSpec, set: TypeSet) -> bool {
    !vertices(&game.acceptance_polytope(set)).is_empty()
}

/// Every partition of `0..n` as a list of blocks, each block a sorted list.
pub fn partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut seen = BTreeSet::new();
    let total = n.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); n];
        for k in 0..n {
            blocks[c % n].push(k);
            c /= n;
        }
        let mut canon: Vec<Vec<usize>> = blocks.into_iter().filter(|b| !b.is_empty()).collect();
        canon.sort();
        seen.insert(canon);
    }
    if n == 0 {
        seen.insert(Vec::new());
    }
    seen.into_iter().collect()
}

/// Outcome of brute-forcing one partition.
pub struct PartitionVerdict {
    /// Receiver ex-ante value if some vertex selection is an equilibrium.
    pub value: Option<Rational>,
    /// Every cell has a unique optimal vertex.
    pub unique: bool,
}

/// Whether revealing `blocks` is an equilibrium for some choice of optimal
/// vertices, tried exhaustively.
pub fn partition_verdict(game: &GameSpec, blocks: &[Vec<usize>]) -> PartitionVerdict {
    let prior = game.prior();
    let mut choices = Vec::new();
    let mut unique = true;
    let mut value = Rational::zero();
    for b in blocks {
        let mass = b.iter().fold(Rational::zero(), |s, &k| s + &prior[k]);
        let mut obj = AffineFn::zero(game.dim());
        for &k in b {
            obj.add_scaled(&game.ty(k).receiver, &(&prior[k] / &mass));
        }
        let set: TypeSet = b.iter().copied().collect();
        let Some((best, arg)) = maximize(&obj, &game.acceptance_polytope(set)) else {
            return PartitionVerdict {
                value: None,
                unique: true,
            };
        };
        unique &= arg.len() == 1;
        value += &mass * best;
        choices.push(arg);
    }
    let mut idx = vec![0usize; blocks.len()];
    loop {
        let xs: Vec<&Vec<Rational>> = idx.iter().zip(&choices).map(|(&i, c)| &c[i]).collect();
        let ic = blocks.iter().enumerate().all(|(i, b)| {
            b.iter().all(|&k| {
                let u = &game.ty(k).sender;
                let own = u.eval(xs[i]);
                xs.iter().all(|x| u.eval(x) <= own)
            })
        });
        if ic {
            return PartitionVerdict {
                value: Some(value),
                unique,
            };
        }
        // next combination
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return PartitionVerdict { value: None, unique };
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}
