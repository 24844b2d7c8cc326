//! Dense two-phase tableau simplex over exact rationals.
//!
//! Columns are laid out as `x_0..x_{n-1}` (free), `s_0..s_{m-1}` (row
//! slacks) and, when phase one needs it, a single artificial column. Free
//! columns are pivoted into the basis before anything else and their rows
//! never take part in a ratio test. Entering and leaving choices follow
//! Bland's smallest-index rule, which rules out cycling.
//!
//! Because the slack columns start as the identity, their reduced costs at
//! termination are the dual multipliers `c_B·B⁻¹` of the original rows.

use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

use super::{AffineFn, LpOutcome, LpStatus, Polytope, Rational};

struct Tableau {
    n: usize,
    m: usize,
    cols: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    artificial: Option<usize>,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn new(poly: &Polytope) -> Self {
        let n = poly.dim();
        let m = poly.rows().len();
        let cols = n + m;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for (i, h) in poly.rows().iter().enumerate() {
            let mut row = vec![Rational::zero(); cols];
            row[..n].clone_from_slice(&h.normal);
            row[n + i] = Rational::one();
            rows.push(row);
            rhs.push(h.rhs.clone());
        }
        Tableau {
            n,
            m,
            cols,
            rows,
            rhs,
            basis: (n..n + m).collect(),
            artificial: None,
        }
    }

    fn is_free(&self, col: usize) -> bool {
        col < self.n
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        if !inv.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
            self.rhs[r] *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.m {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for (v, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Brings every free column it can into the basis. Columns that cannot
    /// enter have no entry in any slack row; they span a lineality direction.
    fn absorb_free(&mut self) -> Vec<usize> {
        let mut stuck = Vec::new();
        for j in 0..self.n {
            let row = (0..self.m).find(|&r| !self.is_free(self.basis[r]) && !self.rows[r][j].is_zero());
            match row {
                Some(r) => self.pivot(r, j),
                None => stuck.push(j),
            }
        }
        stuck
    }

    fn add_artificial(&mut self) {
        let col = self.cols;
        self.cols += 1;
        for r in 0..self.m {
            let v = if self.is_free(self.basis[r]) {
                Rational::zero()
            } else {
                -Rational::one()
            };
            self.rows[r].push(v);
        }
        self.artificial = Some(col);
    }

    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut d: Vec<Rational> = cost.iter().map(|c| -c).collect();
        for r in 0..self.m {
            let cb = &cost[self.basis[r]];
            if cb.is_zero() {
                continue;
            }
            for (dj, t) in d.iter_mut().zip(&self.rows[r]) {
                if !t.is_zero() {
                    *dj += cb * t;
                }
            }
        }
        d
    }

    fn objective(&self, cost: &[Rational]) -> Rational {
        (0..self.m).fold(Rational::zero(), |acc, r| acc + &cost[self.basis[r]] * &self.rhs[r])
    }

    /// Bland-rule primal simplex from a feasible basis. Only sign-constrained
    /// columns may enter; `allow_artificial` controls the artificial column.
    fn run(&mut self, cost: &[Rational], allow_artificial: bool) -> Phase {
        loop {
            let d = self.reduced_costs(cost);
            let mut basic = vec![false; self.cols];
            for &b in &self.basis {
                basic[b] = true;
            }
            let entering = (self.n..self.cols)
                .find(|&j| !basic[j] && (allow_artificial || Some(j) != self.artificial) && d[j].is_negative());
            let Some(c) = entering else {
                return Phase::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.m {
                if self.is_free(self.basis[r]) || !self.rows[r][c].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / &self.rows[r][c];
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, c),
                None => return Phase::Unbounded,
            }
        }
    }

    fn slack_duals(&self, cost: &[Rational]) -> Vec<Rational> {
        let d = self.reduced_costs(cost);
        d[self.n..self.n + self.m].to_vec()
    }

    fn point(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.n];
        for r in 0..self.m {
            if self.basis[r] < self.n {
                x[self.basis[r]] = self.rhs[r].clone();
            }
        }
        x
    }
}

pub(super) fn solve(poly: &Polytope, objective: &AffineFn) -> LpOutcome {
    let mut t = Tableau::new(poly);
    let stuck = t.absorb_free();

    let needs_phase_one = (0..t.m).any(|r| !t.is_free(t.basis[r]) && t.rhs[r].is_negative());
    if needs_phase_one {
        t.add_artificial();
        let art = t.cols - 1;
        let mut start: Option<usize> = None;
        for r in 0..t.m {
            if t.is_free(t.basis[r]) {
                continue;
            }
            if start.is_none_or(|s| t.rhs[r] < t.rhs[s]) {
                start = Some(r);
            }
        }
        t.pivot(start.expect("a slack row is negative"), art);

        let mut cost = vec![Rational::zero(); t.cols];
        cost[art] = -Rational::one();
        // Phase one is bounded above by zero.
        let _ = t.run(&cost, true);
        if t.objective(&cost).is_negative() {
            return LpOutcome {
                status: LpStatus::Infeasible,
                point: None,
                value: None,
                certificate: Some(t.slack_duals(&cost)),
            };
        }
        if let Some(r) = (0..t.m).find(|&r| t.basis[r] == art) {
            let col = (t.n..art).find(|&j| !t.basis.contains(&j) && !t.rows[r][j].is_zero());
            if let Some(c) = col {
                t.pivot(r, c);
            }
        }
    }

    let mut cost = vec![Rational::zero(); t.cols];
    cost[..t.n].clone_from_slice(&objective.coeffs);
    let unbounded = match t.run(&cost, false) {
        Phase::Unbounded => true,
        Phase::Optimal => {
            let d = t.reduced_costs(&cost);
            stuck.iter().any(|&j| !d[j].is_zero())
        }
    };
    if unbounded {
        return LpOutcome {
            status: LpStatus::Unbounded,
            point: None,
            value: None,
            certificate: None,
        };
    }
    let x = t.point();
    let value = objective.eval(&x);
    LpOutcome {
        status: LpStatus::Optimal,
        point: Some(x),
        value: Some(value),
        certificate: Some(t.slack_duals(&cost)),
    }
}
