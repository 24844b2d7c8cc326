//! Exact rational linear programming over polytopes `{x : A·x ≤ b}`.
//!
//! All three entry points ([`feasible`], [`maximize`], [`lex_maximize`]) run
//! the same two-phase simplex (see [`simplex`]). Free variables are pivoted
//! into the basis first and never leave it, so an optimal answer is always a
//! vertex of the polytope whenever the polytope has one.

mod simplex;

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for the rational `num/den`. Panics if `den` is zero.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer-valued rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// `coeffs·x + constant`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineFn {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
}

impl AffineFn {
    pub fn new(coeffs: Vec<Rational>, constant: Rational) -> Self {
        AffineFn { coeffs, constant }
    }

    pub fn zero(dim: usize) -> Self {
        AffineFn::new(alloc::vec![Rational::zero(); dim], Rational::zero())
    }

    pub fn linear(coeffs: Vec<Rational>) -> Self {
        AffineFn::new(coeffs, Rational::zero())
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        debug_assert_eq!(x.len(), self.coeffs.len());
        dot(&self.coeffs, x) + &self.constant
    }

    pub fn scaled(&self, factor: &Rational) -> AffineFn {
        AffineFn::new(
            self.coeffs.iter().map(|c| c * factor).collect(),
            &self.constant * factor,
        )
    }

    pub fn add_scaled(&mut self, other: &AffineFn, factor: &Rational) {
        debug_assert_eq!(self.dim(), other.dim());
        for (c, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c += o * factor;
        }
        self.constant += &other.constant * factor;
    }

    pub fn neg(&self) -> AffineFn {
        AffineFn::new(self.coeffs.iter().map(|c| -c).collect(), -&self.constant)
    }

    /// `Σ weights[i] · fns[i]` over the given index set.
    pub fn combination<'a>(dim: usize, terms: impl IntoIterator<Item = (&'a Rational, &'a AffineFn)>) -> AffineFn {
        let mut acc = AffineFn::zero(dim);
        for (w, f) in terms {
            acc.add_scaled(f, w);
        }
        acc
    }

    /// Half-space `{x : self(x) ≥ level}`.
    pub fn at_least(&self, level: &Rational) -> Halfspace {
        Halfspace::new(self.coeffs.iter().map(|c| -c).collect(), &self.constant - level)
    }

    /// Half-space `{x : self(x) ≤ level}`.
    pub fn at_most(&self, level: &Rational) -> Halfspace {
        Halfspace::new(self.coeffs.clone(), level - &self.constant)
    }

    /// The same function on a larger space `R^total`, acting on the
    /// coordinates `offset..offset + dim`.
    pub fn embed(&self, offset: usize, total: usize) -> AffineFn {
        let mut coeffs = alloc::vec![Rational::zero(); total];
        coeffs[offset..offset + self.dim()].clone_from_slice(&self.coeffs);
        AffineFn::new(coeffs, self.constant.clone())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// `normal·x ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<Rational>,
    pub rhs: Rational,
}

impl Halfspace {
    pub fn new(normal: Vec<Rational>, rhs: Rational) -> Self {
        Halfspace { normal, rhs }
    }

    pub fn slack(&self, x: &[Rational]) -> Rational {
        &self.rhs - dot(&self.normal, x)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn embed(&self, offset: usize, total: usize) -> Halfspace {
        let mut normal = alloc::vec![Rational::zero(); total];
        normal[offset..offset + self.normal.len()].clone_from_slice(&self.normal);
        Halfspace::new(normal, self.rhs.clone())
    }
}

/// Finite intersection of half-spaces in `R^dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    rows: Vec<Halfspace>,
}

impl Polytope {
    pub fn new(dim: usize, rows: Vec<Halfspace>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.normal.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.normal.len(),
            });
        }
        Ok(Polytope { dim, rows })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Halfspace] {
        &self.rows
    }

    pub fn push(&mut self, row: Halfspace) -> Result<()> {
        if row.normal.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: row.normal.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    /// Adds `f(x) = level` as two opposing inequalities.
    pub fn push_equality(&mut self, f: &AffineFn, level: &Rational) -> Result<()> {
        self.push(f.at_least(level))?;
        self.push(f.at_most(level))
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.rows.iter().all(|r| r.contains(x))
    }

    /// The polytope lifted into `R^total` on coordinates `offset..offset+dim`.
    pub fn embed(&self, offset: usize, total: usize) -> Polytope {
        Polytope {
            dim: total,
            rows: self.rows.iter().map(|r| r.embed(offset, total)).collect(),
        }
    }

    /// Cartesian product `self × other` in `R^{dim + other.dim}`.
    pub fn product(&self, other: &Polytope) -> Polytope {
        let total = self.dim + other.dim;
        let mut rows = self.embed(0, total).rows;
        rows.extend(other.embed(self.dim, total).rows);
        Polytope { dim: total, rows }
    }

    fn check_dim(&self, f: &AffineFn) -> Result<()> {
        if f.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: f.dim(),
            });
        }
        Ok(())
    }

    /// Returns true when every coordinate is bounded above and below on a
    /// nonempty polytope. Empty polytopes report false.
    pub fn is_bounded_nonempty(&self) -> Result<bool> {
        for i in 0..self.dim {
            for sign in [1, -1] {
                let mut c = alloc::vec![Rational::zero(); self.dim];
                c[i] = int(sign);
                let out = maximize(&AffineFn::linear(c), self)?;
                if out.status != LpStatus::Optimal {
                    return Ok(false);
                }
            }
        }
        if self.dim == 0 {
            return Ok(feasible(self)?.status == LpStatus::Optimal);
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Infeasible,
    Optimal,
    Unbounded,
}

/// Result of a linear program.
///
/// `certificate` holds one multiplier per polytope row. For an optimal
/// outcome it is a dual solution `y ≥ 0` with `Aᵀy = c` and
/// `b·y + constant = value`; for an infeasible outcome it is a Farkas
/// witness `y ≥ 0` with `Aᵀy = 0` and `b·y < 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub point: Option<Vec<Rational>>,
    pub value: Option<Rational>,
    pub certificate: Option<Vec<Rational>>,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Re-checks the outcome against `objective` over `poly` with exact
    /// arithmetic. Unbounded outcomes carry nothing to check and return false.
    pub fn certify(&self, objective: &AffineFn, poly: &Polytope) -> bool {
        let rows = poly.rows();
        let Some(y) = &self.certificate else {
            return false;
        };
        if y.len() != rows.len() || y.iter().any(Signed::is_negative) {
            return false;
        }
        let combined = |j: usize| -> Rational {
            rows.iter()
                .zip(y)
                .fold(Rational::zero(), |acc, (r, yi)| acc + &r.normal[j] * yi)
        };
        let by = rows
            .iter()
            .zip(y)
            .fold(Rational::zero(), |acc, (r, yi)| acc + &r.rhs * yi);
        match self.status {
            LpStatus::Infeasible => (0..poly.dim()).all(|j| combined(j).is_zero()) && by.is_negative(),
            LpStatus::Optimal => {
                let (Some(x), Some(v)) = (&self.point, &self.value) else {
                    return false;
                };
                let slackness = rows.iter().zip(y).all(|(r, yi)| yi.is_zero() || r.slack(x).is_zero());
                poly.contains(x)
                    && objective.eval(x) == *v
                    && (0..poly.dim()).all(|j| combined(j) == objective.coeffs[j])
                    && by + &objective.constant == *v
                    && slackness
            }
            LpStatus::Unbounded => false,
        }
    }
}

/// Finds some point of `poly`, or a Farkas certificate of emptiness.
pub fn feasible(poly: &Polytope) -> Result<LpOutcome> {
    maximize(&AffineFn::zero(poly.dim()), poly)
}

/// Maximizes `objective` over `poly`; an optimal point is a basic feasible
/// solution chosen by Bland's rule.
pub fn maximize(objective: &AffineFn, poly: &Polytope) -> Result<LpOutcome> {
    poly.check_dim(objective)?;
    Ok(simplex::solve(poly, objective))
}

/// Maximizes `secondary` over the face of `poly` on which `primary` attains
/// its maximum. The face is encoded by appending `primary(x) = max` as two
/// inequalities; the certificate therefore has two extra entries.
pub fn lex_maximize(primary: &AffineFn, secondary: &AffineFn, poly: &Polytope) -> Result<LpOutcome> {
    poly.check_dim(primary)?;
    poly.check_dim(secondary)?;
    let first = simplex::solve(poly, primary);
    let Some(best) = first.value.clone() else {
        return Ok(first);
    };
    let mut face = poly.clone();
    face.push_equality(primary, &best)?;
    Ok(simplex::solve(&face, secondary))
}

/// `[min, max]` of `f` over the face of `poly` maximizing `primary`, with the
/// attaining points (min point first). `None` if `poly` is empty.
pub fn face_range(primary: &AffineFn, f: &AffineFn, poly: &Polytope) -> Result<Option<FaceRange>> {
    let hi = lex_maximize(primary, f, poly)?;
    if !hi.is_optimal() {
        return Ok(None);
    }
    let lo = lex_maximize(primary, &f.neg(), poly)?;
    let (Some(hi_pt), Some(lo_pt)) = (hi.point, lo.point) else {
        return Ok(None);
    };
    Ok(Some(FaceRange {
        min: f.eval(&lo_pt),
        max: f.eval(&hi_pt),
        argmin: lo_pt,
        argmax: hi_pt,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceRange {
    pub min: Rational,
    pub max: Rational,
    pub argmin: Vec<Rational>,
    pub argmax: Vec<Rational>,
}
