//! Dense two-phase simplex over an abstract scalar field.
//!
//! The same tableau code runs on exact rationals (Bland's rule, no
//! tolerances) and on `f64` (Dantzig's rule with a Bland fallback once the
//! method stalls on degenerate pivots, comparisons against
//! [`F64_TOLERANCE`]). Problems are small and dense; nothing here is meant
//! for large sparse models.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{to_f64, Rational};

/// Zero threshold for floating-point pivoting.
pub const F64_TOLERANCE: f64 = 1e-11;

const MAX_PIVOTS: usize = 200_000;
const DEGENERATE_STALL: usize = 64;

pub trait Scalar: Clone + Debug + Send + Sync + 'static {
    /// Exact fields pivot with Bland's rule throughout.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;
    /// Total order used for ratio tests (no tolerance).
    fn compare(&self, other: &Self) -> Ordering;
    fn to_f64(&self) -> f64;

    /// `self - factor * other`
    fn sub_mul(&self, factor: &Self, other: &Self) -> Self {
        self.sub(&factor.mul(other))
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn compare(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn to_f64(&self) -> f64 {
        to_f64(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        self.abs() <= F64_TOLERANCE
    }
    fn is_positive(&self) -> bool {
        *self > F64_TOLERANCE
    }
    fn is_negative(&self) -> bool {
        *self < -F64_TOLERANCE
    }
    fn compare(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    NonNegative,
    Free,
}

#[derive(Debug, Clone)]
struct Constraint<S> {
    coefficients: Vec<S>,
    relation: Relation,
    rhs: S,
}

/// A linear program `opt c·x` subject to row constraints, with each
/// variable either nonnegative or free.
#[derive(Debug, Clone)]
pub struct LinearProgram<S> {
    sense: Sense,
    objective: Vec<S>,
    bounds: Vec<Bound>,
    constraints: Vec<Constraint<S>>,
}

#[derive(Debug, Clone)]
pub struct LpSolution<S> {
    pub objective: S,
    pub x: Vec<S>,
    pub pivots: usize,
}

#[derive(Debug, Clone)]
pub enum LpOutcome<S> {
    Optimal(LpSolution<S>),
    Infeasible,
    Unbounded,
}

impl<S> LpOutcome<S> {
    pub fn optimal(self) -> Result<LpSolution<S>> {
        match self {
            LpOutcome::Optimal(s) => Ok(s),
            LpOutcome::Infeasible => Err(Error::Lp("infeasible".into())),
            LpOutcome::Unbounded => Err(Error::Lp("unbounded".into())),
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

impl<S: Scalar> LinearProgram<S> {
    pub fn new(sense: Sense, objective: Vec<S>) -> Self {
        let n = objective.len();
        Self {
            sense,
            objective,
            bounds: vec![Bound::NonNegative; n],
            constraints: Vec::new(),
        }
    }

    /// Pure feasibility problem in `n` nonnegative variables.
    pub fn feasibility(n: usize) -> Self {
        Self::new(Sense::Minimize, vec![S::zero(); n])
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.bounds[var] = Bound::Free;
        self
    }

    pub fn add_constraint(&mut self, coefficients: Vec<S>, relation: Relation, rhs: S) -> &mut Self {
        assert_eq!(coefficients.len(), self.num_vars(), "constraint width");
        self.constraints.push(Constraint {
            coefficients,
            relation,
            rhs,
        });
        self
    }

    pub fn le(&mut self, coefficients: Vec<S>, rhs: S) -> &mut Self {
        self.add_constraint(coefficients, Relation::Le, rhs)
    }

    pub fn ge(&mut self, coefficients: Vec<S>, rhs: S) -> &mut Self {
        self.add_constraint(coefficients, Relation::Ge, rhs)
    }

    pub fn eq(&mut self, coefficients: Vec<S>, rhs: S) -> &mut Self {
        self.add_constraint(coefficients, Relation::Eq, rhs)
    }

    pub fn solve(&self) -> Result<LpOutcome<S>> {
        Tableau::build(self).run(self)
    }
}

/// Standard-form tableau: minimize `cost·x` with `rows·x = rhs`, `x >= 0`.
struct Tableau<S> {
    rows: Vec<Vec<S>>,
    rhs: Vec<S>,
    basis: Vec<usize>,
    /// first artificial column; artificials occupy [artificial_start, width)
    artificial_start: usize,
    width: usize,
    /// user variable -> (positive column, optional negative column)
    var_columns: Vec<(usize, Option<usize>)>,
    pivots: usize,
}

impl<S: Scalar> Tableau<S> {
    fn build(lp: &LinearProgram<S>) -> Self {
        let mut var_columns = Vec::with_capacity(lp.num_vars());
        let mut next = 0;
        for bound in &lp.bounds {
            match bound {
                Bound::NonNegative => {
                    var_columns.push((next, None));
                    next += 1;
                }
                Bound::Free => {
                    var_columns.push((next, Some(next + 1)));
                    next += 2;
                }
            }
        }
        let structural = next;
        let slack_count = lp
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();

        // Normalize rows so that rhs >= 0, then decide which rows need an
        // artificial variable.
        let mut normalized = Vec::with_capacity(lp.constraints.len());
        for c in &lp.constraints {
            let mut coefficients = c.coefficients.clone();
            let mut relation = c.relation;
            let mut rhs = c.rhs.clone();
            if rhs.is_negative() {
                coefficients.iter_mut().for_each(|a| *a = a.neg());
                rhs = rhs.neg();
                relation = match relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            normalized.push((coefficients, relation, rhs));
        }
        let artificial_count = normalized
            .iter()
            .filter(|(_, r, _)| *r != Relation::Le)
            .count();
        let artificial_start = structural + slack_count;
        let width = artificial_start + artificial_count;

        let mut rows = Vec::with_capacity(normalized.len());
        let mut rhs = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let mut slack = structural;
        let mut artificial = artificial_start;
        for (coefficients, relation, b) in normalized {
            let mut row = vec![S::zero(); width];
            for (var, a) in coefficients.iter().enumerate() {
                let (pos, neg) = var_columns[var];
                row[pos] = a.clone();
                if let Some(neg) = neg {
                    row[neg] = a.neg();
                }
            }
            match relation {
                Relation::Le => {
                    row[slack] = S::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = S::one().neg();
                    slack += 1;
                    row[artificial] = S::one();
                    basis.push(artificial);
                    artificial += 1;
                }
                Relation::Eq => {
                    row[artificial] = S::one();
                    basis.push(artificial);
                    artificial += 1;
                }
            }
            rows.push(row);
            rhs.push(b);
        }
        Self {
            rows,
            rhs,
            basis,
            artificial_start,
            width,
            var_columns,
            pivots: 0,
        }
    }

    fn run(mut self, lp: &LinearProgram<S>) -> Result<LpOutcome<S>> {
        // Phase 1: minimize the sum of artificials.
        if self.artificial_start < self.width {
            let mut cost = vec![S::zero(); self.width];
            for c in cost.iter_mut().skip(self.artificial_start) {
                *c = S::one();
            }
            match self.optimize(&cost, self.width)? {
                PhaseResult::Optimal => {}
                PhaseResult::Unbounded => unreachable!("phase one is bounded below"),
            }
            let infeasibility = self.objective_value(&cost);
            if infeasibility.is_positive() {
                return Ok(LpOutcome::Infeasible);
            }
            self.evict_artificials();
        }

        // Phase 2 on the original objective (as a minimization).
        let mut cost = vec![S::zero(); self.width];
        for (var, c) in lp.objective.iter().enumerate() {
            let c = match lp.sense {
                Sense::Minimize => c.clone(),
                Sense::Maximize => c.neg(),
            };
            let (pos, neg) = self.var_columns[var];
            cost[pos] = c.clone();
            if let Some(neg) = neg {
                cost[neg] = c.neg();
            }
        }
        match self.optimize(&cost, self.artificial_start)? {
            PhaseResult::Unbounded => return Ok(LpOutcome::Unbounded),
            PhaseResult::Optimal => {}
        }

        let mut column_values = vec![S::zero(); self.width];
        for (row, &col) in self.basis.iter().enumerate() {
            column_values[col] = self.rhs[row].clone();
        }
        let x: Vec<S> = self
            .var_columns
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => column_values[pos].sub(&column_values[neg]),
                None => column_values[pos].clone(),
            })
            .collect();
        let mut objective = S::zero();
        for (c, v) in lp.objective.iter().zip(&x) {
            objective = objective.add(&c.mul(v));
        }
        Ok(LpOutcome::Optimal(LpSolution {
            objective,
            x,
            pivots: self.pivots,
        }))
    }

    fn objective_value(&self, cost: &[S]) -> S {
        let mut total = S::zero();
        for (row, &col) in self.basis.iter().enumerate() {
            if !cost[col].is_zero() {
                total = total.add(&cost[col].mul(&self.rhs[row]));
            }
        }
        total
    }

    /// Reduced costs `cost_j - c_B · column_j` for columns `< limit`.
    fn reduced_costs(&self, cost: &[S], limit: usize) -> Vec<S> {
        let mut reduced: Vec<S> = cost[..limit].to_vec();
        for (row, &col) in self.basis.iter().enumerate() {
            let cb = &cost[col];
            if cb.is_zero() {
                continue;
            }
            for (j, r) in reduced.iter_mut().enumerate() {
                let a = &self.rows[row][j];
                if !a.is_zero() {
                    *r = r.sub_mul(cb, a);
                }
            }
        }
        reduced
    }

    /// Simplex iterations over entering columns `< limit`.
    fn optimize(&mut self, cost: &[S], limit: usize) -> Result<PhaseResult> {
        let mut reduced = self.reduced_costs(cost, limit);
        let mut degenerate_run = 0usize;
        loop {
            if self.pivots > MAX_PIVOTS {
                return Err(Error::Lp(format!("pivot limit {MAX_PIVOTS} exceeded")));
            }
            let use_bland = S::EXACT || degenerate_run >= DEGENERATE_STALL;
            let entering = if use_bland {
                (0..limit).find(|&j| reduced[j].is_negative())
            } else {
                let mut best: Option<usize> = None;
                for j in 0..limit {
                    if reduced[j].is_negative()
                        && best.is_none_or(|b| reduced[j].compare(&reduced[b]) == Ordering::Less)
                    {
                        best = Some(j);
                    }
                }
                best
            };
            let Some(entering) = entering else {
                return Ok(PhaseResult::Optimal);
            };

            // Ratio test; ties broken by the smallest basic column index.
            let mut leaving: Option<(usize, S)> = None;
            for (row, r) in self.rows.iter().enumerate() {
                let a = &r[entering];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs[row].div(a);
                let better = match &leaving {
                    None => true,
                    Some((best_row, best_ratio)) => {
                        let diff = ratio.sub(best_ratio);
                        if diff.is_zero() {
                            self.basis[row] < self.basis[*best_row]
                        } else {
                            diff.is_negative()
                        }
                    }
                };
                if better {
                    leaving = Some((row, ratio));
                }
            }
            let Some((pivot_row, ratio)) = leaving else {
                return Ok(PhaseResult::Unbounded);
            };
            if ratio.is_zero() {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(pivot_row, entering);
            // update reduced costs with the new pivot row
            let factor = reduced[entering].clone();
            if !factor.is_zero() {
                for (j, r) in reduced.iter_mut().enumerate() {
                    let a = &self.rows[pivot_row][j];
                    if !a.is_zero() {
                        *r = r.sub_mul(&factor, a);
                    }
                }
            }
            reduced[entering] = S::zero();
        }
    }

    fn pivot(&mut self, pivot_row: usize, entering: usize) {
        self.pivots += 1;
        let pivot = self.rows[pivot_row][entering].clone();
        if !(S::EXACT && pivot.compare(&S::one()) == Ordering::Equal) {
            for a in self.rows[pivot_row].iter_mut() {
                if !a.is_zero() {
                    *a = a.div(&pivot);
                }
            }
            self.rhs[pivot_row] = self.rhs[pivot_row].div(&pivot);
        }
        self.rows[pivot_row][entering] = S::one();
        let pivot_values = self.rows[pivot_row].clone();
        let pivot_rhs = self.rhs[pivot_row].clone();
        for row in 0..self.rows.len() {
            if row == pivot_row {
                continue;
            }
            let factor = self.rows[row][entering].clone();
            if factor.is_zero() {
                self.rows[row][entering] = S::zero();
                continue;
            }
            let target = &mut self.rows[row];
            for (j, p) in pivot_values.iter().enumerate() {
                if !p.is_zero() {
                    target[j] = target[j].sub_mul(&factor, p);
                }
            }
            target[entering] = S::zero();
            self.rhs[row] = self.rhs[row].sub_mul(&factor, &pivot_rhs);
            if !S::EXACT && self.rhs[row].to_f64() < 0.0 && !self.rhs[row].is_negative() {
                // round-off below zero; keep the basis primal feasible
                self.rhs[row] = S::zero();
            }
        }
        self.basis[pivot_row] = entering;
    }

    /// After phase one, pivot remaining zero-level artificials out of the
    /// basis; rows with no usable column are redundant and are dropped.
    fn evict_artificials(&mut self) {
        let mut row = 0;
        while row < self.rows.len() {
            if self.basis[row] >= self.artificial_start {
                let replacement = (0..self.artificial_start).find(|&j| !self.rows[row][j].is_zero());
                match replacement {
                    Some(j) => {
                        self.pivot(row, j);
                        row += 1;
                    }
                    None => {
                        self.rows.remove(row);
                        self.rhs.remove(row);
                        self.basis.remove(row);
                    }
                }
            } else {
                row += 1;
            }
        }
    }
}

enum PhaseResult {
    Optimal,
    Unbounded,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn solves_small_exact_program() {
        // max 3x + 2y  s.t. x + y <= 4, x + 3y <= 6, x <= 3
        let mut lp = LinearProgram::new(Sense::Maximize, vec![int(3), int(2)]);
        lp.le(vec![int(1), int(1)], int(4))
            .le(vec![int(1), int(3)], int(6))
            .le(vec![int(1), int(0)], int(3));
        let sol = lp.solve().unwrap().optimal().unwrap();
        assert_eq!(sol.objective, int(11));
        assert_eq!(sol.x, vec![int(3), int(1)]);
    }

    #[test]
    fn handles_equalities_free_variables_and_negative_rhs() {
        // min v  s.t.  v >= 2y1 - 2y2, v >= -2y1 + 2y2, y1 + y2 = 1
        let mut lp = LinearProgram::new(Sense::Minimize, vec![int(0), int(0), int(1)]);
        lp.set_free(2);
        lp.le(vec![int(2), int(-2), int(-1)], int(0))
            .le(vec![int(-2), int(2), int(-1)], int(0))
            .eq(vec![int(1), int(1), int(0)], int(1));
        let sol = lp.solve().unwrap().optimal().unwrap();
        assert_eq!(sol.objective, int(0));
        assert_eq!(sol.x[0], ratio(1, 2));

        let mut neg = LinearProgram::new(Sense::Minimize, vec![int(1)]);
        neg.set_free(0);
        neg.ge(vec![int(1)], int(-5));
        assert_eq!(neg.solve().unwrap().optimal().unwrap().objective, int(-5));
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::<Rational>::feasibility(1);
        lp.ge(vec![int(1)], int(2)).le(vec![int(1)], int(1));
        assert!(matches!(lp.solve().unwrap(), LpOutcome::Infeasible));

        let mut lp = LinearProgram::new(Sense::Maximize, vec![int(1), int(0)]);
        lp.le(vec![int(0), int(1)], int(1));
        assert!(matches!(lp.solve().unwrap(), LpOutcome::Unbounded));
    }

    #[test]
    fn drops_redundant_equalities() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![int(1), int(2)]);
        lp.eq(vec![int(1), int(1)], int(1))
            .eq(vec![int(2), int(2)], int(2));
        let sol = lp.solve().unwrap().optimal().unwrap();
        assert_eq!(sol.objective, int(1));
    }

    #[test]
    fn float_and_exact_agree() {
        let mut exact = LinearProgram::new(Sense::Maximize, vec![int(1), int(1)]);
        exact.le(vec![int(2), int(1)], int(4)).le(vec![int(1), int(2)], int(4));
        let mut float = LinearProgram::new(Sense::Maximize, vec![1.0, 1.0]);
        float.le(vec![2.0, 1.0], 4.0).le(vec![1.0, 2.0], 4.0);
        let e = exact.solve().unwrap().optimal().unwrap().objective;
        let f = float.solve().unwrap().optimal().unwrap().objective;
        assert_eq!(e, ratio(8, 3));
        assert!((f - 8.0 / 3.0).abs() < 1e-12);
    }
}
