//! Exact rational linear programming.
//!
//! A dense two-phase simplex with Bland's smallest-index rule in both
//! phases, so degenerate programs always terminate. Infeasible programs come
//! with a Farkas certificate that can be checked independently.

use num_traits::{One, Signed, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

/// `min objective·x` subject to equality rows, `≤` rows, and per-variable
/// nonnegativity (free variables are allowed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rational>,
    equalities: Vec<Constraint>,
    inequalities: Vec<Constraint>,
    nonnegative: Vec<bool>,
}

impl LinearProgram {
    /// A program over `num_vars` nonnegative variables with zero objective.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            equalities: Vec::new(),
            inequalities: Vec::new(),
            nonnegative: vec![true; num_vars],
        }
    }

    pub fn with_objective(mut self, objective: Vec<Rational>) -> Self {
        self.objective = objective;
        self
    }

    pub fn equality(mut self, coeffs: Vec<Rational>, rhs: Rational) -> Self {
        self.equalities.push(Constraint { coeffs, rhs });
        self
    }

    pub fn less_equal(mut self, coeffs: Vec<Rational>, rhs: Rational) -> Self {
        self.inequalities.push(Constraint { coeffs, rhs });
        self
    }

    pub fn greater_equal(self, coeffs: Vec<Rational>, rhs: Rational) -> Self {
        self.less_equal(coeffs.into_iter().map(|v| -v).collect(), -rhs)
    }

    pub fn free(mut self, var: usize) -> Self {
        self.nonnegative[var] = false;
        self
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn equalities(&self) -> &[Constraint] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[Constraint] {
        &self.inequalities
    }

    pub fn is_nonnegative(&self, var: usize) -> bool {
        self.nonnegative[var]
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars;
        if self.objective.len() != n || self.nonnegative.len() != n {
            return Err(Error::MalformedProgram(format!(
                "objective has {} coefficients for {n} variables",
                self.objective.len()
            )));
        }
        for (kind, rows) in [("equality", &self.equalities), ("inequality", &self.inequalities)] {
            if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.coeffs.len() != n) {
                return Err(Error::MalformedProgram(format!(
                    "{kind} row {i} has {} coefficients for {n} variables",
                    row.coeffs.len()
                )));
            }
        }
        Ok(())
    }

    /// Substitutes `x` into every constraint.
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars {
            return false;
        }
        let dot = |c: &Constraint| {
            c.coeffs
                .iter()
                .zip(x)
                .fold(Rational::zero(), |acc, (a, v)| acc + a * v)
        };
        self.nonnegative
            .iter()
            .zip(x)
            .all(|(&nn, v)| !nn || !v.is_negative())
            && self.equalities.iter().all(|c| dot(c) == c.rhs)
            && self.inequalities.iter().all(|c| dot(c) <= c.rhs)
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective
            .iter()
            .zip(x)
            .fold(Rational::zero(), |acc, (c, v)| acc + c * v)
    }
}

/// Multipliers `w` (equality rows first, then `≤` rows) with `w ≤ 0` on
/// `≤` rows, `Aᵀw ≤ 0` on nonnegative columns, `Aᵀw = 0` on free columns,
/// and `bᵀw > 0`. Any such `w` proves that no feasible point exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub multipliers: Vec<Rational>,
}

impl FarkasCertificate {
    pub fn verify(&self, lp: &LinearProgram) -> bool {
        let rows: Vec<&Constraint> = lp.equalities.iter().chain(&lp.inequalities).collect();
        if self.multipliers.len() != rows.len() {
            return false;
        }
        let n_eq = lp.equalities.len();
        if self.multipliers[n_eq..].iter().any(|w| w.is_positive()) {
            return false;
        }
        for j in 0..lp.num_vars {
            let col = rows
                .iter()
                .zip(&self.multipliers)
                .fold(Rational::zero(), |acc, (r, w)| acc + &r.coeffs[j] * w);
            let ok = if lp.nonnegative[j] {
                !col.is_positive()
            } else {
                col.is_zero()
            };
            if !ok {
                return false;
            }
        }
        let rhs = rows
            .iter()
            .zip(&self.multipliers)
            .fold(Rational::zero(), |acc, (r, w)| acc + &r.rhs * w);
        rhs.is_positive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible(FarkasCertificate),
}

impl Feasibility {
    pub fn assignment(&self) -> Option<&[Rational]> {
        match self {
            Feasibility::Feasible(x) => Some(x),
            Feasibility::Infeasible(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub value: Rational,
    pub assignment: Vec<Rational>,
}

/// Finds a basic feasible point, or certifies infeasibility.
pub fn feasible(lp: &LinearProgram) -> Result<Feasibility> {
    lp.validate()?;
    let std = StandardForm::from_program(lp);
    match std.phase_one() {
        PhaseOne::Infeasible(w) => Ok(Feasibility::Infeasible(FarkasCertificate { multipliers: w })),
        PhaseOne::Feasible(t) => Ok(Feasibility::Feasible(std.recover(&t.solution()))),
    }
}

/// Exact optimum of `lp`.
pub fn minimize(lp: &LinearProgram) -> Result<Optimum> {
    lp.validate()?;
    let std = StandardForm::from_program(lp);
    let mut tableau = match std.phase_one() {
        PhaseOne::Infeasible(_) => return Err(Error::Infeasible),
        PhaseOne::Feasible(t) => t,
    };
    tableau.set_objective(&std.cost);
    if !tableau.run(std.cols) {
        return Err(Error::Unbounded);
    }
    let assignment = std.recover(&tableau.solution());
    let value = lp.objective_value(&assignment);
    Ok(Optimum { value, assignment })
}

/// `min c·z` s.t. `A z = b`, `z ≥ 0`, with a map back to the original
/// variables.
struct StandardForm {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    cost: Vec<Rational>,
    cols: usize,
    /// For every original variable: its positive column and, if free, the
    /// column of its negative part.
    columns_of: Vec<(usize, Option<usize>)>,
}

impl StandardForm {
    fn from_program(lp: &LinearProgram) -> Self {
        let mut columns_of = Vec::with_capacity(lp.num_vars);
        let mut next = 0;
        for j in 0..lp.num_vars {
            if lp.nonnegative[j] {
                columns_of.push((next, None));
                next += 1;
            } else {
                columns_of.push((next, Some(next + 1)));
                next += 2;
            }
        }
        let structural = next;
        let n_le = lp.inequalities.len();
        let cols = structural + n_le;
        let mut cost = vec![Rational::zero(); cols];
        for (j, &(pos, neg)) in columns_of.iter().enumerate() {
            cost[pos] = lp.objective[j].clone();
            if let Some(neg) = neg {
                cost[neg] = -&lp.objective[j];
            }
        }
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        let all = lp.equalities.iter().map(|c| (c, None)).chain(
            lp.inequalities
                .iter()
                .enumerate()
                .map(|(k, c)| (c, Some(structural + k))),
        );
        for (c, slack) in all {
            let mut row = vec![Rational::zero(); cols];
            for (j, &(pos, neg)) in columns_of.iter().enumerate() {
                row[pos] = c.coeffs[j].clone();
                if let Some(neg) = neg {
                    row[neg] = -&c.coeffs[j];
                }
            }
            if let Some(s) = slack {
                row[s] = Rational::one();
            }
            rows.push(row);
            rhs.push(c.rhs.clone());
        }
        StandardForm {
            rows,
            rhs,
            cost,
            cols,
            columns_of,
        }
    }

    fn recover(&self, z: &[Rational]) -> Vec<Rational> {
        self.columns_of
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => &z[pos] - &z[neg],
                None => z[pos].clone(),
            })
            .collect()
    }

    fn phase_one(&self) -> PhaseOne {
        let m = self.rows.len();
        let n = self.cols;
        let width = n + m + 1;
        let mut signs = Vec::with_capacity(m);
        let mut t = Vec::with_capacity(m);
        for (i, (row, b)) in self.rows.iter().zip(&self.rhs).enumerate() {
            let flip = b.is_negative();
            signs.push(if flip { -Rational::one() } else { Rational::one() });
            let mut r = Vec::with_capacity(width);
            r.extend(row.iter().map(|v| if flip { -v } else { v.clone() }));
            r.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            r.push(if flip { -b } else { b.clone() });
            t.push(r);
        }
        let mut cost = vec![Rational::zero(); width];
        for r in &t {
            for j in (0..n).chain(std::iter::once(n + m)) {
                cost[j] -= &r[j];
            }
        }
        let mut tableau = Tableau {
            t,
            cost,
            basis: (n..n + m).collect(),
            width,
        };
        // Phase one is bounded below by zero, so this always finishes.
        let finished = tableau.run(n);
        debug_assert!(finished);
        let residual = -&tableau.cost[width - 1];
        if residual.is_positive() {
            let multipliers = (0..m)
                .map(|i| (Rational::one() - &tableau.cost[n + i]) * &signs[i])
                .collect();
            return PhaseOne::Infeasible(multipliers);
        }
        tableau.drive_out_artificials(n);
        tableau.truncate_columns(n);
        PhaseOne::Feasible(tableau)
    }
}

enum PhaseOne {
    Feasible(Tableau),
    Infeasible(Vec<Rational>),
}

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    t: Vec<Vec<Rational>>,
    /// Reduced costs; the last entry is minus the current objective value.
    cost: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.width - 1
    }

    /// Bland's rule over columns `< allowed`. Returns `false` if unbounded.
    fn run(&mut self, allowed: usize) -> bool {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let rhs = self.rhs();
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.t.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((k, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return false;
            };
            self.pivot(row, enter);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.t[row][col].recip();
        for v in self.t[row].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = std::mem::take(&mut self.t[row]);
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (v, p) in r.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        if !self.cost[col].is_zero() {
            let factor = self.cost[col].clone();
            for (v, p) in self.cost.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.t[row] = pivot_row;
        self.basis[row] = col;
    }

    /// After a zero-residual phase one, pivots artificial columns out of the
    /// basis; rows where that is impossible are redundant and dropped.
    fn drive_out_artificials(&mut self, structural: usize) {
        let mut i = 0;
        while i < self.t.len() {
            if self.basis[i] < structural {
                i += 1;
                continue;
            }
            match (0..structural).find(|&j| !self.t[i][j].is_zero()) {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.t.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }

    fn truncate_columns(&mut self, structural: usize) {
        let rhs = self.rhs();
        for r in self.t.iter_mut() {
            let b = r[rhs].clone();
            r.truncate(structural);
            r.push(b);
        }
        self.width = structural + 1;
        self.cost = vec![Rational::zero(); self.width];
    }

    fn set_objective(&mut self, cost: &[Rational]) {
        let rhs = self.rhs();
        let mut reduced: Vec<Rational> = cost.to_vec();
        reduced.push(Rational::zero());
        for (i, r) in self.t.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for j in 0..=rhs {
                reduced[j] -= cb * &r[j];
            }
        }
        self.cost = reduced;
    }

    fn solution(&self) -> Vec<Rational> {
        let rhs = self.rhs();
        let mut z = vec![Rational::zero(); rhs];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < rhs {
                z[b] = self.t[i][rhs].clone();
            }
        }
        z
    }
}
