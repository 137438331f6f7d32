//! Exact rational simplex for `max c·x  s.t.  A x ≤ b, x ≥ 0` with `b ≥ 0`.
//!
//! Since every bound is nonnegative, the all-slack basis is feasible and no
//! phase one is needed. Pivoting follows Bland's rule (lowest eligible
//! variable index enters, lowest basic index leaves among ratio ties),
//! which terminates on the heavily degenerate LPs produced by symmetric
//! submeasures.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{ExtendedRational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub bound: Rational,
    /// Caller-supplied identifier echoed in dual certificates.
    pub tag: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(objective: Vec<Rational>) -> Self {
        Self {
            num_vars: objective.len(),
            objective,
            constraints: Vec::new(),
        }
    }

    /// Adds `coeffs · x ≤ bound`. Infinite bounds never bind and are dropped.
    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, bound: ExtendedRational, tag: u64) -> Result<()> {
        if coeffs.len() != self.num_vars {
            return Err(Error::Malformed(format!(
                "constraint has {} coefficients for {} variables",
                coeffs.len(),
                self.num_vars
            )));
        }
        let bound = match bound {
            ExtendedRational::Infinity => return Ok(()),
            ExtendedRational::Finite(b) => b,
        };
        if bound.is_negative() {
            return Err(Error::Malformed(format!("constraint bound {bound} is negative")));
        }
        self.constraints.push(Constraint { coeffs, bound, tag });
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimum, or `Infinity` when unbounded.
    pub value: ExtendedRational,
    /// Optimal point (the last feasible vertex when unbounded).
    pub primal: Vec<Rational>,
    /// Nonzero dual multipliers as `(constraint position, y)`; empty when unbounded.
    pub dual: Vec<(usize, Rational)>,
}

/// Dictionary: `x_basic[r] = rhs[r] - Σ_j a[r][j] x_nonbasic[j]`,
/// `z = value + Σ_j cost[j] x_nonbasic[j]`. Variables `0..n` are the
/// structural ones, `n..n+m` the slacks.
struct Dictionary {
    a: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    cost: Vec<Rational>,
    value: Rational,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
}

impl Dictionary {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col].clone();
        let inv = Rational::one() / &p;
        let width = self.nonbasic.len();
        for j in 0..width {
            if j != col && !self.a[row][j].is_zero() {
                self.a[row][j] = &self.a[row][j] * &inv;
            }
        }
        self.a[row][col] = inv.clone();
        self.rhs[row] = &self.rhs[row] * &inv;

        let pivot_row = self.a[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for i in 0..self.a.len() {
            if i == row || self.a[i][col].is_zero() {
                continue;
            }
            let f = self.a[i][col].clone();
            for (j, pj) in pivot_row.iter().enumerate() {
                if j != col && !pj.is_zero() {
                    let delta = &f * pj;
                    self.a[i][j] -= delta;
                }
            }
            self.a[i][col] = -(&f * &inv);
            if !pivot_rhs.is_zero() {
                self.rhs[i] -= &f * &pivot_rhs;
            }
        }
        if !self.cost[col].is_zero() {
            let d = self.cost[col].clone();
            for (j, pj) in pivot_row.iter().enumerate() {
                if j != col && !pj.is_zero() {
                    let delta = &d * pj;
                    self.cost[j] -= delta;
                }
            }
            self.cost[col] = -(&d * &inv);
            self.value += &d * &pivot_rhs;
        }
        std::mem::swap(&mut self.basic[row], &mut self.nonbasic[col]);
    }
}

/// Solves `lp` exactly. Infeasibility cannot occur since `x = 0` is feasible.
pub fn solve_lp(lp: &LinearProgram) -> LpSolution {
    let n = lp.num_vars;
    let m = lp.constraints.len();
    let mut d = Dictionary {
        a: lp.constraints.iter().map(|c| c.coeffs.clone()).collect(),
        rhs: lp.constraints.iter().map(|c| c.bound.clone()).collect(),
        cost: lp.objective.clone(),
        value: Rational::zero(),
        basic: (n..n + m).collect(),
        nonbasic: (0..n).collect(),
    };
    loop {
        // Bland: entering variable is the lowest-index one with positive cost.
        let entering = (0..n)
            .filter(|&j| d.cost[j].is_positive())
            .min_by_key(|&j| d.nonbasic[j]);
        let Some(col) = entering else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..m {
            if !d.a[r][col].is_positive() {
                continue;
            }
            let t = &d.rhs[r] / &d.a[r][col];
            let better = match &leave {
                None => true,
                Some((lr, lt)) => t < *lt || (t == *lt && d.basic[r] < d.basic[*lr]),
            };
            if better {
                leave = Some((r, t));
            }
        }
        match leave {
            Some((row, _)) => d.pivot(row, col),
            None => {
                return LpSolution {
                    status: LpStatus::Unbounded,
                    value: ExtendedRational::Infinity,
                    primal: primal(&d, n),
                    dual: Vec::new(),
                }
            }
        }
    }
    let mut dual: Vec<(usize, Rational)> = d
        .nonbasic
        .iter()
        .zip(&d.cost)
        .filter(|(&v, c)| v >= n && !c.is_zero())
        .map(|(&v, c)| (v - n, -c.clone()))
        .collect();
    dual.sort_by_key(|(i, _)| *i);
    LpSolution {
        status: LpStatus::Optimal,
        value: ExtendedRational::Finite(d.value.clone()),
        primal: primal(&d, n),
        dual,
    }
}

fn primal(d: &Dictionary, n: usize) -> Vec<Rational> {
    let mut x = vec![Rational::zero(); n];
    for (r, &v) in d.basic.iter().enumerate() {
        if v < n {
            x[v] = d.rhs[r].clone();
        }
    }
    x
}

/// Independent optimality check: `primal` is feasible, `dual ≥ 0` satisfies
/// `Aᵀy ≥ c`, and both objectives agree. Does not look at solver state.
pub fn certify(lp: &LinearProgram, sol: &LpSolution) -> bool {
    if sol.status != LpStatus::Optimal || sol.primal.len() != lp.num_vars {
        return false;
    }
    if sol.primal.iter().any(|x| x.is_negative()) {
        return false;
    }
    for c in &lp.constraints {
        let lhs: Rational = c.coeffs.iter().zip(&sol.primal).map(|(a, x)| a * x).sum();
        if lhs > c.bound {
            return false;
        }
    }
    let primal_value: Rational = lp.objective.iter().zip(&sol.primal).map(|(a, x)| a * x).sum();
    let mut reduced = vec![Rational::zero(); lp.num_vars];
    let mut dual_value = Rational::zero();
    for (i, y) in &sol.dual {
        let Some(c) = lp.constraints.get(*i) else {
            return false;
        };
        if y.is_negative() {
            return false;
        }
        for (r, a) in reduced.iter_mut().zip(&c.coeffs) {
            *r += a * y;
        }
        dual_value += &c.bound * y;
    }
    reduced.iter().zip(&lp.objective).all(|(r, c)| r >= c) && sol.value == primal_value && primal_value == dual_value
}
