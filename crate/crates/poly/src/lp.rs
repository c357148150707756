//! Exact rational linear programming, used to decide satisfiability of
//! constraint systems (including strict inequalities) and hence entailment.
//!
//! A small dense two-phase simplex: exact arithmetic, Dantzig pivoting with a
//! Bland's-rule fallback against cycling, objective row carried in the
//! tableau.

use num_traits::{One, Signed, Zero};

use crate::constraint::{Constraint, Relation};
use crate::rational::Rational;

/// Outcome of maximizing an objective over `A v <= b, v >= 0`.
enum Lp {
    Infeasible,
    Optimal(Rational),
    Unbounded,
}

/// Tableau: `m` constraint rows plus one objective row (reduced costs and,
/// in the last column, the negated objective value).
struct Tableau {
    rows: Vec<Vec<Rational>>,
    obj: Vec<Rational>,
    basis: Vec<usize>,
    total: usize,
}

impl Tableau {
    fn set_objective(&mut self, cost: &[Rational]) {
        self.obj = vec![Rational::zero(); self.total + 1];
        for (j, c) in cost.iter().enumerate() {
            self.obj[j] = c.clone();
        }
        let basis = self.basis.clone();
        for (i, &b) in basis.iter().enumerate() {
            if !self.obj[b].is_zero() {
                let f = self.obj[b].clone();
                for j in 0..=self.total {
                    let delta = &f * &self.rows[i][j];
                    self.obj[j] -= delta;
                }
            }
        }
    }

    fn objective_value(&self) -> Rational {
        -self.obj[self.total].clone()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        if !p.is_one() {
            for v in self.rows[row].iter_mut() {
                *v /= &p;
            }
        }
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for j in 0..=self.total {
                let delta = &f * &self.rows[row][j];
                self.rows[i][j] -= delta;
            }
        }
        if !self.obj[col].is_zero() {
            let f = self.obj[col].clone();
            for j in 0..=self.total {
                let delta = &f * &self.rows[row][j];
                self.obj[j] -= delta;
            }
        }
        self.basis[row] = col;
    }

    /// Maximize the current objective; entering columns restricted to
    /// indices below `allowed`.
    fn solve(&mut self, allowed: usize) -> SimplexEnd {
        let mut iterations = 0usize;
        loop {
            iterations += 1;
            let bland = iterations > 500;
            let mut entering: Option<usize> = None;
            for j in 0..allowed {
                if self.obj[j].is_positive() {
                    match entering {
                        None => entering = Some(j),
                        Some(e) => {
                            if !bland && self.obj[j] > self.obj[e] {
                                entering = Some(j);
                            }
                        }
                    }
                    if bland {
                        break;
                    }
                }
            }
            let j = match entering {
                None => return SimplexEnd::Optimal,
                Some(j) => j,
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][j].is_positive() {
                    let ratio = &self.rows[i][self.total] / &self.rows[i][j];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return SimplexEnd::Unbounded,
                Some((i, _)) => self.pivot(i, j),
            }
        }
    }
}

enum SimplexEnd {
    Optimal,
    Unbounded,
}

/// Maximize `obj . v` subject to `rows[i] . v <= rhs[i]`, `v >= 0`.
fn maximize(rows: &[Vec<Rational>], rhs: &[Rational], obj: &[Rational]) -> Lp {
    let m = rows.len();
    let n = obj.len();
    let need_art: Vec<bool> = rhs.iter().map(|b| b.is_negative()).collect();
    let n_art = need_art.iter().filter(|x| **x).count();
    let total = n + m + n_art;
    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        obj: Vec::new(),
        basis: Vec::with_capacity(m),
        total,
    };
    let mut next_art = n + m;
    let mut art_cols = Vec::new();
    for i in 0..m {
        let mut row = vec![Rational::zero(); total + 1];
        let neg = need_art[i];
        for j in 0..n {
            row[j] = if neg { -rows[i][j].clone() } else { rows[i][j].clone() };
        }
        row[n + i] = if neg { -Rational::one() } else { Rational::one() };
        row[total] = if neg { -rhs[i].clone() } else { rhs[i].clone() };
        if neg {
            row[next_art] = Rational::one();
            art_cols.push(next_art);
            tab.basis.push(next_art);
            next_art += 1;
        } else {
            tab.basis.push(n + i);
        }
        tab.rows.push(row);
    }

    if n_art > 0 {
        // Phase 1: maximize -sum(artificials).
        let mut cost = vec![Rational::zero(); total];
        for &a in &art_cols {
            cost[a] = -Rational::one();
        }
        tab.set_objective(&cost);
        match tab.solve(total) {
            SimplexEnd::Unbounded => unreachable!("phase 1 objective is bounded"),
            SimplexEnd::Optimal => {
                if !tab.objective_value().is_zero() {
                    return Lp::Infeasible;
                }
            }
        }
        // Pivot any artificial still in the basis out (degenerate rows).
        for i in 0..m {
            if tab.basis[i] >= n + m {
                if let Some(j) = (0..n + m).find(|&j| !tab.rows[i][j].is_zero()) {
                    tab.pivot(i, j);
                }
            }
        }
    }

    // Phase 2 on the structural objective; artificial columns may not enter.
    let mut cost = vec![Rational::zero(); total];
    for (j, c) in obj.iter().enumerate() {
        cost[j] = c.clone();
    }
    tab.set_objective(&cost);
    match tab.solve(n + m) {
        SimplexEnd::Unbounded => Lp::Unbounded,
        SimplexEnd::Optimal => Lp::Optimal(tab.objective_value()),
    }
}

/// Exact satisfiability over the reals, honouring strictness: maximize a gap
/// variable δ with `lhs >= δ` for strict constraints; satisfiable iff the
/// relaxation is feasible with δ > 0 (or feasible at all when nothing is
/// strict).
pub(crate) fn satisfiable(cs: &[Constraint]) -> bool {
    let mut dims: Vec<usize> = Vec::new();
    let mut any_strict = false;
    for c in cs {
        if c.relation() == Relation::Gt {
            any_strict = true;
        }
        for (d, _) in c.lhs().terms() {
            if !dims.contains(&d) {
                dims.push(d);
            }
        }
    }
    dims.sort_unstable();
    let col_of = |d: usize| dims.binary_search(&d).unwrap();
    let nd = dims.len();
    // Columns: x+ (nd), x- (nd), δ (1).  Rows: one per constraint (equalities
    // as two inequalities), plus δ <= 1.
    let ncols = 2 * nd + 1;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for c in cs {
        for half in c.split() {
            // lhs >= 0  (or >= δ when strict):  -a.x + sδ <= k
            let mut row = vec![Rational::zero(); ncols];
            for (d, a) in half.lhs().terms() {
                let j = col_of(d);
                row[j] = -a.clone();
                row[nd + j] = a.clone();
            }
            if half.relation() == Relation::Gt {
                row[2 * nd] = Rational::one();
            }
            rows.push(row);
            rhs.push(half.lhs().const_term().clone());
        }
    }
    let mut cap = vec![Rational::zero(); ncols];
    cap[2 * nd] = Rational::one();
    rows.push(cap);
    rhs.push(Rational::one());
    let mut obj = vec![Rational::zero(); ncols];
    obj[2 * nd] = Rational::one();
    match maximize(&rows, &rhs, &obj) {
        Lp::Infeasible => false,
        Lp::Unbounded => true,
        Lp::Optimal(v) => {
            if any_strict {
                v.is_positive()
            } else {
                true
            }
        }
    }
}
