use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linexpr::LinearExpression;
use crate::rational::{Int, Rational};

/// Relation of a constraint `lhs REL 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    /// `lhs = 0`
    Eq,
    /// `lhs >= 0`
    Geq,
    /// `lhs > 0` (the not-necessarily-closed case)
    Gt,
}

/// A single linear constraint in normalized form: the coefficients and the
/// constant are coprime integers, and equalities have a positive leading
/// coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    lhs: LinearExpression,
    rel: Relation,
}

impl Constraint {
    pub fn new(lhs: LinearExpression, rel: Relation) -> Constraint {
        let mut c = Constraint { lhs, rel };
        c.normalize();
        c
    }

    pub fn eq(lhs: LinearExpression) -> Constraint {
        Constraint::new(lhs, Relation::Eq)
    }

    pub fn geq(lhs: LinearExpression) -> Constraint {
        Constraint::new(lhs, Relation::Geq)
    }

    pub fn gt(lhs: LinearExpression) -> Constraint {
        Constraint::new(lhs, Relation::Gt)
    }

    pub fn lhs(&self) -> &LinearExpression {
        &self.lhs
    }

    pub fn relation(&self) -> Relation {
        self.rel
    }

    fn normalize(&mut self) {
        // Clear denominators, then divide through by the gcd of the resulting
        // integers so coefficients and constant end up coprime.
        let mut dl: Int = Int::one();
        for (_, a) in self.lhs.terms() {
            dl = dl.lcm(a.denom());
        }
        dl = dl.lcm(self.lhs.const_term().denom());
        let mut g = Int::zero();
        for (_, a) in self.lhs.terms() {
            g = g.gcd(&(a.numer() * &dl / a.denom()));
        }
        {
            let c = self.lhs.const_term();
            g = g.gcd(&(c.numer() * &dl / c.denom()));
        }
        if g.is_zero() {
            return; // all-zero lhs; triviality handled by the caller
        }
        self.lhs = self.lhs.clone() * Rational::new(dl, g);
        if self.rel == Relation::Eq {
            let lead = self
                .lhs
                .min_dim()
                .map(|d| self.lhs.coeff(d))
                .unwrap_or_else(|| self.lhs.const_term().clone());
            if lead.is_negative() {
                self.lhs = -self.lhs.clone();
            }
        }
    }

    /// `Some(true)` / `Some(false)` when the lhs has no variables (trivially
    /// true or false), `None` for a real constraint.
    pub fn triviality(&self) -> Option<bool> {
        if !self.lhs.is_constant() {
            return None;
        }
        let c = self.lhs.const_term();
        Some(match self.rel {
            Relation::Eq => c.is_zero(),
            Relation::Geq => !c.is_negative(),
            Relation::Gt => c.is_positive(),
        })
    }

    /// The constraints whose conjunction with a system decides entailment of
    /// an inequality: the negation of `lhs >= 0` is `-lhs > 0`, of `lhs > 0`
    /// is `-lhs >= 0`.  Equalities have no single negation; use `split`.
    pub fn negation(&self) -> Option<Constraint> {
        match self.rel {
            Relation::Geq => Some(Constraint::gt(-self.lhs.clone())),
            Relation::Gt => Some(Constraint::geq(-self.lhs.clone())),
            Relation::Eq => None,
        }
    }

    /// An equality as its two non-strict halves; inequalities unchanged.
    pub fn split(&self) -> Vec<Constraint> {
        match self.rel {
            Relation::Eq => vec![
                Constraint::geq(self.lhs.clone()),
                Constraint::geq(-self.lhs.clone()),
            ],
            _ => vec![self.clone()],
        }
    }

    pub fn satisfied_by(&self, point: &[Rational]) -> bool {
        let v = self.lhs.eval(point);
        match self.rel {
            Relation::Eq => v.is_zero(),
            Relation::Geq => !v.is_negative(),
            Relation::Gt => v.is_positive(),
        }
    }

    /// Ordering used for canonical storage: first dimension, then relation,
    /// then the coefficient vector, then the constant.
    pub fn canonical_cmp(&self, other: &Constraint) -> Ordering {
        let a = self.lhs.min_dim().unwrap_or(usize::MAX);
        let b = other.lhs.min_dim().unwrap_or(usize::MAX);
        a.cmp(&b)
            .then(self.rel.cmp(&other.rel))
            .then_with(|| {
                let mine: Vec<_> = self.lhs.terms().map(|(d, c)| (d, c.clone())).collect();
                let theirs: Vec<_> = other.lhs.terms().map(|(d, c)| (d, c.clone())).collect();
                mine.cmp(&theirs)
            })
            .then_with(|| self.lhs.const_term().cmp(other.lhs.const_term()))
    }

    /// Render using the given dimension naming, e.g. `-1*A> -10`.
    pub fn format_with(&self, name: &dyn Fn(usize) -> String) -> String {
        let mut out = String::new();
        let mut first = true;
        for (d, a) in self.lhs.terms() {
            if !first {
                // join with `+`, or a space when the next coefficient
                // carries its own minus sign
                if a.numer().is_negative() {
                    out.push(' ');
                } else {
                    out.push('+');
                }
            }
            first = false;
            out.push_str(&format!("{}*{}", a.numer(), name(d)));
        }
        if first {
            out.push('0');
        }
        let rel = match self.rel {
            Relation::Eq => "=",
            Relation::Geq => ">=",
            Relation::Gt => ">",
        };
        out.push_str(rel);
        let rhs = -self.lhs.const_term().numer();
        if rhs.is_negative() {
            out.push_str(&format!(" {}", rhs));
        } else {
            out.push_str(&format!("{}", rhs));
        }
        out
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |d: usize| crate::polyhedron::dim_name(d);
        write!(f, "{}", self.format_with(&names))
    }
}
