use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::rational::Rational;

/// A linear expression `sum(a_i * x_i) + c` over dimension indices.
///
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LinearExpression {
    coeffs: BTreeMap<usize, Rational>,
    constant: Rational,
}

impl LinearExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        LinearExpression {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    /// The expression `1 * x_d`.
    pub fn var(d: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(d, Rational::from_integer(1.into()));
        LinearExpression {
            coeffs,
            constant: Rational::zero(),
        }
    }

    pub fn coeff(&self, d: usize) -> Rational {
        self.coeffs.get(&d).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set_coeff(&mut self, d: usize, a: Rational) {
        if a.is_zero() {
            self.coeffs.remove(&d);
        } else {
            self.coeffs.insert(d, a);
        }
    }

    pub fn const_term(&self) -> &Rational {
        &self.constant
    }

    pub fn set_const(&mut self, c: Rational) {
        self.constant = c;
    }

    /// Iterate over the non-zero coefficients in dimension order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(d, a)| (*d, a))
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_dim(&self) -> Option<usize> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &LinearExpression, factor: &Rational) {
        if factor.is_zero() {
            return;
        }
        for (d, a) in &other.coeffs {
            let v = self.coeff(*d) + a * factor;
            self.set_coeff(*d, v);
        }
        self.constant = &self.constant + &other.constant * factor;
    }

    /// Replace `x_d` by `repl` (which must not mention `x_d`).
    pub fn substitute(&self, d: usize, repl: &LinearExpression) -> LinearExpression {
        let a = self.coeff(d);
        if a.is_zero() {
            return self.clone();
        }
        let mut out = self.clone();
        out.set_coeff(d, Rational::zero());
        out.add_scaled(repl, &a);
        out
    }

    /// Rewrite dimension indices; every mentioned dimension must be mapped.
    pub fn remap(&self, mapping: &BTreeMap<usize, usize>) -> Option<LinearExpression> {
        let mut out = LinearExpression::constant(self.constant.clone());
        for (d, a) in &self.coeffs {
            let nd = *mapping.get(d)?;
            out.set_coeff(nd, out.coeff(nd) + a.clone());
        }
        Some(out)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut v = self.constant.clone();
        for (d, a) in &self.coeffs {
            v += a * &point[*d];
        }
        v
    }
}

impl Add for LinearExpression {
    type Output = LinearExpression;
    fn add(mut self, rhs: LinearExpression) -> LinearExpression {
        self.add_scaled(&rhs, &Rational::from_integer(1.into()));
        self
    }
}

impl Sub for LinearExpression {
    type Output = LinearExpression;
    fn sub(mut self, rhs: LinearExpression) -> LinearExpression {
        self.add_scaled(&rhs, &Rational::from_integer((-1).into()));
        self
    }
}

impl Neg for LinearExpression {
    type Output = LinearExpression;
    fn neg(self) -> LinearExpression {
        let mut out = LinearExpression::zero();
        out.add_scaled(&self, &Rational::from_integer((-1).into()));
        out
    }
}

impl Mul<Rational> for LinearExpression {
    type Output = LinearExpression;
    fn mul(self, rhs: Rational) -> LinearExpression {
        let mut out = LinearExpression::zero();
        out.add_scaled(&self, &rhs);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn zero_coefficients_are_dropped() {
        let e = LinearExpression::var(0) - LinearExpression::var(0);
        assert!(e.is_constant());
        assert_eq!(e.terms().count(), 0);
    }

    #[test]
    fn substitute_eliminates_dimension() {
        // x0 + 2*x1 with x1 := x2 - 1  =>  x0 + 2*x2 - 2
        let mut e = LinearExpression::var(0);
        e.add_scaled(&LinearExpression::var(1), &rat(2));
        let repl = LinearExpression::var(2) - LinearExpression::constant(rat(1));
        let s = e.substitute(1, &repl);
        assert_eq!(s.coeff(0), rat(1));
        assert_eq!(s.coeff(1), rat(0));
        assert_eq!(s.coeff(2), rat(2));
        assert_eq!(*s.const_term(), rat(-2));
    }
}
