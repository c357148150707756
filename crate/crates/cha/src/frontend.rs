//! Clause normalisation and linearisation.
//!
//! Before analysis every clause is brought into a standard shape:
//!  * head arguments are distinct variables (`standardise_heads`), with the
//!    original bindings moved into the body as `=` builtins;
//!  * call arguments are distinct variables (`normalise_calls`), with
//!    arithmetic arguments moved into `is` builtins and structured arguments
//!    into `=` builtins.
//!
//! `linearise` then maps a body builtin to linear constraints over the
//! clause's variable frame, over-approximating whatever is not linear.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use poly::rational::Rational;
use poly::{Constraint, LinearExpression};

use crate::ast::{ArithOp, BodyLiteral, BuiltinRel, Clause, Program, Term};

/// A fresh-variable allocator that avoids every name in scope.
pub struct FreshVars {
    used: Vec<String>,
    next: usize,
}

impl FreshVars {
    pub fn for_clause(c: &Clause) -> FreshVars {
        let mut used = Vec::new();
        for a in &c.head.args {
            a.collect_vars(&mut used);
        }
        for l in &c.body {
            match l {
                BodyLiteral::Call(a) => {
                    for t in &a.args {
                        t.collect_vars(&mut used);
                    }
                }
                BodyLiteral::Builtin(_, l, r) => {
                    l.collect_vars(&mut used);
                    r.collect_vars(&mut used);
                }
            }
        }
        FreshVars { used, next: 0 }
    }

    pub fn fresh(&mut self) -> String {
        loop {
            let name = format!("V{}", self.next);
            self.next += 1;
            if !self.used.contains(&name) {
                self.used.push(name.clone());
                return name;
            }
        }
    }
}

/// Make every head argument a distinct variable, moving the original
/// arguments into prepended `=` builtins.
pub fn standardise_heads(prog: &mut Program) {
    for c in prog.clauses.iter_mut() {
        standardise_clause_head(c);
    }
}

pub fn standardise_clause_head(c: &mut Clause) {
    let mut fresh = FreshVars::for_clause(c);
    let mut seen: Vec<String> = Vec::new();
    let mut prefix: Vec<BodyLiteral> = Vec::new();
    for arg in c.head.args.iter_mut() {
        let keep = match arg {
            Term::Var(v) if !seen.contains(v) => {
                seen.push(v.clone());
                true
            }
            _ => false,
        };
        if !keep {
            let v = fresh.fresh();
            let original = std::mem::replace(arg, Term::Var(v.clone()));
            prefix.push(BodyLiteral::Builtin(BuiltinRel::Unify, Term::Var(v.clone()), original));
            seen.push(v);
        }
    }
    if !prefix.is_empty() {
        prefix.append(&mut c.body);
        c.body = prefix;
    }
}

/// Make every argument of every body call a distinct variable.  Arithmetic
/// arguments become `is` builtins, structured or repeated arguments become
/// `=` builtins, inserted directly before the call.
pub fn normalise_calls(prog: &mut Program) {
    for c in prog.clauses.iter_mut() {
        let mut fresh = FreshVars::for_clause(c);
        let mut body = Vec::with_capacity(c.body.len());
        for lit in c.body.drain(..) {
            match lit {
                BodyLiteral::Builtin(..) => body.push(lit),
                BodyLiteral::Call(mut atom) => {
                    let mut seen: Vec<String> = Vec::new();
                    for arg in atom.args.iter_mut() {
                        match arg {
                            Term::Var(v) if !seen.contains(v) => {
                                seen.push(v.clone());
                            }
                            Term::Var(_) => {
                                // repeated variable
                                let v = fresh.fresh();
                                let orig = std::mem::replace(arg, Term::Var(v.clone()));
                                body.push(BodyLiteral::Builtin(
                                    BuiltinRel::Unify,
                                    Term::Var(v.clone()),
                                    orig,
                                ));
                                seen.push(v);
                            }
                            Term::Int(_) | Term::Arith(..) => {
                                let v = fresh.fresh();
                                let orig = std::mem::replace(arg, Term::Var(v.clone()));
                                body.push(BodyLiteral::Builtin(
                                    BuiltinRel::Is,
                                    Term::Var(v.clone()),
                                    orig,
                                ));
                                seen.push(v);
                            }
                            Term::Compound(..) => {
                                let v = fresh.fresh();
                                let orig = std::mem::replace(arg, Term::Var(v.clone()));
                                body.push(BodyLiteral::Builtin(
                                    BuiltinRel::Unify,
                                    Term::Var(v.clone()),
                                    orig,
                                ));
                                seen.push(v);
                            }
                        }
                    }
                    body.push(BodyLiteral::Call(atom));
                }
            }
        }
        c.body = body;
    }
}

/// The variable frame of a clause: head variables first (their index is the
/// predicate argument position), then remaining body variables in first
/// occurrence order.
#[derive(Clone, Debug)]
pub struct Frame {
    vars: Vec<String>,
}

impl Frame {
    pub fn of_clause(c: &Clause) -> Frame {
        let mut vars = Vec::new();
        for a in &c.head.args {
            a.collect_vars(&mut vars);
        }
        for l in &c.body {
            match l {
                BodyLiteral::Call(a) => {
                    for t in &a.args {
                        t.collect_vars(&mut vars);
                    }
                }
                BodyLiteral::Builtin(_, l, r) => {
                    l.collect_vars(&mut vars);
                    r.collect_vars(&mut vars);
                }
            }
        }
        Frame { vars }
    }

    pub fn dim(&self, v: &str) -> Option<usize> {
        self.vars.iter().position(|x| x == v)
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }
}

/// Fold ground arithmetic subterms into integers.  Division is left
/// symbolic; shifts fold only for non-negative shift amounts.
pub fn fold_constants(t: &Term) -> Term {
    match t {
        Term::Var(_) | Term::Int(_) => t.clone(),
        Term::Compound(n, args) => Term::Compound(
            n.clone(),
            args.iter().map(fold_constants).collect(),
        ),
        Term::Arith(op, l, r) => {
            let l = fold_constants(l);
            let r = fold_constants(r);
            if let (Term::Int(a), Term::Int(b)) = (&l, &r) {
                match op {
                    ArithOp::Add => return Term::Int(a + b),
                    ArithOp::Sub => return Term::Int(a - b),
                    ArithOp::Mul => return Term::Int(a * b),
                    ArithOp::Or => return Term::Int(a | b),
                    ArithOp::Shr => {
                        if !b.is_negative() {
                            if let Ok(k) = u64::try_from(b.clone()) {
                                return Term::Int(a >> k);
                            }
                        }
                    }
                    ArithOp::Div => {}
                }
            }
            Term::Arith(*op, Box::new(l), Box::new(r))
        }
    }
}

/// Translate a term into a linear expression over the frame, if possible.
fn linear(t: &Term, frame: &Frame) -> Option<LinearExpression> {
    match t {
        Term::Var(v) => frame.dim(v).map(LinearExpression::var),
        Term::Int(n) => Some(LinearExpression::constant(Rational::from_integer(n.clone()))),
        Term::Compound(..) => None,
        Term::Arith(op, l, r) => {
            match op {
                ArithOp::Add => Some(linear(l, frame)? + linear(r, frame)?),
                ArithOp::Sub => Some(linear(l, frame)? - linear(r, frame)?),
                ArithOp::Mul => {
                    let ll = linear(l, frame)?;
                    let rr = linear(r, frame)?;
                    if ll.is_constant() {
                        Some(rr * ll.const_term().clone())
                    } else if rr.is_constant() {
                        Some(ll * rr.const_term().clone())
                    } else {
                        None
                    }
                }
                ArithOp::Div => {
                    let ll = linear(l, frame)?;
                    let rr = linear(r, frame)?;
                    if rr.is_constant() && !rr.const_term().is_zero() {
                        Some(ll * (Rational::one() / rr.const_term().clone()))
                    } else {
                        None
                    }
                }
                // Shifts and bitwise or are handled at the relation level;
                // nested occurrences are over-approximated away.
                ArithOp::Shr | ArithOp::Or => None,
            }
        }
    }
}

/// Linear constraints over-approximating one builtin.  An empty vector means
/// the builtin carries no linear information (it still always succeeds or is
/// ignored for the analysis).
pub fn linearise(lit: &BodyLiteral, frame: &Frame) -> Vec<Constraint> {
    let (rel, lhs, rhs) = match lit {
        BodyLiteral::Call(_) => return Vec::new(),
        BodyLiteral::Builtin(rel, l, r) => (rel, fold_constants(l), fold_constants(r)),
    };
    match rel {
        BuiltinRel::NotUnify | BuiltinRel::ArithNeq => Vec::new(),
        BuiltinRel::Is | BuiltinRel::Unify | BuiltinRel::ArithEq => {
            // Special forms on the right-hand side first.
            if let Term::Arith(ArithOp::Shr, e, k) = &rhs {
                if let (Some(l), Some(e), Term::Int(k)) =
                    (linear(&lhs, frame), linear(e, frame), k.as_ref())
                {
                    if !k.is_negative() {
                        if let Ok(k) = u32::try_from(k.clone()) {
                            // l = e >> k  (arithmetic shift = floor division):
                            // 2^k * l <= e <= 2^k * l + 2^k - 1
                            let p = Rational::from_integer(BigInt::from(2).pow(k));
                            let scaled = l * p.clone();
                            let low = e.clone() - scaled.clone();
                            let high = scaled
                                + LinearExpression::constant(p - Rational::one())
                                - e;
                            return vec![Constraint::geq(low), Constraint::geq(high)];
                        }
                    }
                }
                return Vec::new();
            }
            if let Term::Arith(ArithOp::Or, y, z) = &rhs {
                if let (Some(l), Some(y), Some(z)) =
                    (linear(&lhs, frame), linear(y, frame), linear(z, frame))
                {
                    // l = y \/ z is over-approximated by l <= y + z
                    return vec![Constraint::geq(y + z - l)];
                }
                return Vec::new();
            }
            match (linear(&lhs, frame), linear(&rhs, frame)) {
                (Some(l), Some(r)) => vec![Constraint::eq(l - r)],
                _ => Vec::new(),
            }
        }
        BuiltinRel::Lt | BuiltinRel::Gt | BuiltinRel::Le | BuiltinRel::Ge => {
            match (linear(&lhs, frame), linear(&rhs, frame)) {
                (Some(l), Some(r)) => {
                    let c = match rel {
                        BuiltinRel::Lt => Constraint::gt(r - l),
                        BuiltinRel::Gt => Constraint::gt(l - r),
                        BuiltinRel::Le => Constraint::geq(r - l),
                        BuiltinRel::Ge => Constraint::geq(l - r),
                        _ => unreachable!(),
                    };
                    vec![c]
                }
                _ => Vec::new(),
            }
        }
    }
}
