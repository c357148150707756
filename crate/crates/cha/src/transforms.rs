//! Program transformations applied between parsing and analysis:
//! size-norm abstraction of symbolic data, and the query-answer (magic)
//! transformation that specialises a program for a goal.

use num_bigint::BigInt;

use crate::ast::{Atom, BodyLiteral, BuiltinRel, Clause, Program, Term};
use crate::frontend;

/// A size norm mapping ground terms to natural numbers (and terms with
/// variables to arithmetic expressions over those variables).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Norm {
    /// Constants measure 0, `f(t1,..,tn)` measures `1 + sum(ti)`.
    TermSize,
    /// `[]` measures 0, `[H|T]` measures `1 + T`; everything else
    /// (non-variable) measures 0.
    ListLength,
}

impl Norm {
    pub fn measure(self, t: &Term) -> Term {
        match self {
            Norm::TermSize => match t {
                Term::Var(_) => t.clone(),
                Term::Int(_) => Term::Int(BigInt::from(0)),
                // arithmetic expressions denote numbers: constants under the norm
                Term::Arith(..) => Term::Int(BigInt::from(0)),
                Term::Compound(_, args) if args.is_empty() => Term::Int(BigInt::from(0)),
                Term::Compound(_, args) => {
                    let mut acc = Term::Int(BigInt::from(1));
                    for a in args {
                        acc = Term::Arith(
                            crate::ast::ArithOp::Add,
                            Box::new(acc),
                            Box::new(self.measure(a)),
                        );
                    }
                    acc
                }
            },
            Norm::ListLength => match t {
                Term::Var(_) => t.clone(),
                Term::Compound(n, args) if n == "." && args.len() == 2 => Term::Arith(
                    crate::ast::ArithOp::Add,
                    Box::new(Term::Int(BigInt::from(1))),
                    Box::new(self.measure(&args[1])),
                ),
                _ => Term::Int(BigInt::from(0)),
            },
        }
    }
}

/// Replace every `=` builtin that touches structured data by the equation of
/// the sizes of its two sides.  Call arguments are assumed flat (run
/// `normalise_calls` first), so this is the only place structure survives.
pub fn size_abstract(prog: &mut Program, norm: Norm) {
    for c in prog.clauses.iter_mut() {
        for lit in c.body.iter_mut() {
            if let BodyLiteral::Builtin(BuiltinRel::Unify, l, r) = lit {
                if l.has_compound() || r.has_compound() {
                    *lit = BodyLiteral::Builtin(
                        BuiltinRel::Unify,
                        norm.measure(l),
                        norm.measure(r),
                    );
                }
            }
        }
    }
}

fn suffixed(atom: &Atom, suffix: &str) -> Atom {
    Atom {
        name: format!("{}{}", atom.name, suffix),
        args: atom.args.clone(),
    }
}

/// The query-answer transformation: for a goal `g(..)`, produce a program
/// whose `_query` predicates describe the calls reachable from the goal
/// (left-to-right) and whose `_ans` predicates describe their answers.
///
/// The goal is a standardised clause: head `g(V1..Vn)` with the original
/// argument bindings as body builtins; these become the seed `g_query`
/// clause.
pub fn query_answer_transform(prog: &Program, goal: &Clause) -> Program {
    let mut out = Program::default();
    // Seed: the goal itself is queried.
    out.clauses.push(Clause {
        head: suffixed(&goal.head, "_query"),
        body: goal.body.clone(),
    });
    for c in &prog.clauses {
        let head_query = BodyLiteral::Call(suffixed(&c.head, "_query"));
        // One query clause per body call: the call is reached when the head
        // is queried and everything to its left has succeeded.
        for (i, lit) in c.body.iter().enumerate() {
            if let BodyLiteral::Call(callee) = lit {
                let mut body = vec![head_query.clone()];
                for earlier in &c.body[..i] {
                    body.push(answered(earlier));
                }
                out.clauses.push(Clause {
                    head: suffixed(callee, "_query"),
                    body,
                });
            }
        }
        // Answer clause: head answered when queried and the body answered.
        let mut body = vec![head_query];
        for lit in &c.body {
            body.push(answered(lit));
        }
        out.clauses.push(Clause {
            head: suffixed(&c.head, "_ans"),
            body,
        });
    }
    frontend::standardise_heads(&mut out);
    frontend::normalise_calls(&mut out);
    out
}

fn answered(lit: &BodyLiteral) -> BodyLiteral {
    match lit {
        BodyLiteral::Call(a) => BodyLiteral::Call(suffixed(a, "_ans")),
        b => b.clone(),
    }
}
