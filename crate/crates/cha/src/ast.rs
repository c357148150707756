//! Abstract syntax for constraint logic programs.

use std::fmt;

use num_bigint::BigInt;

/// A term: variable, integer, arithmetic expression, or compound term.
/// Lists are compound terms over `'.'/2` and `'[]'/0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Int(BigInt),
    Arith(ArithOp, Box<Term>, Box<Term>),
    Compound(String, Vec<Term>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Arithmetic right shift `>>`
    Shr,
    /// Bitwise or `\/`
    Or,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
            ArithOp::Shr => ">>",
            ArithOp::Or => "\\/",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            ArithOp::Add | ArithOp::Sub | ArithOp::Or => 50,
            ArithOp::Mul | ArithOp::Div | ArithOp::Shr => 40,
        }
    }
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn int(v: i64) -> Term {
        Term::Int(BigInt::from(v))
    }

    pub fn nil() -> Term {
        Term::Compound("[]".to_string(), Vec::new())
    }

    pub fn cons(head: Term, tail: Term) -> Term {
        Term::Compound(".".to_string(), vec![head, tail])
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// Collect variable names in first-occurrence order.
    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Int(_) => {}
            Term::Arith(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Term::Compound(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    /// True when the term contains a compound subterm (so it denotes a data
    /// structure rather than an arithmetic value).
    pub fn has_compound(&self) -> bool {
        match self {
            Term::Var(_) | Term::Int(_) => false,
            Term::Compound(..) => true,
            Term::Arith(_, l, r) => l.has_compound() || r.has_compound(),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{}", v),
            Term::Int(n) => write!(f, "{}", n),
            Term::Arith(op, l, r) => {
                let p = op.precedence();
                if p > prec {
                    write!(f, "(")?;
                }
                l.fmt_prec(f, p)?;
                write!(f, "{}", op.symbol())?;
                r.fmt_prec(f, p.saturating_sub(1))?;
                if p > prec {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Term::Compound(name, args) if name == "[]" && args.is_empty() => write!(f, "[]"),
            Term::Compound(name, args) if name == "." && args.len() == 2 => {
                // re-sugar list notation
                write!(f, "[")?;
                args[0].fmt_prec(f, u8::MAX)?;
                let mut tail = &args[1];
                loop {
                    match tail {
                        Term::Compound(n, a) if n == "[]" && a.is_empty() => break,
                        Term::Compound(n, a) if n == "." && a.len() == 2 => {
                            write!(f, ",")?;
                            a[0].fmt_prec(f, u8::MAX)?;
                            tail = &a[1];
                        }
                        other => {
                            write!(f, "|")?;
                            other.fmt_prec(f, u8::MAX)?;
                            break;
                        }
                    }
                }
                write!(f, "]")
            }
            Term::Compound(name, args) => {
                write!(f, "{}", name)?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        a.fmt_prec(f, u8::MAX)?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, u8::MAX)
    }
}

/// Built-in binary relations appearing in clause bodies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinRel {
    /// `is` evaluation
    Is,
    /// `=` unification
    Unify,
    /// `=:=` arithmetic equality
    ArithEq,
    Lt,
    Gt,
    Le,
    Ge,
    /// `\==` syntactic disequality
    NotUnify,
    /// `=\=` arithmetic disequality
    ArithNeq,
}

impl BuiltinRel {
    pub fn symbol(self) -> &'static str {
        match self {
            BuiltinRel::Is => " is ",
            BuiltinRel::Unify => "=",
            BuiltinRel::ArithEq => "=:=",
            BuiltinRel::Lt => "<",
            BuiltinRel::Gt => ">",
            BuiltinRel::Le => "=<",
            BuiltinRel::Ge => ">=",
            BuiltinRel::NotUnify => "\\==",
            BuiltinRel::ArithNeq => "=\\=",
        }
    }
}

/// A user-defined predicate call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub name: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn key(&self) -> (String, usize) {
        (self.name.clone(), self.args.len())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", a)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BodyLiteral {
    Call(Atom),
    Builtin(BuiltinRel, Term, Term),
}

impl fmt::Display for BodyLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyLiteral::Call(a) => write!(f, "{}", a),
            BodyLiteral::Builtin(rel, l, r) => write!(f, "{}{}{}", l, rel.symbol(), r),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub head: Atom,
    pub body: Vec<BodyLiteral>,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() {
            write!(f, " :- ")?;
            for (i, l) in self.body.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", l)?;
            }
        }
        write!(f, ".")
    }
}

/// A program: clauses plus the predicate index in first-definition order.
#[derive(Clone, Debug, Default)]
pub struct Program {
    pub clauses: Vec<Clause>,
}

impl Program {
    /// Predicates in order of first definition.
    pub fn predicates(&self) -> Vec<(String, usize)> {
        let mut out: Vec<(String, usize)> = Vec::new();
        for c in &self.clauses {
            let k = c.head.key();
            if !out.contains(&k) {
                out.push(k);
            }
        }
        out
    }

    /// Clause indices defining the given predicate.
    pub fn clauses_of(&self, pred: &(String, usize)) -> Vec<usize> {
        self.clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| c.head.key() == *pred)
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{}", c)?;
        }
        Ok(())
    }
}
