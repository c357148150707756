//! Parser for the constraint-logic-program input syntax.
//!
//! Programs are sequences of clauses `head :- body.` (or facts `head.`).
//! Bodies mix predicate calls with arithmetic builtins (`is`, `=`, `=:=`,
//! `<`, `>`, `=<`, `>=`, `\==`, `=\=`).  Arithmetic expressions support
//! `+ - * / >> \/` with the usual precedences, and list syntax desugars to
//! `'.'/2` and `'[]'/0`.  Control constructs (cut, disjunction,
//! if-then-else, negation) are rejected with a targeted error.

use num_bigint::BigInt;
use thiserror::Error;

use crate::ast::{ArithOp, Atom, BodyLiteral, BuiltinRel, Clause, Program, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}:{col}: unexpected character `{ch}`")]
    UnexpectedChar { line: usize, col: usize, ch: char },
    #[error("line {line}:{col}: unexpected token `{token}`{expected}")]
    UnexpectedToken {
        line: usize,
        col: usize,
        token: String,
        expected: String,
    },
    #[error("line {line}:{col}: unexpected end of input")]
    UnexpectedEof { line: usize, col: usize },
    #[error("line {line}:{col}: `{feature}` is not supported")]
    UnsupportedFeature {
        line: usize,
        col: usize,
        feature: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Atom(String),
    Var(String),
    Int(BigInt),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Bar,
    Dot,
    Neck, // :-
    Is,
    Unify,    // =
    ArithEq,  // =:=
    Lt,
    Gt,
    Le, // =<
    Ge, // >=
    NotUnify, // \==
    ArithNeq, // =\=
    Plus,
    Minus,
    Star,
    Slash,
    Shr,   // >>
    BitOr, // \/
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Atom(s) => s.clone(),
            Tok::Var(s) => s.clone(),
            Tok::Int(n) => n.to_string(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::LBracket => "[".into(),
            Tok::RBracket => "]".into(),
            Tok::Comma => ",".into(),
            Tok::Bar => "|".into(),
            Tok::Dot => ".".into(),
            Tok::Neck => ":-".into(),
            Tok::Is => "is".into(),
            Tok::Unify => "=".into(),
            Tok::ArithEq => "=:=".into(),
            Tok::Lt => "<".into(),
            Tok::Gt => ">".into(),
            Tok::Le => "=<".into(),
            Tok::Ge => ">=".into(),
            Tok::NotUnify => "\\==".into(),
            Tok::ArithNeq => "=\\=".into(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Slash => "/".into(),
            Tok::Shr => ">>".into(),
            Tok::BitOr => "\\/".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

type Spanned = (Tok, usize, usize);

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn unsupported(&self, feature: &str, line: usize, col: usize) -> ParseError {
        ParseError::UnsupportedFeature {
            line,
            col,
            feature: feature.to_string(),
        }
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        loop {
            while let Some(c) = self.peek() {
                if c == b'%' {
                    while let Some(c) = self.peek() {
                        if c == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                } else if c.is_ascii_whitespace() {
                    self.bump();
                } else {
                    break;
                }
            }
            let (line, col) = (self.line, self.col);
            let c = match self.peek() {
                None => break,
                Some(c) => c,
            };
            let tok = match c {
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                b'[' => {
                    self.bump();
                    Tok::LBracket
                }
                b']' => {
                    self.bump();
                    Tok::RBracket
                }
                b',' => {
                    self.bump();
                    Tok::Comma
                }
                b'|' => {
                    self.bump();
                    Tok::Bar
                }
                b'+' => {
                    self.bump();
                    Tok::Plus
                }
                b'*' => {
                    self.bump();
                    Tok::Star
                }
                b'/' => {
                    self.bump();
                    Tok::Slash
                }
                b'!' => return Err(self.unsupported("! (cut)", line, col)),
                b';' => return Err(self.unsupported("; (disjunction)", line, col)),
                b'.' => {
                    self.bump();
                    Tok::Dot
                }
                b'-' => {
                    self.bump();
                    if self.peek() == Some(b'>') {
                        return Err(self.unsupported("-> (if-then-else)", line, col));
                    }
                    Tok::Minus
                }
                b':' => {
                    self.bump();
                    if self.peek() == Some(b'-') {
                        self.bump();
                        Tok::Neck
                    } else {
                        return Err(ParseError::UnexpectedChar { line, col, ch: ':' });
                    }
                }
                b'=' => {
                    self.bump();
                    match self.peek() {
                        Some(b'<') => {
                            self.bump();
                            Tok::Le
                        }
                        Some(b':') => {
                            self.bump();
                            if self.peek() == Some(b'=') {
                                self.bump();
                                Tok::ArithEq
                            } else {
                                return Err(ParseError::UnexpectedChar { line, col, ch: ':' });
                            }
                        }
                        Some(b'\\') => {
                            self.bump();
                            if self.peek() == Some(b'=') {
                                self.bump();
                                Tok::ArithNeq
                            } else {
                                return Err(ParseError::UnexpectedChar { line, col, ch: '\\' });
                            }
                        }
                        _ => Tok::Unify,
                    }
                }
                b'<' => {
                    self.bump();
                    Tok::Lt
                }
                b'>' => {
                    self.bump();
                    if self.peek() == Some(b'>') {
                        self.bump();
                        Tok::Shr
                    } else if self.peek() == Some(b'=') {
                        self.bump();
                        Tok::Ge
                    } else {
                        Tok::Gt
                    }
                }
                b'\\' => {
                    self.bump();
                    match self.peek() {
                        Some(b'/') => {
                            self.bump();
                            Tok::BitOr
                        }
                        Some(b'=') => {
                            self.bump();
                            if self.peek() == Some(b'=') {
                                self.bump();
                                Tok::NotUnify
                            } else {
                                return Err(self.unsupported("\\= (disunification)", line, col));
                            }
                        }
                        Some(b'+') => {
                            return Err(self.unsupported("\\+ (negation as failure)", line, col))
                        }
                        _ => return Err(ParseError::UnexpectedChar { line, col, ch: '\\' }),
                    }
                }
                b'0'..=b'9' => {
                    let mut s = String::new();
                    while let Some(c) = self.peek() {
                        if c.is_ascii_digit() {
                            s.push(c as char);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Tok::Int(s.parse().expect("digits"))
                }
                b'a'..=b'z' => {
                    let s = self.ident();
                    if s == "is" {
                        Tok::Is
                    } else {
                        Tok::Atom(s)
                    }
                }
                b'A'..=b'Z' | b'_' => Tok::Var(self.ident()),
                other => {
                    return Err(ParseError::UnexpectedChar {
                        line,
                        col,
                        ch: other as char,
                    })
                }
            };
            out.push((tok, line, col));
        }
        Ok(out)
    }

    fn ident(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' {
                s.push(c as char);
                self.bump();
            } else {
                break;
            }
        }
        s
    }
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    /// Counter for anonymous `_` variables, program-wide so names stay unique.
    anon: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or((1, 1))
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let (line, col) = self.here();
        match self.tokens.get(self.pos) {
            None => ParseError::UnexpectedEof { line, col },
            Some((t, _, _)) => ParseError::UnexpectedToken {
                line,
                col,
                token: t.describe(),
                expected: format!(", expected {}", expected),
            },
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn fresh_anon(&mut self) -> String {
        self.anon += 1;
        format!("_{}", self.anon)
    }

    fn clause(&mut self) -> Result<Clause, ParseError> {
        let head = self.atom()?;
        let body = if self.peek() == Some(&Tok::Neck) {
            self.bump();
            let mut body = vec![self.literal()?];
            while self.peek() == Some(&Tok::Comma) {
                self.bump();
                body.push(self.literal()?);
            }
            body
        } else {
            Vec::new()
        };
        self.expect(&Tok::Dot, "`.` at end of clause")?;
        Ok(Clause { head, body })
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let name = match self.peek() {
            Some(Tok::Atom(_)) => match self.bump() {
                Some(Tok::Atom(s)) => s,
                _ => unreachable!(),
            },
            _ => return Err(self.unexpected("a predicate name")),
        };
        let args = if self.peek() == Some(&Tok::LParen) {
            self.bump();
            let mut args = vec![self.term()?];
            while self.peek() == Some(&Tok::Comma) {
                self.bump();
                args.push(self.term()?);
            }
            self.expect(&Tok::RParen, "`)`")?;
            args
        } else {
            Vec::new()
        };
        Ok(Atom { name, args })
    }

    /// A body literal: either `expr REL expr` or a predicate call.
    fn literal(&mut self) -> Result<BodyLiteral, ParseError> {
        let left = self.term()?;
        let rel = match self.peek() {
            Some(Tok::Is) => Some(BuiltinRel::Is),
            Some(Tok::Unify) => Some(BuiltinRel::Unify),
            Some(Tok::ArithEq) => Some(BuiltinRel::ArithEq),
            Some(Tok::Lt) => Some(BuiltinRel::Lt),
            Some(Tok::Gt) => Some(BuiltinRel::Gt),
            Some(Tok::Le) => Some(BuiltinRel::Le),
            Some(Tok::Ge) => Some(BuiltinRel::Ge),
            Some(Tok::NotUnify) => Some(BuiltinRel::NotUnify),
            Some(Tok::ArithNeq) => Some(BuiltinRel::ArithNeq),
            _ => None,
        };
        match rel {
            Some(rel) => {
                self.bump();
                let right = self.term()?;
                Ok(BodyLiteral::Builtin(rel, left, right))
            }
            None => match left {
                Term::Compound(name, args) if name != "." && name != "[]" => {
                    Ok(BodyLiteral::Call(Atom { name, args }))
                }
                _ => Err(self.unexpected("a call or a builtin relation")),
            },
        }
    }

    /// Additive level: `+`, `-`, `\/` (left associative).
    fn term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.factor()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => ArithOp::Add,
                Some(Tok::Minus) => ArithOp::Sub,
                Some(Tok::BitOr) => ArithOp::Or,
                _ => break,
            };
            self.bump();
            let rhs = self.factor()?;
            t = Term::Arith(op, Box::new(t), Box::new(rhs));
        }
        Ok(t)
    }

    /// Multiplicative level: `*`, `/`, `>>` (left associative).
    fn factor(&mut self) -> Result<Term, ParseError> {
        let mut t = self.primary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => ArithOp::Mul,
                Some(Tok::Slash) => ArithOp::Div,
                Some(Tok::Shr) => ArithOp::Shr,
                _ => break,
            };
            self.bump();
            let rhs = self.primary()?;
            t = Term::Arith(op, Box::new(t), Box::new(rhs));
        }
        Ok(t)
    }

    fn primary(&mut self) -> Result<Term, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(_)) => match self.bump() {
                Some(Tok::Int(n)) => Ok(Term::Int(n)),
                _ => unreachable!(),
            },
            Some(Tok::Minus) => {
                self.bump();
                let t = self.primary()?;
                Ok(match t {
                    Term::Int(n) => Term::Int(-n),
                    other => Term::Arith(
                        ArithOp::Sub,
                        Box::new(Term::Int(BigInt::from(0))),
                        Box::new(other),
                    ),
                })
            }
            Some(Tok::Var(v)) => {
                self.bump();
                if v == "_" {
                    Ok(Term::Var(self.fresh_anon()))
                } else {
                    Ok(Term::Var(v))
                }
            }
            Some(Tok::LParen) => {
                self.bump();
                let t = self.term()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::LBracket) => {
                self.bump();
                if self.peek() == Some(&Tok::RBracket) {
                    self.bump();
                    return Ok(Term::nil());
                }
                let mut items = vec![self.term()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.bump();
                    items.push(self.term()?);
                }
                let tail = if self.peek() == Some(&Tok::Bar) {
                    self.bump();
                    self.term()?
                } else {
                    Term::nil()
                };
                self.expect(&Tok::RBracket, "`]`")?;
                let mut t = tail;
                for item in items.into_iter().rev() {
                    t = Term::cons(item, t);
                }
                Ok(t)
            }
            Some(Tok::Atom(_)) => {
                let a = self.atom()?;
                Ok(Term::Compound(a.name, a.args))
            }
            _ => Err(self.unexpected("a term")),
        }
    }
}

/// Parse a whole program.  Clause heads are standardised afterwards by the
/// frontend; this function only builds the raw syntax tree.
pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    let tokens = Lexer::new(src).tokens()?;
    let mut p = Parser {
        tokens,
        pos: 0,
        anon: 0,
    };
    let mut clauses = Vec::new();
    while p.peek().is_some() {
        clauses.push(p.clause()?);
    }
    Ok(Program { clauses })
}

/// Parse a single clause (used for goals given on the command line).
pub fn parse_clause(src: &str) -> Result<Clause, ParseError> {
    let tokens = Lexer::new(src).tokens()?;
    let mut p = Parser {
        tokens,
        pos: 0,
        anon: 0,
    };
    let c = p.clause()?;
    if p.peek().is_some() {
        return Err(p.unexpected("end of input"));
    }
    Ok(c)
}
