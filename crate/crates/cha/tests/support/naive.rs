//! A deliberately simple Fourier-Motzkin oracle, independent of the library
//! implementation: fixed elimination order, pairwise combination only, no
//! substitution, no redundancy removal beyond duplicate dropping.

use poly::{rat, Constraint, LinearExpression, Polyhedron, Rational, Relation};

/// A raw inequality `coeffs·x + konst >= 0` (`> 0` when strict).  Equalities
/// are represented as two inequalities.
#[derive(Clone, Debug)]
pub struct RawIneq {
    pub coeffs: Vec<i64>,
    pub konst: i64,
    pub strict: bool,
}

#[derive(Clone)]
struct R {
    coeffs: Vec<Rational>,
    konst: Rational,
    strict: bool,
}

fn to_r(cs: &[RawIneq]) -> Vec<R> {
    cs.iter()
        .map(|c| R {
            coeffs: c.coeffs.iter().map(|&a| rat(a)).collect(),
            konst: rat(c.konst),
            strict: c.strict,
        })
        .collect()
}

/// Eliminate dimension `d` by pairwise combination.  Returns `None` when a
/// trivially false ground row appears.
fn eliminate(sys: Vec<R>, d: usize, dim: usize) -> Option<Vec<R>> {
    let mut zero = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for c in sys {
        if c.coeffs[d] == rat(0) {
            zero.push(c);
        } else if c.coeffs[d] > rat(0) {
            pos.push(c);
        } else {
            neg.push(c);
        }
    }
    for p in &pos {
        for n in &neg {
            let ap = p.coeffs[d].clone();
            let an = -n.coeffs[d].clone();
            let mut coeffs = vec![rat(0); dim];
            for i in 0..dim {
                coeffs[i] = &p.coeffs[i] * &an + &n.coeffs[i] * &ap;
            }
            let konst = &p.konst * &an + &n.konst * &ap;
            zero.push(R {
                coeffs,
                konst,
                strict: p.strict || n.strict,
            });
        }
    }
    // keep the blowup in check without changing the answer
    let mut seen = std::collections::HashSet::new();
    let mut kept = Vec::with_capacity(zero.len());
    for c in zero {
        if c.coeffs.iter().all(|a| *a == rat(0)) {
            let holds = if c.strict { c.konst > rat(0) } else { c.konst >= rat(0) };
            if !holds {
                return None;
            }
            continue;
        }
        let key = format!(
            "{:?} {} {}",
            c.coeffs.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            c.konst,
            c.strict
        );
        if seen.insert(key) {
            kept.push(c);
        }
    }
    Some(kept)
}

pub fn naive_sat(cs: &[RawIneq], dim: usize) -> bool {
    let mut sys = to_r(cs);
    for d in (0..dim).rev() {
        match eliminate(sys, d, dim) {
            Some(s) => sys = s,
            None => return false,
        }
    }
    sys.iter()
        .all(|c| if c.strict { c.konst > rat(0) } else { c.konst >= rat(0) })
}

pub fn naive_entails(sys: &[RawIneq], c: &RawIneq, dim: usize) -> bool {
    let neg = RawIneq {
        coeffs: c.coeffs.iter().map(|a| -a).collect(),
        konst: -c.konst,
        strict: !c.strict,
    };
    let mut work = sys.to_vec();
    work.push(neg);
    !naive_sat(&work, dim)
}

/// `inner ⊆ outer`, assuming `inner` satisfiable.
pub fn naive_includes(outer: &[RawIneq], inner: &[RawIneq], dim: usize) -> bool {
    outer.iter().all(|c| naive_entails(inner, c, dim))
}

/// Oracle projection: eliminate `drop` (a single dimension) and return the
/// rows as rational-coefficient raw constraints scaled back to integers.
/// `None` when the system is unsatisfiable.
pub fn naive_project(cs: &[RawIneq], dim: usize, drop: usize) -> Option<Vec<RawIneq>> {
    if !naive_sat(cs, dim) {
        return None;
    }
    let sys = eliminate(to_r(cs), drop, dim)?;
    let mut out = Vec::new();
    for c in sys {
        // scale to integer coefficients
        let mut denom = 1i64;
        for a in c.coeffs.iter().chain(std::iter::once(&c.konst)) {
            let d = i64::try_from(a.denom().clone()).unwrap();
            denom = denom / gcd(denom, d) * d;
        }
        let scale = rat(denom);
        out.push(RawIneq {
            coeffs: c
                .coeffs
                .iter()
                .map(|a| i64::try_from((a * &scale).numer().clone()).unwrap())
                .collect(),
            konst: i64::try_from((&c.konst * &scale).numer().clone()).unwrap(),
            strict: c.strict,
        });
    }
    Some(out)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

pub fn to_poly(cs: &[RawIneq], dim: usize) -> Polyhedron {
    let constraints = cs
        .iter()
        .map(|c| {
            let mut e = LinearExpression::constant(rat(c.konst));
            for (d, &a) in c.coeffs.iter().enumerate() {
                e.set_coeff(d, rat(a));
            }
            if c.strict {
                Constraint::gt(e)
            } else {
                Constraint::geq(e)
            }
        })
        .collect();
    Polyhedron::make(dim, constraints).unwrap()
}

/// Raw form of a library polyhedron (splitting equalities).  The coefficients
/// of a normalized system are integers.
pub fn to_raw(p: &Polyhedron) -> Vec<RawIneq> {
    assert!(!p.is_empty());
    let dim = p.dimension();
    let mut out = Vec::new();
    for c in p.constraints() {
        for half in c.split() {
            let mut coeffs = vec![0i64; dim];
            for (d, a) in half.lhs().terms() {
                assert_eq!(*a.denom(), 1.into());
                coeffs[d] = i64::try_from(a.numer().clone()).unwrap();
            }
            let konst = i64::try_from(half.lhs().const_term().numer().clone()).unwrap();
            out.push(RawIneq {
                coeffs,
                konst,
                strict: half.relation() == Relation::Gt,
            });
        }
    }
    out
}
