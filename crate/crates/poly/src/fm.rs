//! Fourier-Motzkin elimination over systems of normalized constraints.
//!
//! Strict inequalities are tracked through combination: a combined constraint
//! is strict iff at least one of the combined constraints was strict.
//! Equalities are eliminated by exact substitution instead of pairwise
//! combination, which keeps the blowup down.  When several dimensions are
//! eliminated in sequence, redundant rows are removed between stages (via the
//! exact LP entailment check), which tames the double-exponential growth of
//! repeated elimination.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::constraint::{Constraint, Relation};
use crate::lp;
use crate::rational::{Int, Rational};

/// Push a constraint, filtering trivially-true ones.  Returns `false` when
/// the constraint is trivially false (the system is infeasible).
pub(crate) fn push(out: &mut Vec<Constraint>, c: Constraint) -> bool {
    match c.triviality() {
        Some(true) => true,
        Some(false) => false,
        None => {
            out.push(c);
            true
        }
    }
}

/// Drop exact duplicates and constraints dominated by a parallel one with the
/// same direction.  Cheap pruning only; full redundancy removal is done by
/// `minimize_rows` / the polyhedron minimizer.
pub(crate) fn prune(cs: &mut Vec<Constraint>) {
    cs.sort_by(|a, b| a.canonical_cmp(b));
    cs.dedup();
    let mut keep: Vec<Constraint> = Vec::with_capacity(cs.len());
    'outer: for c in cs.drain(..) {
        if c.relation() != Relation::Eq {
            for k in keep.iter_mut() {
                if k.relation() == Relation::Eq {
                    continue;
                }
                if let Some(ord) = parallel_compare(k, &c) {
                    if !ord {
                        *k = c.clone();
                    }
                    continue 'outer;
                }
            }
        }
        keep.push(c);
    }
    *cs = keep;
}

/// For two inequalities with positively-proportional coefficient vectors,
/// `Some(true)` if `a` implies `b`, `Some(false)` if `b` implies `a`;
/// `None` when not comparable.
fn parallel_compare(a: &Constraint, b: &Constraint) -> Option<bool> {
    let ta: Vec<_> = a.lhs().terms().map(|(d, c)| (d, c.clone())).collect();
    let tb: Vec<_> = b.lhs().terms().map(|(d, c)| (d, c.clone())).collect();
    if ta.len() != tb.len() || ta.is_empty() {
        return None;
    }
    // Normalized constraints share the gcd-1 property over coeffs+constant,
    // so parallel directions may still differ by a positive factor.
    let (d0, ca) = &ta[0];
    let (e0, cb) = &tb[0];
    if d0 != e0 || ca.is_positive() != cb.is_positive() {
        return None;
    }
    let factor = cb / ca; // positive if parallel
    for ((da, va), (db, vb)) in ta.iter().zip(tb.iter()) {
        if da != db || va * &factor != *vb {
            return None;
        }
    }
    // Same direction: compare constants scaled.  a: l + p >= 0, b: factor*l + q >= 0.
    let pa = a.lhs().const_term() * &factor;
    let qb = b.lhs().const_term().clone();
    // a implies b iff pa <= qb, with strictness: Gt implies Geq at equal bound.
    if pa < qb {
        Some(true)
    } else if pa == qb {
        match (a.relation(), b.relation()) {
            (_, Relation::Geq) => Some(true),
            (Relation::Gt, Relation::Gt) => Some(true),
            (Relation::Geq, Relation::Gt) => Some(false),
            _ => None,
        }
    } else {
        Some(false)
    }
}

/// True iff `sys` entails the inequality `c` (not for equalities).
pub(crate) fn entails_ineq(sys: &[Constraint], c: &Constraint) -> bool {
    if let Some(t) = c.triviality() {
        return t;
    }
    let neg = c.negation().expect("inequality");
    let mut work = sys.to_vec();
    work.push(neg);
    !satisfiable(&work)
}

/// Remove every constraint entailed by the rest of the system.
pub(crate) fn minimize_rows(cs: &mut Vec<Constraint>) {
    let mut i = 0;
    while i < cs.len() {
        let c = cs.remove(i);
        let entailed = match c.relation() {
            Relation::Eq => c.split().iter().all(|h| entails_ineq(cs, h)),
            _ => entails_ineq(cs, &c),
        };
        if !entailed {
            cs.insert(i, c);
            i += 1;
        }
    }
}

/// Eliminate dimension `d`.  Returns `None` when infeasibility is detected.
pub(crate) fn eliminate(cs: &[Constraint], d: usize) -> Option<Vec<Constraint>> {
    // Prefer substitution through an equality mentioning d.
    if let Some(eq) = cs
        .iter()
        .find(|c| c.relation() == Relation::Eq && !c.lhs().coeff(d).is_zero())
    {
        let a = eq.lhs().coeff(d);
        // lhs = a*x_d + rest = 0  =>  x_d = -rest/a
        let mut rest = eq.lhs().clone();
        rest.set_coeff(d, Rational::zero());
        let repl = -rest * (Rational::new(Int::from(1), Int::from(1)) / a);
        let mut out = Vec::with_capacity(cs.len());
        for c in cs {
            if std::ptr::eq(c, eq) {
                continue;
            }
            let nl = c.lhs().substitute(d, &repl);
            if !push(&mut out, Constraint::new(nl, c.relation())) {
                return None;
            }
        }
        prune(&mut out);
        return Some(out);
    }

    let mut keep = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for c in cs {
        let a = c.lhs().coeff(d);
        if a.is_zero() {
            keep.push(c.clone());
        } else if a.is_positive() {
            pos.push(c.clone());
        } else {
            neg.push(c.clone());
        }
    }
    for p in &pos {
        for n in &neg {
            let ap = p.lhs().coeff(d);
            let an = n.lhs().coeff(d); // negative
            // |an| * p.lhs + ap * n.lhs eliminates x_d
            let mut lhs = p.lhs().clone() * -an;
            lhs.add_scaled(n.lhs(), &ap);
            let rel = if p.relation() == Relation::Gt || n.relation() == Relation::Gt {
                Relation::Gt
            } else {
                Relation::Geq
            };
            if !push(&mut keep, Constraint::new(lhs, rel)) {
                return None;
            }
        }
    }
    prune(&mut keep);
    Some(keep)
}

/// Pick the next dimension to eliminate: the one minimizing the product of
/// positive and negative occurrence counts.
fn choose_dim(cs: &[Constraint], dims: &BTreeSet<usize>) -> usize {
    let mut best = (usize::MAX, usize::MAX);
    for &d in dims {
        // substitution via equality is essentially free
        if cs
            .iter()
            .any(|c| c.relation() == Relation::Eq && !c.lhs().coeff(d).is_zero())
        {
            return d;
        }
        let mut p = 0usize;
        let mut n = 0usize;
        for c in cs {
            let a = c.lhs().coeff(d);
            if a.is_positive() {
                p += 1;
            } else if a.is_negative() {
                n += 1;
            }
        }
        let cost = p * n;
        if cost < best.1 {
            best = (d, cost);
        }
    }
    best.0
}

/// A constraint annotated with the input rows it combines and the dimensions
/// its ancestors mention.  After any number of eliminations, a row combining
/// more than `1 + |vanished dims|` inputs is redundant (where a dimension is
/// "vanished" when some ancestor mentions it but the row itself does not),
/// which tames the double-exponential growth of repeated elimination.
#[derive(Clone, Debug)]
struct Row {
    c: Constraint,
    hist: BTreeSet<usize>,
    odims: BTreeSet<usize>,
}

impl Row {
    fn redundant_by_history(&self) -> bool {
        let present: BTreeSet<usize> = self.c.lhs().terms().map(|(d, _)| d).collect();
        let vanished = self.odims.difference(&present).count();
        self.hist.len() > 1 + vanished
    }
}

fn push_row(out: &mut Vec<Row>, r: Row) -> bool {
    match r.c.triviality() {
        Some(true) => true,
        Some(false) => false,
        None => {
            if !r.redundant_by_history() {
                out.push(r);
            }
            true
        }
    }
}

/// Exact-duplicate removal only, keeping the shortest derivation: dominance
/// pruning would interfere with the history-based redundancy bound.
fn dedup_rows(rows: &mut Vec<Row>) {
    rows.sort_by(|a, b| a.c.canonical_cmp(&b.c).then(a.hist.len().cmp(&b.hist.len())));
    rows.dedup_by(|a, b| a.c == b.c);
}

fn eliminate_rows(rows: &[Row], d: usize) -> Option<Vec<Row>> {
    // Prefer substitution through an equality mentioning d.
    if let Some(eq) = rows
        .iter()
        .find(|r| r.c.relation() == Relation::Eq && !r.c.lhs().coeff(d).is_zero())
    {
        let a = eq.c.lhs().coeff(d);
        let mut rest = eq.c.lhs().clone();
        rest.set_coeff(d, Rational::zero());
        let repl = -rest * (Rational::new(Int::from(1), Int::from(1)) / a);
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            if std::ptr::eq(r, eq) {
                continue;
            }
            if r.c.lhs().coeff(d).is_zero() {
                out.push(r.clone());
                continue;
            }
            let nl = r.c.lhs().substitute(d, &repl);
            let next = Row {
                c: Constraint::new(nl, r.c.relation()),
                hist: r.hist.union(&eq.hist).copied().collect(),
                odims: r.odims.union(&eq.odims).copied().collect(),
            };
            if !push_row(&mut out, next) {
                return None;
            }
        }
        dedup_rows(&mut out);
        return Some(out);
    }

    let mut keep = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for r in rows {
        let a = r.c.lhs().coeff(d);
        if a.is_zero() {
            keep.push(r.clone());
        } else if a.is_positive() {
            pos.push(r.clone());
        } else {
            neg.push(r.clone());
        }
    }
    for p in &pos {
        for n in &neg {
            let ap = p.c.lhs().coeff(d);
            let an = n.c.lhs().coeff(d); // negative
            let mut lhs = p.c.lhs().clone() * -an;
            lhs.add_scaled(n.c.lhs(), &ap);
            let rel = if p.c.relation() == Relation::Gt || n.c.relation() == Relation::Gt {
                Relation::Gt
            } else {
                Relation::Geq
            };
            let next = Row {
                c: Constraint::new(lhs, rel),
                hist: p.hist.union(&n.hist).copied().collect(),
                odims: p.odims.union(&n.odims).copied().collect(),
            };
            if !push_row(&mut keep, next) {
                return None;
            }
        }
    }
    dedup_rows(&mut keep);
    Some(keep)
}

/// Row-count threshold above which a completed elimination stage is reduced
/// by redundancy removal.  Keeping intermediate systems small bounds both the
/// pairwise blowup of later stages and the coefficient growth that makes the
/// exact LP expensive.
const STAGE_LIMIT: usize = 32;

/// Drop rows dominated by a parallel row.  Rows are only ever removed (the
/// dominating row and its derivation record stay untouched), so the described
/// set is preserved.
fn dominance_prune_rows(rows: &mut Vec<Row>) {
    let mut keep: Vec<Row> = Vec::with_capacity(rows.len());
    'outer: for r in rows.drain(..) {
        if r.c.relation() != Relation::Eq {
            for k in &keep {
                if k.c.relation() == Relation::Eq {
                    continue;
                }
                if parallel_compare(&k.c, &r.c) == Some(true) {
                    continue 'outer;
                }
            }
        }
        keep.push(r);
    }
    *rows = keep;
}

/// Remove rows entailed by the remaining ones (exact LP check), keeping the
/// derivation records of the survivors.
fn minimize_tracked(rows: &mut Vec<Row>) {
    let mut i = 0;
    while i < rows.len() {
        let r = rows.remove(i);
        let sys: Vec<Constraint> = rows.iter().map(|x| x.c.clone()).collect();
        let entailed = match r.c.relation() {
            Relation::Eq => r.c.split().iter().all(|h| entails_ineq(&sys, h)),
            _ => entails_ineq(&sys, &r.c),
        };
        if !entailed {
            rows.insert(i, r);
            i += 1;
        }
    }
}

/// Eliminate every dimension in `dims`.  `None` on detected infeasibility.
pub(crate) fn eliminate_all(
    cs: Vec<Constraint>,
    dims: &BTreeSet<usize>,
) -> Option<Vec<Constraint>> {
    // The feasibility check is authoritative: the history bound prunes rows
    // needed only for infeasibility certificates.
    if !satisfiable(&cs) {
        return None;
    }
    let mut eliminated = 0usize;
    let mut rows: Vec<Row> = cs
        .iter()
        .enumerate()
        .map(|(i, c)| Row {
            c: c.clone(),
            hist: BTreeSet::from([i]),
            odims: c.lhs().terms().map(|(d, _)| d).collect(),
        })
        .collect();
    loop {
        let present: BTreeSet<usize> = rows
            .iter()
            .flat_map(|r| r.c.lhs().terms().map(|(d, _)| d))
            .collect();
        let remaining: BTreeSet<usize> =
            dims.iter().copied().filter(|d| present.contains(d)).collect();
        if remaining.is_empty() {
            break;
        }
        let sys: Vec<Constraint> = rows.iter().map(|r| r.c.clone()).collect();
        let d = choose_dim(&sys, &remaining);
        rows = eliminate_rows(&rows, d)?;
        eliminated += 1;
        // the global Imbert bound: after eliminating k dimensions, a row
        // combining more than k+1 inputs is redundant
        rows.retain(|r| r.hist.len() <= 1 + eliminated);
        if rows.len() > STAGE_LIMIT {
            dominance_prune_rows(&mut rows);
            if rows.len() > STAGE_LIMIT {
                minimize_tracked(&mut rows);
            }
        }
    }
    let mut out: Vec<Constraint> = rows.into_iter().map(|r| r.c).collect();
    prune(&mut out);
    minimize_rows(&mut out);
    Some(out)
}

/// Exact satisfiability over the reals, honouring strictness.
pub(crate) fn satisfiable(cs: &[Constraint]) -> bool {
    let mut work = Vec::new();
    for c in cs {
        if !push(&mut work, c.clone()) {
            return false;
        }
    }
    lp::satisfiable(&work)
}
