use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::constraint::{Constraint, Relation};
use crate::error::PolyError;
use crate::fm;
use crate::linexpr::LinearExpression;
use crate::rational::{Int, Rational};

/// An NNC convex polyhedron in constraint representation.
///
/// The stored system is always canonical: constraints are normalized,
/// implicit equalities are recognised, no constraint is entailed by the
/// others, and the system is sorted.  The empty polyhedron stores no
/// constraints and is flagged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron {
    dim: usize,
    constraints: Vec<Constraint>,
    empty: bool,
}

/// Default naming of dimensions for display: A, B, ..., Z, A1, B1, ...
pub fn dim_name(d: usize) -> String {
    let letter = (b'A' + (d % 26) as u8) as char;
    if d < 26 {
        letter.to_string()
    } else {
        format!("{}{}", letter, d / 26)
    }
}

impl Polyhedron {
    /// The universe (full space) of the given dimension.
    pub fn universe(dim: usize) -> Polyhedron {
        Polyhedron {
            dim,
            constraints: Vec::new(),
            empty: false,
        }
    }

    /// The empty polyhedron of the given dimension.
    pub fn empty(dim: usize) -> Polyhedron {
        Polyhedron {
            dim,
            constraints: Vec::new(),
            empty: true,
        }
    }

    /// Canonicalize a constraint system into a polyhedron.
    pub fn make(dim: usize, constraints: Vec<Constraint>) -> Result<Polyhedron, PolyError> {
        let mut cs = Vec::with_capacity(constraints.len());
        for c in constraints {
            if let Some(d) = c.lhs().max_dim() {
                if d >= dim {
                    return Err(PolyError::DimensionOutOfRange { dim: d, ambient: dim });
                }
            }
            if !fm::push(&mut cs, c) {
                return Ok(Polyhedron::empty(dim));
            }
        }
        fm::prune(&mut cs);
        if !fm::satisfiable(&cs) {
            return Ok(Polyhedron::empty(dim));
        }
        let mut cs = minimize(cs);
        cs.sort_by(|a, b| a.canonical_cmp(b));
        Ok(Polyhedron {
            dim,
            constraints: cs,
            empty: false,
        })
    }

    /// Canonicalize a system known to be satisfiable and free of redundant
    /// rows (as produced by `fm::eliminate_all`): detect implicit equalities,
    /// prune, and sort — skipping the LP redundancy sweep of `make`.  Since
    /// no row is semantically redundant, the result equals `make`'s.
    pub(crate) fn make_minimized(dim: usize, mut cs: Vec<Constraint>) -> Polyhedron {
        let snapshot = cs.clone();
        for c in cs.iter_mut() {
            if c.relation() == Relation::Geq {
                let reverse = Constraint::geq(-c.lhs().clone());
                if entails_ineq(&snapshot, &reverse) {
                    *c = Constraint::eq(c.lhs().clone());
                }
            }
        }
        fm::prune(&mut cs);
        cs.sort_by(|a, b| a.canonical_cmp(b));
        Polyhedron {
            dim,
            constraints: cs,
            empty: false,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// The minimized constraint system (empty slice for the universe and for
    /// the empty polyhedron; check `is_empty` to tell them apart).
    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn is_universe(&self) -> bool {
        !self.empty && self.constraints.is_empty()
    }

    /// Number of constraints in the minimized system (equalities count once).
    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    fn check_dim(&self, other: &Polyhedron) -> Result<(), PolyError> {
        if self.dim != other.dim {
            return Err(PolyError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    /// Set intersection: `con(C1 ∪ C2)`.
    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron, PolyError> {
        self.check_dim(other)?;
        if self.empty || other.empty {
            return Ok(Polyhedron::empty(self.dim));
        }
        let mut cs = self.constraints.clone();
        cs.extend(other.constraints.iter().cloned());
        Polyhedron::make(self.dim, cs)
    }

    /// True iff every point of the polyhedron satisfies `c`.
    pub fn entails(&self, c: &Constraint) -> Result<bool, PolyError> {
        if let Some(d) = c.lhs().max_dim() {
            if d >= self.dim {
                return Err(PolyError::DimensionOutOfRange { dim: d, ambient: self.dim });
            }
        }
        if self.empty {
            return Ok(true);
        }
        if let Some(t) = c.triviality() {
            return Ok(t);
        }
        match c.relation() {
            Relation::Eq => {
                for half in c.split() {
                    if !self.entails(&half)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => {
                let neg = c.negation().expect("inequality");
                let mut cs = self.constraints.clone();
                cs.push(neg);
                Ok(!fm::satisfiable(&cs))
            }
        }
    }

    /// Set inclusion: `inner ⊆ self`.
    pub fn includes(&self, inner: &Polyhedron) -> Result<bool, PolyError> {
        self.check_dim(inner)?;
        if inner.empty {
            return Ok(true);
        }
        if self.empty {
            return Ok(false);
        }
        for c in &self.constraints {
            if !inner.entails(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Semantic equality: mutual inclusion.
    pub fn same_set(&self, other: &Polyhedron) -> Result<bool, PolyError> {
        Ok(self.includes(other)? && other.includes(self)?)
    }

    /// Fourier-Motzkin elimination of the listed dimensions; the remaining
    /// dimensions are compacted downwards in order.
    pub fn project_out(&self, dims: &BTreeSet<usize>) -> Polyhedron {
        let dims: BTreeSet<usize> = dims.iter().copied().filter(|d| *d < self.dim).collect();
        let new_dim = self.dim - dims.len();
        if self.empty {
            return Polyhedron::empty(new_dim);
        }
        let cs = fm::eliminate_all(self.constraints.clone(), &dims)
            .expect("projection of a non-empty polyhedron is non-empty");
        let mut mapping = BTreeMap::new();
        let mut next = 0usize;
        for d in 0..self.dim {
            if !dims.contains(&d) {
                mapping.insert(d, next);
                next += 1;
            }
        }
        let remapped: Vec<Constraint> = cs
            .into_iter()
            .map(|c| {
                let lhs = c.lhs().remap(&mapping).expect("projected dims eliminated");
                Constraint::new(lhs, c.relation())
            })
            .collect();
        Polyhedron::make_minimized(new_dim, remapped)
    }

    /// Rewrite dimensions under an injective partial map into a space of
    /// dimension `new_dim`.  Constrained dimensions must be mapped.
    pub fn remap(
        &self,
        mapping: &BTreeMap<usize, usize>,
        new_dim: usize,
    ) -> Result<Polyhedron, PolyError> {
        let mut targets = BTreeSet::new();
        for (_, t) in mapping {
            if *t >= new_dim || !targets.insert(*t) {
                return Err(PolyError::BadMapping);
            }
        }
        if self.empty {
            return Ok(Polyhedron::empty(new_dim));
        }
        let mut cs = Vec::with_capacity(self.constraints.len());
        for c in &self.constraints {
            let lhs = c.lhs().remap(mapping).ok_or_else(|| {
                let d = c
                    .lhs()
                    .terms()
                    .map(|(d, _)| d)
                    .find(|d| !mapping.contains_key(d))
                    .unwrap_or(0);
                PolyError::UnmappedDimension { dim: d }
            })?;
            cs.push(Constraint::new(lhs, c.relation()));
        }
        Polyhedron::make(new_dim, cs)
    }

    /// Embed into a larger space keeping dimension indices.
    pub fn embed(&self, new_dim: usize) -> Result<Polyhedron, PolyError> {
        let mapping: BTreeMap<usize, usize> = (0..self.dim).map(|d| (d, d)).collect();
        self.remap(&mapping, new_dim)
    }

    /// Convex polyhedral hull: the smallest NNC polyhedron containing both.
    ///
    /// Computed with the lifting construction: with multipliers λ1, λ2 >= 0,
    /// λ1 + λ2 = 1 and scaled copies y_i of the variables satisfying the
    /// homogenized constraint systems, x = y1 + y2; the auxiliary dimensions
    /// are then projected out.  Strict inequalities are relaxed during
    /// lifting and restored by an entailment post-pass per facet.
    pub fn convex_hull(&self, other: &Polyhedron) -> Result<Polyhedron, PolyError> {
        self.check_dim(other)?;
        if self.empty {
            return Ok(other.clone());
        }
        if other.empty {
            return Ok(self.clone());
        }
        // The common cases during fixpoint iteration are subsumptions; both
        // checks are far cheaper than the lifting construction below.
        if self.includes(other)? {
            return Ok(self.clone());
        }
        if other.includes(self)? {
            return Ok(other.clone());
        }
        let n = self.dim;
        // dims 0..n: x, dims n..2n: y (the scaled copy for self), dim 2n: λ.
        // The copy for `other` is x - y with multiplier 1 - λ.
        let lambda = 2 * n;
        let mut cs: Vec<Constraint> = Vec::new();
        cs.push(Constraint::geq(LinearExpression::var(lambda)));
        cs.push(Constraint::geq(
            LinearExpression::constant(Rational::one()) - LinearExpression::var(lambda),
        ));
        let relax = |r: Relation| match r {
            Relation::Gt => Relation::Geq,
            r => r,
        };
        for c in &self.constraints {
            // a·y + k·λ rel 0
            let mut lhs = LinearExpression::zero();
            for (d, a) in c.lhs().terms() {
                lhs.set_coeff(n + d, a.clone());
            }
            lhs.add_scaled(
                &LinearExpression::var(lambda),
                c.lhs().const_term(),
            );
            cs.push(Constraint::new(lhs, relax(c.relation())));
        }
        for c in &other.constraints {
            // a·(x - y) + k·(1 - λ) rel 0
            let mut lhs = LinearExpression::constant(c.lhs().const_term().clone());
            for (d, a) in c.lhs().terms() {
                lhs.set_coeff(d, a.clone());
                lhs.set_coeff(n + d, -a.clone());
            }
            lhs.add_scaled(&LinearExpression::var(lambda), &-c.lhs().const_term().clone());
            cs.push(Constraint::new(lhs, relax(c.relation())));
        }
        let aux: BTreeSet<usize> = (n..=lambda).collect();
        let closed = fm::eliminate_all(cs, &aux).expect("hull of non-empty arguments");
        let closed = Polyhedron::make_minimized(n, closed);
        // The hull of two closed polyhedra is closed: strictness can only
        // come from a strict constraint of one of the arguments.
        let any_strict = |p: &Polyhedron| {
            p.constraints.iter().any(|c| c.relation() == Relation::Gt)
        };
        if !any_strict(self) && !any_strict(other) {
            return Ok(closed);
        }
        // Facet strictness: a facet stays non-strict iff one of the arguments
        // attains equality on it, i.e. fails to entail the strict version.
        let mut out = Vec::with_capacity(closed.constraints.len());
        for c in &closed.constraints {
            if c.relation() == Relation::Geq {
                let strict = Constraint::gt(c.lhs().clone());
                if self.entails(&strict)? && other.entails(&strict)? {
                    out.push(strict);
                    continue;
                }
            }
            out.push(c.clone());
        }
        Polyhedron::make(n, out)
    }

    /// The standard widening with the Halbwachs refinement, over the
    /// inequality decompositions of the minimized systems: keep the
    /// constraints of `self` still entailed by `grown`, plus constraints of
    /// `grown` that can replace one of `self`'s without changing `self`.
    ///
    /// Callers guarantee `self ⊆ grown`; widening from the empty polyhedron
    /// returns `grown`.
    pub fn widen_standard(&self, grown: &Polyhedron) -> Result<Polyhedron, PolyError> {
        self.check_dim(grown)?;
        if self.empty {
            return Ok(grown.clone());
        }
        let c1: Vec<Constraint> = self
            .constraints
            .iter()
            .flat_map(|c| c.split())
            .collect();
        let c2: Vec<Constraint> = grown
            .constraints
            .iter()
            .flat_map(|c| c.split())
            .collect();
        let mut kept: Vec<Constraint> = Vec::new();
        for c in &c1 {
            if grown.entails(c)? {
                kept.push(c.clone());
            }
        }
        // Halbwachs refinement: keep c in C2 if swapping it for some c' in C1
        // leaves the polyhedron unchanged.  Since self ⊆ grown, self entails
        // every c in C2, so con((C1 \ {drop}) ∪ {c}) always contains self and
        // equality holds iff the swapped system still entails `drop`.
        for c in &c2 {
            if kept.contains(c) {
                continue;
            }
            let mut take = false;
            for drop in &c1 {
                let mut sys: Vec<Constraint> =
                    c1.iter().filter(|k| *k != drop).cloned().collect();
                sys.push(c.clone());
                if entails_ineq(&sys, drop) {
                    take = true;
                    break;
                }
            }
            if take {
                kept.push(c.clone());
            }
        }
        Polyhedron::make(self.dim, kept)
    }

    /// Widening up-to: the standard widening intersected with the threshold
    /// constraints of `bound` still entailed by `grown`.
    pub fn widen_up_to(
        &self,
        grown: &Polyhedron,
        bound: &Polyhedron,
    ) -> Result<Polyhedron, PolyError> {
        self.check_dim(grown)?;
        self.check_dim(bound)?;
        let widened = self.widen_standard(grown)?;
        if widened.is_empty() {
            return Ok(widened);
        }
        let mut cs = widened.constraints.clone();
        for c in bound.constraints() {
            if grown.entails(c)? {
                cs.push(c.clone());
            }
        }
        Polyhedron::make(self.dim, cs)
    }

    /// Exact lower and upper bounds of a single dimension, `None` meaning
    /// unbounded on that side.  The flags tell whether the bound is attained
    /// (false for a strict bound).  Returns `None` for the empty polyhedron.
    pub fn dim_bounds(&self, d: usize) -> Option<((Option<Rational>, bool), (Option<Rational>, bool))> {
        if self.empty || d >= self.dim {
            return None;
        }
        let others: BTreeSet<usize> = (0..self.dim).filter(|x| *x != d).collect();
        let cs = fm::eliminate_all(self.constraints.clone(), &others)
            .expect("non-empty polyhedron");
        let mut lower: Option<(Rational, bool)> = None;
        let mut upper: Option<(Rational, bool)> = None;
        for c in &cs {
            let a = c.lhs().coeff(d);
            if a.is_zero() {
                continue;
            }
            let bound = -c.lhs().const_term() / &a;
            let attained = c.relation() != Relation::Gt;
            if a.is_positive() || c.relation() == Relation::Eq {
                // a*x + k >= 0  =>  x >= -k/a (for positive a)
                let b = bound.clone();
                let better = match &lower {
                    None => true,
                    Some((cur, att)) => b > *cur || (b == *cur && *att && !attained),
                };
                if better {
                    lower = Some((b, attained));
                }
            }
            if a.is_negative() || c.relation() == Relation::Eq {
                let b = bound.clone();
                let better = match &upper {
                    None => true,
                    Some((cur, att)) => b < *cur || (b == *cur && *att && !attained),
                };
                if better {
                    upper = Some((b, attained));
                }
            }
        }
        let unpack = |v: Option<(Rational, bool)>| match v {
            None => (None, false),
            Some((b, a)) => (Some(b), a),
        };
        Some((unpack(lower), unpack(upper)))
    }

    /// Some rational point inside the polyhedron (strictness respected), or
    /// `None` when empty.  Found by back-substitution through a full
    /// elimination sequence.
    pub fn sample_point(&self) -> Option<Vec<Rational>> {
        if self.empty {
            return None;
        }
        // Eliminate dims n-1, n-2, ..., keeping the intermediate systems.
        let mut systems: Vec<Vec<Constraint>> = vec![self.constraints.clone()];
        for d in (0..self.dim).rev() {
            let next = fm::eliminate(systems.last().unwrap(), d)?;
            systems.push(next);
        }
        let mut point: Vec<Rational> = vec![Rational::zero(); self.dim];
        for d in 0..self.dim {
            // The system at index self.dim - 1 - d constrains dims 0..=d with
            // dims < d already fixed in `point`.
            let sys = &systems[self.dim - 1 - d];
            let mut lower: Option<(Rational, bool)> = None; // (bound, strict)
            let mut upper: Option<(Rational, bool)> = None;
            for c in sys {
                let a = c.lhs().coeff(d);
                if a.is_zero() {
                    continue;
                }
                // value of lhs with x_d = 0 at the fixed prefix
                let mut rest = c.lhs().clone();
                rest.set_coeff(d, Rational::zero());
                let v = rest.eval(&point);
                let bound = -v / &a;
                let strict = c.relation() == Relation::Gt;
                if c.relation() == Relation::Eq {
                    point[d] = bound;
                    lower = None;
                    upper = None;
                    break;
                }
                if a.is_positive() {
                    if lower.as_ref().map_or(true, |(b, s)| bound > *b || (bound == *b && strict && !s)) {
                        lower = Some((bound, strict));
                    }
                } else if upper.as_ref().map_or(true, |(b, s)| bound < *b || (bound == *b && strict && !s)) {
                    upper = Some((bound, strict));
                }
            }
            match (lower, upper) {
                (Some((l, ls)), Some((u, _us))) => {
                    point[d] = if l == u {
                        l
                    } else {
                        (l + u) / Rational::from_integer(Int::from(2))
                    };
                    debug_assert!(!ls || point[d] != Rational::zero() || true);
                }
                (Some((l, ls)), None) => {
                    point[d] = if ls { l + Rational::one() } else { l };
                }
                (None, Some((u, us))) => {
                    point[d] = if us { u - Rational::one() } else { u };
                }
                (None, None) => {}
            }
        }
        debug_assert!(self.constraints.iter().all(|c| c.satisfied_by(&point)));
        Some(point)
    }

    pub fn contains_point(&self, point: &[Rational]) -> bool {
        !self.empty && self.constraints.iter().all(|c| c.satisfied_by(point))
    }
}

impl fmt::Display for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.empty {
            return write!(f, "false");
        }
        if self.constraints.is_empty() {
            return write!(f, "true");
        }
        let parts: Vec<String> = self.constraints.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Remove redundant constraints and detect implicit equalities.  Input must
/// be satisfiable and pruned.
fn minimize(mut cs: Vec<Constraint>) -> Vec<Constraint> {
    // Upgrade inequalities whose reverse is entailed into equalities.
    let entails_set = |sys: &[Constraint], c: &Constraint| -> bool {
        match c.relation() {
            Relation::Eq => c.split().iter().all(|h| entails_ineq(sys, h)),
            _ => entails_ineq(sys, c),
        }
    };
    let snapshot = cs.clone();
    for c in cs.iter_mut() {
        if c.relation() == Relation::Geq {
            let reverse = Constraint::geq(-c.lhs().clone());
            if entails_ineq(&snapshot, &reverse) {
                *c = Constraint::eq(c.lhs().clone());
            }
        }
    }
    fm::prune(&mut cs);
    // Greedy redundancy elimination: a constraint is redundant iff entailed
    // by the remaining system.
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i].clone();
        let rest: Vec<Constraint> = cs
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, k)| k.clone())
            .collect();
        if entails_set(&rest, &c) {
            cs.remove(i);
        } else {
            i += 1;
        }
    }
    cs
}

fn entails_ineq(sys: &[Constraint], c: &Constraint) -> bool {
    if let Some(t) = c.triviality() {
        return t;
    }
    let neg = c.negation().expect("inequality");
    let mut work = sys.to_vec();
    work.push(neg);
    !fm::satisfiable(&work)
}
