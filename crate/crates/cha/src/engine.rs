//! The abstract fixpoint engine: every predicate is approximated by one
//! convex polyhedron over its argument positions.  Strongly connected
//! components of the dependency graph are solved callees-first; recursive
//! components iterate with widening (optionally delayed, optionally bounded
//! by up-to constraints) and can be refined afterwards by a bounded number
//! of narrowing passes.

use std::collections::{BTreeMap, BTreeSet};

use poly::{Constraint, PolyError, Polyhedron, Relation};
use thiserror::Error;

use crate::ast::{BodyLiteral, Program, Term};
use crate::frontend::{self, Frame};
use crate::graph::DepGraph;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("no convergence for `{pred}` after {rounds} iterations")]
    NonConvergence { pred: String, rounds: usize },
    #[error("widening points do not cut every loop: {missing}")]
    UncutLoops { missing: String },
    #[error("unknown predicate `{pred}` in widening-point list")]
    UnknownWideningPoint { pred: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// How to choose the predicates at which widening is applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WpStrategy {
    /// Targets of depth-first back edges.
    Feedback,
    /// Greedy cover of all elementary loops.
    CutLoop,
    /// A user-supplied list, validated to cut every loop.
    Explicit(Vec<(String, usize)>),
}

#[derive(Clone, Debug)]
pub struct AnalysisConfig {
    /// Number of strictly-growing iterations at a widening point before
    /// widening starts being applied there.
    pub widen_delay: usize,
    /// Maximum number of narrowing passes per component (0 = none).
    pub narrow_iters: usize,
    /// Bound widening by the constraints of the analysed clauses.
    pub widen_up_to: bool,
    pub wp_strategy: WpStrategy,
    /// Record a textual trace of every lattice operation.
    pub verbose: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            widen_delay: 0,
            narrow_iters: 0,
            widen_up_to: false,
            wp_strategy: WpStrategy::CutLoop,
            verbose: false,
        }
    }
}

/// Hard cap on iterations per component; hitting it is reported as an error
/// rather than looping forever.  Only reachable when widening is effectively
/// disabled (e.g. an enormous delay), since widening forces stabilisation.
const MAX_ROUNDS: usize = 1000;

/// A precompiled clause: the polyhedron of its builtins over the clause
/// frame, the calls with their dimension mappings, and the head arity.
struct CompiledClause {
    head_arity: usize,
    frame_len: usize,
    base: Polyhedron,
    /// (callee node, callee dim -> frame dim)
    calls: Vec<(usize, BTreeMap<usize, usize>)>,
}

pub struct Analysis {
    /// Final value per predicate, in graph node order.
    pub values: Vec<Polyhedron>,
    pub graph: DepGraph,
    /// (component predicates, rounds to stabilise)
    pub scc_rounds: Vec<(Vec<usize>, usize)>,
    pub trace: Vec<String>,
}

impl Analysis {
    pub fn value_of(&self, name: &str, arity: usize) -> Option<&Polyhedron> {
        self.graph
            .node_of(&(name.to_string(), arity))
            .map(|i| &self.values[i])
    }
}

struct Engine<'a> {
    graph: &'a DepGraph,
    clauses: Vec<CompiledClause>,
    /// Clause indices per predicate node.
    by_pred: Vec<Vec<usize>>,
    /// Per-predicate widening bound (used with `widen_up_to`).
    bounds: Vec<Polyhedron>,
    config: &'a AnalysisConfig,
    trace: Vec<String>,
}

pub fn analyze(prog: &Program, config: &AnalysisConfig) -> Result<Analysis, EngineError> {
    let graph = DepGraph::build(prog);
    let n = graph.preds.len();

    // Compile clauses.
    let mut clauses = Vec::with_capacity(prog.clauses.len());
    let mut by_pred = vec![Vec::new(); n];
    for c in &prog.clauses {
        let frame = Frame::of_clause(c);
        let head_pred = graph.node_of(&c.head.key()).unwrap();
        let mut constraints = Vec::new();
        let mut calls = Vec::new();
        for lit in &c.body {
            match lit {
                BodyLiteral::Builtin(..) => {
                    constraints.extend(frontend::linearise(lit, &frame));
                }
                BodyLiteral::Call(a) => {
                    let callee = graph.node_of(&a.key()).unwrap();
                    let mut mapping = BTreeMap::new();
                    for (j, arg) in a.args.iter().enumerate() {
                        match arg {
                            Term::Var(v) => {
                                mapping.insert(j, frame.dim(v).unwrap());
                            }
                            other => panic!(
                                "call argument `{}` not normalised; run normalise_calls first",
                                other
                            ),
                        }
                    }
                    calls.push((callee, mapping));
                }
            }
        }
        let base = Polyhedron::make(frame.len(), constraints)?;
        by_pred[head_pred].push(clauses.len());
        clauses.push(CompiledClause {
            head_arity: c.head.args.len(),
            frame_len: frame.len(),
            base,
            calls,
        });
    }

    // Widening bounds: per predicate, the hull over its clauses of the
    // builtin constraints projected onto the head dimensions.
    let mut bounds = Vec::with_capacity(n);
    for p in 0..n {
        let arity = graph.preds[p].1;
        let mut b = Polyhedron::empty(arity);
        for &ci in &by_pred[p] {
            let c = &clauses[ci];
            let aux: BTreeSet<usize> = (c.head_arity..c.frame_len).collect();
            let head_part = c.base.project_out(&aux);
            b = b.convex_hull(&head_part)?;
        }
        if by_pred[p].is_empty() {
            b = Polyhedron::universe(arity);
        }
        // Thresholds are extrapolation hints, not semantic constraints: keep
        // them topologically closed so a strict clause guard cannot prune
        // states that plain widening would keep.
        let relaxed: Vec<Constraint> = b
            .constraints()
            .iter()
            .map(|c| match c.relation() {
                Relation::Gt => Constraint::geq(c.lhs().clone()),
                _ => c.clone(),
            })
            .collect();
        bounds.push(Polyhedron::make(arity, relaxed)?);
    }

    // Widening points.
    let wps: BTreeSet<usize> = match &config.wp_strategy {
        WpStrategy::Feedback => graph.feedback_widening_points(),
        WpStrategy::CutLoop => graph.cut_loop_widening_points(),
        WpStrategy::Explicit(list) => {
            let mut out = BTreeSet::new();
            for key in list {
                match graph.node_of(key) {
                    Some(i) => {
                        out.insert(i);
                    }
                    None => {
                        return Err(EngineError::UnknownWideningPoint {
                            pred: format!("{}/{}", key.0, key.1),
                        })
                    }
                }
            }
            out
        }
    };
    if !graph.acyclic_without(&wps) {
        let missing: Vec<String> = graph
            .preds
            .iter()
            .map(|(n, a)| format!("{}/{}", n, a))
            .collect();
        return Err(EngineError::UncutLoops {
            missing: missing.join(", "),
        });
    }

    let mut engine = Engine {
        graph: &graph,
        clauses,
        by_pred,
        bounds,
        config,
        trace: Vec::new(),
    };

    // Initial interpretation: defined predicates start empty; predicates
    // that are called but never defined are treated as unconstrained.
    let mut values: Vec<Polyhedron> = (0..n)
        .map(|p| {
            if engine.by_pred[p].is_empty() {
                Polyhedron::universe(graph.preds[p].1)
            } else {
                Polyhedron::empty(graph.preds[p].1)
            }
        })
        .collect();

    let mut scc_rounds = Vec::new();
    for (comp, recursive) in graph.scc_order() {
        let rounds = engine.solve_component(&comp, recursive, &wps, &mut values)?;
        scc_rounds.push((comp, rounds));
    }

    let trace = engine.trace;
    Ok(Analysis {
        values,
        graph,
        scc_rounds,
        trace,
    })
}

impl<'a> Engine<'a> {
    fn pred_name(&self, p: usize) -> String {
        let (n, a) = &self.graph.preds[p];
        format!("{}/{}", n, a)
    }

    fn record(&mut self, iter: usize, p: usize, op: &str, value: &Polyhedron) {
        if self.config.verbose {
            self.trace.push(format!(
                "iter={} pred={} op={} count={}",
                iter,
                self.pred_name(p),
                op,
                value.constraint_count()
            ));
        }
    }

    /// Evaluate one clause under the given interpretation, producing a
    /// polyhedron over the head argument positions.
    fn eval_clause(
        &self,
        ci: usize,
        values: &[Polyhedron],
    ) -> Result<Polyhedron, PolyError> {
        let c = &self.clauses[ci];
        let mut acc = c.base.clone();
        for (callee, mapping) in &c.calls {
            if acc.is_empty() {
                break;
            }
            let v = &values[*callee];
            if v.is_empty() {
                return Ok(Polyhedron::empty(c.head_arity));
            }
            let lifted = v.remap(mapping, c.frame_len)?;
            acc = acc.intersect(&lifted)?;
        }
        let aux: BTreeSet<usize> = (c.head_arity..c.frame_len).collect();
        Ok(acc.project_out(&aux))
    }

    /// The immediate consequences of `values` for predicate `p`: the convex
    /// hull of its clause results.
    fn consequences(
        &self,
        p: usize,
        values: &[Polyhedron],
        cache: Option<(&mut Vec<Polyhedron>, &dyn Fn(usize) -> bool)>,
    ) -> Result<Polyhedron, PolyError> {
        let arity = self.graph.preds[p].1;
        let mut acc = Polyhedron::empty(arity);
        match cache {
            None => {
                for &ci in &self.by_pred[p] {
                    acc = acc.convex_hull(&self.eval_clause(ci, values)?)?;
                }
            }
            Some((cached, needs_eval)) => {
                for &ci in &self.by_pred[p] {
                    if needs_eval(ci) {
                        cached[ci] = self.eval_clause(ci, values)?;
                    }
                    acc = acc.convex_hull(&cached[ci])?;
                }
            }
        }
        Ok(acc)
    }

    fn solve_component(
        &mut self,
        comp: &[usize],
        recursive: bool,
        wps: &BTreeSet<usize>,
        values: &mut Vec<Polyhedron>,
    ) -> Result<usize, EngineError> {
        if !recursive {
            // Evaluate each predicate once; no feedback possible.
            for &p in comp {
                if self.by_pred[p].is_empty() {
                    continue; // undefined predicate keeps its universe value
                }
                let v = self.consequences(p, values, None)?;
                self.record(1, p, "join", &v);
                values[p] = v;
            }
            return Ok(1);
        }

        let in_comp: BTreeSet<usize> = comp.iter().copied().collect();
        let mut delays: BTreeMap<usize, usize> = BTreeMap::new();
        // Semi-naive bookkeeping: cached clause results, and the set of
        // predicates that changed in the previous round.
        let mut cached: Vec<Polyhedron> = self
            .clauses
            .iter()
            .map(|c| Polyhedron::empty(c.head_arity))
            .collect();
        let mut changed_last: BTreeSet<usize> = in_comp.clone();
        let mut rounds = 0usize;
        let mut first = true;

        loop {
            rounds += 1;
            if rounds > MAX_ROUNDS {
                return Err(EngineError::NonConvergence {
                    pred: self.pred_name(comp[0]),
                    rounds: MAX_ROUNDS,
                });
            }
            // Jacobi: all predicates of the component are updated from the
            // same snapshot.
            let snapshot = values.clone();
            let mut changed_now: BTreeSet<usize> = BTreeSet::new();
            for &p in comp {
                if self.by_pred[p].is_empty() {
                    continue;
                }
                let needs_eval = |ci: usize| {
                    first
                        || self.clauses[ci]
                            .calls
                            .iter()
                            .any(|(callee, _)| changed_last.contains(callee))
                };
                let contrib = self.consequences(p, &snapshot, Some((&mut cached, &needs_eval)))?;
                let grown = snapshot[p].convex_hull(&contrib)?;
                if grown.same_set(&snapshot[p])? {
                    continue;
                }
                let next = if wps.contains(&p) {
                    let seen = delays.entry(p).or_insert(0);
                    if *seen < self.config.widen_delay {
                        *seen += 1;
                        self.record(rounds, p, "join", &grown);
                        grown
                    } else if self.config.widen_up_to {
                        let w = snapshot[p].widen_up_to(&grown, &self.bounds[p])?;
                        self.record(rounds, p, "widen-up-to", &w);
                        w
                    } else {
                        let w = snapshot[p].widen_standard(&grown)?;
                        self.record(rounds, p, "widen", &w);
                        w
                    }
                } else {
                    self.record(rounds, p, "join", &grown);
                    grown
                };
                if !next.same_set(&values[p])? {
                    changed_now.insert(p);
                }
                values[p] = next;
            }
            first = false;
            if changed_now.is_empty() {
                break;
            }
            changed_last = changed_now;
        }
        for &p in comp {
            let v = values[p].clone();
            self.record(rounds, p, "stabilised", &v);
        }

        // Narrowing: bounded descending passes from the stabilised values,
        // each pass computed from a snapshot of the previous one and
        // intersected with the stabilised result.
        if self.config.narrow_iters > 0 {
            let stabilised: Vec<Polyhedron> = values.clone();
            for pass in 0..self.config.narrow_iters {
                let snapshot = values.clone();
                let mut any_change = false;
                for &p in comp {
                    if self.by_pred[p].is_empty() {
                        continue;
                    }
                    let contrib = self.consequences(p, &snapshot, None)?;
                    let next = stabilised[p].intersect(&contrib)?;
                    if !next.same_set(&values[p])? {
                        any_change = true;
                        self.record(rounds + pass + 1, p, "narrow", &next);
                    }
                    values[p] = next;
                }
                if !any_change {
                    break;
                }
            }
        }

        Ok(rounds)
    }
}
