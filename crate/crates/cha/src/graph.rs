//! Predicate dependency graph: strongly connected components for the
//! evaluation order, and widening-point selection strategies.

use std::collections::BTreeSet;

use crate::ast::{BodyLiteral, Program};

/// Nodes are predicates (name, arity) indexed in first-definition order;
/// predicates that are only called get indices after all defined ones.
/// An edge `p -> q` means a clause with head `p` calls `q`.
#[derive(Clone, Debug)]
pub struct DepGraph {
    pub preds: Vec<(String, usize)>,
    pub succ: Vec<Vec<usize>>,
}

impl DepGraph {
    pub fn build(prog: &Program) -> DepGraph {
        let mut preds = prog.predicates();
        for c in &prog.clauses {
            for l in &c.body {
                if let BodyLiteral::Call(a) = l {
                    let k = a.key();
                    if !preds.contains(&k) {
                        preds.push(k);
                    }
                }
            }
        }
        let index = |k: &(String, usize)| preds.iter().position(|p| p == k).unwrap();
        let mut succ = vec![Vec::new(); preds.len()];
        for c in &prog.clauses {
            let from = index(&c.head.key());
            for l in &c.body {
                if let BodyLiteral::Call(a) = l {
                    let to = index(&a.key());
                    if !succ[from].contains(&to) {
                        succ[from].push(to);
                    }
                }
            }
        }
        for s in succ.iter_mut() {
            s.sort_unstable();
        }
        DepGraph { preds, succ }
    }

    pub fn node_of(&self, key: &(String, usize)) -> Option<usize> {
        self.preds.iter().position(|p| p == key)
    }

    /// Strongly connected components in dependency order: every component is
    /// listed after the components it calls into.  The flag tells whether
    /// the component is recursive (more than one node, or a self-loop).
    pub fn scc_order(&self) -> Vec<(Vec<usize>, bool)> {
        // Iterative Tarjan; components are emitted callees-first.
        let n = self.preds.len();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut next_index = 0usize;
        let mut out: Vec<(Vec<usize>, bool)> = Vec::new();

        for start in 0..n {
            if index[start] != usize::MAX {
                continue;
            }
            // (node, next successor position)
            let mut work: Vec<(usize, usize)> = vec![(start, 0)];
            while let Some(&mut (v, ref mut si)) = work.last_mut() {
                if *si == 0 {
                    index[v] = next_index;
                    low[v] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[v] = true;
                }
                if *si < self.succ[v].len() {
                    let w = self.succ[v][*si];
                    *si += 1;
                    if index[w] == usize::MAX {
                        work.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    work.pop();
                    if let Some(&mut (u, _)) = work.last_mut() {
                        low[u] = low[u].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        let recursive = comp.len() > 1
                            || self.succ[comp[0]].contains(&comp[0]);
                        out.push((comp, recursive));
                    }
                }
            }
        }
        out
    }

    /// Widening points as the targets of depth-first back edges, exploring
    /// nodes and successors in index order.
    pub fn feedback_widening_points(&self) -> BTreeSet<usize> {
        let n = self.preds.len();
        let mut points = BTreeSet::new();
        let mut state = vec![0u8; n]; // 0 unseen, 1 on current path, 2 done
        for start in 0..n {
            if state[start] != 0 {
                continue;
            }
            let mut work: Vec<(usize, usize)> = vec![(start, 0)];
            state[start] = 1;
            while let Some(&mut (v, ref mut si)) = work.last_mut() {
                if *si < self.succ[v].len() {
                    let w = self.succ[v][*si];
                    *si += 1;
                    match state[w] {
                        0 => {
                            state[w] = 1;
                            work.push((w, 0));
                        }
                        1 => {
                            points.insert(w);
                        }
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    work.pop();
                }
            }
        }
        points
    }

    /// All elementary cycles, each as its set of nodes.
    pub fn elementary_cycles(&self) -> Vec<BTreeSet<usize>> {
        let n = self.preds.len();
        let mut cycles: Vec<BTreeSet<usize>> = Vec::new();
        // For each start node s, enumerate simple paths through nodes >= s.
        for s in 0..n {
            let mut path: Vec<usize> = vec![s];
            let mut on_path = vec![false; n];
            on_path[s] = true;
            let mut work: Vec<(usize, usize)> = vec![(s, 0)];
            while let Some(&mut (v, ref mut si)) = work.last_mut() {
                if *si < self.succ[v].len() {
                    let w = self.succ[v][*si];
                    *si += 1;
                    if w == s {
                        let set: BTreeSet<usize> = path.iter().copied().collect();
                        if !cycles.contains(&set) {
                            cycles.push(set);
                        }
                    } else if w > s && !on_path[w] {
                        on_path[w] = true;
                        path.push(w);
                        work.push((w, 0));
                    }
                } else {
                    work.pop();
                    path.pop();
                    on_path[v] = false;
                }
            }
        }
        cycles
    }

    /// Widening points as a greedy cover of all elementary cycles: repeatedly
    /// take the node on the most uncovered cycles (smallest index on ties).
    pub fn cut_loop_widening_points(&self) -> BTreeSet<usize> {
        let mut cycles = self.elementary_cycles();
        let mut points = BTreeSet::new();
        while !cycles.is_empty() {
            let n = self.preds.len();
            let mut best = (0usize, 0usize);
            for v in 0..n {
                let count = cycles.iter().filter(|c| c.contains(&v)).count();
                if count > best.1 {
                    best = (v, count);
                }
            }
            points.insert(best.0);
            cycles.retain(|c| !c.contains(&best.0));
        }
        points
    }

    /// True iff removing the given nodes leaves an acyclic graph — the
    /// property a widening-point set must have.
    pub fn acyclic_without(&self, removed: &BTreeSet<usize>) -> bool {
        let n = self.preds.len();
        let mut state = vec![0u8; n];
        for start in 0..n {
            if state[start] != 0 || removed.contains(&start) {
                continue;
            }
            let mut work: Vec<(usize, usize)> = vec![(start, 0)];
            state[start] = 1;
            while let Some(&mut (v, ref mut si)) = work.last_mut() {
                if *si < self.succ[v].len() {
                    let w = self.succ[v][*si];
                    *si += 1;
                    if removed.contains(&w) {
                        continue;
                    }
                    match state[w] {
                        0 => {
                            state[w] = 1;
                            work.push((w, 0));
                        }
                        1 => return false,
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    work.pop();
                }
            }
        }
        true
    }
}
