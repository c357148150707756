//! Seeded random generators: bounded-integer loop programs (whose ground
//! model is finite, so the concrete oracle applies) and random dependency
//! graphs for the widening-point strategies.

use std::collections::BTreeSet;

use cha::graph::DepGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A small constraint logic program with guarded increment loops.  All
/// recursion is bounded by `=<` guards, so bottom-up evaluation terminates.
pub fn random_program(seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut src = String::new();
    let mut preds: Vec<(String, usize)> = Vec::new();
    let mut idx = 0usize;
    let ngroups = rng.gen_range(1..=2);
    for _ in 0..ngroups {
        match rng.gen_range(0..3) {
            0 => {
                // self-recursive counter
                let p = format!("p{}", idx);
                idx += 1;
                let base = rng.gen_range(-5..=5);
                let guard = rng.gen_range(5..=20);
                let step = rng.gen_range(1..=3);
                src += &format!("{}(X) :- X = {}.\n", p, base);
                src += &format!("{}(Y) :- {}(X), X =< {}, Y is X + {}.\n", p, p, guard, step);
                preds.push((p, 1));
            }
            1 => {
                // self-recursive pair of counters
                let p = format!("p{}", idx);
                idx += 1;
                let (a, b) = (rng.gen_range(0..=4), rng.gen_range(-4..=4));
                let guard = rng.gen_range(5..=15);
                let (s, t) = (rng.gen_range(1..=2), rng.gen_range(-2..=2));
                src += &format!("{}(X,Y) :- X = {}, Y = {}.\n", p, a, b);
                src += &format!(
                    "{}(U,V) :- {}(X,Y), X =< {}, U is X + {}, V is Y + {}.\n",
                    p, p, guard, s, t
                );
                preds.push((p, 2));
            }
            _ => {
                // mutual recursion
                let p = format!("p{}", idx);
                let q = format!("q{}", idx);
                idx += 1;
                let base = rng.gen_range(0..=3);
                let guard = rng.gen_range(5..=15);
                let (s1, s2) = (rng.gen_range(1..=2), rng.gen_range(1..=3));
                src += &format!("{}(X) :- X = {}.\n", p, base);
                src += &format!("{}(Y) :- {}(X), X =< {}, Y is X + {}.\n", p, q, guard, s1);
                src += &format!("{}(Y) :- {}(X), X =< {}, Y is X + {}.\n", q, p, guard, s2);
                preds.push((p, 1));
                preds.push((q, 1));
            }
        }
        // occasionally a non-recursive consumer of an earlier predicate
        if rng.gen_bool(0.5) {
            let (callee, arity) = preds[rng.gen_range(0..preds.len())].clone();
            let c = format!("c{}", idx);
            idx += 1;
            if arity == 1 {
                src += &format!(
                    "{}(Y) :- {}(X), Y is X + {}.\n",
                    c,
                    callee,
                    rng.gen_range(-3..=3)
                );
            } else {
                src += &format!("{}(Z) :- {}(X,Y), Z is X + Y.\n", c, callee);
            }
        }
    }
    src
}

/// A random directed graph on up to 12 nodes, self-loops allowed.
pub fn random_digraph(seed: u64) -> DepGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=12);
    let mut succ = vec![Vec::new(); n];
    for a in 0..n {
        for b in 0..n {
            if rng.gen_bool(0.18) {
                succ[a].push(b);
            }
        }
    }
    DepGraph {
        preds: (0..n).map(|i| (format!("n{}", i), 0)).collect(),
        succ,
    }
}

/// Independent acyclicity check (Kahn's topological sort) of the graph with
/// the given nodes removed — shares no traversal code with the library.
pub fn kahn_acyclic_without(succ: &[Vec<usize>], removed: &BTreeSet<usize>) -> bool {
    let n = succ.len();
    let mut indeg = vec![0usize; n];
    for (a, outs) in succ.iter().enumerate() {
        if removed.contains(&a) {
            continue;
        }
        for &b in outs {
            if !removed.contains(&b) {
                indeg[b] += 1;
            }
        }
    }
    let mut queue: Vec<usize> = (0..n)
        .filter(|v| !removed.contains(v) && indeg[*v] == 0)
        .collect();
    // a self-loop keeps its node's in-degree positive, so it is caught too
    let mut seen = 0usize;
    while let Some(v) = queue.pop() {
        seen += 1;
        for &b in &succ[v] {
            if removed.contains(&b) {
                continue;
            }
            indeg[b] -= 1;
            if indeg[b] == 0 {
                queue.push(b);
            }
        }
    }
    seen == (0..n).filter(|v| !removed.contains(v)).count()
}
