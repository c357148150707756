//! Rendering of analysis results: one constrained atom per predicate, plus
//! optional statistics and the operation trace, as text or JSON.

use serde::Serialize;

use poly::Polyhedron;

use crate::engine::Analysis;

#[derive(Debug, Serialize)]
pub struct AtomReport {
    pub pred: String,
    pub arity: usize,
    /// The canonical constraint strings; empty means unconstrained.
    pub constraints: Vec<String>,
    /// The rendered atom, e.g. `p(A,B) :- A>=0, B=A.`
    pub atom: String,
}

#[derive(Debug, Serialize)]
pub struct SccReport {
    pub preds: Vec<String>,
    pub iterations: usize,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    /// Predicates with a non-empty approximation, in definition order.
    pub atoms: Vec<AtomReport>,
    pub total_constraints: usize,
    pub scc_iterations: Vec<SccReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<String>>,
    #[serde(skip)]
    show_counts: bool,
}

/// Render a predicate's polyhedron as a constrained atom.  Returns `None`
/// for an empty polyhedron: the predicate has no derivable instances.
pub fn render_atom(name: &str, arity: usize, p: &Polyhedron) -> Option<String> {
    if p.is_empty() {
        return None;
    }
    let head = if arity == 0 {
        name.to_string()
    } else {
        let vars: Vec<String> = (0..arity).map(poly::dim_name).collect();
        format!("{}({})", name, vars.join(","))
    };
    let body = if p.is_universe() {
        "true".to_string()
    } else {
        p.constraints()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    Some(format!("{} :- {}.", head, body))
}

impl RunReport {
    pub fn new(
        analysis: &Analysis,
        duration_ms: Option<u64>,
        show_counts: bool,
        with_trace: bool,
    ) -> RunReport {
        let mut atoms = Vec::new();
        let mut total = 0usize;
        for (i, (name, arity)) in analysis.graph.preds.iter().enumerate() {
            let p = &analysis.values[i];
            total += p.constraint_count();
            if let Some(atom) = render_atom(name, *arity, p) {
                atoms.push(AtomReport {
                    pred: name.clone(),
                    arity: *arity,
                    constraints: p.constraints().iter().map(|c| c.to_string()).collect(),
                    atom,
                });
            }
        }
        let scc_iterations = analysis
            .scc_rounds
            .iter()
            .map(|(comp, rounds)| SccReport {
                preds: comp
                    .iter()
                    .map(|&i| {
                        let (n, a) = &analysis.graph.preds[i];
                        format!("{}/{}", n, a)
                    })
                    .collect(),
                iterations: *rounds,
            })
            .collect();
        RunReport {
            atoms,
            total_constraints: total,
            scc_iterations,
            duration_ms,
            trace: if with_trace {
                Some(analysis.trace.clone())
            } else {
                None
            },
            show_counts,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(trace) = &self.trace {
            for line in trace {
                out.push_str("% ");
                out.push_str(line);
                out.push('\n');
            }
        }
        for a in &self.atoms {
            out.push_str(&a.atom);
            out.push('\n');
        }
        if self.show_counts {
            out.push_str(&format!("% total constraints: {}\n", self.total_constraints));
            for s in &self.scc_iterations {
                out.push_str(&format!(
                    "% scc [{}]: {} iteration(s)\n",
                    s.preds.join(", "),
                    s.iterations
                ));
            }
        }
        if let Some(ms) = self.duration_ms {
            out.push_str(&format!("% time: {} ms\n", ms));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
