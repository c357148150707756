//! A naive ground bottom-up interpreter over the integers, used as a
//! concrete oracle: every fact it derives must lie inside the corresponding
//! analysis polyhedron.
//!
//! Clauses are evaluated left to right with an environment of integer
//! bindings; `=`/`is` bind an unbound left-hand variable, everything else is
//! a test.  Programs must be call-normalised (flat variable arguments).

use std::collections::{BTreeMap, BTreeSet};

use cha::ast::{ArithOp, BodyLiteral, BuiltinRel, Program, Term};

pub type Fact = Vec<i64>;
pub type Model = BTreeMap<(String, usize), BTreeSet<Fact>>;

fn eval(t: &Term, env: &BTreeMap<String, i64>) -> Option<i64> {
    match t {
        Term::Int(n) => i64::try_from(n.clone()).ok(),
        Term::Var(v) => env.get(v).copied(),
        Term::Arith(op, l, r) => {
            let a = eval(l, env)?;
            let b = eval(r, env)?;
            match op {
                ArithOp::Add => a.checked_add(b),
                ArithOp::Sub => a.checked_sub(b),
                ArithOp::Mul => a.checked_mul(b),
                ArithOp::Div => {
                    if b != 0 && a % b == 0 {
                        Some(a / b)
                    } else {
                        None
                    }
                }
                ArithOp::Shr => {
                    if (0..63).contains(&b) {
                        Some(a >> b)
                    } else {
                        None
                    }
                }
                ArithOp::Or => Some(a | b),
            }
        }
        Term::Compound(..) => None,
    }
}

fn builtin_holds(
    rel: &BuiltinRel,
    l: &Term,
    r: &Term,
    env: &mut BTreeMap<String, i64>,
) -> bool {
    // binding forms first: an unbound variable on the left of =/is
    if matches!(rel, BuiltinRel::Unify | BuiltinRel::Is) {
        if let Term::Var(v) = l {
            if !env.contains_key(v) {
                match eval(r, env) {
                    Some(val) => {
                        env.insert(v.clone(), val);
                        return true;
                    }
                    None => return false,
                }
            }
        }
        if let Term::Var(v) = r {
            if !env.contains_key(v) {
                match eval(l, env) {
                    Some(val) => {
                        env.insert(v.clone(), val);
                        return true;
                    }
                    None => return false,
                }
            }
        }
    }
    let (a, b) = match (eval(l, env), eval(r, env)) {
        (Some(a), Some(b)) => (a, b),
        _ => return false,
    };
    match rel {
        BuiltinRel::Unify | BuiltinRel::Is | BuiltinRel::ArithEq => a == b,
        BuiltinRel::NotUnify | BuiltinRel::ArithNeq => a != b,
        BuiltinRel::Lt => a < b,
        BuiltinRel::Gt => a > b,
        BuiltinRel::Le => a <= b,
        BuiltinRel::Ge => a >= b,
    }
}

/// Extend the set of environments by one body literal.
fn step(
    envs: Vec<BTreeMap<String, i64>>,
    lit: &BodyLiteral,
    model: &Model,
) -> Vec<BTreeMap<String, i64>> {
    let mut out = Vec::new();
    match lit {
        BodyLiteral::Builtin(rel, l, r) => {
            for mut env in envs {
                if builtin_holds(rel, l, r, &mut env) {
                    out.push(env);
                }
            }
        }
        BodyLiteral::Call(atom) => {
            let empty = BTreeSet::new();
            let facts = model.get(&atom.key()).unwrap_or(&empty);
            for env in envs {
                'fact: for fact in facts {
                    let mut next = env.clone();
                    for (arg, val) in atom.args.iter().zip(fact) {
                        match arg {
                            Term::Var(v) => match next.get(v) {
                                Some(bound) if bound != val => continue 'fact,
                                Some(_) => {}
                                None => {
                                    next.insert(v.clone(), *val);
                                }
                            },
                            _ => panic!("call arguments must be variables"),
                        }
                    }
                    out.push(next);
                }
            }
        }
    }
    out
}

/// Compute the ground model bottom-up.  `None` when the fact cap is hit
/// (the program is not bounded enough to serve as an oracle).
pub fn ground_model(prog: &Program, fact_cap: usize) -> Option<Model> {
    let mut model: Model = BTreeMap::new();
    loop {
        let mut changed = false;
        for clause in &prog.clauses {
            let mut envs = vec![BTreeMap::new()];
            for lit in &clause.body {
                envs = step(envs, lit, &model);
                if envs.is_empty() {
                    break;
                }
            }
            for env in envs {
                let mut fact = Vec::with_capacity(clause.head.args.len());
                let mut ok = true;
                for arg in &clause.head.args {
                    match eval(arg, &env) {
                        Some(v) => fact.push(v),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    continue; // unbound head argument: not groundable
                }
                if model.entry(clause.head.key()).or_default().insert(fact) {
                    changed = true;
                }
            }
        }
        let total: usize = model.values().map(|s| s.len()).sum();
        if total > fact_cap {
            return None;
        }
        if !changed {
            return Some(model);
        }
    }
}
