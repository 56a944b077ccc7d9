//! Rendering of analysis results as JSON and text.
//!
//! Interval bounds serialize as numbers with `"-inf"`/`"+inf"` string
//! sentinels, bottom intervals as `null`. String components render as a
//! word list while the language has at most 32 words and as an explicit
//! automaton otherwise. Output ordering is deterministic throughout.

use serde_json::{json, Value};

use crate::analysis::{AbstractState, AnalysisConfig, AnalysisResult};
use crate::automaton::{Cardinality, Dfa};
use crate::frontend::Program;
use crate::interval::{Bound, Interval};
use crate::value::AbstractValue;

pub fn interval_json(i: &Interval) -> Value {
    match i.bounds() {
        None => Value::Null,
        Some((lo, hi)) => json!([bound_json(lo), bound_json(hi)]),
    }
}

fn bound_json(b: Bound) -> Value {
    match b {
        Bound::NegInf => json!("-inf"),
        Bound::Finite(v) => json!(v),
        Bound::PosInf => json!("+inf"),
    }
}

pub fn dfa_json(a: &Dfa) -> Value {
    match a.cardinality() {
        Cardinality::Finite(n) if n <= 32 => {
            let words: Vec<String> = a.enumerate().expect("finite").into_iter().collect();
            json!({"kind": "finite", "words": words})
        }
        _ => {
            let mut edges = Vec::new();
            for q in 0..a.num_states() {
                for (&c, &t) in a.transitions_from(q) {
                    edges.push(json!([q, c.to_string(), t]));
                }
            }
            let finals: Vec<usize> = a.final_states().collect();
            json!({
                "kind": "dfa",
                "states": a.num_states(),
                "initial": a.initial(),
                "finals": finals,
                "edges": edges,
            })
        }
    }
}

pub fn value_json(v: &AbstractValue) -> Value {
    let mut bools = Vec::new();
    if v.bools.has_true {
        bools.push("true");
    }
    if v.bools.has_false {
        bools.push("false");
    }
    json!({
        "int": interval_json(&v.int),
        "bool": bools,
        "string": dfa_json(&v.string),
        "nan": v.nan,
    })
}

pub fn state_json(s: &AbstractState) -> Value {
    match s {
        AbstractState::Unreachable => json!({"reachable": false, "vars": {}}),
        AbstractState::Reachable(_) => {
            let mut vars = serde_json::Map::new();
            for (name, value) in s.vars() {
                vars.insert(name.clone(), value_json(value));
            }
            json!({"reachable": true, "vars": vars})
        }
    }
}

pub fn analysis_json(
    path: &str,
    program: &Program,
    cfg: &AnalysisConfig,
    alphabet_name: &str,
    result: &AnalysisResult,
) -> Value {
    let points: Vec<Value> = (0..program.points.len())
        .map(|label| {
            let info = &program.points[label];
            let mut obj = json!({
                "label": info.name,
                "line": info.pos.line,
                "col": info.pos.col,
            });
            let state = state_json(&result.points[&label]);
            obj.as_object_mut()
                .expect("object")
                .extend(state.as_object().expect("object").clone());
            obj
        })
        .collect();
    let evals: Vec<Value> = result
        .eval_values
        .iter()
        .map(|(label, value)| {
            let alias = program
                .eval_aliases
                .iter()
                .find(|(_, l)| l == label)
                .map(|(name, _)| name.clone())
                .unwrap_or_default();
            json!({
                "label": alias,
                "point": program.label_name(*label),
                "value": value_json(value),
            })
        })
        .collect();
    let loops: Vec<Value> = result
        .loop_iterations
        .iter()
        .map(|(label, iters)| json!({"point": program.label_name(*label), "iterations": iters}))
        .collect();
    json!({
        "program": path,
        "config": {
            "widen_n": cfg.widen_n,
            "widen_delay": cfg.widen_delay,
            "max_iters": cfg.max_iters,
            "alphabet": alphabet_name,
        },
        "points": points,
        "evals": evals,
        "loops": loops,
        "diagnostics": result.diagnostics,
    })
}

pub fn render_text(program: &Program, result: &AnalysisResult) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    for label in 0..program.points.len() {
        let info = &program.points[label];
        let state = &result.points[&label];
        if info.name == "exit" {
            let _ = writeln!(out, "{}:", info.name);
        } else {
            let _ = writeln!(out, "{} ({}:{}):", info.name, info.pos.line, info.pos.col);
        }
        match state {
            AbstractState::Unreachable => {
                let _ = writeln!(out, "  unreachable");
            }
            AbstractState::Reachable(_) => {
                let mut any = false;
                for (name, value) in state.vars() {
                    any = true;
                    let _ = writeln!(out, "  {name} = {value}");
                }
                if !any {
                    let _ = writeln!(out, "  (empty state)");
                }
            }
        }
    }
    for (label, value) in &result.eval_values {
        let alias = program
            .eval_aliases
            .iter()
            .find(|(_, l)| l == label)
            .map(|(name, _)| name.as_str())
            .unwrap_or("eval?");
        let _ = writeln!(out, "{alias} (at {}): {value}", program.label_name(*label));
    }
    out
}
