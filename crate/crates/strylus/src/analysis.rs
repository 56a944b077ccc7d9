//! The abstract interpreter: per-program-point invariants with loop-head
//! widening.
//!
//! Loops iterate `h_{m+1} = combine(h_m, entry ⊔ body(h_m))` where
//! `combine` is a plain join for the first `widen_delay` iterations and
//! the product widening afterwards. Branches join; there is no
//! guard-based refinement. `eval(e)` records the abstract value of its
//! argument and passes the state through unchanged.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::frontend::{is_assignment_free, BinOp, Exp, Label, Literal, Program, Stmt, StmtKind, UnOp};
use crate::interval::Interval;
use crate::strops::{ca_abs, io_abs, le_abs, ss_abs};
use crate::value::{
    abs_cmp, abs_eq, abs_logic, abs_not, abs_num, abs_plus, to_bool_abs, to_int_abs, to_str_abs,
    AbstractValue, CmpOp, LogicOp, NumOp,
};

#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    /// Widening precision parameter (n >= 1).
    pub widen_n: u32,
    /// Number of plain joins before widening engages.
    pub widen_delay: u32,
    /// Iteration budget per loop head.
    pub max_iters: u32,
    pub alphabet: Arc<Alphabet>,
}

impl AnalysisConfig {
    pub fn new(alphabet: Arc<Alphabet>) -> AnalysisConfig {
        AnalysisConfig {
            widen_n: 3,
            widen_delay: 1,
            max_iters: 64,
            alphabet,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.widen_n < 1 {
            return Err("widening parameter must be at least 1".to_string());
        }
        if self.max_iters < self.widen_delay + 2 {
            return Err("max iterations must be at least widening delay + 2".to_string());
        }
        Ok(())
    }
}

/// Map from identifiers to abstract values; the bottom state is
/// unreachable and maps nothing. Missing keys are bottom.
#[derive(Debug, Clone, PartialEq)]
pub enum AbstractState {
    Unreachable,
    Reachable(BTreeMap<String, AbstractValue>),
}

impl AbstractState {
    pub fn empty() -> AbstractState {
        AbstractState::Reachable(BTreeMap::new())
    }

    pub fn is_reachable(&self) -> bool {
        matches!(self, AbstractState::Reachable(_))
    }

    pub fn get(&self, var: &str) -> Option<&AbstractValue> {
        match self {
            AbstractState::Unreachable => None,
            AbstractState::Reachable(map) => map.get(var),
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = (&String, &AbstractValue)> {
        match self {
            AbstractState::Unreachable => None,
            AbstractState::Reachable(map) => Some(map.iter()),
        }
        .into_iter()
        .flatten()
    }

    fn set(&mut self, var: &str, value: AbstractValue) {
        if let AbstractState::Reachable(map) = self {
            map.insert(var.to_string(), value);
        }
    }

    pub fn join(&self, other: &AbstractState) -> AbstractState {
        match (self, other) {
            (AbstractState::Unreachable, s) | (s, AbstractState::Unreachable) => s.clone(),
            (AbstractState::Reachable(a), AbstractState::Reachable(b)) => {
                let mut out = a.clone();
                for (k, v) in b {
                    match out.get_mut(k) {
                        Some(existing) => *existing = existing.lub(v),
                        None => {
                            out.insert(k.clone(), v.clone());
                        }
                    }
                }
                AbstractState::Reachable(out)
            }
        }
    }

    pub fn widen(&self, other: &AbstractState, n: u32) -> AbstractState {
        match (self, other) {
            (AbstractState::Unreachable, s) | (s, AbstractState::Unreachable) => s.clone(),
            (AbstractState::Reachable(a), AbstractState::Reachable(b)) => {
                let keys: BTreeSet<&String> = a.keys().chain(b.keys()).collect();
                let mut out = BTreeMap::new();
                for k in keys {
                    let v = match (a.get(k), b.get(k)) {
                        (Some(x), Some(y)) => x.widen(y, n),
                        (Some(x), None) => x.clone(),
                        (None, Some(y)) => y.clone(),
                        (None, None) => unreachable!(),
                    };
                    out.insert(k.clone(), v);
                }
                AbstractState::Reachable(out)
            }
        }
    }

    pub fn leq(&self, other: &AbstractState) -> bool {
        match (self, other) {
            (AbstractState::Unreachable, _) => true,
            (AbstractState::Reachable(_), AbstractState::Unreachable) => false,
            (AbstractState::Reachable(a), AbstractState::Reachable(b)) => a
                .iter()
                .all(|(k, v)| b.get(k).map_or(v.is_bottom(), |w| v.leq(w))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisResult {
    /// Invariant holding before each program point.
    pub points: BTreeMap<Label, AbstractState>,
    /// Abstract value of each eval-sink argument.
    pub eval_values: BTreeMap<Label, AbstractValue>,
    /// Head iterations used per loop label.
    pub loop_iterations: BTreeMap<Label, u32>,
    pub diagnostics: Vec<String>,
}

impl AnalysisResult {
    pub fn exit_state<'a>(&'a self, program: &Program) -> &'a AbstractState {
        &self.points[&program.exit]
    }
}

/// Runs the abstract interpreter from the empty state. Deterministic for
/// a given program and configuration.
pub fn analyze(program: &Program, cfg: &AnalysisConfig) -> AnalysisResult {
    debug_assert!(is_assignment_free(program), "analyze expects a desugared program");
    let mut analyzer = Analyzer {
        cfg,
        points: BTreeMap::new(),
        eval_values: BTreeMap::new(),
        loop_iterations: BTreeMap::new(),
        diagnostics: BTreeSet::new(),
    };
    let exit = analyzer.exec(&program.root, AbstractState::empty());
    analyzer.points.insert(program.exit, exit);
    // program points never visited are unreachable
    for label in 0..program.points.len() {
        analyzer.points.entry(label).or_insert(AbstractState::Unreachable);
    }
    AnalysisResult {
        points: analyzer.points,
        eval_values: analyzer.eval_values,
        loop_iterations: analyzer.loop_iterations,
        diagnostics: analyzer.diagnostics.into_iter().collect(),
    }
}

struct Analyzer<'a> {
    cfg: &'a AnalysisConfig,
    points: BTreeMap<Label, AbstractState>,
    eval_values: BTreeMap<Label, AbstractValue>,
    loop_iterations: BTreeMap<Label, u32>,
    diagnostics: BTreeSet<String>,
}

impl Analyzer<'_> {
    fn exec(&mut self, s: &Stmt, state: AbstractState) -> AbstractState {
        match &s.kind {
            StmtKind::Assign(x, e) => {
                self.points.insert(s.pre, state.clone());
                if !state.is_reachable() {
                    return state;
                }
                let v = self.eval(e, &state);
                let mut out = state;
                out.set(x, v);
                out
            }
            StmtKind::If(g, t, e) => {
                self.points.insert(s.pre, state.clone());
                if !state.is_reachable() {
                    let _ = self.exec(t, AbstractState::Unreachable);
                    let _ = self.exec(e, AbstractState::Unreachable);
                    return AbstractState::Unreachable;
                }
                let cond = to_bool_abs(&self.eval(g, &state));
                let then_in = if cond.has_true {
                    state.clone()
                } else {
                    AbstractState::Unreachable
                };
                let else_in = if cond.has_false {
                    state.clone()
                } else {
                    AbstractState::Unreachable
                };
                let then_out = self.exec(t, then_in);
                let else_out = self.exec(e, else_in);
                then_out.join(&else_out)
            }
            StmtKind::While(g, b) => self.exec_loop(s, g, b, state),
            StmtKind::Block(ss) => {
                self.points.insert(s.pre, state.clone());
                let mut cur = state;
                for s in ss {
                    cur = self.exec(s, cur);
                }
                cur
            }
            StmtKind::Skip => {
                self.points.insert(s.pre, state.clone());
                state
            }
            StmtKind::Eval(e) => {
                self.points.insert(s.pre, state.clone());
                if state.is_reachable() {
                    let v = self.eval(e, &state);
                    self.eval_values.insert(s.pre, v);
                }
                state
            }
        }
    }

    fn exec_loop(&mut self, s: &Stmt, g: &Exp, b: &Stmt, entry: AbstractState) -> AbstractState {
        if !entry.is_reachable() {
            self.points.insert(s.pre, AbstractState::Unreachable);
            let _ = self.exec(b, AbstractState::Unreachable);
            return AbstractState::Unreachable;
        }
        let mut head = entry.clone();
        let mut iters = 0u32;
        loop {
            iters += 1;
            let cond = to_bool_abs(&self.eval(g, &head));
            let body_out = if cond.has_true {
                self.exec(b, head.clone())
            } else {
                self.exec(b, AbstractState::Unreachable)
            };
            let grown = entry.join(&body_out);
            let next = if iters <= self.cfg.widen_delay {
                head.join(&grown)
            } else {
                head.widen(&grown, self.cfg.widen_n)
            };
            if next.leq(&head) {
                break;
            }
            if iters >= self.cfg.max_iters {
                self.diagnostics.insert(format!(
                    "loop at L{}: iteration budget exhausted, unstable variables set to top",
                    s.pre + 1
                ));
                head = self.force_top_unstable(&head, &next);
                // one final body pass so inner points reflect the fallback
                let cond = to_bool_abs(&self.eval(g, &head));
                if cond.has_true {
                    let _ = self.exec(b, head.clone());
                }
                break;
            }
            head = next;
        }
        self.loop_iterations.insert(s.pre, iters);
        // the head invariant covers every evaluation of the guard
        self.points.insert(s.pre, head.clone());
        head
    }

    fn force_top_unstable(&self, head: &AbstractState, next: &AbstractState) -> AbstractState {
        let (AbstractState::Reachable(h), AbstractState::Reachable(n)) = (head, next) else {
            return next.clone();
        };
        let mut out = h.clone();
        for (k, v) in n {
            let stable = h.get(k).is_some_and(|old| v.leq(old));
            if !stable {
                out.insert(k.clone(), AbstractValue::top(&self.cfg.alphabet));
            }
        }
        AbstractState::Reachable(out)
    }

    fn eval(&mut self, e: &Exp, state: &AbstractState) -> AbstractValue {
        let sigma = &self.cfg.alphabet;
        match e {
            Exp::Var(x) => match state.get(x) {
                Some(v) => v.clone(),
                None => {
                    self.diagnostics
                        .insert(format!("read of unbound variable '{x}'"));
                    AbstractValue::top(sigma)
                }
            },
            Exp::Lit(Literal::Int(v)) => AbstractValue::of_int(sigma, *v),
            Exp::Lit(Literal::Str(s)) => {
                let dfa = crate::automaton::Dfa::min_of(sigma, [s.as_str()])
                    .unwrap_or_else(|_| {
                        self.diagnostics.insert(format!(
                            "string literal {s:?} uses symbols outside the alphabet"
                        ));
                        crate::automaton::Dfa::top(sigma)
                    });
                AbstractValue::of_string(dfa)
            }
            Exp::Lit(Literal::Bool(b)) => AbstractValue::of_bool(sigma, *b),
            Exp::Lit(Literal::NaN) => AbstractValue::of_nan(sigma),
            Exp::Binary(op, l, r) => {
                let lv = self.eval(l, state);
                let rv = self.eval(r, state);
                match op {
                    BinOp::Add => abs_plus(&lv, &rv),
                    BinOp::Sub => abs_num(NumOp::Sub, &lv, &rv),
                    BinOp::Mul => abs_num(NumOp::Mul, &lv, &rv),
                    BinOp::Div => abs_num(NumOp::Div, &lv, &rv),
                    BinOp::And => abs_logic(LogicOp::And, &lv, &rv),
                    BinOp::Or => abs_logic(LogicOp::Or, &lv, &rv),
                    BinOp::Lt => abs_cmp(CmpOp::Lt, &lv, &rv),
                    BinOp::Gt => abs_cmp(CmpOp::Gt, &lv, &rv),
                    BinOp::Eq => abs_eq(&lv, &rv),
                }
            }
            Exp::Unary(UnOp::Not, e) => abs_not(&self.eval(e, state)),
            Exp::Substring(recv, i, j) => {
                let s = to_str_abs(&self.eval(recv, state));
                let i = self.index_interval(i, state).clamp_nonneg();
                let j = self.index_interval(j, state).clamp_nonneg();
                AbstractValue::of_string(ss_abs(&s, &i, &j))
            }
            Exp::CharAt(recv, i) => {
                let s = to_str_abs(&self.eval(recv, state));
                let i = self.index_interval(i, state);
                AbstractValue::of_string(ca_abs(&s, &i))
            }
            Exp::IndexOf(recv, needle) => {
                let s = to_str_abs(&self.eval(recv, state));
                let needle = to_str_abs(&self.eval(needle, state));
                AbstractValue::of_interval(sigma, io_abs(&s, &needle))
            }
            Exp::Length(recv) => {
                let s = to_str_abs(&self.eval(recv, state));
                AbstractValue::of_interval(sigma, le_abs(&s))
            }
            Exp::Assign(x, rhs) => {
                // removed by desugaring; evaluated defensively
                self.diagnostics.insert(format!(
                    "embedded assignment to '{x}' reached the analyzer; run desugar first"
                ));
                self.eval(rhs, state)
            }
        }
    }

    /// Integer view of an index argument: a NaN index reads position 0.
    fn index_interval(&mut self, e: &Exp, state: &AbstractState) -> Interval {
        let n = to_int_abs(&self.eval(e, state));
        if n.nan {
            n.interval.lub(&Interval::singleton(0))
        } else {
            n.interval
        }
    }
}
