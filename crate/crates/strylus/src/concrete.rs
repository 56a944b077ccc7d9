//! Big-step concrete interpreter: the ground truth the abstract semantics
//! is checked against.
//!
//! Values are integers (i64, saturating at the type bounds), booleans,
//! strings, and NaN. Implicit conversions follow the dynamic-language
//! conventions of the analysed language: `toInt` maps `true`/`false`/NaN
//! to 1/0/0 and non-numeric strings to NaN; `toBool` maps 0, the empty
//! string and NaN to false; `toStr` uses canonical decimal forms. `+` is
//! concatenation as soon as either operand is a string, the remaining
//! arithmetic coerces through `toInt` and propagates NaN (division by
//! zero is NaN). `==` is strict: values of different types are never
//! equal. `&&`/`||` evaluate both operands.

use std::collections::BTreeMap;
use std::fmt;

use crate::frontend::{BinOp, Exp, Literal, Program, Stmt, StmtKind, UnOp};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConcreteValue {
    Int(i64),
    Bool(bool),
    Str(String),
    NaN,
}

pub type State = BTreeMap<String, ConcreteValue>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RunError {
    #[error("unbound identifier '{0}'")]
    Unbound(String),
    #[error("step budget exceeded")]
    StepBudgetExceeded,
}

impl fmt::Display for ConcreteValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConcreteValue::Int(v) => write!(f, "{v}"),
            ConcreteValue::Bool(b) => write!(f, "{b}"),
            ConcreteValue::Str(s) => write!(f, "{s:?}"),
            ConcreteValue::NaN => write!(f, "NaN"),
        }
    }
}

// ----------------------------------------------------------------------
// implicit conversions

pub fn c_to_str(v: &ConcreteValue) -> String {
    match v {
        ConcreteValue::Str(s) => s.clone(),
        ConcreteValue::NaN => "NaN".to_string(),
        ConcreteValue::Bool(true) => "true".to_string(),
        ConcreteValue::Bool(false) => "false".to_string(),
        ConcreteValue::Int(v) => v.to_string(),
    }
}

/// `None` is the NaN result.
pub fn c_to_int(v: &ConcreteValue) -> Option<i64> {
    match v {
        ConcreteValue::Int(v) => Some(*v),
        ConcreteValue::Bool(true) => Some(1),
        ConcreteValue::Bool(false) | ConcreteValue::NaN => Some(0),
        ConcreteValue::Str(s) => parse_numeric_string(s),
    }
}

pub fn c_to_bool(v: &ConcreteValue) -> bool {
    match v {
        ConcreteValue::Bool(b) => *b,
        ConcreteValue::Int(v) => *v != 0,
        ConcreteValue::Str(s) => !s.is_empty(),
        ConcreteValue::NaN => false,
    }
}

/// Value of a numeric string (optional sign, then digits), saturating at
/// the i64 range. Anything else is `None`.
fn parse_numeric_string(s: &str) -> Option<i64> {
    let (neg, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut value: i64 = 0;
    for c in digits.chars() {
        let d = c.to_digit(10).expect("digit") as i64;
        value = value.saturating_mul(10).saturating_add(if neg { -d } else { d });
    }
    Some(value)
}

// ----------------------------------------------------------------------
// string operations

/// Substring between two indexes: reversed indexes swap, negatives clamp
/// to zero, and both indexes clamp to the string length.
pub fn c_ss(s: &str, i: i64, j: i64) -> String {
    let chars: Vec<char> = s.chars().collect();
    let len = chars.len() as i64;
    let (i, j) = (i.max(0), j.max(0));
    let (i, j) = if j < i { (j, i) } else { (i, j) };
    let end = j.min(len);
    let start = i.min(end);
    chars[start as usize..end as usize].iter().collect()
}

/// Character at an index, or the empty string when out of range.
pub fn c_ca(s: &str, i: i64) -> String {
    let chars: Vec<char> = s.chars().collect();
    if i >= 0 && (i as usize) < chars.len() {
        chars[i as usize].to_string()
    } else {
        String::new()
    }
}

/// Position of the first occurrence, -1 when there is none. The empty
/// needle occurs at position 0.
pub fn c_io(s: &str, needle: &str) -> i64 {
    let hay: Vec<char> = s.chars().collect();
    let pat: Vec<char> = needle.chars().collect();
    if pat.is_empty() {
        return 0;
    }
    if pat.len() > hay.len() {
        return -1;
    }
    for start in 0..=(hay.len() - pat.len()) {
        if hay[start..start + pat.len()] == pat[..] {
            return start as i64;
        }
    }
    -1
}

pub fn c_le(s: &str) -> i64 {
    s.chars().count() as i64
}

pub fn c_conc(a: &str, b: &str) -> String {
    let mut out = a.to_string();
    out.push_str(b);
    out
}

// ----------------------------------------------------------------------
// evaluation

pub struct Interp {
    budget: u64,
}

pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

impl Interp {
    pub fn new(budget: u64) -> Interp {
        Interp { budget }
    }

    pub fn run(program: &Program, initial: State) -> Result<State, RunError> {
        Self::run_with_budget(program, initial, DEFAULT_STEP_BUDGET)
    }

    pub fn run_with_budget(
        program: &Program,
        initial: State,
        budget: u64,
    ) -> Result<State, RunError> {
        let mut interp = Interp::new(budget);
        let mut state = initial;
        interp.exec(&program.root, &mut state)?;
        Ok(state)
    }

    fn tick(&mut self) -> Result<(), RunError> {
        if self.budget == 0 {
            return Err(RunError::StepBudgetExceeded);
        }
        self.budget -= 1;
        Ok(())
    }

    pub fn exec(&mut self, s: &Stmt, state: &mut State) -> Result<(), RunError> {
        self.tick()?;
        match &s.kind {
            StmtKind::Assign(x, e) => {
                let v = self.eval(e, state)?;
                state.insert(x.clone(), v);
                Ok(())
            }
            StmtKind::If(g, t, e) => {
                let guard = self.eval(g, state)?;
                if c_to_bool(&guard) {
                    self.exec(t, state)
                } else {
                    self.exec(e, state)
                }
            }
            StmtKind::While(g, b) => loop {
                self.tick()?;
                let guard = self.eval(g, state)?;
                if !c_to_bool(&guard) {
                    return Ok(());
                }
                self.exec(b, state)?;
            },
            StmtKind::Block(ss) => {
                for s in ss {
                    self.exec(s, state)?;
                }
                Ok(())
            }
            StmtKind::Skip => Ok(()),
            // the eval argument is evaluated but never executed
            StmtKind::Eval(e) => self.eval(e, state).map(|_| ()),
        }
    }

    pub fn eval(&mut self, e: &Exp, state: &mut State) -> Result<ConcreteValue, RunError> {
        use ConcreteValue::*;
        match e {
            Exp::Var(x) => state
                .get(x)
                .cloned()
                .ok_or_else(|| RunError::Unbound(x.clone())),
            Exp::Lit(Literal::Int(v)) => Ok(Int(*v)),
            Exp::Lit(Literal::Str(s)) => Ok(Str(s.clone())),
            Exp::Lit(Literal::Bool(b)) => Ok(Bool(*b)),
            Exp::Lit(Literal::NaN) => Ok(NaN),
            Exp::Binary(op, l, r) => {
                let lv = self.eval(l, state)?;
                let rv = self.eval(r, state)?;
                Ok(self.binary(*op, lv, rv))
            }
            Exp::Unary(UnOp::Not, e) => {
                let v = self.eval(e, state)?;
                Ok(Bool(!c_to_bool(&v)))
            }
            Exp::Substring(recv, i, j) => {
                let s = c_to_str(&self.eval(recv, state)?);
                let i = int_index(&self.eval(i, state)?);
                let j = int_index(&self.eval(j, state)?);
                Ok(Str(c_ss(&s, i, j)))
            }
            Exp::CharAt(recv, i) => {
                let s = c_to_str(&self.eval(recv, state)?);
                let i = int_index(&self.eval(i, state)?);
                Ok(Str(c_ca(&s, i)))
            }
            Exp::IndexOf(recv, needle) => {
                let s = c_to_str(&self.eval(recv, state)?);
                let needle = c_to_str(&self.eval(needle, state)?);
                Ok(Int(c_io(&s, &needle)))
            }
            Exp::Length(recv) => {
                let s = c_to_str(&self.eval(recv, state)?);
                Ok(Int(c_le(&s)))
            }
            Exp::Assign(x, rhs) => {
                let v = self.eval(rhs, state)?;
                state.insert(x.clone(), v.clone());
                Ok(v)
            }
        }
    }

    fn binary(&mut self, op: BinOp, l: ConcreteValue, r: ConcreteValue) -> ConcreteValue {
        use ConcreteValue::*;
        match op {
            BinOp::Add => {
                if matches!(l, Str(_)) || matches!(r, Str(_)) {
                    Str(c_conc(&c_to_str(&l), &c_to_str(&r)))
                } else {
                    // non-string values always convert to an integer
                    let a = c_to_int(&l).expect("non-string toInt is total");
                    let b = c_to_int(&r).expect("non-string toInt is total");
                    Int(a.saturating_add(b))
                }
            }
            BinOp::Sub | BinOp::Mul | BinOp::Div => {
                let (Some(a), Some(b)) = (c_to_int(&l), c_to_int(&r)) else {
                    return NaN;
                };
                match op {
                    BinOp::Sub => Int(a.saturating_sub(b)),
                    BinOp::Mul => Int(a.saturating_mul(b)),
                    BinOp::Div => {
                        if b == 0 {
                            NaN
                        } else {
                            Int(a.checked_div(b).unwrap_or(i64::MAX))
                        }
                    }
                    _ => unreachable!(),
                }
            }
            BinOp::And => Bool(c_to_bool(&l) && c_to_bool(&r)),
            BinOp::Or => Bool(c_to_bool(&l) || c_to_bool(&r)),
            BinOp::Lt | BinOp::Gt => {
                // comparisons against NaN (the value, or a non-numeric
                // string) are false; other operands coerce through toInt
                if matches!(l, NaN) || matches!(r, NaN) {
                    return Bool(false);
                }
                let (Some(a), Some(b)) = (c_to_int(&l), c_to_int(&r)) else {
                    return Bool(false);
                };
                Bool(if op == BinOp::Lt { a < b } else { a > b })
            }
            BinOp::Eq => Bool(l == r),
        }
    }
}

/// Index coercion: non-numeric strings (the NaN case) index at 0.
fn int_index(v: &ConcreteValue) -> i64 {
    c_to_int(v).unwrap_or(0)
}
