//! Shared helpers for the integration suites: deterministic generators
//! for languages, automata, intervals and programs, plus brute-force
//! lifts of the concrete string operations.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use strylus::alphabet::Alphabet;
use strylus::automaton::Dfa;
use strylus::concrete;
use strylus::interval::{Bound, Interval};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sigma() -> Arc<Alphabet> {
    Alphabet::printable_ascii()
}

pub fn dfa(words: &[&str]) -> Dfa {
    Dfa::min_of(&sigma(), words).unwrap()
}

pub fn words_of(a: &Dfa) -> BTreeSet<String> {
    a.enumerate().unwrap()
}

pub fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// Random finite language over the given symbols.
pub fn random_language(
    rng: &mut ChaCha8Rng,
    symbols: &[char],
    max_words: usize,
    max_len: usize,
) -> BTreeSet<String> {
    let count = rng.gen_range(0..=max_words);
    let mut out = BTreeSet::new();
    for _ in 0..count {
        let len = rng.gen_range(0..=max_len);
        let word: String = (0..len)
            .map(|_| symbols[rng.gen_range(0..symbols.len())])
            .collect();
        out.insert(word);
    }
    out
}

pub fn dfa_of_language(language: &BTreeSet<String>) -> Dfa {
    Dfa::min_of(&sigma(), language.iter()).unwrap()
}

/// Random automaton, possibly cyclic: random transitions over the given
/// symbols, then canonicalized through `from_parts`.
pub fn random_automaton(rng: &mut ChaCha8Rng, symbols: &[char], max_states: usize) -> Dfa {
    let n = rng.gen_range(1..=max_states);
    let mut edges = Vec::new();
    for q in 0..n {
        for &c in symbols {
            if rng.gen_bool(0.5) {
                edges.push((q, c, rng.gen_range(0..n)));
            }
        }
    }
    let finals: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    Dfa::from_parts(&sigma(), n, &edges, 0, &finals).unwrap()
}

/// Random interval with bounds drawn from `lo..=hi`; either end may be
/// unbounded.
pub fn random_interval(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Interval {
    if rng.gen_bool(0.05) {
        return Interval::bottom();
    }
    let a = rng.gen_range(lo..=hi);
    let b = rng.gen_range(lo..=hi);
    let (a, b) = (a.min(b), a.max(b));
    let lower = if rng.gen_bool(0.15) {
        Bound::NegInf
    } else {
        Bound::Finite(a)
    };
    let upper = if rng.gen_bool(0.15) {
        Bound::PosInf
    } else {
        Bound::Finite(b)
    };
    Interval::Range(lower, upper)
}

pub fn interval_values(i: &Interval, lo: i64, hi: i64) -> Vec<i64> {
    (lo..=hi).filter(|v| i.contains(*v)).collect()
}

// ----------------------------------------------------------------------
// brute-force lifts of the concrete string operations

pub fn lift_ss(words: &BTreeSet<String>, starts: &[i64], ends: &[i64]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for w in words {
        for &i in starts {
            for &j in ends {
                out.insert(concrete::c_ss(w, i, j));
            }
        }
    }
    out
}

pub fn lift_ca(words: &BTreeSet<String>, indexes: &[i64]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for w in words {
        for &i in indexes {
            out.insert(concrete::c_ca(w, i));
        }
    }
    out
}

pub fn lift_io(haystacks: &BTreeSet<String>, needles: &BTreeSet<String>) -> BTreeSet<i64> {
    let mut out = BTreeSet::new();
    for h in haystacks {
        for n in needles {
            out.insert(concrete::c_io(h, n));
        }
    }
    out
}

pub fn lift_le(words: &BTreeSet<String>) -> BTreeSet<i64> {
    words.iter().map(|w| concrete::c_le(w)).collect()
}

pub fn lift_cc(left: &BTreeSet<String>, right: &BTreeSet<String>) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for a in left {
        for b in right {
            out.insert(concrete::c_conc(a, b));
        }
    }
    out
}

// ----------------------------------------------------------------------
// program generator

/// Deterministic generator of small well-formed programs: a prologue
/// binds every variable to a literal, the body mixes assignments,
/// branches and bounded counting loops.
pub struct ProgramGenerator {
    pub rng: ChaCha8Rng,
    loops: usize,
}

const VARS: [&str; 4] = ["a", "b", "s", "t"];
const STRING_LITS: [&str; 8] = ["", "a", "b", "ab", "ba", "0", "12", "x1"];

impl ProgramGenerator {
    pub fn new(seed: u64) -> ProgramGenerator {
        ProgramGenerator {
            rng: rng(seed),
            loops: 0,
        }
    }

    pub fn literal(&mut self) -> String {
        match self.rng.gen_range(0..4) {
            // the grammar has no unary minus; negatives spell as (0 - k)
            0 => {
                let v = self.rng.gen_range(-3..10);
                if v < 0 {
                    format!("(0 - {})", -v)
                } else {
                    v.to_string()
                }
            }
            1 => format!("{:?}", STRING_LITS[self.rng.gen_range(0..STRING_LITS.len())]),
            2 => ["true", "false"][self.rng.gen_range(0..2)].to_string(),
            _ => "NaN".to_string(),
        }
    }

    pub fn expr(&mut self, depth: usize) -> String {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return if self.rng.gen_bool(0.5) {
                VARS[self.rng.gen_range(0..VARS.len())].to_string()
            } else {
                self.literal()
            };
        }
        match self.rng.gen_range(0..12) {
            0..=4 => {
                let op = ["+", "-", "*", "/", "<", ">", "==", "&&", "||"]
                    [self.rng.gen_range(0..9)];
                format!("({} {} {})", self.expr(depth - 1), op, self.expr(depth - 1))
            }
            5 => format!("!{}", self.expr(depth - 1)),
            6 | 7 => format!(
                "{}.substring({}, {})",
                VARS[self.rng.gen_range(0..VARS.len())],
                self.expr(depth - 1),
                self.expr(depth - 1)
            ),
            8 => format!(
                "{}.charAt({})",
                VARS[self.rng.gen_range(0..VARS.len())],
                self.expr(depth - 1)
            ),
            9 => format!(
                "{}.indexOf({})",
                VARS[self.rng.gen_range(0..VARS.len())],
                self.expr(depth - 1)
            ),
            10 => format!("{}.length", VARS[self.rng.gen_range(0..VARS.len())]),
            _ => self.literal(),
        }
    }

    fn stmt(&mut self, depth: usize, out: &mut String, indent: usize) {
        let pad = "  ".repeat(indent);
        match self.rng.gen_range(0..10) {
            0..=5 => {
                let var = VARS[self.rng.gen_range(0..VARS.len())];
                let e = self.expr(depth.min(3));
                out.push_str(&format!("{pad}{var} = {e};\n"));
            }
            6 | 7 if depth > 0 => {
                let guard = self.expr(2);
                out.push_str(&format!("{pad}if ({guard}) {{\n"));
                let n = self.rng.gen_range(1..=2);
                for _ in 0..n {
                    self.stmt(depth - 1, out, indent + 1);
                }
                out.push_str(&format!("{pad}}} else {{\n"));
                let n = self.rng.gen_range(1..=2);
                for _ in 0..n {
                    self.stmt(depth - 1, out, indent + 1);
                }
                out.push_str(&format!("{pad}}}\n"));
            }
            8 if depth > 0 => {
                // a bounded counting loop with a dedicated counter
                self.loops += 1;
                let counter = format!("k{}", self.loops);
                let start = self.rng.gen_range(0..2);
                let bound = self.rng.gen_range(1..=4);
                out.push_str(&format!("{pad}{counter} = {start};\n"));
                out.push_str(&format!("{pad}while ({counter} < {bound}) {{\n"));
                out.push_str(&format!("{pad}  {counter} = {counter} + 1;\n"));
                let n = self.rng.gen_range(1..=2);
                for _ in 0..n {
                    self.stmt(depth - 1, out, indent + 1);
                }
                out.push_str(&format!("{pad}}}\n"));
            }
            _ => {
                let var = VARS[self.rng.gen_range(0..VARS.len())];
                let e = self.expr(depth.min(3));
                out.push_str(&format!("{pad}{var} = {e};\n"));
            }
        }
    }

    /// A complete program: every variable is bound before the body runs.
    pub fn program(&mut self, body_stmts: usize, depth: usize) -> String {
        let mut out = String::new();
        for var in VARS {
            let lit = self.literal();
            out.push_str(&format!("{var} = {lit};\n"));
        }
        for _ in 0..body_stmts {
            self.stmt(depth, &mut out, 0);
        }
        out
    }
}
