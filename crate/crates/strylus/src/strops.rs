//! Abstract semantics of the string operations: substring, charAt, length,
//! indexOf, and concatenation, over canonical automata and intervals.
//!
//! The substring operator dispatches on the finiteness of the four interval
//! bounds. Finite rectangles of index pairs are computed exactly from the
//! per-pair formula (quotient of indexed suffixes, filtered by word
//! length); unbounded ends fall back to suffix/factor constructions that
//! over-approximate. Both interval arguments are clamped non-negative
//! first, matching the concrete rule that negative indexes behave as zero.
//!
//! The per-pair formulas only see words long enough to reach the start
//! index; shorter words concretely produce the empty string (indexes clamp
//! to the word length), so every case joins `Min({eps})` when the language
//! has a word shorter than the start index.

use std::collections::{BTreeSet, HashMap};

use crate::automaton::{Cardinality, Dfa, Nfa, PathLen};
use crate::interval::{Bound, Interval};
use crate::transforms::{factors, product_live_pairs, right_quotient, suffixes, suffixes_from};

/// Widths beyond this are treated as unbounded (a sound over-approximation
/// that keeps index rectangles small).
const DIM_CAP: u64 = 24;

/// Length filters `Σ^m` / `Σ^{<m}` are dropped beyond this size; dropping
/// a filter only widens the result.
const LEN_CAP: u64 = 512;

/// Recursion bookkeeping for the substring dispatch.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct SsTrace {
    pub recursive_calls: usize,
    pub max_depth: usize,
}

/// A clamped index interval: the lower bound is a natural, the upper bound
/// is a natural or unbounded.
type NatRange = (u64, Option<u64>);

fn clamp_to_nat(i: &Interval) -> Option<NatRange> {
    let (lo, hi) = i.bounds()?;
    let lo = match lo {
        Bound::NegInf => 0,
        Bound::Finite(v) => v.max(0) as u64,
        Bound::PosInf => unreachable!("lower bound cannot be +inf"),
    };
    let hi = match hi {
        Bound::NegInf => unreachable!("upper bound cannot be -inf"),
        Bound::Finite(v) => Some(v.max(0) as u64),
        Bound::PosInf => None,
    };
    Some((lo, hi))
}

fn cap_width((lo, hi): NatRange) -> NatRange {
    match hi {
        Some(h) if h - lo + 1 > DIM_CAP => (lo, None),
        _ => (lo, hi),
    }
}

/// Memoizes `suffixes_from` per start index for one substring evaluation.
struct SuffixCache<'a> {
    a: &'a Dfa,
    memo: HashMap<u64, Dfa>,
}

impl<'a> SuffixCache<'a> {
    fn new(a: &'a Dfa) -> Self {
        SuffixCache {
            a,
            memo: HashMap::new(),
        }
    }

    fn get(&mut self, i: u64) -> Dfa {
        self.memo
            .entry(i)
            .or_insert_with(|| suffixes_from(self.a, i))
            .clone()
    }
}

/// Abstract substring: over-approximates the set of substrings of words of
/// `a` taken between a start index in `start` and an end index in `end`.
pub fn ss_abs(a: &Dfa, start: &Interval, end: &Interval) -> Dfa {
    ss_abs_traced(a, start, end).0
}

/// Same as [`ss_abs`] but reports how many recursive dispatches were made.
pub fn ss_abs_traced(a: &Dfa, start: &Interval, end: &Interval) -> (Dfa, SsTrace) {
    let mut trace = SsTrace::default();
    if a.is_empty() {
        return (Dfa::empty(a.alphabet()), trace);
    }
    let (Some(s), Some(e)) = (clamp_to_nat(start), clamp_to_nat(end)) else {
        return (Dfa::empty(a.alphabet()), trace);
    };
    let mut cache = SuffixCache::new(a);
    let result = ss_dispatch(a, cap_width(s), cap_width(e), 0, &mut trace, &mut cache);
    (result, trace)
}

fn ss_dispatch(
    a: &Dfa,
    (i, j): NatRange,
    (l, k): NatRange,
    depth: usize,
    trace: &mut SsTrace,
    cache: &mut SuffixCache,
) -> Dfa {
    trace.max_depth = trace.max_depth.max(depth);
    match (j, k) {
        (Some(j), Some(k)) => ss_finite_rect(a, i, j, l, k, cache),
        (Some(j), None) => ss_right_open(a, i, j, l, cache),
        (None, None) => ss_both_open(a, i, l, cache),
        (None, Some(k)) => {
            // unbounded starts with bounded ends: starts past k swap into
            // ends, the rest is the finite rectangle up to k
            if i <= k && k - i + 1 > DIM_CAP {
                // the rectangle would be too wide; widening the bounded
                // end reaches the all-open case instead
                trace.recursive_calls += 1;
                return ss_dispatch(a, (i, None), (l, None), depth + 1, trace, cache);
            }
            trace.recursive_calls += 1;
            let swapped = ss_dispatch(a, (l, Some(k)), (k, None), depth + 1, trace, cache);
            if i <= k {
                trace.recursive_calls += 1;
                let rect = ss_dispatch(a, (i, Some(k)), (l, Some(k)), depth + 1, trace, cache);
                swapped.lub(&rect)
            } else {
                swapped
            }
        }
    }
}

/// Finite rectangle of index pairs; each pair is normalized by the
/// concrete swap rule before the exact per-pair formula is applied.
fn ss_finite_rect(a: &Dfa, i: u64, j: u64, l: u64, k: u64, cache: &mut SuffixCache) -> Dfa {
    let mut pairs = BTreeSet::new();
    for x in i..=j {
        for y in l..=k {
            pairs.insert((x.min(y), x.max(y)));
        }
    }
    let mut acc = Dfa::empty(a.alphabet());
    for (p, q) in pairs {
        acc = acc.lub(&ss_pair(a, p, q, cache));
    }
    acc
}

/// Exact substrings of words of `a` from index `p` to index `q` (p <= q):
/// full-length slices of long words, clamped tails of medium words, and
/// the empty string for words shorter than `p`.
fn ss_pair(a: &Dfa, p: u64, q: u64, cache: &mut SuffixCache) -> Dfa {
    debug_assert!(p <= q);
    let su_p = cache.get(p);
    let su_q = cache.get(q);
    let width = q - p;
    let quotient = right_quotient(&su_p, &su_q);
    let full = if width <= LEN_CAP {
        quotient.glb(&Dfa::fixed_len_lang(a.alphabet(), width as usize))
    } else {
        quotient
    };
    let clamped = if width <= LEN_CAP {
        su_p.glb(&Dfa::bounded_len_lang(a.alphabet(), width as usize))
    } else {
        su_p
    };
    let mut acc = full.lub(&clamped);
    if has_word_shorter_than(a, p) {
        acc = acc.lub(&Dfa::epsilon(a.alphabet()));
    }
    acc
}

/// Substrings starting exactly at `x` with end index ranging over
/// `[m, +inf)`, where `x <= m`.
fn ss_right_pair(a: &Dfa, x: u64, m: u64, cache: &mut SuffixCache) -> Dfa {
    debug_assert!(x <= m);
    let su_x = cache.get(x);
    let su_m = cache.get(m);
    let mut acc = right_quotient(&su_x, &suffixes(&su_m));
    // words with x <= |w| <= m have their end clamped to |w|
    let width = m - x + 1;
    let clamped = if width <= LEN_CAP {
        su_x.glb(&Dfa::bounded_len_lang(a.alphabet(), width as usize))
    } else {
        su_x
    };
    acc = acc.lub(&clamped);
    if has_word_shorter_than(a, x) {
        acc = acc.lub(&Dfa::epsilon(a.alphabet()));
    }
    acc
}

/// Starts in `[i, j]`, ends in `[l, +inf)`.
fn ss_right_open(a: &Dfa, i: u64, j: u64, l: u64, cache: &mut SuffixCache) -> Dfa {
    let mut acc = Dfa::empty(a.alphabet());
    for x in i..=j {
        acc = acc.lub(&ss_right_pair(a, x, l.max(x), cache));
    }
    // end indexes below the start swap into finite pairs
    if j > l && j - l > DIM_CAP {
        // too many swapped pairs; they all have both indexes >= l, which
        // the all-open case covers
        return acc.lub(&ss_both_open(a, l, l, cache));
    }
    let mut pairs = BTreeSet::new();
    for x in i..=j {
        for y in l..x {
            pairs.insert((y, x));
        }
    }
    for (p, q) in pairs {
        acc = acc.lub(&ss_pair(a, p, q, cache));
    }
    acc
}

/// Starts in `[i, +inf)`, ends in `[l, +inf)`: starts up to `l` combine
/// with unbounded ends, and index pairs living entirely above `l` are all
/// factors of the suffixes from `l`.
fn ss_both_open(a: &Dfa, i: u64, l: u64, cache: &mut SuffixCache) -> Dfa {
    let mut acc = Dfa::empty(a.alphabet());
    if i <= l {
        for x in i..=l {
            acc = acc.lub(&ss_right_pair(a, x, l, cache));
        }
    }
    acc = acc.lub(&factors(&cache.get(l)));
    // some start index always exceeds the word length, producing epsilon
    acc.lub(&Dfa::epsilon(a.alphabet()))
}

fn has_word_shorter_than(a: &Dfa, p: u64) -> bool {
    a.min_word_len().is_some_and(|m| (m as u64) < p)
}

/// Abstract charAt: the language of single characters read at an index
/// drawn from `idx`, with the empty string for out-of-range indexes.
pub fn ca_abs(a: &Dfa, idx: &Interval) -> Dfa {
    if a.is_empty() {
        return Dfa::empty(a.alphabet());
    }
    let Some((lo, hi)) = idx.bounds() else {
        return Dfa::empty(a.alphabet());
    };
    let epsilon = Dfa::epsilon(a.alphabet());
    // negative indexes are out of range and read as epsilon
    let has_negative = lo < Bound::Finite(0);
    match hi {
        Bound::Finite(h) if h < 0 => epsilon,
        Bound::Finite(h) => {
            let start = match lo {
                Bound::Finite(v) => v.max(0) as u64,
                _ => 0,
            };
            let h = h as u64;
            let mut acc = if h - start + 1 > DIM_CAP {
                chars_lang(&suffixes_from(a, start)).lub(&epsilon)
            } else {
                let mut cache = SuffixCache::new(a);
                let mut acc = Dfa::empty(a.alphabet());
                for x in start..=h {
                    acc = acc.lub(&ss_pair(a, x, x + 1, &mut cache));
                }
                acc
            };
            if has_negative {
                acc = acc.lub(&epsilon);
            }
            acc
        }
        Bound::PosInf => match lo {
            Bound::Finite(l) if l >= 0 => {
                chars_lang(&suffixes_from(a, l as u64)).lub(&epsilon)
            }
            _ => chars_lang(a).lub(&epsilon),
        },
        Bound::NegInf => unreachable!("upper bound cannot be -inf"),
    }
}

/// Each transition symbol as a one-letter word.
fn chars_lang(a: &Dfa) -> Dfa {
    let words: Vec<String> = a.chars().into_iter().map(String::from).collect();
    Dfa::min_of(a.alphabet(), words).expect("transition symbols are in the alphabet")
}

/// Abstract length: the interval of word lengths, `[min, +inf]` as soon as
/// the automaton has a cycle.
pub fn le_abs(a: &Dfa) -> Interval {
    let Some(min) = a.min_word_len() else {
        return Interval::bottom();
    };
    if a.has_cycle() {
        return Interval::at_least(min as i64);
    }
    let max = a
        .final_states()
        .filter_map(|f| match a.max_path_len(a.initial(), f) {
            Some(PathLen::Finite(d)) => Some(d),
            _ => None,
        })
        .max()
        .expect("acyclic automaton with a reachable final state");
    Interval::finite(min as i64, max as i64)
}

/// Abstract indexOf: for every state of `a`, if some word of `needle` can
/// be read starting there, the length of a longest path from the initial
/// state to it is a possible match position; states where no needle word
/// starts contribute -1, as do words of `a` without any occurrence.
pub fn io_abs(a: &Dfa, needle: &Dfa) -> Interval {
    assert_eq!(
        a.alphabet(),
        needle.alphabet(),
        "automata over different alphabets cannot be combined"
    );
    if a.is_empty() || needle.is_empty() {
        return Interval::bottom();
    }
    let live = product_live_pairs(a, needle, false);
    let nb = needle.num_states();
    let mut values: BTreeSet<i64> = BTreeSet::new();
    let mut unbounded = false;
    for q in 0..a.num_states() {
        if live[q * nb + needle.initial()] {
            match a
                .max_path_len(a.initial(), q)
                .expect("canonical states are reachable")
            {
                PathLen::Finite(d) => {
                    values.insert(d as i64);
                }
                PathLen::Infinite => {
                    // the match state occurs at every depth from the
                    // shortest path on
                    let d = a.min_path_len(a.initial(), q).expect("reachable");
                    values.insert(d as i64);
                    unbounded = true;
                }
            }
        } else {
            values.insert(-1);
        }
    }
    // a pair (word, needle) without an occurrence concretely yields -1;
    // an infinite needle language always has a needle longer than any
    // fixed word, and a finite one is checked needle by needle (epsilon
    // occurs in everything and is skipped)
    match needle.cardinality() {
        Cardinality::Finite(k) if k <= 256 => {
            let top = Dfa::top(a.alphabet());
            for w in needle.enumerate().expect("finite") {
                if w.is_empty() {
                    continue;
                }
                let single = Dfa::min_of(a.alphabet(), [w.as_str()])
                    .expect("needle words are over the alphabet");
                let contains = cc_abs(&cc_abs(&top, &single), &top);
                if !a.leq(&contains) {
                    values.insert(-1);
                    break;
                }
            }
        }
        _ => {
            values.insert(-1);
        }
    }
    if a.cardinality() == Cardinality::Finite(1) && needle.cardinality() == Cardinality::Finite(1)
    {
        // a single word against a single needle matches at exactly one
        // position, the earliest collected one
        let v = values.iter().copied().find(|&v| v >= 0).unwrap_or(-1);
        return Interval::singleton(v);
    }
    let lo = *values.iter().next().expect("at least one state");
    if unbounded {
        Interval::at_least(lo)
    } else {
        Interval::finite(lo, *values.iter().next_back().expect("non-empty"))
    }
}

/// Abstract concatenation; exact since regular languages are closed under
/// concatenation.
pub fn cc_abs(a: &Dfa, b: &Dfa) -> Dfa {
    assert_eq!(
        a.alphabet(),
        b.alphabet(),
        "automata over different alphabets cannot be combined"
    );
    let mut nfa = Nfa::new(a.alphabet());
    let abase = nfa.import_dfa(a);
    let bbase = nfa.import_dfa(b);
    nfa.set_initial(abase + a.initial());
    for f in a.final_states() {
        nfa.clear_final(abase + f);
        nfa.add_edge(abase + f, None, bbase + b.initial());
    }
    nfa.determinize()
}
