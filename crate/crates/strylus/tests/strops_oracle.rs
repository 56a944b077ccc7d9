//! The abstract string operations against the brute-force lift of the
//! concrete ones: exactness on finite inputs with bounded intervals for
//! substring/charAt/concat, soundness for length/indexOf, monotonicity,
//! and the recursion-depth bound of the substring dispatch.

mod common;

use common::*;
use strylus::automaton::Dfa;
use strylus::interval::{Bound, Interval};
use strylus::strops::{ca_abs, cc_abs, io_abs, le_abs, ss_abs, ss_abs_traced};

const SYMBOLS: [char; 3] = ['a', 'b', 'c'];

fn bounded_pair(rng: &mut rand_chacha::ChaCha8Rng) -> (Interval, Vec<i64>) {
    let a = rng.gen_range(0..=8i64);
    let b = rng.gen_range(0..=8i64);
    let (a, b) = (a.min(b), a.max(b));
    (Interval::finite(a, b), (a..=b).collect())
}

use rand::Rng;

#[test]
fn substring_is_exact_on_finite_inputs_and_bounded_intervals() {
    let mut rng = rng(0xC0);
    for round in 0..150 {
        let lang = random_language(&mut rng, &SYMBOLS, 12, 6);
        let a = dfa_of_language(&lang);
        let (start, starts) = bounded_pair(&mut rng);
        let (end, ends) = bounded_pair(&mut rng);
        let got = ss_abs(&a, &start, &end);
        let want = lift_ss(&lang, &starts, &ends);
        assert_eq!(
            got.enumerate().unwrap(),
            want,
            "round {round}: ss({lang:?}, {start}, {end})"
        );
    }
}

#[test]
fn charat_is_exact_on_finite_inputs_and_bounded_intervals() {
    let mut rng = rng(0xC1);
    for round in 0..150 {
        let lang = random_language(&mut rng, &SYMBOLS, 12, 6);
        let a = dfa_of_language(&lang);
        let (idx, indexes) = bounded_pair(&mut rng);
        let got = ca_abs(&a, &idx);
        let want = lift_ca(&lang, &indexes);
        assert_eq!(
            got.enumerate().unwrap(),
            want,
            "round {round}: ca({lang:?}, {idx})"
        );
    }
}

#[test]
fn concat_is_exact_on_finite_inputs() {
    let mut rng = rng(0xC2);
    for round in 0..150 {
        let l1 = random_language(&mut rng, &SYMBOLS, 12, 6);
        let l2 = random_language(&mut rng, &SYMBOLS, 12, 6);
        let got = cc_abs(&dfa_of_language(&l1), &dfa_of_language(&l2));
        assert_eq!(got.enumerate().unwrap(), lift_cc(&l1, &l2), "round {round}");
    }
}

#[test]
fn length_is_sound_and_tight_on_finite_inputs() {
    let mut rng = rng(0xC3);
    for _ in 0..150 {
        let lang = random_language(&mut rng, &SYMBOLS, 12, 6);
        let a = dfa_of_language(&lang);
        let got = le_abs(&a);
        let lens = lift_le(&lang);
        if lang.is_empty() {
            assert!(got.is_bottom());
            continue;
        }
        for len in &lens {
            assert!(got.contains(*len), "length {len} outside {got}");
        }
        // on finite inputs the interval hull is exact at the ends
        assert_eq!(
            got,
            Interval::finite(*lens.iter().next().unwrap(), *lens.iter().next_back().unwrap())
        );
    }
}

#[test]
fn indexof_is_sound_on_finite_inputs() {
    let mut rng = rng(0xC4);
    for round in 0..200 {
        let hay = random_language(&mut rng, &SYMBOLS, 8, 5);
        let needles = random_language(&mut rng, &SYMBOLS, 4, 3);
        let got = io_abs(&dfa_of_language(&hay), &dfa_of_language(&needles));
        let concrete = lift_io(&hay, &needles);
        if hay.is_empty() || needles.is_empty() {
            assert!(got.is_bottom());
            continue;
        }
        for v in &concrete {
            assert!(
                got.contains(*v),
                "round {round}: indexOf value {v} outside {got} (hay {hay:?}, needles {needles:?})"
            );
        }
    }
}

#[test]
fn indexof_is_sound_on_cyclic_inputs() {
    let mut rng = rng(0xC5);
    for round in 0..80 {
        let a = random_automaton(&mut rng, &SYMBOLS, 4);
        let needles = random_language(&mut rng, &SYMBOLS, 3, 2);
        let b = dfa_of_language(&needles);
        if a.is_empty() || b.is_empty() {
            continue;
        }
        let got = io_abs(&a, &b);
        // sample words of the (possibly infinite) language
        let sample = sample_words(&a, 60);
        for w in &sample {
            for n in &needles {
                let v = strylus::concrete::c_io(w, n);
                assert!(
                    got.contains(v),
                    "round {round}: indexOf({w:?}, {n:?}) = {v} outside {got}"
                );
            }
        }
    }
}

/// Collects accepted words by bounded path exploration.
fn sample_words(a: &Dfa, limit: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut stack = vec![(a.initial(), String::new())];
    while let Some((q, w)) = stack.pop() {
        if out.len() >= limit {
            break;
        }
        if a.is_final(q) {
            out.push(w.clone());
        }
        if w.len() < 7 {
            for (&c, &t) in a.transitions_from(q) {
                let mut next = w.clone();
                next.push(c);
                stack.push((t, next));
            }
        }
    }
    out
}

#[test]
fn substring_is_sound_with_unbounded_intervals() {
    let mut rng = rng(0xC6);
    for round in 0..120 {
        let lang = random_language(&mut rng, &SYMBOLS, 10, 6);
        if lang.is_empty() {
            continue;
        }
        let a = dfa_of_language(&lang);
        let start = random_interval(&mut rng, -2, 8);
        let end = random_interval(&mut rng, -2, 8);
        if start.is_bottom() || end.is_bottom() {
            continue;
        }
        let got = ss_abs(&a, &start.clamp_nonneg(), &end.clamp_nonneg());
        // sample concrete index pairs, including large ones standing in
        // for the unbounded ends
        let starts = sample_indexes(&start);
        let ends = sample_indexes(&end);
        for w in lift_ss(&lang, &starts, &ends) {
            assert!(
                got.accepts(&w),
                "round {round}: missing {w:?} for ss({lang:?}, {start}, {end})"
            );
        }
    }
}

fn sample_indexes(i: &Interval) -> Vec<i64> {
    let (lo, hi) = i.bounds().expect("non-bottom");
    let lo = match lo {
        Bound::Finite(v) => v.max(0),
        _ => 0,
    };
    match hi {
        Bound::Finite(h) => (lo..=h.max(lo)).collect(),
        _ => (lo..lo + 4).chain([lo + 11, lo + 23]).collect(),
    }
}

#[test]
fn charat_is_sound_with_unbounded_and_negative_intervals() {
    let mut rng = rng(0xC7);
    for round in 0..120 {
        let lang = random_language(&mut rng, &SYMBOLS, 10, 6);
        if lang.is_empty() {
            continue;
        }
        let a = dfa_of_language(&lang);
        let idx = random_interval(&mut rng, -4, 8);
        if idx.is_bottom() {
            continue;
        }
        let got = ca_abs(&a, &idx);
        let (lo, hi) = idx.bounds().unwrap();
        let lo = match lo {
            Bound::Finite(v) => v,
            _ => -3,
        };
        let hi = match hi {
            Bound::Finite(v) => v.max(lo),
            _ => lo + 12,
        };
        for w in lift_ca(&lang, &(lo..=hi).collect::<Vec<_>>()) {
            assert!(
                got.accepts(&w),
                "round {round}: missing {w:?} for ca({lang:?}, {idx})"
            );
        }
    }
}

#[test]
fn substring_recursion_depth_is_bounded() {
    let mut rng = rng(0xC8);
    for _ in 0..300 {
        let a = random_automaton(&mut rng, &SYMBOLS, 5);
        let start = random_interval(&mut rng, -3, 10);
        let end = random_interval(&mut rng, -3, 10);
        let (_, trace) = ss_abs_traced(&a, &start, &end);
        assert!(trace.recursive_calls <= 3, "calls = {}", trace.recursive_calls);
        assert!(trace.max_depth <= 3, "depth = {}", trace.max_depth);
    }
}

#[test]
fn substring_is_monotone_in_the_automaton() {
    let mut rng = rng(0xC9);
    for _ in 0..60 {
        let small = random_language(&mut rng, &SYMBOLS, 6, 5);
        let extra = random_language(&mut rng, &SYMBOLS, 6, 5);
        let mut large = small.clone();
        large.extend(extra);
        let (start, _) = bounded_pair(&mut rng);
        let end = random_interval(&mut rng, 0, 8);
        if end.is_bottom() {
            continue;
        }
        let lo = ss_abs(&dfa_of_language(&small), &start, &end);
        let hi = ss_abs(&dfa_of_language(&large), &start, &end);
        assert!(lo.leq(&hi), "ss not monotone");
    }
}
