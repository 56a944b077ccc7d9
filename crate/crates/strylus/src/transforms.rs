//! Regular-language transformations: suffixes, prefixes, indexed suffixes,
//! factors, right quotient, and the parametric widening on automata.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::automaton::{Dfa, Nfa, StateId};

/// `SU(L) = { y | xy in L }`: the automaton with every state initial.
pub fn suffixes(a: &Dfa) -> Dfa {
    let mut nfa = Nfa::new(a.alphabet());
    let base = nfa.import_dfa(a);
    for q in 0..a.num_states() {
        // canonical automata have all states reachable from the initial
        nfa.set_initial(base + q);
    }
    nfa.determinize()
}

/// `PR(L) = { x | xy in L }`: every state that can reach a final state
/// becomes final. On canonical automata that is every state, unless the
/// language is empty.
pub fn prefixes(a: &Dfa) -> Dfa {
    if a.is_empty() {
        return Dfa::empty(a.alphabet());
    }
    let mut nfa = Nfa::new(a.alphabet());
    let base = nfa.import_dfa(a);
    nfa.set_initial(base);
    for q in 0..a.num_states() {
        nfa.set_final(base + q);
    }
    nfa.determinize()
}

/// `FC(L) = { y | xyz in L }`, computed as prefixes of suffixes.
pub fn factors(a: &Dfa) -> Dfa {
    prefixes(&suffixes(a))
}

/// `SU(L, i) = { y | xy in L, |x| = i }`: suffixes that start exactly at
/// position `i`.
///
/// The subset sequence `R_0 = {q0}`, `R_{k+1} = one-symbol image of R_k`
/// is eventually periodic, so arbitrary indexes are resolved by detecting
/// the first repeated subset instead of stepping `i` times.
pub fn suffixes_from(a: &Dfa, i: u64) -> Dfa {
    let mut seen: HashMap<BTreeSet<StateId>, u64> = HashMap::new();
    let mut sequence: Vec<BTreeSet<StateId>> = Vec::new();
    let mut current: BTreeSet<StateId> = BTreeSet::new();
    current.insert(a.initial());
    let subset_at_i = loop {
        if let Some(&first) = seen.get(&current) {
            // R_i = R_{first + (i - first) mod period} for i >= first
            let period = sequence.len() as u64 - first;
            let idx = first + (i - first) % period;
            break sequence[idx as usize].clone();
        }
        if sequence.len() as u64 == i {
            break current;
        }
        seen.insert(current.clone(), sequence.len() as u64);
        sequence.push(current.clone());
        let mut next = BTreeSet::new();
        for &q in &current {
            next.extend(a.transitions_from(q).values().copied());
        }
        current = next;
    };

    if subset_at_i.is_empty() {
        return Dfa::empty(a.alphabet());
    }
    let mut nfa = Nfa::new(a.alphabet());
    let base = nfa.import_dfa(a);
    for q in subset_at_i {
        nfa.set_initial(base + q);
    }
    nfa.determinize()
}

/// `RQ(L1, L2) = { x | exists y in L2 with xy in L1 }`. Re-marks final
/// every state of `a` from which some word of `b` can be read into a final
/// state of `a`.
pub fn right_quotient(a: &Dfa, b: &Dfa) -> Dfa {
    assert_eq!(
        a.alphabet(),
        b.alphabet(),
        "automata over different alphabets cannot be combined"
    );
    let live = product_live_pairs(a, b, true);
    let mut finals = Vec::new();
    for q in 0..a.num_states() {
        if live[q * b.num_states() + b.initial()] {
            finals.push(q);
        }
    }
    let edges: Vec<(StateId, char, StateId)> = (0..a.num_states())
        .flat_map(|q| {
            a.transitions_from(q)
                .iter()
                .map(move |(&c, &t)| (q, c, t))
        })
        .collect();
    Dfa::from_parts(a.alphabet(), a.num_states(), &edges, a.initial(), &finals)
        .expect("edges come from a valid automaton")
}

/// Pairs `(qa, qb)` of the product automaton from which an accepting pair
/// is reachable. When `require_a_final` is false only the `b` side has to
/// accept, which corresponds to running `a` with all states final.
pub fn product_live_pairs(a: &Dfa, b: &Dfa, require_a_final: bool) -> Vec<bool> {
    let nb = b.num_states();
    let total = a.num_states() * nb;
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); total];
    for qa in 0..a.num_states() {
        for (&c, &ta) in a.transitions_from(qa) {
            for qb in 0..nb {
                if let Some(tb) = b.step(qb, c) {
                    rev[ta * nb + tb].push(qa * nb + qb);
                }
            }
        }
    }
    let mut live = vec![false; total];
    let mut queue = VecDeque::new();
    for qa in 0..a.num_states() {
        for qb in 0..nb {
            if (!require_a_final || a.is_final(qa)) && b.is_final(qb) {
                live[qa * nb + qb] = true;
                queue.push_back(qa * nb + qb);
            }
        }
    }
    while let Some(p) = queue.pop_front() {
        for &prev in &rev[p] {
            if !live[prev] {
                live[prev] = true;
                queue.push_back(prev);
            }
        }
    }
    live
}

/// Parametric widening: states of `lub(a, b)` that accept the same words
/// of length at most `n` are merged, and the merged automaton is
/// determinized and minimized again. The result always satisfies
/// `lub(a, b) <= widen(a, b, n)`.
pub fn widen(a: &Dfa, b: &Dfa, n: u32) -> Dfa {
    assert!(n >= 1, "widening parameter must be at least 1");
    let u = a.lub(b);
    let classes = bounded_residual_classes(&u, n);
    let num_classes = 1 + classes.iter().copied().max().unwrap_or(0);
    let mut nfa = Nfa::new(u.alphabet());
    for _ in 0..num_classes {
        nfa.add_state();
    }
    nfa.set_initial(classes[u.initial()]);
    for q in 0..u.num_states() {
        if u.is_final(q) {
            nfa.set_final(classes[q]);
        }
        for (&c, &t) in u.transitions_from(q) {
            nfa.add_edge(classes[q], Some(c), classes[t]);
        }
    }
    nfa.determinize()
}

/// Partitions states by equality of their residual languages truncated at
/// length `n`, computed as `n` rounds of Moore-style refinement starting
/// from the final/non-final split. A virtual dead state accounts for
/// missing transitions.
fn bounded_residual_classes(a: &Dfa, n: u32) -> Vec<usize> {
    let num = a.num_states();
    let dead = num;
    let present: BTreeSet<char> = a.chars();
    // round 0: epsilon membership
    let mut class: Vec<usize> = (0..=num)
        .map(|q| if q < num && a.is_final(q) { 0 } else { 1 })
        .collect();
    for _ in 0..n {
        let mut table: HashMap<(bool, Vec<usize>), usize> = HashMap::new();
        let mut next = vec![0usize; num + 1];
        for q in 0..=num {
            let is_final = q < num && a.is_final(q);
            let sig: Vec<usize> = present
                .iter()
                .map(|&c| {
                    let t = if q < num {
                        a.step(q, c).unwrap_or(dead)
                    } else {
                        dead
                    };
                    class[t]
                })
                .collect();
            let len = table.len();
            next[q] = *table.entry((is_final, sig)).or_insert(len);
        }
        if next == class {
            break;
        }
        class = next;
    }
    class.truncate(num);
    class
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use std::collections::BTreeSet;
    use std::sync::Arc;

    fn sigma() -> Arc<Alphabet> {
        Alphabet::printable_ascii()
    }

    fn dfa(words: &[&str]) -> Dfa {
        Dfa::min_of(&sigma(), words).unwrap()
    }

    fn words(a: &Dfa) -> BTreeSet<String> {
        a.enumerate().unwrap()
    }

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn suffixes_of_abc() {
        assert_eq!(words(&suffixes(&dfa(&["abc"]))), set(&["abc", "bc", "c", ""]));
    }

    #[test]
    fn suffixes_of_epsilon() {
        assert_eq!(suffixes(&dfa(&[""])), dfa(&[""]));
    }

    #[test]
    fn suffixes_contain_paper_examples() {
        let su = suffixes(&dfa(&["abc", "hello"]));
        assert!(su.accepts("llo"));
        assert!(su.accepts("c"));
        assert!(!su.accepts("hel"));
    }

    #[test]
    fn prefixes_of_abc() {
        assert_eq!(words(&prefixes(&dfa(&["abc"]))), set(&["", "a", "ab", "abc"]));
    }

    #[test]
    fn prefixes_of_bottom_and_star() {
        assert!(prefixes(&Dfa::empty(&sigma())).is_empty());
        let astar = Dfa::from_parts(&sigma(), 1, &[(0, 'a', 0)], 0, &[0]).unwrap();
        assert_eq!(prefixes(&astar), astar);
    }

    #[test]
    fn suffixes_from_examples() {
        let l = dfa(&["abc", "hello"]);
        assert_eq!(words(&suffixes_from(&l, 2)), set(&["c", "llo"]));
        assert_eq!(suffixes_from(&l, 0), l);
        assert!(suffixes_from(&dfa(&["abc"]), 5).is_empty());
    }

    #[test]
    fn suffixes_from_resolves_large_indexes_on_cycles() {
        // (ab)* : suffixes from any even index start at the initial state
        let abstar =
            Dfa::from_parts(&sigma(), 2, &[(0, 'a', 1), (1, 'b', 0)], 0, &[0]).unwrap();
        let even = suffixes_from(&abstar, 1_000_000);
        let odd = suffixes_from(&abstar, 1_000_001);
        assert_eq!(even, suffixes_from(&abstar, 0));
        assert_eq!(odd, suffixes_from(&abstar, 1));
        assert!(even.accepts("abab"));
        assert!(odd.accepts("bab"));
    }

    #[test]
    fn factors_examples() {
        assert_eq!(words(&factors(&dfa(&["ab"]))), set(&["", "a", "b", "ab"]));
        assert_eq!(factors(&dfa(&[""])), dfa(&[""]));
        let f = factors(&dfa(&["lang"]));
        assert!(f.accepts("an") && f.accepts("ang"));
    }

    #[test]
    fn right_quotient_paper_example() {
        let l1 = dfa(&["xab", "yab"]);
        let l2 = dfa(&["b", "ab"]);
        assert_eq!(words(&right_quotient(&l1, &l2)), set(&["xa", "ya", "x", "y"]));
    }

    #[test]
    fn right_quotient_identity_and_empty() {
        let a = dfa(&["abc", "de"]);
        assert_eq!(right_quotient(&a, &dfa(&[""])), a);
        assert!(right_quotient(&dfa(&["abc"]), &dfa(&["z"])).is_empty());
    }

    #[test]
    fn widen_merges_fig4_chain_into_a_loop() {
        let astar = Dfa::from_parts(&sigma(), 1, &[(0, 'a', 0)], 0, &[0]).unwrap();
        assert_eq!(widen(&dfa(&["", "a"]), &dfa(&["a", "aa"]), 1), astar);
    }

    #[test]
    fn widen_is_identity_without_mergeable_states() {
        // residuals of Min({ab}) differ pairwise already at depth 2
        let a = dfa(&["ab"]);
        assert_eq!(widen(&a, &a, 2), a);
    }

    #[test]
    fn widen_chain_produces_ab_plus() {
        let w = widen(&dfa(&["ab", "abab"]), &dfa(&["abab", "ababab"]), 2);
        for k in 1..=5 {
            assert!(w.accepts(&"ab".repeat(k)), "(ab)^{k} should be accepted");
        }
        assert!(!w.accepts(""));
        assert!(!w.accepts("a"));
        assert!(!w.accepts("aba"));
        // exactly (ab)+
        let u = dfa(&["ab", "abab", "ababab"]);
        assert!(u.leq(&w));
    }
}
