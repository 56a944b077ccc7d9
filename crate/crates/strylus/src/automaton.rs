//! Canonical deterministic finite automata.
//!
//! Every [`Dfa`] handed out by this module is canonical: minimal, with all
//! states reachable from the initial state, and states numbered by a BFS
//! from the initial state that visits symbols in ascending order. By
//! Myhill-Nerode the minimal automaton of a regular language is unique up
//! to state renaming, and the BFS numbering fixes the renaming, so
//! structural equality (`==`) on canonical automata decides language
//! equality.
//!
//! Automata are partial: a missing transition means the word is rejected.
//! The one-state non-accepting automaton is the empty language (bottom of
//! the domain), and the one-state accepting automaton with a self-loop on
//! every symbol is the full language (top). Minimization completes the
//! automaton with a sink internally and drops it again afterwards.
//!
//! [`Nfa`] is a construction intermediate only; it is never stored in an
//! abstract value.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::alphabet::Alphabet;

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomatonError {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("symbol '{0}' is not in the configured alphabet")]
    SymbolNotInAlphabet(char),
    #[error("cannot enumerate an infinite language")]
    InfiniteLanguage,
    #[error("duplicate transition from state {0} on symbol '{1}'")]
    DuplicateTransition(StateId, char),
    #[error("state {0} out of range, automaton has {1} states")]
    InvalidState(StateId, usize),
}

/// Number of words of a language, if finite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cardinality {
    Finite(u64),
    Infinite,
}

/// Length of a longest path, if bounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathLen {
    Finite(usize),
    Infinite,
}

/// A canonical DFA. The initial state is always state 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    alphabet: Arc<Alphabet>,
    transitions: Vec<BTreeMap<char, StateId>>,
    finals: Vec<bool>,
}

/// Pre-canonical automaton used internally while constructing.
struct RawDfa {
    transitions: Vec<BTreeMap<char, StateId>>,
    initial: StateId,
    finals: Vec<bool>,
}

impl RawDfa {
    fn num_states(&self) -> usize {
        self.transitions.len()
    }
}

impl Dfa {
    // ------------------------------------------------------------------
    // constructors

    /// The empty language: one non-accepting state, no transitions.
    pub fn empty(alphabet: &Arc<Alphabet>) -> Dfa {
        Dfa {
            alphabet: Arc::clone(alphabet),
            transitions: vec![BTreeMap::new()],
            finals: vec![false],
        }
    }

    /// The language containing only the empty word.
    pub fn epsilon(alphabet: &Arc<Alphabet>) -> Dfa {
        Dfa {
            alphabet: Arc::clone(alphabet),
            transitions: vec![BTreeMap::new()],
            finals: vec![true],
        }
    }

    /// The full language over the alphabet: one accepting state with a
    /// self-loop on every symbol.
    pub fn top(alphabet: &Arc<Alphabet>) -> Dfa {
        let loops = alphabet.symbols().iter().map(|&c| (c, 0)).collect();
        Dfa {
            alphabet: Arc::clone(alphabet),
            transitions: vec![loops],
            finals: vec![true],
        }
    }

    /// Canonical DFA recognizing exactly the given finite set of words.
    pub fn min_of<S: AsRef<str>>(
        alphabet: &Arc<Alphabet>,
        words: impl IntoIterator<Item = S>,
    ) -> Result<Dfa, AutomatonError> {
        let mut nfa = Nfa::new(alphabet);
        let start = nfa.add_state();
        nfa.set_initial(start);
        for word in words {
            let word = word.as_ref();
            alphabet.check_word(word)?;
            let mut at = start;
            for c in word.chars() {
                let next = nfa.add_state();
                nfa.add_edge(at, Some(c), next);
                at = next;
            }
            nfa.set_final(at);
        }
        Ok(nfa.determinize())
    }

    /// Builds a canonical DFA from an explicit transition list. Intended
    /// for tests and for automata given as figures.
    pub fn from_parts(
        alphabet: &Arc<Alphabet>,
        num_states: usize,
        edges: &[(StateId, char, StateId)],
        initial: StateId,
        finals: &[StateId],
    ) -> Result<Dfa, AutomatonError> {
        let num_states = num_states.max(1);
        if initial >= num_states {
            return Err(AutomatonError::InvalidState(initial, num_states));
        }
        let mut transitions = vec![BTreeMap::new(); num_states];
        for &(from, c, to) in edges {
            if from >= num_states {
                return Err(AutomatonError::InvalidState(from, num_states));
            }
            if to >= num_states {
                return Err(AutomatonError::InvalidState(to, num_states));
            }
            if !alphabet.contains(c) {
                return Err(AutomatonError::SymbolNotInAlphabet(c));
            }
            if transitions[from].insert(c, to).is_some() {
                return Err(AutomatonError::DuplicateTransition(from, c));
            }
        }
        let mut fin = vec![false; num_states];
        for &f in finals {
            if f >= num_states {
                return Err(AutomatonError::InvalidState(f, num_states));
            }
            fin[f] = true;
        }
        Ok(canonicalize(
            alphabet,
            RawDfa {
                transitions,
                initial,
                finals: fin,
            },
        ))
    }

    /// `Min(Σ^m)`: all words of length exactly `m`.
    pub fn fixed_len_lang(alphabet: &Arc<Alphabet>, m: usize) -> Dfa {
        let mut transitions: Vec<BTreeMap<char, StateId>> = Vec::with_capacity(m + 1);
        for i in 0..m {
            transitions.push(alphabet.symbols().iter().map(|&c| (c, i + 1)).collect());
        }
        transitions.push(BTreeMap::new());
        let mut finals = vec![false; m + 1];
        finals[m] = true;
        Dfa {
            alphabet: Arc::clone(alphabet),
            transitions,
            finals,
        }
    }

    /// `Min(Σ^{<m})`: all words strictly shorter than `m`.
    pub fn bounded_len_lang(alphabet: &Arc<Alphabet>, m: usize) -> Dfa {
        if m == 0 {
            return Dfa::empty(alphabet);
        }
        let mut transitions: Vec<BTreeMap<char, StateId>> = Vec::with_capacity(m);
        for i in 0..m - 1 {
            transitions.push(alphabet.symbols().iter().map(|&c| (c, i + 1)).collect());
        }
        transitions.push(BTreeMap::new());
        Dfa {
            alphabet: Arc::clone(alphabet),
            transitions,
            finals: vec![true; m],
        }
    }

    // ------------------------------------------------------------------
    // accessors

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.transitions.len()
    }

    pub fn initial(&self) -> StateId {
        0
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q]
    }

    pub fn final_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(|&q| self.finals[q])
    }

    pub fn transitions_from(&self, q: StateId) -> &BTreeMap<char, StateId> {
        &self.transitions[q]
    }

    pub fn step(&self, q: StateId, c: char) -> Option<StateId> {
        self.transitions[q].get(&c).copied()
    }

    fn same_alphabet(&self, other: &Dfa) {
        assert_eq!(
            self.alphabet, other.alphabet,
            "automata over different alphabets cannot be combined"
        );
    }

    // ------------------------------------------------------------------
    // boolean and lattice operations

    /// Re-canonicalizes. Idempotent on canonical automata.
    pub fn minimize(&self) -> Dfa {
        canonicalize(
            &self.alphabet,
            RawDfa {
                transitions: self.transitions.clone(),
                initial: 0,
                finals: self.finals.clone(),
            },
        )
    }

    /// Least upper bound: language union.
    pub fn lub(&self, other: &Dfa) -> Dfa {
        self.same_alphabet(other);
        let mut nfa = Nfa::new(&self.alphabet);
        let a0 = nfa.import_dfa(self);
        let b0 = nfa.import_dfa(other);
        nfa.set_initial(a0);
        nfa.set_initial(b0);
        nfa.determinize()
    }

    /// Greatest lower bound: language intersection (product construction).
    pub fn glb(&self, other: &Dfa) -> Dfa {
        self.same_alphabet(other);
        let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut transitions: Vec<BTreeMap<char, StateId>> = Vec::new();
        let mut finals: Vec<bool> = Vec::new();
        let mut queue = VecDeque::new();
        ids.insert((0, 0), 0);
        transitions.push(BTreeMap::new());
        finals.push(self.finals[0] && other.finals[0]);
        queue.push_back((0, 0));
        while let Some((qa, qb)) = queue.pop_front() {
            let id = ids[&(qa, qb)];
            let mut out = BTreeMap::new();
            for (&c, &ta) in &self.transitions[qa] {
                if let Some(&tb) = other.transitions[qb].get(&c) {
                    let next = *ids.entry((ta, tb)).or_insert_with(|| {
                        transitions.push(BTreeMap::new());
                        finals.push(self.finals[ta] && other.finals[tb]);
                        queue.push_back((ta, tb));
                        transitions.len() - 1
                    });
                    out.insert(c, next);
                }
            }
            transitions[id] = out;
        }
        canonicalize(
            &self.alphabet,
            RawDfa {
                transitions,
                initial: 0,
                finals,
            },
        )
    }

    /// Complement w.r.t. the alphabet, via completion with a sink.
    fn complement(&self) -> Dfa {
        let n = self.num_states();
        let mut transitions: Vec<BTreeMap<char, StateId>> = Vec::with_capacity(n + 1);
        for q in 0..n {
            let mut out = BTreeMap::new();
            for &c in self.alphabet.symbols() {
                out.insert(c, self.step(q, c).unwrap_or(n));
            }
            transitions.push(out);
        }
        transitions.push(self.alphabet.symbols().iter().map(|&c| (c, n)).collect());
        let mut finals: Vec<bool> = self.finals.iter().map(|f| !f).collect();
        finals.push(true);
        canonicalize(
            &self.alphabet,
            RawDfa {
                transitions,
                initial: 0,
                finals,
            },
        )
    }

    /// Language difference `L(self) \ L(other)`.
    pub fn difference(&self, other: &Dfa) -> Dfa {
        self.same_alphabet(other);
        self.glb(&other.complement())
    }

    /// Language inclusion, decided through emptiness of the difference.
    pub fn leq(&self, other: &Dfa) -> bool {
        self.same_alphabet(other);
        self.difference(other).is_empty()
    }

    pub fn is_empty(&self) -> bool {
        // canonical form keeps only useful states, so emptiness is the
        // absence of final states
        !self.finals.iter().any(|&f| f)
    }

    pub fn accepts(&self, word: &str) -> bool {
        let mut q = 0;
        for c in word.chars() {
            match self.step(q, c) {
                Some(next) => q = next,
                None => return false,
            }
        }
        self.finals[q]
    }

    // ------------------------------------------------------------------
    // structural queries

    /// Symbols labeling at least one transition.
    pub fn chars(&self) -> BTreeSet<char> {
        self.transitions
            .iter()
            .flat_map(|out| out.keys().copied())
            .collect()
    }

    pub fn has_cycle(&self) -> bool {
        // iterative DFS, colors: 0 unvisited, 1 on stack, 2 done
        let n = self.num_states();
        let mut color = vec![0u8; n];
        for root in 0..n {
            if color[root] != 0 {
                continue;
            }
            let mut stack: Vec<(StateId, Vec<StateId>)> = vec![(root, self.successors(root))];
            color[root] = 1;
            while let Some((q, succ)) = stack.last_mut() {
                match succ.pop() {
                    Some(t) => match color[t] {
                        0 => {
                            color[t] = 1;
                            let next = self.successors(t);
                            stack.push((t, next));
                        }
                        1 => return true,
                        _ => {}
                    },
                    None => {
                        color[*q] = 2;
                        stack.pop();
                    }
                }
            }
        }
        false
    }

    fn successors(&self, q: StateId) -> Vec<StateId> {
        let set: BTreeSet<StateId> = self.transitions[q].values().copied().collect();
        set.into_iter().collect()
    }

    fn predecessors(&self) -> Vec<Vec<StateId>> {
        let mut preds = vec![BTreeSet::new(); self.num_states()];
        for (q, out) in self.transitions.iter().enumerate() {
            for &t in out.values() {
                preds[t].insert(q);
            }
        }
        preds.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    fn reachable_from(&self, start: StateId) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::new();
        seen[start] = true;
        queue.push_back(start);
        while let Some(q) = queue.pop_front() {
            for t in self.successors(q) {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    fn coreachable_to(&self, target: StateId) -> Vec<bool> {
        let preds = self.predecessors();
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::new();
        seen[target] = true;
        queue.push_back(target);
        while let Some(q) = queue.pop_front() {
            for &p in &preds[q] {
                if !seen[p] {
                    seen[p] = true;
                    queue.push_back(p);
                }
            }
        }
        seen
    }

    /// States lying on some accepting path.
    fn useful_states(&self) -> Vec<bool> {
        let preds = self.predecessors();
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::new();
        for q in 0..self.num_states() {
            if self.finals[q] {
                seen[q] = true;
                queue.push_back(q);
            }
        }
        while let Some(q) = queue.pop_front() {
            for &p in &preds[q] {
                if !seen[p] {
                    seen[p] = true;
                    queue.push_back(p);
                }
            }
        }
        // canonical automata have every state reachable already
        seen
    }

    /// True iff the language is finite: no cycle lies on an accepting path.
    pub fn is_finite(&self) -> bool {
        let useful = self.useful_states();
        !self.has_cycle_within(&useful)
    }

    fn has_cycle_within(&self, keep: &[bool]) -> bool {
        let n = self.num_states();
        let mut color = vec![0u8; n];
        for root in 0..n {
            if !keep[root] || color[root] != 0 {
                continue;
            }
            let mut stack: Vec<(StateId, Vec<StateId>)> = Vec::new();
            color[root] = 1;
            stack.push((root, self.successors(root)));
            while let Some((q, succ)) = stack.last_mut() {
                match succ.pop() {
                    Some(t) if keep[t] => match color[t] {
                        0 => {
                            color[t] = 1;
                            let next = self.successors(t);
                            stack.push((t, next));
                        }
                        1 => return true,
                        _ => {}
                    },
                    Some(_) => {}
                    None => {
                        color[*q] = 2;
                        stack.pop();
                    }
                }
            }
        }
        false
    }

    /// Lists the language. Errors out if it is infinite.
    pub fn enumerate(&self) -> Result<BTreeSet<String>, AutomatonError> {
        if !self.is_finite() {
            return Err(AutomatonError::InfiniteLanguage);
        }
        let useful = self.useful_states();
        let mut words = BTreeSet::new();
        let mut stack: Vec<(StateId, String)> = Vec::new();
        if useful[0] {
            stack.push((0, String::new()));
        }
        while let Some((q, prefix)) = stack.pop() {
            if self.finals[q] {
                words.insert(prefix.clone());
            }
            for (&c, &t) in &self.transitions[q] {
                if useful[t] {
                    let mut next = prefix.clone();
                    next.push(c);
                    stack.push((t, next));
                }
            }
        }
        Ok(words)
    }

    /// Number of accepted words, counted on the trimmed DAG.
    pub fn cardinality(&self) -> Cardinality {
        if self.is_empty() {
            return Cardinality::Finite(0);
        }
        if !self.is_finite() {
            return Cardinality::Infinite;
        }
        let useful = self.useful_states();
        let order = self.topo_order(&useful);
        let mut ways = vec![0u64; self.num_states()];
        ways[0] = 1;
        let mut total = 0u64;
        for &q in &order {
            if self.finals[q] {
                total = total.saturating_add(ways[q]);
            }
            for &t in self.transitions[q].values() {
                if useful[t] {
                    ways[t] = ways[t].saturating_add(ways[q]);
                }
            }
        }
        Cardinality::Finite(total)
    }

    /// Topological order of the kept subgraph (which must be acyclic),
    /// restricted to states reachable from the initial state.
    fn topo_order(&self, keep: &[bool]) -> Vec<StateId> {
        let n = self.num_states();
        let mut indeg = vec![0usize; n];
        for q in 0..n {
            if !keep[q] {
                continue;
            }
            for t in self.successors(q) {
                if keep[t] {
                    indeg[t] += 1;
                }
            }
        }
        let mut queue: VecDeque<StateId> =
            (0..n).filter(|&q| keep[q] && indeg[q] == 0).collect();
        let mut order = Vec::new();
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for t in self.successors(q) {
                if keep[t] {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        queue.push_back(t);
                    }
                }
            }
        }
        order
    }

    /// Shortest path length (in edges) from `q` to `q2`, if any.
    pub fn min_path_len(&self, q: StateId, q2: StateId) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.num_states()];
        dist[q] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(q);
        while let Some(u) = queue.pop_front() {
            if u == q2 {
                return Some(dist[u]);
            }
            for t in self.successors(u) {
                if dist[t] == usize::MAX {
                    dist[t] = dist[u] + 1;
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// Longest path length from `q` to `q2` counted on the condensation of
    /// the subgraph of states between them. Infinite when some path touches
    /// a non-trivial strongly connected component.
    pub fn max_path_len(&self, q: StateId, q2: StateId) -> Option<PathLen> {
        let reach = self.reachable_from(q);
        let coreach = self.coreachable_to(q2);
        let keep: Vec<bool> = reach
            .iter()
            .zip(&coreach)
            .map(|(&r, &c)| r && c)
            .collect();
        if !keep[q] || !keep[q2] {
            return None;
        }
        if self.has_cycle_within(&keep) {
            return Some(PathLen::Infinite);
        }
        let order = self.topo_order(&keep);
        let mut dist = vec![None; self.num_states()];
        dist[q] = Some(0usize);
        for &u in &order {
            let Some(du) = dist[u] else { continue };
            for t in self.successors(u) {
                if keep[t] && dist[t].map_or(true, |dt| dt < du + 1) {
                    dist[t] = Some(du + 1);
                }
            }
        }
        dist[q2].map(PathLen::Finite)
    }

    /// Length of a shortest accepted word, `None` for the empty language.
    pub fn min_word_len(&self) -> Option<usize> {
        self.final_states()
            .filter_map(|f| self.min_path_len(0, f))
            .min()
    }

    // ------------------------------------------------------------------
    // DOT emission

    /// Renders the automaton as a Graphviz digraph. Output is
    /// deterministic: states in canonical order, symbols in code order,
    /// parallel edges folded into one edge with a symbol-list label.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph {} {{", dot_id(name));
        let _ = writeln!(out, "  rankdir=LR;");
        let _ = writeln!(out, "  __start [shape=none, label=\"\"];");
        for q in 0..self.num_states() {
            let shape = if self.finals[q] { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  q{} [shape={}];", q, shape);
        }
        let _ = writeln!(out, "  __start -> q0;");
        for q in 0..self.num_states() {
            let mut grouped: BTreeMap<StateId, Vec<char>> = BTreeMap::new();
            for (&c, &t) in &self.transitions[q] {
                grouped.entry(t).or_default().push(c);
            }
            for (t, symbols) in grouped {
                let label: String = symbols
                    .iter()
                    .map(|c| dot_escape(*c))
                    .collect::<Vec<_>>()
                    .join(",");
                let _ = writeln!(out, "  q{} -> q{} [label=\"{}\"];", q, t, label);
            }
        }
        out.push_str("}\n");
        out
    }
}

fn dot_id(name: &str) -> String {
    let cleaned: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    if cleaned.is_empty() {
        "automaton".to_string()
    } else {
        cleaned
    }
}

fn dot_escape(c: char) -> String {
    match c {
        '"' => "\\\"".to_string(),
        '\\' => "\\\\".to_string(),
        _ => c.to_string(),
    }
}

// ----------------------------------------------------------------------
// canonicalization

/// Minimizes and renumbers a raw automaton into canonical form.
fn canonicalize(alphabet: &Arc<Alphabet>, raw: RawDfa) -> Dfa {
    let trimmed = trim(raw);
    let n = trimmed.num_states();
    if n == 0 {
        return Dfa::empty(alphabet);
    }

    // Moore partition refinement over the completed automaton. State `n`
    // is the virtual sink; only symbols that actually occur can split
    // classes, since absent symbols send every state to the sink.
    let mut present: BTreeSet<char> = BTreeSet::new();
    for out in &trimmed.transitions {
        present.extend(out.keys().copied());
    }
    let present: Vec<char> = present.into_iter().collect();

    let mut class: Vec<usize> = (0..=n)
        .map(|q| if q < n && trimmed.finals[q] { 0 } else { 1 })
        .collect();
    let mut num_classes = 2;
    loop {
        let mut table: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut next_class = vec![0usize; n + 1];
        for q in 0..=n {
            let sig: Vec<usize> = present
                .iter()
                .map(|c| {
                    let t = if q < n {
                        trimmed.transitions[q].get(c).copied().unwrap_or(n)
                    } else {
                        n
                    };
                    class[t]
                })
                .collect();
            let len = table.len();
            let id = *table.entry((class[q], sig)).or_insert(len);
            next_class[q] = id;
        }
        let stable = table.len() == num_classes;
        num_classes = table.len();
        class = next_class;
        if stable {
            break;
        }
    }

    // quotient, dropping the sink's class
    let sink_class = class[n];
    let mut rep: Vec<Option<StateId>> = vec![None; num_classes];
    for q in 0..n {
        if rep[class[q]].is_none() {
            rep[class[q]] = Some(q);
        }
    }
    let initial_class = class[trimmed.initial];
    if initial_class == sink_class {
        return Dfa::empty(alphabet);
    }

    let mut quotient: Vec<BTreeMap<char, usize>> = vec![BTreeMap::new(); num_classes];
    let mut qfinals = vec![false; num_classes];
    for (cls, r) in rep.iter().enumerate() {
        let Some(q) = *r else { continue };
        if cls == sink_class {
            continue;
        }
        qfinals[cls] = trimmed.finals[q];
        for (&c, &t) in &trimmed.transitions[q] {
            if class[t] != sink_class {
                quotient[cls].insert(c, class[t]);
            }
        }
    }

    // BFS renumbering from the initial class, symbols in ascending order
    let mut order: Vec<Option<StateId>> = vec![None; num_classes];
    let mut bfs = VecDeque::new();
    order[initial_class] = Some(0);
    bfs.push_back(initial_class);
    let mut count = 1;
    while let Some(cls) = bfs.pop_front() {
        for &t in quotient[cls].values() {
            if order[t].is_none() {
                order[t] = Some(count);
                count += 1;
                bfs.push_back(t);
            }
        }
    }

    let mut transitions: Vec<BTreeMap<char, StateId>> = vec![BTreeMap::new(); count];
    let mut finals = vec![false; count];
    for cls in 0..num_classes {
        let Some(new_id) = order[cls] else { continue };
        finals[new_id] = qfinals[cls];
        transitions[new_id] = quotient[cls]
            .iter()
            .map(|(&c, &t)| (c, order[t].expect("reachable class")))
            .collect();
    }
    Dfa {
        alphabet: Arc::clone(alphabet),
        transitions,
        finals,
    }
}

/// Restricts a raw automaton to states that are reachable from the initial
/// state and can reach a final state. Returns zero states when the
/// language is empty.
fn trim(raw: RawDfa) -> RawDfa {
    let n = raw.num_states();
    let mut reach = vec![false; n];
    let mut queue = VecDeque::new();
    reach[raw.initial] = true;
    queue.push_back(raw.initial);
    while let Some(q) = queue.pop_front() {
        for &t in raw.transitions[q].values() {
            if !reach[t] {
                reach[t] = true;
                queue.push_back(t);
            }
        }
    }
    let mut preds = vec![Vec::new(); n];
    for (q, out) in raw.transitions.iter().enumerate() {
        for &t in out.values() {
            preds[t].push(q);
        }
    }
    let mut live = vec![false; n];
    for q in 0..n {
        if raw.finals[q] && reach[q] {
            live[q] = true;
            queue.push_back(q);
        }
    }
    while let Some(q) = queue.pop_front() {
        for &p in &preds[q] {
            if reach[p] && !live[p] {
                live[p] = true;
                queue.push_back(p);
            }
        }
    }

    let keep: Vec<bool> = (0..n).map(|q| reach[q] && live[q]).collect();
    if !keep[raw.initial] {
        return RawDfa {
            transitions: Vec::new(),
            initial: 0,
            finals: Vec::new(),
        };
    }
    let mut remap = vec![usize::MAX; n];
    let mut count = 0;
    for q in 0..n {
        if keep[q] {
            remap[q] = count;
            count += 1;
        }
    }
    let mut transitions = vec![BTreeMap::new(); count];
    let mut finals = vec![false; count];
    for q in 0..n {
        if !keep[q] {
            continue;
        }
        finals[remap[q]] = raw.finals[q];
        for (&c, &t) in &raw.transitions[q] {
            if keep[t] {
                transitions[remap[q]].insert(c, remap[t]);
            }
        }
    }
    RawDfa {
        transitions,
        initial: remap[raw.initial],
        finals,
    }
}

// ----------------------------------------------------------------------
// NFA

/// Nondeterministic automaton with epsilon moves and a set of initial
/// states. Construction intermediate for unions, concatenations and the
/// regular-language transforms.
pub struct Nfa {
    alphabet: Arc<Alphabet>,
    transitions: Vec<Vec<(Option<char>, StateId)>>,
    initials: BTreeSet<StateId>,
    finals: BTreeSet<StateId>,
}

impl Nfa {
    pub fn new(alphabet: &Arc<Alphabet>) -> Nfa {
        Nfa {
            alphabet: Arc::clone(alphabet),
            transitions: Vec::new(),
            initials: BTreeSet::new(),
            finals: BTreeSet::new(),
        }
    }

    pub fn add_state(&mut self) -> StateId {
        self.transitions.push(Vec::new());
        self.transitions.len() - 1
    }

    /// Edge on a symbol, or an epsilon move when `symbol` is `None`.
    pub fn add_edge(&mut self, from: StateId, symbol: Option<char>, to: StateId) {
        self.transitions[from].push((symbol, to));
    }

    pub fn set_initial(&mut self, q: StateId) {
        self.initials.insert(q);
    }

    pub fn set_final(&mut self, q: StateId) {
        self.finals.insert(q);
    }

    pub fn clear_final(&mut self, q: StateId) {
        self.finals.remove(&q);
    }

    /// Copies all states and transitions of a DFA into this NFA and
    /// returns the id of the copied initial state. Finality is preserved;
    /// initiality is not.
    pub fn import_dfa(&mut self, dfa: &Dfa) -> StateId {
        let base = self.transitions.len();
        for q in 0..dfa.num_states() {
            let id = self.add_state();
            if dfa.is_final(q) {
                self.finals.insert(id);
            }
            let _ = id;
        }
        for q in 0..dfa.num_states() {
            for (&c, &t) in dfa.transitions_from(q) {
                self.add_edge(base + q, Some(c), base + t);
            }
        }
        base
    }

    fn epsilon_closure(&self, set: &BTreeSet<StateId>) -> BTreeSet<StateId> {
        let mut closure = set.clone();
        let mut stack: Vec<StateId> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &(sym, t) in &self.transitions[q] {
                if sym.is_none() && closure.insert(t) {
                    stack.push(t);
                }
            }
        }
        closure
    }

    /// Subset construction followed by minimization.
    pub fn determinize(&self) -> Dfa {
        if self.transitions.is_empty() || self.initials.is_empty() {
            return Dfa::empty(&self.alphabet);
        }
        let start = self.epsilon_closure(&self.initials);
        let mut ids: HashMap<BTreeSet<StateId>, StateId> = HashMap::new();
        let mut transitions: Vec<BTreeMap<char, StateId>> = Vec::new();
        let mut finals: Vec<bool> = Vec::new();
        let mut queue: VecDeque<BTreeSet<StateId>> = VecDeque::new();
        ids.insert(start.clone(), 0);
        transitions.push(BTreeMap::new());
        finals.push(start.iter().any(|q| self.finals.contains(q)));
        queue.push_back(start);
        while let Some(subset) = queue.pop_front() {
            let id = ids[&subset];
            let mut by_symbol: BTreeMap<char, BTreeSet<StateId>> = BTreeMap::new();
            for &q in &subset {
                for &(sym, t) in &self.transitions[q] {
                    if let Some(c) = sym {
                        by_symbol.entry(c).or_default().insert(t);
                    }
                }
            }
            let mut out = BTreeMap::new();
            for (c, targets) in by_symbol {
                let closed = self.epsilon_closure(&targets);
                let next = match ids.get(&closed) {
                    Some(&next) => next,
                    None => {
                        let next = transitions.len();
                        transitions.push(BTreeMap::new());
                        finals.push(closed.iter().any(|q| self.finals.contains(q)));
                        ids.insert(closed.clone(), next);
                        queue.push_back(closed);
                        next
                    }
                };
                out.insert(c, next);
            }
            transitions[id] = out;
        }
        canonicalize(
            &self.alphabet,
            RawDfa {
                transitions,
                initial: 0,
                finals,
            },
        )
    }
}
