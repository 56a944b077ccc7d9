//! Mini-regex patterns for intersection/subset queries: literals,
//! backslash escapes, `.`, character classes like `[a-z0-9_]`, `*`, `+`,
//! `|`, and grouping. Matching is anchored: the pattern describes whole
//! words, so the compiled automaton is `Min` of the pattern's language.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::automaton::{Dfa, Nfa, StateId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PatternError {
    #[error("pattern syntax error at byte {0}: {1}")]
    Syntax(usize, String),
    #[error("pattern symbol '{0}' is not in the configured alphabet")]
    SymbolNotInAlphabet(char),
}

pub fn compile_pattern(pattern: &str, alphabet: &Arc<Alphabet>) -> Result<Dfa, PatternError> {
    let chars: Vec<char> = pattern.chars().collect();
    let mut parser = PatternParser {
        chars,
        at: 0,
        alphabet: Arc::clone(alphabet),
    };
    let ast = parser.alternation()?;
    if parser.at != parser.chars.len() {
        return Err(PatternError::Syntax(parser.at, "unexpected ')'".to_string()));
    }
    let mut nfa = Nfa::new(alphabet);
    let start = nfa.add_state();
    let accept = nfa.add_state();
    nfa.set_initial(start);
    nfa.set_final(accept);
    build(&mut nfa, &ast, start, accept);
    Ok(nfa.determinize())
}

enum Node {
    Empty,
    Symbols(BTreeSet<char>),
    Concat(Vec<Node>),
    Alt(Vec<Node>),
    Star(Box<Node>),
    Plus(Box<Node>),
}

struct PatternParser {
    chars: Vec<char>,
    at: usize,
    alphabet: Arc<Alphabet>,
}

impl PatternParser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).copied()
    }

    fn check_symbol(&self, c: char) -> Result<char, PatternError> {
        if self.alphabet.contains(c) {
            Ok(c)
        } else {
            Err(PatternError::SymbolNotInAlphabet(c))
        }
    }

    fn alternation(&mut self) -> Result<Node, PatternError> {
        let mut branches = vec![self.concat()?];
        while self.peek() == Some('|') {
            self.at += 1;
            branches.push(self.concat()?);
        }
        Ok(if branches.len() == 1 {
            branches.pop().expect("one branch")
        } else {
            Node::Alt(branches)
        })
    }

    fn concat(&mut self) -> Result<Node, PatternError> {
        let mut parts = Vec::new();
        while !matches!(self.peek(), None | Some('|') | Some(')')) {
            parts.push(self.repeat()?);
        }
        Ok(match parts.len() {
            0 => Node::Empty,
            1 => parts.pop().expect("one part"),
            _ => Node::Concat(parts),
        })
    }

    fn repeat(&mut self) -> Result<Node, PatternError> {
        let mut node = self.atom()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.at += 1;
                    node = Node::Star(Box::new(node));
                }
                Some('+') => {
                    self.at += 1;
                    node = Node::Plus(Box::new(node));
                }
                _ => return Ok(node),
            }
        }
    }

    fn atom(&mut self) -> Result<Node, PatternError> {
        match self.peek() {
            Some('(') => {
                self.at += 1;
                let inner = self.alternation()?;
                if self.peek() != Some(')') {
                    return Err(PatternError::Syntax(self.at, "expected ')'".to_string()));
                }
                self.at += 1;
                Ok(inner)
            }
            Some('[') => {
                self.at += 1;
                self.class()
            }
            Some('.') => {
                self.at += 1;
                Ok(Node::Symbols(
                    self.alphabet.symbols().iter().copied().collect(),
                ))
            }
            Some('\\') => {
                self.at += 1;
                let Some(c) = self.peek() else {
                    return Err(PatternError::Syntax(
                        self.at,
                        "dangling escape".to_string(),
                    ));
                };
                self.at += 1;
                Ok(Node::Symbols([self.check_symbol(c)?].into()))
            }
            Some(c) if !"*+|)".contains(c) => {
                self.at += 1;
                Ok(Node::Symbols([self.check_symbol(c)?].into()))
            }
            Some(c) => Err(PatternError::Syntax(
                self.at,
                format!("unexpected '{c}'"),
            )),
            None => Err(PatternError::Syntax(self.at, "unexpected end".to_string())),
        }
    }

    fn class(&mut self) -> Result<Node, PatternError> {
        let mut set = BTreeSet::new();
        loop {
            let Some(c) = self.peek() else {
                return Err(PatternError::Syntax(self.at, "unclosed class".to_string()));
            };
            if c == ']' {
                self.at += 1;
                if set.is_empty() {
                    return Err(PatternError::Syntax(self.at, "empty class".to_string()));
                }
                return Ok(Node::Symbols(set));
            }
            let lo = if c == '\\' {
                self.at += 1;
                let Some(e) = self.peek() else {
                    return Err(PatternError::Syntax(self.at, "dangling escape".to_string()));
                };
                e
            } else {
                c
            };
            self.at += 1;
            if self.peek() == Some('-') && self.chars.get(self.at + 1) != Some(&']') {
                self.at += 1;
                let Some(hi) = self.peek() else {
                    return Err(PatternError::Syntax(self.at, "unclosed range".to_string()));
                };
                self.at += 1;
                if hi < lo {
                    return Err(PatternError::Syntax(
                        self.at,
                        format!("reversed range {lo}-{hi}"),
                    ));
                }
                for c in lo..=hi {
                    set.insert(self.check_symbol(c)?);
                }
            } else {
                set.insert(self.check_symbol(lo)?);
            }
        }
    }
}

fn build(nfa: &mut Nfa, node: &Node, from: StateId, to: StateId) {
    match node {
        Node::Empty => nfa.add_edge(from, None, to),
        Node::Symbols(set) => {
            for &c in set {
                nfa.add_edge(from, Some(c), to);
            }
        }
        Node::Concat(parts) => {
            let mut at = from;
            for (k, part) in parts.iter().enumerate() {
                let next = if k + 1 == parts.len() {
                    to
                } else {
                    nfa.add_state()
                };
                build(nfa, part, at, next);
                at = next;
            }
        }
        Node::Alt(branches) => {
            for branch in branches {
                build(nfa, branch, from, to);
            }
        }
        Node::Star(inner) => {
            let hub = nfa.add_state();
            nfa.add_edge(from, None, hub);
            nfa.add_edge(hub, None, to);
            build_loop(nfa, inner, hub);
        }
        Node::Plus(inner) => {
            let hub = nfa.add_state();
            build(nfa, inner, from, hub);
            nfa.add_edge(hub, None, to);
            build_loop(nfa, inner, hub);
        }
    }
}

fn build_loop(nfa: &mut Nfa, inner: &Node, hub: StateId) {
    let back = nfa.add_state();
    build(nfa, inner, hub, back);
    nfa.add_edge(back, None, hub);
}
