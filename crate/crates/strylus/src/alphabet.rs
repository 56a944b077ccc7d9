//! Finite alphabets.
//!
//! A symbol is a single `char` drawn from a configured finite alphabet.
//! Automata are tied to one alphabet; binary operations require both sides
//! to share it. The default alphabet is printable ASCII (codes 32..=126),
//! which covers string literals, the decimal digits and signs needed for
//! numeric conversions, and the letters of `true`/`false`/`NaN`.

use std::sync::Arc;

use crate::automaton::AutomatonError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>, // sorted, deduplicated, non-empty
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Arc<Self>, AutomatonError> {
        let mut symbols: Vec<char> = symbols.into_iter().collect();
        symbols.sort_unstable();
        symbols.dedup();
        if symbols.is_empty() {
            return Err(AutomatonError::EmptyAlphabet);
        }
        Ok(Arc::new(Alphabet { symbols }))
    }

    /// Printable ASCII, codes 32..=126.
    pub fn printable_ascii() -> Arc<Self> {
        Alphabet::new((32u8..=126).map(char::from)).expect("non-empty")
    }

    pub fn contains(&self, c: char) -> bool {
        self.symbols.binary_search(&c).is_ok()
    }

    /// Symbols in ascending code order.
    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty alphabets
    }

    /// Checks that every character of `s` belongs to the alphabet.
    pub fn check_word(&self, s: &str) -> Result<(), AutomatonError> {
        match s.chars().find(|c| !self.contains(*c)) {
            Some(c) => Err(AutomatonError::SymbolNotInAlphabet(c)),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_alphabet_is_printable_ascii() {
        let sigma = Alphabet::printable_ascii();
        assert_eq!(sigma.len(), 95);
        assert!(sigma.contains(' '));
        assert!(sigma.contains('~'));
        assert!(!sigma.contains('\n'));
    }

    #[test]
    fn rejects_empty() {
        assert!(Alphabet::new(std::iter::empty()).is_err());
    }

    #[test]
    fn check_word_reports_offending_symbol() {
        let sigma = Alphabet::new("ab".chars()).unwrap();
        assert!(sigma.check_word("abba").is_ok());
        assert_eq!(
            sigma.check_word("abc"),
            Err(AutomatonError::SymbolNotInAlphabet('c'))
        );
    }
}
