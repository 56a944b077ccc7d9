//! Automata-based string analysis for a small dynamic language.
//!
//! The crate bundles three layers:
//!
//! * a finite automata library keeping every [`automaton::Dfa`] canonical
//!   (minimal, reachable, BFS-numbered), together with the regular-language
//!   transforms and the parametric widening used during analysis;
//! * abstract domains: integer intervals, boolean sets, and the product
//!   [`value::AbstractValue`] combining them with automata and a NaN flag,
//!   plus abstract versions of the string operations (`substring`,
//!   `charAt`, `indexOf`, `length`, concatenation) and the implicit type
//!   conversions of the analysed language;
//! * a frontend, a concrete interpreter, and an abstract interpreter for the
//!   toy language itself, exposed through the `strylus` command-line tool.

pub mod alphabet;
pub mod analysis;
pub mod automaton;
pub mod concrete;
pub mod frontend;
pub mod interval;
pub mod pattern;
pub mod report;
pub mod strops;
pub mod transforms;
pub mod value;
