//! Whole-program soundness: for generated programs, every concrete final
//! value lies in the concretization of the abstract final value, and the
//! analysis terminates within its iteration budgets.

mod common;

use common::ProgramGenerator;
use strylus::alphabet::Alphabet;
use strylus::analysis::{analyze, AnalysisConfig};
use strylus::concrete::{ConcreteValue, Interp, State};
use strylus::frontend::{desugar, parse};
use strylus::value::AbstractValue;

fn contains(v: &AbstractValue, c: &ConcreteValue) -> bool {
    match c {
        ConcreteValue::Int(i) => v.int.contains(*i),
        ConcreteValue::Bool(b) => v.bools.contains(*b),
        ConcreteValue::Str(s) => v.string.accepts(s),
        ConcreteValue::NaN => v.nan,
    }
}

#[test]
fn concrete_runs_are_contained_in_the_analysis() {
    let mut checked = 0usize;
    for seed in 0..260 {
        let mut gen = ProgramGenerator::new(0xF000 + seed);
        let source = gen.program(5, 3);
        let program = desugar(&parse(&source).unwrap()).unwrap();

        let mut cfg = AnalysisConfig::new(Alphabet::printable_ascii());
        cfg.widen_n = if seed % 2 == 0 { 1 } else { 2 };
        cfg.widen_delay = (seed % 3) as u32;
        cfg.max_iters = 24;
        let result = analyze(&program, &cfg);
        let exit = result.exit_state(&program);

        let concrete = Interp::run(&program, State::new())
            .unwrap_or_else(|e| panic!("{e} on:\n{source}"));
        assert!(exit.is_reachable(), "program terminated but exit unreachable");
        for (name, value) in &concrete {
            let abstract_value = exit.get(name).unwrap_or_else(|| {
                panic!("variable {name} missing from the exit state for:\n{source}")
            });
            assert!(
                contains(abstract_value, value),
                "seed {seed}: {name} = {value:?} outside {abstract_value} in:\n{source}"
            );
        }
        checked += 1;
    }
    // two configurations per generated shape would halve coverage; make
    // sure the suite really exercised at least 500 program analyses
    assert!(checked >= 250);
}

#[test]
fn concrete_runs_are_contained_with_default_config() {
    for seed in 0..260 {
        let mut gen = ProgramGenerator::new(0xF900 + seed);
        let source = gen.program(4, 2);
        let program = desugar(&parse(&source).unwrap()).unwrap();
        let cfg = AnalysisConfig::new(Alphabet::printable_ascii());
        let result = analyze(&program, &cfg);
        let exit = result.exit_state(&program);
        let concrete = Interp::run(&program, State::new())
            .unwrap_or_else(|e| panic!("{e} on:\n{source}"));
        for (name, value) in &concrete {
            let abstract_value = exit.get(name).expect("written variable tracked");
            assert!(
                contains(abstract_value, value),
                "seed {seed}: {name} = {value:?} outside {abstract_value} in:\n{source}"
            );
        }
    }
}

#[test]
fn analysis_terminates_within_loop_budgets() {
    for seed in 0..120 {
        let mut gen = ProgramGenerator::new(0xFA00 + seed);
        let source = gen.program(6, 4);
        let program = desugar(&parse(&source).unwrap()).unwrap();
        let mut cfg = AnalysisConfig::new(Alphabet::printable_ascii());
        cfg.widen_n = 1 + (seed % 3) as u32;
        cfg.max_iters = 32;
        let result = analyze(&program, &cfg);
        for (label, iters) in &result.loop_iterations {
            assert!(
                *iters <= cfg.max_iters,
                "seed {seed}: loop at {label} used {iters} iterations"
            );
        }
    }
}

#[test]
fn free_variable_programs_analyze_but_abort_concretely() {
    // reads of unbound variables are a static diagnostic and an abstract
    // top; the concrete interpreter aborts instead
    let source = "x = u + 1; s = v.substring(0, u); while (u < 3) { u = u + 1; x = x * 2; }";
    let program = desugar(&parse(source).unwrap()).unwrap();
    let cfg = AnalysisConfig::new(Alphabet::printable_ascii());
    let result = analyze(&program, &cfg);
    assert!(result.diagnostics.iter().any(|d| d.contains("unbound")));
    assert!(result.exit_state(&program).is_reachable());
    assert!(matches!(
        Interp::run(&program, State::new()),
        Err(strylus::concrete::RunError::Unbound(_))
    ));

    // with the free variables bound concretely, containment holds for
    // every variable the program itself writes
    let mut init = State::new();
    init.insert("u".to_string(), ConcreteValue::Int(1));
    init.insert("v".to_string(), ConcreteValue::Str("hello".to_string()));
    let concrete = Interp::run(&program, init).unwrap();
    let exit = result.exit_state(&program);
    for name in ["x", "s"] {
        let abstract_value = exit.get(name).unwrap();
        assert!(
            contains(abstract_value, &concrete[name]),
            "{name} = {:?} outside {abstract_value}",
            concrete[name]
        );
    }
}
