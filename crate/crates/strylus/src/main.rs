//! The `strylus` command line: `analyze` for per-program-point
//! invariants, `run` for concrete execution, `query` for predicates on a
//! variable's string automaton at a program point.
//!
//! Exit codes: 0 success, 1 parse error, 2 configuration error (missing
//! files, bad alphabets, bad patterns, unknown variables or labels),
//! 3 unbound identifier at run time, 4 step budget exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use strylus::alphabet::Alphabet;
use strylus::analysis::{analyze, AbstractState, AnalysisConfig, AnalysisResult};
use strylus::concrete::{ConcreteValue, Interp, RunError, State, DEFAULT_STEP_BUDGET};
use strylus::frontend::{desugar, parse, Program};
use strylus::pattern::compile_pattern;
use strylus::report;
use strylus::strops::le_abs;

#[derive(Parser)]
#[command(name = "strylus", version, about = "Automata-based string analysis")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Analyze a program and print per-program-point invariants.
    Analyze(AnalyzeArgs),
    /// Execute a program concretely.
    Run(RunArgs),
    /// Analyze a program and evaluate a predicate on one variable.
    Query(QueryArgs),
}

#[derive(Args, Clone)]
struct AnalysisFlags {
    /// Widening precision parameter n (n >= 1).
    #[arg(long, default_value_t = 3)]
    widen_n: u32,
    /// Plain joins before widening engages.
    #[arg(long, default_value_t = 1)]
    widen_delay: u32,
    /// Iteration budget per loop head.
    #[arg(long, default_value_t = 64)]
    max_iters: u32,
    /// `ascii` or `file:PATH`; the STRYLUS_ALPHABET environment variable
    /// overrides this flag.
    #[arg(long, default_value = "ascii")]
    alphabet: String,
}

#[derive(Args)]
struct AnalyzeArgs {
    file: PathBuf,
    #[command(flatten)]
    flags: AnalysisFlags,
    /// Output format: text or json.
    #[arg(long, default_value = "text")]
    emit: String,
    /// Write VAR's string automaton at LABEL as DOT to VAR_LABEL.dot
    /// (repeatable), e.g. --dot d@eval1.
    #[arg(long, value_name = "VAR@LABEL")]
    dot: Vec<String>,
}

#[derive(Args)]
struct RunArgs {
    file: PathBuf,
    /// Initial bindings: either `name=literal` (repeatable) or a path to
    /// a file of `name = literal` lines.
    #[arg(long)]
    init: Vec<String>,
    /// Execution step budget.
    #[arg(long, default_value_t = DEFAULT_STEP_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct QueryArgs {
    file: PathBuf,
    #[command(flatten)]
    flags: AnalysisFlags,
    /// Variable to inspect.
    #[arg(long)]
    var: String,
    /// Program point (`Lk`, `evalK`, or `exit`).
    #[arg(long)]
    at: String,
    /// True iff the variable's language intersects the pattern.
    #[arg(long, group = "predicate")]
    intersects: Option<String>,
    /// True iff the variable's language is contained in the pattern.
    #[arg(long, group = "predicate")]
    subset_of: Option<String>,
    /// True iff the variable's language is empty.
    #[arg(long, group = "predicate")]
    empty: bool,
    /// Print the interval of lengths of the variable's language.
    #[arg(long, group = "predicate")]
    length: bool,
}

const EXIT_PARSE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_UNBOUND: u8 = 3;
const EXIT_BUDGET: u8 = 4;

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> CliError {
        CliError {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    fn parse(message: impl Into<String>) -> CliError {
        CliError {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Analyze(args) => cmd_analyze(args),
        Cmd::Run(args) => cmd_run(args),
        Cmd::Query(args) => cmd_query(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

/// Symbols the conversions rely on: digits, signs, and the letters of
/// `true`, `false`, and `NaN`.
fn required_symbols() -> impl Iterator<Item = char> {
    ('0'..='9').chain("+-truefalsNN".chars())
}

fn load_alphabet(spec: &str) -> Result<Arc<Alphabet>, CliError> {
    let spec = std::env::var("STRYLUS_ALPHABET").unwrap_or_else(|_| spec.to_string());
    let alphabet = if spec == "ascii" {
        Alphabet::printable_ascii()
    } else if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read alphabet file {path}: {e}")))?;
        let symbols: Vec<char> = text.chars().filter(|c| *c != '\n' && *c != '\r').collect();
        Alphabet::new(symbols).map_err(|e| CliError::config(e.to_string()))?
    } else {
        return Err(CliError::config(format!(
            "unknown alphabet '{spec}' (expected 'ascii' or 'file:PATH')"
        )));
    };
    if let Some(missing) = required_symbols().find(|c| !alphabet.contains(*c)) {
        return Err(CliError::config(format!(
            "alphabet is missing the conversion symbol '{missing}'"
        )));
    }
    Ok(alphabet)
}

fn load_program(path: &Path, alphabet: &Alphabet) -> Result<Program, CliError> {
    let source = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let program = parse(&source).map_err(|e| CliError::parse(e.to_string()))?;
    let program = desugar(&program).map_err(|e| CliError::parse(e.to_string()))?;
    program
        .check_literals(alphabet)
        .map_err(|e| CliError::config(e.to_string()))?;
    Ok(program)
}

fn build_config(flags: &AnalysisFlags) -> Result<(AnalysisConfig, String), CliError> {
    let alphabet = load_alphabet(&flags.alphabet)?;
    let name = std::env::var("STRYLUS_ALPHABET").unwrap_or_else(|_| flags.alphabet.clone());
    let cfg = AnalysisConfig {
        widen_n: flags.widen_n,
        widen_delay: flags.widen_delay,
        max_iters: flags.max_iters,
        alphabet,
    };
    cfg.validate().map_err(CliError::config)?;
    Ok((cfg, name))
}

fn run_analysis(
    file: &Path,
    flags: &AnalysisFlags,
) -> Result<(Program, AnalysisConfig, String, AnalysisResult), CliError> {
    let (cfg, alphabet_name) = build_config(flags)?;
    let program = load_program(file, &cfg.alphabet)?;
    let result = analyze(&program, &cfg);
    Ok((program, cfg, alphabet_name, result))
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let (program, cfg, alphabet_name, result) = run_analysis(&args.file, &args.flags)?;

    // resolve DOT requests before writing anything
    let mut dot_files: Vec<(String, String)> = Vec::new();
    for request in &args.dot {
        let (var, label_name) = request
            .split_once('@')
            .ok_or_else(|| CliError::config(format!("--dot expects VAR@LABEL, got '{request}'")))?;
        let label = program
            .resolve_label(label_name)
            .ok_or_else(|| CliError::config(format!("unknown label '{label_name}'")))?;
        let state = &result.points[&label];
        let value = state
            .get(var)
            .ok_or_else(|| CliError::config(format!("variable '{var}' is not bound at {label_name}")))?;
        let graph_name = format!("{var}_{label_name}");
        dot_files.push((format!("{graph_name}.dot"), value.string.to_dot(&graph_name)));
    }

    let output = match args.emit.as_str() {
        "text" => report::render_text(&program, &result),
        "json" => {
            let j = report::analysis_json(
                &args.file.display().to_string(),
                &program,
                &cfg,
                &alphabet_name,
                &result,
            );
            let mut s = serde_json::to_string_pretty(&j).expect("serializable");
            s.push('\n');
            s
        }
        other => return Err(CliError::config(format!("unknown format '{other}'"))),
    };

    for diag in &result.diagnostics {
        eprintln!("warning: {diag}");
    }
    print!("{output}");
    for (name, contents) in dot_files {
        std::fs::write(&name, contents)
            .map_err(|e| CliError::config(format!("cannot write {name}: {e}")))?;
    }
    Ok(())
}

fn parse_init_literal(text: &str) -> Result<ConcreteValue, CliError> {
    let text = text.trim();
    if let Some(stripped) = text.strip_prefix('"') {
        let inner = stripped
            .strip_suffix('"')
            .ok_or_else(|| CliError::config(format!("unterminated string literal: {text}")))?;
        let mut out = String::new();
        let mut chars = inner.chars();
        while let Some(c) = chars.next() {
            if c == '\\' {
                match chars.next() {
                    Some('"') => out.push('"'),
                    Some('\\') => out.push('\\'),
                    other => {
                        return Err(CliError::config(format!("bad escape {other:?} in {text}")))
                    }
                }
            } else {
                out.push(c);
            }
        }
        return Ok(ConcreteValue::Str(out));
    }
    match text {
        "true" => Ok(ConcreteValue::Bool(true)),
        "false" => Ok(ConcreteValue::Bool(false)),
        "NaN" => Ok(ConcreteValue::NaN),
        _ => text
            .parse::<i64>()
            .map(ConcreteValue::Int)
            .map_err(|_| CliError::config(format!("bad literal '{text}'"))),
    }
}

fn parse_init_line(line: &str, state: &mut State) -> Result<(), CliError> {
    let (name, value) = line
        .split_once('=')
        .ok_or_else(|| CliError::config(format!("bad init binding '{line}' (expected name = literal)")))?;
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(CliError::config(format!("bad variable name '{name}'")));
    }
    state.insert(name.to_string(), parse_init_literal(value)?);
    Ok(())
}

fn load_init(specs: &[String]) -> Result<State, CliError> {
    let mut state = State::new();
    for spec in specs {
        if spec.contains('=') {
            parse_init_line(spec, &mut state)?;
        } else {
            let text = std::fs::read_to_string(spec)
                .map_err(|e| CliError::config(format!("cannot read init file {spec}: {e}")))?;
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                parse_init_line(line, &mut state)?;
            }
        }
    }
    Ok(state)
}

fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    let alphabet = Alphabet::printable_ascii();
    let program = load_program(&args.file, &alphabet)?;
    let initial = load_init(&args.init)?;
    match Interp::run_with_budget(&program, initial, args.budget) {
        Ok(state) => {
            for (name, value) in &state {
                println!("{name} = {value}");
            }
            Ok(())
        }
        Err(RunError::Unbound(name)) => Err(CliError {
            code: EXIT_UNBOUND,
            message: format!("unbound identifier '{name}'"),
        }),
        Err(RunError::StepBudgetExceeded) => Err(CliError {
            code: EXIT_BUDGET,
            message: "step budget exceeded".to_string(),
        }),
    }
}

fn cmd_query(args: QueryArgs) -> Result<(), CliError> {
    let (program, cfg, _, result) = run_analysis(&args.file, &args.flags)?;
    let label = program
        .resolve_label(&args.at)
        .ok_or_else(|| CliError::config(format!("unknown label '{}'", args.at)))?;
    let state: &AbstractState = &result.points[&label];
    let value = state
        .get(&args.var)
        .ok_or_else(|| CliError::config(format!("variable '{}' is not bound at {}", args.var, args.at)))?;
    let lang = &value.string;

    if let Some(pattern) = &args.intersects {
        let pat = compile_pattern(pattern, &cfg.alphabet)
            .map_err(|e| CliError::config(e.to_string()))?;
        println!("{}", !lang.glb(&pat).is_empty());
    } else if let Some(pattern) = &args.subset_of {
        let pat = compile_pattern(pattern, &cfg.alphabet)
            .map_err(|e| CliError::config(e.to_string()))?;
        println!("{}", lang.leq(&pat));
    } else if args.empty {
        println!("{}", lang.is_empty());
    } else if args.length {
        println!("{}", le_abs(lang));
    } else {
        return Err(CliError::config(
            "choose one of --intersects, --subset-of, --empty, --length",
        ));
    }
    Ok(())
}
