//! Labeled syntax tree.
//!
//! Every statement node carries a program-point label (its pre-point);
//! the program additionally owns an exit point. Labels are dense indexes
//! into the program's point table and are printed as `L1..Ln`, with
//! `evalK` aliases for eval sites and `exit` for the final point.

use std::fmt;

pub type Label = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SourcePos {
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Literal {
    Int(i64),
    Str(String),
    Bool(bool),
    NaN,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    And,
    Or,
    Lt,
    Gt,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnOp {
    Not,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exp {
    Var(String),
    Lit(Literal),
    Binary(BinOp, Box<Exp>, Box<Exp>),
    Unary(UnOp, Box<Exp>),
    Substring(Box<Exp>, Box<Exp>, Box<Exp>),
    CharAt(Box<Exp>, Box<Exp>),
    IndexOf(Box<Exp>, Box<Exp>),
    Length(Box<Exp>),
    /// Embedded assignment, e.g. `(i = i + 2)` in a loop guard. Removed
    /// by desugaring; the interpreters only see assignment statements.
    Assign(String, Box<Exp>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Assign(String, Exp),
    If(Exp, Box<Stmt>, Box<Stmt>),
    While(Exp, Box<Stmt>),
    Block(Vec<Stmt>),
    Skip,
    /// `eval(e);` — an opaque sink: the argument's abstract value is
    /// recorded, the generated code is never analysed or executed.
    Eval(Exp),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub pre: Label,
    pub pos: SourcePos,
}

impl Stmt {
    pub fn new(kind: StmtKind, pos: SourcePos) -> Stmt {
        Stmt { kind, pre: 0, pos }
    }

    /// Equality of the tree shape, ignoring labels and source positions.
    pub fn structural_eq(&self, other: &Stmt) -> bool {
        match (&self.kind, &other.kind) {
            (StmtKind::Assign(x1, e1), StmtKind::Assign(x2, e2)) => x1 == x2 && e1 == e2,
            (StmtKind::If(g1, t1, e1), StmtKind::If(g2, t2, e2)) => {
                g1 == g2 && t1.structural_eq(t2) && e1.structural_eq(e2)
            }
            (StmtKind::While(g1, b1), StmtKind::While(g2, b2)) => {
                g1 == g2 && b1.structural_eq(b2)
            }
            (StmtKind::Block(s1), StmtKind::Block(s2)) => {
                s1.len() == s2.len() && s1.iter().zip(s2).all(|(a, b)| a.structural_eq(b))
            }
            (StmtKind::Skip, StmtKind::Skip) => true,
            (StmtKind::Eval(e1), StmtKind::Eval(e2)) => e1 == e2,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointInfo {
    pub name: String,
    pub pos: SourcePos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub root: Stmt,
    pub points: Vec<PointInfo>,
    /// `evalK` alias -> label, in source order.
    pub eval_aliases: Vec<(String, Label)>,
    pub exit: Label,
}

impl Program {
    /// Builds a program from a statement tree, assigning dense labels in
    /// source order plus a trailing exit point.
    pub fn from_root(mut root: Stmt) -> Program {
        let mut points = Vec::new();
        let mut eval_aliases = Vec::new();
        label_stmt(&mut root, &mut points, &mut eval_aliases);
        let exit = points.len();
        points.push(PointInfo {
            name: "exit".to_string(),
            pos: SourcePos::default(),
        });
        Program {
            root,
            points,
            eval_aliases,
            exit,
        }
    }

    pub fn label_name(&self, label: Label) -> &str {
        &self.points[label].name
    }

    /// Resolves `Lk`, `evalK`, or `exit` to a label.
    pub fn resolve_label(&self, name: &str) -> Option<Label> {
        if name == "exit" {
            return Some(self.exit);
        }
        if let Some(&(_, label)) = self.eval_aliases.iter().find(|(alias, _)| alias == name) {
            return Some(label);
        }
        self.points.iter().position(|p| p.name == name)
    }

    pub fn structural_eq(&self, other: &Program) -> bool {
        self.root.structural_eq(&other.root)
    }

    /// Every identifier read or written anywhere in the program.
    pub fn variables(&self) -> Vec<String> {
        let mut vars = std::collections::BTreeSet::new();
        collect_stmt_vars(&self.root, &mut vars);
        vars.into_iter().collect()
    }

    /// Checks that every string literal stays within the alphabet.
    pub fn check_literals(
        &self,
        alphabet: &crate::alphabet::Alphabet,
    ) -> Result<(), crate::automaton::AutomatonError> {
        check_stmt_literals(&self.root, alphabet)
    }
}

fn label_stmt(s: &mut Stmt, points: &mut Vec<PointInfo>, evals: &mut Vec<(String, Label)>) {
    s.pre = points.len();
    points.push(PointInfo {
        name: format!("L{}", points.len() + 1),
        pos: s.pos,
    });
    if let StmtKind::Eval(_) = s.kind {
        evals.push((format!("eval{}", evals.len() + 1), s.pre));
    }
    match &mut s.kind {
        StmtKind::If(_, t, e) => {
            label_stmt(t, points, evals);
            label_stmt(e, points, evals);
        }
        StmtKind::While(_, b) => label_stmt(b, points, evals),
        StmtKind::Block(ss) => {
            for s in ss {
                label_stmt(s, points, evals);
            }
        }
        _ => {}
    }
}

fn collect_stmt_vars(s: &Stmt, vars: &mut std::collections::BTreeSet<String>) {
    match &s.kind {
        StmtKind::Assign(x, e) => {
            vars.insert(x.clone());
            collect_exp_vars(e, vars);
        }
        StmtKind::If(g, t, e) => {
            collect_exp_vars(g, vars);
            collect_stmt_vars(t, vars);
            collect_stmt_vars(e, vars);
        }
        StmtKind::While(g, b) => {
            collect_exp_vars(g, vars);
            collect_stmt_vars(b, vars);
        }
        StmtKind::Block(ss) => ss.iter().for_each(|s| collect_stmt_vars(s, vars)),
        StmtKind::Skip => {}
        StmtKind::Eval(e) => collect_exp_vars(e, vars),
    }
}

fn collect_exp_vars(e: &Exp, vars: &mut std::collections::BTreeSet<String>) {
    match e {
        Exp::Var(x) => {
            vars.insert(x.clone());
        }
        Exp::Lit(_) => {}
        Exp::Binary(_, l, r) => {
            collect_exp_vars(l, vars);
            collect_exp_vars(r, vars);
        }
        Exp::Unary(_, e) => collect_exp_vars(e, vars),
        Exp::Substring(r, i, j) => {
            collect_exp_vars(r, vars);
            collect_exp_vars(i, vars);
            collect_exp_vars(j, vars);
        }
        Exp::CharAt(r, i) | Exp::IndexOf(r, i) => {
            collect_exp_vars(r, vars);
            collect_exp_vars(i, vars);
        }
        Exp::Length(r) => collect_exp_vars(r, vars),
        Exp::Assign(x, e) => {
            vars.insert(x.clone());
            collect_exp_vars(e, vars);
        }
    }
}

fn check_stmt_literals(
    s: &Stmt,
    alphabet: &crate::alphabet::Alphabet,
) -> Result<(), crate::automaton::AutomatonError> {
    match &s.kind {
        StmtKind::Assign(_, e) | StmtKind::Eval(e) => check_exp_literals(e, alphabet),
        StmtKind::If(g, t, e) => {
            check_exp_literals(g, alphabet)?;
            check_stmt_literals(t, alphabet)?;
            check_stmt_literals(e, alphabet)
        }
        StmtKind::While(g, b) => {
            check_exp_literals(g, alphabet)?;
            check_stmt_literals(b, alphabet)
        }
        StmtKind::Block(ss) => ss.iter().try_for_each(|s| check_stmt_literals(s, alphabet)),
        StmtKind::Skip => Ok(()),
    }
}

fn check_exp_literals(
    e: &Exp,
    alphabet: &crate::alphabet::Alphabet,
) -> Result<(), crate::automaton::AutomatonError> {
    match e {
        Exp::Lit(Literal::Str(s)) => alphabet.check_word(s),
        Exp::Var(_) | Exp::Lit(_) => Ok(()),
        Exp::Binary(_, l, r) => {
            check_exp_literals(l, alphabet)?;
            check_exp_literals(r, alphabet)
        }
        Exp::Unary(_, e) | Exp::Length(e) | Exp::Assign(_, e) => check_exp_literals(e, alphabet),
        Exp::Substring(r, i, j) => {
            check_exp_literals(r, alphabet)?;
            check_exp_literals(i, alphabet)?;
            check_exp_literals(j, alphabet)
        }
        Exp::CharAt(r, i) | Exp::IndexOf(r, i) => {
            check_exp_literals(r, alphabet)?;
            check_exp_literals(i, alphabet)
        }
    }
}

// ----------------------------------------------------------------------
// pretty printing

fn precedence(op: BinOp) -> u8 {
    match op {
        BinOp::Or => 1,
        BinOp::And => 2,
        BinOp::Eq => 3,
        BinOp::Lt | BinOp::Gt => 4,
        BinOp::Add | BinOp::Sub => 5,
        BinOp::Mul | BinOp::Div => 6,
    }
}

fn op_str(op: BinOp) -> &'static str {
    match op {
        BinOp::Add => "+",
        BinOp::Sub => "-",
        BinOp::Mul => "*",
        BinOp::Div => "/",
        BinOp::And => "&&",
        BinOp::Or => "||",
        BinOp::Lt => "<",
        BinOp::Gt => ">",
        BinOp::Eq => "==",
    }
}

fn write_exp(f: &mut fmt::Formatter<'_>, e: &Exp, min_prec: u8) -> fmt::Result {
    match e {
        Exp::Var(x) => write!(f, "{x}"),
        Exp::Lit(Literal::Int(v)) => write!(f, "{v}"),
        Exp::Lit(Literal::Str(s)) => {
            write!(f, "\"")?;
            for c in s.chars() {
                match c {
                    '"' => write!(f, "\\\"")?,
                    '\\' => write!(f, "\\\\")?,
                    _ => write!(f, "{c}")?,
                }
            }
            write!(f, "\"")
        }
        Exp::Lit(Literal::Bool(b)) => write!(f, "{b}"),
        Exp::Lit(Literal::NaN) => write!(f, "NaN"),
        Exp::Binary(op, l, r) => {
            let prec = precedence(*op);
            if prec < min_prec {
                write!(f, "(")?;
            }
            write_exp(f, l, prec)?;
            write!(f, " {} ", op_str(*op))?;
            write_exp(f, r, prec + 1)?;
            if prec < min_prec {
                write!(f, ")")?;
            }
            Ok(())
        }
        Exp::Unary(UnOp::Not, e) => {
            write!(f, "!")?;
            write_exp(f, e, 7)
        }
        Exp::Substring(r, i, j) => {
            write_exp(f, r, 8)?;
            write!(f, ".substring(")?;
            write_exp(f, i, 0)?;
            write!(f, ", ")?;
            write_exp(f, j, 0)?;
            write!(f, ")")
        }
        Exp::CharAt(r, i) => {
            write_exp(f, r, 8)?;
            write!(f, ".charAt(")?;
            write_exp(f, i, 0)?;
            write!(f, ")")
        }
        Exp::IndexOf(r, i) => {
            write_exp(f, r, 8)?;
            write!(f, ".indexOf(")?;
            write_exp(f, i, 0)?;
            write!(f, ")")
        }
        Exp::Length(r) => {
            write_exp(f, r, 8)?;
            write!(f, ".length")
        }
        Exp::Assign(x, e) => {
            write!(f, "({x} = ")?;
            write_exp(f, e, 0)?;
            write!(f, ")")
        }
    }
}

impl fmt::Display for Exp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_exp(f, self, 0)
    }
}

fn write_indent(f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
    for _ in 0..depth {
        write!(f, "  ")?;
    }
    Ok(())
}

fn write_block(f: &mut fmt::Formatter<'_>, s: &Stmt, depth: usize) -> fmt::Result {
    // always brace the bodies of if/while
    match &s.kind {
        StmtKind::Block(ss) => {
            writeln!(f, "{{")?;
            for s in ss {
                write_stmt(f, s, depth + 1)?;
            }
            write_indent(f, depth)?;
            write!(f, "}}")
        }
        _ => {
            writeln!(f, "{{")?;
            write_stmt(f, s, depth + 1)?;
            write_indent(f, depth)?;
            write!(f, "}}")
        }
    }
}

fn write_stmt(f: &mut fmt::Formatter<'_>, s: &Stmt, depth: usize) -> fmt::Result {
    write_indent(f, depth)?;
    match &s.kind {
        StmtKind::Assign(x, e) => writeln!(f, "{x} = {e};"),
        StmtKind::If(g, t, e) => {
            write!(f, "if ({g}) ")?;
            write_block(f, t, depth)?;
            write!(f, " else ")?;
            write_block(f, e, depth)?;
            writeln!(f)
        }
        StmtKind::While(g, b) => {
            write!(f, "while ({g}) ")?;
            write_block(f, b, depth)?;
            writeln!(f)
        }
        StmtKind::Block(ss) => {
            writeln!(f, "{{")?;
            for s in ss {
                write_stmt(f, s, depth + 1)?;
            }
            write_indent(f, depth)?;
            writeln!(f, "}}")
        }
        StmtKind::Skip => writeln!(f, ";"),
        StmtKind::Eval(e) => writeln!(f, "eval({e});"),
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // the top-level sequence is printed without braces
        match &self.root.kind {
            StmtKind::Block(ss) => {
                for s in ss {
                    write_stmt(f, s, 0)?;
                }
                Ok(())
            }
            _ => write_stmt(f, &self.root, 0),
        }
    }
}
