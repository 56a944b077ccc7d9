//! Removes assignments embedded in expressions.
//!
//! Guards and right-hand sides may contain `(x = e)` nodes (written
//! directly or produced by the `+=`/`++` sugar). Both operands of every
//! operator are always evaluated, left to right, so an embedded
//! assignment can be hoisted to an assignment statement executed just
//! before its owner; for a `while` guard the hoisted statements also
//! re-run at the end of each iteration. Assignments under `!`, `&&` or
//! `||` are rejected.
//!
//! `x++` uses the pre-increment convention: the value of the expression
//! is the incremented variable.

use super::ast::{Exp, Program, SourcePos, Stmt, StmtKind};
use super::FrontendError;

pub fn desugar(program: &Program) -> Result<Program, FrontendError> {
    let root = desugar_stmt(&program.root)?;
    let root = match root.len() {
        1 => root.into_iter().next().expect("one statement"),
        _ => Stmt::new(StmtKind::Block(root), SourcePos { line: 1, col: 1 }),
    };
    Ok(Program::from_root(root))
}

fn desugar_stmt(s: &Stmt) -> Result<Vec<Stmt>, FrontendError> {
    match &s.kind {
        StmtKind::Assign(x, e) => {
            let (mut pre, e) = extract(e, s.pos)?;
            pre.push(Stmt::new(StmtKind::Assign(x.clone(), e), s.pos));
            Ok(pre)
        }
        StmtKind::If(g, t, els) => {
            let (mut pre, g) = extract(g, s.pos)?;
            let t = block_of(desugar_stmt(t)?, t.pos);
            let els = block_of(desugar_stmt(els)?, els.pos);
            pre.push(Stmt::new(
                StmtKind::If(g, Box::new(t), Box::new(els)),
                s.pos,
            ));
            Ok(pre)
        }
        StmtKind::While(g, b) => {
            let (pre, g) = extract(g, s.pos)?;
            let mut body = flatten_single_block(desugar_stmt(b)?);
            // the guard's side effects re-run before each re-evaluation
            body.extend(pre.iter().cloned());
            let mut out = pre;
            out.push(Stmt::new(
                StmtKind::While(g, Box::new(block_of(body, b.pos))),
                s.pos,
            ));
            Ok(out)
        }
        StmtKind::Block(ss) => {
            let mut out = Vec::new();
            for s in ss {
                out.extend(desugar_stmt(s)?);
            }
            Ok(vec![Stmt::new(StmtKind::Block(out), s.pos)])
        }
        StmtKind::Skip => Ok(vec![s.clone()]),
        StmtKind::Eval(e) => {
            let (mut pre, e) = extract(e, s.pos)?;
            pre.push(Stmt::new(StmtKind::Eval(e), s.pos));
            Ok(pre)
        }
    }
}

fn block_of(mut stmts: Vec<Stmt>, pos: SourcePos) -> Stmt {
    if stmts.len() == 1 && matches!(stmts[0].kind, StmtKind::Block(_)) {
        stmts.remove(0)
    } else {
        Stmt::new(StmtKind::Block(stmts), pos)
    }
}

fn flatten_single_block(mut stmts: Vec<Stmt>) -> Vec<Stmt> {
    if stmts.len() == 1 && matches!(stmts[0].kind, StmtKind::Block(_)) {
        if let StmtKind::Block(inner) = stmts.remove(0).kind {
            return inner;
        }
        unreachable!("just matched a block");
    }
    stmts
}

/// Rewrites an expression into assignment-free form, returning the
/// hoisted assignment statements in evaluation order.
fn extract(e: &Exp, pos: SourcePos) -> Result<(Vec<Stmt>, Exp), FrontendError> {
    let mut pre = Vec::new();
    let e = walk(e, pos, &mut pre)?;
    Ok((pre, e))
}

fn walk(e: &Exp, pos: SourcePos, pre: &mut Vec<Stmt>) -> Result<Exp, FrontendError> {
    match e {
        Exp::Var(_) | Exp::Lit(_) => Ok(e.clone()),
        Exp::Assign(x, rhs) => {
            let rhs = walk(rhs, pos, pre)?;
            pre.push(Stmt::new(StmtKind::Assign(x.clone(), rhs), pos));
            Ok(Exp::Var(x.clone()))
        }
        Exp::Binary(op, l, r) => {
            if matches!(op, super::ast::BinOp::And | super::ast::BinOp::Or)
                && (contains_assign(l) || contains_assign(r))
            {
                return Err(FrontendError::CannotHoist {
                    line: pos.line,
                    col: pos.col,
                    context: "&&/||",
                });
            }
            let l = walk(l, pos, pre)?;
            let r = walk(r, pos, pre)?;
            Ok(Exp::Binary(*op, Box::new(l), Box::new(r)))
        }
        Exp::Unary(op, inner) => {
            if contains_assign(inner) {
                return Err(FrontendError::CannotHoist {
                    line: pos.line,
                    col: pos.col,
                    context: "!",
                });
            }
            let inner = walk(inner, pos, pre)?;
            Ok(Exp::Unary(*op, Box::new(inner)))
        }
        Exp::Substring(r, i, j) => {
            let r = walk(r, pos, pre)?;
            let i = walk(i, pos, pre)?;
            let j = walk(j, pos, pre)?;
            Ok(Exp::Substring(Box::new(r), Box::new(i), Box::new(j)))
        }
        Exp::CharAt(r, i) => {
            let r = walk(r, pos, pre)?;
            let i = walk(i, pos, pre)?;
            Ok(Exp::CharAt(Box::new(r), Box::new(i)))
        }
        Exp::IndexOf(r, i) => {
            let r = walk(r, pos, pre)?;
            let i = walk(i, pos, pre)?;
            Ok(Exp::IndexOf(Box::new(r), Box::new(i)))
        }
        Exp::Length(r) => {
            let r = walk(r, pos, pre)?;
            Ok(Exp::Length(Box::new(r)))
        }
    }
}

fn contains_assign(e: &Exp) -> bool {
    match e {
        Exp::Assign(..) => true,
        Exp::Var(_) | Exp::Lit(_) => false,
        Exp::Binary(_, l, r) => contains_assign(l) || contains_assign(r),
        Exp::Unary(_, e) | Exp::Length(e) => contains_assign(e),
        Exp::Substring(r, i, j) => {
            contains_assign(r) || contains_assign(i) || contains_assign(j)
        }
        Exp::CharAt(r, i) | Exp::IndexOf(r, i) => contains_assign(r) || contains_assign(i),
    }
}

/// True when no `Exp::Assign` node remains anywhere in the program.
pub fn is_assignment_free(p: &Program) -> bool {
    fn stmt_ok(s: &Stmt) -> bool {
        match &s.kind {
            StmtKind::Assign(_, e) | StmtKind::Eval(e) => !contains_assign(e),
            StmtKind::If(g, t, e) => !contains_assign(g) && stmt_ok(t) && stmt_ok(e),
            StmtKind::While(g, b) => !contains_assign(g) && stmt_ok(b),
            StmtKind::Block(ss) => ss.iter().all(stmt_ok),
            StmtKind::Skip => true,
        }
    }
    stmt_ok(&p.root)
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    #[test]
    fn plain_programs_are_unchanged() {
        let p = parse("x = 1; while (x < 3) { x = x + 1; }").unwrap();
        let d = desugar(&p).unwrap();
        assert!(p.structural_eq(&d));
    }

    #[test]
    fn compound_assignment_statement() {
        let p = desugar(&parse("str += \"a\";").unwrap()).unwrap();
        let q = parse("str = str + \"a\";").unwrap();
        assert!(p.structural_eq(&q));
    }

    #[test]
    fn guard_assignments_rerun_each_iteration() {
        let p = desugar(&parse("while ((i = i + 2) < 9) { x = 1; }").unwrap()).unwrap();
        let q = parse("i = i + 2; while (i < 9) { x = 1; i = i + 2; }").unwrap();
        assert!(p.structural_eq(&q), "got:\n{p}");
    }

    #[test]
    fn increment_guard_uses_preincrement() {
        let p = desugar(&parse("while (x++ < 9) { ; }").unwrap()).unwrap();
        let q = parse("x = x + 1; while (x < 9) { ; x = x + 1; }").unwrap();
        assert!(p.structural_eq(&q), "got:\n{p}");
    }

    #[test]
    fn assignment_under_logic_is_rejected() {
        let err = desugar(&parse("while (x++ < 9 && y < 2) { ; }").unwrap()).unwrap_err();
        assert!(matches!(err, FrontendError::CannotHoist { .. }));
    }

    #[test]
    fn desugared_programs_are_assignment_free() {
        let p = desugar(
            &parse("x = (y = 2) + 1; if ((z = x) < 3) { ; } else { ; }").unwrap(),
        )
        .unwrap();
        assert!(is_assignment_free(&p));
        let q = parse("y = 2; x = y + 1; z = x; if (z < 3) { ; } else { ; }").unwrap();
        assert!(p.structural_eq(&q), "got:\n{p}");
    }
}
