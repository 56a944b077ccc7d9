//! Recursive-descent parser.
//!
//! Operator precedence, loosest first: `||`, `&&`, `==`, `<`/`>`,
//! `+`/`-`, `*`/`/`, `!`, method postfix. Compound assignment sugar is
//! rewritten while parsing: `x += e` becomes the assignment `x = x + e`
//! with `e` parsed at additive level (so `i += 2 < n` reads as
//! `(i = i + 2) < n`), and `x++` becomes `x = x + 1`. Assignments may be
//! embedded in expressions either through that sugar or parenthesized as
//! `(x = e)`; desugaring later hoists them out.

use super::ast::{BinOp, Exp, Literal, Program, SourcePos, Stmt, StmtKind, UnOp};
use super::lexer::{tokenize, Tok, Token};
use super::FrontendError;

pub fn parse(source: &str) -> Result<Program, FrontendError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser { tokens, at: 0 };
    let mut stmts = Vec::new();
    while !parser.at_end() {
        stmts.push(parser.stmt()?);
    }
    let root = Stmt::new(StmtKind::Block(stmts), SourcePos { line: 1, col: 1 });
    Ok(Program::from_root(root))
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

impl Parser {
    fn at_end(&self) -> bool {
        self.at >= self.tokens.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.at).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.tokens.get(self.at + 1).map(|t| &t.tok)
    }

    fn pos(&self) -> SourcePos {
        match self.tokens.get(self.at).or_else(|| self.tokens.last()) {
            Some(t) => SourcePos {
                line: t.line,
                col: t.col,
            },
            None => SourcePos { line: 1, col: 1 },
        }
    }

    fn error(&self, message: impl Into<String>) -> FrontendError {
        let p = self.pos();
        FrontendError::syntax(p.line, p.col, message)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.at).map(|t| t.tok.clone());
        self.at += 1;
        t
    }

    fn eat(&mut self, expected: &Tok, what: &str) -> Result<(), FrontendError> {
        if self.peek() == Some(expected) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    // ---------------- statements ----------------

    fn stmt(&mut self) -> Result<Stmt, FrontendError> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Semi) => {
                self.at += 1;
                Ok(Stmt::new(StmtKind::Skip, pos))
            }
            Some(Tok::LBrace) => self.block(),
            Some(Tok::If) => {
                self.at += 1;
                self.eat(&Tok::LParen, "'(' after if")?;
                let guard = self.expr()?;
                self.eat(&Tok::RParen, "')' after condition")?;
                let then = self.block()?;
                self.eat(&Tok::Else, "'else'")?;
                let els = self.block()?;
                Ok(Stmt::new(
                    StmtKind::If(guard, Box::new(then), Box::new(els)),
                    pos,
                ))
            }
            Some(Tok::While) => {
                self.at += 1;
                self.eat(&Tok::LParen, "'(' after while")?;
                let guard = self.expr()?;
                self.eat(&Tok::RParen, "')' after condition")?;
                let body = self.block()?;
                Ok(Stmt::new(StmtKind::While(guard, Box::new(body)), pos))
            }
            Some(Tok::Eval) => {
                self.at += 1;
                self.eat(&Tok::LParen, "'(' after eval")?;
                let arg = self.expr()?;
                self.eat(&Tok::RParen, "')'")?;
                self.eat(&Tok::Semi, "';'")?;
                Ok(Stmt::new(StmtKind::Eval(arg), pos))
            }
            Some(Tok::Ident(_)) => {
                let Some(Tok::Ident(name)) = self.bump() else {
                    unreachable!()
                };
                match self.peek() {
                    Some(Tok::Assign) => {
                        self.at += 1;
                        let rhs = self.expr()?;
                        self.eat(&Tok::Semi, "';'")?;
                        Ok(Stmt::new(StmtKind::Assign(name, rhs), pos))
                    }
                    Some(Tok::PlusAssign) => {
                        self.at += 1;
                        let rhs = self.additive()?;
                        self.eat(&Tok::Semi, "';'")?;
                        let sum = Exp::Binary(
                            BinOp::Add,
                            Box::new(Exp::Var(name.clone())),
                            Box::new(rhs),
                        );
                        Ok(Stmt::new(StmtKind::Assign(name, sum), pos))
                    }
                    Some(Tok::PlusPlus) => {
                        self.at += 1;
                        self.eat(&Tok::Semi, "';'")?;
                        let sum = Exp::Binary(
                            BinOp::Add,
                            Box::new(Exp::Var(name.clone())),
                            Box::new(Exp::Lit(Literal::Int(1))),
                        );
                        Ok(Stmt::new(StmtKind::Assign(name, sum), pos))
                    }
                    _ => Err(self.error("expected '=' in assignment")),
                }
            }
            Some(_) => Err(self.error("expected a statement")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn block(&mut self) -> Result<Stmt, FrontendError> {
        let pos = self.pos();
        self.eat(&Tok::LBrace, "'{'")?;
        let mut stmts = Vec::new();
        while self.peek() != Some(&Tok::RBrace) {
            if self.at_end() {
                return Err(self.error("unclosed block"));
            }
            stmts.push(self.stmt()?);
        }
        self.at += 1;
        Ok(Stmt::new(StmtKind::Block(stmts), pos))
    }

    // ---------------- expressions ----------------

    fn expr(&mut self) -> Result<Exp, FrontendError> {
        self.or_expr()
    }

    fn or_expr(&mut self) -> Result<Exp, FrontendError> {
        let mut lhs = self.and_expr()?;
        while self.peek() == Some(&Tok::OrOr) {
            self.at += 1;
            let rhs = self.and_expr()?;
            lhs = Exp::Binary(BinOp::Or, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Exp, FrontendError> {
        let mut lhs = self.eq_expr()?;
        while self.peek() == Some(&Tok::AndAnd) {
            self.at += 1;
            let rhs = self.eq_expr()?;
            lhs = Exp::Binary(BinOp::And, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn eq_expr(&mut self) -> Result<Exp, FrontendError> {
        let mut lhs = self.cmp_expr()?;
        while self.peek() == Some(&Tok::EqEq) {
            self.at += 1;
            let rhs = self.cmp_expr()?;
            lhs = Exp::Binary(BinOp::Eq, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn cmp_expr(&mut self) -> Result<Exp, FrontendError> {
        let mut lhs = self.additive()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Lt) => BinOp::Lt,
                Some(Tok::Gt) => BinOp::Gt,
                _ => break,
            };
            self.at += 1;
            let rhs = self.additive()?;
            lhs = Exp::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn additive(&mut self) -> Result<Exp, FrontendError> {
        let mut lhs = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => break,
            };
            self.at += 1;
            let rhs = self.multiplicative()?;
            lhs = Exp::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn multiplicative(&mut self) -> Result<Exp, FrontendError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                _ => break,
            };
            self.at += 1;
            let rhs = self.unary()?;
            lhs = Exp::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Exp, FrontendError> {
        if self.peek() == Some(&Tok::Bang) {
            self.at += 1;
            let inner = self.unary()?;
            return Ok(Exp::Unary(UnOp::Not, Box::new(inner)));
        }
        self.postfix()
    }

    fn postfix(&mut self) -> Result<Exp, FrontendError> {
        let mut exp = self.primary()?;
        while self.peek() == Some(&Tok::Dot) {
            self.at += 1;
            let Some(Tok::Ident(method)) = self.bump() else {
                return Err(self.error("expected a method name after '.'"));
            };
            exp = match method.as_str() {
                "length" => Exp::Length(Box::new(exp)),
                "substring" => {
                    self.eat(&Tok::LParen, "'('")?;
                    let i = self.expr()?;
                    self.eat(&Tok::Comma, "','")?;
                    let j = self.expr()?;
                    self.eat(&Tok::RParen, "')'")?;
                    Exp::Substring(Box::new(exp), Box::new(i), Box::new(j))
                }
                "charAt" => {
                    self.eat(&Tok::LParen, "'('")?;
                    let i = self.expr()?;
                    self.eat(&Tok::RParen, "')'")?;
                    Exp::CharAt(Box::new(exp), Box::new(i))
                }
                "indexOf" => {
                    self.eat(&Tok::LParen, "'('")?;
                    let i = self.expr()?;
                    self.eat(&Tok::RParen, "')'")?;
                    Exp::IndexOf(Box::new(exp), Box::new(i))
                }
                other => return Err(self.error(format!("unknown method '{other}'"))),
            };
        }
        Ok(exp)
    }

    fn primary(&mut self) -> Result<Exp, FrontendError> {
        match self.peek() {
            Some(Tok::Int(_)) => {
                let Some(Tok::Int(v)) = self.bump() else {
                    unreachable!()
                };
                Ok(Exp::Lit(Literal::Int(v)))
            }
            Some(Tok::Str(_)) => {
                let Some(Tok::Str(s)) = self.bump() else {
                    unreachable!()
                };
                Ok(Exp::Lit(Literal::Str(s)))
            }
            Some(Tok::True) => {
                self.at += 1;
                Ok(Exp::Lit(Literal::Bool(true)))
            }
            Some(Tok::False) => {
                self.at += 1;
                Ok(Exp::Lit(Literal::Bool(false)))
            }
            Some(Tok::NaN) => {
                self.at += 1;
                Ok(Exp::Lit(Literal::NaN))
            }
            Some(Tok::Ident(_)) => {
                let Some(Tok::Ident(name)) = self.bump() else {
                    unreachable!()
                };
                match self.peek() {
                    Some(Tok::PlusAssign) => {
                        self.at += 1;
                        let rhs = self.additive()?;
                        let sum = Exp::Binary(
                            BinOp::Add,
                            Box::new(Exp::Var(name.clone())),
                            Box::new(rhs),
                        );
                        Ok(Exp::Assign(name, Box::new(sum)))
                    }
                    Some(Tok::PlusPlus) => {
                        self.at += 1;
                        let sum = Exp::Binary(
                            BinOp::Add,
                            Box::new(Exp::Var(name.clone())),
                            Box::new(Exp::Lit(Literal::Int(1))),
                        );
                        Ok(Exp::Assign(name, Box::new(sum)))
                    }
                    _ => Ok(Exp::Var(name)),
                }
            }
            Some(Tok::LParen) => {
                self.at += 1;
                // a parenthesized assignment: (x = e)
                let exp = if matches!(self.peek(), Some(Tok::Ident(_)))
                    && self.peek2() == Some(&Tok::Assign)
                {
                    let Some(Tok::Ident(name)) = self.bump() else {
                        unreachable!()
                    };
                    self.at += 1; // '='
                    let rhs = self.expr()?;
                    Exp::Assign(name, Box::new(rhs))
                } else {
                    self.expr()?
                };
                self.eat(&Tok::RParen, "')'")?;
                Ok(exp)
            }
            _ => Err(self.error("expected an expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_one(src: &str) -> Stmt {
        let p = parse(src).unwrap();
        match p.root.kind {
            StmtKind::Block(mut ss) => ss.remove(0),
            _ => unreachable!(),
        }
    }

    #[test]
    fn parses_string_assignment() {
        let s = parse_one("x = \"42\";");
        assert_eq!(
            s.kind,
            StmtKind::Assign("x".into(), Exp::Lit(Literal::Str("42".into())))
        );
    }

    #[test]
    fn parses_branching_example() {
        let s = parse_one("if (y < 5) {x = \"42\";} else {x = true;}");
        let StmtKind::If(guard, then, els) = s.kind else {
            panic!("expected if");
        };
        assert_eq!(
            guard,
            Exp::Binary(
                BinOp::Lt,
                Box::new(Exp::Var("y".into())),
                Box::new(Exp::Lit(Literal::Int(5)))
            )
        );
        assert!(matches!(then.kind, StmtKind::Block(ref ss) if ss.len() == 1));
        assert!(matches!(els.kind, StmtKind::Block(ref ss) if ss.len() == 1));
    }

    #[test]
    fn parses_append_loop() {
        let p = parse("str = \"\"; while (x < 100) { str = str + \"a\"; }").unwrap();
        let StmtKind::Block(ss) = &p.root.kind else {
            panic!()
        };
        assert_eq!(ss.len(), 2);
        assert!(matches!(ss[1].kind, StmtKind::While(..)));
    }

    #[test]
    fn compound_assignment_binds_the_arithmetic_operand() {
        // i += 2 < n  parses as  (i = i + 2) < n
        let p = parse("while (i += 2 < v.length) { ; }").unwrap();
        let StmtKind::Block(ss) = &p.root.kind else {
            panic!()
        };
        let StmtKind::While(guard, _) = &ss[0].kind else {
            panic!("expected while")
        };
        let Exp::Binary(BinOp::Lt, lhs, _) = guard else {
            panic!("expected comparison, got {guard:?}")
        };
        assert!(matches!(**lhs, Exp::Assign(ref x, _) if x == "i"));
    }

    #[test]
    fn parenthesized_assignment_in_guard() {
        let p = parse("while ((i = i + 2) < v.length) { ; }").unwrap();
        let StmtKind::Block(ss) = &p.root.kind else {
            panic!()
        };
        assert!(matches!(ss[0].kind, StmtKind::While(..)));
    }

    #[test]
    fn operator_precedence() {
        let s = parse_one("x = 1 + 2 * 3 < 4 == true && false || true;");
        let StmtKind::Assign(_, e) = s.kind else { panic!() };
        // || at the top
        assert!(matches!(e, Exp::Binary(BinOp::Or, _, _)));
        assert_eq!(e.to_string(), "1 + 2 * 3 < 4 == true && false || true");
    }

    #[test]
    fn method_calls_bind_tighter_than_operators() {
        let s = parse_one("x = s.substring(1, 3).length + 1;");
        let StmtKind::Assign(_, e) = s.kind else { panic!() };
        let Exp::Binary(BinOp::Add, lhs, _) = e else {
            panic!()
        };
        assert!(matches!(*lhs, Exp::Length(_)));
    }

    #[test]
    fn error_positions_are_reported() {
        let err = parse("x = ;").unwrap_err();
        match err {
            FrontendError::Syntax { line, col, .. } => {
                assert_eq!(line, 1);
                assert_eq!(col, 5);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unknown_method_is_rejected() {
        assert!(parse("x = s.reverse();").is_err());
    }

    #[test]
    fn if_requires_else() {
        assert!(parse("if (x) { ; }").is_err());
    }

    #[test]
    fn labels_are_dense_and_unique() {
        let p = parse("x = 1; { y = 2; ; } while (x) { eval(x); }").unwrap();
        let mut seen = std::collections::BTreeSet::new();
        fn walk(s: &Stmt, seen: &mut std::collections::BTreeSet<usize>) {
            assert!(seen.insert(s.pre), "duplicate label {}", s.pre);
            match &s.kind {
                StmtKind::If(_, t, e) => {
                    walk(t, seen);
                    walk(e, seen);
                }
                StmtKind::While(_, b) => walk(b, seen),
                StmtKind::Block(ss) => ss.iter().for_each(|s| walk(s, seen)),
                _ => {}
            }
        }
        walk(&p.root, &mut seen);
        // labels cover 0..n densely, exit is the extra last point
        assert_eq!(seen.len(), p.points.len() - 1);
        assert_eq!(*seen.iter().next_back().unwrap(), p.points.len() - 2);
        assert_eq!(p.resolve_label("exit"), Some(p.exit));
        assert_eq!(p.eval_aliases.len(), 1);
        assert!(p.resolve_label("eval1").is_some());
    }
}
