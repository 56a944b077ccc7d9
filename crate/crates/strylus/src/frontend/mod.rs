//! Frontend for the analysed language: lexer, recursive-descent parser,
//! sugar removal, and the labeled syntax tree.

pub mod ast;
mod desugar;
mod lexer;
mod parser;

pub use ast::{BinOp, Exp, Label, Literal, Program, SourcePos, Stmt, StmtKind, UnOp};
pub use desugar::{desugar, is_assignment_free};
pub use parser::parse;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrontendError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: u32,
        col: u32,
        message: String,
    },
    #[error("{line}:{col}: assignments cannot be hoisted out of `{context}`")]
    CannotHoist {
        line: u32,
        col: u32,
        context: &'static str,
    },
}

impl FrontendError {
    pub(crate) fn syntax(line: u32, col: u32, message: impl Into<String>) -> FrontendError {
        FrontendError::Syntax {
            line,
            col,
            message: message.into(),
        }
    }
}
