//! Tokenizer. Tracks line/column for error reporting.

use super::FrontendError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    True,
    False,
    NaN,
    If,
    Else,
    While,
    Eval,
    Plus,
    Minus,
    Star,
    Slash,
    AndAnd,
    OrOr,
    Bang,
    Lt,
    Gt,
    EqEq,
    Assign,
    PlusAssign,
    PlusPlus,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Semi,
    Comma,
    Dot,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: u32,
    pub col: u32,
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, FrontendError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = source.chars().collect();
    let mut i = 0;
    let mut line = 1u32;
    let mut col = 1u32;
    macro_rules! push {
        ($tok:expr, $l:expr, $c:expr) => {
            tokens.push(Token {
                tok: $tok,
                line: $l,
                col: $c,
            })
        };
    }
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let advance = |i: &mut usize, line: &mut u32, col: &mut u32| {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => advance(&mut i, &mut line, &mut col),
            '/' if i + 1 < chars.len() && chars[i + 1] == '/' => {
                while i < chars.len() && chars[i] != '\n' {
                    advance(&mut i, &mut line, &mut col);
                }
            }
            '"' => {
                advance(&mut i, &mut line, &mut col);
                let mut s = String::new();
                loop {
                    if i >= chars.len() || chars[i] == '\n' {
                        return Err(FrontendError::syntax(tl, tc, "unterminated string literal"));
                    }
                    match chars[i] {
                        '"' => {
                            advance(&mut i, &mut line, &mut col);
                            break;
                        }
                        '\\' => {
                            advance(&mut i, &mut line, &mut col);
                            if i >= chars.len() {
                                return Err(FrontendError::syntax(
                                    tl,
                                    tc,
                                    "unterminated string literal",
                                ));
                            }
                            match chars[i] {
                                '"' => s.push('"'),
                                '\\' => s.push('\\'),
                                other => {
                                    return Err(FrontendError::syntax(
                                        line,
                                        col,
                                        format!("unknown escape '\\{other}'"),
                                    ))
                                }
                            }
                            advance(&mut i, &mut line, &mut col);
                        }
                        other => {
                            s.push(other);
                            advance(&mut i, &mut line, &mut col);
                        }
                    }
                }
                push!(Tok::Str(s), tl, tc);
            }
            '0'..='9' => {
                let mut text = String::new();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    text.push(chars[i]);
                    advance(&mut i, &mut line, &mut col);
                }
                let value: i64 = text
                    .parse()
                    .map_err(|_| FrontendError::syntax(tl, tc, "integer literal out of range"))?;
                push!(Tok::Int(value), tl, tc);
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut text = String::new();
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    text.push(chars[i]);
                    advance(&mut i, &mut line, &mut col);
                }
                let tok = match text.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "NaN" => Tok::NaN,
                    "if" => Tok::If,
                    "else" => Tok::Else,
                    "while" => Tok::While,
                    "eval" => Tok::Eval,
                    _ => Tok::Ident(text),
                };
                push!(tok, tl, tc);
            }
            _ => {
                let two: String = chars[i..chars.len().min(i + 2)].iter().collect();
                let (tok, len) = match two.as_str() {
                    "&&" => (Tok::AndAnd, 2),
                    "||" => (Tok::OrOr, 2),
                    "==" => (Tok::EqEq, 2),
                    "+=" => (Tok::PlusAssign, 2),
                    "++" => (Tok::PlusPlus, 2),
                    _ => match c {
                        '+' => (Tok::Plus, 1),
                        '-' => (Tok::Minus, 1),
                        '*' => (Tok::Star, 1),
                        '/' => (Tok::Slash, 1),
                        '!' => (Tok::Bang, 1),
                        '<' => (Tok::Lt, 1),
                        '>' => (Tok::Gt, 1),
                        '=' => (Tok::Assign, 1),
                        '(' => (Tok::LParen, 1),
                        ')' => (Tok::RParen, 1),
                        '{' => (Tok::LBrace, 1),
                        '}' => (Tok::RBrace, 1),
                        ';' => (Tok::Semi, 1),
                        ',' => (Tok::Comma, 1),
                        '.' => (Tok::Dot, 1),
                        other => {
                            return Err(FrontendError::syntax(
                                tl,
                                tc,
                                format!("unexpected character '{other}'"),
                            ))
                        }
                    },
                };
                for _ in 0..len {
                    advance(&mut i, &mut line, &mut col);
                }
                push!(tok, tl, tc);
            }
        }
    }
    Ok(tokens)
}
