use num::BigInt;

use super::diagnostic::{Code, Diagnostic, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(BigInt),
    Slash,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Semicolon,
    Equals,
    Arrow,
    Plus,
    Minus,
    Star,
    Caret,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::Int(n) => format!("integer `{n}`"),
            TokenKind::Eof => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            TokenKind::Slash => "/",
            TokenKind::LBracket => "[",
            TokenKind::RBracket => "]",
            TokenKind::LBrace => "{",
            TokenKind::RBrace => "}",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::Comma => ",",
            TokenKind::Semicolon => ";",
            TokenKind::Equals => "=",
            TokenKind::Arrow => "=>",
            TokenKind::Plus => "+",
            TokenKind::Minus => "-",
            TokenKind::Star => "*",
            TokenKind::Caret => "^",
            TokenKind::Ident(_) | TokenKind::Int(_) | TokenKind::Eof => "",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

/// Splits `source` into tokens. Unknown characters are reported and
/// skipped; the token list always ends with `Eof`.
pub fn lex(source: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    let mut chars = source.char_indices().peekable();
    let (mut line, mut column) = (1usize, 1usize);

    while let Some(&(start, ch)) = chars.peek() {
        let span_at = |end: usize| Span {
            start,
            end,
            line,
            column,
        };
        if ch == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if ch.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if ch == '#' {
            while let Some(&(_, c)) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            let mut end = start;
            let mut width = 0;
            while let Some(&(i, c)) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    end = i + c.len_utf8();
                    width += 1;
                    chars.next();
                } else {
                    break;
                }
            }
            tokens.push(Token {
                kind: TokenKind::Ident(source[start..end].to_string()),
                span: span_at(end),
            });
            column += width;
            continue;
        }
        if ch.is_ascii_digit() {
            let mut end = start;
            let mut width = 0;
            while let Some(&(i, c)) = chars.peek() {
                if c.is_ascii_digit() {
                    end = i + 1;
                    width += 1;
                    chars.next();
                } else {
                    break;
                }
            }
            let value: BigInt = source[start..end].parse().expect("decimal digits");
            tokens.push(Token {
                kind: TokenKind::Int(value),
                span: span_at(end),
            });
            column += width;
            continue;
        }
        chars.next();
        let kind = match ch {
            '/' => Some(TokenKind::Slash),
            '[' => Some(TokenKind::LBracket),
            ']' => Some(TokenKind::RBracket),
            '{' => Some(TokenKind::LBrace),
            '}' => Some(TokenKind::RBrace),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            ',' => Some(TokenKind::Comma),
            ';' => Some(TokenKind::Semicolon),
            '+' => Some(TokenKind::Plus),
            '-' => Some(TokenKind::Minus),
            '*' => Some(TokenKind::Star),
            '^' => Some(TokenKind::Caret),
            '=' => {
                if matches!(chars.peek(), Some(&(_, '>'))) {
                    chars.next();
                    tokens.push(Token {
                        kind: TokenKind::Arrow,
                        span: span_at(start + 2),
                    });
                    column += 2;
                    continue;
                }
                Some(TokenKind::Equals)
            }
            _ => None,
        };
        let span = span_at(start + ch.len_utf8());
        match kind {
            Some(kind) => tokens.push(Token { kind, span }),
            None => diags.push(Diagnostic::error(
                Code::Lexical,
                span,
                format!("unexpected character `{}`", ch.escape_debug()),
            )),
        }
        column += 1;
    }
    let end = source.len();
    tokens.push(Token {
        kind: TokenKind::Eof,
        span: Span {
            start: end,
            end,
            line,
            column,
        },
    });
    (tokens, diags)
}
