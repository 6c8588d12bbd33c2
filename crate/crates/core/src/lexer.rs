//! Tokenizer shared by the expression and formula grammars.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// Unsigned decimal integer, kept as text.
    Int(String),
    Plus,
    Minus,
    Star,
    Slash,
    Comma,
    Dot,
    Colon,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Eq,
    Neq,
    Le,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    End,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Int(s) => format!("integer {s}"),
            Tok::End => "end of input".into(),
            other => format!("'{}'", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Colon => ":",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Eq => "=",
            Tok::Neq => "!=",
            Tok::Le => "<=",
            Tok::Tilde => "~",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Arrow => "->",
            _ => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub fn tokenize(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            Tok::Int(chars[start..i].iter().collect())
        } else {
            let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            let (tok, width) = match two.as_str() {
                "->" => (Tok::Arrow, 2),
                "<=" => (Tok::Le, 2),
                "!=" => (Tok::Neq, 2),
                _ => {
                    let t = match c {
                        '+' => Tok::Plus,
                        '-' => Tok::Minus,
                        '*' => Tok::Star,
                        '/' => Tok::Slash,
                        ',' => Tok::Comma,
                        '.' => Tok::Dot,
                        ':' => Tok::Colon,
                        '[' => Tok::LBracket,
                        ']' => Tok::RBracket,
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        '=' => Tok::Eq,
                        '~' => Tok::Tilde,
                        '&' => Tok::Amp,
                        '|' => Tok::Pipe,
                        other => {
                            return Err(Error::Syntax {
                                message: format!("unexpected character {other:?}"),
                                line: l0,
                                column: c0,
                            })
                        }
                    };
                    (t, 1)
                }
            };
            i += width;
            tok
        };
        col += i - start;
        out.push(Spanned { tok, line: l0, column: c0 });
    }
    out.push(Spanned { tok: Tok::End, line, column: col });
    Ok(out)
}

/// Cursor over a token stream with position-carrying errors.
pub(crate) struct Cursor {
    toks: Vec<Spanned>,
    pub(crate) pos: usize,
}

impl Cursor {
    pub(crate) fn new(text: &str) -> Result<Self> {
        Ok(Cursor { toks: tokenize(text)?, pos: 0 })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub(crate) fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> Error {
        let s = &self.toks[self.pos];
        Error::Syntax { message: message.into(), line: s.line, column: s.column }
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected {}, found {}", tok.describe(), self.peek().describe())))
        }
    }

    pub(crate) fn expect_end(&self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.error(format!("unexpected {}", self.peek().describe())))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions() {
        let toks = tokenize("[a,\n  b] -> x'").unwrap();
        let b = toks.iter().find(|t| t.tok == Tok::Ident("b".into())).unwrap();
        assert_eq!((b.line, b.column), (2, 3));
        assert!(toks.iter().any(|t| t.tok == Tok::Arrow));
        assert!(toks.iter().any(|t| t.tok == Tok::Ident("x'".into())));
        assert!(matches!(tokenize("a # b"), Err(Error::Syntax { column: 3, .. })));
    }
}
