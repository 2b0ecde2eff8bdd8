//! Tokenizer and recursive-descent formula parser.
//!
//! Grammar, loosest to tightest: `<->`, `->` (right-associative), `|`,
//! `&`, `!`. The token stream also carries the action-language keywords
//! and `;`/parens so the action parser in [`crate::actions`] can reuse it.

use super::{Formula, Signature};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    True,
    False,
    Do,
    If,
    Then,
    Else,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Semi,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Tok::Ident(name) => return write!(f, "identifier {name:?}"),
            Tok::True => "true",
            Tok::False => "false",
            Tok::Do => "do",
            Tok::If => "if",
            Tok::Then => "then",
            Tok::Else => "else",
            Tok::Not => "!",
            Tok::And => "&",
            Tok::Or => "|",
            Tok::Implies => "->",
            Tok::Iff => "<->",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Semi => ";",
        };
        write!(f, "`{s}`")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {ch:?} at byte {pos}")]
    BadChar { pos: usize, ch: char },
    #[error("unexpected end of input (expected {expected})")]
    UnexpectedEnd { expected: String },
    #[error("unexpected {found} at byte {pos} (expected {expected})")]
    Unexpected {
        pos: usize,
        found: String,
        expected: String,
    },
    #[error("unknown proposition {name:?} at byte {pos}")]
    UnknownProp { pos: usize, name: String },
    #[error("trailing input at byte {pos}")]
    Trailing { pos: usize },
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            '!' => {
                toks.push((Tok::Not, i));
                i += 1;
            }
            '&' => {
                toks.push((Tok::And, i));
                i += 1;
            }
            '|' => {
                toks.push((Tok::Or, i));
                i += 1;
            }
            ';' => {
                toks.push((Tok::Semi, i));
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((Tok::Implies, i));
                    i += 2;
                } else {
                    return Err(ParseError::BadChar { pos: i, ch: '-' });
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    toks.push((Tok::Iff, i));
                    i += 3;
                } else {
                    return Err(ParseError::BadChar { pos: i, ch: '<' });
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "do" => Tok::Do,
                    "if" => Tok::If,
                    "then" => Tok::Then,
                    "else" => Tok::Else,
                    _ => Tok::Ident(word.to_string()),
                };
                toks.push((tok, start));
            }
            other => return Err(ParseError::BadChar { pos: i, ch: other }),
        }
    }
    Ok(toks)
}

pub(crate) struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    pub(crate) sig: &'a Signature,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(text: &str, sig: &'a Signature) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            end: text.len(),
            sig,
        })
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    pub(crate) fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    pub(crate) fn advance(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(ParseError::Unexpected {
                pos: self.here(),
                found: t.to_string(),
                expected: want.to_string(),
            }),
            None => Err(ParseError::UnexpectedEnd {
                expected: want.to_string(),
            }),
        }
    }

    pub(crate) fn eat(&mut self, want: &Tok) -> bool {
        if self.peek() == Some(want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(ParseError::Trailing { pos: self.here() })
        }
    }

    pub(crate) fn formula(&mut self) -> Result<Formula, ParseError> {
        self.iff()
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.imp()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.here();
        match self.advance() {
            Some(Tok::Not) => Ok(Formula::not(self.unary()?)),
            Some(Tok::LParen) => {
                let inner = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some(Tok::True) => Ok(Formula::True),
            Some(Tok::False) => Ok(Formula::False),
            Some(Tok::Ident(name)) => match self.sig.index_of(&name) {
                Some(idx) => Ok(Formula::Prop(idx)),
                None => Err(ParseError::UnknownProp { pos, name }),
            },
            Some(other) => Err(ParseError::Unexpected {
                pos,
                found: other.to_string(),
                expected: "a formula".to_string(),
            }),
            None => Err(ParseError::UnexpectedEnd {
                expected: "a formula".to_string(),
            }),
        }
    }
}

/// Parse `text` as a formula over `sig`.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}
