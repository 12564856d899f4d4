//! Inline state syntax: `3/2 v(-1) v - 19/36 w(-2) w(-2) + 44/9 w(-5)`.
//!
//! A bare symbol stands for its `-1` mode, so `v(-1) v` is `v_{-1} v_{-1} 1`.
//! A coefficient with no operators is a multiple of the vacuum.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::terms::{ModeOp, Signature, State, Word};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Slash,
    Star,
    Plus,
    Minus,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '/' => out.push((start, Tok::Slash)),
            '*' => out.push((start, Tok::Star)),
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            d if d.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(src[start..i].to_string())));
                continue;
            }
            a if a.is_ascii_alphabetic() => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    offset: start,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    sig: &'a Signature,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.len)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn coefficient(&mut self) -> Result<Option<Scalar>> {
        let Some(Tok::Int(n)) = self.peek().cloned() else {
            return Ok(None);
        };
        self.bump();
        let mut text = n;
        if self.peek() == Some(&Tok::Slash) {
            self.bump();
            match self.bump() {
                Some(Tok::Int(d)) => {
                    text.push('/');
                    text.push_str(&d);
                }
                _ => return self.err("expected denominator"),
            }
        }
        text.parse().map(Some)
    }

    fn factor(&mut self, name: &str) -> Result<ModeOp> {
        let Some(gen) = self.sig.index_of(name) else {
            self.pos -= 1;
            return self.err(format!("unknown generator symbol {name:?}"));
        };
        if self.peek() != Some(&Tok::LParen) {
            return Ok(ModeOp::new(gen, -1));
        }
        self.bump();
        let neg = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                true
            }
            Some(Tok::Plus) => {
                self.bump();
                false
            }
            _ => false,
        };
        let mode = match self.bump() {
            Some(Tok::Int(m)) => m.parse::<i64>().map_err(|_| Error::Syntax {
                offset: self.offset(),
                message: "mode out of range".into(),
            })?,
            _ => return self.err("expected integer mode"),
        };
        if self.bump() != Some(Tok::RParen) {
            return self.err("expected ')'");
        }
        Ok(ModeOp::new(gen, if neg { -mode } else { mode }))
    }

    fn term(&mut self) -> Result<(Word, Scalar)> {
        let coeff = self.coefficient()?;
        if coeff.is_some() && self.peek() == Some(&Tok::Star) {
            self.bump();
        }
        let mut ops = Vec::new();
        while let Some(Tok::Ident(name)) = self.peek().cloned() {
            self.bump();
            ops.push(self.factor(&name)?);
        }
        if coeff.is_none() && ops.is_empty() {
            return self.err("expected a term");
        }
        Ok((Word::new(ops), coeff.unwrap_or_else(Scalar::one)))
    }

    fn state(&mut self) -> Result<State> {
        let mut out = State::zero();
        let mut sign = Scalar::one();
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                sign = Scalar::from_int(-1);
            }
            Some(Tok::Plus) => {
                self.bump();
            }
            _ => {}
        }
        loop {
            let (w, c) = self.term()?;
            out.add_term(w, &(&sign * &c));
            match self.bump() {
                None => return Ok(out),
                Some(Tok::Plus) => sign = Scalar::one(),
                Some(Tok::Minus) => sign = Scalar::from_int(-1),
                Some(_) => {
                    self.pos -= 1;
                    return self.err("expected '+' or '-'");
                }
            }
        }
    }
}

/// Parses an inline state. Words are taken literally (not normal-ordered).
pub fn parse_state(sig: &Signature, src: &str) -> Result<State> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        sig,
        len: src.len(),
    };
    if p.toks.is_empty() {
        return p.err("empty expression");
    }
    p.state()
}
