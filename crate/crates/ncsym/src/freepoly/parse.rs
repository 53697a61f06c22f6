//! Text grammar for free polynomials.
//!
//! Terms are separated by `+`/`-`; a term is an optional coefficient (a real
//! literal or a complex `(re,im)`) and `*`-separated letters from `z`, `w`
//! or `x0`..`x9`. Whitespace is insignificant. Example: `z*w*z + w*z*w`.

use super::{FreePoly, Word};
use crate::error::{Error, Result};
use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Comma,
    Number(f64),
    Letter(u8, bool),
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

type Spanned = (Tok, usize, usize);

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, col: self.col, msg: msg.into() }
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn tokens(mut self) -> Result<Vec<Spanned>> {
        let mut out = Vec::new();
        loop {
            while matches!(self.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
                self.bump();
            }
            let (line, col) = (self.line, self.col);
            let Some(b) = self.peek() else { break };
            match b {
                b'+' => {
                    self.bump();
                    out.push((Tok::Plus, line, col));
                }
                b'-' => {
                    self.bump();
                    out.push((Tok::Minus, line, col));
                }
                0xE2 => {
                    // Unicode minus sign U+2212 (e2 88 92).
                    if self.src.get(self.pos..self.pos + 3) == Some(&[0xE2, 0x88, 0x92]) {
                        self.pos += 3;
                        self.col += 1;
                        out.push((Tok::Minus, line, col));
                    } else {
                        return Err(self.err("unexpected character"));
                    }
                }
                b'*' => {
                    self.bump();
                    out.push((Tok::Star, line, col));
                }
                b'(' => {
                    self.bump();
                    out.push((Tok::LParen, line, col));
                }
                b')' => {
                    self.bump();
                    out.push((Tok::RParen, line, col));
                }
                b',' => {
                    self.bump();
                    out.push((Tok::Comma, line, col));
                }
                b'z' => {
                    self.bump();
                    out.push((Tok::Letter(0, true), line, col));
                }
                b'w' => {
                    self.bump();
                    out.push((Tok::Letter(1, true), line, col));
                }
                b'x' => {
                    self.bump();
                    match self.peek() {
                        Some(d @ b'0'..=b'9') => {
                            self.bump();
                            out.push((Tok::Letter(d - b'0', false), line, col));
                        }
                        _ => return Err(self.err("expected digit after 'x'")),
                    }
                }
                b'0'..=b'9' | b'.' => {
                    let start = self.pos;
                    while matches!(self.peek(), Some(b'0'..=b'9' | b'.')) {
                        self.bump();
                    }
                    if matches!(self.peek(), Some(b'e' | b'E')) {
                        self.bump();
                        if matches!(self.peek(), Some(b'+' | b'-')) {
                            self.bump();
                        }
                        while matches!(self.peek(), Some(b'0'..=b'9')) {
                            self.bump();
                        }
                    }
                    let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    let value: f64 = text
                        .parse()
                        .map_err(|_| Error::Parse { line, col, msg: format!("bad number '{text}'") })?;
                    out.push((Tok::Number(value), line, col));
                }
                other => {
                    return Err(self.err(format!("unexpected character '{}'", other as char)));
                }
            }
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn span(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|&(_, l, c)| (l, c))
            .unwrap_or((1, 1))
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.span();
        Error::Parse { line, col, msg: msg.into() }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err(format!("expected {what}")))
            }
        }
    }

    /// A signed real literal, for the components of a complex coefficient.
    fn signed_number(&mut self) -> Result<f64> {
        let mut sign = 1.0;
        loop {
            match self.peek() {
                Some(Tok::Minus) => {
                    sign = -sign;
                    self.next();
                }
                Some(Tok::Plus) => {
                    self.next();
                }
                _ => break,
            }
        }
        match self.next() {
            Some(Tok::Number(v)) => Ok(sign * v),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err("expected number"))
            }
        }
    }

    /// factor := number | '(' snumber ',' snumber ')' | letter
    fn factor(&mut self) -> Result<Factor> {
        match self.peek() {
            Some(Tok::Number(_)) => {
                let v = self.signed_number()?;
                Ok(Factor::Coeff(Complex64::new(v, 0.0)))
            }
            Some(Tok::LParen) => {
                self.next();
                let re = self.signed_number()?;
                self.expect(Tok::Comma, "','")?;
                let im = self.signed_number()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Factor::Coeff(Complex64::new(re, im)))
            }
            Some(&Tok::Letter(l, zw)) => {
                self.next();
                Ok(Factor::Letter(l, zw))
            }
            _ => Err(self.err("expected coefficient or letter")),
        }
    }

    /// term := factor ('*' factor)*
    fn term(&mut self) -> Result<(Complex64, Vec<u8>, bool)> {
        let mut coeff = Complex64::new(1.0, 0.0);
        let mut letters = Vec::new();
        let mut saw_zw = false;
        match self.factor()? {
            Factor::Coeff(c) => coeff *= c,
            Factor::Letter(l, zw) => {
                letters.push(l);
                saw_zw |= zw;
            }
        }
        while self.peek() == Some(&Tok::Star) {
            self.next();
            match self.factor()? {
                Factor::Coeff(c) => coeff *= c,
                Factor::Letter(l, zw) => {
                    letters.push(l);
                    saw_zw |= zw;
                }
            }
        }
        Ok((coeff, letters, saw_zw))
    }
}

enum Factor {
    Coeff(Complex64),
    Letter(u8, bool),
}

/// Parse a polynomial from the CLI text grammar.
///
/// The letter alphabet is inferred: `z`/`w` imply two letters, `xk` implies
/// at least `k + 1`; a pure constant defaults to two letters.
pub fn parse_poly(input: &str) -> Result<FreePoly> {
    let toks = Lexer::new(input).tokens()?;
    let mut p = Parser { toks, pos: 0 };
    if p.peek().is_none() {
        return Err(p.err("empty polynomial"));
    }

    let mut terms: Vec<(Complex64, Vec<u8>)> = Vec::new();
    let mut saw_zw = false;
    let mut sign = 1.0;
    // Optional leading sign.
    loop {
        match p.peek() {
            Some(Tok::Minus) => {
                sign = -sign;
                p.next();
            }
            Some(Tok::Plus) => {
                p.next();
            }
            _ => break,
        }
    }
    loop {
        let (c, letters, zw) = p.term()?;
        saw_zw |= zw;
        terms.push((c * sign, letters));
        match p.peek() {
            None => break,
            Some(Tok::Plus) => {
                sign = 1.0;
                p.next();
            }
            Some(Tok::Minus) => {
                sign = -1.0;
                p.next();
            }
            _ => return Err(p.err("expected '+', '-' or end of input")),
        }
    }

    let mut d = 0usize;
    for (_, letters) in &terms {
        for &l in letters {
            d = d.max(l as usize + 1);
        }
    }
    if saw_zw {
        d = d.max(2);
    }
    if d == 0 {
        d = 2;
    }

    Ok(FreePoly::from_terms(
        d,
        terms.into_iter().map(|(c, letters)| (Word(letters), c)),
    ))
}
