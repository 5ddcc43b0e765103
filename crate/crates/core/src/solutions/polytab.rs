//! Sparse integer polynomials in `X, T1..T5`, parsed from a compact text form
//! and evaluated on any [`Scalar`] by Horner accumulation in `X`.
//!
//! The text form accepts integers, the variables `X`, `T1`..`T5`, `+ - * ^`,
//! parentheses, and implicit multiplication by juxtaposition (`120T1^2T2`).

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::jet::{Scalar, C64};

pub const NVARS: usize = 6;
pub const VAR_NAMES: [&str; NVARS] = ["X", "T1", "T2", "T3", "T4", "T5"];

pub type Exponents = [u32; NVARS];

/// `sum coeff * X^e0 T1^e1 … T5^e5`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Exponents, i64>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({} terms)", self.terms.len())
    }
}

impl MultiPoly {
    pub fn constant(c: i64) -> Self {
        let mut p = Self::default();
        p.add_term([0; NVARS], c);
        p
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; NVARS];
        e[i] = 1;
        let mut p = Self::default();
        p.add_term(e, 1);
        p
    }

    fn add_term(&mut self, e: Exponents, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(e).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &i64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Exponents) -> i64 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, *c);
        }
        r
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let mut e = *ea;
                for (x, y) in e.iter_mut().zip(eb) {
                    *x += y;
                }
                r.add_term(e, ca.checked_mul(*cb).expect("coefficient overflow"));
            }
        }
        r
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = Self::constant(1);
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    pub fn parse(src: &str) -> Result<Self> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let r = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::InvalidArgument(format!(
                "trailing input at token {} in polynomial",
                p.pos
            )));
        }
        Ok(r)
    }

    /// Evaluates at `vars = [X, T1..T5]`. Horner in `X`; the `T` monomials of
    /// each `X`-coefficient use cached powers.
    pub fn eval<S: Scalar>(&self, vars: &[S; NVARS]) -> S {
        let zero = vars[0].zero_like();
        let mut powers: Vec<Vec<S>> = Vec::with_capacity(NVARS);
        for (v, val) in vars.iter().enumerate() {
            let top = self.degree_in(v);
            let mut row = vec![val.constant_like(C64::new(1.0, 0.0))];
            for k in 1..=top as usize {
                row.push(row[k - 1].clone() * val.clone());
            }
            powers.push(row);
        }
        let dx = self.degree_in(0) as usize;
        let mut by_x: Vec<Option<S>> = vec![None; dx + 1];
        for (e, c) in &self.terms {
            let mut m = zero.constant_like(C64::new(*c as f64, 0.0));
            for v in 1..NVARS {
                if e[v] > 0 {
                    m = m * powers[v][e[v] as usize].clone();
                }
            }
            let slot = &mut by_x[e[0] as usize];
            *slot = Some(match slot.take() {
                None => m,
                Some(acc) => acc + m,
            });
        }
        let mut acc = zero.clone();
        for j in (0..=dx).rev() {
            acc = acc * vars[0].clone();
            if let Some(cj) = &by_x[j] {
                acc = acc + cj.clone();
            }
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i64),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        match ch {
            ' ' | '\n' | '\t' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = src[start..i]
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad integer {}", &src[start..i])))?;
                out.push(Tok::Num(n));
            }
            'X' => {
                out.push(Tok::Var(0));
                i += 1;
            }
            'T' => {
                let d = bytes.get(i + 1).copied().unwrap_or(b' ');
                if !(b'1'..=b'5').contains(&d) {
                    return Err(Error::InvalidArgument(format!("bad variable at byte {i}")));
                }
                out.push(Tok::Var((d - b'0') as usize));
                i += 2;
            }
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unexpected character {other:?} in polynomial"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.signed_term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn signed_term(&mut self) -> Result<MultiPoly> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(self.term()?.neg());
        }
        self.term()
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc.mul(&self.power()?);
                }
                Some(Tok::Num(_)) | Some(Tok::Var(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            match self.bump() {
                Some(Tok::Num(n)) if n >= 0 => return Ok(base.pow(n as u32)),
                _ => {
                    return Err(Error::InvalidArgument(
                        "exponent must be a non-negative integer".into(),
                    ))
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.bump() {
            Some(Tok::Num(n)) => Ok(MultiPoly::constant(n)),
            Some(Tok::Var(v)) => Ok(MultiPoly::var(v)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(Error::InvalidArgument("unbalanced parenthesis".into())),
                }
            }
            other => Err(Error::InvalidArgument(format!("unexpected token {other:?}"))),
        }
    }
}
