//! Human-readable and JSON encodings of polynomials.
//!
//! The text form is what `Poly::display` prints, e.g. `k_r1*c_S2^2 + 3/2*k_r4`.
//! The JSON form is a list of `{coeff: "p/q", monomial: {name: power}}` terms
//! in descending monomial order.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{AlgebraError, Monomial, Namespace, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub monomial: BTreeMap<String, u32>,
}

pub fn poly_to_json(p: &Poly, ns: &Namespace) -> Vec<TermJson> {
    p.terms()
        .rev()
        .map(|(m, c)| TermJson {
            coeff: c.to_string(),
            monomial: m.powers().iter().map(|&(s, e)| (ns.name(s).to_string(), e)).collect(),
        })
        .collect()
}

pub fn poly_from_json(terms: &[TermJson], ns: &Namespace) -> Result<Poly, AlgebraError> {
    let mut p = Poly::zero();
    for t in terms {
        let c = parse_rational(&t.coeff).ok_or_else(|| AlgebraError::Parse {
            pos: 0,
            msg: format!("bad coefficient `{}`", t.coeff),
        })?;
        let mut powers = Vec::new();
        for (name, &e) in &t.monomial {
            let s = ns.lookup(name).ok_or_else(|| AlgebraError::UnknownSymbol(name.clone()))?;
            powers.push((s, e));
        }
        p.add_term(Monomial::from_powers(powers), c);
    }
    Ok(p)
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.trim().parse().ok()?)),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, AlgebraError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'/' => out.push((start, Tok::Slash)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Num(text[start..i].parse().expect("digits"))));
                continue;
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                return Err(AlgebraError::Parse {
                    pos: start,
                    msg: format!("unexpected character `{}`", b as char),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    ns: &'a Namespace,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse { pos: self.pos(), msg: msg.to_string() }
    }

    fn number(&mut self) -> Result<BigInt, AlgebraError> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = n.clone();
                self.at += 1;
                Ok(n)
            }
            _ => Err(self.err("expected a number")),
        }
    }

    fn exponent(&mut self) -> Result<u32, AlgebraError> {
        if self.peek() != Some(&Tok::Caret) {
            return Ok(1);
        }
        self.at += 1;
        let n = self.number()?;
        u32::try_from(n).map_err(|_| self.err("exponent out of range"))
    }

    fn factor(&mut self) -> Result<Poly, AlgebraError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                let mut q = BigRational::from_integer(n);
                if self.peek() == Some(&Tok::Slash) {
                    self.at += 1;
                    let d = self.number()?;
                    if d.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    q /= BigRational::from_integer(d);
                }
                Ok(Poly::constant(q))
            }
            Some(Tok::Ident(name)) => {
                let sym = self.ns.lookup(&name).ok_or(AlgebraError::UnknownSymbol(name))?;
                self.at += 1;
                let e = self.exponent()?;
                Ok(Poly::monomial(Monomial::from_powers([(sym, e)])))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.poly()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected `)`"));
                }
                self.at += 1;
                let e = self.exponent()?;
                Ok(inner.pow(e))
            }
            _ => Err(self.err("expected a number, symbol or `(`")),
        }
    }

    fn term(&mut self) -> Result<Poly, AlgebraError> {
        let mut t = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.at += 1;
            t = t * self.factor()?;
        }
        Ok(t)
    }

    fn poly(&mut self) -> Result<Poly, AlgebraError> {
        let mut p = Poly::zero();
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.at += 1;
            }
            Some(Tok::Plus) => self.at += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            if negate {
                p -= &t;
            } else {
                p += t;
            }
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                None | Some(Tok::RParen) => return Ok(p),
                _ => return Err(self.err("expected `+` or `-`")),
            }
            self.at += 1;
        }
    }
}

/// Parses the text form back into a polynomial over the namespace's symbols.
pub fn parse_poly(text: &str, ns: &Namespace) -> Result<Poly, AlgebraError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(AlgebraError::Parse { pos: 0, msg: "empty polynomial".into() });
    }
    let mut p = Parser { toks, at: 0, end: text.len(), ns };
    let out = p.poly()?;
    if p.peek().is_some() {
        return Err(p.err("unbalanced `)`"));
    }
    Ok(out)
}
