//! Reader for the plain operator grammar.
//!
//! ```text
//! expr    := [sign] product { sign product }
//! product := power { ['*'] power }
//! power   := atom [ '^' ['-'] integer ]
//! atom    := integer ['/' integer] | 'i' | constant | label | factor
//!          | '(' expr ')' | '[' expr ']'
//! constant:= 'ħ' | 'hbar' | 'e' | 'm' | 'c'
//! label   := 'I' | 'β' | 'α_x' | 'Σ_x' | 'βα_x' | 'βΣ_x' | 'γ5' | 'βγ5' | 'σ_x' | ...
//! factor  := 'Π_x' | 'Pi_x' | 'V' | 'E_x' | 'B_x' | ('∂_' | 'd_') axes ('V' | 'E_x' | 'B_x')
//! sign    := '+' | '-' | '−'
//! ```
//!
//! Juxtaposition is noncommutative multiplication. Negative exponents are
//! accepted only on constant monomials.

use num_traits::Zero;

use super::label::SpinLabel;
use super::sum::OperatorSum;
use super::symbols::{Assumptions, ConstantMonomial, Factor, Field, FieldBase, Powers};
use super::AlgebraError;
use crate::dirac::Axis;
use crate::scalar::{parse_rational, GaussianRational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Times,
    Caret,
    Open(char),
    Close(char),
    Number(String),
    Ident(String),
}

const SPECIAL: &[char] = &['+', '-', '−', '*', '·', '^', '(', ')', '[', ']'];

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(pos, ch)) = it.peek() {
        if ch.is_whitespace() {
            it.next();
            continue;
        }
        let tok = match ch {
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' | '·' => Tok::Times,
            '^' => Tok::Caret,
            '(' | '[' => Tok::Open(ch),
            ')' | ']' => Tok::Close(ch),
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&(_, d)) = it.peek() {
                    if d.is_ascii_digit() || d == '/' {
                        s.push(d);
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push((pos, Tok::Number(s)));
                continue;
            }
            _ => {
                let mut s = String::new();
                while let Some(&(_, d)) = it.peek() {
                    if d.is_whitespace() || SPECIAL.contains(&d) {
                        break;
                    }
                    s.push(d);
                    it.next();
                }
                out.push((pos, Tok::Ident(s)));
                continue;
            }
        };
        it.next();
        out.push((pos, tok));
    }
    Ok(out)
}

fn parse_field(s: &str) -> Option<Field> {
    let base = |b: &str| -> Option<FieldBase> {
        if b == "V" {
            return Some(FieldBase::V);
        }
        let (kind, axis) = b.split_once('_')?;
        let mut chars = axis.chars();
        let a = Axis::from_letter(chars.next()?)?;
        if chars.next().is_some() {
            return None;
        }
        match kind {
            "E" => Some(FieldBase::E(a)),
            "B" => Some(FieldBase::B(a)),
            _ => None,
        }
    };
    if let Some(rest) = s.strip_prefix("∂_").or_else(|| s.strip_prefix("d_")) {
        let split = rest.find(|c: char| c.is_ascii_uppercase())?;
        let (axes, b) = rest.split_at(split);
        let mut field = Field { base: base(b)?, deriv: Default::default() };
        if axes.is_empty() {
            return None;
        }
        for ch in axes.chars() {
            field = field.derivative(Axis::from_letter(ch)?);
        }
        return Some(field);
    }
    Some(Field { base: base(s)?, deriv: Default::default() })
}

struct Parser<'a, L: SpinLabel> {
    toks: &'a [(usize, Tok)],
    at: usize,
    end: usize,
    assumptions: Assumptions,
    _label: std::marker::PhantomData<L>,
}

impl<L: SpinLabel> Parser<'_, L> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos(), message: message.into() })
    }

    fn constant(&self, powers: Powers) -> OperatorSum<L> {
        self.lift(OperatorSum::constant(ConstantMonomial::new(GaussianRational::from_integer(1), powers)))
    }

    fn lift(&self, s: OperatorSum<L>) -> OperatorSum<L> {
        s.with_assumptions(self.assumptions).expect("atoms never overflow")
    }

    fn expr(&mut self) -> Result<OperatorSum<L>, ParseError> {
        let mut acc = self.lift(OperatorSum::zero());
        let mut first = true;
        loop {
            let negate = match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    false
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    true
                }
                _ if first => false,
                _ => break,
            };
            let p = self.product()?;
            acc = if negate { acc.try_sub(&p)? } else { acc.try_add(&p)? };
            first = false;
        }
        Ok(acc)
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Number(_) | Tok::Ident(_) | Tok::Open(_)))
    }

    fn product(&mut self) -> Result<OperatorSum<L>, ParseError> {
        if !self.starts_atom() {
            return self.err("expected an operand");
        }
        let mut acc = self.power()?;
        loop {
            if self.peek() == Some(&Tok::Times) {
                self.at += 1;
                if !self.starts_atom() {
                    return self.err("expected an operand after `*`");
                }
            } else if !self.starts_atom() {
                break;
            }
            let rhs = self.power()?;
            acc = acc.mul(&rhs)?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<OperatorSum<L>, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.at += 1;
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            true
        } else {
            false
        };
        let exp: u32 = match self.peek() {
            Some(Tok::Number(n)) if !n.contains('/') => match n.parse() {
                Ok(v) => v,
                Err(_) => return self.err("exponent out of range"),
            },
            _ => return self.err("expected an integer exponent"),
        };
        self.at += 1;
        if !negative {
            return Ok(base.pow(exp)?);
        }
        let Some(m) = base.as_monomial() else {
            return self.err("negative exponents apply only to constants");
        };
        let Some(inv) = m.inverse() else {
            return self.err("division by zero");
        };
        let mut acc = ConstantMonomial::one();
        for _ in 0..exp {
            acc = acc.mul(&inv);
        }
        Ok(self.lift(OperatorSum::constant(acc)))
    }

    fn atom(&mut self) -> Result<OperatorSum<L>, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of input");
        };
        self.at += 1;
        match tok {
            Tok::Number(n) => match parse_rational(&n) {
                Ok(r) => Ok(self.lift(OperatorSum::constant(ConstantMonomial::new(r.into(), Powers::ONE)))),
                Err(_) => {
                    self.at -= 1;
                    self.err(format!("invalid number `{n}`"))
                }
            },
            Tok::Open(open) => {
                let inner = self.expr()?;
                let close = if open == '(' { ')' } else { ']' };
                if self.peek() != Some(&Tok::Close(close)) {
                    return self.err(format!("expected `{close}`"));
                }
                self.at += 1;
                Ok(inner)
            }
            Tok::Ident(id) => self.ident(&id),
            _ => {
                self.at -= 1;
                self.err("expected an operand")
            }
        }
    }

    fn ident(&mut self, id: &str) -> Result<OperatorSum<L>, ParseError> {
        let sum = match id {
            "i" => self.lift(OperatorSum::constant(ConstantMonomial::new(GaussianRational::i(), Powers::ONE))),
            "ħ" | "hbar" => self.constant(Powers::new(1, 0, 0, 0)),
            "e" => self.constant(Powers::new(0, 1, 0, 0)),
            "m" => self.constant(Powers::new(0, 0, 1, 0)),
            "c" => self.constant(Powers::new(0, 0, 0, 1)),
            _ => {
                if let Some(axis) = id.strip_prefix("Π_").or_else(|| id.strip_prefix("Pi_")) {
                    let mut chars = axis.chars();
                    match (chars.next().and_then(Axis::from_letter), chars.next()) {
                        (Some(a), None) => return Ok(self.lift(OperatorSum::pi(a))),
                        _ => {
                            self.at -= 1;
                            return self.err(format!("unknown symbol `{id}`"));
                        }
                    }
                }
                if let Some(label) = L::from_symbol(id) {
                    return Ok(self.lift(OperatorSum::label(label)));
                }
                if let Some(field) = parse_field(id) {
                    return Ok(OperatorSum::term_with(ConstantMonomial::one(), L::IDENTITY, &[Factor::Field(field)], self.assumptions)?);
                }
                self.at -= 1;
                return self.err(format!("unknown symbol `{id}`"));
            }
        };
        Ok(sum)
    }
}

/// Parses a plain-grammar expression, normal-ordering under `assumptions`.
pub fn parse_operator<L: SpinLabel>(src: &str, assumptions: Assumptions) -> Result<OperatorSum<L>, ParseError> {
    let toks = tokenize(src)?;
    if toks.len() == 1 && toks[0].1 == Tok::Number("0".into()) {
        return Ok(OperatorSum::zero().with_assumptions(assumptions)?);
    }
    let mut p = Parser::<L> { toks: &toks, at: 0, end: src.len(), assumptions, _label: Default::default() };
    let out = p.expr()?;
    if p.at != toks.len() {
        return p.err("unexpected trailing input");
    }
    debug_assert!(out.terms().all(|t| !t.coeff.is_zero()));
    Ok(out)
}
