//! A small expression reader for polynomial tables written in plain ASCII:
//! integers, identifiers, `+ - * / ^`, parentheses, and juxtaposition as
//! multiplication. Products are formed left to right, so non-commutative
//! targets see factors in written order.

use num_bigint::BigInt;
use num_traits::One;

use super::{AlgebraError, MultiPoly, Vars, Q};

pub trait ExprBuilder {
    type Out: Clone;
    fn number(&self, n: &Q) -> Self::Out;
    fn symbol(&self, name: &str) -> Result<Self::Out, AlgebraError>;
    fn add(&self, a: &Self::Out, b: &Self::Out) -> Self::Out;
    fn mul(&self, a: &Self::Out, b: &Self::Out) -> Self::Out;
    fn neg(&self, a: &Self::Out) -> Self::Out;
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<Tok>, AlgebraError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = chars[s..i].iter().collect();
            out.push(Tok::Num(t.parse().unwrap()));
        } else if c.is_alphabetic() || c == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[s..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(AlgebraError::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a, B: ExprBuilder> {
    toks: Vec<Tok>,
    pos: usize,
    b: &'a B,
}

impl<'a, B: ExprBuilder> Parser<'a, B> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<B::Out, AlgebraError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' {
                self.b.add(&acc, &t)
            } else {
                self.b.add(&acc, &self.b.neg(&t))
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<B::Out, AlgebraError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let f = self.unary()?;
                    acc = self.b.mul(&acc, &f);
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Num(n)) => {
                            self.pos += 1;
                            let inv = self.b.number(&Q::new(BigInt::one(), n));
                            acc = self.b.mul(&acc, &inv);
                        }
                        _ => {
                            return Err(AlgebraError::Parse(
                                "division only by integer literals".into(),
                            ))
                        }
                    }
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')) => {
                    let f = self.power()?;
                    acc = self.b.mul(&acc, &f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<B::Out, AlgebraError> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            let u = self.unary()?;
            return Ok(self.b.neg(&u));
        }
        if let Some(Tok::Op('+')) = self.peek() {
            self.pos += 1;
        }
        self.power()
    }

    fn power(&mut self) -> Result<B::Out, AlgebraError> {
        let base = self.primary()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let k = match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    u32::try_from(n)
                        .map_err(|_| AlgebraError::Parse("exponent too large".into()))?
                }
                _ => {
                    return Err(AlgebraError::Parse(
                        "exponent must be an integer literal".into(),
                    ))
                }
            };
            let mut acc = self.b.number(&Q::one());
            for _ in 0..k {
                acc = self.b.mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<B::Out, AlgebraError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(self.b.number(&Q::from_integer(n)))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                self.b.symbol(&s)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(AlgebraError::Parse("missing ')'".into())),
                }
            }
            other => Err(AlgebraError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse_expr<B: ExprBuilder>(b: &B, src: &str) -> Result<B::Out, AlgebraError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, b };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(AlgebraError::Parse(format!(
            "trailing input at token {}",
            p.pos
        )));
    }
    Ok(e)
}

pub struct PolyBuilder(pub Vars);

impl ExprBuilder for PolyBuilder {
    type Out = MultiPoly;
    fn number(&self, n: &Q) -> MultiPoly {
        MultiPoly::constant(&self.0, n.clone())
    }
    fn symbol(&self, name: &str) -> Result<MultiPoly, AlgebraError> {
        if self.0.iter().any(|v| v == name) {
            Ok(MultiPoly::var(&self.0, name))
        } else {
            Err(AlgebraError::Parse(format!("unknown symbol {name}")))
        }
    }
    fn add(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a + b
    }
    fn mul(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a * b
    }
    fn neg(&self, a: &MultiPoly) -> MultiPoly {
        -a
    }
}

/// Parse a polynomial over the given variables.
pub fn parse_poly(vars: &Vars, src: &str) -> Result<MultiPoly, AlgebraError> {
    parse_expr(&PolyBuilder(vars.clone()), src)
}
