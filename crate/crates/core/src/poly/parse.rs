//! Recursive-descent parser for polynomial text.
//!
//! Accepts `+ - * / ^`, parentheses, integer literals and the given variable
//! names. Division is only allowed by nonzero constants.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{IntPoly, RatPoly};
use crate::error::{Error, Result};

macro_rules! perr {
    ($($arg:tt)*) => { Error::Parse(alloc::format!($($arg)*)) };
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().map_err(|_| perr!("bad number {s}"))?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(perr!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<RatPoly> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatPoly> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            if op == '*' {
                acc = &acc * &rhs;
            } else {
                let c = constant_value(&rhs).ok_or_else(|| perr!("division by a non-constant"))?;
                if c.is_zero() {
                    return Err(perr!("division by zero"));
                }
                acc = acc.scale(&(BigRational::from(BigInt::from(1)) / c));
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatPoly> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatPoly> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.toks.get(self.pos) {
                Some(Tok::Num(n)) => {
                    let e: u32 = n.try_into().map_err(|_| perr!("exponent {n} too large"))?;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err(perr!("expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatPoly> {
        let n = self.vars.len();
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(RatPoly::constant(n, BigRational::from(v)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| perr!("unknown variable {name}"))?;
                Ok(RatPoly::var(n, i))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(perr!("missing closing parenthesis"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(t) => Err(perr!("unexpected token {t:?}")),
            None => Err(perr!("unexpected end of input")),
        }
    }
}

fn constant_value(p: &RatPoly) -> Option<BigRational> {
    match p.num_terms() {
        0 => Some(BigRational::zero()),
        1 => {
            let (m, c) = p.terms().next()?;
            (m.degree() == 0).then(|| c.clone())
        }
        _ => None,
    }
}

pub fn parse_rat_poly(text: &str, vars: &[String]) -> Result<RatPoly> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(perr!("empty polynomial"));
    }
    let mut p = Parser { toks, pos: 0, vars };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(perr!("trailing input after position {}", p.pos));
    }
    Ok(out)
}

pub fn parse_int_poly(text: &str, vars: &[String]) -> Result<IntPoly> {
    parse_rat_poly(text, vars)?
        .to_int()
        .ok_or_else(|| perr!("expected integer coefficients in {text:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn v(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn round_trip() {
        let vars = v(&["x", "y", "z"]);
        for s in ["x^2 + y^2 + z^2", "2*x*y^3 + x^2 - 1/2*y - 3", "-x", "0", "y^2 - x^3 - x - 1"] {
            let p = parse_rat_poly(s, &vars).unwrap();
            let again = parse_rat_poly(&p.display(&vars).to_string(), &vars).unwrap();
            assert_eq!(p, again, "{s}");
        }
    }

    #[test]
    fn precedence() {
        let vars = v(&["x"]);
        let a = parse_int_poly("-x^2", &vars).unwrap();
        assert_eq!(a.coeff(&[2]), BigInt::from(-1));
        let b = parse_int_poly("(x+1)^2 - 2*(x)", &vars).unwrap();
        assert_eq!(b, parse_int_poly("x^2 + 1", &vars).unwrap());
        assert_eq!(parse_rat_poly("x/2/3", &vars).unwrap().coeff(&[1]), BigRational::new(1.into(), 6.into()));
    }

    #[test]
    fn rejects() {
        let vars = v(&["x"]);
        for s in ["", "x +", "y", "x/x", "x/0", "x^y", "(x", "x $ 1", "x/2"] {
            assert!(parse_int_poly(s, &vars).is_err(), "{s}");
        }
        let _ = vec![0];
    }
}
