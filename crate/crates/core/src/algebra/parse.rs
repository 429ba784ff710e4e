//! A small recursive-descent parser for coefficient expressions.
//!
//! Grammar: `+ - * / ^`, unary minus, parentheses, integer literals and
//! identifiers. Exponents are integers (possibly negative). Identifiers are
//! resolved by a caller-supplied lookup, so the same text can be read
//! symbolically or at a rational point, and named sub-expressions such as
//! `D` can be spliced in.

use std::iter::Peekable;
use std::str::CharIndices;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::rational::RationalFunction;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '₁'
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut it: Peekable<CharIndices> = src.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
        } else if c.is_ascii_digit() {
            let mut end = i;
            while let Some(&(j, d)) = it.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = j + d.len_utf8();
                it.next();
            }
            let n: BigInt = src[i..end].parse().expect("digits");
            out.push(Tok::Num(n));
        } else if is_ident_char(c) {
            let mut end = i;
            while let Some(&(j, d)) = it.peek() {
                if !is_ident_char(d) {
                    break;
                }
                end = j + d.len_utf8();
                it.next();
            }
            out.push(Tok::Ident(src[i..end].to_string()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            it.next();
        } else {
            return Err(Error::Algebra(format!("unexpected character {c:?} in {src:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
    lookup: &'a dyn Fn(&str) -> Option<RationalFunction>,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Algebra(format!("{msg} at token {} in {:?}", self.pos, self.src))
    }

    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == '*' { &acc * &rhs } else { acc.checked_div(&rhs)? };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = self.peek_op() == Some('-');
        if neg {
            self.pos += 1;
        }
        let e: i32 = match self.toks.get(self.pos) {
            Some(Tok::Num(n)) => n.try_into().map_err(|_| self.err("exponent too large"))?,
            _ => return Err(self.err("expected integer exponent")),
        };
        self.pos += 1;
        base.pow(if neg { -e } else { e })
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RationalFunction::constant(BigRational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                (self.lookup)(&name).ok_or_else(|| self.err(&format!("unknown name {name:?}")))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

/// Parses `src`, resolving identifiers through `lookup`.
pub fn parse_with(src: &str, lookup: &dyn Fn(&str) -> Option<RationalFunction>) -> Result<RationalFunction> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, src, lookup };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Parses `src` with every identifier read as a symbolic variable.
pub fn parse(src: &str) -> Result<RationalFunction> {
    parse_with(src, &|name| super::Var::parse(name).map(RationalFunction::var))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rf_equal, Var};

    #[test]
    fn precedence() {
        let a = parse("-beta^2 + 2*beta*q/3").unwrap();
        let b = parse("(2*q*beta - 3*beta*beta)/3").unwrap();
        assert!(rf_equal(&a, &b));
    }

    #[test]
    fn greek_aliases_and_negative_powers() {
        let a = parse("γ^-2 * β").unwrap();
        let b = parse("beta/(gamma*gamma)").unwrap();
        assert!(rf_equal(&a, &b));
    }

    #[test]
    fn named_subexpressions() {
        let d = parse("2*a/gamma - 1").unwrap();
        let look = |s: &str| if s == "D" { Some(d.clone()) } else { Var::parse(s).map(RationalFunction::var) };
        let e = parse_with("D/n*(beta+1)^2", &look).unwrap();
        let f = parse("(2*a/gamma - 1)*(beta+1)^2/n").unwrap();
        assert!(rf_equal(&e, &f));
    }

    #[test]
    fn errors() {
        assert!(parse("1/0").is_err());
        assert!(parse("foo + 1").is_err());
        assert!(parse("(1 + 2").is_err());
        assert!(parse("x ^ y").is_err());
        assert!(parse("1 $ 2").is_err());
    }
}
