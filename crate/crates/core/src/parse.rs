//! Infix polynomial text: `-x^2*w + y*z`, `3/2*x - 1`, `(x+y)^3`.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Ring};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = b[st..i].iter().collect();
            out.push((st, Tok::Int(text.parse().unwrap())));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < b.len() && (b[i].is_alphanumeric() || b[i] == '_' || b[i] == '\'') {
                i += 1;
            }
            out.push((st, Tok::Ident(b[st..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else if c == '\u{2212}' {
            out.push((i, Tok::Sym('-')));
            i += 1;
        } else {
            return Err(Error::InvalidInput(format!(
                "unexpected character {c:?} at {i}"
            )));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    ring: &'a Arc<Ring>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn err(&self, what: &str) -> Error {
        let at = self
            .toks
            .get(self.pos)
            .map(|t| t.0.to_string())
            .unwrap_or("end".into());
        Error::InvalidInput(format!("expected {what} at {at}"))
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        while let Some(Tok::Sym(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while let Some(Tok::Sym(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let f = self.unary()?;
            if c == '*' {
                acc = &acc * &f;
            } else {
                if !f.is_constant() || f.is_zero() {
                    return Err(Error::InvalidInput(
                        "division by a non-constant or zero".into(),
                    ));
                }
                acc = acc.scale(&f.constant_term().inv());
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        if let Some(Tok::Sym('-')) = self.peek() {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if let Some(Tok::Sym('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| Error::ExponentOverflow)?;
                    if e > u16::MAX as u32 {
                        return Err(Error::ExponentOverflow);
                    }
                    return Ok(base.pow(e));
                }
                _ => return Err(self.err("integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Polynomial::constant(
                    self.ring,
                    self.ring.field.from_bigint(&n),
                ))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match self.ring.var_index(&name) {
                    Some(i) => Ok(Polynomial::var(self.ring, i)),
                    None => Err(Error::InvalidInput(format!("unknown variable {name}"))),
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Sym(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(self.err("')'")),
                }
            }
            _ => Err(self.err("number, variable or '('")),
        }
    }
}

/// Parses an infix polynomial over `ring`.
pub fn parse_poly(ring: &Arc<Ring>, text: &str) -> Result<Polynomial> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, ring };
    let f = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("operator or end of input"));
    }
    Ok(f)
}

/// Parses a comma-separated list of polynomials.
pub fn parse_polys(ring: &Arc<Ring>, text: &str) -> Result<Vec<Polynomial>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|s| parse_poly(ring, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use proptest::prelude::*;

    #[test]
    fn parses_and_prints() {
        let r = Ring::new(Field::Rational, ["x", "y", "z", "w"]);
        let f = parse_poly(&r, "-x^2*w + y*z").unwrap();
        assert_eq!(f.to_string(), "-x^2*w + y*z");
        let g = parse_poly(&r, "(x+y)^2 - 2*x*y + 3/2").unwrap();
        assert_eq!(g.to_string(), "x^2 + y^2 + 3/2");
        assert!(parse_poly(&r, "x +").is_err());
        assert!(parse_poly(&r, "u").is_err());
    }

    proptest! {
        #[test]
        fn text_round_trip(terms in prop::collection::vec((-9i64..9, 1i64..4, 0u32..3, 0u32..3), 0..6)) {
            let r = Ring::new(Field::Rational, ["x", "y"]);
            let mut f = Polynomial::zero(&r);
            for (n, d, a, b) in terms {
                let t = parse_poly(&r, &format!("{n}/{d}*x^{a}*y^{b}")).unwrap();
                f = &f + &t;
            }
            prop_assert_eq!(parse_poly(&r, &f.to_string()).unwrap(), f);
        }
    }
}
