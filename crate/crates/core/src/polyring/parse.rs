//! Polynomial expression parser.
//!
//! ```text
//! expr   := [ "+" | "-" ] term { ( "+" | "-" ) term }
//! term   := factor { "*" factor }
//! factor := atom [ "^" uint ]
//! atom   := number | ident | "(" expr ")"
//! number := digits [ "/" digits ]
//! ident  := ( letter | "_" ) { letter | digit | "_" }
//! ```
//!
//! Whitespace is ignored between tokens. Juxtaposition (`2x`, `x y`) is a
//! syntax error. The expression is evaluated exactly in the target field and
//! must come out homogeneous.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::ParseError;
use crate::field::Field;

use super::monomial::Monomial;
use super::poly::HomogPoly;

/// Largest exponent accepted after `^`.
const MAX_POWER: u32 = 1000;

type Raw<E> = BTreeMap<Monomial, E>;

struct Parser<'a, F: Field> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    field: &'a F,
    vars: &'a [String],
}

/// Parse `text` over `field` with the given variable names.
pub fn parse_poly_with<F: Field>(text: &str, field: &F, vars: &[String]) -> Result<HomogPoly<F>, ParseError> {
    let mut p = Parser { src: text, bytes: text.as_bytes(), pos: 0, field, vars };
    p.skip_ws();
    if p.pos == p.bytes.len() {
        return Err(ParseError::Syntax { pos: p.pos, msg: "empty expression".into() });
    }
    let raw = p.expr()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(p.unexpected());
    }
    HomogPoly::try_from_terms(field.clone(), vars.len(), raw)
        .map_err(|(first, second)| ParseError::Inhomogeneous { first, second })
}

impl<'a, F: Field> Parser<'a, F> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn unexpected(&self) -> ParseError {
        match self.src[self.pos..].chars().next() {
            Some(c) => ParseError::Syntax { pos: self.pos, msg: format!("unexpected `{c}`") },
            None => ParseError::Syntax { pos: self.pos, msg: "unexpected end of input".into() },
        }
    }

    fn one(&self) -> Raw<F::Elem> {
        let mut r = Raw::new();
        r.insert(Monomial::one(self.vars.len()), self.field.one());
        r
    }

    fn add_into(&self, acc: &mut Raw<F::Elem>, other: Raw<F::Elem>, negate: bool) {
        for (m, c) in other {
            let c = if negate { self.field.neg(&c) } else { c };
            let v = match acc.get(&m) {
                Some(old) => self.field.add(old, &c),
                None => c,
            };
            if self.field.is_zero(&v) {
                acc.remove(&m);
            } else {
                acc.insert(m, v);
            }
        }
    }

    fn mul(&self, a: &Raw<F::Elem>, b: &Raw<F::Elem>) -> Raw<F::Elem> {
        let mut out = Raw::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                let mut t = Raw::new();
                t.insert(ma.mul(mb), self.field.mul(ca, cb));
                self.add_into(&mut out, t, false);
            }
        }
        out
    }

    fn expr(&mut self) -> Result<Raw<F::Elem>, ParseError> {
        let mut negate = false;
        match self.peek() {
            Some(b'+') => self.pos += 1,
            Some(b'-') => {
                self.pos += 1;
                negate = true;
            }
            _ => {}
        }
        let mut acc = Raw::new();
        let t = self.term()?;
        self.add_into(&mut acc, t, negate);
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    self.add_into(&mut acc, t, false);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    self.add_into(&mut acc, t, true);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Raw<F::Elem>, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = self.mul(&acc, &f);
        }
        match self.peek() {
            Some(c) if c.is_ascii_alphanumeric() || c == b'_' || c == b'(' => Err(ParseError::Syntax {
                pos: self.pos,
                msg: "missing operator (juxtaposition is not allowed; write `*`)".into(),
            }),
            _ => Ok(acc),
        }
    }

    fn factor(&mut self) -> Result<Raw<F::Elem>, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(ParseError::Syntax { pos: start, msg: "expected a non-negative integer exponent".into() });
            }
            let k: u32 = digits
                .parse()
                .ok()
                .filter(|&k| k <= MAX_POWER)
                .ok_or_else(|| ParseError::Syntax { pos: start, msg: format!("exponent exceeds {MAX_POWER}") })?;
            let mut acc = self.one();
            for _ in 0..k {
                acc = self.mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<Raw<F::Elem>, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(ParseError::Syntax { pos: self.pos, msg: "expected `)`".into() });
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            _ => Err(self.unexpected()),
        }
    }

    fn number(&mut self) -> Result<Raw<F::Elem>, ParseError> {
        let start = self.pos;
        let num: BigInt = self.digits().parse().expect("digits");
        let mut den = BigInt::from(1);
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let dstart = self.pos;
            let d = self.digits();
            if d.is_empty() {
                return Err(ParseError::Syntax { pos: dstart, msg: "expected a denominator".into() });
            }
            den = d.parse().expect("digits");
            if den.is_zero() {
                return Err(ParseError::Syntax { pos: dstart, msg: "zero denominator".into() });
            }
        }
        let q = BigRational::new(num, den);
        let c = self
            .field
            .from_rational(&q)
            .ok_or(ParseError::Coefficient { pos: start, p: self.field.spec().characteristic() })?;
        let mut r = Raw::new();
        if !self.field.is_zero(&c) {
            r.insert(Monomial::one(self.vars.len()), c);
        }
        Ok(r)
    }

    fn ident(&mut self) -> Result<Raw<F::Elem>, ParseError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = &self.src[start..self.pos];
        let i = self
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| ParseError::UnknownVariable { name: name.to_string(), pos: start })?;
        let mut r = Raw::new();
        r.insert(Monomial::var(self.vars.len(), i), self.field.one());
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn fermat_and_quadric() {
        let vars = names(&["x", "y", "z", "w"]);
        let f = parse_poly_with("x^3+y^3+z^3+w^3", &Rationals, &vars).unwrap();
        assert_eq!((f.len(), f.degree()), (4, Some(3)));
        let g = parse_poly_with("x*w - y*z", &Rationals, &vars).unwrap();
        assert_eq!((g.len(), g.degree()), (2, Some(2)));
    }

    #[test]
    fn errors() {
        let vars = names(&["x", "y"]);
        assert_eq!(
            parse_poly_with("x^2 + y", &Rationals, &vars).unwrap_err(),
            ParseError::Inhomogeneous { first: 2, second: 1 }
        );
        assert!(matches!(
            parse_poly_with("x + q", &Rationals, &vars).unwrap_err(),
            ParseError::UnknownVariable { pos: 4, .. }
        ));
        assert!(matches!(parse_poly_with("2x", &Rationals, &vars).unwrap_err(), ParseError::Syntax { pos: 1, .. }));
        assert!(matches!(parse_poly_with("x + ", &Rationals, &vars).unwrap_err(), ParseError::Syntax { .. }));
        assert!(matches!(parse_poly_with("(x + y", &Rationals, &vars).unwrap_err(), ParseError::Syntax { .. }));
        let f5 = PrimeField::new(5).unwrap();
        assert!(matches!(parse_poly_with("1/5*x", &f5, &vars).unwrap_err(), ParseError::Coefficient { pos: 0, p: 5 }));
    }

    #[test]
    fn rational_and_nested() {
        let vars = names(&["x", "y"]);
        let f = parse_poly_with("-(x - 1/2*y)^2 + x*y", &Rationals, &vars).unwrap();
        let g = parse_poly_with("-x^2 + 2*x*y - 1/4*y^2", &Rationals, &vars).unwrap();
        assert_eq!(f, g);
        assert_eq!(f.display_with(&vars), "-x^2 + 2*x*y - 1/4*y^2");
    }
}
