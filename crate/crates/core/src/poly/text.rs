//! Polynomial text format.
//!
//! ```text
//! poly        := term (("+" | "-") term)*      with an optional leading sign
//! term        := coefficient ["*"] monomial | coefficient | monomial
//! coefficient := integer ["/" integer]
//! monomial    := factor ("*" factor)*
//! factor      := "x" index ["^" integer]
//! ```
//!
//! Whitespace (including newlines) is ignored between tokens. Output lists terms in
//! decreasing graded-lex order, so `parse(format(p)) == p`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{Field, Scalar};
use crate::error::{Error, Result};

use super::multipoly::{Monomial, MultiPoly};

struct Parser {
    chars: Vec<(char, usize, usize)>,
    pos: usize,
    nvars: Option<usize>,
}

struct RawTerm {
    coeff: BigRational,
    factors: Vec<(usize, u32)>,
}

impl Parser {
    fn new(src: &str, nvars: Option<usize>) -> Self {
        let mut chars = Vec::new();
        let (mut line, mut col) = (1, 1);
        for c in src.chars() {
            chars.push((c, line, col));
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        Parser {
            chars,
            pos: 0,
            nvars,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].0.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.0)
    }

    fn location(&self) -> (usize, usize) {
        match self.chars.get(self.pos) {
            Some(&(_, l, c)) => (l, c),
            None => match self.chars.last() {
                Some(&('\n', l, _)) => (l + 1, 1),
                Some(&(_, l, c)) => (l, c + 1),
                None => (1, 1),
            },
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (line, column) = self.location();
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].0.is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().map(|c| c.0).collect())
    }

    fn integer(&mut self, what: &str) -> Result<BigInt> {
        let d = self.digits().ok_or_else(|| self.error(format!("expected {what}")))?;
        Ok(d.parse().expect("ascii digits"))
    }

    fn small_integer(&mut self, what: &str) -> Result<u32> {
        let d = self.digits().ok_or_else(|| self.error(format!("expected {what}")))?;
        d.parse().map_err(|_| self.error(format!("{what} too large")))
    }

    fn coefficient(&mut self) -> Result<BigRational> {
        let num = self.integer("coefficient")?;
        if self.peek() == Some('/') {
            self.pos += 1;
            let den = self.integer("denominator")?;
            if den.is_zero() {
                return Err(self.error("zero denominator"));
            }
            return Ok(BigRational::new(num, den));
        }
        Ok(BigRational::from_integer(num))
    }

    fn factor(&mut self) -> Result<(usize, u32)> {
        self.skip_ws();
        let (line, column) = self.location();
        let start = self.pos;
        while self.pos < self.chars.len() && (self.chars[self.pos].0.is_alphanumeric() || self.chars[self.pos].0 == '_') {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a variable"));
        }
        let name: String = self.chars[start..self.pos].iter().map(|c| c.0).collect();
        let index = name
            .strip_prefix('x')
            .filter(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
            .and_then(|rest| rest.parse::<usize>().ok());
        let index = match (index, self.nvars) {
            (Some(i), Some(n)) if i >= n => None,
            (i, _) => i,
        };
        let Some(index) = index else {
            return Err(Error::UnknownVariable { name, line, column });
        };
        let mut exp = 1;
        if self.peek() == Some('^') {
            self.pos += 1;
            exp = self.small_integer("exponent")?;
        }
        Ok((index, exp))
    }

    fn monomial(&mut self, factors: &mut Vec<(usize, u32)>) -> Result<()> {
        factors.push(self.factor()?);
        while self.peek() == Some('*') {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Ok(())
    }

    fn term(&mut self) -> Result<RawTerm> {
        let mut coeff = BigRational::one();
        let mut factors = Vec::new();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                coeff = self.coefficient()?;
                match self.peek() {
                    Some('*') => {
                        self.pos += 1;
                        self.monomial(&mut factors)?;
                    }
                    Some(c) if c.is_alphabetic() => self.monomial(&mut factors)?,
                    _ => {}
                }
            }
            Some(c) if c.is_alphabetic() => self.monomial(&mut factors)?,
            Some(_) => return Err(self.error("expected a coefficient or a variable")),
            None => return Err(self.error("unexpected end of input")),
        }
        Ok(RawTerm { coeff, factors })
    }

    fn poly(&mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        let mut negative = false;
        match self.peek() {
            Some('-') => {
                negative = true;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        loop {
            let mut t = self.term()?;
            if negative {
                t.coeff = -t.coeff;
            }
            terms.push(t);
            match self.peek() {
                Some('+') => negative = false,
                Some('-') => negative = true,
                None => break,
                Some(c) => return Err(self.error(format!("unexpected character `{c}`"))),
            }
            self.pos += 1;
        }
        Ok(terms)
    }
}

fn build(terms: Vec<RawTerm>, nvars: Option<usize>) -> MultiPoly {
    let n = nvars.unwrap_or_else(|| {
        terms
            .iter()
            .flat_map(|t| t.factors.iter().map(|f| f.0 + 1))
            .max()
            .unwrap_or(0)
    });
    let mut p = MultiPoly::zero(Field::Rational, n);
    for t in terms {
        let mut e = vec![0u32; n];
        for (i, k) in t.factors {
            e[i] += k;
        }
        p.add_term(Monomial::new(e), Scalar::Rational(t.coeff));
    }
    p
}

/// Parses a rational polynomial; the variable count is one more than the largest index used.
pub fn parse_poly(text: &str) -> Result<MultiPoly> {
    let terms = Parser::new(text, None).poly()?;
    Ok(build(terms, None))
}

/// Parses a rational polynomial in exactly `nvars` variables.
pub fn parse_poly_with_nvars(text: &str, nvars: usize) -> Result<MultiPoly> {
    let terms = Parser::new(text, Some(nvars)).poly()?;
    Ok(build(terms, Some(nvars)))
}

fn format_monomial(m: &Monomial) -> String {
    m.exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// Canonical text of a polynomial: terms in decreasing graded-lex order.
pub fn format_poly(p: &MultiPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms_desc().enumerate() {
        let negative = c.is_negative();
        let magnitude = if negative { -c } else { c.clone() };
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mono = format_monomial(m);
        match (mono.is_empty(), magnitude.is_one()) {
            (true, _) => out.push_str(&magnitude.to_string()),
            (false, true) => out.push_str(&mono),
            (false, false) => {
                out.push_str(&magnitude.to_string());
                out.push('*');
                out.push_str(&mono);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_simple_text() {
        let src = "x0^2*x1 - 3*x2^3";
        let p = parse_poly(src).unwrap();
        assert_eq!(p.nvars(), 3);
        // graded-lex puts x0^2*x1 above x2^3
        assert_eq!(format_poly(&p), src);
    }

    #[test]
    fn rational_coefficient() {
        let p = parse_poly("2/3*x0*x1").unwrap();
        assert_eq!(p.coeff(&[1, 1]), Scalar::rational(2, 3).unwrap());
        assert_eq!(format_poly(&p), "2/3*x0*x1");
    }

    #[test]
    fn whitespace_constants_and_implicit_star() {
        let p = parse_poly(" -  x1\n + 4 x0*x0 + 7 ").unwrap();
        assert_eq!(p.coeff(&[2, 0]), Field::Rational.from_i64(4));
        assert_eq!(p.coeff(&[0, 0]), Field::Rational.from_i64(7));
        assert_eq!(format_poly(&p), "4*x0^2 - x1 + 7");
        assert!(parse_poly("0").unwrap().is_zero());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_poly("x0 +\n  * x1") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        match parse_poly("x0 + y") {
            Err(Error::UnknownVariable { name, line, column }) => {
                assert_eq!((name.as_str(), line, column), ("y", 1, 6))
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_poly_with_nvars("x3", 3), Err(Error::UnknownVariable { .. })));
        assert!(matches!(parse_poly("1/0*x0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x0 x1"), Err(Error::Syntax { .. })));
    }
}
