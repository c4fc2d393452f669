//! Expression reader for polynomial vector fields.
//!
//! ```text
//! field  := expr (';' expr)*
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' nat)?
//! atom   := rational | var | '(' expr ')'
//! ```
//!
//! Variables are `x1..xd`, with `x`, `y`, `z` accepted when `d <= 3`.

use num::bigint::BigInt;

use super::poly::Poly;
use crate::error::{Error, Result};
use crate::rational::Rational;

const MAX_EXPONENT: u32 = 256;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    base: usize,
    dim: usize,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.base + self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn expr(&mut self) -> Result<Poly> {
        let negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc = acc.scale(&-Rational::from_integer(1.into()));
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let Some(text) = self.digits() else {
                return self.error("expected a non-negative integer exponent");
            };
            match text.parse::<u32>() {
                Ok(k) if k <= MAX_EXPONENT => return Ok(base.pow(k)),
                _ => return self.error(format!("exponent above {MAX_EXPONENT}")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        let Some(c) = self.peek() else {
            return self.error("unexpected end of input");
        };
        let atom = match c {
            b'(' => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.error("expected ')'");
                }
                self.pos += 1;
                inner
            }
            b'0'..=b'9' => {
                let num = self.digits().unwrap();
                let mut value = Rational::from_integer(num.parse::<BigInt>().unwrap());
                if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    let Some(den) = self.digits() else {
                        return self.error("expected a denominator");
                    };
                    let den: BigInt = den.parse().unwrap();
                    if den == BigInt::from(0) {
                        return self.error("zero denominator");
                    }
                    value /= Rational::from_integer(den);
                }
                Poly::constant(self.dim, value)
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.variable(name) {
                    Some(i) => Poly::var(self.dim, i),
                    None => {
                        self.pos = start;
                        return self.error(format!("unknown variable {name:?}"));
                    }
                }
            }
            other => return self.error(format!("unexpected character {:?}", other as char)),
        };
        // implicit multiplication such as `2x` or `x(y)` is rejected
        if let Some(&next) = self.src.get(self.pos) {
            if next.is_ascii_alphanumeric() || next == b'(' {
                return self.error("implicit multiplication is not allowed");
            }
        }
        Ok(atom)
    }

    fn variable(&self, name: &str) -> Option<usize> {
        if self.dim <= 3 {
            if let Some(i) = ["x", "y", "z"].iter().position(|&v| v == name) {
                return (i < self.dim).then_some(i);
            }
        }
        let index: usize = name.strip_prefix('x')?.parse().ok()?;
        (1..=self.dim).contains(&index).then(|| index - 1)
    }
}

/// Parses one polynomial over `dim` variables.
pub fn parse_poly(text: &str, dim: usize) -> Result<Poly> {
    parse_poly_at(text, dim, 0)
}

fn parse_poly_at(text: &str, dim: usize, base: usize) -> Result<Poly> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        base,
        dim,
    };
    let poly = p.expr()?;
    if p.peek().is_some() {
        return p.error("unexpected trailing input");
    }
    Ok(poly)
}

/// Parses `dim` components separated by `;`.
pub fn parse_components(text: &str, dim: usize) -> Result<Vec<Poly>> {
    if dim == 0 {
        return Err(Error::Parse {
            position: 0,
            message: "dimension must be at least 1".into(),
        });
    }
    let mut comps = Vec::with_capacity(dim);
    let mut base = 0;
    for piece in text.split(';') {
        comps.push(parse_poly_at(piece, dim, base)?);
        base += piece.len() + 1;
    }
    if comps.len() != dim {
        return Err(Error::Parse {
            position: text.len(),
            message: format!("expected {dim} components, found {}", comps.len()),
        });
    }
    Ok(comps)
}

/// Parses a point such as `1, -2/3` (`;` also separates).
pub fn parse_point(text: &str, dim: usize) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    let mut base = 0;
    for piece in text.split([',', ';']) {
        let value = crate::rational::parse(piece).map_err(|_| Error::Parse {
            position: base,
            message: format!("not a rational number: {:?}", piece.trim()),
        })?;
        out.push(value);
        base += piece.len() + 1;
    }
    if out.len() != dim {
        return Err(Error::Parse {
            position: text.len(),
            message: format!("expected {dim} coordinates, found {}", out.len()),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn parses_polynomials() {
        let p = parse_poly("x^2 - 3/2*x*y + (y+1)^2", 2).unwrap();
        assert_eq!(p.coeff(&[2, 0]), int(1));
        assert_eq!(p.coeff(&[1, 1]), frac(-3, 2));
        assert_eq!(p.coeff(&[0, 2]), int(1));
        assert_eq!(p.coeff(&[0, 1]), int(2));
        assert_eq!(p.coeff(&[0, 0]), int(1));
        assert_eq!(parse_poly("x1*x4", 4).unwrap().degree(), Some(2));
    }

    #[test]
    fn display_round_trips() {
        let p = parse_poly("-x^2 + 7/6*x*y^3 - 2", 2).unwrap();
        assert_eq!(parse_poly(&p.to_string(), 2).unwrap(), p);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_poly("2x", 1),
            Err(Error::Parse { position: 1, .. })
        ));
        assert!(matches!(parse_poly("x^-1", 1), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_poly("y", 1),
            Err(Error::Parse { position: 0, .. })
        ));
        assert!(matches!(parse_poly("(x", 1), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("x +", 1), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("1/0", 1), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_components("x; y^2", 2).map(|c| c.len()),
            Ok(2)
        ));
        match parse_components("x; y*", 2) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 5),
            other => panic!("{other:?}"),
        }
        assert!(parse_components("x", 2).is_err());
    }

    #[test]
    fn parses_points() {
        assert_eq!(
            parse_point("1, -2/3", 2).unwrap(),
            vec![int(1), frac(-2, 3)]
        );
        assert!(parse_point("1", 2).is_err());
    }
}
