//! Recursive-descent parser for the expression grammar used by the CLI and
//! structure files:
//!
//! ```text
//! expression := term (('+'|'-') term)*
//! term       := factor ('*' factor)*
//! factor     := number | ident ('^' realLiteral)?
//! ```
//!
//! Idents are variable names like `x1` or `xi2` (any `[A-Za-z_][A-Za-z0-9_]*`).
//! Whitespace is insignificant. Errors report the byte offset of the failure.

use super::poly::{GenMonomial, GenPolynomial};
use super::FieldError;

pub fn parse_expr(src: &str) -> Result<GenPolynomial, FieldError> {
    let mut p = Parser {
        bytes: src.as_bytes(),
        pos: 0,
    };
    let poly = p.expression()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> FieldError {
        FieldError::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expression(&mut self) -> Result<GenPolynomial, FieldError> {
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1.0
            }
            Some(b'+') => {
                self.pos += 1;
                1.0
            }
            _ => 1.0,
        };
        let mut acc = GenPolynomial::zero();
        loop {
            let term = self.term()?;
            acc = acc.add(&term.scale(sign));
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1.0;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1.0;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<GenPolynomial, FieldError> {
        let mut coeff = 1.0;
        let mut exponents: Vec<(String, f64)> = Vec::new();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() || c == b'.' => {
                    coeff *= self.number()?;
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let name = self.ident();
                    let exp = if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        let at = self.pos;
                        let e = self.number()?;
                        if e < 0.0 {
                            return Err(FieldError::Parse {
                                offset: at,
                                message: format!("negative exponent {e} not permitted"),
                            });
                        }
                        e
                    } else {
                        1.0
                    };
                    exponents.push((name, exp));
                }
                _ => return Err(self.error("expected a number or variable")),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        let term = GenMonomial::new(coeff, exponents)?;
        Ok(GenPolynomial::from_terms(vec![term]))
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    fn number(&mut self) -> Result<f64, FieldError> {
        self.skip_ws();
        let start = self.pos;
        if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit())
        {
            self.pos += 1;
        }
        if self.bytes.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            while self
                .bytes
                .get(self.pos)
                .is_some_and(|b| b.is_ascii_digit())
            {
                self.pos += 1;
            }
        }
        // Optional exponent part of the literal (e.g. 1e-3).
        if matches!(self.bytes.get(self.pos), Some(b'e') | Some(b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.bytes.get(self.pos), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if self
                .bytes
                .get(self.pos)
                .is_some_and(|b| b.is_ascii_digit())
            {
                while self
                    .bytes
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_digit())
                {
                    self.pos += 1;
                }
            } else {
                // `e` belonged to an identifier context, not this literal.
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice");
        text.parse::<f64>().map_err(|_| FieldError::Parse {
            offset: start,
            message: format!("invalid number `{text}`"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn at(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|(v, x)| (v.to_string(), *x)).collect()
    }

    #[test]
    fn parses_products_and_powers() {
        let p = parse_expr("2*x1^0.5*x2").unwrap();
        let v = p.eval(&at(&[("x1", 4.0), ("x2", 3.0)])).unwrap();
        assert_eq!(v, 12.0);
    }

    #[test]
    fn parses_sums_with_signs() {
        let p = parse_expr(" -x1 + 2*x2 - 0.5 ").unwrap();
        let v = p.eval(&at(&[("x1", 1.0), ("x2", 2.0)])).unwrap();
        assert_eq!(v, 2.5);
    }

    #[test]
    fn parses_xi_variables() {
        let p = parse_expr("x2^0.7*xi2^0.9").unwrap();
        assert!(p.vars().contains("xi2"));
        assert!(p.vars().contains("x2"));
    }

    #[test]
    fn repeated_variables_accumulate() {
        let p = parse_expr("x1*x1").unwrap();
        let q = parse_expr("x1^2").unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn constant_expressions() {
        assert_eq!(parse_expr("5").unwrap(), GenPolynomial::constant(5.0));
        assert_eq!(parse_expr("5*2").unwrap(), GenPolynomial::constant(10.0));
        assert!(parse_expr("0").unwrap().is_zero());
    }

    #[test]
    fn error_offsets() {
        match parse_expr("x1 + ") {
            Err(FieldError::Parse { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_expr("x1^-0.5") {
            Err(FieldError::Parse { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_expr("x1 $ x2") {
            Err(FieldError::Parse { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn display_round_trips_through_parser() {
        let p = parse_expr("1.5045055561273501*x1^1.5 - 2*x2 + 0.25").unwrap();
        let q = parse_expr(&p.to_string()).unwrap();
        assert!(p.approx_eq(&q, 1e-15));
    }
}
