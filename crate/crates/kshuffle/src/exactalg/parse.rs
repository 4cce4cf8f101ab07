//! Parser for coefficient strings: rationals, symbols, `+ - * / ^`,
//! parentheses, and integer (possibly negative) exponents. The printed
//! form of any [`RatFun`] parses back to the same value.

use super::poly::Sym;
use super::ratfun::RatFun;
use super::ExactAlgError;
use num::BigInt;

pub fn parse_ratfun(input: &str) -> Result<RatFun, ExactAlgError> {
    let mut p = Parser { src: input.as_bytes(), pos: 0 };
    p.skip_ws();
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> ExactAlgError {
        ExactAlgError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFun, ExactAlgError> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            if self.eat(b'+') {
                self.skip_ws();
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                self.skip_ws();
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFun, ExactAlgError> {
        let mut acc = self.unary()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                self.skip_ws();
                acc = acc.mul(&self.unary()?);
            } else if self.eat(b'/') {
                self.skip_ws();
                acc = acc.div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFun, ExactAlgError> {
        self.skip_ws();
        if self.eat(b'-') {
            Ok(self.unary()?.neg())
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<RatFun, ExactAlgError> {
        let base = self.atom()?;
        self.skip_ws();
        if self.eat(b'^') {
            self.skip_ws();
            let exp = self.int_exponent()?;
            base.pow(exp)
        } else {
            Ok(base)
        }
    }

    fn int_exponent(&mut self) -> Result<i64, ExactAlgError> {
        let parenthesized = self.eat(b'(');
        self.skip_ws();
        let neg = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected integer exponent"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let mag: i64 = digits
            .parse()
            .map_err(|_| self.error("exponent out of range"))?;
        if parenthesized {
            self.skip_ws();
            if !self.eat(b')') {
                return Err(self.error("expected ')' after exponent"));
            }
        }
        Ok(if neg { -mag } else { mag })
    }

    fn atom(&mut self) -> Result<RatFun, ExactAlgError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let inner = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(b'0'..=b'9') => {
                let start = self.pos;
                while matches!(self.peek(), Some(b'0'..=b'9')) {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigInt = digits.parse().unwrap();
                Ok(RatFun::from_rational(super::Rational::from(n)))
            }
            Some(c) if c == b'_' || c.is_ascii_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c == b'_' || c.is_ascii_alphanumeric()) {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(RatFun::var(Sym::new(name)))
            }
            _ => Err(self.error("expected number, symbol, or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, ratio};
    use super::*;

    #[test]
    fn precedence_and_unary_minus() {
        assert_eq!(parse_ratfun("1+2*3^2").unwrap(), RatFun::from_int(19));
        let x2 = RatFun::var("x").pow(2).unwrap();
        assert_eq!(parse_ratfun("-x^2").unwrap(), x2.neg());
        assert_eq!(parse_ratfun("2 - -3").unwrap(), RatFun::from_int(5));
    }

    #[test]
    fn rationals_and_negative_exponents() {
        assert_eq!(parse_ratfun("3/2").unwrap(), RatFun::from_rational(ratio(3, 2)));
        assert_eq!(
            parse_ratfun("q/t1/t1").unwrap(),
            RatFun::var("q").div(&RatFun::var("t1").pow(2).unwrap()).unwrap()
        );
        assert_eq!(parse_ratfun("x^-1").unwrap(), RatFun::var_pow("x", -1));
        assert_eq!(parse_ratfun("x^(-1)").unwrap(), RatFun::var_pow("x", -1));
        assert_eq!(parse_ratfun("(1-x)^-2").unwrap(), {
            let f = RatFun::one().sub(&RatFun::var("x"));
            f.pow(-2).unwrap()
        });
    }

    #[test]
    fn parse_errors_carry_position() {
        assert!(parse_ratfun("").is_err());
        assert!(parse_ratfun("q +").is_err());
        assert!(parse_ratfun("(q").is_err());
        assert!(parse_ratfun("q^x").is_err());
        assert!(matches!(
            parse_ratfun("1/(x-x)"),
            Err(ExactAlgError::DivisionByZero)
        ));
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "((3/2)*q^2 - t1^-1)/(1 - x*q)",
            "z_1_1^3*q - 5",
            "1/((1-x)*(1-q*x^2))",
            "-7",
            "0",
        ] {
            let f = parse_ratfun(src).unwrap();
            let printed = f.to_string();
            assert_eq!(parse_ratfun(&printed).unwrap(), f, "round trip of {src}");
        }
        let _ = rat(0);
    }
}
