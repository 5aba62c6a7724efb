//! Recursive-descent parser for the text syntax printed by `DistExpr`.
//!
//! ```text
//! expr   := sign? term (sign term)*
//! sign   := '+' | '-'
//! term   := number ('*' atom)? | atom
//! number := digits ('/' digits)?
//! atom   := 'tplus^-' digits | 'tminus^-' digits
//!         | 'theta' ('(-t)')? | 'delta' ('^(' digits ')')?
//!         | 't' ('^' digits)?
//! ```
//!
//! Whitespace between tokens is ignored. A bare number is a multiple of t^0.

use num_rational::Rational64;
use num_traits::One;

use super::{Atom, DistError, DistExpr};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DistError> {
        Err(DistError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), DistError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected '{s}'"))
        }
    }

    fn digits(&mut self) -> Result<u32, DistError> {
        self.skip_ws();
        let n = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if n == 0 {
            return self.err("expected digits");
        }
        let v = self.rest()[..n].parse().or_else(|_| self.err("integer out of range"))?;
        self.pos += n;
        Ok(v)
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let n = self.rest().bytes().take_while(u8::is_ascii_alphabetic).count();
        let w = &self.rest()[..n];
        self.pos += n;
        w
    }

    fn number(&mut self) -> Result<Rational64, DistError> {
        let num = self.digits()? as i64;
        if self.eat("/") {
            let den = self.digits()? as i64;
            if den == 0 {
                return self.err("zero denominator");
            }
            return Ok(Rational64::new(num, den));
        }
        Ok(Rational64::from_integer(num))
    }

    fn atom(&mut self) -> Result<Atom, DistError> {
        let start = self.pos;
        let atom = match self.word() {
            "tplus" => {
                self.expect("^-")?;
                Atom::FpPlus(self.positive()?)
            }
            "tminus" => {
                self.expect("^-")?;
                Atom::FpMinus(self.positive()?)
            }
            "theta" => {
                if self.eat("(-t)") {
                    Atom::ThetaMinus
                } else {
                    Atom::ThetaPlus
                }
            }
            "delta" => {
                if self.eat("^(") {
                    let k = self.digits()?;
                    self.expect(")")?;
                    Atom::Delta(k)
                } else {
                    Atom::Delta(0)
                }
            }
            "t" => {
                if self.eat("^") {
                    Atom::Mono(self.digits()?)
                } else {
                    Atom::Mono(1)
                }
            }
            "" => return self.err("expected a term"),
            w => {
                self.pos = start;
                return self.err(format!("unknown atom '{w}'"));
            }
        };
        Ok(atom)
    }

    fn positive(&mut self) -> Result<u32, DistError> {
        match self.digits()? {
            0 => self.err("finite-part order must be at least 1"),
            k => Ok(k),
        }
    }

    fn term(&mut self) -> Result<(Rational64, Atom), DistError> {
        self.skip_ws();
        if self.rest().starts_with(|c: char| c.is_ascii_digit()) {
            let c = self.number()?;
            if self.eat("*") {
                return Ok((c, self.atom()?));
            }
            return Ok((c, Atom::Mono(0)));
        }
        Ok((Rational64::one(), self.atom()?))
    }

    fn sign(&mut self) -> Option<i64> {
        if self.eat("+") {
            Some(1)
        } else if self.eat("-") {
            Some(-1)
        } else {
            None
        }
    }

    fn expr(&mut self) -> Result<DistExpr, DistError> {
        let mut terms = Vec::new();
        let mut sign = self.sign().unwrap_or(1);
        loop {
            let (c, a) = self.term()?;
            terms.push((c * sign, a));
            match self.sign() {
                Some(s) => sign = s,
                None => break,
            }
        }
        self.skip_ws();
        if !self.rest().is_empty() {
            return self.err("trailing input");
        }
        Ok(DistExpr::from_terms(terms))
    }
}

/// Parses an expression such as `3/2*tplus^-1 - delta^(2) + theta - 1`.
pub fn parse(src: &str) -> Result<DistExpr, DistError> {
    Parser { src, pos: 0 }.expr()
}
