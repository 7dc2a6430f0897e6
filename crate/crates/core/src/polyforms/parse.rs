//! Recursive-descent parser for polynomial strings.
//!
//! ```text
//! expr    := ['-'] term (('+'|'-') term)*
//! term    := factor ('*' factor)*
//! factor  := atom ('^' nat)?
//! atom    := var | literal | '(' expr ')'
//! var     := 'x' nat
//! literal := int | int '/' nat | 'zeta' nat | 'i'
//! ```
//!
//! A leading `-` on an expression is accepted as a convenience.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exactfield::{CycloNumber, Rational};

use super::poly::GradedPolynomial;
use super::PolyError;

pub fn poly_parse(text: &str, nvars: usize) -> Result<GradedPolynomial, PolyError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, nvars };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

/// Smallest variable count that accommodates every `x<k>` in `text`.
pub fn infer_nvars(text: &str) -> usize {
    let b = text.as_bytes();
    let mut max = None;
    let mut i = 0;
    while i < b.len() {
        if b[i] == b'x' && (i == 0 || !b[i - 1].is_ascii_alphanumeric()) {
            let start = i + 1;
            let mut j = start;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            if j > start {
                if let Ok(k) = text[start..j].parse::<usize>() {
                    max = Some(max.map_or(k, |m: usize| m.max(k)));
                }
            }
            i = j;
        } else {
            i += 1;
        }
    }
    max.map_or(0, |m| m + 1)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> PolyError {
        PolyError::Syntax { pos: self.pos, msg: msg.to_string() }
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a natural number"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn small_nat(&mut self) -> Result<u32, PolyError> {
        let at = self.pos;
        let n = self.nat()?;
        u32::try_from(n).map_err(|_| PolyError::Syntax { pos: at, msg: "number too large".into() })
    }

    fn expr(&mut self) -> Result<GradedPolynomial, PolyError> {
        let negate = self.eat(b'-');
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<GradedPolynomial, PolyError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<GradedPolynomial, PolyError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let k = self.small_nat()?;
            Ok(base.pow(k))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<GradedPolynomial, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.nat()?;
                let value = if self.eat(b'/') {
                    let at = self.pos;
                    let den = self.nat()?;
                    if den.is_zero() {
                        return Err(PolyError::Syntax { pos: at, msg: "zero denominator".into() });
                    }
                    Rational::new(num, den)
                } else {
                    Rational::from_integer(num)
                };
                Ok(GradedPolynomial::constant(self.nvars, CycloNumber::from_rational(value)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match word {
                    "x" => {
                        let idx = self.small_nat()? as usize;
                        if idx >= self.nvars {
                            return Err(PolyError::UnknownVariable {
                                name: format!("x{idx}"),
                                pos: start,
                            });
                        }
                        Ok(GradedPolynomial::var(self.nvars, idx))
                    }
                    "zeta" => {
                        let m = self.small_nat()?;
                        let z = CycloNumber::zeta(m).map_err(|e| PolyError::Syntax {
                            pos: start,
                            msg: e.to_string(),
                        })?;
                        Ok(GradedPolynomial::constant(self.nvars, z))
                    }
                    "i" => Ok(GradedPolynomial::constant(self.nvars, CycloNumber::i())),
                    _ => Err(PolyError::UnknownVariable { name: word.to_string(), pos: start }),
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyforms::Monomial;

    #[test]
    fn fermat_cubic() {
        let f = poly_parse("x0^3+x1^3+x2^3+x3^3", 4).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(f.homogeneous_degree(), Ok(Some(3)));
        assert_eq!(f.coefficient(&Monomial(vec![0, 0, 3, 0])), CycloNumber::one());
    }

    #[test]
    fn zero_polynomial() {
        let z = poly_parse("0", 2).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.nvars(), 2);
    }

    #[test]
    fn cyclotomic_expansion() {
        let g = poly_parse("(x0+zeta3*x1)*(x0+zeta3^2*x1)", 2).unwrap();
        assert_eq!(g, poly_parse("x0^2 - x0*x1 + x1^2", 2).unwrap());
    }

    #[test]
    fn literals() {
        let a = poly_parse("3/6*x0", 1).unwrap();
        assert_eq!(a.coefficient(&Monomial(vec![1])), CycloNumber::from_fraction(1, 2));
        let b = poly_parse("i^2", 1).unwrap();
        assert_eq!(b, poly_parse("-1", 1).unwrap());
        assert_eq!(poly_parse("zeta4", 1).unwrap(), poly_parse("i", 1).unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            poly_parse("x0 + y1", 2),
            Err(PolyError::UnknownVariable { name: "y".into(), pos: 5 })
        );
        assert_eq!(
            poly_parse("x0 + x2", 2),
            Err(PolyError::UnknownVariable { name: "x2".into(), pos: 5 })
        );
        assert!(matches!(poly_parse("x0 +", 2), Err(PolyError::Syntax { pos: 4, .. })));
        assert!(matches!(poly_parse("(x0", 2), Err(PolyError::Syntax { .. })));
        assert!(matches!(poly_parse("x0 x1", 2), Err(PolyError::Syntax { pos: 3, .. })));
        assert!(matches!(poly_parse("1/0", 1), Err(PolyError::Syntax { .. })));
    }

    #[test]
    fn nvars_inference() {
        assert_eq!(infer_nvars("x0^3+x1^3+x2^3+x3^3"), 4);
        assert_eq!(infer_nvars("x10 + zeta3"), 11);
        assert_eq!(infer_nvars("5"), 0);
    }
}
