//! Recursive-descent parser for polynomial text.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' integer)?
//! atom   := number | identifier | '(' expr ')'
//! number := digits ('/' digits | '.' digits)?
//! ```

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Coefficient, Polynomial, Rational, RingError, VariableRing};

/// Parses `text` into canonical expanded form over `ring`.
pub fn parse<C: Coefficient>(text: &str, ring: &Arc<VariableRing>) -> Result<Polynomial<C>, RingError> {
    if ring.field() != C::field_kind() {
        return Err(RingError::FieldMismatch {
            ring: ring.field(),
            poly: C::field_kind(),
        });
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ring,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<VariableRing>,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, message: &str) -> RingError {
        RingError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn expr<C: Coefficient>(&mut self) -> Result<Polynomial<C>, RingError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<C: Coefficient>(&mut self) -> Result<Polynomial<C>, RingError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary<C: Coefficient>(&mut self) -> Result<Polynomial<C>, RingError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power<C: Coefficient>(&mut self) -> Result<Polynomial<C>, RingError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected a non-negative integer exponent"));
            }
            let e: u32 = digits.parse().map_err(|_| RingError::Syntax {
                position: start,
                message: "exponent too large".into(),
            })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom<C: Coefficient>(&mut self) -> Result<Polynomial<C>, RingError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let q = self.number()?;
                Ok(Polynomial::constant(self.ring, C::from_rational(&q)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.ring.index_of(name) {
                    Some(i) => Ok(Polynomial::variable(self.ring, i)),
                    None => Err(RingError::UnknownVariable {
                        name: name.to_string(),
                        position: start,
                    }),
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii")
    }

    fn number(&mut self) -> Result<Rational, RingError> {
        let start = self.pos;
        let int_part = self.digits();
        let mut value = if int_part.is_empty() {
            Rational::zero()
        } else {
            Rational::from_integer(int_part.parse::<BigInt>().expect("digits"))
        };
        match self.src.get(self.pos) {
            Some(b'.') => {
                self.pos += 1;
                let frac = self.digits();
                if int_part.is_empty() && frac.is_empty() {
                    return Err(RingError::Syntax {
                        position: start,
                        message: "malformed decimal literal".into(),
                    });
                }
                if !frac.is_empty() {
                    let num: BigInt = frac.parse().expect("digits");
                    let den = num_traits::pow(BigInt::from(10), frac.len());
                    value += Rational::new(num, den);
                }
            }
            Some(b'/') => {
                let slash = self.pos;
                self.pos += 1;
                let den = self.digits();
                if den.is_empty() {
                    return Err(RingError::Syntax {
                        position: slash + 1,
                        message: "expected an integer denominator".into(),
                    });
                }
                let den: BigInt = den.parse().expect("digits");
                if den.is_zero() {
                    return Err(RingError::Syntax {
                        position: slash,
                        message: "zero denominator".into(),
                    });
                }
                value /= Rational::from_integer(den);
            }
            _ => {}
        }
        Ok(value)
    }
}

/// Parses a single rational or decimal literal such as `-3/7` or `2.5`.
pub fn parse_rational(text: &str) -> Result<Rational, RingError> {
    let t = text.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let ring = VariableRing::rational::<&str>(&[])?;
    let mut p = Parser {
        src: body.as_bytes(),
        pos: 0,
        ring: &ring,
    };
    if !matches!(p.peek(), Some(c) if c.is_ascii_digit() || c == b'.') {
        return Err(p.error("expected a number"));
    }
    let v = p.number()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(if neg { -v } else { v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn ring3() -> Arc<VariableRing> {
        VariableRing::rational(&["x1", "x2", "x3"]).unwrap()
    }

    #[test]
    fn sombrilla_expands_to_eight_terms() {
        let f: Polynomial<Rational> = parse("(x1-1)^2-(x2-1)^2*(x3-1)", &ring3()).unwrap();
        assert_eq!(f.num_terms(), 8);
    }

    #[test]
    fn zero_and_cancellation() {
        let r = ring3();
        assert!(parse::<Rational>("0", &r).unwrap().is_zero());
        assert!(parse::<Rational>("x1*x2 - x2*x1", &r).unwrap().is_zero());
    }

    #[test]
    fn literals() {
        let r = ring3();
        let p: Polynomial<Rational> = parse("3/7*x1 + 0.25 - 1.5*x2", &r).unwrap();
        assert_eq!(p.to_string(), "3/7*x1 - 3/2*x2 + 1/4");
        assert_eq!(parse_rational("-3/7").unwrap(), Rational::new((-3).into(), 7.into()));
        assert_eq!(parse_rational("2.5").unwrap(), Rational::new(5.into(), 2.into()));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let r = ring3();
        assert_eq!(
            parse::<Rational>("x1 + z", &r),
            Err(RingError::UnknownVariable {
                name: "z".into(),
                position: 5
            })
        );
        match parse::<Rational>("x1 + * x2", &r) {
            Err(RingError::Syntax { position, .. }) => assert_eq!(position, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse::<Rational>("(x1", &r), Err(RingError::Syntax { .. })));
        assert!(matches!(parse::<Rational>("x1^", &r), Err(RingError::Syntax { .. })));
        assert!(matches!(parse::<Rational>("1/0", &r), Err(RingError::Syntax { .. })));
        assert!(matches!(parse::<Rational>("x1 x2", &r), Err(RingError::Syntax { .. })));
    }

    #[test]
    fn field_must_match() {
        assert!(matches!(
            parse::<Complex64>("x1", &ring3()),
            Err(RingError::FieldMismatch { .. })
        ));
        let rc = VariableRing::complex(&["x"]).unwrap();
        let p: Polynomial<Complex64> = parse("x^2 - 1/2", &rc).unwrap();
        assert_eq!(p.evaluate(&[Complex64::new(1.0, 0.0)]).unwrap(), Complex64::new(0.5, 0.0));
    }

    fn small_poly() -> impl Strategy<Value = Polynomial<Rational>> {
        let term = (
            -20i64..20,
            1i64..5,
            proptest::collection::vec(0u32..3, 3),
        );
        proptest::collection::vec(term, 0..6).prop_map(|terms| {
            let r = ring3();
            Polynomial::from_terms(
                &r,
                terms.into_iter().map(|(n, d, e)| {
                    (super::super::Exponent::new(e), Rational::new(n.into(), d.into()))
                }),
            )
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(p in small_poly()) {
            let back: Polynomial<Rational> = parse(&p.to_string(), &ring3()).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn evaluation_is_multiplicative(a in small_poly(), b in small_poly(),
                                        pt in proptest::collection::vec(-5i64..5, 3)) {
            let pt: Vec<Rational> = pt.into_iter().map(|v| Rational::from_integer(v.into())).collect();
            let lhs = (&a * &b).evaluate(&pt).unwrap();
            prop_assert_eq!(lhs, a.evaluate(&pt).unwrap() * b.evaluate(&pt).unwrap());
        }

        #[test]
        fn product_rule(a in small_poly(), b in small_poly(), v in 0usize..3) {
            let lhs = (&a * &b).partial(v);
            let rhs = &(&a.partial(v) * &b) + &(&a * &b.partial(v));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn float_field_axioms_within_tolerance() {
        use rand::{Rng, SeedableRng};
        let r = VariableRing::complex(&["x", "y"]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let random_poly = |rng: &mut rand_chacha::ChaCha8Rng| {
            let terms: Vec<_> = (0..4)
                .map(|_| {
                    let e = super::super::Exponent::new(vec![rng.gen_range(0..3), rng.gen_range(0..3)]);
                    (e, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                })
                .collect();
            Polynomial::from_terms(&r, terms)
        };
        for _ in 0..20 {
            let a = random_poly(&mut rng);
            let b = random_poly(&mut rng);
            let c = random_poly(&mut rng);
            let pt = [Complex64::new(0.3, -0.7), Complex64::new(-1.1, 0.2)];
            let lhs = (&a * &(&b + &c)).evaluate(&pt).unwrap();
            let rhs = (&(&a * &b) + &(&a * &c)).evaluate(&pt).unwrap();
            assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()));
            let lhs = (&(&a * &b) * &c).evaluate(&pt).unwrap();
            let rhs = (&a * &(&b * &c)).evaluate(&pt).unwrap();
            assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()));
        }
    }
}
