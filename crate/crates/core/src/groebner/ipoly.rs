//! Integer-coefficient polynomials sorted by a monomial order, used inside
//! the Buchberger loop. Coefficients are kept primitive (content 1) so
//! rational blowup never enters the basis.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::MonomialOrder;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Mono {
    pub exps: Box<[u32]>,
    pub deg: u32,
    /// Bit i set when variable i (mod 64) occurs.
    pub mask: u64,
}

impl Mono {
    pub fn new(exps: Vec<u32>) -> Self {
        let deg = exps.iter().sum();
        let mask = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |m, (i, _)| m | (1u64 << (i % 64)));
        Self {
            exps: exps.into_boxed_slice(),
            deg,
            mask,
        }
    }

    #[inline]
    pub fn divides(&self, other: &Mono) -> bool {
        self.mask & !other.mask == 0
            && self.deg <= other.deg
            && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono {
            exps: self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect(),
            deg: self.deg + other.deg,
            mask: self.mask | other.mask,
        }
    }

    /// self / other, assuming divisibility.
    pub fn div(&self, other: &Mono) -> Mono {
        Mono::new(self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        Mono::new(
            self.exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Mono) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Terms ascending in the order; the leading term is last.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct IPoly {
    pub terms: Vec<(Mono, BigInt)>,
}

impl IPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> &(Mono, BigInt) {
        self.terms.last().expect("leading term of zero polynomial")
    }

    pub fn lm(&self) -> &Mono {
        &self.lead().0
    }

    pub fn lc(&self) -> &BigInt {
        &self.lead().1
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.deg).max().unwrap_or(0)
    }

    /// Builds from rational terms in any order, clearing denominators.
    /// Returns the primitive polynomial and the positive rational `s` with
    /// `primitive = s * input`.
    pub fn from_rational_terms(
        terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>,
        order: &MonomialOrder,
    ) -> (Self, BigRational) {
        let terms: Vec<(Vec<u32>, BigRational)> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let den = terms
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut out: Vec<(Mono, BigInt)> = terms
            .into_iter()
            .map(|(e, c)| {
                let v = c.numer() * (&den / c.denom());
                (Mono::new(e), v)
            })
            .collect();
        out.sort_by(|a, b| order.cmp(&a.0.exps, &b.0.exps));
        let mut p = IPoly { terms: out };
        let content = p.make_primitive();
        (p, BigRational::new(den, content))
    }

    /// Divides by the content (and fixes the sign so the leading coefficient
    /// is positive); returns the signed divisor.
    pub fn make_primitive(&mut self) -> BigInt {
        if self.terms.is_empty() {
            return BigInt::one();
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if self.lc().sign() == Sign::Minus {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in &mut self.terms {
                *c /= &g;
            }
        }
        g
    }

    /// `a * self - b * m * g` where the monomial order is multiplicative, so
    /// `m * g` stays sorted.
    pub fn combine(&self, a: &BigInt, b: &BigInt, m: &Mono, g: &IPoly, order: &MonomialOrder) -> IPoly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut i = 0;
        let mut j = 0;
        let lhs = &self.terms;
        let rhs = &g.terms;
        let a_one = a.is_one();
        let mut shifted: Option<Mono> = rhs.first().map(|t| t.0.mul(m));
        while i < lhs.len() || j < rhs.len() {
            let ord = match (lhs.get(i), &shifted) {
                (Some(l), Some(s)) => order.cmp(&l.0.exps, &s.exps),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => unreachable!(),
            };
            match ord {
                Ordering::Less => {
                    let (mono, c) = &lhs[i];
                    out.push((mono.clone(), if a_one { c.clone() } else { c * a }));
                    i += 1;
                }
                Ordering::Greater => {
                    let s = shifted.take().unwrap();
                    out.push((s, -(b * &rhs[j].1)));
                    j += 1;
                    shifted = rhs.get(j).map(|t| t.0.mul(m));
                }
                Ordering::Equal => {
                    let s = shifted.take().unwrap();
                    let v = if a_one { lhs[i].1.clone() } else { &lhs[i].1 * a } - b * &rhs[j].1;
                    if !v.is_zero() {
                        out.push((s, v));
                    }
                    i += 1;
                    j += 1;
                    shifted = rhs.get(j).map(|t| t.0.mul(m));
                }
            }
        }
        IPoly { terms: out }
    }

    pub fn to_rational_monic(&self) -> Vec<(Vec<u32>, BigRational)> {
        let lc = self.lc().clone();
        self.terms
            .iter()
            .map(|(m, c)| (m.exps.to_vec(), BigRational::new(c.clone(), lc.clone())))
            .collect()
    }
}

/// Fully reduces `p` modulo the polynomials in `basis`.
///
/// Returns the remainder `r` together with the rational factor `s` such that
/// `r = s * (p - combination of basis)`; callers that only care about the
/// ideal can ignore `s`.
pub(crate) fn reduce(p: &IPoly, basis: &[&IPoly], order: &MonomialOrder) -> (IPoly, BigRational) {
    let mut cur = p.clone();
    let mut rem: Vec<(Mono, BigInt)> = Vec::new();
    let mut scale = BigRational::one();
    let mut steps = 0usize;
    while let Some((m, c)) = cur.terms.last() {
        let divisor = basis.iter().find(|g| g.lm().divides(m));
        match divisor {
            Some(g) => {
                let q = m.div(g.lm());
                let gcd = c.gcd(g.lc());
                let a = g.lc() / &gcd;
                let b = c / &gcd;
                let mut next = cur.combine(&a, &b, &q, g, order);
                // the leading terms cancel exactly
                debug_assert!(next.terms.last().is_none_or(|t| order.cmp(&t.0.exps, &m.exps) == Ordering::Less));
                if next.terms.last().is_some_and(|t| t.0 == *m) {
                    next.terms.pop();
                }
                cur = next;
                if !a.is_one() {
                    for (_, rc) in &mut rem {
                        *rc *= &a;
                    }
                    scale *= BigRational::from_integer(a);
                }
                steps += 1;
                if steps % 8 == 0 {
                    let g = content_of(&cur, &rem);
                    if !g.is_one() && !g.is_zero() {
                        for (_, x) in cur.terms.iter_mut().chain(rem.iter_mut()) {
                            *x /= &g;
                        }
                        scale /= BigRational::from_integer(g);
                    }
                }
            }
            None => {
                rem.push(cur.terms.pop().unwrap());
            }
        }
    }
    rem.reverse();
    let mut out = IPoly { terms: rem };
    let g = out.make_primitive();
    scale /= BigRational::from_integer(g);
    (out, scale)
}

fn content_of(a: &IPoly, rem: &[(Mono, BigInt)]) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in a.terms.iter().chain(rem.iter()) {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(terms: &[(&[u32], i64)], order: &MonomialOrder) -> IPoly {
        let mut t: Vec<(Mono, BigInt)> = terms
            .iter()
            .map(|(e, c)| (Mono::new(e.to_vec()), BigInt::from(*c)))
            .collect();
        t.sort_by(|a, b| order.cmp(&a.0.exps, &b.0.exps));
        IPoly { terms: t }
    }

    #[test]
    fn monomial_arithmetic() {
        let a = Mono::new(vec![2, 0, 1]);
        let b = Mono::new(vec![1, 1, 0]);
        assert_eq!(a.lcm(&b).exps.as_ref(), &[2, 1, 1]);
        assert!(b.divides(&a.lcm(&b)));
        assert!(!b.divides(&a));
        assert!(!a.coprime(&b));
        assert!(Mono::new(vec![0, 0, 3]).coprime(&b));
        assert_eq!(a.mul(&b).div(&b), a);
    }

    #[test]
    fn reduction_tracks_scale() {
        let o = MonomialOrder::Lex;
        // p = 3x^2 + 1, g = 2x - 1: remainder 3/4 + 1 = 7/4
        let p = ip(&[(&[2], 3), (&[0], 1)], &o);
        let g = ip(&[(&[1], 2), (&[0], -1)], &o);
        let (r, s) = reduce(&p, &[&g], &o);
        assert_eq!(r.terms.len(), 1);
        let value = BigRational::from_integer(r.terms[0].1.clone()) / s;
        assert_eq!(value, BigRational::new(7.into(), 4.into()));
    }
}
