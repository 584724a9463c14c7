use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{Coefficient, RingError, VariableRing};

/// Exponent vector of a monomial, one entry per ring variable.
///
/// Ordered by graded reverse lexicographic order: higher total degree wins,
/// ties are broken in favour of the smaller exponent in the last variable
/// where the two differ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(powers: Vec<u32>) -> Self {
        Self(powers)
    }

    pub fn zero(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut v = vec![0; nvars];
        v[var] = 1;
        Self(v)
    }

    pub fn powers(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial. Immutable once built; every stored coefficient is
/// nonzero.
#[derive(Clone)]
pub struct Polynomial<C> {
    ring: Arc<VariableRing>,
    terms: BTreeMap<Exponent, C>,
}

impl<C: Coefficient> Polynomial<C> {
    pub fn zero(ring: &Arc<VariableRing>) -> Self {
        Self {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<VariableRing>, c: C) -> Self {
        Self::monomial(ring, Exponent::zero(ring.len()), c)
    }

    pub fn one(ring: &Arc<VariableRing>) -> Self {
        Self::constant(ring, C::one())
    }

    pub fn variable(ring: &Arc<VariableRing>, var: usize) -> Self {
        Self::monomial(ring, Exponent::unit(ring.len(), var), C::one())
    }

    pub fn monomial(ring: &Arc<VariableRing>, exp: Exponent, c: C) -> Self {
        assert_eq!(exp.len(), ring.len(), "exponent length must match the ring");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self {
            ring: ring.clone(),
            terms,
        }
    }

    /// Sums the given terms, merging repeated exponents.
    pub fn from_terms<I>(ring: &Arc<VariableRing>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, C)>,
    {
        let mut map: BTreeMap<Exponent, C> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), ring.len(), "exponent length must match the ring");
            accumulate(&mut map, e, c);
        }
        Self {
            ring: ring.clone(),
            terms: map,
        }
    }

    pub fn ring(&self) -> &Arc<VariableRing> {
        &self.ring
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms from the leading (largest in grevlex) down.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &C)> + ExactSizeIterator {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, exp: &Exponent) -> C {
        self.terms.get(exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn leading_term(&self) -> Option<(&Exponent, &C)> {
        self.terms.iter().next_back()
    }

    /// Constant term, or `None` for a nonconstant polynomial.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.is_constant().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Exponent::degree).max()
    }

    /// Total degree in the variables whose index lies in `vars`.
    pub fn degree_in(&self, vars: std::ops::Range<usize>) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e.powers()[vars.clone()].iter().sum())
            .max()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, RingError> {
        self.check_ring(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            accumulate(&mut terms, e.clone(), c.clone());
        }
        Ok(self.with_terms(terms))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.check_ring(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            accumulate(&mut terms, e.clone(), -c.clone());
        }
        Ok(self.with_terms(terms))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, RingError> {
        self.check_ring(other)?;
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                accumulate(&mut terms, ea.mul(eb), ca.clone() * cb.clone());
            }
        }
        Ok(self.with_terms(terms))
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, v)| (e.clone(), v.clone() * c.clone()))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        self.with_terms(terms)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn partial(&self, var: usize) -> Self {
        assert!(var < self.ring.len(), "variable index out of range");
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let p = e.powers()[var];
            if p == 0 {
                continue;
            }
            let mut powers = e.powers().to_vec();
            powers[var] -= 1;
            accumulate(&mut terms, Exponent::new(powers), c.clone() * C::from_i64(p as i64));
        }
        self.with_terms(terms)
    }

    pub fn evaluate(&self, point: &[C]) -> Result<C, RingError> {
        if point.len() != self.ring.len() {
            return Err(RingError::LengthMismatch {
                expected: self.ring.len(),
                got: point.len(),
            });
        }
        let mut acc = C::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (x, &p) in point.iter().zip(e.powers()) {
                for _ in 0..p {
                    v = v * x.clone();
                }
            }
            acc = acc + v;
        }
        Ok(acc)
    }

    /// Moves the polynomial into `ring`, sending variable `i` to `map[i]`.
    pub fn remap(&self, ring: &Arc<VariableRing>, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.ring.len(), "map must cover every variable");
        let terms = self.terms.iter().map(|(e, c)| {
            let mut powers = vec![0; ring.len()];
            for (i, &p) in e.powers().iter().enumerate() {
                powers[map[i]] += p;
            }
            (Exponent::new(powers), c.clone())
        });
        Polynomial::from_terms(ring, terms)
    }

    /// Substitutes `images[i]` for variable `i`. All images must share a ring,
    /// which becomes the ring of the result.
    pub fn compose(&self, images: &[Polynomial<C>]) -> Self {
        assert_eq!(images.len(), self.ring.len(), "one image per variable");
        assert!(!images.is_empty(), "compose needs at least one image");
        let target = images[0].ring.clone();
        let mut powers: Vec<Vec<Polynomial<C>>> = images.iter().map(|g| vec![Polynomial::one(&target), g.clone()]).collect();
        let mut acc = Polynomial::zero(&target);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(&target, c.clone());
            for (v, &p) in e.powers().iter().enumerate() {
                if p == 0 {
                    continue;
                }
                while powers[v].len() <= p as usize {
                    let next = &powers[v][powers[v].len() - 1] * &images[v];
                    powers[v].push(next);
                }
                term = &term * &powers[v][p as usize];
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Substitutes values for the trailing variables `keep..` and returns
    /// the result over `ring`, whose variables are the first `keep` ones.
    pub fn substitute_tail(&self, ring: &Arc<VariableRing>, tail: &[C]) -> Self {
        let keep = ring.len();
        assert_eq!(keep + tail.len(), self.ring.len(), "tail length mismatch");
        let terms = self.terms.iter().map(|(e, c)| {
            let mut v = c.clone();
            for (x, &p) in tail.iter().zip(&e.powers()[keep..]) {
                for _ in 0..p {
                    v = v * x.clone();
                }
            }
            (Exponent::new(e.powers()[..keep].to_vec()), v)
        });
        Polynomial::from_terms(ring, terms)
    }

    /// Converts coefficients into another field over a ring with the same
    /// variable names.
    pub fn map_coefficients<D: Coefficient>(
        &self,
        ring: &Arc<VariableRing>,
        f: impl Fn(&C) -> D,
    ) -> Polynomial<D> {
        assert_eq!(ring.len(), self.ring.len());
        Polynomial::from_terms(ring, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    fn with_terms(&self, terms: BTreeMap<Exponent, C>) -> Self {
        Self {
            ring: self.ring.clone(),
            terms,
        }
    }

    fn check_ring(&self, other: &Self) -> Result<(), RingError> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(RingError::RingMismatch)
        }
    }
}

fn accumulate<C: Coefficient>(map: &mut BTreeMap<Exponent, C>, e: Exponent, c: C) {
    if c.is_zero() {
        return;
    }
    match map.entry(e) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = o.get().clone() + c;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

impl<C: Coefficient> PartialEq for Polynomial<C> {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other) && self.terms == other.terms
    }
}

impl<C: Coefficient> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl<C: Coefficient> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let (neg, mag) = if c.is_negative() {
                (true, -c.clone())
            } else {
                (false, c.clone())
            };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if e.is_constant() || !mag.is_one() {
                factors.push(mag.render());
            }
            for (name, &p) in self.ring.names().iter().zip(e.powers()) {
                match p {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{p}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl<C: Coefficient> $tr for &Polynomial<C> {
            type Output = Polynomial<C>;
            fn $method(self, rhs: Self) -> Polynomial<C> {
                self.$try(rhs).expect("polynomials from different rings")
            }
        }

        impl<C: Coefficient> $tr for Polynomial<C> {
            type Output = Polynomial<C>;
            fn $method(self, rhs: Self) -> Polynomial<C> {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<C: Coefficient> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        self.scale(&-C::one())
    }
}

impl<C: Coefficient> Neg for Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse, Rational, VariableRing};
    use num_traits::Zero;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn ring3() -> Arc<VariableRing> {
        VariableRing::rational(&["x1", "x2", "x3"]).unwrap()
    }

    #[test]
    fn grevlex_ordering() {
        // x1 > x2 > x3 and x2^2 > x1*x3 in grevlex
        let e = |v: &[u32]| Exponent::new(v.to_vec());
        assert!(e(&[1, 0, 0]) > e(&[0, 1, 0]));
        assert!(e(&[0, 1, 0]) > e(&[0, 0, 1]));
        assert!(e(&[0, 2, 0]) > e(&[1, 0, 1]));
        assert!(e(&[0, 0, 2]) > e(&[1, 0, 0]));
    }

    #[test]
    fn difference_of_squares() {
        let r = VariableRing::rational(&["x"]).unwrap();
        let x = Polynomial::<Rational>::variable(&r, 0);
        let one = Polynomial::one(&r);
        let p = &(&x + &one) * &(&x - &one);
        assert_eq!(p, parse("x^2 - 1", &r).unwrap());
    }

    #[test]
    fn additive_identity() {
        let r = ring3();
        let p: Polynomial<Rational> = parse("3*x1^2*x3 - x2 + 7/2", &r).unwrap();
        assert_eq!(&p + &Polynomial::zero(&r), p);
    }

    #[test]
    fn square_of_binomial() {
        let r = VariableRing::rational(&["x", "y"]).unwrap();
        let s: Polynomial<Rational> = parse("x+y", &r).unwrap();
        assert_eq!(&s * &s, parse("x^2 + 2*x*y + y^2", &r).unwrap());
        assert_eq!(s.pow(2), &s * &s);
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = Polynomial::<Rational>::variable(&ring3(), 0);
        let other = VariableRing::rational(&["x1", "x2"]).unwrap();
        let b = Polynomial::<Rational>::variable(&other, 0);
        assert_eq!(a.try_add(&b), Err(RingError::RingMismatch));
        assert_eq!(a.try_mul(&b), Err(RingError::RingMismatch));
    }

    #[test]
    fn partial_derivatives() {
        let r = ring3();
        let p: Polynomial<Rational> = parse("(x1-1)^2", &r).unwrap();
        assert_eq!(p.partial(0), parse("2*x1 - 2", &r).unwrap());
        let p: Polynomial<Rational> = parse("(x2-1)^2*(x3-1)", &r).unwrap();
        assert_eq!(p.partial(2), parse("(x2-1)^2", &r).unwrap());
        let c: Polynomial<Rational> = parse("17/3", &r).unwrap();
        assert!(c.partial(1).is_zero());
    }

    #[test]
    fn sombrilla_evaluations() {
        let r = ring3();
        let f: Polynomial<Rational> = parse("(x1-1)^2-(x2-1)^2*(x3-1)", &r).unwrap();
        assert!(f.evaluate(&[q(1), q(1), q(1)]).unwrap().is_zero());
        assert_eq!(f.evaluate(&[q(3), q(2), q(1)]).unwrap(), q(4));
        assert_eq!(f.evaluate(&[q(0), q(0), q(0)]).unwrap(), q(2));
        assert_eq!(
            f.evaluate(&[q(1)]),
            Err(RingError::LengthMismatch { expected: 3, got: 1 })
        );
    }

    #[test]
    fn display_is_canonical() {
        let r = ring3();
        let f: Polynomial<Rational> = parse("(x1-1)^2-(x2-1)^2*(x3-1)", &r).unwrap();
        assert_eq!(f.num_terms(), 8);
        assert_eq!(
            f.to_string(),
            "-x2^2*x3 + x1^2 + x2^2 + 2*x2*x3 - 2*x1 - 2*x2 - x3 + 2"
        );
    }

    #[test]
    fn substitute_tail_and_remap() {
        let r = ring3();
        let f: Polynomial<Rational> = parse("x1*x3 + x2*x3^2", &r).unwrap();
        let r2 = VariableRing::rational(&["x1", "x2"]).unwrap();
        let g = f.substitute_tail(&r2, &[q(2)]);
        assert_eq!(g, parse("2*x1 + 4*x2", &r2).unwrap());
        let r4 = VariableRing::rational(&["t", "x1", "x2", "x3"]).unwrap();
        let h = f.remap(&r4, &[1, 2, 3]);
        assert_eq!(h, parse("x1*x3 + x2*x3^2", &r4).unwrap());
    }
}
