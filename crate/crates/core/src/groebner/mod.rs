//! Exact ideal computations over the rationals.
//!
//! [`buchberger`] computes reduced Gröbner bases with the sugar pair
//! strategy and the Gebauer–Möller installation of Buchberger's coprime and
//! chain criteria. Elimination, saturation and intersection are built on top
//! of it with auxiliary variables and block orders.

mod buchberger;
mod ipoly;

use std::cmp::Ordering;
use std::sync::Arc;

use num_rational::BigRational;
use thiserror::Error;

use crate::ring::{Exponent, FieldKind, Polynomial, Rational, VariableRing};

pub use buchberger::buchberger;
use ipoly::{IPoly, Mono};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("Groebner computations need an exact rational ring")]
    NotRational,
    #[error("generators come from different rings")]
    RingMismatch,
    #[error("empty generator list")]
    EmptyInput,
    #[error("ideal is not zero-dimensional (dimension {0})")]
    NotZeroDimensional(usize),
    #[error("cannot saturate by the zero polynomial")]
    ZeroSaturator,
    #[error("post-hoc S-pair check failed on a basis with {0} elements")]
    SelfCheckFailed(usize),
}

/// Monomial order used by a Gröbner basis computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    /// Grevlex on the first `n` variables, ties broken by grevlex on the
    /// rest. Eliminates the first `n` variables.
    Block(usize),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match *self {
            MonomialOrder::Grevlex => grevlex(a, b),
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Block(k) => grevlex(&a[..k], &b[..k]).then_with(|| grevlex(&a[k..], &b[k..])),
        }
    }
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

/// Limits that turn runaway computations into errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GbConfig {
    pub max_basis: usize,
    pub max_degree: u32,
    /// When nonzero, every basis with at most this many elements is checked
    /// post hoc: all S-polynomials must reduce to zero.
    pub self_check_up_to: usize,
}

impl Default for GbConfig {
    fn default() -> Self {
        Self {
            max_basis: 20_000,
            max_degree: 60,
            self_check_up_to: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ring: Arc<VariableRing>,
    order: MonomialOrder,
    generators: Vec<Polynomial<Rational>>,
    reduced: bool,
    internal: Vec<IPoly>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<VariableRing> {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    /// Monic generators, sorted by increasing leading monomial.
    pub fn generators(&self) -> &[Polynomial<Rational>] {
        &self.generators
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// True for the unit ideal.
    pub fn is_unit(&self) -> bool {
        self.internal.iter().any(|g| g.lm().deg == 0)
    }

    pub fn leading_exponents(&self) -> Vec<Vec<u32>> {
        self.internal.iter().map(|g| g.lm().exps.to_vec()).collect()
    }

    /// Remainder of multivariate division by the basis; zero exactly when
    /// `p` lies in the ideal.
    pub fn normal_form(&self, p: &Polynomial<Rational>) -> Polynomial<Rational> {
        assert!(p.same_ring_as(&self.ring), "normal form across rings");
        let (ip, s0) = to_ipoly(p, &self.order);
        if ip.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let basis: Vec<&IPoly> = self.internal.iter().collect();
        let (r, s) = ipoly::reduce(&ip, &basis, &self.order);
        let total = s * s0;
        Polynomial::from_terms(
            &self.ring,
            r.terms
                .iter()
                .map(|(m, c)| (Exponent::new(m.exps.to_vec()), BigRational::from_integer(c.clone()) / &total)),
        )
    }

    pub fn contains(&self, p: &Polynomial<Rational>) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Krull dimension of the ideal: the size of a largest set of variables
    /// containing the support of no leading monomial. `None` for the unit
    /// ideal.
    pub fn dimension(&self) -> Option<usize> {
        if self.is_unit() {
            return None;
        }
        let n = self.ring.len();
        assert!(n < 32, "dimension search supports fewer than 32 variables");
        let supports: Vec<u32> = self
            .internal
            .iter()
            .map(|g| {
                g.lm()
                    .exps
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .fold(0u32, |m, (i, _)| m | (1 << i))
            })
            .collect();
        let mut best = 0;
        for subset in 0u32..(1u32 << n) {
            let size = subset.count_ones() as usize;
            if size > best && supports.iter().all(|&s| s & !subset != 0) {
                best = size;
            }
        }
        Some(best)
    }

    /// Number of standard monomials, i.e. the length of the quotient as a
    /// vector space. Zero for the unit ideal.
    pub fn zero_dim_degree(&self) -> Result<usize, GroebnerError> {
        match self.dimension() {
            None => return Ok(0),
            Some(0) => {}
            Some(d) => return Err(GroebnerError::NotZeroDimensional(d)),
        }
        let n = self.ring.len();
        let lms: Vec<&Mono> = self.internal.iter().map(|g| g.lm()).collect();
        let mut bounds = vec![0u32; n];
        for (i, b) in bounds.iter_mut().enumerate() {
            *b = lms
                .iter()
                .filter(|m| m.exps.iter().enumerate().all(|(j, &e)| (j == i) == (e > 0)))
                .map(|m| m.exps[i])
                .min()
                .expect("zero-dimensional ideals have a pure power for every variable");
        }
        let mut count = 0usize;
        let mut exps = vec![0u32; n];
        count_standard(&lms, &bounds, &mut exps, 0, &mut count);
        Ok(count)
    }

    /// Checks that every S-polynomial of the basis reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        buchberger::all_spolys_reduce(&self.internal, &self.order)
    }
}

fn count_standard(lms: &[&Mono], bounds: &[u32], exps: &mut Vec<u32>, var: usize, count: &mut usize) {
    if var == exps.len() {
        let m = Mono::new(exps.clone());
        if !lms.iter().any(|l| l.divides(&m)) {
            *count += 1;
        }
        return;
    }
    for e in 0..bounds[var] {
        exps[var] = e;
        // prune: if the partial monomial is already in the leading ideal
        let partial = Mono::new(exps.clone());
        if lms.iter().any(|l| l.divides(&partial)) {
            break;
        }
        count_standard(lms, bounds, exps, var + 1, count);
    }
    exps[var] = 0;
}

trait SameRing {
    fn same_ring_as(&self, ring: &Arc<VariableRing>) -> bool;
}

impl SameRing for Polynomial<Rational> {
    fn same_ring_as(&self, ring: &Arc<VariableRing>) -> bool {
        Arc::ptr_eq(self.ring(), ring) || **self.ring() == **ring
    }
}

pub(crate) fn to_ipoly(p: &Polynomial<Rational>, order: &MonomialOrder) -> (IPoly, BigRational) {
    IPoly::from_rational_terms(p.terms().map(|(e, c)| (e.powers().to_vec(), c.clone())), order)
}

fn check_inputs(gens: &[Polynomial<Rational>]) -> Result<Arc<VariableRing>, GroebnerError> {
    let first = gens.first().ok_or(GroebnerError::EmptyInput)?;
    if first.ring().field() != FieldKind::Rational {
        return Err(GroebnerError::NotRational);
    }
    if gens.iter().any(|g| !g.same_ring(first)) {
        return Err(GroebnerError::RingMismatch);
    }
    Ok(first.ring().clone())
}

/// Generators of the elimination ideal `I ∩ Q[x_{count+1}, ...]`, returned
/// over the original ring.
pub fn eliminate(
    gens: &[Polynomial<Rational>],
    count: usize,
    cfg: &GbConfig,
) -> Result<Vec<Polynomial<Rational>>, GroebnerError> {
    let ring = check_inputs(gens)?;
    assert!(count <= ring.len(), "cannot eliminate more variables than the ring has");
    let gb = buchberger(gens, MonomialOrder::Block(count), cfg)?;
    let mut kept: Vec<Polynomial<Rational>> = gb
        .generators
        .into_iter()
        .filter(|g| g.terms().all(|(e, _)| e.powers()[..count].iter().all(|&p| p == 0)))
        .collect();
    sort_grevlex(&mut kept);
    Ok(kept)
}

fn sort_grevlex(polys: &mut [Polynomial<Rational>]) {
    polys.sort_by(|a, b| match (a.leading_term(), b.leading_term()) {
        (Some((ea, _)), Some((eb, _))) => ea.cmp(eb),
        _ => Ordering::Equal,
    });
}

/// Ring with `extra` fresh variables placed in front, plus the embedding of
/// the old variables.
fn prepend_variables(ring: &Arc<VariableRing>, bases: &[&str]) -> (Arc<VariableRing>, Vec<usize>) {
    let mut names: Vec<String> = Vec::new();
    for base in bases {
        let mut candidate = ring.fresh_name(base);
        while names.contains(&candidate) {
            candidate.push('_');
        }
        names.push(candidate);
    }
    names.extend(ring.names().iter().cloned());
    let extended = VariableRing::new(&names, FieldKind::Rational).expect("fresh names are valid");
    let map = (bases.len()..bases.len() + ring.len()).collect();
    (extended, map)
}

fn drop_prefix(p: &Polynomial<Rational>, count: usize, ring: &Arc<VariableRing>) -> Polynomial<Rational> {
    Polynomial::from_terms(
        ring,
        p.terms().map(|(e, c)| {
            debug_assert!(e.powers()[..count].iter().all(|&x| x == 0));
            (Exponent::new(e.powers()[count..].to_vec()), c.clone())
        }),
    )
}

/// `I : g^∞` via a Rabinowitsch variable `t` with `t*g - 1` and elimination
/// of `t`.
pub fn saturate_by_poly(
    gens: &[Polynomial<Rational>],
    g: &Polynomial<Rational>,
    cfg: &GbConfig,
) -> Result<Vec<Polynomial<Rational>>, GroebnerError> {
    let ring = check_inputs(gens)?;
    if !g.same_ring(&gens[0]) {
        return Err(GroebnerError::RingMismatch);
    }
    if g.is_zero() {
        return Err(GroebnerError::ZeroSaturator);
    }
    let (ext, map) = prepend_variables(&ring, &["t"]);
    let t = Polynomial::<Rational>::variable(&ext, 0);
    let mut lifted: Vec<Polynomial<Rational>> = gens.iter().map(|p| p.remap(&ext, &map)).collect();
    lifted.push(&(&t * &g.remap(&ext, &map)) - &Polynomial::one(&ext));
    let elim = eliminate(&lifted, 1, cfg)?;
    Ok(elim.iter().map(|p| drop_prefix(p, 1, &ring)).collect())
}

/// Length of the quotient by `I : g^∞` when that saturation is
/// zero-dimensional, read off `(I, t*g - 1)` in grevlex without eliminating
/// `t`: every point off `V(g)` has the single lift `t = 1/g`, and the local
/// rings agree.
pub fn localized_degree(
    gens: &[Polynomial<Rational>],
    g: &Polynomial<Rational>,
    cfg: &GbConfig,
) -> Result<usize, GroebnerError> {
    let ring = check_inputs(gens)?;
    if !g.same_ring(&gens[0]) {
        return Err(GroebnerError::RingMismatch);
    }
    if g.is_zero() {
        return Err(GroebnerError::ZeroSaturator);
    }
    let (ext, map) = prepend_variables(&ring, &["t"]);
    let t = Polynomial::<Rational>::variable(&ext, 0);
    let mut lifted: Vec<Polynomial<Rational>> = gens.iter().map(|p| p.remap(&ext, &map)).collect();
    lifted.push(&(&t * &g.remap(&ext, &map)) - &Polynomial::one(&ext));
    buchberger(&lifted, MonomialOrder::Grevlex, cfg)?.zero_dim_degree()
}

/// `I ∩ J` as the elimination of `t` from `t*I + (1-t)*J`.
pub fn intersect(
    a: &[Polynomial<Rational>],
    b: &[Polynomial<Rational>],
    cfg: &GbConfig,
) -> Result<Vec<Polynomial<Rational>>, GroebnerError> {
    let ring = check_inputs(a)?;
    check_inputs(b)?;
    if !a[0].same_ring(&b[0]) {
        return Err(GroebnerError::RingMismatch);
    }
    let (ext, map) = prepend_variables(&ring, &["t"]);
    let t = Polynomial::<Rational>::variable(&ext, 0);
    let one_minus_t = &Polynomial::one(&ext) - &t;
    let mut lifted: Vec<Polynomial<Rational>> = a.iter().map(|p| &t * &p.remap(&ext, &map)).collect();
    lifted.extend(b.iter().map(|p| &one_minus_t * &p.remap(&ext, &map)));
    let elim = eliminate(&lifted, 1, cfg)?;
    Ok(elim.iter().map(|p| drop_prefix(p, 1, &ring)).collect())
}

/// `I : J^∞`, the intersection of `I : g^∞` over the generators `g` of `J`.
pub fn saturate_by_ideal(
    gens: &[Polynomial<Rational>],
    j: &[Polynomial<Rational>],
    cfg: &GbConfig,
) -> Result<Vec<Polynomial<Rational>>, GroebnerError> {
    check_inputs(gens)?;
    let j: Vec<&Polynomial<Rational>> = j.iter().filter(|g| !g.is_zero()).collect();
    if j.is_empty() {
        return Err(GroebnerError::EmptyInput);
    }
    let mut acc = saturate_by_poly(gens, j[0], cfg)?;
    for g in &j[1..] {
        let next = saturate_by_poly(gens, g, cfg)?;
        acc = match (acc.is_empty(), next.is_empty()) {
            // the zero ideal absorbs intersections
            (true, _) | (_, true) => Vec::new(),
            _ => intersect(&acc, &next, cfg)?,
        };
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse;

    fn polys(ring: &Arc<VariableRing>, src: &[&str]) -> Vec<Polynomial<Rational>> {
        src.iter().map(|s| parse(s, ring).unwrap()).collect()
    }

    fn same_ideal(a: &[Polynomial<Rational>], b: &[Polynomial<Rational>]) -> bool {
        let cfg = GbConfig::default();
        let ga = buchberger(a, MonomialOrder::Grevlex, &cfg).unwrap();
        let gb = buchberger(b, MonomialOrder::Grevlex, &cfg).unwrap();
        b.iter().all(|p| ga.contains(p)) && a.iter().all(|p| gb.contains(p))
    }

    #[test]
    fn orders() {
        let o = MonomialOrder::Block(1);
        // t * 1 beats any monomial free of t
        assert_eq!(o.cmp(&[1, 0, 0], &[0, 5, 5]), Ordering::Greater);
        assert_eq!(o.cmp(&[0, 2, 0], &[0, 1, 1]), Ordering::Greater);
        assert_eq!(MonomialOrder::Lex.cmp(&[1, 0], &[0, 9]), Ordering::Greater);
        assert_eq!(MonomialOrder::Grevlex.cmp(&[1, 0], &[0, 9]), Ordering::Less);
    }

    #[test]
    fn small_bases() {
        let cfg = GbConfig::default();
        let r = VariableRing::rational(&["x"]).unwrap();
        let gb = buchberger(&polys(&r, &["x^2-1", "x-1"]), MonomialOrder::Lex, &cfg).unwrap();
        assert_eq!(gb.generators(), polys(&r, &["x-1"]).as_slice());
        assert!(gb.is_reduced());

        let r2 = VariableRing::rational(&["x", "y"]).unwrap();
        for order in [MonomialOrder::Lex, MonomialOrder::Grevlex] {
            let gb = buchberger(&polys(&r2, &["x", "y"]), order, &cfg).unwrap();
            let mut got: Vec<String> = gb.generators().iter().map(|p| p.to_string()).collect();
            got.sort();
            assert_eq!(got, ["x", "y"]);
        }

        let gb = buchberger(&polys(&r2, &["0"]), MonomialOrder::Grevlex, &cfg).unwrap();
        assert!(gb.is_empty());
        assert_eq!(gb.dimension(), Some(2));
        assert_eq!(
            buchberger(&[], MonomialOrder::Grevlex, &cfg).unwrap_err(),
            GroebnerError::EmptyInput
        );
    }

    #[test]
    fn normal_forms() {
        let cfg = GbConfig::default();
        let r = VariableRing::rational(&["x", "y"]).unwrap();
        let gb = buchberger(&polys(&r, &["x-1"]), MonomialOrder::Grevlex, &cfg).unwrap();
        assert!(gb.normal_form(&parse("x^2-1", &r).unwrap()).is_zero());
        let gbx = buchberger(&polys(&r, &["x"]), MonomialOrder::Grevlex, &cfg).unwrap();
        let y: Polynomial<Rational> = parse("y", &r).unwrap();
        assert_eq!(gbx.normal_form(&y), y);
        // rational remainder is exact, not just up to scale
        let gb = buchberger(&polys(&r, &["2*x - 1"]), MonomialOrder::Lex, &cfg).unwrap();
        assert_eq!(gb.normal_form(&parse("3*x^2 + 1", &r).unwrap()), parse("7/4", &r).unwrap());

        let gens = polys(&r, &["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"]);
        let gb = buchberger(&gens, MonomialOrder::Grevlex, &cfg).unwrap();
        assert!(gens.iter().all(|g| gb.contains(g)));
        assert!(gb.satisfies_buchberger_criterion());
    }

    #[test]
    fn elimination() {
        let cfg = GbConfig::default();
        let r = VariableRing::rational(&["t", "x"]).unwrap();
        let e = eliminate(&polys(&r, &["t*x-1", "x-2"]), 1, &cfg).unwrap();
        assert_eq!(e, polys(&r, &["x-2"]));

        let r = VariableRing::rational(&["x", "y"]).unwrap();
        assert!(eliminate(&polys(&r, &["x-y"]), 1, &cfg).unwrap().is_empty());
        assert_eq!(eliminate(&polys(&r, &["x-y", "y-1"]), 1, &cfg).unwrap(), polys(&r, &["y-1"]));
    }

    #[test]
    fn saturation_by_polynomial() {
        let cfg = GbConfig::default();
        let r = VariableRing::rational(&["x", "y"]).unwrap();
        let s = saturate_by_poly(&polys(&r, &["x^2*y"]), &parse("y", &r).unwrap(), &cfg).unwrap();
        assert!(same_ideal(&s, &polys(&r, &["x^2"])));

        let s = saturate_by_poly(&polys(&r, &["x"]), &parse("1", &r).unwrap(), &cfg).unwrap();
        assert!(same_ideal(&s, &polys(&r, &["x"])));

        // x^2 * 1 lies in I, so the saturation is the unit ideal; the
        // one-step quotient I : x is (x, y)
        let i = polys(&r, &["x*y", "x^2"]);
        let s = saturate_by_poly(&i, &parse("x", &r).unwrap(), &cfg).unwrap();
        assert_eq!(s, polys(&r, &["1"]));
        let gi = buchberger(&i, MonomialOrder::Grevlex, &cfg).unwrap();
        let x: Polynomial<Rational> = parse("x", &r).unwrap();
        for q in polys(&r, &["x", "y"]) {
            assert!(gi.contains(&(&q * &x)));
        }
    }

    #[test]
    fn localized_degree_matches_saturation() {
        let cfg = GbConfig::default();
        let r = VariableRing::rational(&["x", "y"]).unwrap();
        // the line y = 0 lies inside V(y); only (0, 1) survives
        let i = polys(&r, &["x*y", "y^2 - y"]);
        let y: Polynomial<Rational> = parse("y", &r).unwrap();
        assert_eq!(localized_degree(&i, &y, &cfg).unwrap(), 1);
        let s = saturate_by_poly(&i, &y, &cfg).unwrap();
        assert_eq!(buchberger(&s, MonomialOrder::Grevlex, &cfg).unwrap().zero_dim_degree().unwrap(), 1);

        // a double point off V(x) keeps its length
        let i = polys(&r, &["x*(x-1)^2", "y"]);
        let x: Polynomial<Rational> = parse("x", &r).unwrap();
        assert_eq!(localized_degree(&i, &x, &cfg).unwrap(), 2);
        assert_eq!(localized_degree(&polys(&r, &["x^2", "y"]), &x, &cfg).unwrap(), 0);
    }

    #[test]
    fn saturation_by_ideal() {
        let cfg = GbConfig::default();
        let r = VariableRing::rational(&["x", "y"]).unwrap();
        let i = polys(&r, &["x^2*y"]);
        let g: Polynomial<Rational> = parse("y", &r).unwrap();
        assert_eq!(
            saturate_by_ideal(&i, std::slice::from_ref(&g), &cfg).unwrap(),
            saturate_by_poly(&i, &g, &cfg).unwrap()
        );
        let s = saturate_by_ideal(&polys(&r, &["x*y"]), &polys(&r, &["x", "y"]), &cfg).unwrap();
        assert!(same_ideal(&s, &polys(&r, &["x*y"])));
        let s = saturate_by_ideal(&polys(&r, &["x^2", "x*y"]), &polys(&r, &["x"]), &cfg).unwrap();
        assert_eq!(s, polys(&r, &["1"]));
    }

    #[test]
    fn intersections() {
        let cfg = GbConfig::default();
        let r = VariableRing::rational(&["x", "y"]).unwrap();
        let i = intersect(&polys(&r, &["x"]), &polys(&r, &["y"]), &cfg).unwrap();
        assert_eq!(i, polys(&r, &["x*y"]));
    }

    #[test]
    fn dimensions_and_degrees() {
        let cfg = GbConfig::default();
        let r3 = VariableRing::rational(&["x1", "x2", "x3"]).unwrap();
        let f = polys(&r3, &["(x1-1)^2-(x2-1)^2*(x3-1)"]);
        assert_eq!(buchberger(&f, MonomialOrder::Grevlex, &cfg).unwrap().dimension(), Some(2));

        let r = VariableRing::rational(&["x", "y"]).unwrap();
        let gb = buchberger(&polys(&r, &["x", "y"]), MonomialOrder::Grevlex, &cfg).unwrap();
        assert_eq!(gb.dimension(), Some(0));
        assert_eq!(gb.zero_dim_degree().unwrap(), 1);

        let gb = buchberger(&polys(&r, &["x^2-1", "y^3-1"]), MonomialOrder::Grevlex, &cfg).unwrap();
        assert_eq!(gb.zero_dim_degree().unwrap(), 6);

        let r1 = VariableRing::rational(&["x"]).unwrap();
        let gb = buchberger(&polys(&r1, &["x^2"]), MonomialOrder::Grevlex, &cfg).unwrap();
        assert_eq!(gb.zero_dim_degree().unwrap(), 2);

        let gb = buchberger(&polys(&r, &["x*y"]), MonomialOrder::Grevlex, &cfg).unwrap();
        assert_eq!(gb.zero_dim_degree(), Err(GroebnerError::NotZeroDimensional(1)));

        let gb = buchberger(&polys(&r, &["x", "x-1"]), MonomialOrder::Grevlex, &cfg).unwrap();
        assert!(gb.is_unit());
        assert_eq!(gb.dimension(), None);
        assert_eq!(gb.zero_dim_degree().unwrap(), 0);
    }

    #[test]
    fn caps_are_reported() {
        let cfg = GbConfig {
            max_basis: 2,
            ..GbConfig::default()
        };
        let r = VariableRing::rational(&["x", "y", "z"]).unwrap();
        let gens = polys(&r, &["x^2 + y*z - 1", "y^2 - x*z", "z^3 - x*y + 2"]);
        assert!(matches!(
            buchberger(&gens, MonomialOrder::Grevlex, &cfg),
            Err(GroebnerError::ResourceCap(_))
        ));
        let cfg = GbConfig {
            max_degree: 2,
            ..GbConfig::default()
        };
        assert!(matches!(
            buchberger(&gens, MonomialOrder::Lex, &cfg),
            Err(GroebnerError::ResourceCap(_))
        ));
    }
}
