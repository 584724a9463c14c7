use num_integer::Integer;
use num_rational::BigRational;

use super::ipoly::{reduce, IPoly, Mono};
use super::{check_inputs, to_ipoly, GbConfig, GroebnerBasis, GroebnerError, MonomialOrder};
use crate::ring::{Exponent, Polynomial, Rational, VariableRing};

struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    sugar: u32,
}

struct State<'a> {
    order: &'a MonomialOrder,
    cfg: &'a GbConfig,
    polys: Vec<IPoly>,
    sugar: Vec<u32>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
///
/// Zero generators are dropped; an all-zero input yields the empty basis of
/// the zero ideal.
pub fn buchberger(
    gens: &[Polynomial<Rational>],
    order: MonomialOrder,
    cfg: &GbConfig,
) -> Result<GroebnerBasis, GroebnerError> {
    let ring = check_inputs(gens)?;
    let mut st = State {
        order: &order,
        cfg,
        polys: Vec::new(),
        sugar: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };

    let mut inputs: Vec<IPoly> = gens
        .iter()
        .map(|g| to_ipoly(g, &order).0)
        .filter(|p| !p.is_zero())
        .collect();
    inputs.sort_by(|a, b| order.cmp(&a.lm().exps, &b.lm().exps));
    for p in inputs {
        let active: Vec<&IPoly> = st.active_polys();
        let (h, _) = reduce(&p, &active, &order);
        if !h.is_zero() {
            let s = h.total_degree();
            st.insert(h, s)?;
        }
    }

    while let Some(pair) = st.pop_pair() {
        let s = spoly(&st.polys[pair.i], &st.polys[pair.j], &pair.lcm, &order);
        if s.is_zero() {
            continue;
        }
        let active = st.active_polys();
        let (h, _) = reduce(&s, &active, &order);
        if !h.is_zero() {
            if h.lm().deg == 0 {
                // unit ideal
                st.polys.clear();
                st.active.clear();
                st.sugar.clear();
                st.pairs.clear();
                st.insert(h, 0)?;
                break;
            }
            st.insert(h, pair.sugar)?;
            st.tail_reduce_by_last();
        }
    }

    let basis = interreduce(&st, &order);
    let out = finish(ring, order, basis);
    if cfg.self_check_up_to > 0 && out.len() <= cfg.self_check_up_to && !out.satisfies_buchberger_criterion() {
        return Err(GroebnerError::SelfCheckFailed(out.len()));
    }
    Ok(out)
}

impl State<'_> {
    fn active_polys(&self) -> Vec<&IPoly> {
        self.polys
            .iter()
            .zip(&self.active)
            .filter(|(_, &a)| a)
            .map(|(p, _)| p)
            .collect()
    }

    /// Keeps the active elements tail-reduced against the newest one, which
    /// holds coefficient growth in check. Leading monomials are unchanged.
    fn tail_reduce_by_last(&mut self) {
        let last = self.polys.len() - 1;
        let lm = self.polys[last].lm().clone();
        for g in 0..last {
            if !self.active[g] || !self.polys[g].terms.iter().any(|(m, _)| lm.divides(m)) {
                continue;
            }
            let others: Vec<&IPoly> = (0..self.polys.len())
                .filter(|&o| o != g && self.active[o])
                .map(|o| &self.polys[o])
                .collect();
            let (r, _) = reduce(&self.polys[g], &others, self.order);
            self.polys[g] = r;
        }
    }

    fn pop_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let order = self.order;
        let best = (0..self.pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
                pa.sugar
                    .cmp(&pb.sugar)
                    .then_with(|| order.cmp(&pa.lcm.exps, &pb.lcm.exps))
            })
            .unwrap();
        Some(self.pairs.swap_remove(best))
    }

    /// Adds `h` and updates the pair set with the Gebauer–Möller criteria.
    fn insert(&mut self, h: IPoly, sugar: u32) -> Result<(), GroebnerError> {
        if self.polys.len() >= self.cfg.max_basis {
            return Err(GroebnerError::ResourceCap(format!(
                "basis exceeded {} elements",
                self.cfg.max_basis
            )));
        }
        let deg = h.total_degree();
        if deg > self.cfg.max_degree {
            return Err(GroebnerError::ResourceCap(format!(
                "basis element of degree {deg} exceeds the cap {}",
                self.cfg.max_degree
            )));
        }
        let hi = self.polys.len();
        let hlm = h.lm().clone();

        let mut candidates: Vec<(usize, Mono, bool)> = (0..hi)
            .filter(|&g| self.active[g])
            .map(|g| {
                let glm = self.polys[g].lm();
                (g, hlm.lcm(glm), hlm.coprime(glm))
            })
            .collect();

        // chain criterion among the new pairs
        let mut kept: Vec<(usize, Mono, bool)> = Vec::new();
        while let Some((g, lcm, coprime)) = candidates.pop() {
            let dominated = candidates
                .iter()
                .chain(kept.iter())
                .any(|(_, other, _)| other.divides(&lcm));
            if coprime || !dominated {
                kept.push((g, lcm, coprime));
            }
        }

        // old pairs whose lcm is strictly divisible through h
        let polys = &self.polys;
        self.pairs.retain(|p| {
            if !hlm.divides(&p.lcm) {
                return true;
            }
            let l1 = hlm.lcm(polys[p.i].lm());
            let l2 = hlm.lcm(polys[p.j].lm());
            l1 == p.lcm || l2 == p.lcm
        });

        for (g, lcm, coprime) in kept {
            if coprime {
                continue;
            }
            let glm = self.polys[g].lm();
            let s = (self.sugar[g] + lcm.deg - glm.deg).max(sugar + lcm.deg - hlm.deg);
            self.pairs.push(Pair {
                i: g,
                j: hi,
                lcm,
                sugar: s,
            });
        }

        for g in 0..hi {
            if self.active[g] && hlm.divides(self.polys[g].lm()) {
                self.active[g] = false;
            }
        }
        self.polys.push(h);
        self.sugar.push(sugar);
        self.active.push(true);
        Ok(())
    }
}

fn spoly(f: &IPoly, g: &IPoly, lcm: &Mono, order: &MonomialOrder) -> IPoly {
    let gcd = f.lc().gcd(g.lc());
    let a = g.lc() / &gcd;
    let b = f.lc() / &gcd;
    let mf = lcm.div(f.lm());
    let mg = lcm.div(g.lm());
    let fm = IPoly {
        terms: f.terms.iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect(),
    };
    let mut s = fm.combine(&a, &b, &mg, g, order);
    if s.terms.last().is_some_and(|t| t.0 == *lcm) {
        s.terms.pop();
    }
    s
}

fn interreduce(st: &State<'_>, order: &MonomialOrder) -> Vec<IPoly> {
    let mut minimal: Vec<IPoly> = st
        .polys
        .iter()
        .zip(&st.active)
        .filter(|(_, &a)| a)
        .map(|(p, _)| p.clone())
        .collect();
    minimal.sort_by(|a, b| order.cmp(&a.lm().exps, &b.lm().exps));
    let mut keep = vec![true; minimal.len()];
    for i in 0..minimal.len() {
        for j in 0..minimal.len() {
            if i != j && keep[j] && minimal[j].lm().divides(minimal[i].lm()) && (j < i || minimal[j].lm() != minimal[i].lm()) {
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<IPoly> = minimal
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(p, _)| p)
        .collect();

    let mut out = Vec::with_capacity(minimal.len());
    for (i, p) in minimal.iter().enumerate() {
        let others: Vec<&IPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, q)| q)
            .collect();
        // the leading monomial is not divisible by any other, so only the tail changes
        let (r, _) = reduce(p, &others, order);
        out.push(r);
    }
    out
}

fn finish(ring: std::sync::Arc<VariableRing>, order: MonomialOrder, basis: Vec<IPoly>) -> GroebnerBasis {
    let generators = basis
        .iter()
        .map(|p| {
            Polynomial::from_terms(
                &ring,
                p.to_rational_monic()
                    .into_iter()
                    .map(|(e, c): (Vec<u32>, BigRational)| (Exponent::new(e), c)),
            )
        })
        .collect();
    GroebnerBasis {
        ring,
        order,
        generators,
        reduced: true,
        internal: basis,
    }
}

/// Post-hoc Buchberger criterion: every S-polynomial reduces to zero.
pub(crate) fn all_spolys_reduce(basis: &[IPoly], order: &MonomialOrder) -> bool {
    let refs: Vec<&IPoly> = basis.iter().collect();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let lcm = basis[i].lm().lcm(basis[j].lm());
            let s = spoly(&basis[i], &basis[j], &lcm, order);
            if s.is_zero() {
                continue;
            }
            let (r, _) = reduce(&s, &refs, order);
            if !r.is_zero() {
                return false;
            }
        }
    }
    true
}
