//! Polynomial systems behind removal ML degrees.
//!
//! Two routes are built here. The symbolic route forms the likelihood ideal
//! (rank conditions on the data row stacked over the scaled Jacobian,
//! saturated by the singular locus and the coordinate hyperplanes). The
//! numeric route forms the square Lagrange likelihood system with the
//! hyperplane offsets `b` kept as parameters.

use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::groebner::{self, buchberger, GbConfig, GroebnerError, MonomialOrder};
use crate::ring::{jacobian, minors, Coefficient, FieldKind, Polynomial, Rational, RingError, VariableRing};

/// Seed of the random slice used to vet a single singular-locus saturator.
const SLICE_SEED: u64 = 0x05ee_d5a7;

/// Default range of the exact engine's random integers.
pub const EXACT_SAMPLE_RANGE: (i64, i64) = (1, 30102);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SystemError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("dimension {dimension} out of range for ambient dimension {ambient}")]
    BadDimension { dimension: usize, ambient: usize },
    #[error("removal level {k} out of range 0..={max}")]
    LevelOutOfRange { k: usize, max: usize },
    #[error("the generators define the empty set")]
    EmptyVariety,
    #[error("data vector has length {got}, expected {expected}")]
    DataLength { expected: usize, got: usize },
    #[error("data vector entries must be nonzero")]
    ZeroData,
    #[error("hyperplane matrix must be {rows}x{cols}")]
    GammaShape { rows: usize, cols: usize },
    #[error("not a complete intersection: {generators} generators for codimension {codim}")]
    NotCompleteIntersection { generators: usize, codim: usize },
    #[error("{generators} generators cannot cut out codimension {codim}")]
    TooFewGenerators { generators: usize, codim: usize },
}

/// An affine variety: ambient ring, generators and dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct VarietySpec<C: Coefficient> {
    ring: Arc<VariableRing>,
    generators: Vec<Polynomial<C>>,
    dimension: usize,
}

impl<C: Coefficient> VarietySpec<C> {
    pub fn new(
        ring: &Arc<VariableRing>,
        generators: Vec<Polynomial<C>>,
        dimension: usize,
    ) -> Result<Self, SystemError> {
        if dimension > ring.len() {
            return Err(SystemError::BadDimension {
                dimension,
                ambient: ring.len(),
            });
        }
        let probe = Polynomial::<C>::zero(ring);
        if generators.iter().any(|g| !g.same_ring(&probe)) {
            return Err(RingError::RingMismatch.into());
        }
        Ok(Self {
            ring: ring.clone(),
            generators,
            dimension,
        })
    }

    pub fn ring(&self) -> &Arc<VariableRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial<C>] {
        &self.generators
    }

    pub fn ambient_dimension(&self) -> usize {
        self.ring.len()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn codimension(&self) -> usize {
        self.ring.len() - self.dimension
    }

    /// Number of removal levels, `0..=d+1`.
    pub fn levels(&self) -> std::ops::RangeInclusive<usize> {
        0..=self.dimension + 1
    }
}

impl VarietySpec<Rational> {
    /// Computes the dimension from a Gröbner basis of the generators.
    pub fn with_computed_dimension(
        ring: &Arc<VariableRing>,
        generators: Vec<Polynomial<Rational>>,
        cfg: &GbConfig,
    ) -> Result<Self, SystemError> {
        let dimension = if generators.iter().all(Polynomial::is_zero) {
            ring.len()
        } else {
            buchberger(&generators, MonomialOrder::Grevlex, cfg)?
                .dimension()
                .ok_or(SystemError::EmptyVariety)?
        };
        Self::new(ring, generators, dimension)
    }

    pub fn to_complex(&self) -> VarietySpec<Complex64> {
        let ring = self
            .ring
            .with_field(FieldKind::COMPLEX_DOUBLE)
            .expect("same names are valid");
        let generators = self
            .generators
            .iter()
            .map(|g| g.map_coefficients(&ring, Complex64::from_rational))
            .collect();
        VarietySpec {
            ring,
            generators,
            dimension: self.dimension,
        }
    }
}

/// Data vector `μ`: `n` entries at level 0, `n + 1` at levels `k >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DataVector<C>(Vec<C>);

impl<C: Coefficient> DataVector<C> {
    pub fn new(entries: Vec<C>) -> Result<Self, SystemError> {
        if entries.iter().any(Zero::is_zero) {
            return Err(SystemError::ZeroData);
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[C] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Expected length at removal level `k` for ambient dimension `n`.
    pub fn length_for(n: usize, k: usize) -> usize {
        if k == 0 {
            n
        } else {
            n + 1
        }
    }
}

/// Hyperplanes `H_i(x) = (Γ x - b)_i`, `i = 1..k`.
#[derive(Debug, Clone, PartialEq)]
pub struct RemovalConfig<C> {
    gamma: Vec<Vec<C>>,
    b: Vec<C>,
}

impl<C: Coefficient> RemovalConfig<C> {
    pub fn new(gamma: Vec<Vec<C>>, b: Vec<C>) -> Result<Self, SystemError> {
        let n = gamma.first().map_or(0, Vec::len);
        if gamma.iter().any(|r| r.len() != n) || b.len() != gamma.len() {
            return Err(SystemError::GammaShape {
                rows: gamma.len(),
                cols: n,
            });
        }
        Ok(Self { gamma, b })
    }

    /// The level-0 configuration (no hyperplanes).
    pub fn level_zero() -> Self {
        Self {
            gamma: Vec::new(),
            b: Vec::new(),
        }
    }

    /// Hyperplanes through `point`: `b = Γ p`.
    pub fn through_point(gamma: Vec<Vec<C>>, point: &[C]) -> Result<Self, SystemError> {
        let b = mat_vec(&gamma, point);
        Self::new(gamma, b)
    }

    pub fn k(&self) -> usize {
        self.gamma.len()
    }

    pub fn gamma(&self) -> &[Vec<C>] {
        &self.gamma
    }

    pub fn b(&self) -> &[C] {
        &self.b
    }

    /// Values `H_i(x)` of the affine forms at `x`.
    pub fn hyperplane_values(&self, x: &[C]) -> Vec<C> {
        mat_vec(&self.gamma, x)
            .into_iter()
            .zip(&self.b)
            .map(|(v, b)| v - b.clone())
            .collect()
    }
}

pub(crate) fn mat_vec<C: Coefficient>(m: &[Vec<C>], v: &[C]) -> Vec<C> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(C::zero(), |acc, (a, x)| acc + a.clone() * x.clone())
        })
        .collect()
}

/// Square Lagrange likelihood system with `λ_0 = 1`.
///
/// Variables are laid out as primal coordinates (`x_1..x_n` and `y` when
/// `k >= 1`), then multipliers `λ_1..λ_c'`, then parameters `b_1..b_k`.
/// Equations are the `c'` defining equations followed by one Lagrange row
/// per primal coordinate.
#[derive(Debug, Clone)]
pub struct RemovalSystem<C: Coefficient> {
    ring: Arc<VariableRing>,
    equations: Vec<Polynomial<C>>,
    k: usize,
    primal_count: usize,
    lagrange_count: usize,
    parameter_count: usize,
}

impl<C: Coefficient> RemovalSystem<C> {
    pub fn ring(&self) -> &Arc<VariableRing> {
        &self.ring
    }

    pub fn equations(&self) -> &[Polynomial<C>] {
        &self.equations
    }

    pub fn defining_equations(&self) -> &[Polynomial<C>] {
        &self.equations[..self.lagrange_count]
    }

    pub fn lagrange_rows(&self) -> &[Polynomial<C>] {
        &self.equations[self.lagrange_count..]
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn primal_count(&self) -> usize {
        self.primal_count
    }

    pub fn lagrange_count(&self) -> usize {
        self.lagrange_count
    }

    pub fn parameter_count(&self) -> usize {
        self.parameter_count
    }

    pub fn unknown_count(&self) -> usize {
        self.primal_count + self.lagrange_count
    }

    pub fn multiplier_range(&self) -> std::ops::Range<usize> {
        self.primal_count..self.unknown_count()
    }

    /// Equations with concrete parameter values, over the ring of unknowns.
    pub fn specialize(&self, b: &[C]) -> Result<Vec<Polynomial<C>>, SystemError> {
        if b.len() != self.parameter_count {
            return Err(RingError::LengthMismatch {
                expected: self.parameter_count,
                got: b.len(),
            }
            .into());
        }
        let names = &self.ring.names()[..self.unknown_count()];
        let ring = VariableRing::new(names, self.ring.field())?;
        Ok(self.equations.iter().map(|e| e.substitute_tail(&ring, b)).collect())
    }
}

/// Generators of the singular-locus ideal: `F` together with all `c x c`
/// minors of its Jacobian.
pub fn singular_locus_ideal<C: Coefficient>(x: &VarietySpec<C>) -> Result<Vec<Polynomial<C>>, SystemError> {
    let c = x.codimension();
    let gens: Vec<Polynomial<C>> = x.generators.iter().filter(|g| !g.is_zero()).cloned().collect();
    if c == 0 {
        // smooth everywhere
        return Ok(vec![Polynomial::one(&x.ring)]);
    }
    if gens.len() < c {
        return Err(SystemError::TooFewGenerators {
            generators: gens.len(),
            codim: c,
        });
    }
    let vars: Vec<usize> = (0..x.ambient_dimension()).collect();
    let jac = jacobian(&gens, &vars)?;
    let mut out = gens.clone();
    out.extend(minors(&jac, c)?.into_iter().filter(|m| !m.is_zero()));
    Ok(out)
}

/// Rows of the stacked matrix `[∇ℓ ; Jac F] · diag(z)` after clearing
/// denominators: the data row becomes `μ` itself.
fn scaled_jacobian_rows<C: Coefficient>(
    x: &VarietySpec<C>,
    mu: &DataVector<C>,
) -> Result<Vec<Vec<Polynomial<C>>>, SystemError> {
    let n = x.ambient_dimension();
    if mu.len() != n {
        return Err(SystemError::DataLength {
            expected: n,
            got: mu.len(),
        });
    }
    let ring = &x.ring;
    let mut rows = vec![mu.entries().iter().map(|m| Polynomial::constant(ring, m.clone())).collect()];
    for g in &x.generators {
        rows.push(
            (0..n)
                .map(|j| &g.partial(j) * &Polynomial::variable(ring, j))
                .collect(),
        );
    }
    Ok(rows)
}

/// Generators of the likelihood ideal of the very affine part of `x`.
///
/// Builds the `(c+1)`-minors of the scaled stacked matrix, adds the
/// generators, and saturates first by the coordinate product `z_1⋯z_n` and
/// then by the singular-locus ideal. When `c + 1` exceeds the ambient
/// dimension the rank condition is vacuous and no minors are added.
pub fn likelihood_ideal(
    x: &VarietySpec<Rational>,
    mu: &DataVector<Rational>,
    cfg: &GbConfig,
) -> Result<Vec<Polynomial<Rational>>, SystemError> {
    let Some((red, ideal)) = reduced_likelihood_ideal(x, mu, cfg)? else {
        return Ok(vec![Polynomial::one(&x.ring)]);
    };
    if red.is_identity() {
        return Ok(ideal);
    }
    let mut out = red.linear.clone();
    out.extend(ideal.iter().map(|g| g.remap(&x.ring, &red.keep)).filter(|g| !g.is_zero()));
    Ok(out)
}

/// Linear generators solved for pivot variables. The coordinate ring of `x`
/// is isomorphic to that of the composed generators over the kept variables.
struct LinearReduction {
    ring: Arc<VariableRing>,
    /// original variable `i` as a polynomial over `ring`
    images: Vec<Polynomial<Rational>>,
    /// reduced variable `j` is original variable `keep[j]`
    keep: Vec<usize>,
    linear: Vec<Polynomial<Rational>>,
}

impl LinearReduction {
    fn is_identity(&self) -> bool {
        self.linear.is_empty()
    }

    fn apply(&self, p: &Polynomial<Rational>) -> Polynomial<Rational> {
        if self.is_identity() {
            p.clone()
        } else {
            p.compose(&self.images)
        }
    }
}

/// `None` when the linear generators are inconsistent.
fn linear_reduction(x: &VarietySpec<Rational>) -> Result<Option<LinearReduction>, SystemError> {
    let n = x.ambient_dimension();
    let linear: Vec<Polynomial<Rational>> =
        x.generators.iter().filter(|g| g.total_degree() == Some(1)).cloned().collect();
    let identity = |linear: Vec<Polynomial<Rational>>| LinearReduction {
        ring: x.ring.clone(),
        images: (0..n).map(|i| Polynomial::variable(&x.ring, i)).collect(),
        keep: (0..n).collect(),
        linear,
    };
    if linear.is_empty() {
        return Ok(Some(identity(Vec::new())));
    }
    // rows [a_0 .. a_{n-1} | const]
    let mut rows: Vec<Vec<Rational>> = linear
        .iter()
        .map(|g| {
            let mut r = vec![Rational::zero(); n + 1];
            for (e, c) in g.terms() {
                match e.powers().iter().position(|&p| p > 0) {
                    Some(v) => r[v] = c.clone(),
                    None => r[n] = c.clone(),
                }
            }
            r
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut done = 0;
    // pivot on the last variables first so the original ones survive
    for col in (0..n).rev() {
        let Some(r) = (done..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(done, r);
        let inv = rows[done][col].inverse().expect("nonzero pivot");
        for v in rows[done].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for r in 0..rows.len() {
            if r != done && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..=n {
                    let delta = f.clone() * rows[done][c].clone();
                    rows[r][c] = rows[r][c].clone() - delta;
                }
            }
        }
        pivots.push(col);
        done += 1;
    }
    if rows[done..].iter().any(|r| !r[n].is_zero()) {
        return Ok(None);
    }
    if done == n {
        // a single point; nothing left to keep
        return Ok(Some(identity(linear)));
    }
    let keep: Vec<usize> = (0..n).filter(|v| !pivots.contains(v)).collect();
    let names: Vec<&String> = keep.iter().map(|&v| &x.ring.names()[v]).collect();
    let ring = VariableRing::new(&names, FieldKind::Rational)?;
    let mut images: Vec<Polynomial<Rational>> = vec![Polynomial::zero(&ring); n];
    for (j, &v) in keep.iter().enumerate() {
        images[v] = Polynomial::variable(&ring, j);
    }
    for (row, &col) in rows.iter().zip(&pivots) {
        let mut img = Polynomial::constant(&ring, -row[n].clone());
        for (j, &v) in keep.iter().enumerate() {
            if !row[v].is_zero() {
                img = &img - &(&Polynomial::constant(&ring, row[v].clone()) * &Polynomial::variable(&ring, j));
            }
        }
        images[col] = img;
    }
    Ok(Some(LinearReduction {
        ring,
        images,
        keep,
        linear,
    }))
}

/// The likelihood ideal over the variables left after solving the linear
/// generators. `None` means the unit ideal.
fn reduced_likelihood_ideal(
    x: &VarietySpec<Rational>,
    mu: &DataVector<Rational>,
    cfg: &GbConfig,
) -> Result<Option<(LinearReduction, Vec<Polynomial<Rational>>)>, SystemError> {
    let Some((red, ideal, sat)) = off_coordinates(x, mu, cfg)? else {
        return Ok(None);
    };
    let mut out = match sat {
        Saturator::Nothing => return Ok(Some((red, ideal))),
        Saturator::One(g) => groebner::saturate_by_poly(&ideal, &g, cfg)?,
        Saturator::All(sing) => groebner::saturate_by_ideal(&ideal, &sing, cfg)?,
    };
    if out.is_empty() {
        out.push(Polynomial::zero(&red.ring));
    }
    if is_unit_ideal(&out) {
        return Ok(None);
    }
    Ok(Some((red, out)))
}

/// What is still to be removed after the coordinate saturation.
enum Saturator {
    Nothing,
    One(Polynomial<Rational>),
    All(Vec<Polynomial<Rational>>),
}

/// The likelihood ideal saturated by the coordinates only, together with what
/// removes the singular locus.
fn off_coordinates(
    x: &VarietySpec<Rational>,
    mu: &DataVector<Rational>,
    cfg: &GbConfig,
) -> Result<Option<(LinearReduction, Vec<Polynomial<Rational>>, Saturator)>, SystemError> {
    let n = x.ambient_dimension();
    let c = x.codimension();
    let rows = scaled_jacobian_rows(x, mu)?;
    let Some(red) = linear_reduction(x)? else {
        return Ok(None);
    };
    let mut full: Vec<Polynomial<Rational>> = x.generators.iter().filter(|g| !g.is_zero()).cloned().collect();
    if c < n {
        let m = crate::ring::PolyMatrix::from_rows(rows);
        full.extend(minors(&m, c + 1)?.into_iter().filter(|p| !p.is_zero()));
    }
    let mut ideal: Vec<Polynomial<Rational>> = full.iter().map(|g| red.apply(g)).filter(|g| !g.is_zero()).collect();
    if ideal.is_empty() {
        // no conditions at all: only possible for n = 0
        ideal.push(Polynomial::zero(&red.ring));
    }
    // one coordinate at a time; cheaper than the full product
    for j in 0..n {
        let z = &red.images[j];
        if z.is_zero() {
            // the variety sits inside a coordinate hyperplane
            return Ok(None);
        }
        if z.as_constant().is_some() {
            continue;
        }
        ideal = groebner::saturate_by_poly(&ideal, z, cfg)?;
        if ideal.is_empty() {
            ideal.push(Polynomial::zero(&red.ring));
        }
        if is_unit_ideal(&ideal) {
            return Ok(None);
        }
    }
    let sing = singular_locus_ideal(x)?;
    if is_unit_ideal(&sing) {
        return Ok(Some((red, ideal, Saturator::Nothing)));
    }
    // F already lies in the ideal, so only the Jacobian minors matter
    let skip = x.generators.iter().filter(|g| !g.is_zero()).count();
    let sing: Vec<Polynomial<Rational>> =
        sing.iter().skip(skip).map(|g| red.apply(g)).filter(|g| !g.is_zero()).collect();
    if sing.is_empty() {
        // the whole variety is singular
        return Ok(None);
    }
    let defining: Vec<Polynomial<Rational>> =
        x.generators.iter().map(|g| red.apply(g)).filter(|g| !g.is_zero()).collect();
    let sat = match single_saturator(&defining, &sing, x.dimension(), &red.ring, cfg)? {
        Some(g) => Saturator::One(g),
        None => Saturator::All(sing),
    };
    Ok(Some((red, ideal, sat)))
}

/// A Jacobian minor that vanishes on no component of the variety, if one is
/// found. Saturating by it agrees with saturating by all minors once the data
/// is generic: the critical points then avoid any fixed proper subvariety.
/// A component is detected through a random slice down to finitely many
/// points; the minor must vanish at none of them.
fn single_saturator(
    defining: &[Polynomial<Rational>],
    minors: &[Polynomial<Rational>],
    dimension: usize,
    ring: &Arc<VariableRing>,
    cfg: &GbConfig,
) -> Result<Option<Polynomial<Rational>>, SystemError> {
    let mut rng = ChaCha8Rng::seed_from_u64(SLICE_SEED);
    let mut slice: Vec<Polynomial<Rational>> = defining.to_vec();
    for _ in 0..dimension {
        let mut form = Polynomial::constant(ring, random_rational(&mut rng));
        for v in 0..ring.len() {
            let term = &Polynomial::constant(ring, random_rational(&mut rng)) * &Polynomial::variable(ring, v);
            form = &form + &term;
        }
        slice.push(form);
    }
    let mut candidates: Vec<&Polynomial<Rational>> = minors.iter().collect();
    candidates.sort_by_key(|g| (g.total_degree(), g.terms().len(), coefficient_bits(g)));
    for g in candidates {
        let mut test = slice.clone();
        test.push(g.clone());
        let gb = buchberger(&test, MonomialOrder::Grevlex, cfg)?;
        if gb.is_unit() {
            return Ok(Some(g.clone()));
        }
    }
    Ok(None)
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::from_integer(rng.gen_range(EXACT_SAMPLE_RANGE.0..=EXACT_SAMPLE_RANGE.1).into())
}

fn coefficient_bits(p: &Polynomial<Rational>) -> u64 {
    p.terms().map(|(_, c)| c.numer().bits() + c.denom().bits()).sum()
}

fn is_unit_ideal(gens: &[Polynomial<Rational>]) -> bool {
    gens.iter().any(|g| g.as_constant().is_some_and(|c| !c.is_zero()))
}

/// ML degree through the symbolic route: the number of standard monomials of
/// the likelihood ideal; zero when that ideal is the unit ideal.
///
/// For generic data the critical scheme is reduced, so this length equals
/// the number of critical points. A positive-dimensional result means the
/// data was not generic and surfaces as
/// [`GroebnerError::NotZeroDimensional`].
pub fn ml_degree_symbolic(
    x: &VarietySpec<Rational>,
    mu: &DataVector<Rational>,
    cfg: &GbConfig,
) -> Result<usize, SystemError> {
    let Some((red, ideal, sat)) = off_coordinates(x, mu, cfg)? else {
        return Ok(0);
    };
    let mut ideal = match sat {
        Saturator::Nothing => ideal,
        // the saturation itself is never needed, only its length
        Saturator::One(g) => return Ok(groebner::localized_degree(&ideal, &g, cfg)?),
        Saturator::All(sing) => groebner::saturate_by_ideal(&ideal, &sing, cfg)?,
    };
    if ideal.is_empty() {
        ideal.push(Polynomial::zero(&red.ring));
    }
    let gb = buchberger(&ideal, MonomialOrder::Grevlex, cfg)?;
    Ok(gb.zero_dim_degree()?)
}

/// The `k`-th removal variety: for `k >= 1` the ambient space gains a
/// coordinate `y` with `y = H_1(x)`, and the slices `H_2 = … = H_k = 0`
/// are added.
pub fn removal_variety<C: Coefficient>(
    x: &VarietySpec<C>,
    cfg: &RemovalConfig<C>,
) -> Result<VarietySpec<C>, SystemError> {
    let k = cfg.k();
    let d = x.dimension();
    if k > d + 1 {
        return Err(SystemError::LevelOutOfRange { k, max: d + 1 });
    }
    if k == 0 {
        return Ok(x.clone());
    }
    let n = x.ambient_dimension();
    if cfg.gamma.iter().any(|r| r.len() != n) {
        return Err(SystemError::GammaShape { rows: k, cols: n });
    }
    let mut names: Vec<String> = x.ring.names().to_vec();
    names.push(x.ring.fresh_name("y"));
    let ring = VariableRing::new(&names, x.ring.field())?;
    let map: Vec<usize> = (0..n).collect();
    let mut gens: Vec<Polynomial<C>> = x.generators.iter().map(|g| g.remap(&ring, &map)).collect();
    let hyper = hyperplane_polys(&ring, cfg, None);
    gens.push(&Polynomial::variable(&ring, n) - &hyper[0]);
    gens.extend(hyper.into_iter().skip(1));
    VarietySpec::new(&ring, gens, d + 1 - k)
}

/// `H_i(x) = Σ_j γ_ij x_j - b_i` over `ring`, whose first `n` variables are
/// `x`. With `param_offset = Some(o)` the offsets are the ring variables
/// `o..o+k` instead of the constants in `cfg`.
fn hyperplane_polys<C: Coefficient>(
    ring: &Arc<VariableRing>,
    cfg: &RemovalConfig<C>,
    param_offset: Option<usize>,
) -> Vec<Polynomial<C>> {
    cfg.gamma
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let linear = row.iter().enumerate().fold(Polynomial::zero(ring), |acc, (j, g)| {
                &acc + &Polynomial::variable(ring, j).scale(g)
            });
            let offset = match param_offset {
                Some(o) => Polynomial::variable(ring, o + i),
                None => Polynomial::constant(ring, cfg.b[i].clone()),
            };
            &linear - &offset
        })
        .collect()
}

/// Lagrange likelihood system of the `k`-th removal variety of `x`, with the
/// hyperplane offsets as parameters. Only the hyperplane normals of `cfg`
/// are used; the offsets become the variables `b_1..b_k`.
pub fn lagrange_system<C: Coefficient>(
    x: &VarietySpec<C>,
    mu: &DataVector<C>,
    cfg: &RemovalConfig<C>,
) -> Result<RemovalSystem<C>, SystemError> {
    let k = cfg.k();
    let n = x.ambient_dimension();
    let d = x.dimension();
    if k > d + 1 {
        return Err(SystemError::LevelOutOfRange { k, max: d + 1 });
    }
    let gens: Vec<&Polynomial<C>> = x.generators.iter().filter(|g| !g.is_zero()).collect();
    if gens.len() != x.codimension() {
        return Err(SystemError::NotCompleteIntersection {
            generators: gens.len(),
            codim: x.codimension(),
        });
    }
    if cfg.gamma.iter().any(|r| r.len() != n) {
        return Err(SystemError::GammaShape { rows: k, cols: n });
    }
    let primal = if k == 0 { n } else { n + 1 };
    let expected = DataVector::<C>::length_for(n, k);
    if mu.len() != expected {
        return Err(SystemError::DataLength {
            expected,
            got: mu.len(),
        });
    }
    let lagrange = gens.len() + k;

    let mut names: Vec<String> = x.ring.names().to_vec();
    let fresh = |names: &Vec<String>, base: &str| -> String {
        let mut candidate = base.to_string();
        let mut i = 0;
        while names.contains(&candidate) {
            candidate = format!("{base}_{i}");
            i += 1;
        }
        candidate
    };
    if k > 0 {
        let y = fresh(&names, "y");
        names.push(y);
    }
    for i in 1..=lagrange {
        let l = fresh(&names, &format!("lam{i}"));
        names.push(l);
    }
    for i in 1..=k {
        let b = fresh(&names, &format!("b{i}"));
        names.push(b);
    }
    let ring = VariableRing::new(&names, x.ring.field())?;

    let map: Vec<usize> = (0..n).collect();
    let mut defining: Vec<Polynomial<C>> = gens.iter().map(|g| g.remap(&ring, &map)).collect();
    if k > 0 {
        let hyper = hyperplane_polys(&ring, cfg, Some(primal + lagrange));
        defining.push(&Polynomial::variable(&ring, n) - &hyper[0]);
        defining.extend(hyper.into_iter().skip(1));
    }

    let mut equations = defining.clone();
    for j in 0..primal {
        let zj = Polynomial::variable(&ring, j);
        let mut row = Polynomial::constant(&ring, mu.entries()[j].clone());
        for (i, g) in defining.iter().enumerate() {
            let dg = g.partial(j);
            if dg.is_zero() {
                continue;
            }
            let lam = Polynomial::variable(&ring, primal + i);
            row = &row + &(&(&lam * &dg) * &zj);
        }
        equations.push(row);
    }

    Ok(RemovalSystem {
        ring,
        equations,
        k,
        primal_count: primal,
        lagrange_count: lagrange,
        parameter_count: k,
    })
}

/// Seeded random source for data vectors and hyperplane normals.
#[derive(Debug, Clone)]
pub struct RandomSource {
    rng: ChaCha8Rng,
    exact_range: (i64, i64),
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            exact_range: EXACT_SAMPLE_RANGE,
        }
    }

    pub fn with_exact_range(mut self, lo: i64, hi: i64) -> Self {
        assert!(1 <= lo && lo <= hi, "exact samples must be positive");
        self.exact_range = (lo, hi);
        self
    }

    /// Uniform integer from the exact range.
    pub fn exact(&mut self) -> i64 {
        self.rng.gen_range(self.exact_range.0..=self.exact_range.1)
    }

    /// Point on the unit circle.
    pub fn unit_complex(&mut self) -> Complex64 {
        let theta: f64 = self.rng.gen_range(0.0..std::f64::consts::TAU);
        Complex64::from_polar(1.0, theta)
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.gen()
    }

    pub fn next_seed(&mut self) -> u64 {
        self.rng.gen()
    }
}

/// Coefficients that can be drawn from a [`RandomSource`].
pub trait Sample: Coefficient {
    fn sample(source: &mut RandomSource) -> Self;
}

impl Sample for Rational {
    fn sample(source: &mut RandomSource) -> Self {
        Rational::from_integer(source.exact().into())
    }
}

impl Sample for Complex64 {
    fn sample(source: &mut RandomSource) -> Self {
        source.unit_complex()
    }
}

/// Random data vector for level `k` of an `n`-dimensional ambient space.
pub fn sample_data<C: Sample>(n: usize, k: usize, source: &mut RandomSource) -> DataVector<C> {
    let len = DataVector::<C>::length_for(n, k);
    DataVector((0..len).map(|_| C::sample(source)).collect())
}

/// Random `k x n` hyperplane normal matrix with independent rows.
pub fn sample_gamma<C: Sample>(k: usize, n: usize, source: &mut RandomSource) -> Vec<Vec<C>> {
    loop {
        let m: Vec<Vec<C>> = (0..k).map(|_| (0..n).map(|_| C::sample(source)).collect()).collect();
        if rank(&m) == k.min(n) {
            return m;
        }
    }
}

fn rank<C: Coefficient>(m: &[Vec<C>]) -> usize {
    let mut a: Vec<Vec<C>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        let inv = a[r][col].inverse().expect("nonzero pivot");
        for i in r + 1..rows {
            let f = a[i][col].clone() * inv.clone();
            for j in col..cols {
                let v = a[r][j].clone() * f.clone();
                a[i][j] = a[i][j].clone() - v;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}
