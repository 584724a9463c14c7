//! Homotopy continuation over double-precision complex numbers.
//!
//! Systems are tracked in projective space: the unknowns `w` are joined by a
//! homogenizing coordinate `h`, and a random affine patch `c·(w, h) = 1`
//! keeps paths bounded even when their affine endpoints run off to infinity.
//! Endpoints are pulled back to affine space, polished by Newton's method at
//! `t = 0`, and classified.

mod eval;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::{Polynomial, VariableRing};
use crate::systems::{RandomSource, RemovalSystem};
use eval::{lu_solve, max_norm, CompiledSystem};

type C64 = Complex64;

/// Environment variable capping the number of tracking threads.
pub const WORKERS_ENV: &str = "MLOBS_WORKERS";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrackerError {
    #[error("system is not square: {equations} equations in {unknowns} unknowns")]
    NotSquare { equations: usize, unknowns: usize },
    #[error("equation {0} has degree zero in the unknowns")]
    DegenerateEquation(usize),
    #[error("parameter vector has length {got}, expected {expected}")]
    ParameterLength { expected: usize, got: usize },
    #[error("{failed} of {total} paths failed, even after re-running with a fresh gamma")]
    TooManyFailures { failed: usize, total: usize },
    #[error("invalid tracker settings: {0}")]
    InvalidSettings(String),
    #[error("invalid witness set: {0}")]
    InvalidWitnessSet(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackerSettings {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub newton_tolerance: f64,
    pub max_newton_iterations: usize,
    pub max_steps: usize,
    pub endgame_t: f64,
    pub divergence_bound: f64,
    pub polish_iterations: usize,
    /// Polished residual needed for a converged endpoint.
    pub residual_tolerance: f64,
    /// Largest relative size of the last polishing step of a converged
    /// endpoint; Newton's method stalls near singular roots.
    pub polish_tolerance: f64,
    /// Largest Jacobian condition number of a regular endpoint.
    pub condition_limit: f64,
    /// Endpoints closer than this in max-norm are the same point.
    pub dedup_radius: f64,
    /// Fraction of failed paths that triggers a re-run.
    pub max_failure_rate: f64,
    /// Coordinate magnitude below which a point lies on a coordinate hyperplane.
    pub tolerance: f64,
}

impl Default for TrackerSettings {
    fn default() -> Self {
        Self {
            initial_step: 0.05,
            min_step: 1e-12,
            max_step: 0.1,
            newton_tolerance: 1e-9,
            max_newton_iterations: 3,
            max_steps: 20_000,
            endgame_t: 1e-6,
            divergence_bound: 1e12,
            polish_iterations: 10,
            residual_tolerance: 1e-8,
            polish_tolerance: 1e-9,
            condition_limit: 1e8,
            dedup_radius: 1e-6,
            max_failure_rate: 0.1,
            tolerance: 1e-6,
        }
    }
}

impl TrackerSettings {
    pub fn validate(&self) -> Result<(), TrackerError> {
        let bad = |m: &str| Err(TrackerError::InvalidSettings(m.to_string()));
        if !(self.min_step < self.initial_step && self.initial_step <= self.max_step) {
            return bad("need min_step < initial_step <= max_step");
        }
        let positive = [
            self.min_step,
            self.newton_tolerance,
            self.endgame_t,
            self.divergence_bound,
            self.residual_tolerance,
            self.polish_tolerance,
            self.condition_limit,
            self.dedup_radius,
            self.tolerance,
        ];
        if positive.iter().any(|v| !(*v > 0.0)) {
            return bad("tolerances must be positive");
        }
        if self.endgame_t >= 1.0 {
            return bad("endgame_t must lie in (0, 1)");
        }
        if self.max_newton_iterations == 0 || self.max_steps == 0 {
            return bad("iteration caps must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathStatus {
    Converged,
    Diverged,
    Stalled,
}

/// An endpoint in affine coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackedPoint {
    pub coordinates: Vec<C64>,
    pub status: PathStatus,
    /// Condition number of the Jacobian at the endpoint.
    pub condition: f64,
    /// Max modulus of the equations at the endpoint.
    pub residual: f64,
    /// Relative size of the last Newton step of the final polish.
    pub polish_step: f64,
    /// Number of paths that ended at this point.
    pub multiplicity: usize,
}

impl TrackedPoint {
    pub fn is_regular(&self, condition_limit: f64) -> bool {
        self.status == PathStatus::Converged && self.multiplicity == 1 && self.condition <= condition_limit
    }
}

/// Splits coordinates into primal coordinates and a projective multiplier
/// block, which is compared and tested after scaling to unit max-modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub primal: usize,
    pub multipliers: usize,
}

impl Layout {
    pub fn len(&self) -> usize {
        self.primal + self.multipliers
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn normalized(&self, x: &[C64]) -> Vec<C64> {
        let mut out = x.to_vec();
        let block = &mut out[self.primal..];
        let scale = max_norm(block);
        if scale > 0.0 {
            block.iter_mut().for_each(|z| *z /= scale);
        }
        out
    }

    /// Smallest coordinate modulus after scaling the multiplier block.
    pub fn min_coordinate(&self, x: &[C64]) -> f64 {
        self.normalized(x).iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min)
    }
}

/// A square polynomial system `F(w; b) = 0` prepared for tracking.
///
/// The first `unknowns` ring variables are unknowns, the remaining ones are
/// parameters.
#[derive(Debug, Clone)]
pub struct SquareSystem {
    compiled: CompiledSystem,
    degrees: Vec<u32>,
    unknowns: usize,
    params: usize,
    patch: Vec<C64>,
}

impl SquareSystem {
    pub fn new(polys: &[Polynomial<C64>], unknowns: usize, source: &mut RandomSource) -> Result<Self, TrackerError> {
        let patch = (0..=unknowns).map(|_| source.unit_complex()).collect();
        Self::with_patch(polys, unknowns, patch)
    }

    pub fn with_patch(polys: &[Polynomial<C64>], unknowns: usize, patch: Vec<C64>) -> Result<Self, TrackerError> {
        if polys.len() != unknowns {
            return Err(TrackerError::NotSquare {
                equations: polys.len(),
                unknowns,
            });
        }
        assert_eq!(patch.len(), unknowns + 1, "patch covers the unknowns and h");
        let nvars = polys.first().map_or(unknowns, |p| p.ring().len());
        assert!(nvars >= unknowns);
        let params = nvars - unknowns;
        let mut degrees = Vec::with_capacity(polys.len());
        let mut compiled = Vec::with_capacity(polys.len());
        for (i, p) in polys.iter().enumerate() {
            let d = p.degree_in(0..unknowns).unwrap_or(0);
            if d == 0 {
                return Err(TrackerError::DegenerateEquation(i));
            }
            degrees.push(d);
            let terms = p
                .terms()
                .map(|(e, c)| {
                    let pw = e.powers();
                    let own: u32 = pw[..unknowns].iter().sum();
                    let mut exps = Vec::with_capacity(nvars + 1);
                    exps.extend_from_slice(&pw[..unknowns]);
                    exps.push(d - own);
                    exps.extend_from_slice(&pw[unknowns..]);
                    (*c, exps)
                })
                .collect();
            compiled.push(terms);
        }
        Ok(Self {
            compiled: CompiledSystem::new(nvars + 1, compiled),
            degrees,
            unknowns,
            params,
            patch,
        })
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn parameters(&self) -> usize {
        self.params
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn patch(&self) -> &[C64] {
        &self.patch
    }

    /// Bézout number of the total-degree start system.
    pub fn bezout_count(&self) -> u128 {
        self.degrees.iter().map(|&d| d as u128).product()
    }

    fn check_params(&self, b: &[C64]) -> Result<(), TrackerError> {
        if b.len() != self.params {
            return Err(TrackerError::ParameterLength {
                expected: self.params,
                got: b.len(),
            });
        }
        Ok(())
    }

    /// Values and Jacobian (all variables: unknowns, h, parameters) of the
    /// homogenized equations.
    fn eval_projective(&self, w: &[C64], b: &[C64], vals: &mut [C64], jac: &mut [C64]) {
        let mut x = Vec::with_capacity(self.compiled.nvars());
        x.extend_from_slice(w);
        x.extend_from_slice(b);
        self.compiled.eval_jac(&x, vals, jac);
    }

    /// Values of the affine equations at `x` with parameters `b`.
    pub fn evaluate(&self, x: &[C64], b: &[C64]) -> Vec<C64> {
        let mut v = Vec::with_capacity(self.compiled.nvars());
        v.extend_from_slice(x);
        v.push(C64::new(1.0, 0.0));
        v.extend_from_slice(b);
        let mut out = vec![C64::zero(); self.unknowns];
        self.compiled.eval(&v, &mut out);
        out
    }

    /// Affine Jacobian with respect to the unknowns, row-major.
    fn affine_jacobian(&self, x: &[C64], b: &[C64]) -> (Vec<C64>, Vec<C64>) {
        let n = self.unknowns;
        let nv = self.compiled.nvars();
        let mut w = x.to_vec();
        w.push(C64::new(1.0, 0.0));
        let mut vals = vec![C64::zero(); n];
        let mut full = vec![C64::zero(); n * nv];
        self.eval_projective(&w, b, &mut vals, &mut full);
        let mut jac = Vec::with_capacity(n * n);
        for r in 0..n {
            jac.extend_from_slice(&full[r * nv..r * nv + n]);
        }
        (vals, jac)
    }

    fn to_projective(&self, x: &[C64]) -> Vec<C64> {
        let mut w = x.to_vec();
        w.push(C64::new(1.0, 0.0));
        let s: C64 = w.iter().zip(&self.patch).map(|(a, c)| a * c).sum();
        w.iter_mut().for_each(|z| *z /= s);
        w
    }
}

/// `H(w, t)` on the projective unknowns `(w, h)` with `dim()` equations.
trait Homotopy: Sync {
    fn system(&self) -> &SquareSystem;

    /// Values, Jacobian in the unknowns (row-major `dim x dim`) and `∂H/∂t`.
    fn evaluate(&self, w: &[C64], t: f64, vals: &mut [C64], jac: &mut [C64], ht: &mut [C64]);

    fn dim(&self) -> usize {
        self.system().unknowns + 1
    }
}

fn patch_row(sys: &SquareSystem, w: &[C64], vals: &mut [C64], jac: &mut [C64], ht: &mut [C64]) {
    let n = sys.unknowns;
    let dim = n + 1;
    vals[n] = w.iter().zip(&sys.patch).map(|(a, c)| a * c).sum::<C64>() - 1.0;
    jac[n * dim..(n + 1) * dim].copy_from_slice(&sys.patch);
    ht[n] = C64::zero();
}

/// Total-degree start system `G_i = w_i^{d_i} - r_i h^{d_i}` with the gamma
/// trick: `H = γ t G + (1 - t) F`.
pub struct TotalDegreeStart<'a> {
    system: &'a SquareSystem,
    b: Vec<C64>,
    gamma: C64,
    r: Vec<C64>,
}

impl<'a> TotalDegreeStart<'a> {
    pub fn new(system: &'a SquareSystem, b: &[C64], source: &mut RandomSource) -> Result<Self, TrackerError> {
        system.check_params(b)?;
        Ok(Self {
            system,
            b: b.to_vec(),
            gamma: source.unit_complex(),
            r: (0..system.unknowns).map(|_| source.unit_complex()).collect(),
        })
    }

    pub fn gamma(&self) -> C64 {
        self.gamma
    }

    pub fn path_count(&self) -> u128 {
        self.system.bezout_count()
    }

    /// The start point with mixed-radix index `idx` in projective coordinates.
    pub fn start_point(&self, mut idx: u128) -> Vec<C64> {
        let mut w: Vec<C64> = self
            .system
            .degrees
            .iter()
            .zip(&self.r)
            .map(|(&d, r)| {
                let j = (idx % d as u128) as f64;
                idx /= d as u128;
                let root = C64::from_polar(r.norm().powf(1.0 / d as f64), r.arg() / d as f64);
                root * C64::from_polar(1.0, std::f64::consts::TAU * j / d as f64)
            })
            .collect();
        w.push(C64::new(1.0, 0.0));
        let s: C64 = w.iter().zip(&self.system.patch).map(|(a, c)| a * c).sum();
        w.iter_mut().for_each(|z| *z /= s);
        w
    }

    /// Start-system values at a projective point.
    pub fn start_residual(&self, w: &[C64]) -> f64 {
        let n = self.system.unknowns;
        let h = w[n];
        (0..n)
            .map(|i| {
                let d = self.system.degrees[i] as i32;
                (w[i].powi(d) - self.r[i] * h.powi(d)).norm()
            })
            .fold(0.0, f64::max)
    }
}

impl Homotopy for TotalDegreeStart<'_> {
    fn system(&self) -> &SquareSystem {
        self.system
    }

    fn evaluate(&self, w: &[C64], t: f64, vals: &mut [C64], jac: &mut [C64], ht: &mut [C64]) {
        let sys = self.system;
        let n = sys.unknowns;
        let dim = n + 1;
        let nv = sys.compiled.nvars();
        let mut fv = vec![C64::zero(); n];
        let mut fj = vec![C64::zero(); n * nv];
        sys.eval_projective(w, &self.b, &mut fv, &mut fj);
        let gt = self.gamma * t;
        let s = 1.0 - t;
        let h = w[n];
        for i in 0..n {
            let d = sys.degrees[i] as i32;
            let wi1 = w[i].powi(d - 1);
            let h1 = h.powi(d - 1);
            let g = wi1 * w[i] - self.r[i] * h1 * h;
            vals[i] = gt * g + fv[i] * s;
            ht[i] = self.gamma * g - fv[i];
            let row = &mut jac[i * dim..(i + 1) * dim];
            for (j, out) in row.iter_mut().enumerate() {
                *out = fj[i * nv + j] * s;
            }
            row[i] += gt * wi1 * d as f64;
            row[n] -= gt * self.r[i] * h1 * d as f64;
        }
        patch_row(sys, w, vals, jac, ht);
    }
}

/// Straight-line parameter homotopy `F(w; t b1 + (1 - t) b0)`.
struct ParameterHomotopy<'a> {
    system: &'a SquareSystem,
    start: Vec<C64>,
    target: Vec<C64>,
}

impl Homotopy for ParameterHomotopy<'_> {
    fn system(&self) -> &SquareSystem {
        self.system
    }

    fn evaluate(&self, w: &[C64], t: f64, vals: &mut [C64], jac: &mut [C64], ht: &mut [C64]) {
        let sys = self.system;
        let n = sys.unknowns;
        let dim = n + 1;
        let nv = sys.compiled.nvars();
        let b: Vec<C64> = self
            .start
            .iter()
            .zip(&self.target)
            .map(|(b1, b0)| b1 * t + b0 * (1.0 - t))
            .collect();
        let mut fj = vec![C64::zero(); n * nv];
        sys.eval_projective(w, &b, &mut vals[..n], &mut fj);
        for i in 0..n {
            jac[i * dim..(i + 1) * dim].copy_from_slice(&fj[i * nv..i * nv + dim]);
            ht[i] = (0..sys.params)
                .map(|j| fj[i * nv + dim + j] * (self.start[j] - self.target[j]))
                .sum();
        }
        patch_row(sys, w, vals, jac, ht);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stop {
    Endgame,
    Diverged,
    Failed,
}

struct PathEnd {
    w: Vec<C64>,
    stop: Stop,
}

fn affine_norm(w: &[C64]) -> f64 {
    let n = w.len() - 1;
    let h = w[n].norm();
    if h == 0.0 {
        return f64::INFINITY;
    }
    max_norm(&w[..n]) / h
}

/// `dw/dt = -J^{-1} ∂H/∂t`.
fn tangent(hom: &dyn Homotopy, w: &[C64], t: f64) -> Option<Vec<C64>> {
    let dim = hom.dim();
    let mut vals = vec![C64::zero(); dim];
    let mut jac = vec![C64::zero(); dim * dim];
    let mut ht = vec![C64::zero(); dim];
    hom.evaluate(w, t, &mut vals, &mut jac, &mut ht);
    if !lu_solve(&mut jac, dim, &mut ht) {
        return None;
    }
    ht.iter_mut().for_each(|z| *z = -*z);
    Some(ht)
}

fn axpy(w: &[C64], a: f64, d: &[C64]) -> Vec<C64> {
    w.iter().zip(d).map(|(x, y)| x + y * a).collect()
}

fn rk4(hom: &dyn Homotopy, w: &[C64], t: f64, dt: f64) -> Option<Vec<C64>> {
    let k1 = tangent(hom, w, t)?;
    let k2 = tangent(hom, &axpy(w, dt / 2.0, &k1), t + dt / 2.0)?;
    let k3 = tangent(hom, &axpy(w, dt / 2.0, &k2), t + dt / 2.0)?;
    let k4 = tangent(hom, &axpy(w, dt, &k3), t + dt)?;
    Some(
        (0..w.len())
            .map(|i| w[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0))
            .collect(),
    )
}

fn correct(hom: &dyn Homotopy, w: &mut [C64], t: f64, settings: &TrackerSettings) -> bool {
    let dim = hom.dim();
    let mut vals = vec![C64::zero(); dim];
    let mut jac = vec![C64::zero(); dim * dim];
    let mut ht = vec![C64::zero(); dim];
    let mut previous = f64::INFINITY;
    for _ in 0..settings.max_newton_iterations {
        hom.evaluate(w, t, &mut vals, &mut jac, &mut ht);
        if !lu_solve(&mut jac, dim, &mut vals) {
            return false;
        }
        let step = max_norm(&vals);
        if !step.is_finite() || step > 0.5 * previous {
            return false;
        }
        w.iter_mut().zip(&vals).for_each(|(x, d)| *x -= d);
        if step <= settings.newton_tolerance * (1.0 + max_norm(w)) {
            return true;
        }
        previous = step;
    }
    false
}

fn track(hom: &dyn Homotopy, start: &[C64], settings: &TrackerSettings) -> PathEnd {
    let mut w = start.to_vec();
    let mut t = 1.0f64;
    let mut step = settings.initial_step;
    let mut streak = 0;
    let t_end = settings.endgame_t;
    for _ in 0..settings.max_steps {
        if t <= t_end {
            // one last predictor step to t = 0; the polish corrects it
            if let Some(end) = rk4(hom, &w, t, -t) {
                if end.iter().all(|z| z.is_finite()) {
                    w = end;
                }
            }
            return PathEnd { w, stop: Stop::Endgame };
        }
        let dt = step.min(t - t_end);
        let t1 = if dt >= t - t_end { t_end } else { t - dt };
        let ok = match rk4(hom, &w, t, t1 - t) {
            Some(mut next) => {
                if correct(hom, &mut next, t1, settings) {
                    w = next;
                    true
                } else {
                    false
                }
            }
            None => false,
        };
        if ok {
            t = t1;
            streak += 1;
            if streak >= 5 {
                step = (step * 2.0).min(settings.max_step);
                streak = 0;
            }
            if affine_norm(&w) > settings.divergence_bound {
                return PathEnd { w, stop: Stop::Diverged };
            }
        } else {
            step /= 2.0;
            streak = 0;
            if step < settings.min_step {
                return PathEnd { w, stop: Stop::Failed };
            }
        }
    }
    let stop = if t <= t_end { Stop::Endgame } else { Stop::Failed };
    PathEnd { w, stop }
}

const RUIZ_ROUNDS: usize = 30;

fn condition_number(jac: &[C64], n: usize) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut m = DMatrix::from_row_slice(n, n, jac);
    if m.iter().any(|z| !z.is_finite()) {
        return f64::INFINITY;
    }
    // Ruiz equilibration: rows and columns are scaled towards unit max-norm,
    // so the estimate does not depend on how equations and coordinates
    // happen to be scaled. A diagonal scaling cannot make a singular
    // Jacobian regular.
    for _ in 0..RUIZ_ROUNDS {
        let rows: Vec<f64> = m.row_iter().map(|r| r.iter().map(|z| z.norm()).fold(0.0, f64::max)).collect();
        let cols: Vec<f64> = m.column_iter().map(|c| c.iter().map(|z| z.norm()).fold(0.0, f64::max)).collect();
        if rows.iter().chain(&cols).all(|s| *s == 0.0 || (s - 1.0).abs() < 1e-3) {
            break;
        }
        for i in 0..n {
            for j in 0..n {
                let (r, c) = (rows[i], cols[j]);
                if r > 0.0 && c > 0.0 {
                    m[(i, j)] /= (r * c).sqrt();
                }
            }
        }
    }
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 || !min.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Newton polish at `t = 0` and endpoint diagnostics.
/// With `follow` set, the polished point must stay near the path's own
/// prediction; otherwise any root Newton settles on is accepted.
fn finish(
    sys: &SquareSystem,
    b: &[C64],
    end: PathEnd,
    settings: &TrackerSettings,
    follow: bool,
) -> (TrackedPoint, bool) {
    let n = sys.unknowns;
    let failed_in_flight = end.stop == Stop::Failed;
    let h = end.w[n];
    let bad = |coords: Vec<C64>, status| TrackedPoint {
        coordinates: coords,
        status,
        condition: f64::INFINITY,
        residual: f64::INFINITY,
        polish_step: f64::INFINITY,
        multiplicity: 1,
    };
    if end.stop == Stop::Diverged || affine_norm(&end.w) > settings.divergence_bound {
        return (bad(end.w[..n].to_vec(), PathStatus::Diverged), false);
    }
    let mut x: Vec<C64> = end.w[..n].iter().map(|z| z / h).collect();
    if failed_in_flight {
        let (vals, jac) = sys.affine_jacobian(&x, b);
        let point = TrackedPoint {
            residual: max_norm(&vals),
            condition: condition_number(&jac, n),
            ..bad(x, PathStatus::Stalled)
        };
        return (point, true);
    }
    let origin = x.clone();
    let mut last = f64::INFINITY;
    for _ in 0..settings.polish_iterations {
        let (mut vals, mut jac) = sys.affine_jacobian(&x, b);
        if !lu_solve(&mut jac, n, &mut vals) {
            break;
        }
        let step = max_norm(&vals);
        if !step.is_finite() {
            break;
        }
        x.iter_mut().zip(&vals).for_each(|(a, d)| *a -= d);
        last = step / (1.0 + max_norm(&x));
        if last <= 1e-15 {
            break;
        }
    }
    let (vals, jac) = sys.affine_jacobian(&x, b);
    let residual = max_norm(&vals);
    let norm = max_norm(&x);
    let moved = x.iter().zip(&origin).map(|(a, o)| (a - o).norm()).fold(0.0, f64::max);
    let status = if !norm.is_finite() || norm > settings.divergence_bound {
        PathStatus::Diverged
    } else if residual <= settings.residual_tolerance
        && last <= settings.polish_tolerance
        && (!follow || moved <= 1e-3 * (1.0 + norm))
    {
        PathStatus::Converged
    } else {
        PathStatus::Stalled
    };
    let condition = condition_number(&jac, n);
    (
        TrackedPoint {
            coordinates: x,
            status,
            condition,
            residual,
            polish_step: last,
            multiplicity: 1,
        },
        false,
    )
}

fn worker_pool() -> Option<rayon::ThreadPool> {
    let cap: usize = std::env::var(WORKERS_ENV).ok()?.parse().ok()?;
    rayon::ThreadPoolBuilder::new().num_threads(cap.max(1)).build().ok()
}

/// Tracks every start point; results come back in input order.
fn track_all<F>(count: usize, job: F) -> Vec<(TrackedPoint, bool)>
where
    F: Fn(usize) -> (TrackedPoint, bool) + Sync + Send,
{
    let run = || (0..count).into_par_iter().map(&job).collect();
    match worker_pool() {
        Some(pool) => pool.install(run),
        None => run(),
    }
}

/// Tracks one path of `H` from `start` (affine coordinates of a solution at
/// `t = 1`) and classifies its endpoint.
pub fn track_path(hom: &TotalDegreeStart<'_>, start: &[C64], settings: &TrackerSettings) -> TrackedPoint {
    let w = hom.system.to_projective(start);
    finish(hom.system, &hom.b, track(hom, &w, settings), settings, true).0
}

/// Tracks a start point given in projective coordinates, as produced by
/// [`TotalDegreeStart::start_point`].
pub fn track_projective(hom: &TotalDegreeStart<'_>, start: &[C64], settings: &TrackerSettings) -> TrackedPoint {
    finish(hom.system, &hom.b, track(hom, start, settings), settings, true).0
}

/// Assigns multiplicities by clustering converged endpoints.
fn assign_multiplicities(points: &mut [TrackedPoint], layout: &Layout, radius: f64) {
    let idx: Vec<usize> = (0..points.len())
        .filter(|&i| points[i].status == PathStatus::Converged)
        .collect();
    let normalized: Vec<Vec<C64>> = idx.iter().map(|&i| layout.normalized(&points[i].coordinates)).collect();
    let mut cluster = vec![usize::MAX; idx.len()];
    let mut sizes = Vec::new();
    for a in 0..idx.len() {
        if cluster[a] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        cluster[a] = id;
        let mut size = 1;
        for b in a + 1..idx.len() {
            if cluster[b] == usize::MAX && distance(&normalized[a], &normalized[b]) < radius {
                cluster[b] = id;
                size += 1;
            }
        }
        sizes.push(size);
    }
    for (pos, &i) in idx.iter().enumerate() {
        points[i].multiplicity = sizes[cluster[pos]];
    }
}

fn distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Endpoints of one removal level with their counting flags.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSet {
    pub k: usize,
    pub layout: Layout,
    pub parameters: Vec<C64>,
    pub tolerance: f64,
    pub condition_limit: f64,
    pub points: Vec<TrackedPoint>,
    pub flags: Vec<bool>,
}

impl WitnessSet {
    pub fn new(
        k: usize,
        layout: Layout,
        parameters: Vec<C64>,
        points: Vec<TrackedPoint>,
        tolerance: f64,
        condition_limit: f64,
    ) -> Self {
        let mut ws = Self {
            k,
            layout,
            parameters,
            tolerance,
            condition_limit,
            points,
            flags: Vec::new(),
        };
        ws.flags = ws.compute_flags(tolerance);
        ws
    }

    pub fn degree(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    fn compute_flags(&self, tolerance: f64) -> Vec<bool> {
        self.points
            .iter()
            .map(|p| p.is_regular(self.condition_limit) && self.layout.min_coordinate(&p.coordinates) >= tolerance)
            .collect()
    }

    pub fn counted_points(&self) -> impl Iterator<Item = &TrackedPoint> {
        self.points.iter().zip(&self.flags).filter(|(_, &f)| f).map(|(p, _)| p)
    }
}

/// Recomputes the flags at a new tolerance from stored endpoints only.
pub fn reclassify(ws: &WitnessSet, tolerance: f64) -> WitnessSet {
    assert!(tolerance > 0.0, "tolerance must be positive");
    let mut out = ws.clone();
    out.tolerance = tolerance;
    out.flags = out.compute_flags(tolerance);
    out
}

/// A Lagrange system ready for tracking: multipliers are made projective by
/// an extra multiplier `λ_0` on the data terms and a random linear patch on
/// `(λ_0, …, λ_c')`, so multiplier blow-up shows up as `λ_0 → 0` instead of
/// a diverging path.
#[derive(Debug, Clone)]
pub struct NumericSystem {
    square: SquareSystem,
    layout: Layout,
    k: usize,
    lambda_patch: Vec<C64>,
}

impl NumericSystem {
    pub fn from_removal(sys: &RemovalSystem<C64>, source: &mut RandomSource) -> Result<Self, TrackerError> {
        let m = sys.lagrange_count() + 1;
        let lambda_patch: Vec<C64> = (0..m).map(|_| source.unit_complex()).collect();
        let projective: Vec<C64> = (0..=sys.unknown_count() + 1).map(|_| source.unit_complex()).collect();
        Self::with_patches(sys, lambda_patch, projective)
    }

    pub fn with_patches(
        sys: &RemovalSystem<C64>,
        lambda_patch: Vec<C64>,
        projective_patch: Vec<C64>,
    ) -> Result<Self, TrackerError> {
        let p = sys.primal_count();
        let c = sys.lagrange_count();
        let k = sys.parameter_count();
        let unknowns = p + c + 1;
        assert_eq!(lambda_patch.len(), c + 1);
        let old = sys.ring();
        let mut names: Vec<String> = old.names()[..p].to_vec();
        names.push(old.fresh_name("lam0"));
        names.extend(old.names()[p..].iter().cloned());
        let ring = VariableRing::new(&names, old.field()).expect("names stay distinct");
        let map: Vec<usize> = (0..old.len()).map(|j| if j < p { j } else { j + 1 }).collect();
        let lam0 = Polynomial::variable(&ring, p);
        let mut polys: Vec<Polynomial<C64>> = sys.defining_equations().iter().map(|e| e.remap(&ring, &map)).collect();
        let lam_range = p..p + c + 1;
        for row in sys.lagrange_rows() {
            let row = row.remap(&ring, &map);
            let (free, rest): (Vec<_>, Vec<_>) = row
                .terms()
                .map(|(e, v)| (e.clone(), *v))
                .partition(|(e, _)| e.powers()[lam_range.clone()].iter().all(|&x| x == 0));
            let free = Polynomial::from_terms(&ring, free);
            let rest = Polynomial::from_terms(&ring, rest);
            polys.push(&rest + &(&free * &lam0));
        }
        let patch = lambda_patch
            .iter()
            .enumerate()
            .fold(Polynomial::constant(&ring, C64::new(-1.0, 0.0)), |acc, (i, a)| {
                &acc + &Polynomial::variable(&ring, p + i).scale(a)
            });
        polys.push(patch);
        let square = SquareSystem::with_patch(&polys, unknowns, projective_patch)?;
        debug_assert_eq!(square.parameters(), k);
        Ok(Self {
            square,
            layout: Layout {
                primal: p,
                multipliers: c + 1,
            },
            k,
            lambda_patch,
        })
    }

    /// A square system without multipliers, tracked as is.
    pub fn plain(polys: &[Polynomial<C64>], unknowns: usize, source: &mut RandomSource) -> Result<Self, TrackerError> {
        Ok(Self {
            square: SquareSystem::new(polys, unknowns, source)?,
            layout: Layout {
                primal: unknowns,
                multipliers: 0,
            },
            k: 0,
            lambda_patch: Vec::new(),
        })
    }

    pub fn square(&self) -> &SquareSystem {
        &self.square
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lambda_patch(&self) -> &[C64] {
        &self.lambda_patch
    }

    pub fn projective_patch(&self) -> &[C64] {
        self.square.patch()
    }
}

/// Solves the system at generic complex parameters by total-degree homotopy.
pub fn solve_generic(
    sys: &NumericSystem,
    source: &mut RandomSource,
    settings: &TrackerSettings,
) -> Result<WitnessSet, TrackerError> {
    let b: Vec<C64> = (0..sys.square.params).map(|_| source.unit_complex()).collect();
    solve_at(sys, &b, source, settings)
}

/// Solves the system at the given parameters by total-degree homotopy.
pub fn solve_at(
    sys: &NumericSystem,
    b: &[C64],
    source: &mut RandomSource,
    settings: &TrackerSettings,
) -> Result<WitnessSet, TrackerError> {
    settings.validate()?;
    let mut attempt = 0;
    loop {
        let start = TotalDegreeStart::new(&sys.square, b, source)?;
        let count = usize::try_from(start.path_count()).expect("path count fits in memory");
        let results = track_all(count, |i| {
            let w = start.start_point(i as u128);
            finish(&sys.square, b, track(&start, &w, settings), settings, false)
        });
        let failed = results.iter().filter(|(_, f)| *f).count();
        if failed as f64 > settings.max_failure_rate * count as f64 {
            attempt += 1;
            if attempt < 2 {
                continue;
            }
            return Err(TrackerError::TooManyFailures { failed, total: count });
        }
        // Paths from a total-degree start jump between roots, so the number
        // of paths landing on a root says nothing about its multiplicity;
        // singular roots are caught by the condition and polish tests.
        let points: Vec<TrackedPoint> = results.into_iter().map(|(p, _)| p).collect();
        let points = dedup(points, &sys.layout, settings.dedup_radius);
        return Ok(WitnessSet::new(
            sys.k,
            sys.layout,
            b.to_vec(),
            points,
            settings.tolerance,
            settings.condition_limit,
        ));
    }
}

/// Keeps the first converged point of each cluster and every non-converged
/// endpoint that is still finite.
fn dedup(points: Vec<TrackedPoint>, layout: &Layout, radius: f64) -> Vec<TrackedPoint> {
    let mut kept: Vec<(TrackedPoint, Vec<C64>)> = Vec::new();
    for p in points {
        if p.status == PathStatus::Diverged {
            continue;
        }
        let norm = layout.normalized(&p.coordinates);
        if p.status == PathStatus::Converged
            && kept
                .iter()
                .any(|(q, qn)| q.status == PathStatus::Converged && distance(qn, &norm) < radius)
        {
            continue;
        }
        kept.push((p, norm));
    }
    kept.into_iter().map(|(p, _)| p).collect()
}

/// Moves the counted points of `ws` to the parameters `target` along a
/// straight segment and classifies the endpoints.
pub fn parameter_track(
    sys: &NumericSystem,
    ws: &WitnessSet,
    target: &[C64],
    settings: &TrackerSettings,
) -> Result<WitnessSet, TrackerError> {
    settings.validate()?;
    sys.square.check_params(target)?;
    sys.square.check_params(&ws.parameters)?;
    if ws.layout != sys.layout {
        return Err(TrackerError::InvalidWitnessSet("layout differs from the system".into()));
    }
    let hom = ParameterHomotopy {
        system: &sys.square,
        start: ws.parameters.clone(),
        target: target.to_vec(),
    };
    let starts: Vec<&TrackedPoint> = ws.counted_points().collect();
    let results = track_all(starts.len(), |i| {
        let w = sys.square.to_projective(&starts[i].coordinates);
        finish(&sys.square, target, track(&hom, &w, settings), settings, true)
    });
    let mut points: Vec<TrackedPoint> = results.into_iter().map(|(p, _)| p).collect();
    assign_multiplicities(&mut points, &sys.layout, settings.dedup_radius);
    Ok(WitnessSet::new(
        ws.k,
        ws.layout,
        target.to_vec(),
        points,
        ws.tolerance,
        settings.condition_limit,
    ))
}

/// Parameter homotopy between two parameter values of a plain system.
pub fn parameter_homotopy_endpoints(
    sys: &NumericSystem,
    starts: &[Vec<C64>],
    from: &[C64],
    to: &[C64],
    settings: &TrackerSettings,
) -> Result<Vec<TrackedPoint>, TrackerError> {
    sys.square.check_params(from)?;
    sys.square.check_params(to)?;
    let hom = ParameterHomotopy {
        system: &sys.square,
        start: from.to_vec(),
        target: to.to_vec(),
    };
    let results = track_all(starts.len(), |i| {
        let w = sys.square.to_projective(&starts[i]);
        finish(&sys.square, to, track(&hom, &w, settings), settings, true)
    });
    Ok(results.into_iter().map(|(p, _)| p).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse;

    fn shared_ring(names: &[&str]) -> std::sync::Arc<VariableRing> {
        VariableRing::complex(names).unwrap()
    }

    fn system(names: &[&str], eqs: &[&str], unknowns: usize, seed: u64) -> NumericSystem {
        let r = shared_ring(names);
        let polys: Vec<Polynomial<C64>> = eqs.iter().map(|e| parse(e, &r).unwrap()).collect();
        NumericSystem::plain(&polys, unknowns, &mut RandomSource::new(seed)).unwrap()
    }

    fn re(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    #[test]
    fn start_points_solve_the_start_system() {
        let sys = system(&["x", "y"], &["x^2 - y", "x*y^2 - 1"], 2, 1);
        let start = TotalDegreeStart::new(sys.square(), &[], &mut RandomSource::new(2)).unwrap();
        assert_eq!(start.path_count(), 6);
        for i in 0..6 {
            let w = start.start_point(i);
            assert!(start.start_residual(&w) <= 1e-12);
            let patch: C64 = w.iter().zip(sys.square().patch()).map(|(a, c)| a * c).sum();
            assert!((patch - 1.0).norm() < 1e-12);
        }
        let lin = system(&["x", "y", "z"], &["x+y", "y-z+1", "x+2*z"], 3, 1);
        assert_eq!(lin.square().bezout_count(), 1);
    }

    #[test]
    fn degenerate_equations_are_rejected() {
        let r = shared_ring(&["x", "b"]);
        let polys = vec![parse("b^2 + 1", &r).unwrap()];
        assert!(matches!(
            NumericSystem::plain(&polys, 1, &mut RandomSource::new(0)),
            Err(TrackerError::DegenerateEquation(0))
        ));
    }

    #[test]
    fn linear_path() {
        // x - 2 from start x^1 - r
        let sys = system(&["x"], &["x - 2"], 1, 3);
        let ws = solve_generic(&sys, &mut RandomSource::new(4), &TrackerSettings::default()).unwrap();
        assert_eq!(ws.degree(), 1);
        assert!((ws.points[0].coordinates[0] - re(2.0)).norm() < 1e-12);
    }

    #[test]
    fn explicit_start_point_tracks_to_the_root() {
        let sys = system(&["x"], &["x^2 - 4"], 1, 5);
        let start = TotalDegreeStart::new(sys.square(), &[], &mut RandomSource::new(6)).unwrap();
        let mut ends: Vec<f64> = (0..2)
            .map(|i| {
                let p = track_projective(&start, &start.start_point(i), &TrackerSettings::default());
                assert_eq!(p.status, PathStatus::Converged);
                assert!(p.coordinates[0].im.abs() < 1e-10);
                p.coordinates[0].re
            })
            .collect();
        ends.sort_by(f64::total_cmp);
        assert!((ends[0] + 2.0).abs() < 1e-10 && (ends[1] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn missing_root_diverges() {
        // x*y - 1 and x - 0*y: total degree 2, only one finite root (x = 0 has none)
        let sys = system(&["x", "y"], &["x*y - 1", "x"], 2, 7);
        let ws = solve_generic(&sys, &mut RandomSource::new(8), &TrackerSettings::default()).unwrap();
        assert_eq!(ws.degree(), 0);
        assert!(ws.points.iter().all(|p| p.status != PathStatus::Converged));
    }

    #[test]
    fn cyclic_three_roots() {
        let sys = system(
            &["x", "y", "z"],
            &["x+y+z", "x*y+y*z+z*x", "x*y*z-1"],
            3,
            9,
        );
        let ws = solve_generic(&sys, &mut RandomSource::new(10), &TrackerSettings::default()).unwrap();
        assert_eq!(ws.degree(), 6);
        for p in ws.counted_points() {
            assert!(p.residual <= 1e-8);
        }
    }

    #[test]
    fn singular_roots_are_not_regular() {
        // x^2 = 0 twice, y = 1
        let sys = system(&["x", "y"], &["(x-1)^2", "y - 1"], 2, 11);
        let ws = solve_generic(&sys, &mut RandomSource::new(12), &TrackerSettings::default()).unwrap();
        assert_eq!(ws.degree(), 0);
    }

    #[test]
    fn parameter_homotopy_follows_roots() {
        let r = shared_ring(&["x", "b"]);
        let polys = vec![parse("x^2 - b", &r).unwrap()];
        let sys = NumericSystem::plain(&polys, 1, &mut RandomSource::new(13)).unwrap();
        let settings = TrackerSettings::default();
        let ws = solve_generic(&sys, &mut RandomSource::new(14), &settings).unwrap();
        assert_eq!(ws.degree(), 2);
        let moved = parameter_track(&sys, &ws, &[re(9.0)], &settings).unwrap();
        assert_eq!(moved.degree(), 2);
        let mut ends: Vec<f64> = moved.points.iter().map(|p| p.coordinates[0].re).collect();
        ends.sort_by(f64::total_cmp);
        assert!((ends[0] + 3.0).abs() < 1e-10 && (ends[1] - 3.0).abs() < 1e-10);

        // identity homotopy
        let same = parameter_track(&sys, &ws, &ws.parameters.clone(), &settings).unwrap();
        assert_eq!(same.degree(), 2);

        // both roots collide at b = 0
        let merged = parameter_track(&sys, &ws, &[re(0.0)], &settings).unwrap();
        assert_eq!(merged.degree(), 0);
    }

    #[test]
    fn reclassify_is_monotone_and_idempotent() {
        let r = shared_ring(&["x", "y"]);
        let polys = vec![parse("x - 1/10000", &r).unwrap(), parse("y - 3", &r).unwrap()];
        let sys = NumericSystem::plain(&polys, 2, &mut RandomSource::new(15)).unwrap();
        let ws = solve_generic(&sys, &mut RandomSource::new(16), &TrackerSettings::default()).unwrap();
        assert_eq!(ws.degree(), 1);
        let tight = reclassify(&ws, 1e-3);
        assert_eq!(tight.degree(), 0);
        assert_eq!(reclassify(&tight, 1e-3), tight);
        assert_eq!(reclassify(&ws, 10.0).degree(), 0);
        assert_eq!(reclassify(&tight, 1e-300).degree(), 1);
    }
}
