//! Straight-line evaluation of polynomial systems with their Jacobians, and
//! a small dense complex LU.

use num_complex::Complex64;
use num_traits::{One, Zero};

type C64 = Complex64;

#[derive(Debug, Clone)]
struct Term {
    coef: C64,
    /// (variable, exponent) with exponent >= 1
    factors: Vec<(usize, u32)>,
}

/// A list of polynomials compiled for repeated evaluation.
#[derive(Debug, Clone)]
pub(crate) struct CompiledSystem {
    nvars: usize,
    polys: Vec<Vec<Term>>,
    max_exp: Vec<u32>,
}

impl CompiledSystem {
    /// Each polynomial is a list of `(coefficient, exponent vector)` pairs.
    pub fn new(nvars: usize, polys: Vec<Vec<(C64, Vec<u32>)>>) -> Self {
        let mut max_exp = vec![0u32; nvars];
        let polys = polys
            .into_iter()
            .map(|terms| {
                terms
                    .into_iter()
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(coef, exps)| {
                        debug_assert_eq!(exps.len(), nvars);
                        let factors: Vec<(usize, u32)> = exps
                            .iter()
                            .enumerate()
                            .filter(|(_, &e)| e > 0)
                            .map(|(v, &e)| (v, e))
                            .collect();
                        for &(v, e) in &factors {
                            max_exp[v] = max_exp[v].max(e);
                        }
                        Term { coef, factors }
                    })
                    .collect()
            })
            .collect();
        Self { nvars, polys, max_exp }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    fn powers(&self, x: &[C64]) -> Vec<Vec<C64>> {
        x.iter()
            .zip(&self.max_exp)
            .map(|(&xi, &m)| {
                let mut p = Vec::with_capacity(m as usize + 1);
                p.push(C64::one());
                for e in 1..=m as usize {
                    p.push(p[e - 1] * xi);
                }
                p
            })
            .collect()
    }

    pub fn eval(&self, x: &[C64], out: &mut [C64]) {
        let pw = self.powers(x);
        for (o, terms) in out.iter_mut().zip(&self.polys) {
            *o = terms
                .iter()
                .map(|t| t.factors.iter().fold(t.coef, |acc, &(v, e)| acc * pw[v][e as usize]))
                .sum();
        }
    }

    /// Values and the full Jacobian (row-major, `len() x nvars()`).
    pub fn eval_jac(&self, x: &[C64], out: &mut [C64], jac: &mut [C64]) {
        let pw = self.powers(x);
        jac.iter_mut().for_each(|j| *j = C64::zero());
        let mut prefix: Vec<C64> = Vec::new();
        for (i, terms) in self.polys.iter().enumerate() {
            let row = &mut jac[i * self.nvars..(i + 1) * self.nvars];
            let mut value = C64::zero();
            for t in terms {
                let m = t.factors.len();
                prefix.clear();
                let mut acc = t.coef;
                for &(v, e) in &t.factors {
                    prefix.push(acc);
                    acc *= pw[v][e as usize];
                }
                value += acc;
                let mut suffix = C64::one();
                for idx in (0..m).rev() {
                    let (v, e) = t.factors[idx];
                    row[v] += prefix[idx] * suffix * pw[v][e as usize - 1] * e as f64;
                    suffix *= pw[v][e as usize];
                }
            }
            out[i] = value;
        }
    }
}

/// Solves `a x = b` in place (`a` row-major `n x n`, overwritten). Returns
/// `false` on an exactly singular pivot.
pub(crate) fn lu_solve(a: &mut [C64], n: usize, b: &mut [C64]) -> bool {
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].norm_sqr();
        for r in col + 1..n {
            let v = a[r * n + col].norm_sqr();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 || !best.is_finite() {
            return false;
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            b.swap(col, piv);
        }
        let inv = a[col * n + col].inv();
        for r in col + 1..n {
            let f = a[r * n + col] * inv;
            if f.is_zero() {
                continue;
            }
            for c in col + 1..n {
                let v = a[col * n + c];
                a[r * n + c] -= f * v;
            }
            let bc = b[col];
            b[r] -= f * bc;
        }
    }
    for r in (0..n).rev() {
        let mut s = b[r];
        for c in r + 1..n {
            s -= a[r * n + c] * b[c];
        }
        b[r] = s / a[r * n + r];
    }
    true
}

pub(crate) fn max_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
