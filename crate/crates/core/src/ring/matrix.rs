use std::collections::HashMap;

use super::{Coefficient, Polynomial, RingError};

/// Dense row-major matrix of polynomials over one ring.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix<C: Coefficient> {
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial<C>>,
}

impl<C: Coefficient> PolyMatrix<C> {
    pub fn from_rows(rows: Vec<Vec<Polynomial<C>>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        Self {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Polynomial<C> {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Polynomial<C>] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }
}

/// Jacobian of `polys` with respect to the variables listed in `vars`.
pub fn jacobian<C: Coefficient>(polys: &[Polynomial<C>], vars: &[usize]) -> Result<PolyMatrix<C>, RingError> {
    let first = polys.first().ok_or(RingError::EmptyInput)?;
    if polys.iter().any(|p| !p.same_ring(first)) {
        return Err(RingError::RingMismatch);
    }
    let rows = polys
        .iter()
        .map(|p| vars.iter().map(|&v| p.partial(v)).collect())
        .collect();
    Ok(PolyMatrix::from_rows(rows))
}

/// All `size`x`size` minors, rows chosen in lexicographic order first and
/// columns second.
///
/// Determinants are expanded along the first chosen row; sub-determinants
/// are memoized by their (row set, column set) so shared cofactors are
/// computed once.
pub fn minors<C: Coefficient>(m: &PolyMatrix<C>, size: usize) -> Result<Vec<Polynomial<C>>, RingError> {
    if size == 0 || size > m.rows.min(m.cols) {
        return Err(RingError::MinorSize {
            size,
            rows: m.rows,
            cols: m.cols,
        });
    }
    assert!(m.rows <= 64 && m.cols <= 64, "minors limited to 64x64 matrices");
    let mut memo: HashMap<(u64, u64), Polynomial<C>> = HashMap::new();
    let mut out = Vec::new();
    for rows in combinations(m.rows, size) {
        let rmask = mask(&rows);
        for cols in combinations(m.cols, size) {
            out.push(det(m, rmask, mask(&cols), &mut memo));
        }
    }
    Ok(out)
}

fn det<C: Coefficient>(
    m: &PolyMatrix<C>,
    rmask: u64,
    cmask: u64,
    memo: &mut HashMap<(u64, u64), Polynomial<C>>,
) -> Polynomial<C> {
    if let Some(d) = memo.get(&(rmask, cmask)) {
        return d.clone();
    }
    let r = rmask.trailing_zeros() as usize;
    let rest = rmask & !(1u64 << r);
    let ring = m.entries[0].ring().clone();
    let d = if rest == 0 {
        m.get(r, cmask.trailing_zeros() as usize).clone()
    } else {
        let mut acc = Polynomial::zero(&ring);
        let mut sign_positive = true;
        let mut cm = cmask;
        while cm != 0 {
            let c = cm.trailing_zeros() as usize;
            cm &= cm - 1;
            let entry = m.get(r, c);
            if !entry.is_zero() {
                let sub = det(m, rest, cmask & !(1u64 << c), memo);
                if !sub.is_zero() {
                    let prod = entry * &sub;
                    acc = if sign_positive { &acc + &prod } else { &acc - &prod };
                }
            }
            sign_positive = !sign_positive;
        }
        acc
    };
    memo.insert((rmask, cmask), d.clone());
    d
}

fn mask(idx: &[usize]) -> u64 {
    idx.iter().fold(0, |m, &i| m | (1u64 << i))
}

/// k-subsets of 0..n in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse, Rational, VariableRing};

    #[test]
    fn combinations_enumerate_lexicographically() {
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(4, 4).len(), 1);
        assert_eq!(combinations(5, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(6, 3).len(), 20);
    }

    #[test]
    fn sombrilla_jacobian() {
        let r = VariableRing::rational(&["x1", "x2", "x3"]).unwrap();
        let f: Polynomial<Rational> = parse("(x1-1)^2-(x2-1)^2*(x3-1)", &r).unwrap();
        let j = jacobian(&[f], &[0, 1, 2]).unwrap();
        assert_eq!((j.rows(), j.cols()), (1, 3));
        assert_eq!(*j.get(0, 0), parse("2*x1-2", &r).unwrap());
        assert_eq!(*j.get(0, 1), parse("-2*(x2-1)*(x3-1)", &r).unwrap());
        assert_eq!(*j.get(0, 2), parse("-(x2-1)^2", &r).unwrap());
    }

    #[test]
    fn jacobian_of_linear_and_diagonal() {
        let r = VariableRing::rational(&["x1", "x2"]).unwrap();
        let l: Vec<Polynomial<Rational>> = ["3*x1 - x2 + 4", "x1 + 5*x2"]
            .iter()
            .map(|s| parse(s, &r).unwrap())
            .collect();
        let j = jacobian(&l, &[0, 1]).unwrap();
        let consts: Vec<String> = (0..2)
            .flat_map(|i| (0..2).map(move |k| (i, k)))
            .map(|(i, k)| j.get(i, k).to_string())
            .collect();
        assert_eq!(consts, ["3", "-1", "1", "5"]);

        let sq: Vec<Polynomial<Rational>> = ["x1^2", "x2^2"].iter().map(|s| parse(s, &r).unwrap()).collect();
        let j = jacobian(&sq, &[0, 1]).unwrap();
        assert_eq!(j.get(0, 0).to_string(), "2*x1");
        assert!(j.get(0, 1).is_zero() && j.get(1, 0).is_zero());
        assert_eq!(j.get(1, 1).to_string(), "2*x2");

        assert_eq!(jacobian::<Rational>(&[], &[0]), Err(RingError::EmptyInput));
    }

    #[test]
    fn small_minors() {
        let r = VariableRing::rational(&["a", "b", "c", "d", "x", "y"]).unwrap();
        let p = |s: &str| -> Polynomial<Rational> { parse(s, &r).unwrap() };
        let m = PolyMatrix::from_rows(vec![vec![p("a"), p("b")], vec![p("c"), p("d")]]);
        assert_eq!(minors(&m, 1).unwrap(), vec![p("a"), p("b"), p("c"), p("d")]);
        assert_eq!(minors(&m, 2).unwrap(), vec![p("a*d - b*c")]);

        let m = PolyMatrix::from_rows(vec![vec![p("x"), p("y")], vec![p("y"), p("x")]]);
        assert_eq!(minors(&m, 2).unwrap(), vec![p("x^2 - y^2")]);

        let m = PolyMatrix::from_rows(vec![
            vec![p("a"), p("b"), p("c")],
            vec![p("d"), p("x"), p("y")],
        ]);
        assert_eq!(minors(&m, 2).unwrap().len(), 3);
        assert!(matches!(minors(&m, 3), Err(RingError::MinorSize { .. })));
        assert!(matches!(minors(&m, 0), Err(RingError::MinorSize { .. })));
    }

    #[test]
    fn three_by_three_determinant() {
        let r = VariableRing::rational(&["x1", "x2", "x3", "x4"]).unwrap();
        let p = |s: &str| -> Polynomial<Rational> { parse(s, &r).unwrap() };
        let m = PolyMatrix::from_rows(vec![
            vec![p("x1"), p("x2"), p("x3")],
            vec![p("x2"), p("x3"), p("x4")],
            vec![p("x3"), p("x4"), p("1")],
        ]);
        let d = &minors(&m, 3).unwrap()[0];
        // Sarrus expansion
        let expected = p("x1*x3 + x2*x4*x3 + x3*x2*x4 - x3^3 - x4^2*x1 - x2^2");
        assert_eq!(*d, expected);
    }
}
