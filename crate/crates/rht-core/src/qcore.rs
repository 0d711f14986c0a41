//! Exact rational scalars and dense matrices over the rationals.
//!
//! Everything downstream (cochain complexes, Dupont homotopies, the minimal
//! model construction) funnels its linear algebra through this module, so the
//! pivoting rule and basis normalizations here are fixed once and for all:
//! elimination always picks the first nonzero column and, within it, the
//! remaining row with the smallest index. That makes every output of this
//! module a deterministic function of its input.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;

/// Exact rational scalar. Always stored reduced with positive denominator.
pub type Rat = BigRational;

/// Convenience constructor from machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Integer-valued rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

pub type QVector = Vec<Rat>;

pub fn vec_zero(n: usize) -> QVector {
    vec![Rat::zero(); n]
}

pub fn vec_add(a: &[Rat], b: &[Rat]) -> QVector {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> QVector {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(c: &Rat, a: &[Rat]) -> QVector {
    a.iter().map(|x| c * x).collect()
}

pub fn vec_is_zero(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_zero())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QcoreError {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("index out of range: ({0}, {1})")]
    IndexOutOfRange(usize, usize),
}

/// Dense matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>, // row-major
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
        }
        QMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        QMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[QVector], height: usize) -> Self {
        for c in cols {
            assert_eq!(c.len(), height, "ragged columns");
        }
        Self::from_fn(height, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        assert!(i < self.rows && j < self.cols, "entry access out of range");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        assert!(i < self.rows && j < self.cols, "entry access out of range");
        self.entries[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> QMatrix {
        QMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn row(&self, i: usize) -> QVector {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn col(&self, j: usize) -> QVector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<QVector, QcoreError> {
        if v.len() != self.cols {
            return Err(QcoreError::DimMismatch(format!(
                "matrix is {}x{}, vector has length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec_zero(self.rows);
        for (i, slot) in out.iter_mut().enumerate() {
            let mut acc = Rat::zero();
            for (j, vj) in v.iter().enumerate() {
                let e = self.get(i, j);
                if !e.is_zero() && !vj.is_zero() {
                    acc += e * vj;
                }
            }
            *slot = acc;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix, QcoreError> {
        if self.cols != other.rows {
            return Err(QcoreError::DimMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = QMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &QMatrix) -> Result<QMatrix, QcoreError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(QcoreError::DimMismatch("matrix add".into()));
        }
        Ok(QMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j) + other.get(i, j)
        }))
    }

    pub fn scale(&self, c: &Rat) -> QMatrix {
        QMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Reduced row echelon form, together with the pivot columns.
    /// Pivoting rule: scan columns left to right, pick the row with the
    /// smallest index among the not-yet-pivoted rows.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..m.cols {
            if next_row >= m.rows {
                break;
            }
            let Some(pr) = (next_row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if pr != next_row {
                for j in 0..m.cols {
                    let a = m.get(pr, j).clone();
                    let b = m.get(next_row, j).clone();
                    m.set(pr, j, b);
                    m.set(next_row, j, a);
                }
            }
            let inv = m.get(next_row, col).recip();
            for j in 0..m.cols {
                let v = m.get(next_row, j) * &inv;
                m.set(next_row, j, v);
            }
            for r in 0..m.rows {
                if r != next_row && !m.get(r, col).is_zero() {
                    let factor = m.get(r, col).clone();
                    for j in 0..m.cols {
                        let v = m.get(r, j) - &factor * m.get(next_row, j);
                        m.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            next_row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Solves A x = b exactly. Returns `None` when the system is inconsistent;
/// free variables are set to zero so the answer is deterministic.
pub fn solve_linear(a: &QMatrix, b: &[Rat]) -> Result<Option<QVector>, QcoreError> {
    if a.rows() != b.len() {
        return Err(QcoreError::DimMismatch(format!(
            "matrix has {} rows, rhs has length {}",
            a.rows(),
            b.len()
        )));
    }
    let mut aug = QMatrix::from_fn(a.rows(), a.cols() + 1, |i, j| {
        if j < a.cols() {
            a.get(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    let (r, pivots) = aug.rref();
    aug = r;
    // A pivot in the last column means an equation 0 = 1.
    if pivots.iter().any(|&p| p == a.cols()) {
        return Ok(None);
    }
    let mut x = vec_zero(a.cols());
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = aug.get(row, a.cols()).clone();
    }
    Ok(Some(x))
}

/// Canonical basis of the kernel {x : A x = 0}, derived from the reduced row
/// echelon form: one vector per free column, ordered by free column index.
pub fn kernel_basis(a: &QMatrix) -> Vec<QVector> {
    let (r, pivots) = a.rref();
    let pivot_set: Vec<usize> = pivots.clone();
    let mut basis = Vec::new();
    for j in 0..a.cols() {
        if pivot_set.contains(&j) {
            continue;
        }
        let mut v = vec_zero(a.cols());
        v[j] = Rat::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -r.get(row, j).clone();
        }
        basis.push(v);
    }
    basis
}

/// Incremental row space with online reduction. Rows are kept in echelon form
/// with leading coefficient 1, so membership tests are exact and stable.
#[derive(Debug, Clone, Default)]
pub struct RowSpace {
    rows: Vec<QVector>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current rows.
    pub fn reduce(&self, v: &[Rat]) -> QVector {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let c = w[p].clone();
                for (wi, ri) in w.iter_mut().zip(row) {
                    *wi -= &c * ri;
                }
            }
        }
        w
    }

    /// Inserts `v`; returns true when it enlarged the span.
    pub fn insert(&mut self, v: &[Rat]) -> bool {
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = w[p].recip();
        let normalized: QVector = w.iter().map(|x| x * &lead).collect();
        self.rows.push(normalized);
        self.pivots.push(p);
        true
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        vec_is_zero(&self.reduce(v))
    }
}

/// Greedy basis completion: returns the indices of a minimal subset of
/// `candidates` (scanned in order) whose addition to `span` spans the joint
/// span of both families.
pub fn complete_basis(span: &[QVector], candidates: &[QVector]) -> Result<Vec<usize>, QcoreError> {
    let dim = span
        .first()
        .or_else(|| candidates.first())
        .map(|v| v.len());
    let Some(dim) = dim else {
        return Ok(Vec::new());
    };
    if span.iter().chain(candidates).any(|v| v.len() != dim) {
        return Err(QcoreError::DimMismatch(
            "basis completion over vectors of unequal length".into(),
        ));
    }
    let mut space = RowSpace::new();
    for v in span {
        space.insert(v);
    }
    let mut chosen = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        if space.insert(c) {
            chosen.push(i);
        }
    }
    Ok(chosen)
}

/// Renders a rational as `p` or `p/q`.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q`.
pub fn rat_from_str(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(Rat::from(n))
        }
    }
}

pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_identity() {
        let a = QMatrix::identity(2);
        let b = vec![rat_int(3), rat(-1, 2)];
        let x = solve_linear(&a, &b).unwrap().unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_homogeneous_underdetermined() {
        let a = QMatrix::from_rows(vec![vec![rat_int(1), rat_int(1)]]);
        let x = solve_linear(&a, &[Rat::zero()]).unwrap().unwrap();
        // Contract: any x with x1 + x2 = 0; our normalization gives (0, 0).
        assert_eq!(&x[0] + &x[1], Rat::zero());
    }

    #[test]
    fn solve_inconsistent() {
        let a = QMatrix::from_rows(vec![
            vec![rat_int(1), rat_int(1)],
            vec![rat_int(1), rat_int(1)],
        ]);
        let r = solve_linear(&a, &[rat_int(0), rat_int(1)]).unwrap();
        assert!(r.is_none());
    }

    #[test]
    fn solve_dim_mismatch() {
        let a = QMatrix::identity(2);
        assert!(solve_linear(&a, &[rat_int(1)]).is_err());
    }

    #[test]
    fn kernel_of_row() {
        let a = QMatrix::from_rows(vec![vec![rat_int(1), rat_int(1)]]);
        let k = kernel_basis(&a);
        assert_eq!(k, vec![vec![rat_int(-1), rat_int(1)]]);
    }

    #[test]
    fn kernel_of_zero_matrix() {
        let a = QMatrix::zero(2, 3);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            for (j, e) in v.iter().enumerate() {
                assert_eq!(*e, if i == j { Rat::one() } else { Rat::zero() });
            }
        }
    }

    #[test]
    fn kernel_rank_deficient() {
        let a = QMatrix::from_rows(vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(4)],
        ]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 1);
        // Independent oracle: A x = 0 and rank + nullity = cols.
        assert!(vec_is_zero(&a.mul_vec(&k[0]).unwrap()));
        assert_eq!(a.rank() + k.len(), a.cols());
    }

    #[test]
    fn completion_examples() {
        let e1 = vec![rat_int(1), rat_int(0)];
        let e2 = vec![rat_int(0), rat_int(1)];
        let got = complete_basis(std::slice::from_ref(&e1), &[e1.clone(), e2.clone()]).unwrap();
        assert_eq!(got, vec![1]);
        let got = complete_basis(&[], &[vec![rat_int(1), rat_int(1)]]).unwrap();
        assert_eq!(got, vec![0]);
        let got = complete_basis(&[e1, e2], &[vec![rat_int(2), rat_int(3)]]).unwrap();
        assert!(got.is_empty());
    }

    #[test]
    fn rat_round_trip() {
        for s in ["3", "-7/2", "0", "22/7"] {
            let r = rat_from_str(s).unwrap();
            assert_eq!(rat_to_string(&r), s);
        }
        assert!(rat_from_str("1/0").is_none());
    }
}
