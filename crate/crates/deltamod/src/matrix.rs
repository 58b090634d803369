//! Dense exact-integer matrices with overflow-checked minor/rank arithmetic.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Row-major dense integer matrix. Entries are i64; every determinant-like
/// computation runs in i128 with checked arithmetic so overflow is an error,
/// never a wrap.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape("matrix must have at least one row and column".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::Shape("matrix must have at least one row and column".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("rows have unequal lengths".into()));
        }
        let data = rows.iter().flatten().copied().collect();
        IntMatrix::new(rows.len(), cols, data)
    }

    pub fn from_cols(cols: &[Vec<i64>]) -> Result<Self> {
        if cols.is_empty() || cols[0].is_empty() {
            return Err(Error::Shape("matrix must have at least one row and column".into()));
        }
        let r = cols[0].len();
        if cols.iter().any(|c| c.len() != r) {
            return Err(Error::Shape("columns have unequal lengths".into()));
        }
        let mut m = Self::zeros(r, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Horizontal concatenation (self | other).
    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows {
            return Err(Error::Shape("hstack requires equal row counts".into()));
        }
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j));
            }
        }
        Ok(m)
    }

    /// Exact matrix product with i128 accumulation; entries must fit in i64.
    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i128 = 0;
                for k in 0..self.cols {
                    let p = (self.get(i, k) as i128)
                        .checked_mul(other.get(k, j) as i128)
                        .ok_or(Error::Overflow)?;
                    acc = acc.checked_add(p).ok_or(Error::Overflow)?;
                }
                m.set(i, j, i64::try_from(acc).map_err(|_| Error::Overflow)?);
            }
        }
        Ok(m)
    }

    /// Determinant of the whole (square) matrix.
    pub fn det(&self) -> Result<i128> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let sub: Vec<Vec<i128>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) as i128).collect())
            .collect();
        det_exact(sub)
    }

    /// Determinant of the submatrix selected by `row_idx` x `col_idx`.
    pub fn minor(&self, row_idx: &[usize], col_idx: &[usize]) -> Result<i128> {
        let m = row_idx.len();
        if m == 0 || m != col_idx.len() {
            return Err(Error::Shape("minor requires equally many distinct rows and columns".into()));
        }
        if row_idx.iter().any(|&i| i >= self.rows) || col_idx.iter().any(|&j| j >= self.cols) {
            return Err(Error::IndexOutOfRange);
        }
        if has_duplicate(row_idx) || has_duplicate(col_idx) {
            return Err(Error::DuplicateIndex);
        }
        let sub: Vec<Vec<i128>> = row_idx
            .iter()
            .map(|&i| col_idx.iter().map(|&j| self.get(i, j) as i128).collect())
            .collect();
        det_exact(sub)
    }

    /// Exact rank over the rationals (fraction-free elimination).
    pub fn rank(&self) -> Result<usize> {
        let mut a: Vec<Vec<i128>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) as i128).collect())
            .collect();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev: i128 = 1;
        for col in 0..cols {
            let Some(p) = (rank..rows).find(|&i| a[i][col] != 0) else {
                continue;
            };
            a.swap(rank, p);
            for i in rank + 1..rows {
                for j in col + 1..cols {
                    let t1 = a[rank][col].checked_mul(a[i][j]).ok_or(Error::Overflow)?;
                    let t2 = a[i][col].checked_mul(a[rank][j]).ok_or(Error::Overflow)?;
                    a[i][j] = t1.checked_sub(t2).ok_or(Error::Overflow)? / prev;
                }
                a[i][col] = 0;
            }
            prev = a[rank][col];
            rank += 1;
            if rank == rows {
                break;
            }
        }
        Ok(rank)
    }
}

fn has_duplicate(idx: &[usize]) -> bool {
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] == idx[j] {
                return true;
            }
        }
    }
    false
}

#[inline]
fn cm(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

#[inline]
fn cs(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

/// Exact determinant: direct cofactor formulas up to 3x3, fraction-free
/// Bareiss elimination beyond (the 2x2/3x3 cases are the hot path of the
/// hyperedge predicate).
pub(crate) fn det_exact(a: Vec<Vec<i128>>) -> Result<i128> {
    match a.len() {
        1 => Ok(a[0][0]),
        2 => cs(cm(a[0][0], a[1][1])?, cm(a[0][1], a[1][0])?),
        3 => {
            let m1 = cm(a[0][0], cs(cm(a[1][1], a[2][2])?, cm(a[1][2], a[2][1])?)?)?;
            let m2 = cm(a[0][1], cs(cm(a[1][0], a[2][2])?, cm(a[1][2], a[2][0])?)?)?;
            let m3 = cm(a[0][2], cs(cm(a[1][0], a[2][1])?, cm(a[1][1], a[2][0])?)?)?;
            cs(m1, m2).and_then(|x| x.checked_add(m3).ok_or(Error::Overflow))
        }
        _ => bareiss(a),
    }
}

fn bareiss(mut a: Vec<Vec<i128>>) -> Result<i128> {
    let n = a.len();
    let mut sign: i128 = 1;
    let mut prev: i128 = 1;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return Ok(0);
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = cs(cm(a[k][k], a[i][j])?, cm(a[i][k], a[k][j])?)?;
                a[i][j] = t / prev; // division is exact (Bareiss identity)
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    cm(sign, a[n - 1][n - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn minor_identity() {
        let a = IntMatrix::identity(2);
        assert_eq!(a.minor(&[0, 1], &[0, 1]).unwrap(), 1);
    }

    #[test]
    fn minor_of_column_selection() {
        let a = m(&[&[1, 0, 1, 1], &[0, 1, 1, 2]]);
        assert_eq!(a.minor(&[0, 1], &[2, 3]).unwrap(), 1);
    }

    #[test]
    fn minor_2x2_direct() {
        let a = m(&[&[2, 3], &[4, 1]]);
        assert_eq!(a.minor(&[0, 1], &[0, 1]).unwrap(), -10);
    }

    #[test]
    fn minor_antisymmetry() {
        let a = m(&[&[2, 3], &[4, 1]]);
        assert_eq!(a.minor(&[0, 1], &[1, 0]).unwrap(), 10);
    }

    #[test]
    fn minor_rejects_bad_indices() {
        let a = IntMatrix::identity(2);
        assert_eq!(a.minor(&[0, 2], &[0, 1]), Err(Error::IndexOutOfRange));
        assert_eq!(a.minor(&[0, 0], &[0, 1]), Err(Error::DuplicateIndex));
    }

    #[test]
    fn rank_basics() {
        assert_eq!(IntMatrix::identity(2).rank().unwrap(), 2);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank().unwrap(), 1);
        // 2x5 full-row-rank example
        let a = m(&[&[1, 0, 1, 1, 1], &[0, 1, 1, 2, 3]]);
        assert_eq!(a.rank().unwrap(), 2);
        assert_eq!(IntMatrix::zeros(3, 3).rank().unwrap(), 0);
    }

    #[test]
    fn det_matches_bareiss_on_4x4() {
        let a = m(&[
            &[2, 0, 1, 3],
            &[1, 1, 0, 2],
            &[0, 4, 1, 1],
            &[3, 1, 2, 0],
        ]);
        // expansion computed independently
        assert_eq!(a.det().unwrap(), 2 * a.minor(&[1, 2, 3], &[1, 2, 3]).unwrap()
            - a.minor(&[1, 2, 3], &[0, 2, 3]).unwrap() * 0
            + a.minor(&[1, 2, 3], &[0, 1, 3]).unwrap()
            - 3 * a.minor(&[1, 2, 3], &[0, 1, 2]).unwrap());
    }

    #[test]
    fn overflow_is_reported() {
        let a = m(&[&[i64::MAX, 1], &[1, i64::MAX]]);
        // (2^63-1)^2 overflows i128? No: ~8.5e37 < 1.7e38, fits. Force it bigger.
        assert!(a.det().is_ok());
        let b = a.mul(&a);
        assert_eq!(b, Err(Error::Overflow));
    }

    #[test]
    fn mul_and_hstack() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let id = IntMatrix::identity(2);
        assert_eq!(a.mul(&id).unwrap(), a);
        let h = a.hstack(&id).unwrap();
        assert_eq!(h.cols(), 4);
        assert_eq!(h.col(2), vec![1, 0]);
    }
}
