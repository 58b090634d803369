//! Hermite normal form A = U·H with unimodular U and upper-triangular H.

use crate::matrix::IntMatrix;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Upper-triangular square matrix with positive diagonal and, for i < j,
/// 0 <= h_ij < h_jj. This is the unique left-unimodular normal form; the
/// determinant is the product of the diagonal.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct HnfMatrix {
    inner: IntMatrix,
}

// deserialization must not bypass the invariant checks
impl<'de> Deserialize<'de> for HnfMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = IntMatrix::deserialize(d)?;
        HnfMatrix::try_new(m).map_err(serde::de::Error::custom)
    }
}

impl HnfMatrix {
    pub fn try_new(m: IntMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Shape("Hermite normal form must be square".into()));
        }
        let n = m.rows();
        for i in 0..n {
            if m.get(i, i) <= 0 {
                return Err(Error::Shape("diagonal entries must be positive".into()));
            }
            for j in 0..n {
                if j < i && m.get(i, j) != 0 {
                    return Err(Error::Shape("matrix is not upper triangular".into()));
                }
                if j > i && !(0 <= m.get(i, j) && m.get(i, j) < m.get(j, j)) {
                    return Err(Error::Shape("off-diagonal entries are not reduced".into()));
                }
            }
        }
        Ok(HnfMatrix { inner: m })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.inner
    }

    pub fn dim(&self) -> usize {
        self.inner.rows()
    }

    pub fn diag(&self) -> Vec<i64> {
        (0..self.dim()).map(|i| self.inner.get(i, i)).collect()
    }

    /// Determinant = product of the diagonal.
    pub fn det(&self) -> Result<i128> {
        let mut d: i128 = 1;
        for i in 0..self.dim() {
            d = d.checked_mul(self.inner.get(i, i) as i128).ok_or(Error::Overflow)?;
        }
        Ok(d)
    }
}

/// Compute the Hermite normal form: returns (U, H) with A = U·H, |det U| = 1.
///
/// Row-style Euclidean reduction on a working copy; the applied elementary
/// operations are inverted on the fly into U so that A = U·H holds exactly at
/// every step.
pub fn hnf(a: &IntMatrix) -> Result<(IntMatrix, HnfMatrix)> {
    if !a.is_square() {
        return Err(Error::Shape("Hermite normal form requires a square matrix".into()));
    }
    let n = a.rows();
    let mut h: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j) as i128).collect())
        .collect();
    // u accumulates the inverses of the row operations applied to h, as
    // column operations, so that a = u * h throughout.
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();

    let sub_row = |h: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, i: usize, k: usize, q: i128| -> Result<()> {
        // h: row_i -= q * row_k;  u: col_k += q * col_i
        for j in 0..n {
            let t = q.checked_mul(h[k][j]).ok_or(Error::Overflow)?;
            h[i][j] = h[i][j].checked_sub(t).ok_or(Error::Overflow)?;
        }
        for rw in u.iter_mut() {
            let t = q.checked_mul(rw[i]).ok_or(Error::Overflow)?;
            rw[k] = rw[k].checked_add(t).ok_or(Error::Overflow)?;
        }
        Ok(())
    };

    for j in 0..n {
        // euclidean gcd elimination below the diagonal of column j
        loop {
            let Some(p) = (j..n).filter(|&i| h[i][j] != 0).min_by_key(|&i| (h[i][j].abs(), i)) else {
                return Err(Error::Singular);
            };
            if p != j {
                h.swap(j, p);
                for rw in u.iter_mut() {
                    rw.swap(j, p);
                }
            }
            let mut done = true;
            for i in j + 1..n {
                if h[i][j] != 0 {
                    let q = h[i][j].div_euclid(h[j][j]);
                    sub_row(&mut h, &mut u, i, j, q)?;
                    if h[i][j] != 0 {
                        done = false; // remainder left; another euclidean round
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[j][j] < 0 {
            for x in h[j].iter_mut() {
                *x = -*x;
            }
            for rw in u.iter_mut() {
                rw[j] = -rw[j];
            }
        }
    }
    // reduce the above-diagonal entries
    for j in 0..n {
        for i in 0..j {
            let q = h[i][j].div_euclid(h[j][j]);
            if q != 0 {
                sub_row(&mut h, &mut u, i, j, q)?;
            }
        }
    }

    let to_i64 = |m: Vec<Vec<i128>>| -> Result<IntMatrix> {
        let mut out = Vec::with_capacity(n * n);
        for row in &m {
            for &x in row {
                out.push(i64::try_from(x).map_err(|_| Error::Overflow)?);
            }
        }
        IntMatrix::new(n, n, out)
    };
    let h = HnfMatrix::try_new(to_i64(h)?)?;
    let u = to_i64(u)?;
    debug_assert_eq!(u.mul(h.matrix()).as_ref(), Ok(a));
    Ok((u, h))
}
