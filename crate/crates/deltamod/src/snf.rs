//! Smith normal form P·A·Q = diag(α₁,…,α_r) with the divisibility chain.

use crate::matrix::IntMatrix;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfDecomposition {
    pub p: IntMatrix,
    pub s: IntMatrix,
    pub q: IntMatrix,
    /// Elementary divisors, α_i | α_{i+1}, product = |det A|.
    pub alphas: Vec<i64>,
}

struct Work {
    n: usize,
    b: Vec<Vec<i128>>,
    p: Vec<Vec<i128>>,
    q: Vec<Vec<i128>>,
}

impl Work {
    fn row_sub(&mut self, i: usize, k: usize, f: i128) -> Result<()> {
        for j in 0..self.n {
            let t = f.checked_mul(self.b[k][j]).ok_or(Error::Overflow)?;
            self.b[i][j] = self.b[i][j].checked_sub(t).ok_or(Error::Overflow)?;
            let t = f.checked_mul(self.p[k][j]).ok_or(Error::Overflow)?;
            self.p[i][j] = self.p[i][j].checked_sub(t).ok_or(Error::Overflow)?;
        }
        Ok(())
    }

    fn col_sub(&mut self, j: usize, k: usize, f: i128) -> Result<()> {
        for i in 0..self.n {
            let t = f.checked_mul(self.b[i][k]).ok_or(Error::Overflow)?;
            self.b[i][j] = self.b[i][j].checked_sub(t).ok_or(Error::Overflow)?;
            let t = f.checked_mul(self.q[i][k]).ok_or(Error::Overflow)?;
            self.q[i][j] = self.q[i][j].checked_sub(t).ok_or(Error::Overflow)?;
        }
        Ok(())
    }

    fn row_swap(&mut self, i: usize, k: usize) {
        self.b.swap(i, k);
        self.p.swap(i, k);
    }

    fn col_swap(&mut self, j: usize, k: usize) {
        for i in 0..self.n {
            self.b[i].swap(j, k);
            self.q[i].swap(j, k);
        }
    }

    fn row_negate(&mut self, i: usize) {
        for j in 0..self.n {
            self.b[i][j] = -self.b[i][j];
            self.p[i][j] = -self.p[i][j];
        }
    }

    /// Settle position t: clear row t and column t beyond the pivot, and keep
    /// going until the pivot divides every entry of the trailing submatrix.
    /// That last condition is what makes the divisibility chain hold without
    /// any separate repair pass.
    fn settle(&mut self, t: usize) -> Result<()> {
        'restart: loop {
            // move the absolutely smallest nonzero of the trailing submatrix to (t,t)
            let mut best: Option<(usize, usize)> = None;
            for i in t..self.n {
                for j in t..self.n {
                    if self.b[i][j] != 0
                        && best.map_or(true, |(bi, bj)| self.b[i][j].abs() < self.b[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return Err(Error::Singular);
            };
            if bi != t {
                self.row_swap(t, bi);
            }
            if bj != t {
                self.col_swap(t, bj);
            }
            let piv = self.b[t][t];
            for i in t + 1..self.n {
                if self.b[i][t] != 0 {
                    let f = self.b[i][t].div_euclid(piv);
                    self.row_sub(i, t, f)?;
                    if self.b[i][t] != 0 {
                        continue 'restart; // euclidean remainder became the new smallest
                    }
                }
            }
            for j in t + 1..self.n {
                if self.b[t][j] != 0 {
                    let f = self.b[t][j].div_euclid(piv);
                    self.col_sub(j, t, f)?;
                    if self.b[t][j] != 0 {
                        continue 'restart;
                    }
                }
            }
            // pivot must divide the rest; otherwise pull the offending row up
            // and let the euclidean rounds shrink the pivot to the gcd
            for i in t + 1..self.n {
                for j in t + 1..self.n {
                    if self.b[i][j] % piv != 0 {
                        self.row_sub(t, i, -1)?;
                        continue 'restart;
                    }
                }
            }
            return Ok(());
        }
    }
}

/// Smith normal form of a nonsingular square matrix.
pub fn snf(a: &IntMatrix) -> Result<SnfDecomposition> {
    if !a.is_square() {
        return Err(Error::Shape("Smith normal form requires a square matrix".into()));
    }
    let n = a.rows();
    let mut w = Work {
        n,
        b: (0..n).map(|i| (0..n).map(|j| a.get(i, j) as i128).collect()).collect(),
        p: (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect(),
        q: (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect(),
    };

    for t in 0..n {
        w.settle(t)?;
        if w.b[t][t] < 0 {
            w.row_negate(t);
        }
    }

    let to_i64 = |m: &Vec<Vec<i128>>| -> Result<IntMatrix> {
        let mut out = Vec::with_capacity(n * n);
        for row in m {
            for &x in row {
                out.push(i64::try_from(x).map_err(|_| Error::Overflow)?);
            }
        }
        IntMatrix::new(n, n, out)
    };
    let s = to_i64(&w.b)?;
    let p = to_i64(&w.p)?;
    let q = to_i64(&w.q)?;
    let alphas: Vec<i64> = (0..n).map(|i| s.get(i, i)).collect();
    debug_assert_eq!(p.mul(a).and_then(|pa| pa.mul(&q)).as_ref(), Ok(&s));
    Ok(SnfDecomposition { p, s, q, alphas })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn check(a: &IntMatrix, expect: &[i64]) {
        let d = snf(a).unwrap();
        assert_eq!(d.alphas, expect);
        assert_eq!(d.p.mul(a).unwrap().mul(&d.q).unwrap(), d.s);
        assert_eq!(d.p.det().unwrap().abs(), 1);
        assert_eq!(d.q.det().unwrap().abs(), 1);
        let prod: i128 = d.alphas.iter().map(|&x| x as i128).product();
        assert_eq!(prod, a.det().unwrap().abs());
    }

    #[test]
    fn already_diagonal() {
        check(&m(&[&[1, 0], &[0, 7]]), &[1, 7]);
    }

    #[test]
    fn gcd_one_forces_chain() {
        check(&m(&[&[2, 1], &[0, 2]]), &[1, 4]);
    }

    #[test]
    fn diagonal_needs_merge() {
        check(&m(&[&[4, 0], &[0, 6]]), &[2, 12]);
    }

    #[test]
    fn three_by_three() {
        check(&m(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]), &[2, 2, 156]);
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(snf(&m(&[&[1, 1], &[1, 1]])).unwrap_err(), Error::Singular);
    }
}
