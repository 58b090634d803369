//! Explicit witness families: small generic Δ-modular matrices with many
//! distinct columns, used as lower-bound constructions and golden tests.

use crate::matrix::IntMatrix;
use crate::{Error, Result};
use num_integer::gcd;

/// The r×(r+1) matrix (I_r | Δ·1): columns e₁,…,e_r and (Δ,…,Δ)ᵀ. Generic
/// Δ-modular for every Δ ≥ 1, witnessing g(Δ,r) ≥ r + 1.
pub fn construct_basic(delta: i64, r: usize) -> Result<IntMatrix> {
    if delta < 1 || r < 1 {
        return Err(Error::InvalidParam("delta and r must be positive".into()));
    }
    let mut m = IntMatrix::zeros(r, r + 1);
    for i in 0..r {
        m.set(i, i, 1);
        m.set(i, r, delta);
    }
    Ok(m)
}

/// Block matrix with leading column (0,1) and then, for each j = 1..m, the
/// columns (j,k) with a_j ≤ k ≤ b_j and gcd(j,k) = 1, k ascending. No
/// Δ-bound guarantee; callers certify the result.
pub fn construct_m(a: &[i64], b: &[i64]) -> Result<IntMatrix> {
    if a.len() != b.len() {
        return Err(Error::Shape("parameter vectors must have equal length".into()));
    }
    if a.iter().zip(b).any(|(x, y)| x > y) {
        return Err(Error::InvalidParam("need a_j <= b_j in every block".into()));
    }
    let mut cols: Vec<Vec<i64>> = vec![vec![0, 1]];
    for (idx, (&lo, &hi)) in a.iter().zip(b).enumerate() {
        let j = (idx + 1) as i64;
        for k in lo..=hi {
            if gcd(j, k) == 1 {
                cols.push(vec![j, k]);
            }
        }
    }
    IntMatrix::from_cols(&cols)
}

/// The 2×(Δ+2) matrix with columns (1,0),(0,1),(1,1),(1,2),…,(1,Δ). Generic
/// Δ-modular; witnesses g(Δ,2) ≥ Δ + 2.
pub fn construct_f1(delta: i64) -> Result<IntMatrix> {
    if delta < 1 {
        return Err(Error::InvalidParam("delta must be positive".into()));
    }
    let mut cols: Vec<Vec<i64>> = vec![vec![1, 0], vec![0, 1]];
    cols.extend((1..=delta).map(|k| vec![1, k]));
    IntMatrix::from_cols(&cols)
}

/// f1 extended by the column (2,Δ), legal when Δ is odd: Δ + 3 columns.
pub fn construct_f2(delta: i64) -> Result<IntMatrix> {
    if delta < 3 || delta % 2 == 0 {
        return Err(Error::InvalidParam("needs odd delta >= 3".into()));
    }
    let f1 = construct_f1(delta)?;
    let mut cols = f1.columns();
    cols.push(vec![2, delta]);
    IntMatrix::from_cols(&cols)
}

/// The Δ+4 column family for even Δ ≡ 2 (mod 3), Δ ≥ 4, i.e. Δ = 12s+2
/// (s ≥ 1) or Δ = 12s+8 (s ≥ 0), via the two block-parameter cases.
pub fn construct_f3(delta: i64) -> Result<IntMatrix> {
    if delta < 4 {
        return Err(Error::InvalidParam("needs delta >= 4".into()));
    }
    let (a, b) = match delta % 12 {
        2 => {
            let s = (delta - 2) / 12;
            (vec![0, 4 * s + 1, 9 * s + 1], vec![7 * s + 1, 10 * s + 1, 12 * s + 2])
        }
        8 => {
            let s = (delta - 8) / 12;
            (vec![0, 4 * s + 3, 9 * s + 7], vec![7 * s + 5, 10 * s + 7, 12 * s + 8])
        }
        _ => {
            return Err(Error::InvalidParam(
                "needs even delta congruent to 2 mod 3".into(),
            ))
        }
    };
    construct_m(&a, &b)
}

/// Suitable ν values for s = 0..12; the family ends at s = 12.
const NU: [i64; 13] = [8, 6, 6, 6, 6, 4, 4, 4, 4, 2, 2, 2, 2];

/// The five-block family at Δ = 30s + 24 with Δ + 2 + ⌊ν_s/2⌋ columns,
/// 0 ≤ s ≤ 12.
pub fn construct_thirty_s24(s: i64) -> Result<IntMatrix> {
    if !(0..=12).contains(&s) {
        return Err(Error::InvalidParam("s must lie in 0..=12".into()));
    }
    let nu = NU[s as usize];
    let a = vec![0, 6 * s + 5, 12 * s + 10, 18 * s + 15, 25 * s + 21];
    let b = vec![
        11 * s + 9,
        16 * s + 13,
        21 * s + 17,
        26 * s + 13 + nu,
        30 * s + 24,
    ];
    construct_m(&a, &b)
}

fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The modular moment curve: r×p matrix with columns
/// (1, [t]_p, [t²]_p, …, [t^{r−1}]_p) for t = 1..p, residues taken in
/// {1,…,p}. Generic; Δ-modular for some Δ ≤ ⌈(r−1)^{(r−1)/2}⌉·(p−1)^{r−1}.
pub fn construct_vandermonde(p: i64, r: usize) -> Result<IntMatrix> {
    if !is_prime(p) {
        return Err(Error::InvalidParam(format!("{p} is not prime")));
    }
    if r < 2 || (p as usize) < r {
        return Err(Error::InvalidParam("needs rank >= 2 and p >= r".into()));
    }
    let cols: Vec<Vec<i64>> = (1..=p)
        .map(|t| {
            let mut col = Vec::with_capacity(r);
            let mut pw: i64 = 1;
            for _ in 0..r {
                col.push(if pw == 0 { p } else { pw });
                pw = pw * t % p;
            }
            col
        })
        .collect();
    IntMatrix::from_cols(&cols)
}
