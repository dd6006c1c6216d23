//! Exact linear algebra over the rationals, sized for exceptional lattices
//! (a few dozen rows at most).

use num_traits::Zero;

use crate::rat::{rat_int, Rat};

/// Solves `M x = rhs` by Gaussian elimination over exact rationals.
/// Returns `None` when `M` is singular.
pub fn solve(m: &[Vec<i64>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let n = m.len();
    assert_eq!(rhs.len(), n);
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .map(|row| {
            assert_eq!(row.len(), n);
            row.iter().map(|&x| rat_int(x)).collect()
        })
        .collect();
    let mut b: Vec<Rat> = rhs.to_vec();

    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let sub = &f * &a[col][c];
                a[r][c] -= sub;
            }
            let sub = &f * &b[col];
            b[r] -= sub;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Exact inverse via Gauss-Jordan; `None` when singular.
pub fn invert(m: &[Vec<i64>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .map(|row| row.iter().map(|&x| rat_int(x)).collect())
        .collect();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| rat_int((i == j) as i64)).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for c in 0..n {
            a[col][c] /= &p;
            inv[col][c] /= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                let s = &f * &a[col][c];
                a[r][c] -= s;
                let s = &f * &inv[col][c];
                inv[r][c] -= s;
            }
        }
    }
    Some(inv)
}

/// Exact determinant of an integer matrix, via fraction-free elimination
/// in i128 (Bareiss). Panics on overflow, which the lattice sizes here
/// never reach.
pub fn det_i64(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Checks negative definiteness through the leading principal minors:
/// the k-th minor must carry the sign (-1)^k.
pub fn is_negative_definite(m: &[Vec<i64>]) -> bool {
    let n = m.len();
    for k in 1..=n {
        let sub: Vec<Vec<i64>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
        let d = det_i64(&sub);
        let want_positive = k % 2 == 0;
        if d == 0 || (d > 0) != want_positive {
            return false;
        }
    }
    true
}
