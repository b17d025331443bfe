//! Exact linear algebra over the rationals and the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Q;

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : A x = 0}` where `A` has `cols` columns.
pub fn nullspace(rows: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); cols];
        v[free] = Q::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves the square system `A x = b`; `None` when `A` is singular.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

pub fn det(a: &[Vec<Q>]) -> Q {
    let n = a.len();
    let mut m = a.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] * &inv;
                for j in c..n {
                    let t = &f * &m[c][j];
                    m[i][j] -= t;
                }
            }
        }
    }
    d
}

/// Determinant of a small integer matrix.
pub fn det_i64(a: &[Vec<i64>]) -> i64 {
    match a.len() {
        0 => 1,
        1 => a[0][0],
        2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
        3 => {
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        }
        n => {
            let mut d = 0;
            for j in 0..n {
                let minor: Vec<Vec<i64>> = a[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                d += s * a[0][j] * det_i64(&minor);
            }
            d
        }
    }
}

/// Adjugate of a small integer matrix, so that `adj * a = det * I`.
pub fn adjugate_i64(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    if n == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = a
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &x)| x).collect())
                .collect();
            let s = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = s * det_i64(&minor);
        }
    }
    adj
}

/// Unimodular row reduction: returns `(u, h)` with `u * v = h`, `u`
/// unimodular and `h` in row echelon form (Hermite style, pivots positive).
pub fn integer_row_echelon(v: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let rows = v.len();
    let cols = if rows == 0 { 0 } else { v[0].len() };
    let mut h: Vec<Vec<BigInt>> = v.to_vec();
    let mut u: Vec<Vec<BigInt>> =
        (0..rows).map(|i| (0..rows).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclid on column c among rows r.., keeping u in sync.
        loop {
            let nz: Vec<usize> = (r..rows).filter(|&i| !h[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| h[i][c].abs()).unwrap();
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if !h[i][c].is_zero() {
                    let f = h[i][c].div_floor(&h[r][c]);
                    for j in 0..cols {
                        let t = &f * &h[r][j];
                        h[i][j] -= t;
                    }
                    for j in 0..rows {
                        let t = &f * &u[r][j];
                        u[i][j] -= t;
                    }
                    if !h[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut() {
                *x = -x.clone();
            }
            for x in u[r].iter_mut() {
                *x = -x.clone();
            }
        }
        r += 1;
    }
    (u, h)
}

/// Inverse of a square rational matrix.
pub fn inverse(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(a: &[Vec<Q>], x: &[Q]) -> Vec<Q> {
    a.iter().map(|row| super::rational::dot(row, x)).collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::{q, qr};

    fn qm(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let a = qm(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(rank(&a), 1);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(mat_vec(&a, &v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solve_and_det() {
        let a = qm(&[&[2, 1], &[1, 3]]);
        assert_eq!(det(&a), q(5));
        let x = solve(&a, &[q(1), q(2)]).unwrap();
        assert_eq!(x, vec![qr(1, 5), qr(3, 5)]);
        assert!(solve(&qm(&[&[1, 1], &[2, 2]]), &[q(0), q(1)]).is_none());
        let inv = inverse(&a).unwrap();
        assert_eq!(inv[0][0], qr(3, 5));
    }

    #[test]
    fn adjugate_matches_det() {
        let a = vec![vec![1, 2, 0], vec![0, 1, 4], vec![5, 6, 0]];
        let d = det_i64(&a);
        let adj = adjugate_i64(&a);
        for i in 0..3 {
            for j in 0..3 {
                let s: i64 = (0..3).map(|k| adj[i][k] * a[k][j]).sum();
                assert_eq!(s, if i == j { d } else { 0 });
            }
        }
    }

    #[test]
    fn integer_echelon_is_unimodular() {
        let v: Vec<Vec<BigInt>> = [[1i64, 0], [0, 1], [-1, 1], [0, -1]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let (u, h) = integer_row_echelon(&v);
        let uq: Vec<Vec<Q>> = u.iter().map(|r| r.iter().map(|x| Q::from_integer(x.clone())).collect()).collect();
        assert_eq!(det(&uq).abs(), q(1));
        assert_eq!(h[0], vec![BigInt::one(), BigInt::zero()]);
        assert!(h[2].iter().all(Zero::is_zero) && h[3].iter().all(Zero::is_zero));
        for (i, row) in u.iter().enumerate() {
            for c in 0..2 {
                let s: BigInt = row.iter().zip(&v).map(|(a, vr)| a * &vr[c]).sum();
                assert_eq!(s, h[i][c]);
            }
        }
    }
}
