//! Dense exact linear algebra over Q(√2).

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{QSqrt2, Rational};

pub type Matrix = Vec<Vec<QSqrt2>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { QSqrt2::one() } else { QSqrt2::zero() }).collect())
        .collect()
}

pub fn scalar_matrix(n: usize, c: QSqrt2) -> Matrix {
    let mut m = identity(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = c;
    }
    m
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let m = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .filter(|(x, _)| !x.is_zero())
                        .fold(QSqrt2::zero(), |acc, (x, brow)| acc + *x * brow[j])
                })
                .collect()
        })
        .collect()
}

/// Row echelon form in place; returns the pivot columns.
pub fn row_reduce(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // smallest entry as pivot keeps intermediate fractions small
        let Some(p) = (r..rows).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| m[i][c].height()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = *x * inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                let (src, dst) = if i < r {
                    let (lo, hi) = m.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = m.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    if !s.is_zero() {
                        *d -= f * *s;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    if let Some(r) = integer_rank(m) {
        return r;
    }
    let mut w = m.clone();
    row_reduce(&mut w).len()
}

/// Fraction-free rank of a rational matrix with rows kept primitive;
/// `None` for irrational entries or on i128 overflow.
fn integer_rank(m: &Matrix) -> Option<usize> {
    if !m.iter().flatten().all(QSqrt2::is_rational) {
        return None;
    }
    let primitive = |row: &mut Vec<i128>| {
        let g = row.iter().fold(0i128, |g, x| g.gcd(x));
        if g > 1 {
            row.iter_mut().for_each(|x| *x /= g);
        }
    };
    let mut rows: Vec<Vec<i128>> = Vec::with_capacity(m.len());
    for r in m {
        let l = r.iter().fold(1i128, |l, x| l.lcm(x.r.denom()));
        let mut row = r.iter().map(|x| (x.r * Rational::from_integer(l)).to_integer()).collect::<Vec<_>>();
        primitive(&mut row);
        if row.iter().any(|x| *x != 0) {
            rows.push(row);
        }
    }
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).filter(|&i| rows[i][c] != 0).min_by_key(|&i| rows[i][c].abs()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[c] == 0 {
                continue;
            }
            let g = pivot[c].gcd(&row[c]);
            let (a, b) = (pivot[c] / g, row[c] / g);
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x = x.checked_mul(a)?.checked_sub(y.checked_mul(b)?)?;
            }
            primitive(row);
        }
        rank += 1;
    }
    Some(rank)
}

pub fn inverse(m: &Matrix) -> Result<Matrix> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("matrix is not square".into()));
    }
    let mut aug: Matrix = m
        .iter()
        .zip(identity(n))
        .map(|(r, id)| r.iter().copied().chain(id).collect())
        .collect();
    let piv = row_reduce(&mut aug);
    if !piv.iter().copied().take(n).eq(0..n) {
        return Err(Error::SingularMatrix);
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `(positive, negative, zero)` counts of a symmetric matrix, via congruence
/// diagonalization.
pub fn signature(sym: &Matrix) -> (usize, usize, usize) {
    let n = sym.len();
    let mut a = sym.clone();
    let mut diag = Vec::with_capacity(n);
    let mut k = 0;
    while k < n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                swap_sym(&mut a, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // e_k <- e_k + e_j makes the diagonal 2 a_kj
                add_sym(&mut a, k, j, QSqrt2::one());
            } else {
                diag.push(QSqrt2::zero());
                k += 1;
                continue;
            }
        }
        let p = a[k][k];
        let pinv = p.inv().expect("nonzero pivot");
        for j in k + 1..n {
            if !a[j][k].is_zero() {
                let f = -(a[j][k] * pinv);
                add_sym(&mut a, j, k, f);
            }
        }
        diag.push(p);
        k += 1;
    }
    diag.iter().fold((0, 0, 0), |(p, m, z), d| match d.signum() {
        1 => (p + 1, m, z),
        -1 => (p, m + 1, z),
        _ => (p, m, z + 1),
    })
}

fn swap_sym(a: &mut Matrix, i: usize, j: usize) {
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Row and column operation `e_i <- e_i + f e_j`.
fn add_sym(a: &mut Matrix, i: usize, j: usize, f: QSqrt2) {
    let n = a.len();
    for c in 0..n {
        let v = a[j][c];
        a[i][c] += f * v;
    }
    for r in 0..n {
        let v = a[r][j];
        a[r][i] += f * v;
    }
}

/// Solves `m x = b` when consistent, picking free variables as zero.
pub fn solve(m: &Matrix, b: &[QSqrt2]) -> Option<Vec<QSqrt2>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(r, x)| r.iter().copied().chain(std::iter::once(*x)).collect())
        .collect();
    let piv = row_reduce(&mut aug);
    if piv.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![QSqrt2::zero(); cols];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = aug[r][cols];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i128) -> QSqrt2 {
        QSqrt2::int(n)
    }

    #[test]
    fn inverse_round_trip() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2));
        assert!(matches!(inverse(&vec![vec![q(1), q(2)], vec![q(2), q(4)]]), Err(Error::SingularMatrix)));
    }

    #[test]
    fn signature_of_hyperbolic_plane() {
        let m = vec![vec![q(0), q(1)], vec![q(1), q(0)]];
        assert_eq!(signature(&m), (1, 1, 0));
        let d = vec![vec![q(-2), q(0), q(0)], vec![q(0), q(0), q(0)], vec![q(0), q(0), q(3)]];
        assert_eq!(signature(&d), (1, 1, 1));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert!(solve(&m, &[q(1), q(3)]).is_none());
        let x = solve(&m, &[q(1), q(2)]).unwrap();
        assert_eq!(x[0] + x[1], q(1));
    }
}
