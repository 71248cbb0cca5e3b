//! Determinants over exact rational functions.

use crate::bipoly::BiRat;

/// Determinant by fraction-field Gaussian elimination.
///
/// # Panics
/// If `m` is not square.
pub fn det(m: &[Vec<BiRat>]) -> BiRat {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    if n == 0 {
        return BiRat::one();
    }
    let mut a: Vec<Vec<BiRat>> = m.to_vec();
    let mut acc = BiRat::one();
    for col in 0..n {
        // Prefer the pivot with the smallest representation.
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .min_by_key(|&r| a[r][col].num().len() + a[r][col].den().len());
        let Some(p) = pivot else {
            return BiRat::zero();
        };
        if p != col {
            a.swap(p, col);
            acc = -&acc;
        }
        let piv = a[col][col].clone();
        acc = &acc * &piv;
        let inv = piv.inv().unwrap();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            for c in col + 1..n {
                if a[col][c].is_zero() {
                    continue;
                }
                let t = &factor * &a[col][c];
                a[r][c] = &a[r][c] - &t;
            }
            a[r][col] = BiRat::zero();
        }
    }
    acc
}

/// Determinant of the submatrix on the given rows and columns.
pub fn minor(m: &[Vec<BiRat>], rows: &[usize], cols: &[usize]) -> BiRat {
    let sub: Vec<Vec<BiRat>> = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| m[r][c].clone()).collect())
        .collect();
    det(&sub)
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
