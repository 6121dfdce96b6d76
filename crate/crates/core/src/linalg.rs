//! Gaussian elimination over the rationals.

use num::Zero;

use crate::rational::Q;

/// Reduced row echelon form of `m` (in place). Returns the pivot columns.
fn rref(m: &mut [Vec<Q>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let (pivot_row, other) = if i < row {
                    let (a, b) = m.split_at_mut(row);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[row], &mut b[0])
                };
                for (x, p) in other.iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let cols = first.len();
    let mut m = rows.to_vec();
    rref(&mut m, cols).len()
}

pub fn determinant(rows: &[Vec<Q>]) -> Q {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut det = Q::from_integer(1.into());
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for i in col + 1..n {
            if m[i][col].is_zero() {
                continue;
            }
            let f = &m[i][col] / &pivot;
            for j in col..n {
                let d = &f * &m[col][j];
                m[i][j] -= d;
            }
        }
    }
    det
}

/// Solves `a x = b`. Free variables are set to zero, so the result is linear in `b`.
/// Returns `None` when the system is inconsistent.
pub fn solve(a: &[Vec<Q>], b: &[Q], cols: usize) -> Option<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = m[row][cols].clone();
    }
    Some(x)
}

/// Basis of the null space of `a` (as a list of vectors of length `cols`).
pub fn kernel(a: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::from_integer(1.into());
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            v
        })
        .collect()
}
