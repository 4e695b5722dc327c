//! Dense Gaussian elimination over a [`Weight`] field.

use alloc::vec::Vec;

use crate::weight::Weight;

fn is_negligible<T: Weight>(x: &T) -> bool {
    x.abs() <= T::tolerance()
}

/// `rows[target] -= factor * rows[source]` from column `from` on; `source < target`.
fn subtract_row<T: Weight>(rows: &mut [Vec<T>], source: usize, target: usize, factor: &T, from: usize) {
    let (head, tail) = rows.split_at_mut(target);
    for (t, s) in tail[0][from..].iter_mut().zip(&head[source][from..]) {
        *t = t.clone() - factor.clone() * s.clone();
    }
}

/// Solves the square system `a x = b`; `None` when singular.
pub(crate) fn solve<T: Weight>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap_or(core::cmp::Ordering::Equal)
        })?;
        if is_negligible(&a[pivot][col]) {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            if a[row][col].is_zero() {
                continue;
            }
            let factor = a[row][col].clone() / a[col][col].clone();
            subtract_row(&mut a, col, row, &factor, col);
            let v = factor * b[col].clone();
            b[row] = b[row].clone() - v;
        }
    }
    let mut x = alloc::vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in row + 1..n {
            acc = acc - a[row][k].clone() * x[k].clone();
        }
        x[row] = acc / a[row][row].clone();
    }
    Some(x)
}

/// Row rank.
pub(crate) fn rank<T: Weight>(mut rows: Vec<Vec<T>>) -> usize {
    let Some(cols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let pivot = (rank..rows.len()).max_by(|&i, &j| {
            rows[i][col].abs().partial_cmp(&rows[j][col].abs()).unwrap_or(core::cmp::Ordering::Equal)
        });
        let Some(pivot) = pivot else { break };
        if is_negligible(&rows[pivot][col]) {
            continue;
        }
        rows.swap(rank, pivot);
        for row in rank + 1..rows.len() {
            if rows[row][col].is_zero() {
                continue;
            }
            let factor = rows[row][col].clone() / rows[rank][col].clone();
            subtract_row(&mut rows, rank, row, &factor, col);
        }
        rank += 1;
    }
    rank
}

/// Affine dimension of a point set (`-1` encoded as `None` for the empty set).
pub(crate) fn affine_dim<T: Weight>(points: &[Vec<T>]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs = rest
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a.clone() - b.clone()).collect())
        .collect();
    Some(rank(diffs))
}

pub(crate) fn dot<T: Weight>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    core::iter::from_fn(move || {
        let out = current.clone()?;
        let next = current.as_mut().unwrap();
        let mut i = k;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}
