//! Exact rank by fraction-free (Bareiss) elimination.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::arith::{div_exact, ExactInt};
use crate::construction::CrossVector;

/// Rank of an integer matrix given as rows. Rows must share one length.
///
/// Every entry after a pivot step is a minor of the input, so the division
/// by the previous pivot is exact.
pub fn rank(mut rows: Vec<Vec<ExactInt>>) -> usize {
    let Some(cols) = rows.first().map(Vec::len) else {
        return 0;
    };
    assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");

    let mut prev = ExactInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in (c + 1)..cols {
                let v = &pivot_row[c] * &row[j] - &factor * &pivot_row[j];
                row[j] = div_exact(&v, &prev);
            }
            row[c] = ExactInt::zero();
        }
        prev = rows[r][c].clone();
        r += 1;
    }
    r
}

/// Dimension of the affine hull of `points`: the rank of the differences
/// from the first point. Empty and single-point inputs give 0.
pub fn affine_rank_of(points: &[CrossVector]) -> usize {
    let Some((first, rest)) = points.split_first() else {
        return 0;
    };
    let rows = rest
        .iter()
        .map(|x| {
            (0..x.len())
                .map(|i| ExactInt::from(x.get(i) as i32 - first.get(i) as i32))
                .collect()
        })
        .collect();
    rank(rows)
}
