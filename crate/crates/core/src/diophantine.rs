//! Minimal nonnegative integer solutions of linear systems, in the style of
//! Contejean–Devie. This is the exact engine behind translation-set
//! intersections: the breadth-first frontier only grows a partial solution
//! `z` by `e_i` when the defect `Az` has negative inner product with the
//! `i`-th column, which is enough to reach every minimal solution.

use std::collections::BTreeSet;

use crate::lattice::{self, Point};

fn apply(columns: &[Point], z: &[i64], n: usize) -> Point {
    let mut v = vec![0i64; n];
    for (zi, col) in z.iter().zip(columns) {
        if *zi != 0 {
            for (a, b) in v.iter_mut().zip(col) {
                *a += zi * b;
            }
        }
    }
    v
}

fn dominates(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

/// Minimal nonzero `z ∈ N^k` with `Σ z_i·col_i = 0`, optionally capping one
/// coordinate (used by the inhomogeneous wrapper).
fn hilbert_basis(columns: &[Point], n: usize, cap: Option<(usize, i64)>) -> Vec<Vec<i64>> {
    let k = columns.len();
    let mut basis: Vec<Vec<i64>> = Vec::new();
    let mut frontier: BTreeSet<Vec<i64>> = (0..k)
        .map(|i| {
            let mut e = vec![0i64; k];
            e[i] = 1;
            e
        })
        .filter(|z| match cap {
            Some((idx, c)) => z[idx] <= c,
            None => true,
        })
        .collect();
    while !frontier.is_empty() {
        let mut next: BTreeSet<Vec<i64>> = BTreeSet::new();
        for z in &frontier {
            let defect = apply(columns, z, n);
            if lattice::is_zero(&defect) {
                if !basis.iter().any(|b| dominates(z, b)) {
                    basis.retain(|b| !dominates(b, z));
                    basis.push(z.clone());
                }
                continue;
            }
            for (i, col) in columns.iter().enumerate() {
                if lattice::dot(&defect, col) < 0 {
                    let mut t = z.clone();
                    t[i] += 1;
                    if let Some((idx, c)) = cap {
                        if t[idx] > c {
                            continue;
                        }
                    }
                    if basis.iter().any(|b| dominates(&t, b)) {
                        continue;
                    }
                    next.insert(t);
                }
            }
        }
        frontier = next;
    }
    basis.sort();
    basis
}

/// Minimal `z ∈ N^k` with `Σ z_i·col_i = target`, componentwise minimality.
/// Solved through the homogenization `[columns | -target]·(z, z0) = 0` with
/// `z0` capped at 1; minimal solutions of the original system are exactly the
/// capped Hilbert-basis elements with `z0 = 1`.
pub fn minimal_solutions(columns: &[Point], target: &Point) -> Vec<Vec<i64>> {
    let n = target.len();
    debug_assert!(columns.iter().all(|c| c.len() == n));
    let mut cols = columns.to_vec();
    cols.push(lattice::scale(-1, target));
    let k = columns.len();
    hilbert_basis(&cols, n, Some((k, 1)))
        .into_iter()
        .filter(|z| z[k] == 1)
        .map(|z| z[..k].to_vec())
        .collect()
}
