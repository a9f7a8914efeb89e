//! Dense Gauss elimination over F_q.

use crate::algebra::{Fe, Fq};

/// Brings `rows` (each of length `ncols`) into reduced row echelon form in
/// place, dropping zero rows. Returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Fe>>, ncols: usize, fq: &Fq) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = fq.inv(rows[r][col]);
        for x in rows[r].iter_mut().skip(col) {
            *x = fq.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col];
            for c in col..ncols {
                let sub = fq.mul(f, rows[r][c]);
                rows[i][c] = fq.sub(rows[i][c], sub);
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// A basis of `{x : A x = 0}` in reduced row echelon form: leading entries
/// are 1 and sit in increasing columns.
pub fn kernel(rows: &[Vec<Fe>], ncols: usize, fq: &Fq) -> Vec<Vec<Fe>> {
    let mut a = rows.to_vec();
    let pivots = rref(&mut a, ncols, fq);
    let mut is_pivot = vec![None; ncols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut basis: Vec<Vec<Fe>> = (0..ncols)
        .filter(|&f| is_pivot[f].is_none())
        .map(|f| {
            let mut x = vec![Fe::ZERO; ncols];
            x[f] = Fe::ONE;
            for (r, &c) in pivots.iter().enumerate() {
                x[c] = fq.neg(a[r][f]);
            }
            x
        })
        .collect();
    rref(&mut basis, ncols, fq);
    basis
}

/// Matrix-vector product.
pub fn apply(rows: &[Vec<Fe>], x: &[Fe], fq: &Fq) -> Vec<Fe> {
    rows.iter()
        .map(|row| row.iter().zip(x).fold(Fe::ZERO, |acc, (&a, &b)| fq.add(acc, fq.mul(a, b))))
        .collect()
}
