//! Row reduction and kernels over `F_q` for prime `q`.

use alloc::vec;
use alloc::vec::Vec;

fn inv_mod(a: u64, q: u64) -> u64 {
    // Fermat; q is prime.
    let (mut base, mut e, mut r) = (a % q, q - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    r
}

/// Reduced row echelon form. Zero rows are dropped; returns the pivot columns.
pub(crate) fn rref(rows: &mut Vec<Vec<u64>>, q: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] % q != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = inv_mod(rows[r][col], q);
        for v in rows[r].iter_mut() {
            *v = *v * inv % q;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[col] != 0 {
                let f = row[col];
                for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                    *v = (*v + (q - f) * pv) % q;
                }
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

/// Basis of `{ x : row . x = 0 for every row }` given rows in RREF.
pub(crate) fn kernel_basis(rows: &[Vec<u64>], pivots: &[usize], n: usize, q: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (row, &p) in rows.iter().zip(pivots) {
            v[p] = (q - row[free] % q) % q;
        }
        out.push(v);
    }
    out
}

pub(crate) fn dot(a: &[u64], b: &[usize], q: u64) -> u64 {
    a.iter()
        .zip(b)
        .fold(0, |acc, (&x, &y)| (acc + x * y as u64) % q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_is_annihilated() {
        let q = 5;
        let mut rows = vec![vec![1, 2, 3, 4], vec![2, 4, 1, 3], vec![3, 1, 4, 2]];
        let pivots = rref(&mut rows, q);
        let basis = kernel_basis(&rows, &pivots, 4, q);
        assert_eq!(pivots.len() + basis.len(), 4);
        for v in &basis {
            let vu: Vec<usize> = v.iter().map(|&x| x as usize).collect();
            for r in &rows {
                assert_eq!(dot(r, &vu, q), 0);
            }
        }
        assert_eq!(inv_mod(3, 7), 5);
    }
}
