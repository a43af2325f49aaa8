//! Elimination over F_p with monic pivot rows.
//!
//! The sparse kernel keeps, for each column, the shortest row seen so far
//! with that leading column, which keeps fill-in down on the block-banded
//! systems this crate produces.

use super::{Echelon, SparseRow, DENSE_CUTOFF};
use crate::field::PrimeField;

type Row = SparseRow<u64>;

pub(crate) fn echelon(f: PrimeField, rows: Vec<Row>, ncols: usize, reduced: bool) -> Echelon<u64> {
    let rows: Vec<Row> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    let mut piv = if rows.len() < DENSE_CUTOFF && ncols < DENSE_CUTOFF {
        dense(f, rows, ncols, reduced)
    } else {
        let mut piv = sparse_forward(f, rows, ncols);
        if reduced {
            back_substitute(f, &mut piv);
        }
        piv
    };
    piv.sort_by_key(|r| r[0].0);
    Echelon { ncols, rows: piv }
}

fn make_monic(f: PrimeField, row: &mut Row) {
    if let Some(&(_, lead)) = row.first() {
        if lead != 1 {
            let inv = f.invmod(lead).expect("nonzero leading entry");
            for (_, v) in row.iter_mut() {
                *v = f.mulmod(*v, inv);
            }
        }
    }
}

/// `r - a * p`, zeros dropped.
fn axpy(f: PrimeField, r: &Row, a: u64, p: &Row) -> Row {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        let ci = r.get(i).map_or(usize::MAX, |e| e.0);
        let cj = p.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(r[i]);
            i += 1;
        } else if cj < ci {
            let v = f.mulmod(a, p[j].1);
            if v != 0 {
                out.push((cj, f.p_minus(v)));
            }
            j += 1;
        } else {
            let v = f.submod(r[i].1, f.mulmod(a, p[j].1));
            if v != 0 {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn sparse_forward(f: PrimeField, rows: Vec<Row>, ncols: usize) -> Vec<Row> {
    let mut pivot_at: Vec<Option<usize>> = vec![None; ncols];
    let mut piv: Vec<Row> = Vec::new();
    for mut row in rows {
        while let Some(&(c, a)) = row.first() {
            match pivot_at[c] {
                None => {
                    make_monic(f, &mut row);
                    pivot_at[c] = Some(piv.len());
                    piv.push(row);
                    break;
                }
                Some(k) => {
                    if row.len() < piv[k].len() {
                        make_monic(f, &mut row);
                        std::mem::swap(&mut row, &mut piv[k]);
                        let a = row[0].1;
                        row = axpy(f, &row, a, &piv[k]);
                    } else {
                        row = axpy(f, &row, a, &piv[k]);
                    }
                }
            }
        }
    }
    piv
}

fn back_substitute(f: PrimeField, piv: &mut [Row]) {
    piv.sort_by_key(|r| r[0].0);
    for i in (0..piv.len()).rev() {
        let lead = piv[i][0].0;
        let (head, tail) = piv.split_at_mut(i);
        let p = &tail[0];
        for row in head.iter_mut() {
            if let Ok(k) = row.binary_search_by_key(&lead, |e| e.0) {
                let a = row[k].1;
                *row = axpy(f, row, a, p);
            }
        }
    }
}

fn dense(f: PrimeField, rows: Vec<Row>, ncols: usize, reduced: bool) -> Vec<Row> {
    let mut mat: Vec<Vec<u64>> = rows
        .into_iter()
        .map(|r| {
            let mut d = vec![0u64; ncols];
            for (c, v) in r {
                d[c] = v;
            }
            d
        })
        .collect();
    let nrows = mat.len();
    let mut rank = 0;
    for c in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(b) = (rank..nrows).find(|&i| mat[i][c] != 0) else { continue };
        mat.swap(rank, b);
        let inv = f.invmod(mat[rank][c]).expect("nonzero pivot");
        for v in mat[rank][c..].iter_mut() {
            *v = f.mulmod(*v, inv);
        }
        let prow = mat[rank].clone();
        let targets = if reduced { 0..nrows } else { rank + 1..nrows };
        for i in targets {
            if i == rank || mat[i][c] == 0 {
                continue;
            }
            let a = mat[i][c];
            for k in c..ncols {
                if prow[k] != 0 {
                    mat[i][k] = f.submod(mat[i][k], f.mulmod(a, prow[k]));
                }
            }
        }
        rank += 1;
    }
    mat.truncate(rank);
    mat.into_iter()
        .map(|d| d.into_iter().enumerate().filter(|(_, v)| *v != 0).collect())
        .collect()
}

impl PrimeField {
    #[inline]
    fn p_minus(&self, v: u64) -> u64 {
        self.modulus() - v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_matches_dense() {
        let f = PrimeField::new(5).unwrap();
        let rows: Vec<Row> = (0..8u64)
            .map(|i| (0..6usize).map(|j| (j, (i * 3 + j as u64 * 2 + i * j as u64) % 5)).filter(|e| e.1 != 0).collect())
            .collect();
        let a = dense(f, rows.clone(), 6, true);
        let mut b = sparse_forward(f, rows, 6);
        back_substitute(f, &mut b);
        let mut a = a;
        a.sort_by_key(|r| r[0].0);
        assert_eq!(a, b);
    }
}
