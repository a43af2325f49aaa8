//! Fraction-free elimination over Q.
//!
//! Rows are cleared of denominators and kept primitive (content 1, positive
//! leading entry). Eliminating column `c` from `r` with pivot row `P` uses
//! `r <- (b/g) r - (a/g) P` where `a`, `b` are the leading entries and
//! `g = gcd(a, b)`, followed by content removal.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Echelon, SparseRow, DENSE_CUTOFF};
use crate::field::abs_cmp;

type IntRow = SparseRow<BigInt>;

pub(crate) fn echelon(rows: Vec<SparseRow<BigRational>>, ncols: usize, reduced: bool) -> Echelon<BigRational> {
    let int_rows: Vec<IntRow> = rows.into_iter().filter_map(to_primitive).collect();
    let mut piv = if int_rows.len() < DENSE_CUTOFF && ncols < DENSE_CUTOFF {
        dense_forward(int_rows, ncols)
    } else {
        sparse_forward(int_rows, ncols)
    };
    if reduced {
        back_substitute(&mut piv);
        let rows = piv
            .into_iter()
            .map(|r| {
                let lead = r[0].1.clone();
                r.into_iter().map(|(c, v)| (c, BigRational::new(v, lead.clone()))).collect()
            })
            .collect();
        Echelon { ncols, rows }
    } else {
        let rows = piv
            .into_iter()
            .map(|r| r.into_iter().map(|(c, v)| (c, BigRational::from_integer(v))).collect())
            .collect();
        Echelon { ncols, rows }
    }
}

/// Scale a rational row to a primitive integer row; `None` for the zero row.
fn to_primitive(row: SparseRow<BigRational>) -> Option<IntRow> {
    if row.is_empty() {
        return None;
    }
    let l = row.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    let ints: IntRow = row.into_iter().map(|(c, v)| (c, v.numer() * (&l / v.denom()))).collect();
    Some(make_primitive(ints))
}

fn make_primitive(mut row: IntRow) -> IntRow {
    if row.is_empty() {
        return row;
    }
    let mut g = BigInt::zero();
    for (_, v) in &row {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
    row
}

/// `s * r - t * p`, zeros dropped.
fn combine(r: &IntRow, s: &BigInt, p: &IntRow, t: &BigInt) -> IntRow {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        let ci = r.get(i).map_or(usize::MAX, |e| e.0);
        let cj = p.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push((ci, s * &r[i].1));
            i += 1;
        } else if cj < ci {
            out.push((cj, -(t * &p[j].1)));
            j += 1;
        } else {
            let v = s * &r[i].1 - t * &p[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Clear the entry of `r` at column `col` using pivot row `p` (whose leading
/// column is `col`).
fn eliminate(r: &IntRow, a: &BigInt, p: &IntRow) -> IntRow {
    let b = &p[0].1;
    let g = a.gcd(b);
    let s = b / &g;
    let t = a / &g;
    make_primitive(combine(r, &s, p, &t))
}

fn sparse_forward(rows: Vec<IntRow>, ncols: usize) -> Vec<IntRow> {
    let mut pivot_at: Vec<Option<usize>> = vec![None; ncols];
    let mut piv: Vec<IntRow> = Vec::new();
    for mut row in rows {
        while let Some(&(c, _)) = row.first() {
            match pivot_at[c] {
                None => {
                    pivot_at[c] = Some(piv.len());
                    piv.push(row);
                    break;
                }
                Some(k) => {
                    if abs_cmp(&row[0].1, &piv[k][0].1).is_lt() {
                        std::mem::swap(&mut row, &mut piv[k]);
                    }
                    let a = row[0].1.clone();
                    row = eliminate(&row, &a, &piv[k]);
                }
            }
        }
    }
    piv.sort_by_key(|r| r[0].0);
    piv
}

fn dense_forward(rows: Vec<IntRow>, ncols: usize) -> Vec<IntRow> {
    let mut mat: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|r| {
            let mut d = vec![BigInt::zero(); ncols];
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
        let best = (rank..nrows)
            .filter(|&i| !mat[i][c].is_zero())
            .min_by(|&i, &j| abs_cmp(&mat[i][c], &mat[j][c]));
        let Some(b) = best else { continue };
        mat.swap(rank, b);
        let (top, rest) = mat.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in rest.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let g = row[c].gcd(&prow[c]);
            let s = &prow[c] / &g;
            let t = &row[c] / &g;
            for k in c..ncols {
                if prow[k].is_zero() {
                    row[k] = &s * &row[k];
                } else {
                    row[k] = &s * &row[k] - &t * &prow[k];
                }
            }
            dense_primitive(&mut row[c..]);
        }
        dense_primitive(&mut top[rank][c..]);
        rank += 1;
    }
    mat.truncate(rank);
    mat.into_iter()
        .map(|d| {
            let r: IntRow = d.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
            make_primitive(r)
        })
        .collect()
}

fn dense_primitive(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for v in row.iter() {
        if !v.is_zero() {
            g = g.gcd(v);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for v in row.iter_mut() {
        *v = &*v / &g;
    }
}

/// Turn a forward echelon form (sorted by leading column) into reduced form,
/// still with integer rows.
fn back_substitute(piv: &mut [IntRow]) {
    for i in (0..piv.len()).rev() {
        let lead = piv[i][0].0;
        let (head, tail) = piv.split_at_mut(i);
        let p = &tail[0];
        for row in head.iter_mut() {
            if let Ok(k) = row.binary_search_by_key(&lead, |e| e.0) {
                let a = row[k].1.clone();
                *row = eliminate(row, &a, p);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn reduced_form_has_unit_pivots() {
        let rows = vec![
            vec![(0, q(2, 1)), (1, q(4, 1)), (2, q(1, 3))],
            vec![(0, q(1, 1)), (2, q(1, 1))],
        ];
        let e = echelon(rows, 3, true);
        assert_eq!(e.rank(), 2);
        for r in &e.rows {
            assert_eq!(r[0].1, q(1, 1));
        }
        // pivot columns cleared above and below
        assert!(e.rows[0].iter().all(|(c, _)| *c != 1));
    }

    #[test]
    fn dense_and_sparse_agree() {
        let rows: Vec<IntRow> = (0..6)
            .map(|i| (0..5).map(|j| (j, BigInt::from(((i * 7 + j * 3) % 5) as i64 - 2))).filter(|e| !e.1.is_zero()).collect())
            .collect();
        let mut a = dense_forward(rows.clone(), 5);
        let mut b = sparse_forward(rows, 5);
        assert_eq!(a.len(), b.len());
        back_substitute(&mut a);
        back_substitute(&mut b);
        assert_eq!(a, b);
    }
}
