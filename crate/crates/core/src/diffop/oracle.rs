//! Brute-force cross-check for operator dimensions.
//!
//! The unknowns are arbitrary linear maps `δ_d : R_d -> R_{d+e}` for all
//! `d <= d_cap`, with no assumption about their shape. They are subject to
//! the defining condition of order `<= m`: every `(m+1)`-fold commutator
//! with multiplications by variables vanishes,
//!
//! ```text
//! Σ_{σ <= μ} (-1)^{|μ|-|σ|} C(μ, σ) x^(μ-σ) δ(x^σ v) = 0,   |μ| = m + 1,
//! ```
//!
//! imposed for every standard monomial `v ∈ R_d` with `d + m + 1 <= d_cap`.
//! A genuine operator of order `m` is determined by its restriction to
//! `R_{<= m}`, so the dimension of the projection of the solution space onto
//! the blocks `d <= m` bounds `dim (D^m_R)_e` from above. Raising `d_cap` can
//! only shrink it.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::OracleError;
use crate::exactlinalg::{self, ExactMatrix};
use crate::field::{binomial_big, Field};
use crate::polyring::{homog_basis, GradedPiece, Monomial, RingSpec};

/// Smallest admissible truncation degree.
pub fn oracle_min_cap<F: Field>(spec: &RingSpec<F>, m: u32, e: i64) -> u32 {
    m + e.unsigned_abs() as u32 + spec.max_relation_degree()
}

fn sub_multisets(mu: &Monomial) -> Vec<Monomial> {
    let n = mu.nvars();
    let mut out = vec![Monomial::one(n)];
    for i in 0..n {
        let mut next = Vec::new();
        for m in &out {
            let mut cur = *m;
            next.push(cur);
            for _ in 0..mu.exp(i) {
                cur = cur.mul_var(i);
                next.push(cur);
            }
        }
        out = next;
    }
    out
}

/// Upper bound for `dim (D^m_R)_e` from the truncated action on
/// `⊕_{d <= d_cap} R_d`.
pub fn truncated_action_oracle<F: Field>(spec: &RingSpec<F>, m: u32, e: i64, d_cap: u32) -> Result<usize, OracleError> {
    let required = oracle_min_cap(spec, m, e);
    if d_cap < required {
        return Err(OracleError::CapTooSmall { cap: d_cap, required });
    }
    let field = spec.field().clone();
    let n = spec.nvars();

    // column blocks (d, source index, target index)
    let mut block_off: Vec<Option<usize>> = vec![None; d_cap as usize + 1];
    let mut pieces: Vec<Arc<GradedPiece<F>>> = Vec::new();
    let mut ncols = 0;
    let mut low_cols = 0;
    for d in 0..=d_cap {
        pieces.push(spec.piece(d));
        let t = d as i64 + e;
        if t < 0 {
            continue;
        }
        let size = spec.piece(d).dim() * spec.piece(t as u32).dim();
        block_off[d as usize] = Some(ncols);
        ncols += size;
        if d <= m {
            low_cols = ncols;
        }
    }
    if low_cols == 0 {
        return Ok(0);
    }
    let col = |d: u32, s: usize, t: usize| -> Option<usize> {
        let off = block_off[d as usize]?;
        let tdim = spec.piece((d as i64 + e) as u32).dim();
        Some(off + s * tdim + t)
    };

    let mut rows: Vec<Vec<(usize, F::Elem)>> = Vec::new();
    let k = m + 1;
    for mu in homog_basis(n, k) {
        let subs: Vec<(Monomial, F::Elem)> = sub_multisets(&mu)
            .into_iter()
            .map(|s| {
                let mut c = field.one();
                for i in 0..n {
                    c = field.mul(&c, &field.from_bigint(&binomial_big(mu.exp(i) as u64, s.exp(i) as u64)));
                }
                if (k - s.degree()) % 2 == 1 {
                    c = field.neg(&c);
                }
                (s, c)
            })
            .collect();
        for d in 0..=d_cap.saturating_sub(k) {
            let out_deg = d as i64 + k as i64 + e;
            if out_deg < 0 {
                continue;
            }
            let out_piece = spec.piece(out_deg as u32);
            for v in &pieces[d as usize].standard {
                let base = rows.len();
                rows.extend(std::iter::repeat_with(Vec::new).take(out_piece.dim()));
                for (sigma, sign) in &subs {
                    let dd = d + sigma.degree();
                    let td = dd as i64 + e;
                    if td < 0 {
                        continue;
                    }
                    let src = &pieces[dd as usize];
                    let tgt = spec.piece(td as u32);
                    let rest = mu.div(sigma).expect("sub-multiset");
                    src.for_each_reduced(&v.mul(sigma), sign, &field, |s, a| {
                        for (t, tm) in tgt.standard.iter().enumerate() {
                            let c = col(dd, s, t).expect("block exists");
                            out_piece.for_each_reduced(&tm.mul(&rest), &a, &field, |r, val| rows[base + r].push((c, val)));
                        }
                    });
                }
            }
        }
    }
    let full = ExactMatrix::from_rows(field.clone(), ncols, rows);
    let nullity_full = ncols - exactlinalg::rank(&full);
    // solutions vanishing on the low blocks: drop the low columns
    let high_rows: Vec<Vec<(usize, F::Elem)>> = full
        .rows()
        .iter()
        .map(|r| r.iter().filter(|(c, _)| *c >= low_cols).map(|(c, v)| (c - low_cols, v.clone())).collect())
        .collect();
    let high = ExactMatrix::from_rows(field, ncols - low_cols, high_rows);
    let nullity_high = (ncols - low_cols) - exactlinalg::rank(&high);
    Ok(nullity_full - nullity_high)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableOracle {
    pub d_cap: u32,
    pub dim: usize,
}

/// Raise `d_cap` from the minimum until the bound is unchanged for one
/// step, or `max_cap` is hit. Returns the last cap used and its value.
pub fn stabilized_oracle<F: Field>(spec: &RingSpec<F>, m: u32, e: i64, max_cap: u32) -> Result<StableOracle, OracleError> {
    let mut cap = oracle_min_cap(spec, m, e);
    let mut prev = truncated_action_oracle(spec, m, e, cap)?;
    while cap < max_cap {
        let next = truncated_action_oracle(spec, m, e, cap + 1)?;
        cap += 1;
        if next == prev {
            return Ok(StableOracle { d_cap: cap, dim: next });
        }
        prev = next;
    }
    Ok(StableOracle { d_cap: cap, dim: prev })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn oracle_examples() {
        let s = RingSpec::polynomial_ring(Rationals, 2).unwrap();
        assert_eq!(truncated_action_oracle(&s, 1, -1, 6).unwrap(), 2);
        assert_eq!(truncated_action_oracle(&s, 0, 0, 3).unwrap(), 1);
        let bgg = RingSpec::new(Rationals, &["x", "y", "z"], &["x^3+y^3+z^3"]).unwrap();
        assert_eq!(truncated_action_oracle(&bgg, 2, -1, 8).unwrap(), 0);
        assert_eq!(truncated_action_oracle(&bgg, 0, 0, 4).unwrap(), 1);
        assert!(matches!(truncated_action_oracle(&bgg, 2, -1, 5), Err(OracleError::CapTooSmall { required: 6, .. })));
    }
}
