use serde::{Deserialize, Serialize};

use crate::field::Field;
use crate::par;
use crate::polyring::RingSpec;

use super::opspace::{graded_operator_space, operator_space_dim_with, OpSpaceOptions};
use super::replay::{replay_ideal_preservation, ReplayOutcome};
use super::weyl::DiffOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanCell {
    pub m: u32,
    pub e: i64,
    pub dim: usize,
}

/// Negative-degree operator search over `1 <= m <= m_max`, `e_min <= e <= -1`.
#[derive(Clone, Debug)]
pub struct ScanReport<F: Field> {
    pub m_max: u32,
    pub e_min: i64,
    /// Row-major: `m` ascending, then `e` descending from -1.
    pub cells: Vec<ScanCell>,
    /// First nonzero cell in that order.
    pub first_nonzero: Option<(u32, i64)>,
    /// First basis operator of the first nonzero cell, with its replay.
    pub witness: Option<(DiffOperator<F>, ReplayOutcome)>,
}

impl<F: Field> ScanReport<F> {
    pub fn dim(&self, m: u32, e: i64) -> Option<usize> {
        self.cells.iter().find(|c| c.m == m && c.e == e).map(|c| c.dim)
    }

    pub fn all_zero(&self) -> bool {
        self.first_nonzero.is_none()
    }

    /// Plain statement of what the scan shows.
    pub fn note(&self) -> String {
        match self.first_nonzero {
            None => format!(
                "no operators of negative degree with order <= {} and degree >= {}; this refutes D-simplicity only up to these bounds",
                self.m_max, self.e_min
            ),
            Some((m, e)) => format!("operator of order {m} and degree {e} found"),
        }
    }
}

/// Samples used when replaying the witness.
pub const WITNESS_REPLAY_SAMPLES: usize = 20;

/// `dim (D^m_R)_e` for `1 <= m <= m_max`, `e_min <= e <= e_max`, ordered by
/// `m` then `e` ascending.
pub fn operator_grid<F: Field>(spec: &RingSpec<F>, m_max: u32, e_min: i64, e_max: i64, opts: OpSpaceOptions) -> Vec<ScanCell> {
    let grid: Vec<(u32, i64)> = (1..=m_max).flat_map(|m| (e_min..=e_max).map(move |e| (m, e))).collect();
    par::map_slice(&grid, |&(m, e)| ScanCell { m, e, dim: operator_space_dim_with(spec, m, e, opts) })
}

pub fn negative_degree_scan<F: Field>(spec: &RingSpec<F>, m_max: u32, e_min: i64) -> ScanReport<F> {
    negative_degree_scan_with(spec, m_max, e_min, OpSpaceOptions::default())
}

pub fn negative_degree_scan_with<F: Field>(spec: &RingSpec<F>, m_max: u32, e_min: i64, opts: OpSpaceOptions) -> ScanReport<F> {
    assert!(m_max >= 1 && e_min <= -1, "scan needs m_max >= 1 and e_min <= -1");
    let grid: Vec<(u32, i64)> = (1..=m_max).flat_map(|m| (e_min..=-1).rev().map(move |e| (m, e))).collect();
    let cells: Vec<ScanCell> = par::map_slice(&grid, |&(m, e)| ScanCell { m, e, dim: operator_space_dim_with(spec, m, e, opts) });
    let first_nonzero = cells.iter().find(|c| c.dim > 0).map(|c| (c.m, c.e));
    let witness = first_nonzero.map(|(m, e)| {
        let space = graded_operator_space(spec, m, e);
        let op = space.basis.into_iter().next().expect("nonzero cell has a basis vector");
        let outcome = replay_ideal_preservation(spec, &op, WITNESS_REPLAY_SAMPLES, 0x5eed);
        (op, outcome)
    });
    ScanReport { m_max, e_min, cells, first_nonzero, witness }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn polynomial_ring_has_partials() {
        let s = RingSpec::polynomial_ring(Rationals, 3).unwrap();
        let r = negative_degree_scan(&s, 1, -1);
        assert_eq!(r.first_nonzero, Some((1, -1)));
        assert_eq!(r.dim(1, -1), Some(3));
        assert!(r.witness.as_ref().unwrap().1.passed());
    }

    #[test]
    fn bgg_small_grid_is_zero() {
        let bgg = RingSpec::new(Rationals, &["x", "y", "z"], &["x^3+y^3+z^3"]).unwrap();
        let r = negative_degree_scan(&bgg, 3, -2);
        assert!(r.all_zero());
        assert_eq!(r.cells.len(), 6);
        assert!(r.note().contains("only up to"));
    }
}
