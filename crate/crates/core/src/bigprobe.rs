//! Positivity evidence for `T_X` from operator dimensions.
//!
//! For `R` generated in degree 1 with `X = Proj R` smooth, the order filtration
//! gives `0 -> σ_{m-1} -> σ_m -> Sym^m T_X -> 0`, and after twisting by
//! `L^{-e}` and taking sections, `D^m_{-e} / D^{m-1}_{-e}` injects into
//! `H^0(X, Sym^m T_X ⊗ L^{-e})`. So a strict jump in `m` is a nonvanishing
//! witness. No jump up to a bound says nothing beyond that bound.

use serde::{Deserialize, Serialize};

use crate::diffop::{operator_space_dim, operator_space_dim_with, ConstraintSet, OpSpaceOptions};
use crate::field::{Field, FieldSpec};
use crate::par;
use crate::polyring::RingSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Jump {
    pub m: u32,
    /// `dim D^m_{-e} - dim D^{m-1}_{-e}`
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistRecord {
    pub e: u32,
    /// `dim D^m_{-e}` for `m = 0..=m_max` (or up to the jump).
    pub dims: Vec<usize>,
    pub found: Option<Jump>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BignessVerdict {
    /// Every tested twist has a jump.
    EvidenceForAllTestedE,
    /// Some twists have a jump, others none up to the order bound.
    PartialEvidence,
    NoNegativeOperatorsUpToBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BignessReport {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    pub relations: Vec<String>,
    /// Echo of the user's smoothness assertion; not checked.
    pub assert_smooth_proj: bool,
    pub e_max: u32,
    pub m_max: u32,
    pub records: Vec<TwistRecord>,
    /// `dim D^m_0` for `m = 1..=m_max`.
    pub degree_zero: Vec<usize>,
    pub verdict: BignessVerdict,
}

impl BignessReport {
    pub fn jump(&self, e: u32) -> Option<Jump> {
        self.records.iter().find(|r| r.e == e).and_then(|r| r.found)
    }

    /// One line per twist, in fixed wording.
    pub fn summary(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .records
            .iter()
            .map(|r| match r.found {
                Some(j) => format!(
                    "e={}: jump of size {} at m={}; H^0(X, Sym^{} T_X ⊗ L^-{}) != 0",
                    r.e, j.size, j.m, j.m, r.e
                ),
                None => format!("e={}: no jump for m <= {}", r.e, self.m_max),
            })
            .collect();
        out.push(match self.verdict {
            BignessVerdict::EvidenceForAllTestedE => {
                format!("nonvanishing witnesses for every e <= {}; bigness needs every e and is not claimed", self.e_max)
            }
            BignessVerdict::PartialEvidence => "witnesses for some tested e only".to_string(),
            BignessVerdict::NoNegativeOperatorsUpToBound => {
                format!("no negative-degree operators with m <= {} and e <= {}", self.m_max, self.e_max)
            }
        });
        out
    }
}

/// Twist of `Ω_X` matching `Sym^m T_X ⊗ O(-e)` on a degree-`d` surface in
/// `P^3`, where `T_X = Ω_X(4 - d)`.
pub fn tangent_twist(d: u32, m: u32, e: u32) -> i64 {
    m as i64 * (4 - d as i64) - e as i64
}

pub fn bigness_evidence<F: Field>(spec: &RingSpec<F>, e_max: u32, m_max: u32) -> BignessReport {
    assert!(e_max >= 1 && m_max >= 1, "bigness_evidence needs e_max >= 1 and m_max >= 1");
    let es: Vec<u32> = (1..=e_max).collect();
    let records = par::map_slice(&es, |&e| {
        // order-0 operators of negative degree are multiplications by zero
        let mut dims = vec![0usize];
        let mut found = None;
        for m in 1..=m_max {
            let dim = operator_space_dim(spec, m, -(e as i64));
            let prev = *dims.last().expect("nonempty");
            dims.push(dim);
            if dim > prev {
                found = Some(Jump { m, size: dim - prev });
                break;
            }
        }
        TwistRecord { e, dims, found }
    });
    let ms: Vec<u32> = (1..=m_max).collect();
    let degree_zero = par::map_slice(&ms, |&m| operator_space_dim(spec, m, 0));
    let hits = records.iter().filter(|r| r.found.is_some()).count();
    let verdict = if hits == records.len() {
        BignessVerdict::EvidenceForAllTestedE
    } else if hits == 0 {
        BignessVerdict::NoNegativeOperatorsUpToBound
    } else {
        BignessVerdict::PartialEvidence
    };
    BignessReport {
        field: spec.field_spec(),
        vars: spec.vars().to_vec(),
        relations: spec.relation_strings(),
        assert_smooth_proj: spec.assert_smooth_proj(),
        e_max,
        m_max,
        records,
        degree_zero,
        verdict,
    }
}

/// Recompute the two cells around each reported jump with the
/// multiplier constraint set. `Err` describes the first disagreement.
pub fn reverify_jumps<F: Field>(spec: &RingSpec<F>, report: &BignessReport) -> Result<(), String> {
    let opts = OpSpaceOptions { constraints: ConstraintSet::Multipliers, ..Default::default() };
    for r in &report.records {
        if let Some(j) = r.found {
            let e = -(r.e as i64);
            let below = if j.m == 1 { 0 } else { operator_space_dim_with(spec, j.m - 1, e, opts) };
            let at = operator_space_dim_with(spec, j.m, e, opts);
            if at <= below || at - below != j.size || below != r.dims[j.m as usize - 1] {
                return Err(format!("e={}: cells ({}, {}) recompute to {below}, {at}", r.e, j.m - 1, j.m));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn plane_has_partials() {
        let s = RingSpec::polynomial_ring(Rationals, 3).unwrap();
        let r = bigness_evidence(&s, 1, 2);
        assert_eq!(r.jump(1), Some(Jump { m: 1, size: 3 }));
        assert_eq!(r.verdict, BignessVerdict::EvidenceForAllTestedE);
        reverify_jumps(&s, &r).unwrap();
    }

    #[test]
    fn bgg_has_none() {
        let s = RingSpec::new(Rationals, &["x", "y", "z"], &["x^3+y^3+z^3"]).unwrap();
        let r = bigness_evidence(&s, 2, 3);
        assert_eq!(r.verdict, BignessVerdict::NoNegativeOperatorsUpToBound);
        assert!(r.degree_zero.iter().all(|&d| d >= 1));
        assert!(r.summary().last().unwrap().contains("no negative-degree operators"));
    }

    #[test]
    fn twist_mapping() {
        assert_eq!(tangent_twist(3, 5, 0), 5);
        assert_eq!(tangent_twist(2, 2, 1), 3);
    }
}
