//! Vanishing certificates for smooth hypersurfaces `X ⊂ P^n` of degree `d`.
//!
//! Two short exact sequences are used, both twisted by `O(e)`:
//!
//! ```text
//! restriction: 0 -> F(e-d) -> F(e) -> F|_X(e) -> 0          (F = Sym^m Ω_{P^n} or O)
//! conormal:    0 -> Sym^{m-1}(Ω_{P^n}|_X)(e-d) -> Sym^m(Ω_{P^n}|_X)(e) -> Sym^m Ω_X(e) -> 0
//! ```
//!
//! In each, `H^i` of the right term sits between `H^i` of the middle term and
//! `H^{i+1}` of the left term, so vanishing of those two forces vanishing of
//! the right term. A certificate records that deduction down to ambient
//! leaves, whose values come from [`crate::projcoh`]. Nothing here ever
//! claims nonvanishing.

mod verify;

use serde::{Deserialize, Serialize};

use crate::error::{CohomError, VanishError};
use crate::par;
use crate::projcoh::{Bundle, CohomMemo, MAX_AMBIENT};

pub use verify::verify_certificate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SheafKind {
    /// `Sym^m Ω_{P^n}(e)`
    AmbientSym,
    /// `Sym^m Ω_{P^n}|_X(e)`
    RestrictedSym,
    /// `Sym^m Ω_X(e)`
    IntrinsicSym,
    /// `O_{P^n}(e)`
    AmbientLine,
    /// `O_X(e)`
    RestrictedLine,
}

/// `H^i` of one sheaf in the chase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SheafNode {
    pub kind: SheafKind,
    pub n: u32,
    pub d: u32,
    pub m: u32,
    pub e: i64,
    pub i: u32,
}

impl std::fmt::Display for SheafNode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let SheafNode { n, m, e, i, .. } = *self;
        match self.kind {
            SheafKind::AmbientSym => write!(f, "H^{i}(P^{n}, Sym^{m} Ω({e}))"),
            SheafKind::RestrictedSym => write!(f, "H^{i}(X, Sym^{m} Ω_P|X({e}))"),
            SheafKind::IntrinsicSym => write!(f, "H^{i}(X, Sym^{m} Ω_X({e}))"),
            SheafKind::AmbientLine => write!(f, "H^{i}(P^{n}, O({e}))"),
            SheafKind::RestrictedLine => write!(f, "H^{i}(X, O_X({e}))"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    /// Ambient value read from a cohomology table.
    Leaf,
    Restriction,
    Conormal,
}

/// A tree of three-term deductions whose leaves are zero table entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishCertificate {
    pub root: SheafNode,
    pub rule: Rule,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<VanishCertificate>,
    /// Table value, for leaves.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<u64>,
}

impl VanishCertificate {
    pub fn leaves(&self) -> Vec<&VanishCertificate> {
        if self.rule == Rule::Leaf {
            return vec![self];
        }
        self.children.iter().flat_map(|c| c.leaves()).collect()
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    CertifiedZero(VanishCertificate),
    /// The chase is blocked by this nonzero ambient value (the first one
    /// met; later branches are not explored).
    Unknown { blocking: Vec<(SheafNode, u64)> },
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::CertifiedZero(_))
    }

    pub fn certificate(&self) -> Option<&VanishCertificate> {
        match self {
            Verdict::CertifiedZero(c) => Some(c),
            Verdict::Unknown { .. } => None,
        }
    }
}

/// Builds certificates, sharing one table cache.
#[derive(Debug, Default)]
pub struct Engine {
    memo: CohomMemo,
}

fn check_params(n: u32, d: u32, m: u32) -> Result<(), VanishError> {
    if !(3..=MAX_AMBIENT).contains(&n) {
        return Err(VanishError::Domain(format!("ambient dimension {n} outside 3..={MAX_AMBIENT}")));
    }
    if d == 0 {
        return Err(VanishError::Domain("hypersurface degree must be at least 1".into()));
    }
    if m == 0 {
        return Err(VanishError::Domain("symmetric power must be at least 1".into()));
    }
    Ok(())
}

/// Certify `node` from two outer terms, evaluated in order and only as far
/// as the first one that fails.
fn three_term(
    node: SheafNode,
    rule: Rule,
    middle: impl FnOnce() -> Result<Verdict, CohomError>,
    left: impl FnOnce() -> Result<Verdict, CohomError>,
) -> Result<Verdict, CohomError> {
    let a = match middle()? {
        Verdict::CertifiedZero(c) => c,
        unknown => return Ok(unknown),
    };
    let b = match left()? {
        Verdict::CertifiedZero(c) => c,
        unknown => return Ok(unknown),
    };
    Ok(Verdict::CertifiedZero(VanishCertificate { root: node, rule, children: vec![a, b], value: None }))
}

impl Engine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn memo(&self) -> &CohomMemo {
        &self.memo
    }

    fn leaf(&self, node: SheafNode) -> Result<Verdict, CohomError> {
        let table = match node.kind {
            SheafKind::AmbientSym => self.memo.get(node.n, Bundle::SymOmega, node.m, node.e)?,
            SheafKind::AmbientLine => self.memo.get(node.n, Bundle::LineBundle, 0, node.e)?,
            _ => unreachable!("only ambient nodes are leaves"),
        };
        let value = table.h.get(node.i as usize).copied().unwrap_or(0);
        Ok(if value == 0 {
            Verdict::CertifiedZero(VanishCertificate { root: node, rule: Rule::Leaf, children: Vec::new(), value: Some(0) })
        } else {
            Verdict::Unknown { blocking: vec![(node, value)] }
        })
    }

    /// `H^i(X, Sym^m Ω_{P^n}|_X(e))`, or `H^i(X, O_X(e))` when `m = 0`.
    fn restricted(&self, n: u32, d: u32, m: u32, e: i64, i: u32) -> Result<Verdict, CohomError> {
        let (kind, ambient) = if m == 0 {
            (SheafKind::RestrictedLine, SheafKind::AmbientLine)
        } else {
            (SheafKind::RestrictedSym, SheafKind::AmbientSym)
        };
        let node = SheafNode { kind, n, d, m, e, i };
        three_term(
            node,
            Rule::Restriction,
            || self.leaf(SheafNode { kind: ambient, n, d, m, e, i }),
            || self.leaf(SheafNode { kind: ambient, n, d, m, e: e - d as i64, i: i + 1 }),
        )
    }

    pub fn restricted_vanishing(&self, n: u32, d: u32, m: u32, e: i64, i: u32) -> Result<Verdict, VanishError> {
        check_params(n, d, m)?;
        if i > 1 {
            return Err(VanishError::Domain(format!("cohomological index {i} outside 0..=1")));
        }
        Ok(self.restricted(n, d, m, e, i)?)
    }

    pub fn intrinsic_h0_vanishing(&self, n: u32, d: u32, m: u32, e: i64) -> Result<Verdict, VanishError> {
        check_params(n, d, m)?;
        let node = SheafNode { kind: SheafKind::IntrinsicSym, n, d, m, e, i: 0 };
        Ok(three_term(
            node,
            Rule::Conormal,
            || self.restricted(n, d, m, e, 0),
            || self.restricted(n, d, m - 1, e - d as i64, 1),
        )?)
    }

    /// `H^0(X, Sym^m T_X)` for a surface `X ⊂ P^3` of degree `d`, using
    /// `T_X = Ω_X(4 - d)`.
    pub fn sym_tangent_h0(&self, d: u32, m: u32) -> Result<Verdict, VanishError> {
        if !(1..=5).contains(&d) {
            return Err(VanishError::Domain(format!("surface degree {d} outside 1..=5")));
        }
        self.intrinsic_h0_vanishing(3, d, m, m as i64 * (4 - d as i64))
    }

    /// `sym_tangent_h0` for `m = 1..=m_max`, in parallel.
    pub fn sym_tangent_range(&self, d: u32, m_max: u32) -> Result<Vec<Verdict>, VanishError> {
        let ms: Vec<u32> = (1..=m_max).collect();
        par::map_slice(&ms, |&m| self.sym_tangent_h0(d, m)).into_iter().collect()
    }
}

pub fn restricted_vanishing(n: u32, d: u32, m: u32, e: i64, i: u32) -> Result<Verdict, VanishError> {
    Engine::new().restricted_vanishing(n, d, m, e, i)
}

pub fn intrinsic_h0_vanishing(n: u32, d: u32, m: u32, e: i64) -> Result<Verdict, VanishError> {
    Engine::new().intrinsic_h0_vanishing(n, d, m, e)
}

pub fn sym_tangent_h0(d: u32, m: u32) -> Result<Verdict, VanishError> {
    Engine::new().sym_tangent_h0(d, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_surface_restricted() {
        let eng = Engine::new();
        for m in 1..=8 {
            assert!(eng.restricted_vanishing(3, 3, m, m as i64, 0).unwrap().is_certified(), "m={m}");
            assert!(eng.restricted_vanishing(3, 3, m, m as i64 - 3, 1).unwrap().is_certified(), "m={m}");
        }
        match eng.restricted_vanishing(3, 3, 1, 5, 0).unwrap() {
            Verdict::Unknown { blocking } => assert_eq!(blocking[0].0.kind, SheafKind::AmbientSym),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn cubic_tangent_certified_quadric_not() {
        let eng = Engine::new();
        for m in 1..=6 {
            let v = eng.sym_tangent_h0(3, m).unwrap();
            verify_certificate(v.certificate().expect("certified"), eng.memo()).unwrap();
            assert!(!eng.sym_tangent_h0(2, m).unwrap().is_certified());
        }
    }

    #[test]
    fn quadric_intrinsic() {
        let eng = Engine::new();
        // H^0(Ω_Q(1)) = H^0(O(-1,1) ⊕ O(1,-1)) = 0 really holds
        assert!(eng.intrinsic_h0_vanishing(3, 2, 1, 1).unwrap().is_certified());
        for m in 2..=6 {
            assert!(!eng.intrinsic_h0_vanishing(3, 2, m, m as i64).unwrap().is_certified());
        }
    }

    #[test]
    fn domain_errors() {
        assert!(restricted_vanishing(2, 3, 1, 0, 0).is_err());
        assert!(restricted_vanishing(3, 3, 1, 0, 2).is_err());
        assert!(intrinsic_h0_vanishing(3, 0, 1, 0).is_err());
        assert!(sym_tangent_h0(6, 1).is_err());
    }
}
