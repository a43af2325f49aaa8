//! Bookkeeping for the long exact sequence of `0 -> A -> B -> C -> 0`.

use serde::{Deserialize, Serialize};

/// A map in the long exact sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LesMap {
    /// `H^i(A) -> H^i(B)`
    AtoB(usize),
    /// `H^i(B) -> H^i(C)`
    BtoC(usize),
    /// `H^i(C) -> H^{i+1}(A)`
    Connecting(usize),
}

impl LesMap {
    fn position(self) -> usize {
        match self {
            LesMap::AtoB(i) => 3 * i,
            LesMap::BtoC(i) => 3 * i + 1,
            LesMap::Connecting(i) => 3 * i + 2,
        }
    }

    fn at(k: usize) -> Self {
        match k % 3 {
            0 => LesMap::AtoB(k / 3),
            1 => LesMap::BtoC(k / 3),
            _ => LesMap::Connecting(k / 3),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LesVerdict {
    pub consistent: bool,
    /// Ranks forced by exactness, in sequence order (omitted past the first violation).
    pub ranks: Vec<(LesMap, u64)>,
    pub violations: Vec<String>,
}

/// Check three h-vectors (and any known ranks) against exactness of
/// `0 -> H^0 A -> H^0 B -> H^0 C -> H^1 A -> ... -> H^n C -> 0`.
pub fn les_template(a: &[u64], b: &[u64], c: &[u64], known: &[(LesMap, u64)]) -> LesVerdict {
    let mut violations = Vec::new();
    let len = a.len().max(b.len()).max(c.len());
    if a.len() != b.len() || b.len() != c.len() {
        violations.push(format!("h-vectors have lengths {}, {}, {}", a.len(), b.len(), c.len()));
    }
    let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0) as i128;
    let chi = |v: &[u64]| (0..len).map(|i| if i % 2 == 0 { get(v, i) } else { -get(v, i) }).sum::<i128>();
    let (ca, cb, cc) = (chi(a), chi(b), chi(c));
    if cb != ca + cc {
        violations.push(format!("χ(B) = {cb} but χ(A) + χ(C) = {}", ca + cc));
    }

    let dims: Vec<i128> = (0..len).flat_map(|i| [get(a, i), get(b, i), get(c, i)]).collect();
    let mut ranks = Vec::new();
    let mut prev: i128 = 0;
    for k in 0..dims.len() {
        // exactness at V_k: dim V_k = rank(in) + rank(out)
        let r = dims[k] - prev;
        let next_dim = dims.get(k + 1).copied().unwrap_or(0);
        if r < 0 || r > next_dim {
            violations.push(format!(
                "{:?}: exactness forces rank {r}, outside 0..={next_dim}",
                LesMap::at(k)
            ));
            break;
        }
        ranks.push((LesMap::at(k), r as u64));
        prev = r;
    }
    for &(map, r) in known {
        match ranks.get(map.position()) {
            Some(&(_, forced)) if forced != r => violations.push(format!("{map:?}: given rank {r}, exactness forces {forced}")),
            None if map.position() >= dims.len() => violations.push(format!("{map:?} is outside the sequence")),
            _ => {}
        }
    }
    LesVerdict { consistent: violations.is_empty(), ranks, violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_consistent() {
        let a = [3, 0, 1];
        let known: Vec<_> = a.iter().enumerate().map(|(i, &x)| (LesMap::AtoB(i), x)).collect();
        let v = les_template(&a, &a, &[0, 0, 0], &known);
        assert!(v.consistent, "{:?}", v.violations);
    }

    #[test]
    fn chi_violation_flagged() {
        let v = les_template(&[1, 0], &[3, 0], &[1, 0], &[]);
        assert!(!v.consistent);
        assert!(v.violations[0].contains("χ"));
    }

    #[test]
    fn wrong_known_rank_flagged() {
        let v = les_template(&[1, 0], &[1, 0], &[0, 0], &[(LesMap::AtoB(0), 0)]);
        assert!(!v.consistent);
    }
}
