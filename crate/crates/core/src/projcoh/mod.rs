//! Cohomology of `Sym^m Ω(e)` and `Sym^m T(e)` on `P^n` over Q.
//!
//! Both come from the symmetric powers of the Euler sequence:
//!
//! ```text
//! 0 -> Sym^m Ω(e) -> Sym^m V* ⊗ O(e-m) -> Sym^{m-1} V* ⊗ O(e-m+1) -> 0
//! 0 -> Sym^{m-1} V ⊗ O(e+m-1) -> Sym^m V ⊗ O(e+m) -> Sym^m T(e) -> 0
//! ```
//!
//! The outer terms are sums of line bundles, whose cohomology lives only in
//! degrees 0 and `n`. So everything reduces to two explicit maps per sequence,
//! on global sections (monomial bases) and on top cohomology. Top cohomology
//! uses the Čech basis `x^{-c}` with every `c_i >= 1`, on which `x_i` acts by
//! lowering `c_i` (and kills the class when `c_i = 1`).
//!
//! Every map preserves a multidegree, so it is assembled block by block and
//! each block's rank is an exact rational rank.

mod les;

use std::collections::HashMap;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::CohomError;
use crate::exactlinalg::{self, ExactMatrix};
use crate::field::{binomial_or_zero, Field, FieldSpec, PrimeField, Rationals};
use crate::par;
use crate::polyring::{homog_basis, Monomial, MAX_VARS};

pub use les::{les_template, LesMap, LesVerdict};

/// Largest supported ambient dimension (one less than the variable cap).
pub const MAX_AMBIENT: u32 = (MAX_VARS - 1) as u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Bundle {
    SymOmega,
    SymTangent,
    LineBundle,
}

impl std::fmt::Display for Bundle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Bundle::SymOmega => "SymOmega",
            Bundle::SymTangent => "SymTangent",
            Bundle::LineBundle => "O",
        })
    }
}

/// `h^0 .. h^n` of a bundle on `P^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomTable {
    pub n: u32,
    pub bundle: Bundle,
    /// Symmetric power (0 for line bundles).
    pub m: u32,
    pub e: i64,
    pub h: Vec<u64>,
    pub euler_char: i128,
}

impl CohomTable {
    fn new(n: u32, bundle: Bundle, m: u32, e: i64, h: Vec<u64>) -> Self {
        let euler_char = h.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i128 } else { -(x as i128) }).sum();
        CohomTable { n, bundle, m, e, h, euler_char }
    }
}

/// `χ(O_{P^n}(k)) = C(k + n, n)` read as a polynomial in `k`.
pub fn chi_line(n: u32, k: i64) -> i128 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for j in 1..=n as i128 {
        num *= k as i128 + j;
        den *= j;
    }
    num / den
}

fn sym_dim(n: u32, m: i64) -> u64 {
    // dimension of Sym^m of an (n+1)-dimensional space
    binomial_or_zero(m + n as i64, n as i64) as u64
}

/// Cohomology of `O_{P^n}(k)` from the classical formulas.
pub fn line_cohomology(n: u32, k: i64) -> Result<CohomTable, CohomError> {
    if n == 0 || n > MAX_AMBIENT {
        return Err(CohomError::Domain(format!("ambient dimension {n} outside 1..={MAX_AMBIENT}")));
    }
    let mut h = vec![0u64; n as usize + 1];
    h[0] = binomial_or_zero(n as i64 + k, n as i64) as u64;
    h[n as usize] += binomial_or_zero(-k - 1, n as i64) as u64;
    Ok(CohomTable::new(n, Bundle::LineBundle, 0, k, h))
}

fn check_domain(n: u32, m: u32) -> Result<(), CohomError> {
    if !(2..=MAX_AMBIENT).contains(&n) {
        return Err(CohomError::Domain(format!("ambient dimension {n} outside 2..={MAX_AMBIENT}")));
    }
    if m == 0 {
        return Err(CohomError::Domain("symmetric power must be at least 1".into()));
    }
    Ok(())
}

/// Size and rank of a block-diagonal integer map.
#[derive(Default, Clone, Copy, Debug)]
struct MapRank {
    cols: u64,
    rows: u64,
    rank: u64,
}

impl MapRank {
    fn nullity(&self) -> u64 {
        self.cols - self.rank
    }
    fn corank(&self) -> u64 {
        self.rows - self.rank
    }
}

struct Block {
    ncols: usize,
    nrows: usize,
    entries: Vec<(usize, usize, i64)>,
}

/// `2^61 - 1`.
const SCREEN_PRIME: u64 = (1 << 61) - 1;

/// Exact rank of an integer block. Full rank modulo a prime means some
/// maximal minor is a nonzero integer, so that case skips rational
/// elimination; anything else is redone over Q.
fn block_rank(b: Block) -> usize {
    if b.entries.is_empty() {
        return 0;
    }
    let fp = PrimeField::new(SCREEN_PRIME).expect("prime");
    let modp = ExactMatrix::from_triplets(fp, b.nrows, b.ncols, b.entries.iter().map(|&(r, c, v)| (r, c, fp.from_i64(v))));
    let r = exactlinalg::rank(&modp);
    if r == b.nrows.min(b.ncols) {
        return r;
    }
    let q = Rationals;
    exactlinalg::rank(&ExactMatrix::from_triplets(q, b.nrows, b.ncols, b.entries.into_iter().map(|(r, c, v)| (r, c, q.from_i64(v)))))
}

/// Exponent vector; only the first `n + 1` slots are used.
type Ex = [i16; MAX_VARS];

fn to_ex(m: &Monomial) -> Ex {
    let mut x = [0i16; MAX_VARS];
    for (i, e) in m.exps().into_iter().enumerate() {
        x[i] = e as i16;
    }
    x
}

fn sym_basis(n: u32, m: i64) -> Vec<Ex> {
    if m < 0 {
        return Vec::new();
    }
    homog_basis(n as usize + 1, m as u32).iter().map(to_ex).collect()
}

/// Top-cohomology basis of `O(-s)` on `P^n`: exponent vectors `c >= 1`
/// with `|c| = s`.
fn top_basis(n: u32, s: i64) -> Vec<Ex> {
    let k = n as i64 + 1;
    if s < k {
        return Vec::new();
    }
    homog_basis(k as usize, (s - k) as u32)
        .iter()
        .map(|u| {
            let mut x = to_ex(u);
            x[..k as usize].iter_mut().for_each(|v| *v += 1);
            x
        })
        .collect()
}

fn zip(a: &Ex, b: &Ex, f: impl Fn(i16, i16) -> i16) -> Ex {
    std::array::from_fn(|i| f(a[i], b[i]))
}

fn bump(mut a: Ex, i: usize, d: i16) -> Ex {
    a[i] += d;
    a
}

type Item = (Ex, Ex);

fn pairs(left: &[Ex], right: &[Ex], key: impl Fn(&Ex, &Ex) -> Ex) -> Vec<(Ex, Item)> {
    let mut out = Vec::with_capacity(left.len() * right.len());
    for a in left {
        for b in right {
            out.push((key(a, b), (*a, *b)));
        }
    }
    out.sort_unstable();
    out
}

/// Rank of the map sending each column item to the row items listed by
/// `edges`. Items are grouped by the invariant key; `edges` must preserve it.
fn map_rank(cols: Vec<(Ex, Item)>, rows: Vec<(Ex, Item)>, edges: impl Fn(&Item, &mut dyn FnMut(Item, i64)) + Sync) -> MapRank {
    // both lists are sorted, so each key is a contiguous range
    let mut spans: Vec<(std::ops::Range<usize>, std::ops::Range<usize>)> = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < cols.len() || j < rows.len() {
        let key = match (cols.get(i), rows.get(j)) {
            (Some(c), Some(r)) => c.0.min(r.0),
            (Some(c), None) => c.0,
            (None, Some(r)) => r.0,
            (None, None) => unreachable!(),
        };
        let (i0, j0) = (i, j);
        while i < cols.len() && cols[i].0 == key {
            i += 1;
        }
        while j < rows.len() && rows[j].0 == key {
            j += 1;
        }
        spans.push((i0..i, j0..j));
    }
    let ranks = par::map_vec(spans, |(cs, rs)| {
        let rblock = &rows[rs.clone()];
        let mut entries = Vec::new();
        for (ci, (_, item)) in cols[cs.clone()].iter().enumerate() {
            edges(item, &mut |t, v| {
                let r = rblock.binary_search_by(|(_, x)| x.cmp(&t)).expect("edge stays in its block");
                entries.push((r, ci, v));
            });
        }
        let b = Block { ncols: cs.len(), nrows: rs.len(), entries };
        (b.ncols as u64, b.nrows as u64, block_rank(b) as u64)
    });
    ranks.into_iter().fold(MapRank::default(), |acc, (c, r, k)| MapRank { cols: acc.cols + c, rows: acc.rows + r, rank: acc.rank + k })
}

/// Global sections of `Sym^m V* ⊗ O(e-m) -> Sym^{m-1} V* ⊗ O(e-m+1)`,
/// `(a, γ) -> Σ a_i (a - e_i, γ + e_i)`.
fn omega_h0_map(n: u32, m: u32, e: i64) -> MapRank {
    let m = m as i64;
    let key = |a: &Ex, g: &Ex| zip(a, g, |x, y| x + y);
    let cols = pairs(&sym_basis(n, m), &sym_basis(n, e - m), key);
    let rows = pairs(&sym_basis(n, m - 1), &sym_basis(n, e - m + 1), key);
    map_rank(cols, rows, |(a, g), out| {
        for i in 0..MAX_VARS {
            if a[i] > 0 {
                out((bump(*a, i, -1), bump(*g, i, 1)), a[i] as i64);
            }
        }
    })
}

/// The same map on top cohomology, `(a, c) -> Σ a_i (a - e_i, c - e_i)`,
/// the term vanishing when `c_i = 1`.
fn omega_top_map(n: u32, m: u32, e: i64) -> MapRank {
    let m = m as i64;
    let key = |a: &Ex, c: &Ex| zip(a, c, |x, y| x - y);
    let cols = pairs(&sym_basis(n, m), &top_basis(n, m - e), key);
    let rows = pairs(&sym_basis(n, m - 1), &top_basis(n, m - e - 1), key);
    map_rank(cols, rows, |(a, c), out| {
        for i in 0..MAX_VARS {
            if a[i] > 0 && c[i] >= 2 {
                out((bump(*a, i, -1), bump(*c, i, -1)), a[i] as i64);
            }
        }
    })
}

/// Global sections of `Sym^{m-1} V ⊗ O(e+m-1) -> Sym^m V ⊗ O(e+m)`,
/// `(b, g) -> Σ (b + e_i, x_i g)`.
fn tangent_h0_map(n: u32, m: u32, e: i64) -> MapRank {
    let m = m as i64;
    let key = |b: &Ex, g: &Ex| zip(b, g, |x, y| x - y);
    let cols = pairs(&sym_basis(n, m - 1), &sym_basis(n, e + m - 1), key);
    let rows = pairs(&sym_basis(n, m), &sym_basis(n, e + m), key);
    map_rank(cols, rows, |(b, g), out| {
        for i in 0..=n as usize {
            out((bump(*b, i, 1), bump(*g, i, 1)), 1);
        }
    })
}

/// The same map on top cohomology: `(b, c) -> Σ (b + e_i, c - e_i)`.
fn tangent_top_map(n: u32, m: u32, e: i64) -> MapRank {
    let m = m as i64;
    let key = |b: &Ex, c: &Ex| zip(b, c, |x, y| x + y);
    let cols = pairs(&sym_basis(n, m - 1), &top_basis(n, -(e + m - 1)), key);
    let rows = pairs(&sym_basis(n, m), &top_basis(n, -(e + m)), key);
    map_rank(cols, rows, |(b, c), out| {
        for i in 0..=n as usize {
            if c[i] >= 2 {
                out((bump(*b, i, 1), bump(*c, i, -1)), 1);
            }
        }
    })
}

/// All `h^i(P^n, Sym^m Ω(e))`.
pub fn sym_omega_cohomology(n: u32, m: u32, e: i64) -> Result<CohomTable, CohomError> {
    check_domain(n, m)?;
    let h0 = omega_h0_map(n, m, e);
    let top = omega_top_map(n, m, e);
    if top.corank() != 0 {
        return Err(CohomError::Invariant(format!(
            "top-cohomology map for Sym^{m} Ω({e}) on P^{n} is not surjective (corank {})",
            top.corank()
        )));
    }
    let mut h = vec![0u64; n as usize + 1];
    h[0] = h0.nullity();
    h[1] += h0.corank();
    h[n as usize] += top.nullity();
    Ok(CohomTable::new(n, Bundle::SymOmega, m, e, h))
}

/// All `h^i(P^n, Sym^m T(e))`, characteristic 0 only.
pub fn sym_tangent_cohomology(n: u32, m: u32, e: i64) -> Result<CohomTable, CohomError> {
    check_domain(n, m)?;
    let h0 = tangent_h0_map(n, m, e);
    if h0.nullity() != 0 {
        return Err(CohomError::Invariant(format!(
            "section map for Sym^{m} T({e}) on P^{n} is not injective (nullity {})",
            h0.nullity()
        )));
    }
    let top = tangent_top_map(n, m, e);
    let mut h = vec![0u64; n as usize + 1];
    h[0] = h0.corank();
    h[n as usize - 1] += top.nullity();
    h[n as usize] += top.corank();
    Ok(CohomTable::new(n, Bundle::SymTangent, m, e, h))
}

/// Field-aware entry points: the tables are defined via characteristic-0
/// identities, so prime fields are refused.
pub fn sym_tangent_cohomology_over(field: FieldSpec, n: u32, m: u32, e: i64) -> Result<CohomTable, CohomError> {
    match field {
        FieldSpec::Rationals => sym_tangent_cohomology(n, m, e),
        other => Err(CohomError::PrimeFieldRefused(other)),
    }
}

pub fn sym_omega_cohomology_over(field: FieldSpec, n: u32, m: u32, e: i64) -> Result<CohomTable, CohomError> {
    match field {
        FieldSpec::Rationals => sym_omega_cohomology(n, m, e),
        other => Err(CohomError::PrimeFieldRefused(other)),
    }
}

/// `χ(Sym^m Ω(e))` from the Euler sequence and the binomial polynomial.
pub fn sym_omega_chi(n: u32, m: u32, e: i64) -> i128 {
    let m = m as i64;
    sym_dim(n, m) as i128 * chi_line(n, e - m) - sym_dim(n, m - 1) as i128 * chi_line(n, e - m + 1)
}

/// `χ(Sym^m T(e))`, likewise.
pub fn sym_tangent_chi(n: u32, m: u32, e: i64) -> i128 {
    let m = m as i64;
    sym_dim(n, m) as i128 * chi_line(n, e + m) - sym_dim(n, m - 1) as i128 * chi_line(n, e + m - 1)
}

/// Checks a table against the Euler characteristic identity. Returns a
/// description of the mismatch, if any.
pub fn check_euler_identity(t: &CohomTable) -> Result<(), String> {
    let expect = match t.bundle {
        Bundle::SymOmega => sym_omega_chi(t.n, t.m, t.e),
        Bundle::SymTangent => sym_tangent_chi(t.n, t.m, t.e),
        Bundle::LineBundle => chi_line(t.n, t.e),
    };
    if expect == t.euler_char {
        Ok(())
    } else {
        Err(format!("{} m={} e={} on P^{}: χ = {} but expected {}", t.bundle, t.m, t.e, t.n, t.euler_char, expect))
    }
}

/// `h^i(Sym^m Ω(e)) = h^{n-i}(Sym^m T(-e-n-1))`, both computed here.
pub fn check_serre_duality(omega: &CohomTable, tangent: &CohomTable) -> Result<(), String> {
    let n = omega.n as usize;
    let ok = omega.bundle == Bundle::SymOmega
        && tangent.bundle == Bundle::SymTangent
        && omega.n == tangent.n
        && omega.m == tangent.m
        && tangent.e == -omega.e - omega.n as i64 - 1
        && (0..=n).all(|i| omega.h[i] == tangent.h[n - i]);
    if ok {
        Ok(())
    } else {
        Err(format!("duality mismatch: Ω side {:?}, T side {:?}", omega.h, tangent.h))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct MemoKey {
    n: u32,
    bundle: Bundle,
    m: u32,
    e: i64,
}

/// Shared cache of computed tables.
#[derive(Default, Debug)]
pub struct CohomMemo {
    tables: RwLock<HashMap<MemoKey, CohomTable>>,
}

impl CohomMemo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, n: u32, bundle: Bundle, m: u32, e: i64) -> Result<CohomTable, CohomError> {
        let key = MemoKey { n, bundle, m, e };
        if let Some(t) = self.tables.read().expect("lock").get(&key) {
            return Ok(t.clone());
        }
        let t = match bundle {
            Bundle::SymOmega => sym_omega_cohomology(n, m, e)?,
            Bundle::SymTangent => sym_tangent_cohomology(n, m, e)?,
            Bundle::LineBundle => line_cohomology(n, e)?,
        };
        self.tables.write().expect("lock").insert(key, t.clone());
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.tables.read().expect("lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_examples() {
        assert_eq!(line_cohomology(3, 2).unwrap().h, vec![10, 0, 0, 0]);
        assert_eq!(line_cohomology(3, -4).unwrap().h, vec![0, 0, 0, 1]);
        assert_eq!(line_cohomology(3, -2).unwrap().h, vec![0, 0, 0, 0]);
        assert_eq!(line_cohomology(1, -2).unwrap().h, vec![0, 1]);
    }

    #[test]
    fn omega_examples() {
        assert_eq!(sym_omega_cohomology(3, 1, 2).unwrap().h[0], 6);
        assert_eq!(sym_omega_cohomology(3, 1, 0).unwrap().h, vec![0, 1, 0, 0]);
        for m in 1..=3 {
            for e in -4..=m as i64 {
                assert_eq!(sym_omega_cohomology(3, m, e).unwrap().h[0], 0);
            }
        }
    }

    #[test]
    fn tangent_examples() {
        assert_eq!(sym_tangent_cohomology(2, 1, 0).unwrap().h[0], 8);
        // Sym^2 V ⊗ S_1 minus the image of V ⊗ S_0
        assert_eq!(sym_tangent_cohomology(3, 2, -1).unwrap().h[0], 36);
        assert_eq!(sym_tangent_cohomology(3, 2, -3).unwrap().h[0], 0);
        assert_eq!(sym_tangent_cohomology(3, 1, 0).unwrap().h, vec![15, 0, 0, 0]);
        assert!(matches!(
            sym_tangent_cohomology_over(FieldSpec::PrimeField(5), 3, 1, 0),
            Err(CohomError::PrimeFieldRefused(_))
        ));
    }

    #[test]
    fn identities_on_small_grid() {
        for n in 2..=3 {
            for m in 1..=3 {
                for e in -7..=4i64 {
                    let o = sym_omega_cohomology(n, m, e).unwrap();
                    check_euler_identity(&o).unwrap();
                    let t = sym_tangent_cohomology(n, m, -e - n as i64 - 1).unwrap();
                    check_euler_identity(&t).unwrap();
                    check_serre_duality(&o, &t).unwrap();
                }
            }
        }
    }

    #[test]
    fn memo_reuses_tables() {
        let memo = CohomMemo::new();
        let a = memo.get(3, Bundle::SymOmega, 2, 1).unwrap();
        let b = memo.get(3, Bundle::SymOmega, 2, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(memo.len(), 1);
    }
}
