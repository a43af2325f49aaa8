//! Graded pieces `(D^m_R)_e` of the ring of differential operators of a
//! graded quotient `R = S / I`, `S = k[x_1..x_n]`.
//!
//! # Reduction to a finite linear system
//!
//! Write `D_S = ⊕_α S ∂^[α]` in left normal form. Then `I·D_S = ⊕_α I ∂^[α]`,
//! so the operators `x^β ∂^[α]` with `x^β` a standard monomial span a
//! complement `W` of `I·D_S`, and every class in `D_R = D_S(I) / I·D_S` has a
//! unique representative in `W`. Here `D_S(I)` is the set of operators with
//! `δ(I) ⊆ I`. So `(D^m_R)_e ≅ D_S(I) ∩ W^m_e` where `W^m_e` is spanned by
//! the standard terms of order `<= m` and degree `e`.
//!
//! Membership in `D_S(I)` is decided by finitely many conditions:
//!
//! **Multipliers.** If `δ` has order `<= m` and `δ(μ f_j) ∈ I` for every
//! monomial `|μ| <= m` and every generator `f_j`, then `δ(I) ⊆ I`. The proof
//! is by induction on the order. Order 0 operators are `S`-linear. For order
//! `m`, induct on `|μ|`. If `|μ| > m`, write `μ = x_i μ'` and use
//! `δ(x_i μ' f) = x_i δ(μ' f) + [δ, x_i](μ' f)`. The first term lies in `I`
//! by induction on `|μ|`. The commutator has order `m - 1`, and for
//! `|ν| <= m - 1` we have `[δ, x_i](ν f) = δ(x_i ν f) - x_i δ(ν f) ∈ I`, so by
//! induction on the order `[δ, x_i](I) ⊆ I`.
//!
//! **Commutators.** The same identity shows that `δ(I) ⊆ I` if and only if
//! `δ(f_j) ∈ I` for all `j` and `[δ, x_i](I) ⊆ I` for all `i`. Unrolling
//! this gives iterated commutators. Since `[x^β ∂^[α], x_i] = x^β ∂^[α - e_i]`,
//! the iterated commutator with `x^μ` is `δ_μ = Σ c x^β ∂^[α - μ]`, which
//! again lies in `W`. So `δ ∈ D_S(I)` iff `δ_μ(f_j) ∈ I` for all `|μ| <= m - 1`
//! (for `|μ| = m` the operator `δ_μ` has order 0 and the condition is
//! automatic). Each unknown then meets only the few `μ` with `α - μ <= t` for
//! a term `t` of some `f_j`, so this system is far sparser than the
//! multiplier one. It is the default. Both give the same solution space,
//! which the tests check.
//!
//! The systems decompose along the fine grading by `Z^n` modulo the exponent
//! differences of the relations. The elimination code finds those blocks on
//! its own as connected components.

use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::exactlinalg::{self, ExactMatrix, RankMode, SparseRow};
use crate::field::{binomial_big, Field, FieldSpec};
use crate::par;
use crate::polyring::{homog_basis, monomials_up_to, GradedPiece, Monomial, RingSpec};

use super::weyl::{divided_coeff, weyl_basis, DiffOperator, WeylTerm};

/// Which finite criterion encodes `δ(I) ⊆ I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ConstraintSet {
    /// `δ_μ(f_j) ∈ I` for `|μ| <= m - 1` (iterated commutators with variables).
    #[default]
    Commutators,
    /// `δ(μ f_j) ∈ I` for `|μ| <= m`.
    Multipliers,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpSpaceOptions {
    pub constraints: ConstraintSet,
    pub rank_mode: RankMode,
}

/// A computed piece `(D^m_R)_e` with basis representatives.
#[derive(Clone, Debug)]
pub struct GradedOpSpace<F: Field> {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    pub order_bound: u32,
    pub degree: i64,
    pub dim: usize,
    /// Number of standard Weyl terms (unknowns).
    pub unknowns: usize,
    /// Reduced-echelon representatives, one per free unknown.
    pub basis: Vec<DiffOperator<F>>,
}

impl<F: Field> GradedOpSpace<F> {
    /// Is `op` (after reducing its coefficients modulo `I`) in the span of
    /// the basis?
    pub fn contains(&self, spec: &RingSpec<F>, op: &DiffOperator<F>) -> bool {
        let op = reduce_operator(spec, op);
        if op.is_zero() {
            return true;
        }
        let mut index: FxHashMap<WeylTerm, usize> = FxHashMap::default();
        let mut rows: Vec<Vec<(usize, F::Elem)>> = Vec::new();
        for b in self.basis.iter().chain(std::iter::once(&op)) {
            let mut row = Vec::new();
            for (t, c) in b.terms() {
                let n = index.len();
                let k = *index.entry(*t).or_insert(n);
                row.push((k, c.clone()));
            }
            rows.push(row);
        }
        let field = spec.field();
        let with = exactlinalg::rank(&ExactMatrix::from_rows(field.clone(), index.len(), rows.clone()));
        rows.pop();
        let without = exactlinalg::rank(&ExactMatrix::from_rows(field.clone(), index.len(), rows));
        with == without
    }
}

/// Replace every coefficient polynomial of `op` by its normal form, giving
/// the representative in the standard complement of `I·D_S`.
pub fn reduce_operator<F: Field>(spec: &RingSpec<F>, op: &DiffOperator<F>) -> DiffOperator<F> {
    let field = spec.field().clone();
    let n = spec.nvars();
    let mut out = DiffOperator::zero(field.clone(), n);
    for (t, c) in op.terms() {
        let piece = spec.piece(t.beta.degree());
        piece.for_each_reduced(&t.beta, c, &field, |i, v| {
            out.add_term(WeylTerm::new(piece.standard[i], t.alpha), v);
        });
    }
    out
}

/// Column layout: blocks of standard `β` for each `α`, ordered like
/// [`WeylTerm`].
struct Columns<F: Field> {
    blocks: Vec<(Monomial, Arc<GradedPiece<F>>, usize)>,
    ncols: usize,
}

impl<F: Field> Columns<F> {
    fn new(spec: &RingSpec<F>, m: u32, e: i64) -> Self {
        let mut blocks = Vec::new();
        let mut off = 0;
        for a in 0..=m {
            let b = e + a as i64;
            if b < 0 {
                continue;
            }
            let piece = spec.piece(b as u32);
            if piece.dim() == 0 {
                continue;
            }
            for alpha in homog_basis(spec.nvars(), a) {
                blocks.push((alpha, piece.clone(), off));
                off += piece.dim();
            }
        }
        Columns { blocks, ncols: off }
    }

    fn term(&self, col: usize) -> WeylTerm {
        let k = self.blocks.partition_point(|b| b.2 <= col) - 1;
        let (alpha, piece, off) = &self.blocks[k];
        WeylTerm::new(piece.standard[col - off], *alpha)
    }
}

/// Row layout: one block per `(relation, μ)`, sized by the target degree.
struct Rows {
    offsets: FxHashMap<(usize, Monomial), usize>,
    nrows: usize,
}

impl Rows {
    fn new<F: Field>(spec: &RingSpec<F>, e: i64, max_mu: Option<u32>) -> Self {
        let mut offsets = FxHashMap::default();
        let mut nrows = 0;
        let Some(max_mu) = max_mu else { return Rows { offsets, nrows } };
        for (j, f) in spec.relations().iter().enumerate() {
            let df = f.degree().expect("nonzero relation") as i64;
            for mu in monomials_up_to(spec.nvars(), max_mu) {
                let d = df + e + mu.degree() as i64;
                if d < 0 {
                    continue;
                }
                let dim = spec.piece(d as u32).dim();
                if dim > 0 {
                    offsets.insert((j, mu), nrows);
                    nrows += dim;
                }
            }
        }
        Rows { offsets, nrows }
    }
}

fn sub_boxes(a: &Monomial, b: &Monomial) -> Vec<Monomial> {
    let n = a.nvars();
    let mut out = vec![Monomial::one(n)];
    for i in 0..n {
        let lim = a.exp(i).min(b.exp(i));
        let mut next = Vec::with_capacity(out.len() * (lim as usize + 1));
        for m in &out {
            let mut cur = *m;
            next.push(cur);
            for _ in 0..lim {
                cur = cur.mul_var(i);
                next.push(cur);
            }
        }
        out = next;
    }
    out
}

fn int_in_field<F: Field>(field: &F, n: u32, k: u32) -> F::Elem {
    field.from_bigint(&binomial_big(n as u64, k as u64))
}

/// Assemble the constraint matrix on the standard unknowns.
fn constraint_matrix<F: Field>(spec: &RingSpec<F>, m: u32, e: i64, set: ConstraintSet, cols: &Columns<F>) -> ExactMatrix<F> {
    let field = spec.field().clone();
    let max_mu = match set {
        ConstraintSet::Commutators => m.checked_sub(1),
        ConstraintSet::Multipliers => Some(m),
    };
    let rows = Rows::new(spec, e, max_mu);
    let relations: Vec<Vec<(Monomial, F::Elem)>> =
        spec.relations().iter().map(|f| f.terms().map(|(t, c)| (*t, c.clone())).collect()).collect();
    let mus: Vec<Monomial> = max_mu.map(|k| monomials_up_to(spec.nvars(), k)).unwrap_or_default();

    let block_entries: Vec<Vec<(usize, usize, F::Elem)>> = par::map_slice(&cols.blocks, |(alpha, piece, off)| {
        let mut out = Vec::new();
        let mut emit = |row_off: usize, target: &Arc<GradedPiece<F>>, gamma: &Monomial, kappa: &Monomial, coeff: &F::Elem| {
            // x^β ∂^[κ] x^γ = C(γ, κ) x^(β + γ - κ); caller folds C into coeff
            let rest = gamma.div(kappa).expect("kappa fits");
            for (bi, beta) in piece.standard.iter().enumerate() {
                let mono = beta.mul(&rest);
                target.for_each_reduced(&mono, coeff, &field, |r, v| out.push((row_off + r, off + bi, v)));
            }
        };
        match set {
            ConstraintSet::Commutators => {
                for (j, terms) in relations.iter().enumerate() {
                    for (t, c) in terms {
                        for kappa in sub_boxes(alpha, t) {
                            let Some(mu) = alpha.div(&kappa) else { continue };
                            if m == 0 || mu.degree() > m - 1 {
                                continue;
                            }
                            let Some(&row_off) = rows.offsets.get(&(j, mu)) else { continue };
                            let mut coeff = c.clone();
                            for i in 0..t.nvars() {
                                if kappa.exp(i) > 0 {
                                    coeff = field.mul(&coeff, &int_in_field(&field, t.exp(i), kappa.exp(i)));
                                }
                            }
                            if field.is_zero(&coeff) {
                                continue;
                            }
                            let d = (t.degree() + mu.degree()) as i64 + e;
                            let target = spec.piece(d as u32);
                            emit(row_off, &target, t, &kappa, &coeff);
                        }
                    }
                }
            }
            ConstraintSet::Multipliers => {
                for (j, terms) in relations.iter().enumerate() {
                    for mu in &mus {
                        let Some(&row_off) = rows.offsets.get(&(j, *mu)) else { continue };
                        let d = (terms[0].0.degree() + mu.degree()) as i64 + e;
                        let target = spec.piece(d as u32);
                        for (t, c) in terms {
                            let gamma = mu.mul(t);
                            let Some(b) = divided_coeff(&field, &gamma, alpha) else { continue };
                            let coeff = field.mul(c, &b);
                            if field.is_zero(&coeff) {
                                continue;
                            }
                            emit(row_off, &target, &gamma, alpha, &coeff);
                        }
                    }
                }
            }
        }
        out
    });

    let mut row_lists: Vec<Vec<(usize, F::Elem)>> = vec![Vec::new(); rows.nrows];
    for entries in block_entries {
        for (r, c, v) in entries {
            row_lists[r].push((c, v));
        }
    }
    ExactMatrix::from_rows(field, cols.ncols, row_lists)
}

/// `dim (D^m_R)_e` without building a basis.
pub fn operator_space_dim<F: Field>(spec: &RingSpec<F>, m: u32, e: i64) -> usize {
    operator_space_dim_with(spec, m, e, OpSpaceOptions::default())
}

pub fn operator_space_dim_with<F: Field>(spec: &RingSpec<F>, m: u32, e: i64, opts: OpSpaceOptions) -> usize {
    if e + (m as i64) < 0 {
        return 0;
    }
    let cols = Columns::new(spec, m, e);
    if cols.ncols == 0 {
        return 0;
    }
    let c = constraint_matrix(spec, m, e, opts.constraints, &cols);
    cols.ncols - exactlinalg::rank_with(&c, opts.rank_mode)
}

/// The piece `(D^m_R)_e` with an explicit basis.
pub fn graded_operator_space<F: Field>(spec: &RingSpec<F>, m: u32, e: i64) -> GradedOpSpace<F> {
    graded_operator_space_with(spec, m, e, ConstraintSet::default())
}

pub fn graded_operator_space_with<F: Field>(spec: &RingSpec<F>, m: u32, e: i64, set: ConstraintSet) -> GradedOpSpace<F> {
    let field = spec.field().clone();
    let mut out = GradedOpSpace {
        field: spec.field_spec(),
        vars: spec.vars().to_vec(),
        order_bound: m,
        degree: e,
        dim: 0,
        unknowns: 0,
        basis: Vec::new(),
    };
    if e + (m as i64) < 0 {
        return out;
    }
    let cols = Columns::new(spec, m, e);
    out.unknowns = cols.ncols;
    if cols.ncols == 0 {
        return out;
    }
    let c = constraint_matrix(spec, m, e, set, &cols);
    let kernel: Vec<SparseRow<F::Elem>> = exactlinalg::nullspace_sparse(&c);
    out.dim = kernel.len();
    out.basis = kernel
        .into_iter()
        .map(|v| DiffOperator::from_terms(field.clone(), spec.nvars(), v.into_iter().map(|(col, x)| (cols.term(col), x))))
        .collect();
    out
}

/// Outcome of the saturation route.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationReport {
    /// Weyl terms of order `<= m`, degree `e`, all `β`.
    pub unknowns: usize,
    /// Dimension of `{δ : δ(I) ⊆ I}` among them.
    pub preserving: usize,
    /// Dimension of `(I·D_S)^{<= m}_e`.
    pub ideal_multiples: usize,
    /// Slack at which the span stopped growing.
    pub slack: u32,
    pub dim: usize,
}

/// Cross-check route on the full Weyl basis: the nullity of the multiplier
/// constraints minus the span of the ideal multiples `f_j·w`, with `w` of
/// order `m + s` projected to order `<= m`, raising `s` until the span has
/// not grown for two consecutive steps.
pub fn saturated_operator_dim<F: Field>(spec: &RingSpec<F>, m: u32, e: i64) -> SaturationReport {
    let field = spec.field().clone();
    let n = spec.nvars();
    let terms = weyl_basis(n, m, e);
    let index: FxHashMap<WeylTerm, usize> = terms.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let mut rows: FxHashMap<(usize, Monomial, usize), usize> = FxHashMap::default();
    let mut row_lists: Vec<Vec<(usize, F::Elem)>> = Vec::new();
    for (col, t) in terms.iter().enumerate() {
        for (j, f) in spec.relations().iter().enumerate() {
            for mu in monomials_up_to(n, m) {
                for (g, c) in f.terms() {
                    let gamma = mu.mul(g);
                    let Some(b) = divided_coeff(&field, &gamma, &t.alpha) else { continue };
                    let coeff = field.mul(c, &b);
                    if field.is_zero(&coeff) {
                        continue;
                    }
                    let mono = t.beta.mul(&gamma.div(&t.alpha).expect("fits"));
                    let piece = spec.piece(mono.degree());
                    piece.for_each_reduced(&mono, &coeff, &field, |r, v| {
                        let next = row_lists.len();
                        let k = *rows.entry((j, mu, r)).or_insert(next);
                        if k == row_lists.len() {
                            row_lists.push(Vec::new());
                        }
                        row_lists[k].push((col, v));
                    });
                }
            }
        }
    }
    let preserving = terms.len() - exactlinalg::rank(&ExactMatrix::from_rows(field.clone(), terms.len(), row_lists));

    let mut span_rows: Vec<Vec<(usize, F::Elem)>> = Vec::new();
    let mut history: Vec<usize> = Vec::new();
    let mut s = 0u32;
    loop {
        for f in spec.relations() {
            let df = f.degree().expect("nonzero") as i64;
            for w in weyl_basis(n, m + s, e - df) {
                if w.order() < m + s && s > 0 {
                    continue; // already generated at a smaller slack
                }
                let op = DiffOperator::term(field.clone(), w, field.one()).left_mul(f).truncate_order(m);
                let row: Vec<(usize, F::Elem)> = op.terms().map(|(t, c)| (index[t], c.clone())).collect();
                if !row.is_empty() {
                    span_rows.push(row);
                }
            }
        }
        let dim = exactlinalg::rank(&ExactMatrix::from_rows(field.clone(), terms.len(), span_rows.clone()));
        history.push(dim);
        let k = history.len();
        if k >= 3 && history[k - 1] == history[k - 2] && history[k - 2] == history[k - 3] {
            break;
        }
        s += 1;
    }
    let ideal_multiples = *history.last().expect("nonempty");
    SaturationReport { unknowns: terms.len(), preserving, ideal_multiples, slack: s, dim: preserving - ideal_multiples }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::weyl::euler_operator;
    use crate::field::{binomial_or_zero, PrimeField, Rationals};

    fn bgg() -> RingSpec<Rationals> {
        RingSpec::new(Rationals, &["x", "y", "z"], &["x^3+y^3+z^3"]).unwrap()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(graded_operator_space(&bgg(), 1, -1).dim, 0);
        let s = RingSpec::polynomial_ring(Rationals, 3).unwrap();
        let sp = graded_operator_space(&s, 1, -1);
        assert_eq!(sp.dim, 3);
        assert_eq!(sp.unknowns, 3);
        for (m, e) in [(1, 0), (2, 0)] {
            let sp = graded_operator_space(&bgg(), m, e);
            assert!(sp.dim >= 1);
            assert!(sp.contains(&bgg(), &euler_operator(Rationals, 3)));
        }
        assert_eq!(operator_space_dim(&bgg(), 3, -5), 0);
    }

    #[test]
    fn polynomial_ring_closed_form() {
        for n in 1..=3usize {
            let s = RingSpec::polynomial_ring(Rationals, n).unwrap();
            for m in 0..=3u32 {
                for e in -3..=2i64 {
                    let expect: u128 = (0i64.max(-e)..=m as i64)
                        .map(|a| binomial_or_zero(a + n as i64 - 1, n as i64 - 1) * binomial_or_zero(a + e + n as i64 - 1, n as i64 - 1))
                        .sum();
                    assert_eq!(operator_space_dim(&s, m, e) as u128, expect, "n={n} m={m} e={e}");
                }
            }
        }
    }

    #[test]
    fn constraint_sets_agree() {
        let quad = RingSpec::new(Rationals, &["x", "y", "z", "w"], &["x*w - y*z"]).unwrap();
        for spec in [bgg(), quad] {
            for m in 0..=2u32 {
                for e in -2..=1i64 {
                    let a = operator_space_dim_with(&spec, m, e, OpSpaceOptions { constraints: ConstraintSet::Commutators, ..Default::default() });
                    let b = operator_space_dim_with(&spec, m, e, OpSpaceOptions { constraints: ConstraintSet::Multipliers, ..Default::default() });
                    assert_eq!(a, b, "m={m} e={e}");
                    let sat = saturated_operator_dim(&spec, m, e);
                    assert_eq!(sat.dim, a, "saturation m={m} e={e}");
                }
            }
        }
    }

    #[test]
    fn quadric_cone_has_negative_operators() {
        let quad = RingSpec::new(Rationals, &["x", "y", "z", "w"], &["x*w - y*z"]).unwrap();
        let found = (1..=3u32).any(|m| operator_space_dim(&quad, m, -1) > 0);
        assert!(found);
    }

    #[test]
    fn char_two_quadric_derivation() {
        // d/dx0 is an operator of degree -1 on F2[x0,x1,x2]/(x0^2 + x1 x2)
        let f2 = PrimeField::new(2).unwrap();
        let spec = RingSpec::new(f2, &["a", "b", "c"], &["a^2 + b*c"]).unwrap();
        let sp = graded_operator_space(&spec, 1, -1);
        assert!(sp.dim >= 1);
        let da = crate::diffop::weyl::divided_power(f2, Monomial::var(3, 0));
        assert!(sp.contains(&spec, &da));
    }
}
