//! Weyl-algebra terms `x^β ∂^[α]` with divided-power derivatives.
//!
//! `∂^[α] = ∂^α / α!` acts by `∂^[α](x^γ) = ∏ C(γ_i, α_i) x^(γ-α)`. All
//! coefficients are integer binomials reduced into the field, so nothing
//! here divides by a factorial and characteristic `p <= m` is fine.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::field::{binomial_or_zero, Field};
use crate::polyring::{homog_basis, HomogPoly, Monomial};

/// The term `x^beta ∂^[alpha]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct WeylTerm {
    pub beta: Monomial,
    pub alpha: Monomial,
}

impl WeylTerm {
    pub fn new(beta: Monomial, alpha: Monomial) -> Self {
        assert_eq!(beta.nvars(), alpha.nvars(), "variable count mismatch");
        WeylTerm { beta, alpha }
    }

    pub fn order(&self) -> u32 {
        self.alpha.degree()
    }

    pub fn degree(&self) -> i64 {
        self.beta.degree() as i64 - self.alpha.degree() as i64
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let b = self.beta.display_with(names);
        if self.alpha.is_one() {
            return b;
        }
        let d = format!("d[{}]", self.alpha.display_with(names));
        if self.beta.is_one() {
            d
        } else {
            format!("{b}*{d}")
        }
    }
}

/// Order, then derivative part, then polynomial part.
impl Ord for WeylTerm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.order(), self.alpha, self.beta).cmp(&(other.order(), other.alpha, other.beta))
    }
}

impl PartialOrd for WeylTerm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// All `x^β ∂^[α]` with `|α| <= m` and `|β| = e + |α| >= 0`, sorted.
pub fn weyl_basis(n_vars: usize, m: u32, e: i64) -> Vec<WeylTerm> {
    let mut out = Vec::new();
    for a in 0..=m {
        let b = e + a as i64;
        if b < 0 {
            continue;
        }
        let betas = homog_basis(n_vars, b as u32);
        for alpha in homog_basis(n_vars, a) {
            for beta in &betas {
                out.push(WeylTerm::new(*beta, alpha));
            }
        }
    }
    out.sort();
    out
}

/// `∏ C(γ_i, α_i)` as a field element, or `None` when `α` does not fit in `γ`.
pub(crate) fn divided_coeff<F: Field>(field: &F, gamma: &Monomial, alpha: &Monomial) -> Option<F::Elem> {
    let mut acc = field.one();
    for i in 0..gamma.nvars() {
        let (g, a) = (gamma.exp(i), alpha.exp(i));
        if a > g {
            return None;
        }
        if a > 0 {
            acc = field.mul(&acc, &field.from_bigint(&crate::field::binomial_big(g as u64, a as u64)));
        }
    }
    Some(acc)
}

/// `∏ C(a_i + b_i, a_i)`: the coefficient in `∂^[a] ∂^[b] = c ∂^[a+b]`.
fn merge_coeff<F: Field>(field: &F, a: &Monomial, b: &Monomial) -> F::Elem {
    let mut acc = field.one();
    for i in 0..a.nvars() {
        let (x, y) = (a.exp(i) as i64, b.exp(i) as i64);
        if x > 0 && y > 0 {
            let c = binomial_or_zero(x + y, x);
            acc = field.mul(&acc, &field.from_bigint(&num_bigint::BigInt::from(c)));
        }
    }
    acc
}

/// All monomials `k` with `k <= bound` componentwise.
fn sub_monomials(bound: &Monomial) -> Vec<Monomial> {
    let n = bound.nvars();
    let mut out = vec![Monomial::one(n)];
    for i in 0..n {
        let mut next = Vec::new();
        for m in &out {
            let mut cur = *m;
            next.push(cur);
            for _ in 0..bound.exp(i) {
                cur = cur.mul_var(i);
                next.push(cur);
            }
        }
        out = next;
    }
    out
}

/// Linear combination of Weyl terms, homogeneous of one degree.
#[derive(Clone, Debug)]
pub struct DiffOperator<F: Field> {
    field: F,
    nvars: usize,
    terms: BTreeMap<WeylTerm, F::Elem>,
}

impl<F: Field> PartialEq for DiffOperator<F> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl<F: Field> Eq for DiffOperator<F> {}

impl<F: Field> DiffOperator<F> {
    pub fn zero(field: F, nvars: usize) -> Self {
        DiffOperator { field, nvars, terms: BTreeMap::new() }
    }

    pub fn from_terms(field: F, nvars: usize, terms: impl IntoIterator<Item = (WeylTerm, F::Elem)>) -> Self {
        let mut op = Self::zero(field, nvars);
        for (t, c) in terms {
            op.add_term(t, c);
        }
        op
    }

    pub fn term(field: F, t: WeylTerm, c: F::Elem) -> Self {
        let n = t.beta.nvars();
        Self::from_terms(field, n, [(t, c)])
    }

    /// Panics if the term's degree differs from the operator's.
    pub fn add_term(&mut self, t: WeylTerm, c: F::Elem) {
        assert_eq!(t.beta.nvars(), self.nvars, "variable count mismatch");
        if let Some(d) = self.degree() {
            assert_eq!(d, t.degree(), "term breaks homogeneity");
        }
        if self.field.is_zero(&c) {
            return;
        }
        let v = match self.terms.get(&t) {
            Some(old) => self.field.add(old, &c),
            None => c,
        };
        if self.field.is_zero(&v) {
            self.terms.remove(&t);
        } else {
            self.terms.insert(t, v);
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&WeylTerm, &F::Elem)> {
        self.terms.iter()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest `|α|` in the support; 0 for the zero operator.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(WeylTerm::order).max().unwrap_or(0)
    }

    /// Common `|β| - |α|`; `None` for the zero operator.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next().map(WeylTerm::degree)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(*t, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        Self::from_terms(self.field.clone(), self.nvars, self.terms.iter().map(|(t, v)| (*t, self.field.mul(v, c))))
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.field.neg(&self.field.one()))
    }

    /// Left multiplication by the polynomial `g`.
    pub fn left_mul(&self, g: &HomogPoly<F>) -> Self {
        let mut out = Self::zero(self.field.clone(), self.nvars);
        for (t, c) in &self.terms {
            for (m, a) in g.terms() {
                out.add_term(WeylTerm::new(t.beta.mul(m), t.alpha), self.field.mul(c, a));
            }
        }
        out
    }

    /// Terms of order at most `m`.
    pub fn truncate_order(&self, m: u32) -> Self {
        Self::from_terms(
            self.field.clone(),
            self.nvars,
            self.terms.iter().filter(|(t, _)| t.order() <= m).map(|(t, c)| (*t, c.clone())),
        )
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (t, c) in self.terms.iter().rev() {
            let body = t.display_with(names);
            let coeff = self.field.format(c);
            let s = if coeff == "1" {
                body
            } else if body == "1" {
                coeff
            } else {
                format!("{coeff}*{body}")
            };
            parts.push(s);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// Apply `op` to a homogeneous polynomial of the ambient polynomial ring.
pub fn apply_op<F: Field>(op: &DiffOperator<F>, p: &HomogPoly<F>) -> HomogPoly<F> {
    assert_eq!(op.nvars, p.nvars(), "variable count mismatch");
    let field = op.field.clone();
    let mut acc: BTreeMap<Monomial, F::Elem> = BTreeMap::new();
    for (t, c) in &op.terms {
        for (g, a) in p.terms() {
            if let Some(b) = divided_coeff(&field, g, &t.alpha) {
                if field.is_zero(&b) {
                    continue;
                }
                let m = t.beta.mul(&g.div(&t.alpha).expect("fits"));
                let v = field.mul(&field.mul(c, a), &b);
                let e = acc.entry(m).or_insert_with(|| field.zero());
                *e = field.add(e, &v);
            }
        }
    }
    HomogPoly::from_terms(field.clone(), op.nvars, acc.into_iter().filter(|(_, v)| !field.is_zero(v)))
}

/// Product `a ∘ b`, brought back to `x^β ∂^[α]` normal order via
/// `∂^[α] x^γ = Σ_k C(γ, k) x^(γ-k) ∂^[α-k]`.
pub fn compose<F: Field>(a: &DiffOperator<F>, b: &DiffOperator<F>) -> DiffOperator<F> {
    let field = a.field.clone();
    let mut out = DiffOperator::zero(field.clone(), a.nvars);
    for (ta, ca) in &a.terms {
        for (tb, cb) in &b.terms {
            let c0 = field.mul(ca, cb);
            // k runs over monomials dividing both α and γ = tb.beta
            let common = Monomial::new(
                &(0..a.nvars).map(|i| ta.alpha.exp(i).min(tb.beta.exp(i))).collect::<Vec<_>>(),
            );
            for k in sub_monomials(&common) {
                let Some(bin) = divided_coeff(&field, &tb.beta, &k) else { continue };
                let rest = ta.alpha.div(&k).expect("k <= alpha");
                let merge = merge_coeff(&field, &rest, &tb.alpha);
                let v = field.mul(&field.mul(&c0, &bin), &merge);
                if field.is_zero(&v) {
                    continue;
                }
                let beta = ta.beta.mul(&tb.beta.div(&k).expect("k <= gamma"));
                out.add_term(WeylTerm::new(beta, rest.mul(&tb.alpha)), v);
            }
        }
    }
    out
}

/// `[a, b] = a∘b - b∘a`.
pub fn commutator<F: Field>(a: &DiffOperator<F>, b: &DiffOperator<F>) -> DiffOperator<F> {
    compose(a, b).add(&compose(b, a).neg())
}

/// `[δ, x_i]`, computed termwise: `[x^β ∂^[α], x_i] = x^β ∂^[α - e_i]`.
pub fn commutator_with_var<F: Field>(op: &DiffOperator<F>, i: usize) -> DiffOperator<F> {
    let v = Monomial::var(op.nvars, i);
    DiffOperator::from_terms(
        op.field.clone(),
        op.nvars,
        op.terms
            .iter()
            .filter_map(|(t, c)| t.alpha.div(&v).map(|a| (WeylTerm::new(t.beta, a), c.clone()))),
    )
}

/// `Σ x_i ∂_i`, acting on degree-`d` polynomials as multiplication by `d`.
pub fn euler_operator<F: Field>(field: F, n_vars: usize) -> DiffOperator<F> {
    let one = field.one();
    DiffOperator::from_terms(
        field,
        n_vars,
        (0..n_vars).map(|i| (WeylTerm::new(Monomial::var(n_vars, i), Monomial::var(n_vars, i)), one.clone())),
    )
}

/// `∂^[α]` on its own.
pub fn divided_power<F: Field>(field: F, alpha: Monomial) -> DiffOperator<F> {
    let n = alpha.nvars();
    let one = field.one();
    DiffOperator::term(field, WeylTerm::new(Monomial::one(n), alpha), one)
}
