use std::collections::HashMap;

use rustc_hash::FxHashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{ParseError, RingError};
use crate::exactlinalg::SparseRow;
use crate::field::{Field, FieldSpec};

use super::groebner::{buchberger, normal_form, GroebnerBasis};
use super::monomial::{homog_basis, Monomial};
use super::parse::parse_poly_with;
use super::poly::HomogPoly;
use super::MAX_VARS;

/// A graded quotient `k[vars] / (relations)` with its Gröbner basis.
///
/// Normal forms of monomials are tabulated per degree on first use; the
/// tables sit behind a lock but are never modified once inserted.
pub struct RingSpec<F: Field> {
    field: F,
    vars: Vec<String>,
    relations: Vec<HomogPoly<F>>,
    groebner: GroebnerBasis<F>,
    assert_smooth_proj: bool,
    pieces: RwLock<HashMap<u32, Arc<GradedPiece<F>>>>,
}

/// Standard-monomial basis of `R_d` and the normal form of every other
/// degree-`d` monomial as a vector in that basis.
#[derive(Debug)]
pub struct GradedPiece<F: Field> {
    pub degree: u32,
    pub standard: Vec<Monomial>,
    index: FxHashMap<Monomial, usize>,
    reduced: FxHashMap<Monomial, SparseRow<F::Elem>>,
}

impl<F: Field> GradedPiece<F> {
    pub fn dim(&self) -> usize {
        self.standard.len()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Normal form of `m` in the standard basis. `m` must have this degree.
    pub fn reduce(&self, m: &Monomial, field: &F) -> SparseRow<F::Elem> {
        match self.index.get(m) {
            Some(&i) => vec![(i, field.one())],
            None => self.reduced.get(m).cloned().expect("monomial of the wrong degree"),
        }
    }

    /// Calls `f(index, c * coeff)` for each term of `c * NF(m)`.
    pub fn for_each_reduced(&self, m: &Monomial, c: &F::Elem, field: &F, mut f: impl FnMut(usize, F::Elem)) {
        match self.index.get(m) {
            Some(&i) => f(i, c.clone()),
            None => {
                for (i, v) in self.reduced.get(m).expect("monomial of the wrong degree") {
                    f(*i, field.mul(c, v));
                }
            }
        }
    }
}

impl<F: Field> Clone for RingSpec<F> {
    fn clone(&self) -> Self {
        RingSpec {
            field: self.field.clone(),
            vars: self.vars.clone(),
            relations: self.relations.clone(),
            groebner: self.groebner.clone(),
            assert_smooth_proj: self.assert_smooth_proj,
            pieces: RwLock::new(self.pieces.read().expect("lock").clone()),
        }
    }
}

impl<F: Field> fmt::Debug for RingSpec<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingSpec")
            .field("field", &self.field.spec())
            .field("vars", &self.vars)
            .field("relations", &self.relation_strings())
            .finish()
    }
}

/// Default names: `x, y, z, w` up to four variables, `x0, x1, ...` beyond.
pub fn default_var_names(n: usize) -> Vec<String> {
    if n <= 4 {
        ["x", "y", "z", "w"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (0..n).map(|i| format!("x{i}")).collect()
    }
}

fn check_vars(vars: &[String]) -> Result<(), RingError> {
    if vars.is_empty() {
        return Err(RingError::NoVariables);
    }
    if vars.len() > MAX_VARS {
        return Err(RingError::TooManyVariables(vars.len()));
    }
    for (i, v) in vars.iter().enumerate() {
        let mut chars = v.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok || vars[..i].contains(v) {
            return Err(RingError::BadVariable(v.clone()));
        }
    }
    Ok(())
}

impl<F: Field> RingSpec<F> {
    /// Parse the relations and compute their Gröbner basis.
    pub fn new(field: F, vars: &[&str], relations: &[&str]) -> Result<Self, RingError> {
        field.spec().validate()?;
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        check_vars(&vars)?;
        let mut polys = Vec::with_capacity(relations.len());
        for (index, text) in relations.iter().enumerate() {
            let p = parse_poly_with(text, &field, &vars).map_err(|source| RingError::Relation { index, source })?;
            polys.push(p);
        }
        Self::from_polys(field, vars, polys)
    }

    pub fn from_polys(field: F, vars: Vec<String>, relations: Vec<HomogPoly<F>>) -> Result<Self, RingError> {
        check_vars(&vars)?;
        for (index, r) in relations.iter().enumerate() {
            match r.degree() {
                Some(d) if d >= 1 => {}
                d => return Err(RingError::RelationDegree { index, degree: d.unwrap_or(0) }),
            }
            assert_eq!(r.nvars(), vars.len(), "relation has the wrong number of variables");
        }
        let groebner = buchberger(&relations);
        Ok(RingSpec { field, vars, relations, groebner, assert_smooth_proj: false, pieces: RwLock::new(HashMap::new()) })
    }

    /// The polynomial ring in `n` variables with default names.
    pub fn polynomial_ring(field: F, n: usize) -> Result<Self, RingError> {
        Self::from_polys(field, default_var_names(n), Vec::new())
    }

    /// Record the user's assertion that Proj of this ring is smooth and the
    /// ring is generated in degree one. Never checked.
    pub fn with_smooth_assertion(mut self, flag: bool) -> Self {
        self.assert_smooth_proj = flag;
        self
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn field_spec(&self) -> FieldSpec {
        self.field.spec()
    }
    pub fn vars(&self) -> &[String] {
        &self.vars
    }
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
    pub fn relations(&self) -> &[HomogPoly<F>] {
        &self.relations
    }
    pub fn groebner(&self) -> &GroebnerBasis<F> {
        &self.groebner
    }
    pub fn assert_smooth_proj(&self) -> bool {
        self.assert_smooth_proj
    }

    pub fn max_relation_degree(&self) -> u32 {
        self.relations.iter().filter_map(HomogPoly::degree).max().unwrap_or(0)
    }

    pub fn relation_strings(&self) -> Vec<String> {
        self.relations.iter().map(|r| r.display_with(&self.vars)).collect()
    }

    pub fn parse(&self, text: &str) -> Result<HomogPoly<F>, ParseError> {
        parse_poly_with(text, &self.field, &self.vars)
    }

    pub fn display(&self, p: &HomogPoly<F>) -> String {
        p.display_with(&self.vars)
    }

    pub fn normal_form(&self, p: &HomogPoly<F>) -> HomogPoly<F> {
        normal_form(p, &self.groebner)
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        self.groebner.is_standard(m)
    }

    /// Standard monomials of degree `d`, increasing.
    pub fn standard_monomials(&self, d: u32) -> Vec<Monomial> {
        self.piece(d).standard.clone()
    }

    /// Normal-form table for degree `d` (computed once, then shared).
    pub fn piece(&self, d: u32) -> Arc<GradedPiece<F>> {
        if let Some(p) = self.pieces.read().expect("lock").get(&d) {
            return p.clone();
        }
        let built = Arc::new(self.build_piece(d));
        self.pieces.write().expect("lock").entry(d).or_insert(built).clone()
    }

    fn build_piece(&self, d: u32) -> GradedPiece<F> {
        let field = &self.field;
        let all = homog_basis(self.nvars(), d);
        let standard: Vec<Monomial> = all.iter().copied().filter(|m| self.is_standard(m)).collect();
        let index: FxHashMap<Monomial, usize> = standard.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut reduced: FxHashMap<Monomial, SparseRow<F::Elem>> = FxHashMap::default();
        // increasing order: every monomial needed on the right is smaller
        for m in &all {
            if index.contains_key(m) {
                continue;
            }
            let (g, q) = self
                .groebner
                .elements()
                .iter()
                .find_map(|g| m.div(&g.leading_monomial().expect("nonzero")).map(|q| (g, q)))
                .expect("non-standard monomial has a divisor");
            let lm = g.leading_monomial().expect("nonzero");
            let mut acc: HashMap<usize, F::Elem> = HashMap::new();
            for (t, c) in g.terms() {
                if *t == lm {
                    continue;
                }
                let tm = t.mul(&q);
                let neg = field.neg(c);
                let mut push = |i: usize, v: F::Elem| {
                    let e = acc.entry(i).or_insert_with(|| field.zero());
                    *e = field.add(e, &v);
                };
                match index.get(&tm) {
                    Some(&i) => push(i, neg),
                    None => {
                        for (i, v) in reduced.get(&tm).expect("smaller monomial already reduced") {
                            push(*i, field.mul(&neg, v));
                        }
                    }
                }
            }
            let mut row: SparseRow<F::Elem> = acc.into_iter().filter(|(_, v)| !field.is_zero(v)).collect();
            row.sort_by_key(|e| e.0);
            reduced.insert(*m, row);
        }
        GradedPiece { degree: d, standard, index, reduced }
    }

    /// Normal form of a homogeneous polynomial as a vector over the
    /// standard basis of its degree.
    pub fn reduce_vector(&self, p: &HomogPoly<F>) -> SparseRow<F::Elem> {
        let Some(d) = p.degree() else { return Vec::new() };
        let piece = self.piece(d);
        let mut acc: HashMap<usize, F::Elem> = HashMap::new();
        for (m, c) in p.terms() {
            piece.for_each_reduced(m, c, &self.field, |i, v| {
                let e = acc.entry(i).or_insert_with(|| self.field.zero());
                *e = self.field.add(e, &v);
            });
        }
        let mut row: SparseRow<F::Elem> = acc.into_iter().filter(|(_, v)| !self.field.is_zero(v)).collect();
        row.sort_by_key(|e| e.0);
        row
    }
}

/// `dim_k R_d`, the number of standard monomials of degree `d`.
pub fn quotient_piece_dim<F: Field>(spec: &RingSpec<F>, d: u32) -> usize {
    spec.piece(d).dim()
}

/// Parse a polynomial in the variables of `spec`.
pub fn parse_poly<F: Field>(text: &str, spec: &RingSpec<F>) -> Result<HomogPoly<F>, ParseError> {
    spec.parse(text)
}
