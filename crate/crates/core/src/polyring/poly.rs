use std::collections::BTreeMap;

use crate::field::Field;

use super::monomial::Monomial;

/// Homogeneous polynomial with coefficients in `F`. Terms are kept in a
/// `BTreeMap`, so the leading term is the last entry.
#[derive(Clone, Debug)]
pub struct HomogPoly<F: Field> {
    field: F,
    nvars: usize,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> PartialEq for HomogPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl<F: Field> Eq for HomogPoly<F> {}

impl<F: Field> HomogPoly<F> {
    pub fn zero(field: F, nvars: usize) -> Self {
        HomogPoly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn monomial(field: F, m: Monomial, c: F::Elem) -> Self {
        let mut p = Self::zero(field, m.nvars());
        if !p.field.is_zero(&c) {
            p.terms.insert(m, c);
        }
        p
    }

    /// Sum of the given terms. Returns the two distinct degrees found (highest
    /// first) if the result is not homogeneous.
    pub fn try_from_terms(field: F, nvars: usize, terms: impl IntoIterator<Item = (Monomial, F::Elem)>) -> Result<Self, (u32, u32)> {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial has the wrong number of variables");
            p.add_term_raw(m, c);
        }
        let mut degs: Vec<u32> = p.terms.keys().map(Monomial::degree).collect();
        degs.dedup();
        if degs.len() > 1 {
            return Err((degs[degs.len() - 1], degs[degs.len() - 2]));
        }
        Ok(p)
    }

    /// Panics on inhomogeneous input.
    pub fn from_terms(field: F, nvars: usize, terms: impl IntoIterator<Item = (Monomial, F::Elem)>) -> Self {
        Self::try_from_terms(field, nvars, terms).unwrap_or_else(|(a, b)| panic!("inhomogeneous terms of degrees {a} and {b}"))
    }

    fn add_term_raw(&mut self, m: Monomial, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = self.field.add(v, &c);
                if self.field.is_zero(v) {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
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

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> F::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &F::Elem)> {
        self.terms.iter().next_back()
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.keys().next_back().copied()
    }

    /// Adds `c * m` in place. Panics if `m` has a different degree.
    pub fn add_term(&mut self, m: Monomial, c: F::Elem) {
        if let Some(d) = self.degree() {
            assert_eq!(d, m.degree(), "term breaks homogeneity");
        }
        self.add_term_raw(m, c);
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, self.field.neg(c));
        }
        out
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let mut out = Self::zero(self.field.clone(), self.nvars);
        if self.field.is_zero(c) {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(*m, self.field.mul(v, c));
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let mut out = Self::zero(self.field.clone(), self.nvars);
        for (t, v) in &self.terms {
            out.terms.insert(t.mul(m), v.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.field.clone(), self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term_raw(a.mul(b), self.field.mul(x, y));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::monomial(self.field.clone(), Monomial::one(self.nvars), self.field.one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divide by the leading coefficient. The zero polynomial is returned as is.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.field.inv(c).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Text form accepted back by the parser, highest terms first.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut coeff = self.field.format(c);
            let negative = coeff.starts_with('-');
            if negative {
                coeff.remove(0);
            }
            if i == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&coeff);
            } else if coeff == "1" {
                s.push_str(&m.display_with(names));
            } else {
                s.push_str(&coeff);
                s.push('*');
                s.push_str(&m.display_with(names));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn arithmetic_and_homogeneity() {
        let q = Rationals;
        let x = HomogPoly::monomial(q, Monomial::var(2, 0), q.one());
        let y = HomogPoly::monomial(q, Monomial::var(2, 1), q.one());
        let s = x.add(&y);
        let sq = s.mul(&s);
        assert_eq!(sq.degree(), Some(2));
        assert_eq!(sq.coeff(&Monomial::new(&[1, 1])), q.from_i64(2));
        assert!(s.sub(&s).is_zero());
        let bad = HomogPoly::try_from_terms(q, 2, vec![(Monomial::new(&[2, 0]), q.one()), (Monomial::new(&[0, 1]), q.one())]);
        assert_eq!(bad.unwrap_err(), (2, 1));
    }

    #[test]
    fn char_p_cancellation() {
        let f = PrimeField::new(2).unwrap();
        let x = HomogPoly::monomial(f, Monomial::var(2, 0), 1);
        let y = HomogPoly::monomial(f, Monomial::var(2, 1), 1);
        let s = x.add(&y).pow(2);
        // (x + y)^2 = x^2 + y^2 in characteristic 2
        assert_eq!(s.len(), 2);
    }
}
