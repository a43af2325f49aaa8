//! Buchberger's algorithm for homogeneous ideals.
//!
//! Pairs are processed by the normal strategy (smallest lcm first) and only
//! Buchberger's first criterion is used to skip pairs. The result is the
//! reduced Gröbner basis: monic, autoreduced, sorted by leading monomial.

use crate::field::Field;

use super::monomial::Monomial;
use super::poly::HomogPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis<F: Field> {
    elements: Vec<HomogPoly<F>>,
}

impl<F: Field> GroebnerBasis<F> {
    pub fn elements(&self) -> &[HomogPoly<F>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements.iter().map(|g| g.leading_monomial().expect("nonzero element")).collect()
    }

    /// True when no leading monomial divides `m`.
    pub fn is_standard(&self, m: &Monomial) -> bool {
        self.elements.iter().all(|g| !g.leading_monomial().expect("nonzero").divides(m))
    }

    pub fn contains(&self, p: &HomogPoly<F>) -> bool {
        normal_form(p, self).is_zero()
    }
}

/// Full remainder of `p` on division by `gb`.
pub fn normal_form<F: Field>(p: &HomogPoly<F>, gb: &GroebnerBasis<F>) -> HomogPoly<F> {
    reduce(p, &gb.elements)
}

/// Remainder of `p` by the monic polynomials `divisors`.
fn reduce<F: Field>(p: &HomogPoly<F>, divisors: &[HomogPoly<F>]) -> HomogPoly<F> {
    let field = p.field().clone();
    let mut rest = p.clone();
    let mut rem = HomogPoly::zero(field.clone(), p.nvars());
    while let Some((m, c)) = rest.leading_term().map(|(m, c)| (*m, c.clone())) {
        let hit = divisors.iter().find_map(|g| {
            let lm = g.leading_monomial().expect("nonzero divisor");
            m.div(&lm).map(|q| (g, q))
        });
        match hit {
            Some((g, q)) => {
                let lc = g.leading_term().expect("nonzero").1.clone();
                let factor = field.div(&c, &lc);
                rest = rest.sub(&g.mul_monomial(&q).scale(&factor));
            }
            None => {
                rem.add_term(m, c.clone());
                rest.add_term(m, field.neg(&c));
            }
        }
    }
    rem
}

fn s_polynomial<F: Field>(f: &HomogPoly<F>, g: &HomogPoly<F>) -> HomogPoly<F> {
    let lf = f.leading_monomial().expect("nonzero");
    let lg = g.leading_monomial().expect("nonzero");
    let l = lf.lcm(&lg);
    let a = f.mul_monomial(&l.div(&lf).expect("lcm")).monic();
    let b = g.mul_monomial(&l.div(&lg).expect("lcm")).monic();
    a.sub(&b)
}

pub fn buchberger<F: Field>(gens: &[HomogPoly<F>]) -> GroebnerBasis<F> {
    let mut basis: Vec<HomogPoly<F>> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for g in gens {
        let r = reduce(g, &basis);
        if !r.is_zero() {
            let r = r.monic();
            for i in 0..basis.len() {
                pairs.push((i, basis.len()));
            }
            basis.push(r);
        }
    }
    loop {
        // normal strategy: smallest lcm, ties by index
        let Some(pos) = (0..pairs.len()).min_by_key(|&k| {
            let (i, j) = pairs[k];
            let l = basis[i].leading_monomial().unwrap().lcm(&basis[j].leading_monomial().unwrap());
            (l, i, j)
        }) else {
            break;
        };
        let (i, j) = pairs.swap_remove(pos);
        let li = basis[i].leading_monomial().unwrap();
        let lj = basis[j].leading_monomial().unwrap();
        if li.is_coprime(&lj) {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j]);
        let r = reduce(&s, &basis);
        if !r.is_zero() {
            let r = r.monic();
            let k = basis.len();
            for i in 0..k {
                pairs.push((i, k));
            }
            basis.push(r);
        }
    }
    GroebnerBasis { elements: autoreduce(basis) }
}

fn autoreduce<F: Field>(basis: Vec<HomogPoly<F>>) -> Vec<HomogPoly<F>> {
    // drop elements whose leading monomial is divisible by another's
    let lms: Vec<Monomial> = basis.iter().map(|g| g.leading_monomial().unwrap()).collect();
    let mut keep: Vec<HomogPoly<F>> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = lms.iter().enumerate().any(|(j, lj)| {
            j != i && lj.divides(&lms[i]) && (lj != &lms[i] || j < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<HomogPoly<F>> = keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let lm = keep[i].leading_monomial().unwrap();
        let lc = keep[i].leading_term().unwrap().1.clone();
        let mut tail = keep[i].clone();
        tail.add_term(lm, keep[i].field().neg(&lc));
        let mut r = reduce(&tail, &others);
        r.add_term(lm, lc);
        out.push(r.monic());
    }
    out.sort_by_key(|g| g.leading_monomial().unwrap());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::polyring::parse::parse_poly_with;

    fn p(s: &str, vars: &[&str]) -> HomogPoly<Rationals> {
        let v: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        parse_poly_with(s, &Rationals, &v).unwrap()
    }

    #[test]
    fn single_generator_is_monic_basis() {
        let v = ["x", "y", "z"];
        let gb = buchberger(&[p("2*x^3+2*y^3+2*z^3", &v)]);
        assert_eq!(gb.elements(), &[p("x^3+y^3+z^3", &v)]);
    }

    #[test]
    fn monomial_ideal() {
        let v = ["x", "y"];
        let gb = buchberger(&[p("x^2", &v), p("x*y", &v)]);
        assert_eq!(gb.len(), 2);
    }

    #[test]
    fn normal_form_of_cube() {
        let v = ["x", "y", "z"];
        let gb = buchberger(&[p("x^3+y^3+z^3", &v)]);
        assert_eq!(gb.leading_monomials(), vec![Monomial::new(&[3, 0, 0])]);
        let nf = normal_form(&p("x^3", &v), &gb);
        assert_eq!(nf, p("-y^3-z^3", &v));
        let f = p("x^3+y^3+z^3", &v);
        assert!(normal_form(&f, &gb).is_zero());
        let g = p("x*(x^3+y^3+z^3) + y^4", &v);
        assert_eq!(normal_form(&g, &gb), normal_form(&p("y^4", &v), &gb));
    }

    #[test]
    fn two_quadrics() {
        let v = ["a", "b", "c", "d", "e"];
        let f1 = p("a^2 + b^2 + c^2 + d^2 + e^2", &v);
        let f2 = p("a*b + 2*c^2 - d*e + 3*a*e", &v);
        let gb = buchberger(&[f1.clone(), f2.clone()]);
        assert!(normal_form(&f1, &gb).is_zero());
        assert!(normal_form(&f2, &gb).is_zero());
        assert!(gb.len() >= 2);
    }
}
