//! Fedder's criterion: `S/(f)` is F-pure iff `f^{p-1} ∉ (x_0^p, ..., x_n^p)`.
//!
//! Only monomials of `f^{p-1}` with every exponent `<= p-1` matter. Writing
//! `f = Σ c_t x^{a_t}`, their coefficients are sums of
//! `(p-1)! / Π k_t! · Π c_t^{k_t}` over compositions `Σ k_t = p - 1`. The
//! compositions are enumerated term by term, abandoning a branch as soon as
//! some exponent passes `p - 1`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{FieldError, ParseError};
use crate::field::{Field, PrimeField};
use crate::par;
use crate::polyring::{parse_poly_with, HomogPoly, Monomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FsingError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("polynomial has coefficients in F_{poly} but p = {p}")]
    FieldMismatch { poly: u64, p: u64 },
    #[error("the zero polynomial does not define a hypersurface")]
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FedderWitness {
    pub exponents: Vec<u32>,
    /// Coefficient of this monomial in `f^{p-1}`, in `[1, p)`.
    pub coefficient: u64,
}

impl FedderWitness {
    pub fn display_with(&self, names: &[String]) -> String {
        Monomial::new(&self.exponents).display_with(names)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FedderVerdict {
    pub p: u64,
    pub f_pure: bool,
    /// Lexicographically largest surviving monomial.
    pub witness: Option<FedderWitness>,
    /// Monomials of `f^{p-1}` below the Frobenius power, zero or not.
    pub candidates: usize,
}

fn factorials_mod(p: u64) -> Vec<u64> {
    let mut f = vec![1u64; p as usize];
    for i in 1..p as usize {
        f[i] = (f[i - 1] as u128 * i as u128 % p as u128) as u64;
    }
    f
}

struct Search<'a> {
    field: PrimeField,
    terms: &'a [(Vec<u32>, u64)],
    bound: u32,
    fact: Vec<u64>,
    out: BTreeMap<Vec<u32>, u64>,
}

impl Search<'_> {
    /// Assign `k` to term `t` and beyond; `left` copies of `f` remain.
    fn go(&mut self, t: usize, left: u32, exps: &mut Vec<u32>, weight: u64) {
        let (a, c) = &self.terms[t];
        if t + 1 == self.terms.len() {
            if exps.iter().zip(a).all(|(e, ai)| e + left * ai <= self.bound) {
                let mono: Vec<u32> = exps.iter().zip(a).map(|(e, ai)| e + left * ai).collect();
                let f = &self.field;
                let w = f.mul(&f.mul(&weight, &f.pow(c, left as u64)), &f.inv(&self.fact[left as usize]).expect("unit"));
                let slot = self.out.entry(mono).or_insert(0);
                *slot = f.add(slot, &w);
            }
            return;
        }
        let mut cpow = 1u64;
        for k in 0..=left {
            if k > 0 {
                for (e, ai) in exps.iter_mut().zip(a) {
                    *e += ai;
                }
                if exps.iter().any(|&e| e > self.bound) {
                    for (e, ai) in exps.iter_mut().zip(a) {
                        *e -= k * ai;
                    }
                    return;
                }
                cpow = self.field.mul(&cpow, c);
            }
            let f = &self.field;
            let w = f.mul(&f.mul(&weight, &cpow), &f.inv(&self.fact[k as usize]).expect("unit"));
            self.go(t + 1, left - k, exps, w);
        }
        for (e, ai) in exps.iter_mut().zip(a) {
            *e -= left * ai;
        }
    }
}

fn lifted_terms(f: &HomogPoly<PrimeField>) -> Vec<(Vec<u32>, u64)> {
    f.terms().map(|(m, c)| (m.exps(), *c)).collect()
}

/// Coefficients of `f^{p-1}` on monomials with all exponents `< p`.
fn surviving_coefficients(f: &HomogPoly<PrimeField>) -> BTreeMap<Vec<u32>, u64> {
    let field = *f.field();
    let p = field.modulus();
    let terms = lifted_terms(f);
    let fact = factorials_mod(p);
    let mut s = Search { field, terms: &terms, bound: (p - 1) as u32, fact, out: BTreeMap::new() };
    let mut exps = vec![0u32; f.nvars()];
    // (p-1)! in front
    let lead = s.fact[(p - 1) as usize];
    s.go(0, (p - 1) as u32, &mut exps, lead);
    s.out
}

pub fn fedder_f_pure(f: &HomogPoly<PrimeField>, p: u64) -> Result<FedderVerdict, FsingError> {
    PrimeField::new(p)?;
    if f.field().modulus() != p {
        return Err(FsingError::FieldMismatch { poly: f.field().modulus(), p });
    }
    if f.is_zero() {
        return Err(FsingError::Zero);
    }
    let coeffs = surviving_coefficients(f);
    let witness = coeffs
        .iter()
        .rev()
        .find(|(_, c)| **c != 0)
        .map(|(e, c)| FedderWitness { exponents: e.clone(), coefficient: *c });
    Ok(FedderVerdict { p, f_pure: witness.is_some(), witness, candidates: coeffs.len() })
}

/// Recompute the witness coefficient over the integers: sum the exact
/// multinomial contributions of every composition hitting the monomial,
/// then reduce mod `p`.
pub fn verify_witness(f: &HomogPoly<PrimeField>, verdict: &FedderVerdict) -> Result<(), String> {
    let Some(w) = &verdict.witness else {
        return if verdict.f_pure { Err("F-pure verdict without a witness".into()) } else { Ok(()) };
    };
    let p = verdict.p;
    if w.exponents.len() != f.nvars() || w.exponents.iter().any(|&e| e as u64 >= p) {
        return Err(format!("witness exponents {:?} not all below {p}", w.exponents));
    }
    let terms = lifted_terms(f);
    let n = (p - 1) as u32;
    let fact = |k: u32| (1..=k).fold(BigInt::one(), |acc, i| acc * i);
    let mut total = BigInt::zero();
    let mut k = vec![0u32; terms.len()];
    // all compositions of n into terms.len() parts, odometer style
    loop {
        let sum: u32 = k[..terms.len() - 1].iter().sum();
        if sum <= n {
            let last = terms.len() - 1;
            k[last] = n - sum;
            let hits = (0..f.nvars()).all(|v| terms.iter().zip(&k).map(|((a, _), ki)| a[v] * ki).sum::<u32>() == w.exponents[v]);
            if hits {
                let mut term = fact(n);
                for ((_, c), &ki) in terms.iter().zip(&k) {
                    term = term / fact(ki) * BigInt::from(*c).pow(ki);
                }
                total += term;
            }
        }
        let mut i = 0;
        loop {
            if i + 1 >= terms.len() {
                let got = total.mod_floor(&BigInt::from(p));
                return if got == BigInt::from(w.coefficient) && !got.is_zero() {
                    Ok(())
                } else {
                    Err(format!("witness coefficient recomputes to {got}, reported {}", w.coefficient))
                };
            }
            k[i] += 1;
            if k[..terms.len() - 1].iter().sum::<u32>() <= n {
                break;
            }
            k[i] = 0;
            i += 1;
        }
    }
}

/// Parse `text` over each `F_p` and test it.
pub fn fedder_sweep(text: &str, vars: &[String], primes: &[u64]) -> Result<Vec<FedderVerdict>, FsingError> {
    par::map_slice(primes, |&p| {
        let field = PrimeField::new(p)?;
        let f = parse_poly_with(text, &field, vars)?;
        fedder_f_pure(&f, p)
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::default_var_names;

    fn poly(text: &str, n: usize, p: u64) -> HomogPoly<PrimeField> {
        parse_poly_with(text, &PrimeField::new(p).unwrap(), &default_var_names(n)).unwrap()
    }

    /// Full expansion of `f^{p-1}`.
    fn brute_force(f: &HomogPoly<PrimeField>, p: u64) -> bool {
        f.pow((p - 1) as u32).terms().any(|(m, _)| m.exps().iter().all(|&e| (e as u64) < p))
    }

    #[test]
    fn elliptic_examples() {
        let v = fedder_f_pure(&poly("x^3+y^3+z^3", 3, 7), 7).unwrap();
        assert!(v.f_pure);
        let w = v.witness.as_ref().unwrap();
        assert_eq!(w.exponents, vec![6, 6, 6]);
        assert_eq!(w.coefficient, 90 % 7);
        verify_witness(&poly("x^3+y^3+z^3", 3, 7), &v).unwrap();

        let v = fedder_f_pure(&poly("x^3+y^3+z^3", 3, 5), 5).unwrap();
        assert!(!v.f_pure);
        assert_eq!(v.candidates, 0);

        let f4 = poly("x^3+y^3+z^3+w^3", 4, 7);
        let v = fedder_f_pure(&f4, 7).unwrap();
        assert_eq!(v.witness.as_ref().unwrap().exponents, vec![6, 6, 6, 0]);
        verify_witness(&f4, &v).unwrap();
    }

    #[test]
    fn linear_forms_pure() {
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            let f = poly("x", 1, p);
            assert!(fedder_f_pure(&f, p).unwrap().f_pure);
            let g = poly("x + 2*y - z", 3, p);
            let v = fedder_f_pure(&g, p).unwrap();
            assert!(v.f_pure, "p={p}");
            verify_witness(&g, &v).unwrap();
        }
    }

    #[test]
    fn agrees_with_full_expansion() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for text in ["x^3+y^3+z^3", "x*y*z", "x^2+y^2+z^2", "x^2*y+y^2*z", "x^4+y^4+z^4", "x*y - z^2"] {
                let f = poly(text, 3, p);
                if f.is_zero() {
                    continue;
                }
                let v = fedder_f_pure(&f, p).unwrap();
                assert_eq!(v.f_pure, brute_force(&f, p), "{text} p={p}");
                verify_witness(&f, &v).unwrap();
            }
        }
    }

    #[test]
    fn errors() {
        let f = poly("x^3+y^3+z^3", 3, 7);
        assert!(matches!(fedder_f_pure(&f, 9), Err(FsingError::Field(FieldError::NotPrime(9)))));
        assert!(matches!(fedder_f_pure(&f, 5), Err(FsingError::FieldMismatch { .. })));
    }

    #[test]
    fn tampered_witness_rejected() {
        let f = poly("x^3+y^3+z^3", 3, 7);
        let mut v = fedder_f_pure(&f, 7).unwrap();
        v.witness.as_mut().unwrap().coefficient = 1;
        assert!(verify_witness(&f, &v).is_err());
    }
}
