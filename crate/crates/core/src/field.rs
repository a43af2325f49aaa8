//! Base fields: the rationals and prime fields.
//!
//! Every algebraic object in the crate is generic over [`Field`]. The two
//! implementations carry their own runtime data (the modulus for
//! [`PrimeField`]) so elements themselves stay plain values.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exactlinalg::{Echelon, SparseRow};
use crate::error::FieldError;

/// Which field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

impl FieldSpec {
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        match *self {
            FieldSpec::Rationals => Ok(()),
            FieldSpec::PrimeField(p) => {
                if p < 2 || !primal_check::miller_rabin(p) {
                    Err(FieldError::NotPrime(p))
                } else if p >= 1 << 62 {
                    Err(FieldError::ModulusTooLarge(p))
                } else {
                    Ok(())
                }
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

impl std::str::FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "Q" || t == "QQ" {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t
            .strip_prefix("GF")
            .or_else(|| t.strip_prefix('F'))
            .ok_or_else(|| FieldError::Unrecognized(s.to_string()))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| FieldError::Unrecognized(s.to_string()))?;
        let spec = FieldSpec::PrimeField(p);
        spec.validate()?;
        Ok(spec)
    }
}

/// Arithmetic of a base field together with its elimination kernel.
pub trait Field: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    /// `None` when the denominator vanishes in this field.
    fn from_rational(&self, v: &BigRational) -> Option<Self::Elem>;
    /// Image in `F_p` of an element, used by multi-modular rank. `None` when
    /// not applicable (prime-field input, or a denominator divisible by `p`).
    fn reduce_mod(&self, a: &Self::Elem, p: u64) -> Option<u64>;
    /// Canonical text: `-3/4` over Q, the residue in `[0, p)` over F_p.
    fn format(&self, a: &Self::Elem) -> String;

    /// Row echelon form of the given rows. With `reduced` the result is the
    /// reduced row echelon form with unit pivots.
    fn echelon(&self, rows: Vec<SparseRow<Self::Elem>>, ncols: usize, reduced: bool) -> Echelon<Self::Elem>;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b).expect("division by zero"))
    }

    fn pow(&self, a: &Self::Elem, mut k: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }
}

/// The field of rational numbers, with arbitrary-precision elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn from_rational(&self, v: &BigRational) -> Option<BigRational> {
        Some(v.clone())
    }
    fn reduce_mod(&self, a: &BigRational, p: u64) -> Option<u64> {
        let pb = BigInt::from(p);
        let den = a.denom().mod_floor(&pb).to_u64()?;
        if den == 0 {
            return None;
        }
        let num = a.numer().mod_floor(&pb).to_u64()?;
        let fp = PrimeField::new_unchecked(p);
        Some(fp.mul(&num, &fp.inv(&den)?))
    }
    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn echelon(&self, rows: Vec<SparseRow<BigRational>>, ncols: usize, reduced: bool) -> Echelon<BigRational> {
        crate::exactlinalg::rational::echelon(rows, ncols, reduced)
    }
}

/// The prime field `F_p`, elements stored as residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        FieldSpec::PrimeField(p).validate()?;
        Ok(PrimeField { p })
    }

    /// Caller guarantees `p` is a prime below `2^62`.
    pub(crate) fn new_unchecked(p: u64) -> Self {
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub(crate) fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    #[inline]
    pub(crate) fn addmod(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn submod(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub(crate) fn invmod(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        // extended Euclid on i128 to stay clear of overflow
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(t0.rem_euclid(self.p as i128) as u64)
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeField(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.addmod(*a, *b)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.submod(*a, *b)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mulmod(*a, *b)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        self.invmod(*a)
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.p)).to_u64().expect("residue fits in u64")
    }
    fn from_rational(&self, v: &BigRational) -> Option<u64> {
        let den = self.from_bigint(v.denom());
        let num = self.from_bigint(v.numer());
        Some(self.mulmod(num, self.invmod(den)?))
    }
    fn reduce_mod(&self, _a: &u64, _p: u64) -> Option<u64> {
        None
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn echelon(&self, rows: Vec<SparseRow<u64>>, ncols: usize, reduced: bool) -> Echelon<u64> {
        crate::exactlinalg::modp::echelon(*self, rows, ncols, reduced)
    }
}

/// Integer binomial coefficient `C(n, k)` as a big integer.
pub fn binomial_big(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `C(n, k)` with a signed upper argument read as zero when out of range
/// (the convention used for Hilbert functions and line-bundle counts).
pub fn binomial_or_zero(n: i64, k: i64) -> u128 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub(crate) fn abs_cmp(a: &BigInt, b: &BigInt) -> std::cmp::Ordering {
    a.abs().cmp(&b.abs())
}
