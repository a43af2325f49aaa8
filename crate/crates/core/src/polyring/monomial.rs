use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::MAX_VARS;

/// Exponent vector `x^a` in at most [`MAX_VARS`] variables.
///
/// Ordered by graded reverse lexicographic order: higher total degree first,
/// ties broken by the last differing exponent (smaller wins).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    n: u8,
    exps: [u16; MAX_VARS],
}

impl Monomial {
    /// Panics if `exps` has more than [`MAX_VARS`] entries or an exponent
    /// exceeds `u16::MAX`.
    pub fn new(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "at most {MAX_VARS} variables");
        let mut e = [0u16; MAX_VARS];
        for (slot, &x) in e.iter_mut().zip(exps) {
            *slot = u16::try_from(x).expect("exponent out of range");
        }
        Monomial { n: exps.len() as u8, exps: e }
    }

    pub fn one(n: usize) -> Self {
        assert!(n <= MAX_VARS, "at most {MAX_VARS} variables");
        Monomial { n: n as u8, exps: [0; MAX_VARS] }
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut m = Self::one(n);
        assert!(i < n, "variable index out of range");
        m.exps[i] = 1;
        m
    }

    pub fn nvars(&self) -> usize {
        self.n as usize
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exps(&self) -> Vec<u32> {
        self.exps[..self.n as usize].iter().map(|&x| x as u32).collect()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&x| x as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.n, other.n);
        let mut out = *self;
        for i in 0..MAX_VARS {
            out.exps[i] = self.exps[i].checked_add(other.exps[i]).expect("exponent overflow");
        }
        out
    }

    pub fn mul_var(&self, i: usize) -> Monomial {
        let mut out = *self;
        out.exps[i] += 1;
        out
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exps[i] <= other.exps[i])
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = *self;
        for i in 0..MAX_VARS {
            out.exps[i] = self.exps[i].checked_sub(other.exps[i])?;
        }
        Some(out)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for i in 0..MAX_VARS {
            out.exps[i] = self.exps[i].max(other.exps[i]);
        }
        out
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exps[i] == 0 || other.exps[i] == 0)
    }

    /// Render with the given variable names, e.g. `x^2*y`.
    pub fn display_with(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for i in 0..self.nvars() {
            match self.exps[i] {
                0 => {}
                1 => parts.push(names[i].clone()),
                k => parts.push(format!("{}^{}", names[i], k)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for i in (0..MAX_VARS).rev() {
            if self.exps[i] != other.exps[i] {
                return other.exps[i].cmp(&self.exps[i]);
            }
        }
        self.n.cmp(&other.n)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.exps[..self.n as usize])
    }
}

/// All monomials of degree `d` in `n` variables, in increasing monomial
/// order. There are `C(d + n - 1, n - 1)` of them.
pub fn homog_basis(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    let mut cur = vec![0u32; n];
    fill(&mut cur, 0, d, &mut out);
    out.sort();
    out
}

fn fill(cur: &mut Vec<u32>, i: usize, left: u32, out: &mut Vec<Monomial>) {
    if i + 1 == cur.len() {
        cur[i] = left;
        out.push(Monomial::new(cur));
        return;
    }
    for k in 0..=left {
        cur[i] = k;
        fill(cur, i + 1, left - k, out);
    }
}

/// All monomials of degree at most `d`, grouped by degree ascending.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Monomial> {
    (0..=d).flat_map(|k| homog_basis(n, k)).collect()
}
