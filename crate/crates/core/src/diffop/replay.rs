//! Randomized checks that an operator really acts on `R`: it must send
//! `g·f_j` into the ideal and be constant on cosets `h + g·f_j`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::field::Field;
use crate::polyring::{homog_basis, HomogPoly, RingSpec};

use super::weyl::{apply_op, commutator_with_var, DiffOperator};

/// Largest degree of the random multipliers.
pub const REPLAY_MAX_DEGREE: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayOutcome {
    pub samples: usize,
    pub checks: usize,
    /// Text of the first product that left the ideal, if any.
    pub failure: Option<String>,
}

impl ReplayOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Random homogeneous polynomial of degree `d` with small integer coefficients.
pub fn random_homog<F: Field>(spec: &RingSpec<F>, d: u32, rng: &mut impl Rng) -> HomogPoly<F> {
    let field = spec.field();
    let terms = homog_basis(spec.nvars(), d)
        .into_iter()
        .map(|m| (m, field.from_i64(rng.random_range(-5..=5))))
        .collect::<Vec<_>>();
    HomogPoly::from_terms(field.clone(), spec.nvars(), terms)
}

/// Check `NF(δ(g·f_j)) = 0` for `samples` random `g` of degree `<= 4` and
/// every relation, plus `NF(δ(h + g·f_j)) = NF(δ(h))` for random `h`.
pub fn replay_ideal_preservation<F: Field>(spec: &RingSpec<F>, op: &DiffOperator<F>, samples: usize, seed: u64) -> ReplayOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = 0;
    for _ in 0..samples {
        let d = rng.random_range(0..=REPLAY_MAX_DEGREE);
        let g = random_homog(spec, d, &mut rng);
        for f in spec.relations() {
            let gf = g.mul(f);
            let image = apply_op(op, &gf);
            checks += 1;
            if !spec.normal_form(&image).is_zero() {
                return ReplayOutcome { samples, checks, failure: Some(spec.display(&gf)) };
            }
            // well defined on cosets: h and h + g f have the same image in R
            let dh = gf.degree().unwrap_or(0);
            let h = random_homog(spec, dh, &mut rng);
            let lhs = spec.normal_form(&apply_op(op, &h.add(&gf)));
            let rhs = spec.normal_form(&apply_op(op, &h));
            checks += 1;
            if lhs != rhs {
                return ReplayOutcome { samples, checks, failure: Some(spec.display(&h.add(&gf))) };
            }
        }
    }
    ReplayOutcome { samples, checks, failure: None }
}

/// Every `[δ, x_i]` has order at most `order(δ) - 1`.
pub fn commutators_lower_order<F: Field>(op: &DiffOperator<F>) -> bool {
    let m = op.order();
    (0..op.nvars()).all(|i| {
        let c = commutator_with_var(op, i);
        c.is_zero() || c.order() + 1 <= m
    })
}
