//! Ground-truth environments. Learners only ever see a day's public input
//! and its revealed optimum; the `hidden*` accessors are for scoring.

pub mod adversary;
mod finite_class;
mod generate;
mod known_constraints;
mod known_objective;
mod streams;

pub use adversary::{
    ad2, adversary_matrix, adversary_objective, epsilon, nac, replay_transcript, run_lower_bound,
    run_lower_bound_padded, AdversaryDay, AdversaryState, Interval, LowerBoundRun, Nac,
};
pub use finite_class::FiniteClassEnv;
pub use generate::{generate_instance, polytope_pool, GENERATOR_ATTEMPTS};
pub use known_constraints::{sample_objective, KnownConstraintsEnv};
pub use known_objective::{Instance, KnownObjectiveEnv};
pub use streams::{ConstraintStream, Family};

use rand_chacha::ChaCha8Rng;

use crate::rational::{self, Rational};

/// Uniform multiple of `2^-bits` in `[lo, hi]` (both on that grid).
pub(crate) fn grid_uniform(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational, bits: u32) -> Rational {
    use num_traits::ToPrimitive;
    use rand::Rng;
    let scale = Rational::from_integer(rational::pow2(bits));
    let a = (lo * &scale).ceil().to_integer().to_i64().expect("small grid");
    let b = (hi * &scale).floor().to_integer().to_i64().expect("small grid");
    let k = rng.gen_range(a..=b);
    rational::ratio(k, 1) / scale
}
