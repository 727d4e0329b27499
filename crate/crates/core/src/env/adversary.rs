//! The adaptive adversary that forces one mistake per bit of precision in
//! three dimensions, with objective `c = (0, 0, 1)`.
//!
//! `adversary_matrix` builds the final polytope exactly as printed plus
//! `x >= 0`. `replay_transcript` re-solves every day against it and names
//! the first day that does not reproduce.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Halfspace, Polytope};
use crate::learner::OnlineLearner;
use crate::linalg::Vector;
use crate::lp::solve_vertex_lp;
use crate::rational::{self, serde_rational, Rational};

/// ε of the construction, 1/100.
pub fn epsilon() -> Rational {
    rational::ratio(1, 100)
}

/// Closed interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "serde_rational")]
    pub lo: Rational,
    #[serde(with = "serde_rational")]
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        Interval { lo, hi }
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / rational::int(2)
    }

    pub fn len(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn lower_half(&self) -> Self {
        Interval::new(self.lo.clone(), self.mid())
    }

    pub fn upper_half(&self) -> Self {
        Interval::new(self.mid(), self.hi.clone())
    }
}

/// Output of NAC: the day's constraint and three points binding it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nac {
    pub constraint: Halfspace,
    pub r1: Vector,
    pub r2: Vector,
    pub r3: Vector,
}

/// New adversarial constraint for the current intervals.
pub fn nac(r1_range: &Interval, r2_range: &Interval) -> Result<Nac> {
    let eps = epsilon();
    let (m1, m2) = (r1_range.mid(), r2_range.mid());
    let one = Rational::one();
    let zero = Rational::zero();
    let r1 = Vector::new(vec![zero.clone(), one.clone(), m1]);
    let r2 = Vector::new(vec![one.clone(), m2.clone(), &one + &eps * &m2]);
    let r3 = Vector::new(vec![one.clone(), m2.clone(), zero.clone()]);
    let p = Vector::new(vec![&one - &m2, one.clone(), zero]);
    let constraint = Halfspace::new(p, one)?;
    for r in [&r1, &r2, &r3] {
        if !constraint.is_tight(r) {
            return Err(Error::Invariant {
                message: "NAC point does not bind its constraint".into(),
                state: format!("{r:?} against {constraint:?}"),
            });
        }
    }
    Ok(Nac { constraint, r1, r2, r3 })
}

/// Reveals whichever of `r1`, `r2` the learner did not pick and halves the
/// intervals.
pub fn ad2(
    r1_range: &Interval,
    r2_range: &Interval,
    r1: &Vector,
    r2: &Vector,
    prediction: &Vector,
) -> (Vector, Interval, Interval) {
    let (x, r2_next) = if prediction == r2 {
        (r1.clone(), r2_range.lower_half())
    } else {
        (r2.clone(), r2_range.upper_half())
    };
    (x, r1_range.upper_half(), r2_next)
}

/// One adversary day, in the first three coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryDay {
    pub constraint: Halfspace,
    pub r1: Vector,
    pub r2: Vector,
    pub prediction: Vector,
    pub revealed: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryState {
    pub r1: Interval,
    pub r2: Interval,
    pub transcript: Vec<AdversaryDay>,
}

impl Default for AdversaryState {
    fn default() -> Self {
        AdversaryState {
            r1: Interval::new(rational::int(0), rational::int(1)),
            r2: Interval::new(rational::int(1), rational::int(2)),
            transcript: Vec::new(),
        }
    }
}

/// The four printed rows with `f1`, `f2` the interval midpoints, plus
/// `x >= 0` in every coordinate (`dim >= 3`; extra coordinates are dummies).
pub fn adversary_matrix(r1_range: &Interval, r2_range: &Interval, dim: usize) -> Result<Polytope> {
    if dim < 3 {
        return Err(Error::Config(format!("the adversary needs d >= 3, got {dim}")));
    }
    let eps = epsilon();
    let (f1, f2) = (r1_range.mid(), r2_range.mid());
    let one = Rational::one();
    let zero = Rational::zero();
    let pad = |v: [Rational; 3]| {
        let mut c: Vec<Rational> = v.into();
        c.resize(dim, Rational::zero());
        Vector::new(c)
    };
    let mut hs = vec![
        Halfspace::new(pad([-one.clone(), zero.clone(), zero.clone()]), zero.clone())?,
        Halfspace::new(pad([one.clone(), zero.clone(), zero.clone()]), one.clone())?,
        Halfspace::new(pad([&f1 - &one - &eps, -eps.clone(), one.clone()]), &f1 - &eps)?,
        Halfspace::new(pad([-((&f2 - &one) * &f1), f1.clone(), zero.clone()]), f1.clone())?,
    ];
    for j in 1..dim {
        hs.push(Halfspace::new(Vector::unit(dim, j).neg(), zero.clone())?);
    }
    Polytope::new(dim, hs)
}

/// Objective of the padded construction: `(0, 0, 1, -1, ..., -1)`.
pub fn adversary_objective(dim: usize) -> Vector {
    let mut c = vec![rational::int(0), rational::int(0), rational::int(1)];
    c.resize(dim, rational::int(-1));
    Vector::new(c)
}

fn pad_point(x: &Vector, dim: usize) -> Vector {
    let mut c = x.coords().to_vec();
    c.resize(dim, Rational::zero());
    Vector::new(c)
}

fn pad_halfspace(h: &Halfspace, dim: usize) -> Halfspace {
    Halfspace::new(pad_point(&h.normal, dim), h.offset.clone()).expect("nonzero normal")
}

/// Re-solves every day over `polytope ∩ constraint` and checks the revealed
/// point is the unique optimum.
pub fn replay_transcript(polytope: &Polytope, transcript: &[AdversaryDay]) -> Result<()> {
    let dim = polytope.dim();
    let c = adversary_objective(dim);
    for (t, day) in transcript.iter().enumerate() {
        let fail = |message: String| Error::Construction { day: t + 1, message };
        let p = polytope.with(&pad_halfspace(&day.constraint, dim))?;
        let sol = solve_vertex_lp(&p, &c).map_err(|e| fail(format!("day LP failed: {e}")))?;
        let want = pad_point(&day.revealed, dim);
        if sol.point != want {
            return Err(fail(format!(
                "optimum is {} but the adversary revealed {}",
                sol.point.to_semicolon_string(),
                want.to_semicolon_string()
            )));
        }
        if !sol.unique {
            return Err(fail("revealed point is one of several optima".into()));
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct LowerBoundRun {
    pub state: AdversaryState,
    pub mistakes: usize,
    pub polytope: Polytope,
    /// Outcome of replaying the transcript against `polytope`.
    pub replay: Result<()>,
}

/// `bits` adversary days in dimension 3.
pub fn run_lower_bound(learner: &mut dyn OnlineLearner, bits: u32) -> Result<LowerBoundRun> {
    run_lower_bound_padded(learner, bits, 3)
}

/// The same construction with `dim - 3` dummy coordinates held at zero by
/// `x >= 0` and a `-1` objective weight.
pub fn run_lower_bound_padded(learner: &mut dyn OnlineLearner, bits: u32, dim: usize) -> Result<LowerBoundRun> {
    if dim < 3 {
        return Err(Error::Config(format!("the adversary needs d >= 3, got {dim}")));
    }
    let mut state = AdversaryState::default();
    let mut mistakes = 0;
    for _ in 0..bits {
        let day = nac(&state.r1, &state.r2)?;
        let shown = pad_halfspace(&day.constraint, dim);
        let prediction = learner.predict(&shown)?;
        let full_r2 = pad_point(&day.r2, dim);
        // The learner's point is compared in the full space; a dummy
        // coordinate off zero can never equal r2.
        let hit_r2 = prediction.point == full_r2;
        let probe = if hit_r2 { day.r2.clone() } else { Vector::zeros(3) };
        let (revealed, r1_next, r2_next) = ad2(&state.r1, &state.r2, &day.r1, &day.r2, &probe);
        let revealed_full = pad_point(&revealed, dim);
        if revealed_full != prediction.point {
            mistakes += 1;
        }
        learner.observe(&shown, &prediction, &revealed_full)?;
        let first3 = Vector::new(prediction.point.coords().iter().take(3).cloned().collect());
        state.transcript.push(AdversaryDay {
            constraint: day.constraint,
            r1: day.r1,
            r2: day.r2,
            prediction: first3,
            revealed,
        });
        state.r1 = r1_next;
        state.r2 = r2_next;
    }
    let polytope = adversary_matrix(&state.r1, &state.r2, dim)?;
    let replay = replay_transcript(&polytope, &state.transcript);
    Ok(LowerBoundRun { state, mistakes, polytope, replay })
}
