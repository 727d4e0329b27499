//! Known constraints, hidden objective matrix.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grid_uniform;
use crate::ellipsoid::{KnownConstraintsDay, ObjectiveMatrix};
use crate::error::{Error, Result};
use crate::geometry::Polytope;
use crate::linalg::Vector;
use crate::lp::solve_vertex_lp;
use crate::rational::{self, Rational};

const RETRIES: usize = 1000;

/// Random `V` with entries on the `2^-bits` grid in `[-1, 1]` and
/// `‖V‖_F <= 1`, by rejection. After `RETRIES` rejections the last draw is
/// halved until it fits, which leaves the grid. Never all zero.
pub fn sample_objective(n: usize, d: usize, bits: u32, rng: &mut ChaCha8Rng) -> Result<ObjectiveMatrix> {
    if n == 0 || d == 0 {
        return Err(Error::Config(format!("objective matrix needs n, d >= 1 (got n={n}, d={d})")));
    }
    let one = Rational::one();
    let mut draw = || -> Vec<Vector> {
        (0..n)
            .map(|_| Vector::new((0..d).map(|_| grid_uniform(rng, &-one.clone(), &one, bits)).collect()))
            .collect()
    };
    let norm = |cols: &[Vector]| cols.iter().map(|c| c.norm_sq()).sum::<Rational>();
    let mut cols = draw();
    for _ in 0..RETRIES {
        if cols.iter().any(|c| !c.is_zero()) && norm(&cols) <= one {
            return ObjectiveMatrix::new(cols);
        }
        cols = draw();
    }
    while cols.iter().all(|c| c.is_zero()) {
        cols = draw();
    }
    let half = rational::ratio(1, 2);
    while norm(&cols) > one {
        cols = cols.iter().map(|c| c.scale(&half)).collect();
    }
    ObjectiveMatrix::new(cols)
}

/// Each day picks a polytope from the pool and a uniform nonempty subset of
/// columns. Days where the summed objective has tied optima are redrawn.
#[derive(Clone, Debug)]
pub struct KnownConstraintsEnv {
    v: ObjectiveMatrix,
    pool: Vec<Polytope>,
    rng: ChaCha8Rng,
}

impl KnownConstraintsEnv {
    pub fn new(v: ObjectiveMatrix, pool: Vec<Polytope>, seed: u64) -> Result<Self> {
        if pool.is_empty() {
            return Err(Error::Config("polytope pool is empty".into()));
        }
        for p in &pool {
            if p.dim() != v.d() {
                return Err(Error::DimensionMismatch { expected: v.d(), found: p.dim() });
            }
        }
        Ok(KnownConstraintsEnv { v, pool, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    pub fn hidden(&self) -> &ObjectiveMatrix {
        &self.v
    }

    /// The optimum for `day` under the hidden matrix, or a contract error on ties.
    pub fn answer(&self, day: &KnownConstraintsDay) -> Result<Vector> {
        let c = self.v.effective(&day.subset);
        let sol = solve_vertex_lp(&day.polytope, &c)?;
        if !sol.unique {
            return Err(Error::Contract("tied optimum for this day".into()));
        }
        Ok(sol.point)
    }

    pub fn sample_day(&mut self) -> Result<(KnownConstraintsDay, Vector)> {
        let n = self.v.n();
        for _ in 0..RETRIES {
            let polytope = self.pool.choose(&mut self.rng).expect("nonempty pool").clone();
            let subset: BTreeSet<usize> = loop {
                let s: BTreeSet<usize> = (0..n).filter(|_| self.rng.gen_bool(0.5)).collect();
                if !s.is_empty() {
                    break s;
                }
            };
            let day = KnownConstraintsDay { polytope, subset };
            if let Ok(x) = self.answer(&day) {
                return Ok((day, x));
            }
        }
        Err(Error::Config(format!("every one of {RETRIES} sampled days had a tied optimum")))
    }
}
