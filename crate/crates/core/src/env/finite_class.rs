//! Ground truth drawn from the finite class FCP searches.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::fcp::optimum_over;
use crate::geometry::{vertex_candidates, Halfspace, Polytope};
use crate::linalg::Vector;
use crate::rational::{self, Rational};

const RETRIES: usize = 1000;

/// Hidden rows `a·x <= b` (possibly unbounded) and a known objective. Days
/// are grid halfspaces passing near a vertex of the truth; days with an
/// unbounded or tied optimum are redrawn.
#[derive(Clone, Debug)]
pub struct FiniteClassEnv {
    rows: Vec<(Vector, Rational)>,
    c: Vector,
    bits: u32,
    anchors: Vec<Vector>,
    rng: ChaCha8Rng,
}

impl FiniteClassEnv {
    pub fn new(rows: Vec<(Vector, Rational)>, c: Vector, bits: u32, seed: u64) -> Result<Self> {
        for (a, _) in &rows {
            check_dim(c.dim(), a.dim())?;
        }
        let hs: Vec<Halfspace> = rows
            .iter()
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, b)| Halfspace::new(a.clone(), b.clone()))
            .collect::<Result<_>>()?;
        let p = Polytope::new(c.dim(), hs)?;
        let mut anchors: Vec<Vector> = vertex_candidates(&p).into_iter().map(|v| v.point).collect();
        if anchors.is_empty() {
            anchors.push(Vector::zeros(c.dim()));
        }
        Ok(FiniteClassEnv { rows, c, bits, anchors, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    pub fn rows(&self) -> &[(Vector, Rational)] {
        &self.rows
    }

    pub fn c(&self) -> &Vector {
        &self.c
    }

    /// Unique optimum over the truth and `constraint`.
    pub fn step(&self, constraint: &Halfspace) -> Result<Vector> {
        match optimum_over(&self.rows, constraint, &self.c) {
            Some((x, true)) => Ok(x),
            Some((_, false)) => Err(Error::Contract("tied optimum for this day".into())),
            None => Err(Error::Contract("no finite optimum for this day".into())),
        }
    }

    pub fn next_day(&mut self) -> Result<(Halfspace, Vector)> {
        let half = 1i64 << self.bits;
        for _ in 0..RETRIES {
            let a = Vector::new((0..self.c.dim()).map(|_| rational::ratio(self.rng.gen_range(-half..=half), half)).collect());
            if a.is_zero() {
                continue;
            }
            let anchor = &self.anchors[self.rng.gen_range(0..self.anchors.len())];
            let b = a.dot(anchor) + rational::ratio(self.rng.gen_range(-2..=2), half);
            let h = Halfspace::new(a, b)?;
            if let Ok(x) = self.step(&h) {
                return Ok((h, x));
            }
        }
        Err(Error::Contract(format!("no day with a unique optimum after {RETRIES} draws")))
    }
}
