//! Daily constraint sources for the known-objective environment.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::known_objective::KnownObjectiveEnv;
use crate::error::{Error, Result};
use crate::geometry::{enumerate_vertices, Edge, Halfspace};
use crate::linalg::Vector;
use crate::rational::{self, Rational};

/// How a day's constraint is drawn. All families are i.i.d. unless
/// `distinct_optima` is switched on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Grid normal; with probability `cut_percent` the offset is uniform
    /// strictly inside the polytope's extent along the normal, otherwise the
    /// constraint is slack.
    GridNormals,
    /// Grid normal; shaves a thin cap off the vertex extreme in that direction.
    VertexAnchored,
    /// Hyperplane through a random point of a random edge, with a normal
    /// that improves on the objective, so the constraint usually binds.
    EdgeBiased,
}

const RETRIES: usize = 1000;

pub struct ConstraintStream<'a> {
    env: &'a KnownObjectiveEnv,
    family: Family,
    rng: ChaCha8Rng,
    cut_percent: u32,
    binding_only: bool,
    distinct: bool,
    seen: BTreeSet<Vector>,
    vertices: Vec<Vector>,
    edges: Vec<Edge>,
}

impl<'a> ConstraintStream<'a> {
    pub fn new(env: &'a KnownObjectiveEnv, family: Family, seed: u64) -> Result<Self> {
        Ok(ConstraintStream {
            env,
            family,
            rng: ChaCha8Rng::seed_from_u64(seed),
            cut_percent: 75,
            binding_only: false,
            distinct: false,
            seen: BTreeSet::new(),
            vertices: enumerate_vertices(env.hidden())?,
            edges: env.hidden_edges()?,
        })
    }

    pub fn cut_percent(mut self, p: u32) -> Self {
        self.cut_percent = p.min(100);
        self
    }

    /// Only emit days whose optimum lies on the constraint's hyperplane.
    pub fn binding_only(mut self, on: bool) -> Self {
        self.binding_only = on;
        self
    }

    /// Never repeat an optimum already revealed by this stream.
    pub fn distinct_optima(mut self, on: bool) -> Self {
        self.distinct = on;
        self
    }

    fn grid_normal(&mut self) -> Vector {
        let bits = self.env.bits().min(4);
        let half = 1i64 << bits;
        loop {
            let v: Vec<Rational> = (0..self.env.dim())
                .map(|_| rational::ratio(self.rng.gen_range(-half..=half), half))
                .collect();
            let v = Vector::new(v);
            if !v.is_zero() {
                return v;
            }
        }
    }

    fn extent(&self, p: &Vector) -> (Rational, Rational) {
        let vals = self.vertices.iter().map(|v| p.dot(v));
        let lo = vals.clone().min().expect("nonempty polytope");
        let hi = vals.max().expect("nonempty polytope");
        (lo, hi)
    }

    fn draw(&mut self) -> Halfspace {
        let p = self.grid_normal();
        let offset = match self.family {
            Family::GridNormals => {
                let (lo, hi) = self.extent(&p);
                if self.rng.gen_range(0..100) < self.cut_percent {
                    let k = self.rng.gen_range(1..16);
                    &lo + (&hi - &lo) * rational::ratio(k, 16)
                } else {
                    hi
                }
            }
            Family::VertexAnchored => {
                let (lo, hi) = self.extent(&p);
                let k = self.rng.gen_range(1..=8);
                &hi - (&hi - &lo) * rational::ratio(k, 32)
            }
            Family::EdgeBiased => {
                let e = &self.edges[self.rng.gen_range(0..self.edges.len())];
                let k = self.rng.gen_range(1..16);
                let t = &e.lo + (&e.hi - &e.lo) * rational::ratio(k, 16);
                let q = e.space.point(&t);
                let mut p = p;
                if p.dot(self.env.c()).is_negative() {
                    p = p.neg();
                }
                let off = p.dot(&q);
                return Halfspace::new(p, off).expect("nonzero normal");
            }
        };
        Halfspace::new(p, offset).expect("nonzero normal")
    }

    /// The next accepted day and its revealed optimum.
    pub fn next_day(&mut self) -> Result<(Halfspace, Vector)> {
        for _ in 0..RETRIES {
            let h = self.draw();
            if self.family == Family::EdgeBiased && h.normal.dot(self.env.c()).is_zero() {
                continue;
            }
            let Ok(x) = self.env.step(&h) else {
                continue;
            };
            if self.binding_only && !h.is_tight(&x) {
                continue;
            }
            if self.distinct && !self.seen.insert(x.clone()) {
                continue;
            }
            return Ok((h, x));
        }
        Err(Error::Contract(format!("no acceptable day after {RETRIES} draws")))
    }

    /// `days` consecutive days.
    pub fn take_days(&mut self, days: usize) -> Result<Vec<(Halfspace, Vector)>> {
        (0..days).map(|_| self.next_day()).collect()
    }
}
