//! FCP: randomized halving over the finite class of polytopes whose
//! constraint entries are multiples of `2^-N` in `[-1, 1]`.
//!
//! Hypotheses are never materialized. Index `h` is read as `m` digits in
//! base `R`, each naming one row `(a, b)` of the row alphabet, which in turn
//! is `d + 1` digits over the entry grid. Consistency with a revealed optimum
//! is decided by optimality conditions at that point, so a day's filter only
//! needs per-row facts plus one small cone test per distinct active set.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geometry::{vertex_candidates, Halfspace, Polytope};
use crate::learner::{sentinel, OnlineLearner, Prediction, UpdateReport};
use crate::linalg::Vector;
use crate::lp::{maximize_free, FreeOutcome, Relation, StandardLp};
use crate::rational::{self, Rational};

pub const DEFAULT_CLASS_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisClass {
    pub d: usize,
    pub m: usize,
    pub bits: u32,
    entries: Vec<Rational>,
    rows: Vec<(Vector, Rational)>,
    size: u64,
}

/// Builds the class of `m`-row polytopes in dimension `d` at `bits` bits.
/// Fails with the exact class size when it exceeds `cap`.
pub fn enumerate_class(d: usize, m: usize, bits: u32, cap: u64) -> Result<HypothesisClass> {
    if d == 0 || m == 0 {
        return Err(Error::Config("d and m must be positive".into()));
    }
    let per_entry = (1u64 << (bits + 1)) + 1;
    let size = per_entry
        .checked_pow(((d + 1) * m) as u32)
        .filter(|&s| s <= cap)
        .ok_or_else(|| {
            Error::Config(format!(
                "hypothesis class has {per_entry}^{} members, above the cap of {cap}",
                (d + 1) * m
            ))
        })?;
    let half = 1i64 << bits;
    let entries: Vec<Rational> = (-half..=half).map(|k| rational::ratio(k, half)).collect();
    let nrows = per_entry.pow((d + 1) as u32) as usize;
    let rows = (0..nrows)
        .map(|mut r| {
            let mut digits = Vec::with_capacity(d + 1);
            for _ in 0..=d {
                digits.push(entries[r % entries.len()].clone());
                r /= entries.len();
            }
            let b = digits.pop().expect("d + 1 digits");
            (Vector::new(digits), b)
        })
        .collect();
    Ok(HypothesisClass { d, m, bits, entries, rows, size })
}

impl HypothesisClass {
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Row ids of hypothesis `h`.
    pub fn row_ids(&self, mut h: u64) -> Vec<usize> {
        let r = self.rows.len() as u64;
        (0..self.m)
            .map(|_| {
                let id = (h % r) as usize;
                h /= r;
                id
            })
            .collect()
    }

    pub fn row(&self, id: usize) -> (&Vector, &Rational) {
        let (a, b) = &self.rows[id];
        (a, b)
    }

    /// Index of the hypothesis with these rows, if every entry is on the grid.
    pub fn index_of(&self, rows: &[(Vector, Rational)]) -> Option<u64> {
        if rows.len() != self.m {
            return None;
        }
        let base = self.entries.len() as u64;
        let mut h = 0u64;
        for (a, b) in rows.iter().rev() {
            if a.dim() != self.d {
                return None;
            }
            let mut id = 0u64;
            for x in a.iter().chain(core::iter::once(b)).rev() {
                let k = self.entries.iter().position(|e| e == x)? as u64;
                id = id * base + k;
            }
            h = h * self.rows.len() as u64 + id;
        }
        Some(h)
    }

    pub fn rows_of(&self, h: u64) -> Vec<(Vector, Rational)> {
        self.row_ids(h).into_iter().map(|id| self.rows[id].clone()).collect()
    }

    /// The hypothesis as a polytope, or `None` when a zero row is violated
    /// everywhere. Zero rows that hold everywhere are dropped.
    pub fn polytope(&self, h: u64) -> Option<Polytope> {
        rows_to_polytope(self.d, &self.rows_of(h))
    }
}

fn rows_to_polytope(d: usize, rows: &[(Vector, Rational)]) -> Option<Polytope> {
    let mut hs = Vec::new();
    for (a, b) in rows {
        if a.is_zero() {
            if *b < Rational::zero() {
                return None;
            }
            continue;
        }
        hs.push(Halfspace::new(a.clone(), b.clone()).expect("nonzero normal"));
    }
    Some(Polytope::new(d, hs).expect("dimensions checked"))
}

/// `argmax c · x` over `rows ∩ extra`: the lexicographically smallest
/// optimal vertex, with a flag telling whether the optimum is unique.
/// `None` when the problem is infeasible, unbounded or has no vertex.
pub fn optimum_over(rows: &[(Vector, Rational)], extra: &Halfspace, c: &Vector) -> Option<(Vector, bool)> {
    let d = c.dim();
    let p = rows_to_polytope(d, rows)?.with(extra).ok()?;
    let normals = p.normals();
    let offsets: Vec<Rational> = p.halfspaces().iter().map(|h| h.offset.clone()).collect();
    let FreeOutcome::Optimal { value, .. } = maximize_free(&normals, &offsets, c) else {
        return None;
    };
    let x = vertex_candidates(&p)
        .into_iter()
        .map(|v| v.point)
        .filter(|x| c.dot(x) == value)
        .min()?;
    let active: Vec<Vector> = p.binding(&x).into_iter().map(|i| normals[i].clone()).collect();
    let unique = unique_optimum(c, &active);
    Some((x, unique))
}

/// `c` is a nonnegative combination of `normals`.
pub fn in_cone(c: &Vector, normals: &[Vector]) -> bool {
    if normals.is_empty() {
        return c.is_zero();
    }
    let mut lp = StandardLp::new(normals.len());
    for j in 0..c.dim() {
        lp.push(normals.iter().map(|n| n[j].clone()).collect(), Relation::Eq, c[j].clone());
    }
    lp.maximize().is_feasible()
}

/// A point with these active normals is the only maximizer of `c`: no
/// nonzero direction keeps every active row and does not lose objective.
pub fn unique_optimum(c: &Vector, normals: &[Vector]) -> bool {
    if !in_cone(c, normals) {
        return false;
    }
    let d = c.dim();
    let mut rows: Vec<Vector> = normals.to_vec();
    let mut rhs = vec![Rational::zero(); normals.len()];
    rows.push(c.neg());
    rhs.push(Rational::zero());
    for j in 0..d {
        rows.push(Vector::unit(d, j));
        rows.push(Vector::unit(d, j).neg());
        rhs.push(Rational::one());
        rhs.push(Rational::one());
    }
    (0..d).all(|j| {
        [Vector::unit(d, j), Vector::unit(d, j).neg()].iter().all(|dir| {
            matches!(maximize_free(&rows, &rhs, dir), FreeOutcome::Optimal { value, .. } if value.is_zero())
        })
    })
}

/// What counts as agreeing with a revealed optimum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConsistencyRule {
    /// The revealed point is among the maximizers.
    #[default]
    OptimalFace,
    /// The revealed point is the only maximizer.
    UniqueOptimum,
}

/// Per-day facts shared by every hypothesis.
struct DayMemo<'a> {
    c: &'a Vector,
    rule: ConsistencyRule,
    feasible: Vec<bool>,
    tight: Vec<bool>,
    day_normal: Option<Vector>,
    cones: BTreeMap<Vec<usize>, bool>,
}

impl DayMemo<'_> {
    fn consistent(&mut self, class: &HypothesisClass, ids: &[usize]) -> bool {
        if ids.iter().any(|&i| !self.feasible[i]) {
            return false;
        }
        let mut active: Vec<usize> = ids.iter().copied().filter(|&i| self.tight[i]).collect();
        active.sort_unstable();
        active.dedup();
        if let Some(&ok) = self.cones.get(&active) {
            return ok;
        }
        let mut normals: Vec<Vector> = active.iter().map(|&i| class.rows[i].0.clone()).collect();
        normals.extend(self.day_normal.clone());
        let ok = match self.rule {
            ConsistencyRule::OptimalFace => in_cone(self.c, &normals),
            ConsistencyRule::UniqueOptimum => unique_optimum(self.c, &normals),
        };
        self.cones.insert(active, ok);
        ok
    }
}

#[derive(Clone, Debug)]
pub struct Fcp {
    class: HypothesisClass,
    c: Vector,
    consistent: Vec<u64>,
    rng: ChaCha8Rng,
    rule: ConsistencyRule,
    sampled: Option<u64>,
}

impl Fcp {
    pub fn new(class: HypothesisClass, c: Vector, seed: u64) -> Result<Self> {
        check_dim(class.d, c.dim())?;
        let consistent = (0..class.size()).collect();
        Ok(Fcp {
            class,
            c,
            consistent,
            rng: ChaCha8Rng::seed_from_u64(seed),
            rule: ConsistencyRule::default(),
            sampled: None,
        })
    }

    pub fn with_rule(mut self, rule: ConsistencyRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn class(&self) -> &HypothesisClass {
        &self.class
    }

    pub fn consistent(&self) -> &[u64] {
        &self.consistent
    }

    /// The hypothesis behind the latest prediction.
    pub fn sampled(&self) -> Option<u64> {
        self.sampled
    }

    /// Answer hypothesis `h` gives for a day.
    pub fn hypothesis_prediction(&self, h: u64, constraint: &Halfspace) -> Vector {
        match optimum_over(&self.class.rows_of(h), constraint, &self.c) {
            Some((x, _)) => x,
            None => sentinel(self.c.dim(), []),
        }
    }

    /// Keeps the hypotheses that agree with `observed` being optimal under
    /// `constraint`. Returns how many were removed.
    pub fn filter(&mut self, constraint: &Halfspace, observed: &Vector) -> Result<usize> {
        check_dim(self.c.dim(), observed.dim())?;
        let before = self.consistent.len();
        if !constraint.contains(observed) {
            self.consistent.clear();
            return Ok(before);
        }
        let (feasible, tight) = self
            .class
            .rows
            .iter()
            .map(|(a, b)| {
                let s = b - a.dot(observed);
                (s >= Rational::zero(), s.is_zero() && !a.is_zero())
            })
            .unzip();
        let mut memo = DayMemo {
            c: &self.c,
            rule: self.rule,
            feasible,
            tight,
            day_normal: constraint.is_tight(observed).then(|| constraint.normal.clone()),
            cones: BTreeMap::new(),
        };
        let class = &self.class;
        self.consistent.retain(|&h| memo.consistent(class, &class.row_ids(h)));
        Ok(before - self.consistent.len())
    }
}

impl OnlineLearner for Fcp {
    fn name(&self) -> &str {
        "fcp"
    }

    fn predict(&mut self, constraint: &Halfspace) -> Result<Prediction> {
        check_dim(self.c.dim(), constraint.dim())?;
        if self.consistent.is_empty() {
            return Err(Error::Invariant {
                message: "no hypothesis is consistent with the revealed optima".into(),
                state: format!("class of {} hypotheses", self.class.size()),
            });
        }
        let h = self.consistent[self.rng.gen_range(0..self.consistent.len())];
        self.sampled = Some(h);
        Ok(Prediction::new(self.hypothesis_prediction(h, constraint), "sample"))
    }

    /// Filters every day, not only on mistakes.
    fn observe(
        &mut self,
        constraint: &Halfspace,
        _: &Prediction,
        observed: &Vector,
    ) -> Result<Option<UpdateReport>> {
        let removed = self.filter(constraint, observed)?;
        let mut report = UpdateReport::rule("filter");
        report.progress = Some((
            Rational::from_integer((self.consistent.len() + removed).into()),
            Rational::from_integer(self.consistent.len().into()),
        ));
        Ok(Some(report))
    }
}

/// The day's program over these rows has a finite optimum.
pub fn bounded_optimum(rows: &[(Vector, Rational)], extra: &Halfspace, c: &Vector) -> bool {
    let Some(p) = rows_to_polytope(c.dim(), rows) else {
        return false;
    };
    let Ok(p) = p.with(extra) else {
        return false;
    };
    let offsets: Vec<Rational> = p.halfspaces().iter().map(|h| h.offset.clone()).collect();
    matches!(maximize_free(&p.normals(), &offsets, c), FreeOutcome::Optimal { .. })
}
