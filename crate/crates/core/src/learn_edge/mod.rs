//! Learning the edges of a hidden polytope from revealed optima when the
//! objective is known.
//!
//! The learner keeps the mispredicted optima `X`, the edge-spaces certified by
//! three collinear points of `X`, per-edge feasible and infeasible intervals,
//! and the unconstrained optimum `x*` once seen. Predictions follow four
//! rules tried in order (`P1`..`P4`); each mistake triggers exactly one of
//! four updates (`U1`..`U4`). [`low_dim`] has the simpler learners for
//! `d <= 2`.

mod knowledge;
pub mod low_dim;

pub use knowledge::{Boundary, EdgeKnowledge, Side};
pub use low_dim::{learn_low_dim, LowDimLearner};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geometry::{
    check_collinear, clip_line, Edge, Halfspace, Hyperplane, LineHit, Polytope,
};
use crate::learner::{sentinel, OnlineLearner, Prediction, UpdateReport};
use crate::linalg::Vector;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnEdgeConfig {
    /// Vertices of the hidden polytope are multiples of `2^-bits`.
    pub bits: u32,
    /// The hidden polytope lies in `‖x‖∞ <= box_radius`.
    #[serde(with = "rational::serde_rational")]
    pub box_radius: Rational,
}

impl LearnEdgeConfig {
    pub fn new(bits: u32) -> Self {
        LearnEdgeConfig { bits, box_radius: rational::int(1) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnEdge {
    pub config: LearnEdgeConfig,
    pub c: Vector,
    /// Mispredicted optima.
    pub x: BTreeSet<Vector>,
    /// Learned edge-spaces in the order they were certified.
    pub edges: Vec<EdgeKnowledge>,
    pub x_star: Option<Vector>,
}

/// A point of `Cand` and how it got there.
#[derive(Clone, Debug, Default)]
struct CandInfo {
    /// `(edge index, parameter)` for each non-contained learned edge through it.
    on_edges: Vec<(usize, Rational)>,
    from_x: bool,
}

/// Upper bound on LearnEdge mistakes for a polytope with `edges` edges:
/// `1 + 3E + 2E(N + ceil(log2(2 sqrt d)) + 2)`.
pub fn mistake_bound(edges: usize, bits: u32, d: usize) -> u64 {
    let e = edges as u64;
    1 + 3 * e + 2 * e * (bits as u64 + ceil_log2_two_sqrt(d) + 2)
}

/// `ceil(log2(2 sqrt d))`: the least `k` with `4^(k-1) >= d`.
pub fn ceil_log2_two_sqrt(d: usize) -> u64 {
    let mut k = 0u64;
    // 2^k >= 2 sqrt(d)  <=>  4^k >= 4d
    while 4u128.pow(k as u32) < 4 * d as u128 {
        k += 1;
    }
    k
}

impl LearnEdge {
    pub fn new(c: Vector, config: LearnEdgeConfig) -> Self {
        LearnEdge { config, c, x: BTreeSet::new(), edges: Vec::new(), x_star: None }
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    fn candidates(&self, hp: &Hyperplane) -> BTreeMap<Vector, CandInfo> {
        let mut contained = Vec::new();
        let mut cand: BTreeMap<Vector, CandInfo> = BTreeMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            match e.space.intersect(hp) {
                LineHit::Contained => contained.push(i),
                LineHit::Miss => {}
                LineHit::At(t) => {
                    cand.entry(e.space.point(&t)).or_default().on_edges.push((i, t));
                }
            }
        }
        for x in self.x.iter().filter(|x| hp.contains(x)) {
            if contained.iter().any(|&i| self.edges[i].space.contains(x)) {
                continue;
            }
            cand.entry(x.clone()).or_default().from_x = true;
        }
        cand
    }

    /// `Cand`: intersections of non-contained learned edge-spaces with the
    /// hyperplane, plus points of `X` on it, sorted.
    pub fn candidate_set(&self, hp: &Hyperplane) -> Vec<Vector> {
        self.candidates(hp).into_keys().collect()
    }

    /// `Ext`: the part of `Cand` inside some edge's midpoint window, plus the
    /// points of `X` on the hyperplane.
    pub fn extended_feasible(&self, hp: &Hyperplane) -> Vec<Vector> {
        let cand = self.candidates(hp);
        self.ext_of(&cand).into_iter().cloned().collect()
    }

    fn ext_of<'a>(&self, cand: &'a BTreeMap<Vector, CandInfo>) -> Vec<&'a Vector> {
        cand.iter()
            .filter(|(_, info)| {
                info.from_x || info.on_edges.iter().any(|(i, t)| self.edges[*i].in_ext(t))
            })
            .map(|(p, _)| p)
            .collect()
    }

    /// True when some learned edge through `x` marks it infeasible.
    fn known_infeasible(&self, x: &Vector) -> bool {
        self.edges
            .iter()
            .any(|e| matches!(e.space.param_of(x), Some(t) if e.in_infeasible(&t)))
    }

    /// Applies the first matching prediction rule.
    pub fn predict_point(&self, constraint: &Halfspace) -> Result<Prediction> {
        check_dim(self.dim(), constraint.dim())?;
        if let Some(xs) = &self.x_star {
            if constraint.contains(xs) {
                return Ok(Prediction::new(xs.clone(), "P1"));
            }
        }
        let hp = constraint.boundary();
        let cand = self.candidates(&hp);
        if cand.keys().all(|p| self.known_infeasible(p)) {
            return Ok(Prediction::new(sentinel(self.dim(), cand.keys()), "P2"));
        }
        let ext = self.ext_of(&cand);
        if !ext.is_empty() {
            let best = argbest(ext, &self.c, true);
            return Ok(Prediction::new(best, "P3"));
        }
        let best = argbest(cand.keys().collect(), &self.c, false);
        Ok(Prediction::new(best, "P4"))
    }

    /// Learns from a mistake. `predicted` must differ from `observed`.
    pub fn update(
        &mut self,
        constraint: &Halfspace,
        predicted: &Vector,
        observed: &Vector,
    ) -> Result<UpdateReport> {
        check_dim(self.dim(), observed.dim())?;
        if predicted == observed {
            return Err(Error::Input("update called on a correct prediction".into()));
        }
        let before: Vec<Vector> = self.x.iter().cloned().collect();
        let was_known = self.x.contains(observed);
        self.x.insert(observed.clone());

        if constraint.slack(observed).is_positive() {
            self.x_star = Some(observed.clone());
            return Ok(UpdateReport::rule("U1"));
        }

        let on_edge = self.edges.iter().any(|e| e.space.contains(observed));
        if !on_edge && !was_known {
            let mut report = UpdateReport::rule("U2");
            if let Some(space) = check_collinear(&before, observed)? {
                if !self.edges.iter().any(|e| e.space == space) {
                    let params: Vec<Rational> =
                        self.x.iter().filter_map(|p| space.param_of(p)).collect();
                    self.edges.push(EdgeKnowledge::new(
                        space.clone(),
                        &params,
                        &self.config.box_radius,
                    ));
                    report.new_edge = Some(space);
                }
            }
            return Ok(report);
        }

        let pv = self.c.dot(predicted);
        let ov = self.c.dot(observed);
        // A tie can only come from a prediction outside P: inside P and the
        // day's constraint it would lose to the unique optimum.
        if pv > ov || (pv == ov && constraint.contains(predicted)) {
            self.shrink("U3", predicted, |k, side, t| k.grow_infeasible(side, t))
        } else if pv < ov {
            self.shrink("U4", observed, |k, side, t| k.grow_feasible(side, t))
        } else {
            Err(self.violation("tied mistake with a prediction that breaks the day's constraint"))
        }
    }

    /// Shared body of U3 and U4. The point's status holds on every learned
    /// edge through it, so each questionable interval containing it is
    /// updated; the reported progress is the best ratio among them.
    fn shrink(
        &mut self,
        rule: &str,
        point: &Vector,
        apply: impl Fn(&mut EdgeKnowledge, Side, Rational),
    ) -> Result<UpdateReport> {
        let hits: Vec<(usize, Side, Rational)> = self
            .edges
            .iter()
            .enumerate()
            .filter_map(|(i, e)| {
                let t = e.space.param_of(point)?;
                e.questionable_side(&t).map(|side| (i, side, t))
            })
            .collect();
        if hits.is_empty() {
            return Err(self.violation(&format!(
                "{rule}: {point} lies in no questionable interval of a learned edge"
            )));
        }
        let bits = self.config.bits;
        let mut report = UpdateReport::rule(rule);
        for (i, side, t) in hits {
            let before = self.edges[i].q_len_sq(side);
            if before < grid_len_sq(bits) {
                let v = self.edges[i].elim(side, bits)?;
                report.elim.get_or_insert(v);
                continue;
            }
            apply(&mut self.edges[i], side, t);
            let after = self.edges[i].q_len_sq(side);
            let better = match &report.progress {
                Some((b0, a0)) => &after * b0 < a0 * &before,
                None => true,
            };
            if better {
                report.progress = Some((before, after));
            }
        }
        if report.elim.is_some() {
            report.progress = None;
        }
        Ok(report)
    }

    fn violation(&self, message: &str) -> Error {
        Error::Invariant { message: message.into(), state: format!("{self:?}") }
    }

    pub fn snapshot_state(&self) -> String {
        format!("{self:?}")
    }
}

/// `2^-2N`: ELIM fires on intervals with squared length below this.
fn grid_len_sq(bits: u32) -> Rational {
    rational::pow2_neg(2 * bits)
}

/// Argmax (or argmin) of `c · x`, ties to the lexicographically smallest.
fn argbest(points: Vec<&Vector>, c: &Vector, max: bool) -> Vector {
    let mut best: Option<(&Vector, Rational)> = None;
    for p in points {
        let v = c.dot(p);
        let better = match &best {
            None => true,
            Some((q, bv)) => {
                if max {
                    v > *bv || (v == *bv && p < *q)
                } else {
                    v < *bv || (v == *bv && p < *q)
                }
            }
        };
        if better {
            best = Some((p, v));
        }
    }
    best.expect("nonempty point set").0.clone()
}

impl OnlineLearner for LearnEdge {
    fn name(&self) -> &str {
        "learn-edge"
    }

    fn predict(&mut self, constraint: &Halfspace) -> Result<Prediction> {
        self.predict_point(constraint)
    }

    fn observe(
        &mut self,
        constraint: &Halfspace,
        prediction: &Prediction,
        observed: &Vector,
    ) -> Result<Option<UpdateReport>> {
        if prediction.point == *observed {
            return Ok(None);
        }
        self.update(constraint, &prediction.point, observed).map(Some)
    }
}

impl LearnEdge {
    /// Checks learned knowledge against the hidden polytope: `F` on the
    /// boundary, `Y` outside, and each learned line through an edge. Returns
    /// a description of every violation.
    pub fn audit(&self, hidden: &Polytope, edges: &[Edge]) -> Vec<String> {
        let mut out = Vec::new();
        for k in &self.edges {
            let (a, b) = k.feasible_endpoints();
            for p in [&a, &b] {
                if !hidden.on_boundary(p) {
                    out.push(format!("feasible point {p} of {} is not on the boundary", k.space));
                }
            }
            // F is a segment, so both endpoints on one true edge means F is too.
            if !edges.iter().any(|e| e.space == k.space && e.contains(&a) && e.contains(&b)) {
                out.push(format!("feasible interval on {} is not inside a true edge", k.space));
            }
            if hidden.contains(&k.space.point(&k.lower.at)) && k.lower.closed {
                out.push(format!("closed lower boundary of {} is feasible", k.space));
            }
            if hidden.contains(&k.space.point(&k.upper.at)) && k.upper.closed {
                out.push(format!("closed upper boundary of {} is feasible", k.space));
            }
            // The rays are convex, so checking just past each boundary and
            // far out covers them: the polytope meets the line in one segment.
            let (lo, hi) = match clip_line(hidden, &k.space) {
                Some(r) => r,
                None => {
                    out.push(format!("learned line {} misses the polytope", k.space));
                    continue;
                }
            };
            if lo < k.lower.at || (lo == k.lower.at && k.lower.closed) {
                out.push(format!("lower infeasible ray of {} meets the polytope", k.space));
            }
            if hi > k.upper.at || (hi == k.upper.at && k.upper.closed) {
                out.push(format!("upper infeasible ray of {} meets the polytope", k.space));
            }
            if !edges.iter().any(|e| e.space == k.space) {
                out.push(format!("learned line {} is not an edge-space", k.space));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests;
