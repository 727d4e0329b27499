//! LearnHull: predict the best point of the convex hull of past optima that
//! satisfies today's constraint; add the revealed optimum on a mistake.
//!
//! Every generator is a true optimum, so the hull lies inside the hidden
//! polytope and any prediction taken from it is feasible. A mistake can only
//! happen when the truth is outside the hull.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geometry::Halfspace;
use crate::learner::{sentinel, OnlineLearner, Prediction, UpdateReport};
use crate::linalg::Vector;
use crate::lp::{hull_membership, maximize_over_hull};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnHull {
    pub c: Vector,
    /// Hull generators.
    pub points: Vec<Vector>,
    /// Drop generators that fall inside the hull of the others.
    pub prune: bool,
}

impl LearnHull {
    pub fn new(c: Vector) -> Self {
        LearnHull { c, points: Vec::new(), prune: false }
    }

    pub fn with_pruning(mut self, prune: bool) -> Self {
        self.prune = prune;
        self
    }

    pub fn predict_point(&self, constraint: &Halfspace) -> Result<Prediction> {
        check_dim(self.c.dim(), constraint.dim())?;
        Ok(match maximize_over_hull(&self.points, constraint, &self.c) {
            Some(opt) => Prediction::new(opt.point, "hull"),
            None => Prediction::new(sentinel(self.c.dim(), &self.points), "sentinel"),
        })
    }

    /// True when `x` lies in the current hull.
    pub fn covers(&self, x: &Vector) -> bool {
        !self.points.is_empty() && hull_membership(&self.points, x).0
    }

    /// Adds a mispredicted optimum. It must lie outside the current hull.
    pub fn update(&mut self, observed: &Vector) -> Result<UpdateReport> {
        check_dim(self.c.dim(), observed.dim())?;
        if self.covers(observed) {
            return Err(Error::Invariant {
                message: format!("mistake on {observed}, which is already inside the hull"),
                state: format!("{self:?}"),
            });
        }
        self.points.push(observed.clone());
        if self.prune {
            self.prune_interior();
        }
        Ok(UpdateReport::rule("grow"))
    }

    fn prune_interior(&mut self) {
        let mut i = 0;
        while i < self.points.len() && self.points.len() > 1 {
            let p = self.points.remove(i);
            if hull_membership(&self.points, &p).0 {
                continue;
            }
            self.points.insert(i, p);
            i += 1;
        }
    }
}

impl OnlineLearner for LearnHull {
    fn name(&self) -> &str {
        "learn-hull"
    }

    fn predict(&mut self, constraint: &Halfspace) -> Result<Prediction> {
        self.predict_point(constraint)
    }

    fn observe(
        &mut self,
        _: &Halfspace,
        prediction: &Prediction,
        observed: &Vector,
    ) -> Result<Option<UpdateReport>> {
        if prediction.point == *observed {
            return Ok(None);
        }
        self.update(observed).map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Polytope;
    use crate::lp::solve_vertex_lp;
    use crate::rational::int;
    use proptest::prelude::*;

    fn pts(xs: &[(i64, i64)]) -> Vec<Vector> {
        xs.iter().map(|&(a, b)| Vector::from_ints(&[a, b])).collect()
    }

    #[test]
    fn empty_hull_predicts_sentinel() {
        let l = LearnHull::new(Vector::from_ints(&[1, 1]));
        let p = l.predict_point(&Halfspace::from_ints(&[1, 1], 3, 1)).unwrap();
        assert_eq!(p, Prediction::new(Vector::from_ints(&[2, 2]), "sentinel"));
    }

    #[test]
    fn single_point_hull() {
        let mut l = LearnHull::new(Vector::from_ints(&[1, 1]));
        l.update(&Vector::from_ints(&[1, 1])).unwrap();
        let p = l.predict_point(&Halfspace::from_ints(&[1, 1], 3, 1)).unwrap();
        assert_eq!(p.point, Vector::from_ints(&[1, 1]));
    }

    #[test]
    fn clipped_square_matches_vertex_oracle() {
        let corners = [(-1, -1), (1, -1), (-1, 1), (1, 1)];
        let l = LearnHull { c: Vector::from_ints(&[1, 1]), points: pts(&corners), prune: false };
        let cut = Halfspace::from_ints(&[1, 0], 0, 1);
        // The hull of the corners is the square itself, so the exact LP over
        // square ∩ cut is an independent answer.
        let want = solve_vertex_lp(&Polytope::cube(2, int(1)).with(&cut).unwrap(), &l.c).unwrap();
        assert_eq!(l.predict_point(&cut).unwrap().point, want.point);
        assert_eq!(want.point, Vector::from_ints(&[0, 1]));
    }

    #[test]
    fn interior_point_is_pruned() {
        let mut l = LearnHull::new(Vector::from_ints(&[1, 1])).with_pruning(true);
        for p in pts(&[(0, 0), (4, 0), (0, 4)]) {
            l.update(&p).unwrap();
        }
        assert!(l.update(&Vector::from_ints(&[1, 1])).is_err());
        l.update(&Vector::from_ints(&[4, 4])).unwrap();
        assert_eq!(l.points.len(), 4);
        l.update(&Vector::from_ints(&[5, 5])).unwrap();
        assert_eq!(l.points, pts(&[(0, 0), (4, 0), (0, 4), (5, 5)]));
    }

    #[test]
    fn mistake_inside_hull_is_reported() {
        let mut l = LearnHull::new(Vector::from_ints(&[1, 0]));
        l.update(&Vector::from_ints(&[0, 0])).unwrap();
        l.update(&Vector::from_ints(&[2, 0])).unwrap();
        let err = l.update(&Vector::from_ints(&[1, 0])).unwrap_err();
        assert!(matches!(err, Error::Invariant { .. }));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn pruning_keeps_the_hull(raw in prop::collection::vec((-4i64..=4, -4i64..=4), 1..10)) {
            let mut full = LearnHull::new(Vector::from_ints(&[1, 0]));
            let mut pruned = LearnHull::new(Vector::from_ints(&[1, 0])).with_pruning(true);
            for p in pts(&raw) {
                if !full.covers(&p) {
                    full.update(&p).unwrap();
                    pruned.update(&p).unwrap();
                }
            }
            for a in -8..=8 {
                for b in -8..=8 {
                    let q = Vector::from_ratios(&[(a, 2), (b, 2)]);
                    prop_assert_eq!(full.covers(&q), pruned.covers(&q));
                }
            }
        }
    }
}
