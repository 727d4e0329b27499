//! Learners for `d = 1` and `d = 2`, where learned edge-spaces can be used as
//! known constraints of the hidden polytope.
//!
//! In the plane a line meets the boundary of a convex polygon in at most two
//! points unless it contains an edge, so three collinear observed optima pin
//! down a true edge line. Each edge then costs at most three mistakes, plus
//! one for the unconstrained optimum.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::geometry::{EdgeSpace, Halfspace, LineHit};
use crate::learner::{sentinel, OnlineLearner, Prediction, UpdateReport};
use crate::linalg::Vector;
use crate::rational::Rational;

/// Builds the specialized learner for objective `c`. The hidden polytope is
/// assumed to lie in `‖x‖∞ <= radius`.
pub fn learn_low_dim(c: Vector, radius: Rational) -> Result<LowDimLearner> {
    if c.is_zero() {
        return Err(Error::Config("objective must be nonzero".into()));
    }
    match c.dim() {
        1 => Ok(LowDimLearner::Line(IntervalLearner { c: c[0].clone(), lo: -radius.clone(), hi: radius })),
        2 => Ok(LowDimLearner::Plane(PlaneLearner {
            c,
            x: Vec::new(),
            x_star: None,
            lines: Vec::new(),
        })),
        d => Err(Error::Config(format!("low-dimension learner needs d in {{1, 2}}, got {d}"))),
    }
}

#[derive(Clone, Debug)]
pub enum LowDimLearner {
    Line(IntervalLearner),
    Plane(PlaneLearner),
}

/// `d = 1`: keeps an interval known to contain the hidden one and pins the
/// end favoured by `c` on the first mistake.
#[derive(Clone, Debug)]
pub struct IntervalLearner {
    c: Rational,
    lo: Rational,
    hi: Rational,
}

impl IntervalLearner {
    fn predict(&self, h: &Halfspace) -> Prediction {
        let a = &h.normal[0];
        let cut = &h.offset / a;
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        if a.is_positive() {
            hi = hi.min(cut);
        } else {
            lo = lo.max(cut);
        }
        if lo > hi {
            return Prediction::new(sentinel(1, []), "sentinel");
        }
        let best = if self.c.is_positive() { hi } else { lo };
        Prediction::new(Vector::new(vec![best]), "interval")
    }

    fn update(&mut self, observed: &Vector) -> UpdateReport {
        // The revealed optimum is either the constraint boundary, which the
        // prediction already handles, or the favoured end of the polytope.
        let t = observed[0].clone();
        if self.c.is_positive() {
            self.hi = t;
        } else {
            self.lo = t;
        }
        UpdateReport::rule("pin")
    }
}

/// A learned edge line; `side` is set once an observed point off the line
/// tells which half the polygon lies in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LearnedLine {
    pub space: EdgeSpace,
    pub side: Option<Halfspace>,
}

/// `d = 2`.
#[derive(Clone, Debug)]
pub struct PlaneLearner {
    c: Vector,
    x: Vec<Vector>,
    x_star: Option<Vector>,
    lines: Vec<LearnedLine>,
}

impl PlaneLearner {
    pub fn lines(&self) -> &[LearnedLine] {
        &self.lines
    }

    fn predict(&self, h: &Halfspace) -> Prediction {
        if let Some(xs) = &self.x_star {
            if h.contains(xs) {
                return Prediction::new(xs.clone(), "P1");
            }
        }
        // Walk the constraint line in the direction that improves c.
        let a = &h.normal;
        let mut u = Vector::new(vec![-a[1].clone(), a[0].clone()]);
        if self.c.dot(&u).is_negative() {
            u = u.neg();
        }
        let p0 = a.scale(&(&h.offset / a.norm_sq()));

        let mut exit: Option<Rational> = None;
        for side in self.lines.iter().filter_map(|l| l.side.as_ref()) {
            let rate = side.normal.dot(&u);
            if rate.is_positive() {
                let s = (&side.offset - side.normal.dot(&p0)) / rate;
                if exit.as_ref().map_or(true, |e| s < *e) {
                    exit = Some(s);
                }
            }
        }
        if let Some(s) = exit {
            return Prediction::new(p0.along(&u, &s), "edge-exit");
        }
        let hp = h.boundary();
        for l in self.lines.iter().filter(|l| l.side.is_none()) {
            if let LineHit::At(t) = l.space.intersect(&hp) {
                return Prediction::new(l.space.point(&t), "line-hit");
            }
        }
        Prediction::new(sentinel(2, &self.x), "sentinel")
    }

    fn update(&mut self, h: &Halfspace, observed: &Vector) -> Result<UpdateReport> {
        let before = core::mem::take(&mut self.x);
        let mut x = before.clone();
        if !x.contains(observed) {
            x.push(observed.clone());
        }
        self.x = x;
        if h.slack(observed).is_positive() {
            self.x_star = Some(observed.clone());
            return Ok(UpdateReport::rule("U1"));
        }

        let mut report = UpdateReport::rule("observe");
        for i in 0..before.len() {
            for j in i + 1..before.len() {
                let (p, q) = (&before[i], &before[j]);
                if p == observed || q == observed || !collinear2(p, q, observed) {
                    continue;
                }
                let space = EdgeSpace::through(p, observed)?;
                if self.lines.iter().all(|l| l.space != space) {
                    report.rule = "learn".into();
                    report.new_edge = Some(space.clone());
                    self.lines.push(LearnedLine { space, side: None });
                }
            }
        }
        for l in self.lines.iter_mut().filter(|l| l.side.is_none()) {
            l.side = orient(&l.space, &self.x)?;
        }
        Ok(report)
    }
}

fn collinear2(p: &Vector, q: &Vector, r: &Vector) -> bool {
    let u = q.sub(p);
    let v = r.sub(p);
    (&u[0] * &v[1] - &u[1] * &v[0]).is_zero()
}

/// The closed halfspace bounded by `space` that holds the first point of
/// `xs` off the line.
fn orient(space: &EdgeSpace, xs: &[Vector]) -> Result<Option<Halfspace>> {
    let dir = &space.direction;
    let n = Vector::new(vec![-dir[1].clone(), dir[0].clone()]);
    let off = n.dot(&space.base);
    let Some(w) = xs.iter().find(|w| !space.contains(w)) else {
        return Ok(None);
    };
    let h = if n.dot(w) < off {
        Halfspace::new(n, off)?
    } else {
        Halfspace::new(n.neg(), -off)?
    };
    Ok(Some(h))
}

impl OnlineLearner for LowDimLearner {
    fn name(&self) -> &str {
        "learn-low-dim"
    }

    fn predict(&mut self, constraint: &Halfspace) -> Result<Prediction> {
        match self {
            LowDimLearner::Line(l) => {
                check_dim(1, constraint.dim())?;
                Ok(l.predict(constraint))
            }
            LowDimLearner::Plane(l) => {
                check_dim(2, constraint.dim())?;
                Ok(l.predict(constraint))
            }
        }
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
        match self {
            LowDimLearner::Line(l) => Ok(Some(l.update(observed))),
            LowDimLearner::Plane(l) => l.update(constraint, observed).map(Some),
        }
    }
}
