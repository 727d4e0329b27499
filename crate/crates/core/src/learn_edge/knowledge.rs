//! What is known about one learned edge-space, in its line parameter.

use alloc::vec::Vec;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{grid_points_in_interval, EdgeSpace};
use crate::linalg::Vector;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Lower,
    Upper,
}

/// Where an infeasible ray starts. On the lower side the ray is
/// `{t < at}`, plus `at` itself when `closed`; the upper side mirrors it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Boundary {
    #[serde(with = "rational::serde_rational")]
    pub at: Rational,
    pub closed: bool,
}

/// Feasible interval `F`, infeasible rays `Y0`, `Y1`, and the questionable
/// intervals between them. `Q0` is the gap between `Y0` and `F.lo`; `Q1` the
/// gap between `F.hi` and `Y1`. Neither is stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeKnowledge {
    pub space: EdgeSpace,
    #[serde(with = "rational::serde_rational")]
    pub f_lo: Rational,
    #[serde(with = "rational::serde_rational")]
    pub f_hi: Rational,
    pub lower: Boundary,
    pub upper: Boundary,
}

/// Parameter range of the line inside `‖x‖∞ <= r`, if any.
fn box_range(space: &EdgeSpace, r: &Rational) -> Option<(Rational, Rational)> {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for (b, u) in space.base.iter().zip(space.direction.iter()) {
        if u.is_zero() {
            if b > r || *b < -r.clone() {
                return None;
            }
            continue;
        }
        let t1 = (-r.clone() - b) / u;
        let t2 = (r - b) / u;
        let (a, z) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        if lo.as_ref().map_or(true, |l| a > *l) {
            lo = Some(a);
        }
        if hi.as_ref().map_or(true, |h| z < *h) {
            hi = Some(z);
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) if l <= h => Some((l, h)),
        _ => None,
    }
}

impl EdgeKnowledge {
    /// `F` spans the given on-line parameters; `Y` starts as the part of the
    /// line outside the `‖x‖∞ <= radius` box.
    pub fn new(space: EdgeSpace, params: &[Rational], radius: &Rational) -> Self {
        let f_lo = params.iter().min().expect("at least one observed point").clone();
        let f_hi = params.iter().max().expect("at least one observed point").clone();
        let (a, b) = box_range(&space, radius).unwrap_or_else(|| (f_lo.clone(), f_hi.clone()));
        let lower = Boundary { at: a.min(f_lo.clone()), closed: false };
        let upper = Boundary { at: b.max(f_hi.clone()), closed: false };
        EdgeKnowledge { space, f_lo, f_hi, lower, upper }
    }

    pub fn in_feasible(&self, t: &Rational) -> bool {
        self.f_lo <= *t && *t <= self.f_hi
    }

    pub fn in_infeasible(&self, t: &Rational) -> bool {
        *t < self.lower.at
            || (*t == self.lower.at && self.lower.closed)
            || *t > self.upper.at
            || (*t == self.upper.at && self.upper.closed)
    }

    /// Which questionable interval holds `t`, if any.
    pub fn questionable_side(&self, t: &Rational) -> Option<Side> {
        if *t < self.f_lo && !self.in_infeasible(t) && *t >= self.lower.at {
            Some(Side::Lower)
        } else if *t > self.f_hi && !self.in_infeasible(t) && *t <= self.upper.at {
            Some(Side::Upper)
        } else {
            None
        }
    }

    /// Parameter endpoints of the closure of `Q_side`.
    pub fn q_closure(&self, side: Side) -> (Rational, Rational) {
        match side {
            Side::Lower => (self.lower.at.clone(), self.f_lo.clone()),
            Side::Upper => (self.f_hi.clone(), self.upper.at.clone()),
        }
    }

    /// Squared ambient length of `Q_side`.
    pub fn q_len_sq(&self, side: Side) -> Rational {
        let (a, b) = self.q_closure(side);
        self.space.length_sq(&a, &b)
    }

    /// Midpoint of `Q_side`; equals the `F` endpoint when `Q_side` is empty.
    pub fn midpoint(&self, side: Side) -> Rational {
        let (a, b) = self.q_closure(side);
        (a + b) / rational::int(2)
    }

    /// `t` lies between the two midpoints.
    pub fn in_ext(&self, t: &Rational) -> bool {
        self.midpoint(Side::Lower) <= *t && *t <= self.midpoint(Side::Upper)
    }

    /// Extends `Y_side` to include `t`.
    pub fn grow_infeasible(&mut self, side: Side, t: Rational) {
        match side {
            Side::Lower => self.lower = Boundary { at: t, closed: true },
            Side::Upper => self.upper = Boundary { at: t, closed: true },
        }
    }

    /// Extends `F` to include `t`.
    pub fn grow_feasible(&mut self, side: Side, t: Rational) {
        match side {
            Side::Lower => self.f_lo = t,
            Side::Upper => self.f_hi = t,
        }
    }

    /// Certifies the unique precision-grid point in the closure of `Q_side`
    /// as the vertex separating `F` from `Y_side`. Afterwards `F` ends at the
    /// vertex, `Y_side` starts just beyond it and `Q_side` is empty.
    pub fn elim(&mut self, side: Side, bits: u32) -> Result<Vector> {
        let (a, b) = self.q_closure(side);
        let pts = grid_points_in_interval(&self.space, &a, &b, bits);
        if pts.len() != 1 {
            return Err(Error::Precondition(format!(
                "short questionable interval [{a}, {b}] on {} holds {} grid points at {bits} bits",
                self.space,
                pts.len()
            )));
        }
        let v = pts.into_iter().next().expect("one point");
        let t = self.space.param_of(&v).expect("grid point lies on the line");
        let boundary = match side {
            Side::Lower => &self.lower,
            Side::Upper => &self.upper,
        };
        if boundary.closed && boundary.at == t {
            return Err(Error::Precondition(format!(
                "grid point {v} on {} is already known infeasible",
                self.space
            )));
        }
        self.grow_feasible(side, t.clone());
        let open = Boundary { at: t, closed: false };
        match side {
            Side::Lower => self.lower = open,
            Side::Upper => self.upper = open,
        }
        Ok(v)
    }

    /// Point of `F` at each end, for soundness checks.
    pub fn feasible_endpoints(&self) -> (Vector, Vector) {
        (self.space.point(&self.f_lo), self.space.point(&self.f_hi))
    }

    /// Sample points strictly inside each infeasible ray, one unit of
    /// parameter beyond its boundary, plus the boundary itself when closed.
    pub fn infeasible_samples(&self) -> Vec<Vector> {
        let one = rational::int(1);
        let mut out = vec![
            self.space.point(&(&self.lower.at - &one)),
            self.space.point(&(&self.upper.at + &one)),
        ];
        if self.lower.closed {
            out.push(self.space.point(&self.lower.at));
        }
        if self.upper.closed {
            out.push(self.space.point(&self.upper.at));
        }
        out
    }
}
