use alloc::vec::Vec;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{for_each_subset, row_rank, vertex_candidates, Polytope};
use crate::linalg::Vector;
use crate::lp::{region_status, RegionStatus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Assumption {
    Bounded,
    Nonempty,
    /// Every vertex lies in the unit `l∞` ball.
    UnitBall,
    /// Every vertex coordinate is a multiple of `2^-N`.
    GridVertices,
    /// Any `d - 1` rows of `A` have rank `d - 1`.
    RowRank,
    /// Every vertex is tight for exactly `d` constraints.
    SimpleVertices,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Vertex { point: Vector, binding: Vec<usize> },
    Rows(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssumptionCheck {
    pub assumption: Assumption,
    pub passed: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub entries: Vec<AssumptionCheck>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn get(&self, a: Assumption) -> &AssumptionCheck {
        self.entries.iter().find(|e| e.assumption == a).expect("every assumption is reported")
    }

    pub fn failed(&self) -> impl Iterator<Item = &AssumptionCheck> {
        self.entries.iter().filter(|e| !e.passed)
    }
}

/// Checks the structural assumptions the known-objective learners rely on.
/// Never fails; each entry carries a witness when it does not hold.
pub fn validate_assumptions(p: &Polytope, bits: u32) -> ValidationReport {
    let status = region_status(p);
    let verts = vertex_candidates(p);
    let d = p.dim();
    let mut entries = Vec::new();
    let mut push = |assumption, witness: Option<Witness>| {
        entries.push(AssumptionCheck { assumption, passed: witness.is_none(), witness })
    };

    let as_witness = |v: &super::VertexInfo| Witness::Vertex {
        point: v.point.clone(),
        binding: v.binding.clone(),
    };

    push(Assumption::Bounded, (status == RegionStatus::Unbounded).then(|| Witness::Rows(Vec::new())));
    push(Assumption::Nonempty, (status == RegionStatus::Empty).then(|| Witness::Rows(Vec::new())));

    // Report the worst offender: largest norm, then lexicographically largest.
    let one = crate::rational::Rational::one();
    let outside = verts
        .iter()
        .filter(|v| v.point.norm_inf() > one)
        .max_by(|a, b| {
            a.point.norm_inf().cmp(&b.point.norm_inf()).then_with(|| a.point.cmp(&b.point))
        });
    push(Assumption::UnitBall, outside.map(as_witness));

    let off_grid = verts.iter().find(|v| !v.point.on_grid(bits));
    push(Assumption::GridVertices, off_grid.map(as_witness));

    let mut deficient = None;
    if d >= 2 {
        for_each_subset(p.m(), d - 1, |rows| {
            if deficient.is_none() && row_rank(p, rows) != d - 1 {
                deficient = Some(Witness::Rows(rows.to_vec()));
            }
        });
    }
    push(Assumption::RowRank, deficient);

    let degenerate = verts.iter().find(|v| v.binding.len() != d);
    push(Assumption::SimpleVertices, degenerate.map(as_witness));

    ValidationReport { entries }
}
