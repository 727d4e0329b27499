use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geometry::{enumerate_edges, validate_assumptions, Edge, Halfspace, Polytope};
use crate::linalg::Vector;
use crate::lp::{region_status, solve_bounded_vertex_lp, solve_vertex_lp, RegionStatus};

/// A hidden polytope with a known objective, as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub polytope: Polytope,
    pub c: Vector,
    #[serde(rename = "N")]
    pub bits: u32,
}

/// Fixed hidden polytope, known objective; each day adds one constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnownObjectiveEnv {
    hidden: Polytope,
    c: Vector,
    bits: u32,
    bounded: bool,
}

impl KnownObjectiveEnv {
    /// Requires every structural assumption to hold.
    pub fn new(instance: Instance) -> Result<Self> {
        check_dim(instance.polytope.dim(), instance.c.dim())?;
        let report = validate_assumptions(&instance.polytope, instance.bits);
        if !report.all_passed() {
            let failed: Vec<String> = report.failed().map(|e| format!("{:?}", e.assumption)).collect();
            return Err(Error::Structural(format!("instance fails {}", failed.join(", "))));
        }
        Ok(Self::unchecked(instance))
    }

    /// Skips validation; the lower-bound construction and small examples
    /// use polytopes outside the assumptions.
    pub fn unchecked(instance: Instance) -> Self {
        let bounded = region_status(&instance.polytope) == RegionStatus::Bounded;
        KnownObjectiveEnv { hidden: instance.polytope, c: instance.c, bits: instance.bits, bounded }
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    pub fn c(&self) -> &Vector {
        &self.c
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// The unique optimum over `hidden ∩ constraint`. Ties are a contract
    /// error; callers resample.
    pub fn step(&self, constraint: &Halfspace) -> Result<Vector> {
        let p = self.hidden.with(constraint)?;
        let sol = if self.bounded {
            solve_bounded_vertex_lp(&p, &self.c)?
        } else {
            solve_vertex_lp(&p, &self.c)?
        };
        if !sol.unique {
            return Err(Error::Contract(format!("constraint {constraint} leaves a tied optimum")));
        }
        Ok(sol.point)
    }

    /// Scoring only.
    pub fn hidden(&self) -> &Polytope {
        &self.hidden
    }

    /// Scoring only: the optimum without a daily constraint.
    pub fn hidden_optimum(&self) -> Result<Vector> {
        Ok(solve_vertex_lp(&self.hidden, &self.c)?.point)
    }

    /// Scoring only.
    pub fn hidden_edges(&self) -> Result<Vec<Edge>> {
        enumerate_edges(&self.hidden)
    }

    pub fn instance(&self) -> Instance {
        Instance { polytope: self.hidden.clone(), c: self.c.clone(), bits: self.bits }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn square_env(c: &[i64]) -> KnownObjectiveEnv {
        KnownObjectiveEnv::new(Instance { polytope: Polytope::cube(2, int(1)), c: Vector::from_ints(c), bits: 1 })
            .unwrap()
    }

    #[test]
    fn tie_is_rejected_then_broken_by_objective() {
        let cut = Halfspace::from_ints(&[1, 1], 0, 1);
        assert!(matches!(square_env(&[1, 1]).step(&cut), Err(Error::Contract(_))));
        // With c = (2, 1) the cut x + y <= 0 leaves (1, -1) as the only best point.
        assert_eq!(square_env(&[2, 1]).step(&cut).unwrap(), Vector::from_ints(&[1, -1]));
    }

    #[test]
    fn slack_constraint_reveals_unconstrained_optimum() {
        let env = square_env(&[2, 1]);
        let loose = Halfspace::from_ints(&[1, 1], 5, 1);
        assert_eq!(env.step(&loose).unwrap(), env.hidden_optimum().unwrap());
    }

    #[test]
    fn instance_json_round_trip() {
        let env = square_env(&[2, 1]);
        let s = serde_json::to_string(&env.instance()).unwrap();
        assert!(s.contains("\"halfspaces\""));
        assert!(s.contains("\"N\":1"));
        let back: Instance = serde_json::from_str(&s).unwrap();
        assert_eq!(back, env.instance());
    }
}
