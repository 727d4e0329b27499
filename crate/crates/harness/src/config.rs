//! Run configuration: JSON files and CLI flags fill the same struct; unset
//! fields fall back to per-setting defaults.

use std::path::PathBuf;

use clap::ValueEnum;
use revealed_lp_core::env::Family;
use serde::{Deserialize, Serialize};

use crate::{HarnessError, Result};

/// Environment variable overriding the ellipsoid working precision.
pub const PRECISION_ENV: &str = "REVEALED_LP_PRECISION_BITS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    KnownObjective,
    Stochastic,
    KnownConstraints,
    Fcp,
    LowerBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum LearnerKind {
    LearnEdge,
    LowDim,
    LearnHull,
    Greedy,
    Random,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub kind: Option<Kind>,
    #[serde(default)]
    pub seed: u64,
    pub d: Option<usize>,
    pub m: Option<usize>,
    #[serde(rename = "N")]
    pub bits: Option<u32>,
    pub n: Option<usize>,
    pub days: Option<usize>,
    pub learner: Option<LearnerKind>,
    pub family: Option<Family>,
    pub binding_only: Option<bool>,
    pub distinct_optima: Option<bool>,
    pub cut_percent: Option<u32>,
    /// Known-constraints: polytopes in the pool.
    pub pool: Option<usize>,
    /// Known-constraints: scored days after training.
    pub eval_days: Option<usize>,
    /// Known-objective: read the hidden instance instead of generating one.
    pub instance: Option<PathBuf>,
    /// Ellipsoid working precision in bits.
    pub precision_bits: Option<u32>,
    /// FCP: hidden rows as `[[a..., b], ...]` in "n/d" strings.
    pub truth: Option<Vec<Vec<String>>>,
}

impl RunConfig {
    pub fn for_kind(kind: Kind) -> Self {
        RunConfig { kind: Some(kind), ..Default::default() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(format!("bad config: {e}")))
    }

    /// Fields set in `other` win.
    pub fn merged(mut self, other: RunConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(kind, d, m, bits, n, days, learner, family, binding_only, distinct_optima, cut_percent, pool, eval_days, instance, precision_bits, truth);
        if other.seed != 0 {
            self.seed = other.seed;
        }
        self
    }

    pub fn kind(&self) -> Result<Kind> {
        self.kind.ok_or_else(|| HarnessError::Config("no run kind given".into()))
    }

    pub fn d(&self) -> usize {
        self.d.unwrap_or(match self.kind {
            Some(Kind::KnownObjective) | Some(Kind::LowerBound) | None => 3,
            Some(Kind::Stochastic) | Some(Kind::KnownConstraints) => 2,
            Some(Kind::Fcp) => 1,
        })
    }

    pub fn m(&self) -> usize {
        self.m.unwrap_or(match self.kind {
            Some(Kind::Fcp) => 2,
            Some(Kind::Stochastic) | Some(Kind::KnownConstraints) => 4,
            _ => 5,
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits.unwrap_or(match self.kind {
            Some(Kind::KnownConstraints) => 3,
            Some(Kind::Fcp) => 2,
            Some(Kind::LowerBound) => 8,
            _ => 4,
        })
    }

    pub fn n(&self) -> usize {
        self.n.unwrap_or(2)
    }

    pub fn days(&self) -> usize {
        self.days.unwrap_or(match self.kind {
            Some(Kind::Stochastic) => 1000,
            Some(Kind::KnownConstraints) => 2000,
            Some(Kind::Fcp) => 60,
            _ => 500,
        })
    }

    pub fn learner(&self) -> LearnerKind {
        self.learner.unwrap_or(match self.kind {
            Some(Kind::Stochastic) => LearnerKind::LearnHull,
            _ => LearnerKind::LearnEdge,
        })
    }

    pub fn family(&self) -> Family {
        self.family.unwrap_or(match self.kind {
            Some(Kind::Stochastic) => Family::GridNormals,
            _ => Family::EdgeBiased,
        })
    }

    /// The two-dimensional learner needs a binding stream with fresh optima.
    pub fn binding_only(&self) -> bool {
        self.binding_only.unwrap_or(self.learner() == LearnerKind::LowDim)
    }

    pub fn distinct_optima(&self) -> bool {
        self.distinct_optima.unwrap_or(self.learner() == LearnerKind::LowDim)
    }

    pub fn pool(&self) -> usize {
        self.pool.unwrap_or(10)
    }

    pub fn eval_days(&self) -> usize {
        self.eval_days.unwrap_or(200)
    }

    /// Config value, then the environment variable, then the library default.
    pub fn precision_bits(&self) -> Result<u32> {
        if let Some(b) = self.precision_bits {
            return Ok(b);
        }
        match std::env::var(PRECISION_ENV) {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| HarnessError::Config(format!("{PRECISION_ENV}={s} is not a bit count"))),
            Err(_) => Ok(revealed_lp_core::ellipsoid::DEFAULT_PRECISION_BITS),
        }
    }
}

pub fn parse_family(s: &str) -> std::result::Result<Family, String> {
    match s.replace('-', "_").as_str() {
        "grid_normals" => Ok(Family::GridNormals),
        "vertex_anchored" => Ok(Family::VertexAnchored),
        "edge_biased" => Ok(Family::EdgeBiased),
        _ => Err(format!("unknown family {s}; expected grid-normals, vertex-anchored or edge-biased")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_config_with_defaults() {
        let c = RunConfig::from_json(r#"{"kind": "known_objective", "seed": 3, "N": 5, "family": "grid_normals"}"#).unwrap();
        assert_eq!(c.kind().unwrap(), Kind::KnownObjective);
        assert_eq!((c.d(), c.m(), c.bits(), c.days()), (3, 5, 5, 500));
        assert_eq!(c.family(), Family::GridNormals);
    }

    #[test]
    fn unknown_fields_are_config_errors() {
        let e = RunConfig::from_json(r#"{"kind": "fcp", "bogus": 1}"#).unwrap_err();
        assert_eq!(e.exit_code(), 64);
    }

    #[test]
    fn flags_override_file() {
        let file = RunConfig { seed: 1, days: Some(10), ..RunConfig::for_kind(Kind::Fcp) };
        let flags = RunConfig { days: Some(20), ..Default::default() };
        let c = file.merged(flags);
        assert_eq!((c.seed, c.days()), (1, 20));
    }

    #[test]
    fn low_dim_defaults_to_binding_stream() {
        let c = RunConfig { learner: Some(LearnerKind::LowDim), ..RunConfig::for_kind(Kind::KnownObjective) };
        assert!(c.binding_only() && c.distinct_optima());
    }
}
