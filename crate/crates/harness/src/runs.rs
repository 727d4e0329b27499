//! One driver per setting. Each returns the episode log plus whatever the
//! setting's bound checks and soundness audits need.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use revealed_lp_core::ellipsoid::{volume_cut_holds, LearnEllipsoid, LearnEllipsoidConfig};
use revealed_lp_core::env::{
    adversary_objective, generate_instance, polytope_pool, run_lower_bound_padded, sample_objective,
    ConstraintStream, FiniteClassEnv, KnownConstraintsEnv, KnownObjectiveEnv,
};
use revealed_lp_core::episode::{self, describe_constraint, EpisodeFailure, EpisodeHeader, EpisodeLog};
use revealed_lp_core::fcp::{enumerate_class, Fcp, DEFAULT_CLASS_CAP};
use revealed_lp_core::geometry::enumerate_vertices;
use revealed_lp_core::learn_edge::{learn_low_dim, mistake_bound, LearnEdge, LearnEdgeConfig};
use revealed_lp_core::learn_hull::LearnHull;
use revealed_lp_core::learner::{Greedy, OnlineLearner, RandomGuess};
use revealed_lp_core::rational::{self, int};
use revealed_lp_core::{Error, Halfspace, Rational, Vector};

use crate::bounds::{self, BoundCheck};
use crate::config::{Kind, LearnerKind, RunConfig};
use crate::io::{digest, read_instance};
use crate::{HarnessError, Result};

/// Slack on bounds that hold in expectation, applied to averages.
pub const EXPECTATION_SLACK: f64 = 1.5;

#[derive(Clone, Debug)]
pub enum Report {
    KnownObjective(KnownObjectiveReport),
    KnownConstraints(KnownConstraintsReport),
    Fcp(FcpReport),
    LowerBound(LowerBoundReport),
}

impl Report {
    pub fn log(&self) -> &EpisodeLog {
        match self {
            Report::KnownObjective(r) => &r.log,
            Report::KnownConstraints(r) => &r.log,
            Report::Fcp(r) => &r.log,
            Report::LowerBound(r) => &r.log,
        }
    }

    pub fn checks(&self) -> Vec<BoundCheck> {
        match self {
            Report::KnownObjective(r) => r.checks(),
            Report::KnownConstraints(r) => r.checks(),
            Report::Fcp(r) => r.checks(),
            Report::LowerBound(r) => r.checks(),
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Report> {
    Ok(match cfg.kind()? {
        Kind::KnownObjective | Kind::Stochastic => Report::KnownObjective(known_objective(cfg)?),
        Kind::KnownConstraints => Report::KnownConstraints(known_constraints(cfg)?),
        Kind::Fcp => Report::Fcp(fcp(cfg)?),
        Kind::LowerBound => Report::LowerBound(lower_bound(cfg)?),
    })
}

fn day_error(f: EpisodeFailure) -> HarnessError {
    HarnessError::Day { day: f.day, source: f.error }
}

#[derive(Clone, Debug)]
pub struct KnownObjectiveReport {
    pub log: EpisodeLog,
    pub learner: LearnerKind,
    pub d: usize,
    pub m: usize,
    pub bits: u32,
    pub edges: usize,
    /// Failed knowledge audits, prefixed with the day.
    pub audit_violations: Vec<String>,
    /// Non-certifying U3/U4 updates.
    pub interval_updates: usize,
    /// Days whose non-certifying U3/U4 did not halve the interval.
    pub non_halving: Vec<usize>,
    pub elim_calls: usize,
    /// Days where ELIM certified a point that is not a vertex.
    pub elim_non_vertex: Vec<usize>,
    /// Days where a hull mistake and hull growth disagree.
    pub growth_mismatch: Vec<usize>,
}

impl KnownObjectiveReport {
    pub fn mistakes(&self) -> usize {
        self.log.mistakes()
    }

    pub fn checks(&self) -> Vec<BoundCheck> {
        let mut out = Vec::new();
        match self.learner {
            LearnerKind::LearnEdge => {
                out.push(bounds::learn_edge(self.edges, self.bits, self.d, self.mistakes()));
                out.push(bounds::none("learn_edge_audit", self.audit_violations.len()));
                out.push(bounds::none("learn_edge_halving", self.non_halving.len()));
                out.push(bounds::none("elim_vertex", self.elim_non_vertex.len()));
            }
            LearnerKind::LowDim => out.push(bounds::low_dim(self.m, self.mistakes())),
            LearnerKind::LearnHull => {
                out.push(bounds::learn_hull(self.edges, self.log.days.len(), EXPECTATION_SLACK, self.mistakes() as f64));
                out.push(bounds::none("hull_growth", self.growth_mismatch.len()));
            }
            LearnerKind::Greedy | LearnerKind::Random => {}
        }
        out
    }
}

fn known_objective_env(cfg: &RunConfig) -> Result<KnownObjectiveEnv> {
    match &cfg.instance {
        Some(path) => Ok(KnownObjectiveEnv::new(read_instance(path)?)?),
        None => Ok(generate_instance(cfg.seed, cfg.d(), cfg.m(), cfg.bits())?),
    }
}

/// Known objective with a fixed hidden polytope. Covers both the
/// adversarial (`known-objective`) and i.i.d. (`stochastic`) settings; they
/// differ only in defaults.
pub fn known_objective(cfg: &RunConfig) -> Result<KnownObjectiveReport> {
    let env = known_objective_env(cfg)?;
    let edges = env.hidden_edges()?;
    let vertices: BTreeSet<Vector> = enumerate_vertices(env.hidden())?.into_iter().collect();
    let days = ConstraintStream::new(&env, cfg.family(), cfg.seed ^ 0x5eed)?
        .cut_percent(cfg.cut_percent.unwrap_or(75))
        .binding_only(cfg.binding_only())
        .distinct_optima(cfg.distinct_optima())
        .take_days(cfg.days())?;
    let learner = cfg.learner();
    let header = EpisodeHeader {
        learner: format!("{learner:?}"),
        environment_digest: digest(&env.instance()),
        seed: cfg.seed,
        edges: Some(edges.len()),
        bound: (learner == LearnerKind::LearnEdge).then(|| mistake_bound(edges.len(), env.bits(), env.dim())),
    };
    let mut report = KnownObjectiveReport {
        log: EpisodeLog::default(),
        learner,
        d: env.dim(),
        m: env.hidden().m(),
        bits: env.bits(),
        edges: edges.len(),
        audit_violations: Vec::new(),
        interval_updates: 0,
        non_halving: Vec::new(),
        elim_calls: 0,
        elim_non_vertex: Vec::new(),
        growth_mismatch: Vec::new(),
    };
    let c = env.c().clone();
    report.log = match learner {
        LearnerKind::LearnEdge => {
            let mut l = LearnEdge::new(c, LearnEdgeConfig::new(env.bits()));
            episode::run(&mut l, header, days, |v| {
                for problem in v.learner.audit(env.hidden(), &edges) {
                    report.audit_violations.push(format!("day {}: {problem}", v.day));
                }
                if let Some(r) = v.report.filter(|r| r.rule == "U3" || r.rule == "U4") {
                    if let Some(x) = &r.elim {
                        report.elim_calls += 1;
                        if !vertices.contains(x) {
                            report.elim_non_vertex.push(v.day);
                        }
                    } else {
                        report.interval_updates += 1;
                        if r.halved() == Some(false) {
                            report.non_halving.push(v.day);
                        }
                    }
                }
                Ok(())
            })
        }
        LearnerKind::LowDim => {
            let mut l = learn_low_dim(c, int(1))?;
            episode::run(&mut l, header, days, |_| Ok(()))
        }
        LearnerKind::LearnHull => {
            let mut l = LearnHull::new(c).with_pruning(true);
            episode::run(&mut l, header, days, |v| {
                let mistake = v.prediction.point != *v.truth;
                let grew = v.report.is_some_and(|r| r.rule == "grow");
                if mistake != grew {
                    report.growth_mismatch.push(v.day);
                }
                Ok(())
            })
        }
        LearnerKind::Greedy => episode::run(&mut Greedy::new(c), header, days, |_| Ok(())),
        LearnerKind::Random => {
            episode::run(&mut RandomGuess::new(env.dim(), cfg.seed ^ 0xa11), header, days, |_| Ok(()))
        }
    }
    .map_err(day_error)?;
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct KnownConstraintsReport {
    pub log: EpisodeLog,
    pub n: usize,
    pub d: usize,
    pub bits: u32,
    pub cuts: u64,
    /// Cut days after which `vec(V)` left the ellipsoid (beyond 1e-9 relative).
    pub containment_failures: Vec<usize>,
    /// Cut days whose volume ratio exceeded `e^{-1/(D+1)}`.
    pub volume_failures: Vec<usize>,
    pub training_days: usize,
    pub last_mistake_day: Option<usize>,
    pub eval_days: usize,
    pub eval_mistakes: usize,
}

impl KnownConstraintsReport {
    pub fn checks(&self) -> Vec<BoundCheck> {
        vec![
            bounds::ellipsoid_cuts(self.n, self.d, self.bits, self.cuts),
            bounds::none("ellipsoid_containment", self.containment_failures.len()),
            bounds::none("ellipsoid_volume", self.volume_failures.len()),
            bounds::none("ellipsoid_eval_mistakes", self.eval_mistakes),
        ]
    }
}

/// Hidden objective over a pool of known polytopes: `days` training days
/// with cuts on mistakes, then `eval_days` scored days without updates.
pub fn known_constraints(cfg: &RunConfig) -> Result<KnownConstraintsReport> {
    let (n, d, bits) = (cfg.n(), cfg.d(), cfg.bits());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let v = sample_objective(n, d, bits, &mut rng)?;
    let pool = polytope_pool(cfg.pool(), d, cfg.m(), bits, cfg.seed.wrapping_mul(1000))?;
    let mut env = KnownConstraintsEnv::new(v.clone(), pool, cfg.seed ^ 0x5eed)?;
    let mut config = LearnEllipsoidConfig::new(n, d, bits);
    config.bits = cfg.precision_bits()?;
    let mut learner = LearnEllipsoid::new(config)?;
    let dim = n * d;
    let target = v.flat();
    let tolerance = int(1) + rational::ratio(1, 1_000_000_000);
    let header = EpisodeHeader {
        learner: "LearnEllipsoid".into(),
        environment_digest: digest(&v),
        seed: cfg.seed,
        edges: None,
        bound: Some(bounds::ellipsoid_cuts(n, d, bits, 0).bound.parse().expect("integer bound")),
    };
    let mut report = KnownConstraintsReport {
        log: EpisodeLog::new(header),
        n,
        d,
        bits,
        cuts: 0,
        containment_failures: Vec::new(),
        volume_failures: Vec::new(),
        training_days: cfg.days(),
        last_mistake_day: None,
        eval_days: cfg.eval_days(),
        eval_mistakes: 0,
    };
    for t in 1..=cfg.days() + cfg.eval_days() {
        let at = |e: Error| HarnessError::Day { day: t, source: e };
        let (day, truth) = env.sample_day().map_err(at)?;
        let pred = learner.predict(&day).map_err(at)?;
        let input = digest(&day)[..16].to_string();
        if t > cfg.days() {
            if report.log.record(input, pred, truth, Some("eval".into())) {
                report.eval_mistakes += 1;
            }
            continue;
        }
        let cut = learner.observe(&day, &pred, &truth).map_err(at)?;
        let rule = cut.as_ref().map(|_| "cut".to_string());
        if report.log.record(input, pred, truth, rule) {
            report.last_mistake_day = Some(t);
        }
        if let Some(cut) = cut {
            report.cuts += 1;
            if learner.state.quadratic_form(&target).map_err(at)? > tolerance {
                report.containment_failures.push(t);
            }
            if !volume_cut_holds(&cut.det_ratio, dim) {
                report.volume_failures.push(t);
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct FcpReport {
    pub log: EpisodeLog,
    pub class_size: u64,
    /// The hidden hypothesis survived every day's filter.
    pub truth_retained: bool,
}

impl FcpReport {
    pub fn checks(&self) -> Vec<BoundCheck> {
        vec![
            bounds::fcp(self.class_size, EXPECTATION_SLACK, self.log.mistakes() as f64),
            bounds::none("fcp_truth_filtered", usize::from(!self.truth_retained)),
        ]
    }
}

/// Hidden rows for the finite-class runs: an interval for `d = 1`, an
/// unbounded wedge with a unique apex for `d = 2`.
pub fn fcp_truth(cfg: &RunConfig) -> Result<(Vec<(Vector, Rational)>, Vector)> {
    let d = cfg.d();
    let c = Vector::filled(d, int(1));
    if let Some(rows) = &cfg.truth {
        let parsed = rows
            .iter()
            .map(|r| {
                let vals = r.iter().map(|s| rational::decode(s)).collect::<std::result::Result<Vec<_>, _>>()?;
                if vals.len() != d + 1 {
                    return Err(Error::Config(format!("truth row needs {} entries", d + 1)));
                }
                let b = vals[d].clone();
                Ok((Vector::new(vals[..d].to_vec()), b))
            })
            .collect::<std::result::Result<Vec<_>, Error>>()?;
        return Ok((parsed, c));
    }
    match d {
        1 => Ok((vec![(Vector::from_ints(&[1]), rational::ratio(1, 2)), (Vector::from_ints(&[-1]), int(1))], c)),
        2 => Ok((
            vec![
                (Vector::from_ratios(&[(1, 1), (1, 2)]), rational::ratio(1, 2)),
                (Vector::from_ratios(&[(-1, 2), (1, 1)]), rational::ratio(1, 2)),
            ],
            c,
        )),
        _ => Err(HarnessError::Config(format!("no preset truth for d={d}; pass \"truth\" in the config"))),
    }
}

pub fn fcp(cfg: &RunConfig) -> Result<FcpReport> {
    let (rows, c) = fcp_truth(cfg)?;
    let class = enumerate_class(cfg.d(), cfg.m(), cfg.bits(), DEFAULT_CLASS_CAP)?;
    let truth = class
        .index_of(&rows)
        .ok_or_else(|| HarnessError::Config("the hidden rows are not in the hypothesis class".into()))?;
    let mut env = FiniteClassEnv::new(rows, c.clone(), cfg.bits(), cfg.seed ^ 0x5eed)?;
    let days: Vec<(Halfspace, Vector)> = (0..cfg.days()).map(|_| env.next_day()).collect::<std::result::Result<_, _>>()?;
    let class_size = class.size();
    let header = EpisodeHeader {
        learner: "FCP".into(),
        environment_digest: digest(&(env.rows().iter().map(|(a, b)| (a, rational::encode(b))).collect::<Vec<_>>())),
        seed: cfg.seed,
        edges: None,
        bound: None,
    };
    let mut f = Fcp::new(class, c, cfg.seed)?;
    let mut retained = true;
    let log = episode::run(&mut f, header, days, |v| {
        retained &= v.learner.consistent().binary_search(&truth).is_ok();
        Ok(())
    })
    .map_err(day_error)?;
    Ok(FcpReport { log, class_size, truth_retained: retained })
}

#[derive(Clone, Debug)]
pub struct LowerBoundReport {
    pub log: EpisodeLog,
    pub bits: u32,
    pub mistakes: usize,
    /// Re-solving each day against the final polytope.
    pub replay: std::result::Result<(), Error>,
}

impl LowerBoundReport {
    pub fn checks(&self) -> Vec<BoundCheck> {
        vec![bounds::lower_bound(self.bits, self.mistakes), bounds::none("adversary_replay", usize::from(self.replay.is_err()))]
    }
}

/// The adversary's points leave the unit ball and the `2^-N` grid, so the
/// edge learner runs with a wider box and a fine grid here.
pub fn lower_bound_learner(kind: LearnerKind, d: usize, seed: u64) -> Result<Box<dyn OnlineLearner>> {
    let c = adversary_objective(d);
    Ok(match kind {
        LearnerKind::LearnEdge => {
            let mut config = LearnEdgeConfig::new(64);
            config.box_radius = int(4);
            Box::new(LearnEdge::new(c, config))
        }
        LearnerKind::LearnHull => Box::new(LearnHull::new(c)),
        LearnerKind::Greedy => Box::new(Greedy::new(c)),
        LearnerKind::Random => Box::new(RandomGuess::new(d, seed)),
        LearnerKind::LowDim => return Err(HarnessError::Config("the lower bound lives in d >= 3".into())),
    })
}

pub fn lower_bound(cfg: &RunConfig) -> Result<LowerBoundReport> {
    let mut learner = lower_bound_learner(cfg.learner(), cfg.d(), cfg.seed)?;
    let run = run_lower_bound_padded(learner.as_mut(), cfg.bits(), cfg.d())?;
    let mut log = EpisodeLog::new(EpisodeHeader {
        learner: learner.name().into(),
        environment_digest: digest(&run.polytope),
        seed: cfg.seed,
        edges: None,
        bound: Some(cfg.bits() as u64),
    });
    for day in &run.state.transcript {
        let rule = if day.revealed == day.r1 { "reveal-r1" } else { "reveal-r2" };
        log.record(describe_constraint(&day.constraint), day.prediction.clone(), day.revealed.clone(), Some(rule.into()));
    }
    Ok(LowerBoundReport { log, bits: cfg.bits(), mistakes: run.mistakes, replay: run.replay })
}
