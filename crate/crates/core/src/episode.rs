//! Day loop and mistake log for known-objective learners.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::Halfspace;
use crate::learner::{OnlineLearner, Prediction, UpdateReport};
use crate::linalg::Vector;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DayRecord {
    pub day: usize,
    /// The constraint as `normal <= offset`, or a digest of the day's input.
    pub input: String,
    pub prediction: Vector,
    pub truth: Vector,
    pub mistake: bool,
    pub rule_fired: Option<String>,
    pub cumulative_mistakes: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpisodeHeader {
    pub learner: String,
    pub environment_digest: String,
    pub seed: u64,
    pub edges: Option<usize>,
    pub bound: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpisodeLog {
    pub header: EpisodeHeader,
    pub days: Vec<DayRecord>,
}

impl EpisodeLog {
    pub fn new(header: EpisodeHeader) -> Self {
        EpisodeLog { header, days: Vec::new() }
    }

    pub fn mistakes(&self) -> usize {
        self.days.last().map_or(0, |d| d.cumulative_mistakes)
    }

    /// Appends a day and returns whether it was a mistake.
    pub fn record(&mut self, input: String, prediction: Vector, truth: Vector, rule: Option<String>) -> bool {
        let mistake = prediction != truth;
        let cumulative_mistakes = self.mistakes() + usize::from(mistake);
        self.days.push(DayRecord {
            day: self.days.len() + 1,
            input,
            prediction,
            truth,
            mistake,
            rule_fired: rule,
            cumulative_mistakes,
        });
        mistake
    }
}

/// A failed episode: the one-based day, the error and the log so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpisodeFailure {
    pub day: usize,
    pub error: Error,
    pub log: EpisodeLog,
}

impl core::fmt::Display for EpisodeFailure {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "day {}: {}", self.day, self.error)
    }
}

pub fn describe_constraint(h: &Halfspace) -> String {
    format!("{} <= {}", h.normal.to_semicolon_string(), crate::rational::encode(&h.offset))
}

/// What `inspect` sees after each day's update.
pub struct DayView<'a, L> {
    pub day: usize,
    pub constraint: &'a Halfspace,
    pub prediction: &'a Prediction,
    pub truth: &'a Vector,
    pub report: Option<&'a UpdateReport>,
    pub learner: &'a L,
}

/// Runs `learner` over `days`. The rule recorded for a day is the update
/// rule on mistakes and the prediction rule otherwise. `inspect` may veto a
/// day by returning an error, which ends the episode.
pub fn run<L, I, F>(learner: &mut L, header: EpisodeHeader, days: I, mut inspect: F) -> Result<EpisodeLog, EpisodeFailure>
where
    L: OnlineLearner,
    I: IntoIterator<Item = (Halfspace, Vector)>,
    F: FnMut(DayView<'_, L>) -> crate::Result<()>,
{
    let mut log = EpisodeLog::new(header);
    for (i, (h, truth)) in days.into_iter().enumerate() {
        let day = i + 1;
        let fail = |error: Error, log: &EpisodeLog| EpisodeFailure { day, error, log: log.clone() };
        let prediction = learner.predict(&h).map_err(|e| fail(e, &log))?;
        let report = learner.observe(&h, &prediction, &truth).map_err(|e| fail(e, &log))?;
        let rule = if prediction.point != truth {
            report.as_ref().map(|r| r.rule.clone())
        } else {
            None
        }
        .or_else(|| prediction.rule.map(String::from));
        log.record(describe_constraint(&h), prediction.point.clone(), truth.clone(), rule);
        inspect(DayView {
            day,
            constraint: &h,
            prediction: &prediction,
            truth: &truth,
            report: report.as_ref(),
            learner,
        })
        .map_err(|e| fail(e, &log))?;
    }
    Ok(log)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learner::Greedy;

    #[test]
    fn counts_mistakes_cumulatively() {
        let mut g = Greedy::new(Vector::from_ints(&[1]));
        let x = Vector::from_ints(&[1]);
        let h = Halfspace::from_ints(&[1], 1, 1);
        let days = vec![(h.clone(), x.clone()), (h.clone(), x.clone()), (h, Vector::from_ints(&[0]))];
        let log = run(&mut g, EpisodeHeader::default(), days, |_| Ok(())).unwrap();
        let marks: Vec<bool> = log.days.iter().map(|d| d.mistake).collect();
        // Day 3 reveals 0 while greedy still predicts the feasible 1.
        assert_eq!(marks, vec![true, false, true]);
        assert_eq!(log.mistakes(), 2);
        assert_eq!(log.days[1].rule_fired.as_deref(), Some("best-seen"));
    }

    #[test]
    fn inspect_errors_carry_the_day() {
        let mut g = Greedy::new(Vector::from_ints(&[1]));
        let h = Halfspace::from_ints(&[1], 1, 1);
        let days = vec![(h.clone(), Vector::from_ints(&[1])); 3];
        let err = run(&mut g, EpisodeHeader::default(), days, |v| {
            if v.day == 2 {
                Err(Error::Contract("stop".into()))
            } else {
                Ok(())
            }
        })
        .unwrap_err();
        assert_eq!(err.day, 2);
        assert_eq!(err.log.days.len(), 2);
    }

    #[test]
    fn log_round_trips_through_json() {
        let mut log = EpisodeLog::new(EpisodeHeader { learner: "x".into(), ..Default::default() });
        log.record("a".into(), Vector::from_ratios(&[(1, 3)]), Vector::from_ints(&[0]), Some("U1".into()));
        let s = serde_json::to_string(&log).unwrap();
        assert_eq!(serde_json::from_str::<EpisodeLog>(&s).unwrap(), log);
    }
}
