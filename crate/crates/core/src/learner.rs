//! The interface shared by known-objective learners, plus two baselines.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{EdgeSpace, Halfspace};
use crate::linalg::Vector;
use crate::rational::{self, Rational};

/// A predicted optimum and the rule that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub point: Vector,
    pub rule: Option<&'static str>,
}

impl Prediction {
    pub fn new(point: Vector, rule: &'static str) -> Self {
        Prediction { point, rule: Some(rule) }
    }
}

/// What an update did. Fields other than `rule` are filled by the learners
/// that have something to say about them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateReport {
    pub rule: String,
    /// Grid point certified as a vertex.
    pub elim: Option<Vector>,
    /// Squared length of the questionable interval that shrank, before and
    /// after a non-certifying interval update.
    #[serde(with = "pair_opt")]
    pub progress: Option<(Rational, Rational)>,
    pub new_edge: Option<EdgeSpace>,
}

impl UpdateReport {
    pub fn rule(rule: &str) -> Self {
        UpdateReport { rule: rule.into(), ..Default::default() }
    }

    /// True when the interval at least halved (squared length at most a quarter).
    pub fn halved(&self) -> Option<bool> {
        self.progress
            .as_ref()
            .map(|(before, after)| after * rational::int(4) <= *before)
    }
}

mod pair_opt {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &Option<(Rational, Rational)>,
        s: S,
    ) -> core::result::Result<S::Ok, S::Error> {
        v.as_ref()
            .map(|(a, b)| (rational::encode(a), rational::encode(b)))
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> core::result::Result<Option<(Rational, Rational)>, D::Error> {
        let raw = Option::<(String, String)>::deserialize(d)?;
        raw.map(|(a, b)| {
            Ok((
                rational::decode(&a).map_err(serde::de::Error::custom)?,
                rational::decode(&b).map_err(serde::de::Error::custom)?,
            ))
        })
        .transpose()
    }
}

/// A learner for the known-objective setting: one daily constraint in, one
/// predicted point out, then the true optimum is revealed.
pub trait OnlineLearner {
    fn name(&self) -> &str;

    fn predict(&mut self, constraint: &Halfspace) -> Result<Prediction>;

    /// Called every day with the revealed optimum. Learners that only learn
    /// from mistakes ignore days where `prediction.point == observed`.
    fn observe(
        &mut self,
        constraint: &Halfspace,
        prediction: &Prediction,
        observed: &Vector,
    ) -> Result<Option<UpdateReport>>;
}

/// `(k, k, ..., k)` for the smallest `k >= 2` not in `avoid`. Outside the
/// unit ball, so never a true optimum of a valid instance.
pub fn sentinel<'a>(d: usize, avoid: impl IntoIterator<Item = &'a Vector>) -> Vector {
    let avoid: BTreeSet<&Vector> = avoid.into_iter().collect();
    let mut k = 2;
    loop {
        let p = Vector::filled(d, rational::int(k));
        if !avoid.contains(&p) {
            return p;
        }
        k += 1;
    }
}

/// Predicts the best previously revealed point that satisfies today's
/// constraint.
#[derive(Clone, Debug)]
pub struct Greedy {
    c: Vector,
    seen: BTreeSet<Vector>,
}

impl Greedy {
    pub fn new(c: Vector) -> Self {
        Greedy { c, seen: BTreeSet::new() }
    }
}

impl OnlineLearner for Greedy {
    fn name(&self) -> &str {
        "greedy"
    }

    fn predict(&mut self, constraint: &Halfspace) -> Result<Prediction> {
        let mut best: Option<(&Vector, Rational)> = None;
        for x in self.seen.iter().filter(|x| constraint.contains(x)) {
            let v = self.c.dot(x);
            if best.as_ref().map_or(true, |(_, b)| v > *b) {
                best = Some((x, v));
            }
        }
        Ok(match best {
            Some((x, _)) => Prediction::new(x.clone(), "best-seen"),
            None => Prediction::new(sentinel(self.c.dim(), []), "sentinel"),
        })
    }

    fn observe(&mut self, _: &Halfspace, _: &Prediction, observed: &Vector) -> Result<Option<UpdateReport>> {
        self.seen.insert(observed.clone());
        Ok(None)
    }
}

/// Picks uniformly among every revealed point and the sentinel.
#[derive(Clone, Debug)]
pub struct RandomGuess {
    d: usize,
    seen: Vec<Vector>,
    rng: ChaCha8Rng,
}

impl RandomGuess {
    pub fn new(d: usize, seed: u64) -> Self {
        RandomGuess { d, seen: Vec::new(), rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl OnlineLearner for RandomGuess {
    fn name(&self) -> &str {
        "random"
    }

    fn predict(&mut self, _: &Halfspace) -> Result<Prediction> {
        let k = self.rng.gen_range(0..=self.seen.len());
        Ok(match self.seen.get(k) {
            Some(x) => Prediction::new(x.clone(), "random-seen"),
            None => Prediction::new(sentinel(self.d, []), "sentinel"),
        })
    }

    fn observe(&mut self, _: &Halfspace, _: &Prediction, observed: &Vector) -> Result<Option<UpdateReport>> {
        if !self.seen.contains(observed) {
            self.seen.push(observed.clone());
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentinel_steps_past_collisions() {
        let two = Vector::from_ints(&[2, 2]);
        assert_eq!(sentinel(2, []), two);
        assert_eq!(sentinel(2, [&two]), Vector::from_ints(&[3, 3]));
    }

    #[test]
    fn greedy_uses_feasible_history() {
        let mut g = Greedy::new(Vector::from_ints(&[1, 0]));
        let h = Halfspace::from_ints(&[1, 0], 1, 2);
        assert_eq!(g.predict(&h).unwrap().rule, Some("sentinel"));
        let p = g.predict(&h).unwrap();
        g.observe(&h, &p, &Vector::from_ints(&[0, 0])).unwrap();
        g.observe(&h, &p, &Vector::from_ints(&[1, 0])).unwrap();
        assert_eq!(g.predict(&h).unwrap().point, Vector::from_ints(&[0, 0]));
    }

    #[test]
    fn halving_check() {
        let mut r = UpdateReport::rule("U3");
        r.progress = Some((rational::int(4), rational::int(1)));
        assert_eq!(r.halved(), Some(true));
        r.progress = Some((rational::int(4), rational::int(2)));
        assert_eq!(r.halved(), Some(false));
    }
}
