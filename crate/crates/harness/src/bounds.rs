//! Mistake and cut bounds as explicit desk-scale inequalities.

use std::collections::BTreeMap;

use revealed_lp_core::ellipsoid::default_cut_budget;
use revealed_lp_core::learn_edge::{ceil_log2_two_sqrt, mistake_bound};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub inputs: BTreeMap<String, String>,
    pub bound: String,
    pub observed: String,
    pub passed: bool,
}

impl BoundCheck {
    fn new(name: &str, inputs: &[(&str, String)], bound: String, observed: String, passed: bool) -> Self {
        BoundCheck {
            name: name.into(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            bound,
            observed,
            passed,
        }
    }

    pub fn line(&self) -> String {
        let inputs: Vec<String> = self.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let inputs = if inputs.is_empty() { String::new() } else { format!(" [{}]", inputs.join(" ")) };
        format!(
            "{}{} observed {} vs bound {}: {}",
            self.name,
            inputs,
            self.observed,
            self.bound,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

/// A count of violations that must be zero.
pub fn none(name: &str, violations: usize) -> BoundCheck {
    BoundCheck::new(name, &[], "= 0".into(), violations.to_string(), violations == 0)
}

/// `1 + 3|E| + 2|E| (N + ceil log2(2 sqrt d) + 2)`.
pub fn learn_edge(edges: usize, bits: u32, d: usize, mistakes: usize) -> BoundCheck {
    let b = mistake_bound(edges, bits, d);
    BoundCheck::new(
        "learn_edge_ledger",
        &[("E", edges.to_string()), ("N", bits.to_string()), ("d", d.to_string()), ("log", ceil_log2_two_sqrt(d).to_string())],
        b.to_string(),
        mistakes.to_string(),
        mistakes as u64 <= b,
    )
}

/// `2|E| (ln T + 1)` is a bound on expected mistakes; `slack` scales it.
pub fn learn_hull_value(edges: usize, days: usize) -> f64 {
    2.0 * edges as f64 * ((days as f64).ln() + 1.0)
}

pub fn learn_hull(edges: usize, days: usize, slack: f64, mistakes: f64) -> BoundCheck {
    let b = slack * learn_hull_value(edges, days);
    BoundCheck::new(
        "learn_hull_expected",
        &[("E", edges.to_string()), ("T", days.to_string()), ("slack", slack.to_string())],
        format!("{b:.3}"),
        format!("{mistakes:.3}"),
        mistakes <= b,
    )
}

/// `3m + 1` for the two-dimensional learner.
pub fn low_dim(m: usize, mistakes: usize) -> BoundCheck {
    BoundCheck::new("low_dim", &[("m", m.to_string())], (3 * m + 1).to_string(), mistakes.to_string(), mistakes <= 3 * m + 1)
}

/// `10 D² (N + ceil log2 D)` cuts with `D = n d`.
pub fn ellipsoid_cuts(n: usize, d: usize, bits: u32, cuts: u64) -> BoundCheck {
    let b = default_cut_budget(n * d, bits);
    BoundCheck::new(
        "ellipsoid_cuts",
        &[("n", n.to_string()), ("d", d.to_string()), ("N", bits.to_string())],
        b.to_string(),
        cuts.to_string(),
        cuts <= b,
    )
}

/// `slack · ln |K|` on (mean) mistakes.
pub fn fcp(class_size: u64, slack: f64, mistakes: f64) -> BoundCheck {
    let b = slack * (class_size as f64).ln();
    BoundCheck::new(
        "fcp_halving",
        &[("K", class_size.to_string()), ("slack", slack.to_string())],
        format!("{b:.3}"),
        format!("{mistakes:.3}"),
        mistakes <= b,
    )
}

/// The adversary forces a mistake on every one of its `N` days.
pub fn lower_bound(bits: u32, mistakes: usize) -> BoundCheck {
    BoundCheck::new("lower_bound", &[("N", bits.to_string())], format!("= {bits}"), mistakes.to_string(), mistakes == bits as usize)
}
