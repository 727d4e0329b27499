use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::simplex::{Outcome, Relation, StandardLp};
use crate::geometry::{Halfspace, Hyperplane};
use crate::linalg::Vector;
use crate::rational::{self, Rational};

/// Optimum of a linear objective over a clipped convex hull.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullOptimum {
    pub point: Vector,
    #[serde(with = "rational::serde_rational")]
    pub value: Rational,
}

/// Decides `q ∈ Conv(points)` with a weights LP. When `q` is outside,
/// also returns a hyperplane `a · x = β` with `a · q > β >= a · p` for every
/// generator `p`, where `|a_j| <= 1`.
pub fn hull_membership(points: &[Vector], q: &Vector) -> (bool, Option<Hyperplane>) {
    assert!(!points.is_empty(), "hull of no points");
    if points.contains(q) {
        return (true, None);
    }
    let n = points.len();
    let d = q.dim();
    let mut lp = StandardLp::new(n);
    lp.push(vec![Rational::one(); n], Relation::Eq, Rational::one());
    for j in 0..d {
        lp.push(points.iter().map(|p| p[j].clone()).collect(), Relation::Eq, q[j].clone());
    }
    if lp.maximize().is_feasible() {
        return (true, None);
    }
    (false, Some(separator(points, q)))
}

/// Maximizes `a · q - β` over `a · p_i <= β`, `-1 <= a_j <= 1`.
fn separator(points: &[Vector], q: &Vector) -> Hyperplane {
    let d = q.dim();
    // Variables: a⁺ (d), a⁻ (d), β⁺, β⁻.
    let nv = 2 * d + 2;
    let mut lp = StandardLp::new(nv);
    for j in 0..d {
        lp.objective[j] = q[j].clone();
        lp.objective[d + j] = -q[j].clone();
    }
    lp.objective[2 * d] = -Rational::one();
    lp.objective[2 * d + 1] = Rational::one();
    for p in points {
        let mut row = vec![Rational::zero(); nv];
        for j in 0..d {
            row[j] = p[j].clone();
            row[d + j] = -p[j].clone();
        }
        row[2 * d] = -Rational::one();
        row[2 * d + 1] = Rational::one();
        lp.push(row, Relation::Le, Rational::zero());
    }
    for j in 0..2 * d {
        let mut row = vec![Rational::zero(); nv];
        row[j] = Rational::one();
        lp.push(row, Relation::Le, Rational::one());
    }
    let Outcome::Optimal { y, .. } = lp.maximize() else {
        unreachable!("separator LP is feasible and bounded");
    };
    let a = Vector((0..d).map(|j| &y[j] - &y[d + j]).collect());
    let beta = points.iter().map(|p| a.dot(p)).max().expect("nonempty");
    Hyperplane { normal: a, offset: beta }
}

/// `argmax c · x` over `Conv(points) ∩ extra`, lexicographically smallest
/// among maximizers. `None` when the clipped hull is empty.
///
/// The weights LP has two rows, so its vertices mix at most two generators:
/// every vertex of the clipped hull is a generator satisfying `extra` or the
/// crossing of `extra`'s boundary by a segment between a generator strictly
/// inside and one strictly outside. The lex-min maximizer is a vertex of the
/// optimal face, hence one of these.
pub fn maximize_over_hull(points: &[Vector], extra: &Halfspace, c: &Vector) -> Option<HullOptimum> {
    let slack: Vec<Rational> = points.iter().map(|p| extra.slack(p)).collect();
    let mut cands: Vec<Vector> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if !slack[i].is_negative() {
            cands.push(p.clone());
        }
    }
    for (i, p) in points.iter().enumerate() {
        if !slack[i].is_positive() {
            continue;
        }
        for (j, q) in points.iter().enumerate() {
            if slack[j].is_negative() {
                // p + t (q - p) with slack zero: t = s_p / (s_p - s_q).
                let t = &slack[i] / (&slack[i] - &slack[j]);
                cands.push(p.along(&q.sub(p), &t));
            }
        }
    }
    let mut best: Option<HullOptimum> = None;
    for x in cands {
        let v = c.dot(&x);
        let better = match &best {
            None => true,
            Some(b) => v > b.value || (v == b.value && x < b.point),
        };
        if better {
            best = Some(HullOptimum { point: x, value: v });
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn tri() -> Vec<Vector> {
        vec![Vector::from_ints(&[0, 0]), Vector::from_ints(&[1, 0]), Vector::from_ints(&[0, 1])]
    }

    #[test]
    fn membership_inside_and_out() {
        assert_eq!(hull_membership(&tri(), &Vector::from_ratios(&[(1, 4), (1, 4)])), (true, None));
        let (inside, sep) = hull_membership(&tri(), &Vector::from_ints(&[1, 1]));
        assert!(!inside);
        let h = sep.unwrap();
        assert!(h.normal.dot(&Vector::from_ints(&[1, 1])) > h.offset);
        for p in tri() {
            assert!(h.normal.dot(&p) <= h.offset);
        }
    }

    #[test]
    fn clipped_square() {
        let sq: Vec<Vector> =
            [[-1, -1], [-1, 1], [1, -1], [1, 1]].iter().map(|c| Vector::from_ints(c)).collect();
        let cut = Halfspace::from_ints(&[1, 1], 0, 1);
        let opt = maximize_over_hull(&sq, &cut, &Vector::from_ints(&[1, 1])).unwrap();
        assert_eq!(opt.value, int(0));
        assert_eq!(opt.point, Vector::from_ints(&[-1, 1]));
        let cut = Halfspace::from_ints(&[1, 0], 0, 1);
        let opt = maximize_over_hull(&sq, &cut, &Vector::from_ints(&[1, 1])).unwrap();
        assert_eq!(opt.point, Vector::from_ints(&[0, 1]));
    }

    #[test]
    fn singleton_and_empty() {
        let one = vec![Vector::from_ints(&[0, 0])];
        let cut = Halfspace::from_ints(&[1, 0], 1, 1);
        let opt = maximize_over_hull(&one, &cut, &Vector::from_ints(&[3, -2])).unwrap();
        assert_eq!(opt.point, Vector::from_ints(&[0, 0]));
        let away = Halfspace::from_ints(&[1, 0], -1, 1);
        assert_eq!(maximize_over_hull(&one, &away, &Vector::from_ints(&[1, 0])), None);
        assert_eq!(maximize_over_hull(&[], &away, &Vector::from_ints(&[1, 0])), None);
    }

    /// Weights LP: maximize `c`, then fix the value and minimize each
    /// coordinate in turn.
    fn hull_lp(points: &[Vector], extra: &Halfspace, c: &Vector) -> Option<HullOptimum> {
        let n = points.len();
        if n == 0 {
            return None;
        }
        let values: Vec<Rational> = points.iter().map(|p| c.dot(p)).collect();
        let mut lp = StandardLp::new(n);
        lp.push(vec![Rational::one(); n], Relation::Eq, Rational::one());
        lp.push(points.iter().map(|p| extra.normal.dot(p)).collect(), Relation::Le, extra.offset.clone());
        lp.objective = values.clone();
        let Outcome::Optimal { value, .. } = lp.maximize() else {
            return None;
        };
        lp.push(values, Relation::Eq, value.clone());
        let mut point = Vec::new();
        for j in 0..c.dim() {
            let coord: Vec<Rational> = points.iter().map(|p| p[j].clone()).collect();
            lp.objective = coord.iter().map(|a| -a).collect();
            let Outcome::Optimal { value: neg, .. } = lp.maximize() else { unreachable!() };
            lp.push(coord, Relation::Eq, -neg.clone());
            point.push(-neg);
        }
        Some(HullOptimum { point: Vector(point), value })
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-8i64..=8).prop_map(|k| ratio(k, 4))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn candidates_match_weights_lp(
            pts in proptest::collection::vec(proptest::collection::vec(small(), 2), 1..7),
            a in proptest::collection::vec(-3i64..=3, 2),
            b in -4i64..=4,
            c in proptest::collection::vec(-3i64..=3, 2),
        ) {
            prop_assume!(a.iter().any(|&x| x != 0));
            let pts: Vec<Vector> = pts.into_iter().map(Vector).collect();
            let h = Halfspace::from_ints(&a, b, 2);
            let c = Vector::from_ints(&c);
            prop_assert_eq!(maximize_over_hull(&pts, &h, &c), hull_lp(&pts, &h, &c));
        }
    }
}
