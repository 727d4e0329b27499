//! LearnEllipsoid for the known-constraints problem: the objective on day
//! `t` is `Σ_{i∈S} v^i` for a hidden matrix `V = (v^1, …, v^n)`, and the
//! learner tracks an ellipsoid over flattened candidates `vec(W)`.
//!
//! The state lives on the dyadic grid `2^-bits`. Every intermediate is an
//! exact rational; the only inexact step is the square root in the centre
//! update, which is taken with an integer square root at the working
//! precision. Centre and shape are rounded back to the grid after each cut.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geometry::Polytope;
use crate::linalg::{self, Vector};
use crate::lp::solve_vertex_lp;
use crate::rational::{self, Rational};

/// Default fractional bits of the ellipsoid state.
pub const DEFAULT_PRECISION_BITS: u32 = 128;

/// `V = (v^1, …, v^n)`, each column in `R^d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectiveMatrix {
    pub columns: Vec<Vector>,
}

impl ObjectiveMatrix {
    pub fn new(columns: Vec<Vector>) -> Result<Self> {
        let Some(first) = columns.first() else {
            return Err(Error::Input("objective matrix needs at least one column".into()));
        };
        for c in &columns {
            check_dim(first.dim(), c.dim())?;
        }
        Ok(ObjectiveMatrix { columns })
    }

    /// Splits a flattened `n·d` vector into `n` columns.
    pub fn from_flat(z: &Vector, n: usize) -> Result<Self> {
        if n == 0 || z.dim() % n != 0 {
            return Err(Error::Input(format!("cannot split length {} into {n} columns", z.dim())));
        }
        let d = z.dim() / n;
        Self::new(z.coords().chunks(d).map(|c| Vector::new(c.to_vec())).collect())
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn d(&self) -> usize {
        self.columns[0].dim()
    }

    pub fn flat(&self) -> Vector {
        Vector::new(self.columns.iter().flat_map(|c| c.iter().cloned()).collect())
    }

    pub fn frobenius_sq(&self) -> Rational {
        self.columns.iter().map(|c| c.norm_sq()).sum()
    }

    /// `Σ_{i∈S} v^i`.
    pub fn effective(&self, subset: &BTreeSet<usize>) -> Vector {
        let mut acc = Vector::zeros(self.d());
        for &i in subset {
            acc = acc.add(&self.columns[i]);
        }
        acc
    }
}

/// One day of the known-constraints problem. `subset` holds zero-based
/// column indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownConstraintsDay {
    pub polytope: Polytope,
    pub subset: BTreeSet<usize>,
}

/// `{z : (z - center)ᵀ shape⁻¹ (z - center) <= 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipsoidState {
    pub center: Vector,
    /// Symmetric positive definite, stored by rows.
    pub shape: Vec<Vector>,
    pub cut_count: u64,
    pub bits: u32,
}

impl EllipsoidState {
    /// The ball of radius `radius` about the origin in `R^dim`.
    pub fn ball(dim: usize, radius: &Rational, bits: u32) -> Self {
        let r2 = radius * radius;
        let shape = (0..dim).map(|i| Vector::unit(dim, i).scale(&r2)).collect();
        EllipsoidState { center: Vector::zeros(dim), shape, cut_count: 0, bits }
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    fn shape_times(&self, v: &Vector) -> Vector {
        Vector::new(self.shape.iter().map(|row| row.dot(v)).collect())
    }

    /// `(z - center)ᵀ shape⁻¹ (z - center)`, exactly.
    pub fn quadratic_form(&self, z: &Vector) -> Result<Rational> {
        check_dim(self.dim(), z.dim())?;
        let dz = z.sub(&self.center);
        let y = linalg::solve(&self.shape, dz.coords())
            .ok_or_else(|| Error::Numeric("ellipsoid shape is singular".into()))?;
        Ok(dz.dot(&y))
    }

    pub fn det(&self) -> Rational {
        linalg::det(&self.shape)
    }

    /// Central cut keeping `{z : g · z >= g · center}`.
    pub fn cut(&mut self, g: &Vector) -> Result<()> {
        check_dim(self.dim(), g.dim())?;
        if g.is_zero() {
            return Err(Error::Input("cut direction is zero".into()));
        }
        let dim = self.dim();
        let qg = self.shape_times(g);
        let s = g.dot(&qg);
        if !s.is_positive() {
            return Err(Error::Numeric(format!(
                "gᵀQg = {} is not positive; raise the working precision",
                rational::to_f64(&s)
            )));
        }
        let root = sqrt_at(&s, self.bits);
        if root.is_zero() {
            return Err(Error::Numeric("square root underflowed the working precision".into()));
        }
        let dd = Rational::from_integer(dim.into());
        let one = Rational::one();
        // With a = -g this is center - Qa / ((D+1) sqrt(aᵀQa)).
        let step = qg.scale(&(&one / ((&dd + &one) * &root)));
        let center = self.center.add(&step);

        let shape: Vec<Vector> = if dim == 1 {
            vec![self.shape[0].scale(&rational::ratio(1, 4))]
        } else {
            let grow = &dd * &dd / (&dd * &dd - &one);
            let shrink = rational::int(2) / ((&dd + &one) * &s);
            (0..dim)
                .map(|i| {
                    Vector::new(
                        (0..dim)
                            .map(|j| &grow * (&self.shape[i][j] - &shrink * &qg[i] * &qg[j]))
                            .collect(),
                    )
                })
                .collect()
        };

        self.center = round_vec(&center, self.bits);
        self.shape = symmetrize_round(&shape, self.bits);
        if !positive_definite(&self.shape) {
            return Err(Error::Numeric(format!(
                "shape lost positive definiteness after {} cuts; raise the working precision",
                self.cut_count + 1
            )));
        }
        self.cut_count += 1;
        Ok(())
    }
}

/// `sqrt(s)` rounded down to the `2^-bits` grid.
fn sqrt_at(s: &Rational, bits: u32) -> Rational {
    let scale = Rational::from_integer(rational::pow2(2 * bits));
    let scaled: BigInt = (s * scale).floor().to_integer();
    Rational::new(scaled.sqrt(), rational::pow2(bits))
}

fn round_vec(v: &Vector, bits: u32) -> Vector {
    Vector::new(v.iter().map(|a| rational::round_to_grid(a, bits)).collect())
}

fn symmetrize_round(m: &[Vector], bits: u32) -> Vec<Vector> {
    let n = m.len();
    let half = rational::ratio(1, 2);
    (0..n)
        .map(|i| {
            Vector::new(
                (0..n)
                    .map(|j| rational::round_to_grid(&(&half * (&m[i][j] + &m[j][i])), bits))
                    .collect(),
            )
        })
        .collect()
}

/// Exact `LDLᵀ` pivot test.
pub fn positive_definite(m: &[Vector]) -> bool {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.iter().map(|r| r.coords().to_vec()).collect();
    for k in 0..n {
        let piv = a[k][k].clone();
        if !piv.is_positive() {
            return false;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &piv;
            for j in k..n {
                let s = &f * &a[k][j];
                a[i][j] -= s;
            }
        }
    }
    true
}

/// The volume guarantee of one central cut, `det(Q')/det(Q) <= e^(-1/(D+1))`,
/// checked as `ratio^(D+1) <= 1/e` with a `1e-9` allowance for rounding.
pub fn volume_cut_holds(det_ratio: &Rational, dim: usize) -> bool {
    let inv_e = rational::ratio(367_879_441_171, 1_000_000_000_000);
    let mut p = Rational::one();
    for _ in 0..=dim {
        p *= det_ratio;
    }
    p <= inv_e + rational::ratio(1, 1_000_000_000)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnEllipsoidConfig {
    pub n: usize,
    pub d: usize,
    pub bits: u32,
    /// Abort with a diagnostic after this many cuts.
    pub cut_budget: Option<u64>,
}

impl LearnEllipsoidConfig {
    /// Budget `10 D² (N + log2 D)` for entry precision `entry_bits`.
    pub fn new(n: usize, d: usize, entry_bits: u32) -> Self {
        LearnEllipsoidConfig {
            n,
            d,
            bits: DEFAULT_PRECISION_BITS,
            cut_budget: Some(default_cut_budget(n * d, entry_bits)),
        }
    }
}

/// `10 D² (N + log2 D)`, with `log2 D` rounded up.
pub fn default_cut_budget(dim: usize, entry_bits: u32) -> u64 {
    let log_d = rational::ceil_log2(&rational::int(dim as i64)).max(0) as u64;
    10 * (dim * dim) as u64 * (entry_bits as u64 + log_d)
}

/// What a mistake-driven cut did.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutReport {
    pub g: Vector,
    /// `det(Q') / det(Q)`.
    #[serde(with = "rational::serde_rational")]
    pub det_ratio: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnEllipsoid {
    pub config: LearnEllipsoidConfig,
    pub state: EllipsoidState,
}

impl LearnEllipsoid {
    pub fn new(config: LearnEllipsoidConfig) -> Result<Self> {
        if config.n == 0 || config.d == 0 {
            return Err(Error::Config("n and d must be positive".into()));
        }
        let state = EllipsoidState::ball(config.n * config.d, &rational::int(2), config.bits);
        Ok(LearnEllipsoid { config, state })
    }

    /// The centroid as an objective matrix.
    pub fn centroid(&self) -> ObjectiveMatrix {
        ObjectiveMatrix::from_flat(&self.state.center, self.config.n).expect("shape fixed at construction")
    }

    /// Vertex maximizing `Σ_{i∈S} w^i` for the current centroid `W`.
    pub fn predict(&self, day: &KnownConstraintsDay) -> Result<Vector> {
        self.check_day(day)?;
        let c_hat = self.centroid().effective(&day.subset);
        Ok(solve_vertex_lp(&day.polytope, &c_hat)?.point)
    }

    fn check_day(&self, day: &KnownConstraintsDay) -> Result<()> {
        check_dim(self.config.d, day.polytope.dim())?;
        if day.subset.is_empty() || day.subset.iter().any(|&i| i >= self.config.n) {
            return Err(Error::Input(format!("subset {:?} is not a nonempty subset of 0..{}", day.subset, self.config.n)));
        }
        Ok(())
    }

    /// Cuts on a mistake. Returns `None` when the prediction was right.
    pub fn observe(
        &mut self,
        day: &KnownConstraintsDay,
        predicted: &Vector,
        observed: &Vector,
    ) -> Result<Option<CutReport>> {
        self.check_day(day)?;
        if predicted == observed {
            return Ok(None);
        }
        let g = separation_from_mistake(self.config.n, &day.subset, predicted, observed)?;
        if g.dot(&self.state.center).is_positive() {
            return Err(Error::Invariant {
                message: "separating direction does not cut off the centroid".into(),
                state: format!("{self:?}"),
            });
        }
        if let Some(budget) = self.config.cut_budget {
            if self.state.cut_count >= budget {
                return Err(Error::Numeric(format!(
                    "cut budget {budget} exhausted; raise the working precision or the budget"
                )));
            }
        }
        let before = self.state.det();
        self.state.cut(&g)?;
        let after = self.state.det();
        Ok(Some(CutReport { g, det_ratio: after / before }))
    }
}

/// Block `i` is `observed - predicted` for `i ∈ S`, zero elsewhere. The
/// hidden `vec(V)` has positive inner product with it.
pub fn separation_from_mistake(
    n: usize,
    subset: &BTreeSet<usize>,
    predicted: &Vector,
    observed: &Vector,
) -> Result<Vector> {
    check_dim(predicted.dim(), observed.dim())?;
    if predicted == observed {
        return Err(Error::Input("no separating direction without a mistake".into()));
    }
    let diff = observed.sub(predicted);
    let zero = Vector::zeros(diff.dim());
    let mut out = Vec::with_capacity(n * diff.dim());
    for i in 0..n {
        let block = if subset.contains(&i) { &diff } else { &zero };
        out.extend(block.iter().cloned());
    }
    Ok(Vector::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::enumerate_vertices;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn one_dimensional_cut_halves_segment() {
        let mut e = EllipsoidState::ball(1, &int(2), 64);
        e.cut(&Vector::from_ints(&[1])).unwrap();
        assert_eq!(e.center, Vector::from_ints(&[1]));
        assert_eq!(e.shape, vec![Vector::from_ints(&[1])]);
    }

    #[test]
    fn disk_cut_matches_closed_form() {
        let mut e = EllipsoidState::ball(2, &int(1), 64);
        e.cut(&Vector::from_ints(&[1, 0])).unwrap();
        // D = 2: centre 1/(D+1) along the axis; shape D²/(D²-1) (I - 2/(D+1) e eᵀ).
        assert_eq!(e.center, round_vec(&Vector::from_ratios(&[(1, 3), (0, 1)]), 64));
        let want = [Vector::from_ratios(&[(4, 9), (0, 1)]), Vector::from_ratios(&[(0, 1), (4, 3)])];
        assert_eq!(e.shape, want.iter().map(|r| round_vec(r, 64)).collect::<Vec<_>>());
    }

    #[test]
    fn separation_blocks() {
        let g = separation_from_mistake(1, &set(&[0]), &Vector::from_ints(&[1, -1]), &Vector::from_ints(&[1, 1])).unwrap();
        assert_eq!(g, Vector::from_ints(&[0, 2]));
        let g = separation_from_mistake(2, &set(&[1]), &Vector::from_ints(&[1, 0]), &Vector::from_ints(&[0, 1])).unwrap();
        assert_eq!(g, Vector::from_ints(&[0, 0, -1, 1]));
    }

    #[test]
    fn day_one_predicts_lexicographic_vertex() {
        let l = LearnEllipsoid::new(LearnEllipsoidConfig::new(1, 2, 3)).unwrap();
        let day = KnownConstraintsDay { polytope: Polytope::cube(2, int(1)), subset: set(&[0]) };
        assert_eq!(l.predict(&day).unwrap(), Vector::from_ints(&[-1, -1]));
    }

    #[test]
    fn known_centroid_picks_corner() {
        let mut l = LearnEllipsoid::new(LearnEllipsoidConfig::new(1, 2, 3)).unwrap();
        l.state.center = Vector::from_ints(&[1, 1]);
        let day = KnownConstraintsDay { polytope: Polytope::cube(2, int(1)), subset: set(&[0]) };
        assert_eq!(l.predict(&day).unwrap(), Vector::from_ints(&[1, 1]));
    }

    #[test]
    fn pd_check() {
        assert!(positive_definite(&[Vector::from_ints(&[2, 1]), Vector::from_ints(&[1, 2])]));
        assert!(!positive_definite(&[Vector::from_ints(&[1, 2]), Vector::from_ints(&[2, 1])]));
    }

    #[test]
    fn budget_formula() {
        // D = 4, N = 3: 10 · 16 · (3 + 2).
        assert_eq!(default_cut_budget(4, 3), 800);
    }

    fn grid_entry() -> impl Strategy<Value = Rational> {
        (-8i64..=8).prop_map(|k| ratio(k, 16))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn prediction_matches_vertex_scan(
            w in prop::collection::vec(grid_entry(), 4),
            mask in 1usize..4,
        ) {
            let mut l = LearnEllipsoid::new(LearnEllipsoidConfig::new(2, 2, 3)).unwrap();
            l.state.center = Vector::new(w);
            let poly = Polytope::new(2, vec![
                crate::geometry::Halfspace::from_ints(&[-1, 0], 0, 1),
                crate::geometry::Halfspace::from_ints(&[0, -1], 0, 1),
                crate::geometry::Halfspace::from_ints(&[2, 1], 1, 1),
                crate::geometry::Halfspace::from_ints(&[1, 3], 1, 1),
            ]).unwrap();
            let subset: BTreeSet<usize> = (0..2).filter(|i| mask >> i & 1 == 1).collect();
            let c = l.centroid().effective(&subset);
            let day = KnownConstraintsDay { polytope: poly.clone(), subset };
            let verts = enumerate_vertices(&poly).unwrap();
            let top = verts.iter().map(|v| c.dot(v)).max().unwrap();
            let want = verts.iter().filter(|v| c.dot(v) == top).min().unwrap().clone();
            prop_assert_eq!(l.predict(&day).unwrap(), want);
        }

        #[test]
        fn cuts_keep_a_point_on_the_kept_side(
            v in prop::collection::vec(grid_entry(), 3),
            gs in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 1..12),
        ) {
            let target = Vector::new(v);
            let mut e = EllipsoidState::ball(3, &int(2), 96);
            for g in gs {
                let mut g = Vector::from_ints(&g);
                if g.is_zero() {
                    continue;
                }
                // Orient the cut so the target is kept, as a mistake would.
                if g.dot(&target) < g.dot(&e.center) {
                    g = g.neg();
                }
                let before = e.det();
                e.cut(&g).unwrap();
                let q = e.quadratic_form(&target).unwrap();
                prop_assert!(q <= int(1) + ratio(1, 1_000_000_000));
                prop_assert!(volume_cut_holds(&(e.det() / before), 3));
            }
        }
    }
}
