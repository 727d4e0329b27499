//! Halfspaces, polytopes, lines and the precision grid.

mod edges;
mod validate;
mod vertices;

pub use edges::enumerate_edges;
pub use validate::{validate_assumptions, Assumption, AssumptionCheck, ValidationReport, Witness};
pub use vertices::{enumerate_vertices, vertex_candidates, VertexInfo};

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, Vector};
use crate::rational::{self, Rational};

/// `normal · x <= offset`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRow", into = "RawRow")]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: Rational,
}

/// `normal · x = offset`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRow", into = "RawRow")]
pub struct Hyperplane {
    pub normal: Vector,
    pub offset: Rational,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawRow {
    a: Vector,
    #[serde(with = "rational::serde_rational")]
    b: Rational,
}

impl TryFrom<RawRow> for Halfspace {
    type Error = Error;
    fn try_from(r: RawRow) -> Result<Self> {
        Halfspace::new(r.a, r.b)
    }
}

impl From<Halfspace> for RawRow {
    fn from(h: Halfspace) -> Self {
        RawRow { a: h.normal, b: h.offset }
    }
}

impl TryFrom<RawRow> for Hyperplane {
    type Error = Error;
    fn try_from(r: RawRow) -> Result<Self> {
        Hyperplane::new(r.a, r.b)
    }
}

impl From<Hyperplane> for RawRow {
    fn from(h: Hyperplane) -> Self {
        RawRow { a: h.normal, b: h.offset }
    }
}

impl Halfspace {
    pub fn new(normal: Vector, offset: Rational) -> Result<Self> {
        if normal.is_zero() {
            return Err(Error::Input("halfspace normal is the zero vector".into()));
        }
        Ok(Halfspace { normal, offset })
    }

    /// Shorthand for tests and examples: integer normal, `num/den` offset.
    pub fn from_ints(normal: &[i64], num: i64, den: i64) -> Self {
        Halfspace::new(Vector::from_ints(normal), rational::ratio(num, den))
            .expect("nonzero normal")
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// `offset - normal · x`; nonnegative iff `x` satisfies the halfspace.
    pub fn slack(&self, x: &Vector) -> Rational {
        &self.offset - self.normal.dot(x)
    }

    pub fn contains(&self, x: &Vector) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn is_tight(&self, x: &Vector) -> bool {
        self.slack(x).is_zero()
    }

    pub fn boundary(&self) -> Hyperplane {
        Hyperplane { normal: self.normal.clone(), offset: self.offset.clone() }
    }
}

impl Hyperplane {
    pub fn new(normal: Vector, offset: Rational) -> Result<Self> {
        if normal.is_zero() {
            return Err(Error::Input("hyperplane normal is the zero vector".into()));
        }
        Ok(Hyperplane { normal, offset })
    }

    pub fn contains(&self, x: &Vector) -> bool {
        self.normal.dot(x) == self.offset
    }
}

impl fmt::Display for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} . x <= {}", self.normal, self.offset)
    }
}

/// `{x : A x <= b}` in dimension `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPolytope")]
pub struct Polytope {
    d: usize,
    halfspaces: Vec<Halfspace>,
}

#[derive(Deserialize)]
struct RawPolytope {
    d: usize,
    halfspaces: Vec<Halfspace>,
}

impl TryFrom<RawPolytope> for Polytope {
    type Error = Error;
    fn try_from(r: RawPolytope) -> Result<Self> {
        Polytope::new(r.d, r.halfspaces)
    }
}

impl Polytope {
    pub fn new(d: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Input("dimension must be at least 1".into()));
        }
        for h in &halfspaces {
            check_dim(d, h.dim())?;
        }
        Ok(Polytope { d, halfspaces })
    }

    /// `{x : |x_i| <= r}`.
    pub fn cube(d: usize, r: Rational) -> Self {
        let mut hs = Vec::with_capacity(2 * d);
        for i in 0..d {
            let e = Vector::unit(d, i);
            hs.push(Halfspace { normal: e.clone(), offset: r.clone() });
            hs.push(Halfspace { normal: e.neg(), offset: r.clone() });
        }
        Polytope { d, halfspaces: hs }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    /// The same polytope with one more constraint appended.
    pub fn with(&self, extra: &Halfspace) -> Result<Polytope> {
        check_dim(self.d, extra.dim())?;
        let mut hs = self.halfspaces.clone();
        hs.push(extra.clone());
        Ok(Polytope { d: self.d, halfspaces: hs })
    }

    pub fn contains(&self, x: &Vector) -> bool {
        x.dim() == self.d && self.halfspaces.iter().all(|h| h.contains(x))
    }

    /// Indices of the constraints tight at `x`.
    pub fn binding(&self, x: &Vector) -> Vec<usize> {
        (0..self.m()).filter(|&i| self.halfspaces[i].is_tight(x)).collect()
    }

    pub fn normals(&self) -> Vec<Vector> {
        self.halfspaces.iter().map(|h| h.normal.clone()).collect()
    }

    /// True when `x` is feasible and tight for at least one constraint.
    pub fn on_boundary(&self, x: &Vector) -> bool {
        self.contains(x) && self.halfspaces.iter().any(|h| h.is_tight(x))
    }

    pub fn scaled(&self, k: &Rational) -> Polytope {
        let hs = self
            .halfspaces
            .iter()
            .map(|h| Halfspace { normal: h.normal.clone(), offset: &h.offset * k })
            .collect();
        Polytope { d: self.d, halfspaces: hs }
    }
}

/// A line `{base + t * direction}` in canonical form: the first nonzero
/// coordinate of `direction` is 1 and `base` is orthogonal to `direction`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeSpace {
    pub base: Vector,
    pub direction: Vector,
}

/// Where a line meets a hyperplane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineHit {
    /// Parallel and disjoint.
    Miss,
    /// The whole line lies in the hyperplane.
    Contained,
    At(Rational),
}

impl EdgeSpace {
    pub fn new(point: &Vector, direction: &Vector) -> Result<Self> {
        check_dim(point.dim(), direction.dim())?;
        let Some(lead) = direction.iter().find(|a| !a.is_zero()) else {
            return Err(Error::Input("line direction is the zero vector".into()));
        };
        let dir = direction.scale(&lead.recip());
        let t = point.dot(&dir) / dir.norm_sq();
        let base = point.along(&dir, &-t);
        Ok(EdgeSpace { base, direction: dir })
    }

    pub fn through(p: &Vector, q: &Vector) -> Result<Self> {
        if p == q {
            return Err(Error::Input("a line needs two distinct points".into()));
        }
        Self::new(p, &q.sub(p))
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn point(&self, t: &Rational) -> Vector {
        self.base.along(&self.direction, t)
    }

    fn lead(&self) -> usize {
        self.direction.iter().position(|a| !a.is_zero()).expect("nonzero direction")
    }

    /// Parameter of `x` on the line, or `None` when `x` is off the line.
    pub fn param_of(&self, x: &Vector) -> Option<Rational> {
        if x.dim() != self.dim() {
            return None;
        }
        let k = self.lead();
        let t = (&x[k] - &self.base[k]) / &self.direction[k];
        (self.point(&t) == *x).then_some(t)
    }

    pub fn contains(&self, x: &Vector) -> bool {
        self.param_of(x).is_some()
    }

    pub fn intersect(&self, h: &Hyperplane) -> LineHit {
        let rate = h.normal.dot(&self.direction);
        let gap = &h.offset - h.normal.dot(&self.base);
        if rate.is_zero() {
            if gap.is_zero() {
                LineHit::Contained
            } else {
                LineHit::Miss
            }
        } else {
            LineHit::At(gap / rate)
        }
    }

    /// Squared Euclidean length of the parameter interval `[lo, hi]`.
    pub fn length_sq(&self, lo: &Rational, hi: &Rational) -> Rational {
        let dt = hi - lo;
        &dt * &dt * self.direction.norm_sq()
    }
}

impl fmt::Display for EdgeSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + t{}", self.base, self.direction)
    }
}

/// The segment of an edge-space lying in a polytope.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub space: EdgeSpace,
    #[serde(with = "rational::serde_rational")]
    pub lo: Rational,
    #[serde(with = "rational::serde_rational")]
    pub hi: Rational,
}

impl Edge {
    pub fn endpoints(&self) -> (Vector, Vector) {
        (self.space.point(&self.lo), self.space.point(&self.hi))
    }

    pub fn contains(&self, x: &Vector) -> bool {
        matches!(self.space.param_of(x), Some(t) if self.lo <= t && t <= self.hi)
    }
}

/// Scans pairs of `xs` in lexicographic order and returns the line through
/// `z` and the first pair collinear with it. All three points must differ.
pub fn check_collinear(xs: &[Vector], z: &Vector) -> Result<Option<EdgeSpace>> {
    for x in xs {
        check_dim(z.dim(), x.dim())?;
    }
    let mut pool: Vec<&Vector> = xs.iter().filter(|x| *x != z).collect();
    pool.sort();
    pool.dedup();
    for i in 0..pool.len() {
        let w2 = pool[i].sub(z);
        for y in &pool[i + 1..] {
            let w1 = pool[i].sub(y);
            if parallel(&w1, &w2) {
                return EdgeSpace::through(pool[i], z).map(Some);
            }
        }
    }
    Ok(None)
}

/// `u` and `v` are nonzero multiples of each other.
fn parallel(u: &Vector, v: &Vector) -> bool {
    let Some(k) = v.iter().position(|a| !a.is_zero()) else {
        return false;
    };
    if u[k].is_zero() {
        return false;
    }
    let lambda = &u[k] / &v[k];
    v.scale(&lambda) == *u
}

/// Points on `e` with parameter in `[lo, hi]` whose coordinates are all
/// multiples of `2^-bits`. Cost grows with `(hi - lo) * 2^bits`.
pub fn grid_points_in_interval(e: &EdgeSpace, lo: &Rational, hi: &Rational, bits: u32) -> Vec<Vector> {
    let mut out = Vec::new();
    if lo > hi {
        return out;
    }
    let k = e.lead();
    let scale = Rational::from_integer(rational::pow2(bits));
    // Coordinate k sweeps [x_lo, x_hi] monotonically as t goes over [lo, hi].
    let a = e.point(lo)[k].clone();
    let b = e.point(hi)[k].clone();
    let (x_lo, x_hi) = if a <= b { (a, b) } else { (b, a) };
    let first = (&x_lo * &scale).ceil().to_integer();
    let last = (&x_hi * &scale).floor().to_integer();
    let mut j = first;
    while j <= last {
        let xk = Rational::new(j.clone(), rational::pow2(bits));
        let t = (&xk - &e.base[k]) / &e.direction[k];
        let p = e.point(&t);
        if p.on_grid(bits) {
            out.push(p);
        }
        j += 1;
    }
    out.sort();
    out
}

/// Parameter interval where a line meets a bounded polytope, if it does.
pub fn clip_line(p: &Polytope, space: &EdgeSpace) -> Option<(Rational, Rational)> {
    edges::clip(p, space).ok().flatten()
}

/// Visits every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Rank of the normals of the given constraint rows.
pub(crate) fn row_rank(p: &Polytope, rows: &[usize]) -> usize {
    let vs: Vec<Vector> = rows.iter().map(|&i| p.halfspaces[i].normal.clone()).collect();
    linalg::rank(&vs)
}

pub(crate) fn structural(msg: impl fmt::Display) -> Error {
    Error::Structural(format!("{msg}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn canonical_lines_compare_equal() {
        let a = EdgeSpace::through(&Vector::from_ints(&[0, 1]), &Vector::from_ints(&[2, 3])).unwrap();
        let b = EdgeSpace::through(&Vector::from_ints(&[5, 6]), &Vector::from_ints(&[-1, 0])).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.direction, Vector::from_ints(&[1, 1]));
        assert!(a.base.dot(&a.direction).is_zero());
        assert_eq!(a.param_of(&Vector::from_ints(&[2, 3])).map(|t| a.point(&t)), Some(Vector::from_ints(&[2, 3])));
        assert_eq!(a.param_of(&Vector::from_ints(&[2, 2])), None);
    }

    #[test]
    fn collinear_examples() {
        let xs = [Vector::from_ints(&[0, 0, 0]), Vector::from_ints(&[1, 1, 1])];
        let e = check_collinear(&xs, &Vector::from_ints(&[2, 2, 2])).unwrap().unwrap();
        assert_eq!(e.base, Vector::from_ints(&[0, 0, 0]));
        assert_eq!(e.direction, Vector::from_ints(&[1, 1, 1]));

        let xs = [Vector::from_ints(&[0, 0]), Vector::from_ints(&[1, 0])];
        assert_eq!(check_collinear(&xs, &Vector::from_ints(&[0, 1])).unwrap(), None);

        let bad = [Vector::from_ints(&[0, 0, 0])];
        assert!(check_collinear(&bad, &Vector::from_ints(&[0, 1])).is_err());
    }

    #[test]
    fn grid_points_on_axis() {
        let e = EdgeSpace::new(&Vector::from_ints(&[0, 0]), &Vector::from_ints(&[1, 0])).unwrap();
        let pts = grid_points_in_interval(&e, &ratio(3, 8), &ratio(9, 16), 2);
        assert_eq!(pts, vec![Vector::from_ratios(&[(1, 2), (0, 1)])]);
        assert!(grid_points_in_interval(&e, &ratio(3, 8), &ratio(9, 16), 0).is_empty());
    }

    #[test]
    fn line_meets_hyperplane() {
        let e = EdgeSpace::new(&Vector::from_ints(&[0, 0]), &Vector::from_ints(&[1, 0])).unwrap();
        let h = Hyperplane::new(Vector::from_ints(&[1, 0]), ratio(1, 2)).unwrap();
        assert_eq!(e.intersect(&h), LineHit::At(ratio(1, 2)));
        let inside = Hyperplane::new(Vector::from_ints(&[0, 1]), int(0)).unwrap();
        assert_eq!(e.intersect(&inside), LineHit::Contained);
        let apart = Hyperplane::new(Vector::from_ints(&[0, 1]), int(1)).unwrap();
        assert_eq!(e.intersect(&apart), LineHit::Miss);
    }

    #[test]
    fn subsets_in_order() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, |s| seen.push(s.to_vec()));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![0, 1]);
        assert_eq!(seen[5], vec![2, 3]);
        let mut empty = 0;
        for_each_subset(3, 0, |_| empty += 1);
        assert_eq!(empty, 1);
    }

    #[test]
    fn zero_normal_rejected() {
        assert!(Halfspace::new(Vector::zeros(2), int(1)).is_err());
        let json = r#"{"d":2,"halfspaces":[{"a":["0/1","0/1"],"b":"1/1"}]}"#;
        assert!(serde_json::from_str::<Polytope>(json).is_err());
    }

    #[test]
    fn polytope_json_round_trip() {
        let p = Polytope::cube(2, ratio(3, 4));
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains(r#""b":"3/4""#));
        let back: Polytope = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
