//! Rational vectors and exact Gaussian elimination.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Index;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{self, Rational};

/// A point or direction in `Q^d`. Ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vector(pub Vec<Rational>);

impl Vector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Vector(coords)
    }

    pub fn zeros(d: usize) -> Self {
        Vector(vec![Rational::zero(); d])
    }

    pub fn filled(d: usize, v: Rational) -> Self {
        Vector(vec![v; d])
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Vector(xs.iter().map(|&x| rational::int(x)).collect())
    }

    /// Builds from `(num, den)` pairs.
    pub fn from_ratios(xs: &[(i64, i64)]) -> Self {
        Vector(xs.iter().map(|&(n, d)| rational::ratio(n, d)).collect())
    }

    pub fn unit(d: usize, i: usize) -> Self {
        let mut v = Self::zeros(d);
        v.0[i] = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn dot(&self, other: &Vector) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        let mut acc = Rational::zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Rational) -> Vector {
        Vector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }

    /// `self + t * dir`.
    pub fn along(&self, dir: &Vector, t: &Rational) -> Vector {
        Vector(self.0.iter().zip(&dir.0).map(|(a, b)| a + b * t).collect())
    }

    pub fn norm_sq(&self) -> Rational {
        self.dot(self)
    }

    pub fn norm_inf(&self) -> Rational {
        self.0
            .iter()
            .map(|a| a.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|a| a.is_zero())
    }

    /// Midpoint of two points.
    pub fn midpoint(&self, other: &Vector) -> Vector {
        let half = rational::ratio(1, 2);
        self.add(other).scale(&half)
    }

    pub fn on_grid(&self, bits: u32) -> bool {
        self.0.iter().all(|a| rational::on_grid(a, bits))
    }

    /// Semicolon-joined `"num/den"` rendering used in CSV logs.
    pub fn to_semicolon_string(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(rational::encode).collect();
        parts.join(";")
    }
}

impl Index<usize> for Vector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for a in &self.0 {
            seq.serialize_element(&rational::encode(a))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| rational::decode(s).map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()
            .map(Vector)
    }
}

/// Row-reduces `rows` in place to reduced row echelon form and returns the
/// pivot column of each nonzero row.
pub fn rref(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for a in rows[r].iter_mut() {
            *a *= &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let (src, dst) = if i < r {
                    let (lo, hi) = rows.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = rows.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    if !s.is_zero() {
                        *d -= &f * s;
                    }
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vector]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.0.clone()).collect();
    rref(&mut m).len()
}

/// Solves the square system `rows · x = rhs`. `None` when singular.
pub fn solve(rows: &[Vector], rhs: &[Rational]) -> Option<Vector> {
    let n = rows.len();
    if n == 0 {
        return Some(Vector(Vec::new()));
    }
    let d = rows[0].dim();
    if n != d || rhs.len() != n {
        return None;
    }
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.0.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() != d || pivots.iter().any(|&p| p >= d) {
        return None;
    }
    Some(Vector(m.into_iter().map(|row| row[d].clone()).collect()))
}

/// Basis of `{x : rows · x = 0}`, one vector per free column.
pub fn nullspace(rows: &[Vector], d: usize) -> Vec<Vector> {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.0.clone()).collect();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in (0..d).filter(|c| !pivots.contains(c)) {
        let mut v = Vector::zeros(d);
        v.0[free] = Rational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v.0[pc] = -m[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Scales a nonzero vector to coprime integer coordinates, keeping its sign.
pub fn primitive_integer(v: &Vector) -> Vector {
    use num_bigint::BigInt;
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for a in &v.0 {
        lcm = lcm.lcm(a.denom());
    }
    let ints: Vec<BigInt> = v
        .0
        .iter()
        .map(|a| (a * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for a in &ints {
        g = g.gcd(a);
    }
    if g.is_zero() {
        return v.clone();
    }
    Vector(
        ints.into_iter()
            .map(|a| Rational::from_integer(a / &g))
            .collect(),
    )
}

/// Determinant of a square matrix by elimination.
pub fn det(rows: &[Vector]) -> Rational {
    let n = rows.len();
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.0.clone()).collect();
    let mut acc = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            acc = -acc;
        }
        let piv = m[col][col].clone();
        acc *= &piv;
        for i in col + 1..n {
            if m[i][col].is_zero() {
                continue;
            }
            let f = &m[i][col] / &piv;
            for j in col..n {
                let s = &f * &m[col][j];
                m[i][j] -= s;
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn solve_small_system() {
        let rows = [Vector::from_ints(&[2, 1]), Vector::from_ints(&[1, -1])];
        let x = solve(&rows, &[int(3), int(0)]).unwrap();
        assert_eq!(x, Vector::from_ints(&[1, 1]));
        let singular = [Vector::from_ints(&[1, 2]), Vector::from_ints(&[2, 4])];
        assert!(solve(&singular, &[int(1), int(2)]).is_none());
    }

    #[test]
    fn nullspace_of_plane() {
        let rows = [Vector::from_ints(&[1, 1, 1])];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(rows[0].dot(v).is_zero());
        }
        assert_eq!(rank(&ns), 2);
    }

    #[test]
    fn primitive_scaling() {
        let v = Vector::from_ratios(&[(1, 2), (-3, 4), (0, 1)]);
        assert_eq!(primitive_integer(&v), Vector::from_ints(&[2, -3, 0]));
    }

    #[test]
    fn determinant_matches_cofactor() {
        let rows = [
            Vector::from_ints(&[2, 0, 1]),
            Vector::from_ints(&[1, 3, 2]),
            Vector::from_ints(&[1, 1, 1]),
        ];
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(det(&rows), int(0));
        let rows = [Vector::from_ints(&[0, 1]), Vector::from_ints(&[1, 0])];
        assert_eq!(det(&rows), int(-1));
        let _ = ratio(1, 1);
    }

    #[test]
    fn lexicographic_order() {
        let a = Vector::from_ints(&[1, -1]);
        let b = Vector::from_ints(&[1, 1]);
        assert!(a < b);
        let json = serde_json::to_string(&Vector::from_ratios(&[(1, 2), (3, 1)])).unwrap();
        assert_eq!(json, r#"["1/2","3/1"]"#);
        let back: Vector = serde_json::from_str(&json).unwrap();
        assert_eq!(back, Vector::from_ratios(&[(1, 2), (3, 1)]));
    }
}
