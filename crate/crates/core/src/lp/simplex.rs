//! Dense two-phase simplex over exact rationals with Bland's rule.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::linalg::Vector;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// `maximize objective · y` subject to the rows and `y >= 0`.
#[derive(Clone, Debug, Default)]
pub struct StandardLp {
    pub objective: Vec<Rational>,
    pub rows: Vec<(Vec<Rational>, Relation, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Optimal { value: Rational, y: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl Outcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, Outcome::Infeasible)
    }
}

impl StandardLp {
    pub fn new(nvars: usize) -> Self {
        StandardLp { objective: vec![Rational::zero(); nvars], rows: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.objective.len()
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, rel: Relation, rhs: Rational) {
        debug_assert_eq!(coeffs.len(), self.nvars());
        self.rows.push((coeffs, rel, rhs));
    }

    pub fn maximize(&self) -> Outcome {
        Tableau::build(self).solve(&self.objective)
    }
}

struct Tableau {
    /// Constraint rows; the last entry of each is the right-hand side.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    nvars: usize,
    first_artificial: usize,
    ncols: usize,
}

impl Tableau {
    fn build(lp: &StandardLp) -> Self {
        let n = lp.nvars();
        let extra_slack = lp.rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = lp.rows.clone();
        for (coeffs, rel, rhs) in rows.iter_mut() {
            if rhs.is_negative() {
                for a in coeffs.iter_mut() {
                    *a = -a.clone();
                }
                *rhs = -rhs.clone();
                *rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
        }
        let artificial = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let first_artificial = n + extra_slack;
        let ncols = first_artificial + artificial;
        let mut t = Vec::with_capacity(rows.len());
        let mut basis = Vec::with_capacity(rows.len());
        let (mut s, mut a) = (n, first_artificial);
        for (coeffs, rel, rhs) in rows {
            let mut row = vec![Rational::zero(); ncols + 1];
            row[..n].clone_from_slice(&coeffs);
            row[ncols] = rhs;
            match rel {
                Relation::Le => {
                    row[s] = Rational::one();
                    basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = -Rational::one();
                    s += 1;
                    row[a] = Rational::one();
                    basis.push(a);
                    a += 1;
                }
                Relation::Eq => {
                    row[a] = Rational::one();
                    basis.push(a);
                    a += 1;
                }
            }
            t.push(row);
        }
        Tableau { t, basis, nvars: n, first_artificial, ncols }
    }

    fn solve(mut self, objective: &[Rational]) -> Outcome {
        if self.first_artificial < self.ncols {
            let mut cost = vec![Rational::zero(); self.ncols];
            for c in cost.iter_mut().skip(self.first_artificial) {
                *c = -Rational::one();
            }
            if !self.run(&cost, self.ncols) {
                unreachable!("phase one is bounded by construction");
            }
            if self.value(&cost).is_negative() {
                return Outcome::Infeasible;
            }
            self.drive_out_artificials();
        }
        let mut cost = vec![Rational::zero(); self.ncols];
        cost[..self.nvars].clone_from_slice(objective);
        if !self.run(&cost, self.first_artificial) {
            return Outcome::Unbounded;
        }
        let mut y = vec![Rational::zero(); self.nvars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.nvars {
                y[b] = self.t[i][self.ncols].clone();
            }
        }
        Outcome::Optimal { value: self.value(&cost), y }
    }

    fn value(&self, cost: &[Rational]) -> Rational {
        let mut v = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() {
                v += &cost[b] * &self.t[i][self.ncols];
            }
        }
        v
    }

    /// Pivots to optimality over columns `< allowed`. False when unbounded.
    fn run(&mut self, cost: &[Rational], allowed: usize) -> bool {
        loop {
            let Some(j) = self.entering(cost, allowed) else {
                return true;
            };
            let Some(i) = self.leaving(j) else {
                return false;
            };
            self.pivot(i, j);
        }
    }

    fn entering(&self, cost: &[Rational], allowed: usize) -> Option<usize> {
        (0..allowed).find(|&j| {
            if self.basis.contains(&j) {
                return false;
            }
            let mut r = cost[j].clone();
            for (i, &b) in self.basis.iter().enumerate() {
                if !cost[b].is_zero() && !self.t[i][j].is_zero() {
                    r -= &cost[b] * &self.t[i][j];
                }
            }
            r.is_positive()
        })
    }

    fn leaving(&self, j: usize) -> Option<usize> {
        let mut best: Option<(usize, Rational)> = None;
        for i in 0..self.t.len() {
            let a = &self.t[i][j];
            if !a.is_positive() {
                continue;
            }
            let ratio = &self.t[i][self.ncols] / a;
            let better = match &best {
                None => true,
                Some((k, r)) => ratio < *r || (ratio == *r && self.basis[i] < self.basis[*k]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, i: usize, j: usize) {
        let inv = self.t[i][j].recip();
        for a in self.t[i].iter_mut() {
            if !a.is_zero() {
                *a *= &inv;
            }
        }
        let pivot_row = self.t[i].clone();
        for (k, row) in self.t.iter_mut().enumerate() {
            if k == i || row[j].is_zero() {
                continue;
            }
            let f = row[j].clone();
            for (a, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *a -= &f * p;
                }
            }
        }
        self.basis[i] = j;
    }

    fn drive_out_artificials(&mut self) {
        let mut i = 0;
        while i < self.t.len() {
            if self.basis[i] >= self.first_artificial {
                match (0..self.first_artificial).find(|&j| !self.t[i][j].is_zero()) {
                    Some(j) => self.pivot(i, j),
                    None => {
                        // Redundant equality.
                        self.t.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }
}

/// Outcome of an LP over free variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreeOutcome {
    Optimal { value: Rational, x: Vector },
    Infeasible,
    Unbounded,
}

/// `maximize c · x` subject to `rows[i] · x <= rhs[i]`, `x` free.
pub fn maximize_free(rows: &[Vector], rhs: &[Rational], c: &Vector) -> FreeOutcome {
    let d = c.dim();
    let mut lp = StandardLp::new(2 * d);
    for j in 0..d {
        lp.objective[j] = c[j].clone();
        lp.objective[d + j] = -c[j].clone();
    }
    for (a, b) in rows.iter().zip(rhs) {
        let mut coeffs = Vec::with_capacity(2 * d);
        coeffs.extend(a.iter().cloned());
        coeffs.extend(a.iter().map(|x| -x));
        lp.push(coeffs, Relation::Le, b.clone());
    }
    match lp.maximize() {
        Outcome::Optimal { value, y } => {
            let x = Vector((0..d).map(|j| &y[j] - &y[d + j]).collect());
            FreeOutcome::Optimal { value, x }
        }
        Outcome::Infeasible => FreeOutcome::Infeasible,
        Outcome::Unbounded => FreeOutcome::Unbounded,
    }
}
