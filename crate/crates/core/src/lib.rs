//! Exact polytope geometry and online learners that predict the optimal
//! solution of a linear program whose feasible region or objective is only
//! partially known.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is computed with
//! arbitrary-precision rationals except the ellipsoid learner's state, which
//! lives on a fixed binary grid (see [`ellipsoid`]).
//!
//! Module map:
//!
//! - [`rational`], [`linalg`]: scalars, vectors and exact elimination.
//! - [`geometry`]: halfspaces, polytopes, vertices, edges, collinearity,
//!   precision grids and assumption validation.
//! - [`lp`]: vertex-optimal LP solving, an exact simplex, convex-hull
//!   membership and optimization over hulls.
//! - [`learn_edge`]: the edge-learning algorithm for a known objective, plus
//!   the one- and two-dimensional learners.
//! - [`learn_hull`]: the convex-hull learner for i.i.d. constraints.
//! - [`ellipsoid`]: the cutting-plane learner for a hidden objective.
//! - [`fcp`]: randomized halving over a finite class of polytopes.
//! - [`env`]: ground-truth environments and the lower-bound adversary.
//! - [`episode`]: day loops and per-day logs shared by all settings.
#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

#[macro_use]
extern crate alloc;

pub mod ellipsoid;
pub mod env;
pub mod episode;
pub mod error;
pub mod fcp;
pub mod geometry;
pub mod learn_edge;
pub mod learn_hull;
pub mod learner;
pub mod linalg;
pub mod lp;
pub mod rational;

pub use error::{Error, Result};
pub use geometry::{Edge, EdgeSpace, Halfspace, Hyperplane, Polytope};
pub use linalg::Vector;
pub use rational::Rational;
