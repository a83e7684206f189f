//! Random and deterministic subsets of homogeneous Cantor sets.
//!
//! An equicontractive IFS `{f_1, ..., f_N}` on `[0, 1]` codes its attractor by
//! words over `{1..N}`. Labeling every edge of an infinite `M`-ary tree with a
//! symbol from that alphabet selects the subset of points whose coding is the
//! label sequence of some root path. This crate builds those subsets, simulates
//! their level-`n` occupancy, evaluates the exact occupancy recursions, and
//! computes the dimension bounds and the exact dimensions that are known.
//!
//! Module map:
//!
//! * [`symbolic`]: path/label words and the breadth-first edge index `κ`.
//! * [`ifs`]: the IFS, basic intervals, `dim C`.
//! * [`prob`]: validated probability vectors.
//! * [`stochastic`]: label sources, occupancy evolution, Monte Carlo trials,
//!   dimension regression and the discrete energy diagnostic.
//! * [`exact`]: occupancy probabilities, `π_n`, the fixed point `γ`, expected
//!   counts and brute-force enumeration oracles.
//! * [`bounds`]: lower/upper dimension bounds and the regime classifier.
//! * [`detfrac`]: the deterministic "every m-th edge" subsets and their
//!   subshift description.

pub mod bounds;
pub mod detfrac;
pub mod error;
pub mod exact;
pub mod ifs;
pub mod prob;
pub mod roots;
pub mod stochastic;
pub mod symbolic;

pub use bounds::{BoundsReport, ExactReason, Sandwich, SandwichCheck};
pub use detfrac::{BinaryWord, DeterministicSpec, ModGraph, SftSpec};
pub use error::{Error, Result};
pub use ifs::{IfsSpec, Interval};
pub use prob::ProbVector;
pub use stochastic::{LabelSource, LevelStats, OccupancyMap, RandomMeasure, TrialSummary};
pub use symbolic::{EdgeIndex, LabelWord, PathWord};
