//! Exact chain calculus on Collatz trajectories over dyadic intervals.
//!
//! The library splits an odd integer's trajectory into *cells* (a halving,
//! or a 3v+1 step followed by its forced halving) and works with the
//! resulting chain shapes over the interval `(2^n, 2^(n+1)]`:
//!
//! - [`exactmath`] — exact integer and log-linear-form arithmetic (floors
//!   and ceilings of expressions in log2(3) without floating point),
//!   binomials, and the variable-depth nondecreasing-tuple counter.
//! - [`dynamics`] — the elementary maps `3v+1` and `v/2` and raw
//!   trajectory iteration.
//! - [`chains`] — chain extraction, shape strings, the periodicity check,
//!   and the shape-to-seed inverse.
//! - [`classify`] — shape and integer taxonomies: the descent inequality,
//!   official / non-official shapes, comprehensive-chain parameters,
//!   incidence predicates, generative seeds, and the concerned intervals.
//! - [`counting`] — exact evaluation of the closed-form counts γ(n) and
//!   δ(n) with their term breakdowns, plus the ratio-monotonicity check.
//! - [`census`] — brute-force oracles: exhaustive shape and integer
//!   censuses with deterministic parallel partitioning, predicate
//!   calibration, and generative-seed counting.
//! - [`tables`] — the published reference tables the formulas and
//!   censuses are checked against.
//! - [`verify`] — property suites (periodicity, shape bijection, ratio
//!   lemma, census-vs-formula cross-check) shared by tests and the CLI.

pub mod census;
pub mod chains;
pub mod classify;
pub mod counting;
pub mod dynamics;
pub mod exactmath;
pub mod tables;
pub mod verify;

pub use chains::{Cell, ChainShape, ChainTrace};
pub use classify::{DipWindow, IncidencePredicate, IntegerOutcome, ShapeClass, Strictness};
pub use counting::{DeltaBreakdown, GammaBreakdown};
pub use dynamics::Value;
pub use exactmath::{Count, LinForm};
