//! Exact-arithmetic rational homotopy toolkit: polynomial differential forms
//! on finite simplicial sets, Sullivan minimal models computed degree by
//! degree, and a decision procedure for rational homotopy equivalence of
//! simply connected finite simplicial sets.
//!
//! Everything is computed over the rationals with arbitrary-precision
//! arithmetic; no floating point is used anywhere. All algorithms are
//! deterministic: identical inputs give bit-identical outputs.

pub mod apl;
pub mod dga;
pub mod fixtures;
pub mod formats;
pub mod forms;
pub mod iso;
pub mod minmodel;
pub mod pipeline;
pub mod qcore;
pub mod simplicial;

pub use dga::FreeDga;
pub use pipeline::{Answer, Verdict};
pub use qcore::{QMatrix, QVector, Rat};
pub use simplicial::{CochainComplexQ, FiniteSimplicialSet, SimplexKey, SimplexRef};
