//! Combinatorial calculus of multisection diagrams.
//!
//! A multisection diagram is a closed surface carrying `n` families of `g`
//! disjoint curves. This crate stores such diagrams exactly (see
//! [`surface`] for the curve encoding), checks them, computes invariants of
//! the manifold they determine, applies diagram moves, generates the
//! standard examples and enumerates genus-1 diagrams.

pub mod catalog;
pub mod census;
pub mod diagram;
pub mod format;
pub mod group;
pub mod invariants;
pub mod matrix;
pub mod moves;
pub mod render;
pub mod script;
pub mod surface;
pub mod validity;

pub use census::{
    classify, enumerate_genus1, realize, CensusReport, Classification, Slope, SlopeDiagram,
};
pub use diagram::{DiagramError, FamilySet, Mode, MultisectionDiagram};
pub use format::{parse, serialize, ParseError};
pub use group::{
    budget_from_env, tietze_simplify, Certification, GroupPresentation, Word, DEFAULT_BUDGET,
};
pub use invariants::{invariant_report, InvariantError, InvariantReport};
pub use matrix::{snf, AbelianGroup, IntegerMatrix, SmithNormalForm};
pub use render::render_svg;
pub use script::{run_script, ScriptError};
pub use surface::{CrossingToken, Curve, Edge, HomologyClass, Sign, Surface};
pub use validity::{validate, wellformed, ValidityReport, Verdict};
