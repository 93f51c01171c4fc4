//! Supersingularity of curves over finite fields, decided two independent ways.
//!
//! The library has a criterion side and a geometry side:
//!
//! - **Criterion side**: characters of a finite abelian group of automorphisms,
//!   the Frobenius action on them, and orbit conditions that predict
//!   supersingularity ([`characters`], [`families`]).
//! - **Geometry side**: exact point counts of the supported curve families over
//!   extension fields ([`finite_field`], [`zeta`]), L-polynomial reconstruction
//!   via Newton's identities, and two independent supersingularity tests on the
//!   Frobenius eigenvalues — a p-adic Newton-polygon slope test and a Kronecker
//!   root-of-unity test ([`weil`]). Gauss and Jacobi sums ([`exp_sums`]) give
//!   the eigenvalues in closed form where classical formulas apply.
//!
//! The [`harness`] module sweeps parameter grids, compares predictions with
//! computed verdicts, and writes machine-readable reports.

pub mod characters;
pub mod cyclotomic;
pub mod error;
pub mod exp_sums;
pub mod families;
pub mod finite_field;
pub mod harness;
pub mod weil;
pub mod zeta;

mod cli;
mod poly;

pub use cli::run_cli;
pub use error::{Error, Result};

pub use characters::{CriterionReport, FrobeniusAction, GroupCharacter, GroupSpec};
pub use cyclotomic::{CycloPoly, CyclotomicInt};
pub use exp_sums::{AddChar, MultChar};
pub use finite_field::{ExtFieldElem, FieldCtx};
pub use weil::{NewtonPolygon, Verdict};
pub use zeta::{CurveFamily, CurveInstance, LPolynomial, PointCounts};
