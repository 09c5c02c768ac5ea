//! Exact-arithmetic verification kernel.
//!
//! Everything in this crate computes over `BigInt` / `BigRational` (or a
//! prime field with exact residues); no floating point is used anywhere.
//! The modules are layered bottom-up:
//!
//! * [`exactmath`]: integer/rational matrices, Smith normal form, exact
//!   determinants, kernel bases, and a rational simplex deciding strict
//!   feasibility of linear systems with certificates both ways.
//! * [`poly`]: sparse multivariate polynomials over ℚ and 𝔽ₚ with formal
//!   derivatives, monomial-curve substitution, and exact division.
//! * [`fan`]: simplicial rational fans: validation, completeness,
//!   star subdivision, fibered projection, and projectivity certification
//!   by exact linear programming.
//! * [`wps`]: divisor classes and effectivity kernels on a blown-up
//!   weighted projective plane, symbolic-power membership, and the
//!   negative-curve witness search.
//! * [`gnwpoly`]: the Goto-Nishida-Watanabe polynomial family and its
//!   defining identities, plus the characteristic-p witness construction.
//! * [`lmchain`]: lattice quotients of the Losev-Manin ray set and the
//!   rank-by-rank fan chain built through `fan::project_fan`.
//! * [`boundary`]: the compatible-sections combinatorics on boundary
//!   divisor index sets.
//! * [`report`] / [`corpus`]: the shared check-report schema and the
//!   checksummed fixture corpus.

pub mod boundary;
pub mod corpus;
pub mod exactmath;
pub mod fan;
pub mod gnwpoly;
pub mod lmchain;
pub mod poly;
pub mod report;
pub mod wps;

pub use boundary::{IndexSet, PairClass};
pub use report::{CheckReport, Envelope, Status};
pub use exactmath::{IntMatrix, LinearForm, LpProblem, RatMatrix, SnfDecomposition};
pub use fan::{Fan, LatticeProjection, Ray};
pub use gnwpoly::GnwSystem;
pub use lmchain::{LmPartition, QuotientData};
pub use poly::{Polynomial, PrimeField, Rationals, WeightedGrading};
pub use wps::{CurveData, DivClass, WeightedTriple};
