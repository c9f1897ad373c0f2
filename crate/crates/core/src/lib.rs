//! Solvers for the Beltrami equation `f_z̄ = μ f_z` and for the `∂̄`-equation of
//! the complex structure defined by `μ` on planar domains.
//!
//! Everything lives on a uniform grid over a square `[-L, L]^2` that contains
//! the working subdomain `Ω` plus a cutoff collar. The building blocks are the
//! Cauchy transform `P` (a right inverse of `∂_z̄`) and the Beurling transform
//! `S = ∂_z P`; the Beltrami solver inverts `I - μS` by fixed-point iteration,
//! and the `∂̄` solver reduces to a nonhomogeneous Beltrami equation in the
//! background coordinate.

pub mod beltrami;
pub mod cli;
pub mod domain;
pub mod error;
pub mod exhaustion;
pub mod family;
pub mod field;
pub mod io;
pub mod solver;
pub mod transforms;

pub use beltrami::BeltramiField;
pub use domain::{DomainSpec, Omega, Region};
pub use error::{Error, Result};
pub use exhaustion::{exhaustion_solve, taylor_project, ExhaustionResult, TaylorProjection};
pub use family::{
    convert_to_background, convert_to_moving, gain_of_derivative_report, solve_dbar, solve_family,
    FamilyLaw, FamilySpec, Frame, OneFormField,
};
pub use field::{make_coordinate_field, ComplexField};
pub use num_complex::Complex64;
pub use solver::{beltrami_residual, neumann_solve, solve_immersion, SolverConfig};
pub use transforms::{beurling_transform, cauchy_transform, estimate_contraction, TransformMethod};
