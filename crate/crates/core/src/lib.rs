//! Numerical solvers for two-component dispersive shallow-water systems.
//!
//! Three models share one periodic finite-difference substrate:
//!
//! - the two-component system with momentum density `m = u - (H² u_x)_x`,
//! - the Green-Naghdi (Serre) equations with `m = H u - (H³ u_x)_x / 3`,
//! - the classical (hyperbolic) shallow-water equations, for comparison.
//!
//! The dispersive models are evolved in Hamiltonian variables `(m, H)`. Every
//! right-hand-side evaluation recovers the velocity through a cyclic
//! tridiagonal solve with the symmetric positive-definite momentum operator
//! (see [`elliptic`]). Closed-form solitary waves in [`solitons`] act as the
//! verification oracle, and [`conservation`] evaluates the conserved
//! functionals and their variational derivatives on the same discretization.

// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conservation;
pub mod elliptic;
pub mod error;
pub mod grid;
pub mod models;
pub mod solitons;
pub mod timestepper;

pub use conservation::Diagnostics;
pub use elliptic::{BandedOperator, DispersiveKind};
pub use error::{Error, Result};
pub use grid::Grid;
pub use models::{ModelKind, MomentumForm, MomentumState, ScalingParams, State};
pub use solitons::SolitonParams;
pub use timestepper::{InitialCondition, RunConfig, RunOutput, Snapshot, TimeStep};
