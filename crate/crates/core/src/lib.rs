//! Geodesic velocity flows on finite noncommutative algebras.
//!
//! A time-dependent vector field `K` on `C(Z_n)` or `M_2(C)` evolves by the
//! geodesic velocity equation while an element `m` of the bimodule
//! `C^∞(R) ⊗ A` is transported by the matching connection. The transported
//! `m` defines a state `φ(a) = <m a, m̄>` at each time, which stays
//! normalized when `K` is real and `b` solves the divergence condition.
//!
//! The crate also covers the row-module Möbius flow on `M_2(C)` pure states
//! and the classical limit (geodesics from Christoffel symbols and the
//! velocity-field PDE checked by characteristics).

pub mod algebra;
pub mod calculus;
pub mod classical;
pub mod config;
pub mod connection;
pub mod ensemble;
pub mod flow;
pub mod mobius;
pub mod monitor;
pub mod ode;
pub mod output;
pub mod par;
pub mod presets;
pub mod scenario;
pub mod svg;
pub mod transport;

pub use algebra::{Complex, Element, Mat2, ZnElement};
pub use calculus::{M2VectorField, OneForm, VectorField, ZnVectorField};
pub use config::{ScenarioConfig, ScenarioKind};
pub use ode::{IntegrationError, Method, Options, Trajectory};
pub use par::Execution;
pub use scenario::{run, sweep, RunError};
