//! Cycle-length spectra of sparse random graphs.
//!
//! * [`graph`]: immutable sparse graphs, cycle validation, edge-list files.
//! * [`samplers`]: configuration model, Hamilton-cycle-plus-extras models,
//!   binomial graphs, sprinkling and the contraction coupling.
//! * [`switching`]: chord classes on a Hamilton cycle, partner sets, the
//!   cycles they produce, and the staged exposure procedures.
//! * [`spectrum`]: exact cycle-length sets, short-cycle counts, circumference.
//! * [`theory`]: Poisson means, `θ(c, ℓ)` with a certified tail, explicit bounds.
//! * [`harness`]: declarative Monte Carlo experiments and invariant suites.

pub mod error;
pub mod graph;
pub mod harness;
pub mod parallel;
pub mod samplers;
pub mod spectrum;
pub mod stream;
pub mod switching;
pub mod theory;

pub use error::{Error, Result};
pub use graph::{Edge, Graph, Orientation, VertexCycle};
pub use stream::SeededStream;
