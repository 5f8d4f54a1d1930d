//! Sequential scheduling games on unrelated machines.
//!
//! Jobs pick machines one after another; each job pays the final load of its
//! machine. The crate plays such games under several rationality models
//! (subgame-perfect, k-lookahead, simple-minded, online greedy), computes the
//! exact optimal makespan, and checks the known price-of-anarchy bounds.
//!
//! All processing times are exact [`numeric::EpsValue`]s `a + b·ε`, so
//! instances perturbed by an infinitesimal are handled without ties.

pub mod analysis;
pub mod engines;
pub mod format;
pub mod generators;
pub mod model;
pub mod numeric;
pub mod optimal;
pub mod suites;

pub use engines::{play, RationalityModel};
pub use model::{Instance, LoadVector, Schedule};
pub use numeric::{EpsValue, Rational};
