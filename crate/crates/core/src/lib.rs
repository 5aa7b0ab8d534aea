//! Coherence checking for finite conditional prevision assessments.
//!
//! Conditional random quantities are represented as value maps over the
//! constituents of a propositional event algebra, with the called-off branch
//! filled by the assessed prevision (`X|H = XH + mu H^c`). Coherence is
//! decided with an exact-rational simplex, recursing on the indices whose
//! conditioning events can carry no mass.
//!
//! Modules:
//! - [`events`]: event expressions, logical queries, constituent enumeration.
//! - [`crq`]: conditional random quantities and the compound conditionals
//!   (conjunction, negation, disjunction, quasi conjunction, iterated).
//! - [`coherence`]: the linear system of an assessment and the recursive check.
//! - [`bounds`]: coherent-extension intervals and closed-form bounds.
//! - [`kaufmann`]: seeded Monte Carlo over repeated i.i.d. worlds.

pub mod bounds;
pub mod coherence;
pub mod crq;
mod error;
pub mod events;
pub mod exec;
pub mod kaufmann;
pub mod rational;

pub use bounds::{
    disjunction_bounds, extension_interval, frechet_conjunction_bounds, quasi_conjunction_bounds,
    ExtensionInterval,
};
pub use coherence::{
    build_system, check_coherence, random_gain, solve_feasibility, upper_conditioning_masses,
    Assessment, CoherenceReport, Feasibility, LinearSystem,
};
pub use crq::{CompoundConditional, CompoundKind, Crq};
pub use error::{Error, Result};
pub use events::{Event, Universe};
pub use exec::Exec;
pub use rational::Rational;
