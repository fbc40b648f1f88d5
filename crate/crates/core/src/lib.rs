//! Neighborhood-stable assignments of agents with binary (approval)
//! preferences to the vertices of a seat graph.
//!
//! An agent's utility is the number of approved agents on adjacent seats. Two
//! agents block when each strictly gains by exchanging seats; an assignment is
//! neighborhood stable when no blocking pair sits on adjacent seats.
//!
//! The crate provides:
//!
//! * [`stability`]: utilities, envy and stability checks at any seat distance;
//! * [`cycle`], [`path`], [`general`]: constructive solvers for cycle seats,
//!   path seats (no blocking pair within distance two), and seat graphs with
//!   enough leaves to host a feedback vertex set of the preferences;
//! * [`dynamics`]: the swap-dynamics process and its cycle detection;
//! * [`oracle`]: brute force over all assignments of small instances;
//! * [`generators`]: the named counterexample families and random instances.

pub mod cycle;
pub mod dynamics;
pub mod error;
pub mod exec;
pub mod general;
pub mod generators;
pub mod io;
pub mod model;
pub mod oracle;
pub mod path;
pub mod pathpartition;
pub mod stability;

pub use error::{Error, Result};
pub use exec::Execution;
pub use model::{neighbors, AgentIdx, Assignment, Instance, PreferenceGraph, SeatGraph, SeatIdx, SeatShape};
pub use stability::{check, DistanceBound, StabilityReport};
