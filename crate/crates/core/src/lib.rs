//! Exploration of temporal graphs: a graph whose edge set changes from step
//! to step while staying connected at every step.
//!
//! The crate provides the data model and validators, the families of hard
//! instances, one explorer per supported class of underlying graph, the
//! multi-agent and contraction reductions, an exact solver for small
//! instances, and a benchmark harness.

pub mod bench;
pub mod dsu;
pub mod error;
pub mod explorers;
pub mod generators;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod presence;
pub mod reach;
pub mod reductions;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, Instance, StaticGraph, StepView, TemporalGraph, TemporalView};
pub use presence::{PresencePattern, StepSet};
pub use reach::{earliest_arrival, plan_reach, Arrivals};
pub use walk::{
    validate_schedule, validate_walk, Move, MultiAgentSchedule, ScheduleReport, TemporalWalk,
    Violation, WalkReport,
};
