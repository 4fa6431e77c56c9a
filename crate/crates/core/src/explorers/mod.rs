//! One explorer per supported class of underlying graph.

pub mod chord;
pub mod cycle;
pub mod greedy;
pub mod grid;
pub mod regular;
pub mod treewidth;

pub use chord::explore_chord;
pub use cycle::{cycle_optimal, explore_cycle_3n, CycleResult};
pub use greedy::explore_greedy;
pub use grid::{explore_grid_multi, grid_agents, grid_budget};
pub use regular::{explore_regular_mst, mst_weight_audit, MstAudit, RegularMode};
pub use treewidth::{explore_treewidth, TreeDecomposition};
