//! Differential operators on graded quotient rings.

mod opspace;
mod oracle;
mod replay;
mod scan;
mod weyl;

pub use opspace::{
    graded_operator_space, graded_operator_space_with, operator_space_dim, operator_space_dim_with, reduce_operator,
    saturated_operator_dim, ConstraintSet, GradedOpSpace, OpSpaceOptions, SaturationReport,
};
pub use oracle::{oracle_min_cap, stabilized_oracle, truncated_action_oracle, StableOracle};
pub use replay::{commutators_lower_order, random_homog, replay_ideal_preservation, ReplayOutcome, REPLAY_MAX_DEGREE};
pub use scan::{negative_degree_scan, negative_degree_scan_with, operator_grid, ScanCell, ScanReport, WITNESS_REPLAY_SAMPLES};
pub use weyl::{apply_op, commutator, commutator_with_var, compose, divided_power, euler_operator, weyl_basis, DiffOperator, WeylTerm};
