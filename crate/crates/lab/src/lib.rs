pub mod counting;
pub mod dimension;
pub mod experiment;
pub mod report;

pub use counting::{counting_lemma_check, CountingReport};
pub use dimension::{dimension_bound, verify_dimension_bound, DimensionCaps, DimensionCheck};
pub use experiment::{run_tower_experiment, ExperimentParams, ExperimentRecord};
pub use report::emit_report;
