//! Scenario construction, parameter sweeps and CSV output for the time
//! allocation solver in `wpcr-core`.

pub mod config;
pub mod error;
pub mod output;
pub mod placement;
pub mod scenario;
pub mod sweep;
pub mod validate;

pub use config::{dbm_to_watts, Placement, ScenarioConfig, Sweep, SweepName};
pub use error::{ExperimentError, Result};
pub use placement::{build_topology, place_nodes};
pub use scenario::{fig3_argmax, fig3_sweep, is_unimodal, run_scenario, Fig3Row, ScenarioResult};
pub use sweep::{improvement_summary, run_sweep, Improvement, SweepOutput, SweepRow};
