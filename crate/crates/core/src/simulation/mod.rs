//! Monte Carlo walks of free and influenced particles, their coarse-grained
//! trajectories, explicit posets built from them, and brute-force oracles.

pub mod build;
pub mod coarse;
pub mod config;
pub mod oracle;
pub mod rng;
pub mod walk;

pub use build::{build_poset, path_from_poset, BuiltPoset};
pub use coarse::{coarse_grain, linear_fit, LinearFit, MeasuredTrajectory, WindowSample};
pub use config::{ConfigFile, EmissionRule, ReceiptSchedule, Scenario, ScenarioConfig, SCHEMA_VERSION};
pub use oracle::{
    oracle_backward_project, oracle_leq, oracle_project, oracle_projections, random_poset,
};
pub use rng::replica_rng;
pub use walk::{
    auto_steps_per_tau, predicted_tau_end, simulate, simulate_accelerated, simulate_free,
    simulate_replica, simulate_replicas, Step, ZitterPath,
};
