//! Discrete causal-influence simulator.
//!
//! Particles and observers are chains of influence events inside a partially
//! ordered set. A coordinated pair of observer chains quantifies intervals
//! between events, which yields emergent time, space, velocity, mass,
//! momentum and energy. A particle that receives influence at a constant
//! rate accelerates exactly as a relativistic particle under constant proper
//! acceleration: `beta = tanh(r * tau + phi0)`.
//!
//! Modules, bottom up:
//!
//! - [`poset`]: events, chains, the causal order, chain projections.
//! - [`quantification`]: coordinated observer pairs and interval measures.
//! - [`kinematics`]: rates, mass/momentum/energy, frame changes.
//! - [`dynamics`]: per-receipt updates, the continuum equations and their
//!   closed-form solution, force and power.
//! - [`simulation`]: Monte Carlo zitter walks, coarse-graining, brute-force
//!   oracles and poset construction from walks.
//! - [`verify`]: invariant suites shared by tests and the command line.

pub mod dynamics;
pub mod error;
pub mod fixtures;
pub mod kinematics;
pub mod poset;
pub mod quantification;
pub mod simulation;
pub mod verify;

pub use dynamics::{
    analytic_beta, evolve_ode, force, influence_rate, power, AnalyticAccel, DynamicState,
    InfluenceRates, Trajectory, TrajectorySample,
};
pub use error::{Error, Result, Violation};
pub use kinematics::{
    emergent_state, lorentz, step_stats, transform_interval, EmergentState, FrameRelation,
    StepStats,
};
pub use poset::{Chain, ChainId, ChainInterval, Edge, EdgeKind, EventId, Poset, PosetBuilder};
pub use quantification::{quantify_interval, CoordinatedPair, CoordinationReport, IntervalQuant};
pub use simulation::{
    build_poset, coarse_grain, oracle_project, simulate, simulate_accelerated, simulate_free,
    MeasuredTrajectory, ScenarioConfig, Step, ZitterPath,
};
