//! Bandwidth-broker simulation for femtocell backhaul on a shared xDSL link.
//!
//! A femtocell's calls are backhauled over the same xDSL line that carries
//! the household's internet traffic, and heavy internet load starves the
//! delay-sensitive calls. This crate models that contention at monitoring
//! granularity and implements a bandwidth broker that dynamically reserves
//! a bandwidth floor for the femtocell side, sized from a sliding window
//! of recent demand, so the calls stay satisfied without giving up much of
//! the link's utilization.
//!
//! * [`model`]: the per-instant allocation rules for the reservation
//!   scheme and the no-prioritization baseline (pure, scalar-generic math).
//! * [`broker`]: the sliding demand history, reservation computation, SLA
//!   policy and history export.
//! * [`traffic`]: calibrated Poisson call/flow generators for both demand
//!   processes.
//! * [`sim`]: the seeded replication engine and its summary statistics.
//!
//! ```
//! use bbsim_core::{run_experiment, Scheme, ScenarioConfig};
//!
//! let mut cfg = ScenarioConfig::default();
//! cfg.run.duration_s = 200.0;
//! cfg.run.warmup_s = 100.0;
//! cfg.run.replications = 2;
//!
//! let summary = run_experiment(&cfg, &Scheme::all()).unwrap();
//! let proposed = summary.scheme(Scheme::Proposed).unwrap();
//! let traditional = summary.scheme(Scheme::Traditional).unwrap();
//! assert!(proposed.mean_sl >= traditional.mean_sl);
//! ```

pub mod broker;
pub mod model;
pub mod scalar;
pub mod sim;
pub mod traffic;

pub use broker::{
    export_history, negotiate, reserve_bandwidth, HistoryRecord, ReservationWindow, Scheme,
    SlaPolicy, WindowParams,
};
pub use model::{
    allocate_proposed, allocate_traditional, available_bandwidth, borrowed_bandwidth,
    satisfaction_level, utilization, Allocation, Bandwidth, LinkSample,
};
pub use scalar::Scalar;
pub use sim::{
    replication_seed, run_experiment, run_replication, sweep_arbit, ConfigError, ExperimentSummary,
    RunParams, RunResult, ScenarioConfig, SimError, SweepRow, TickRecord,
};
pub use traffic::{
    gen_bg_trace, gen_femto_trace, BackgroundTrafficConfig, DemandTrace, FemtoTrafficConfig,
};

/// Bandwidth in kilobits per second at the default `f64` precision.
pub type Kbps = Bandwidth<f64>;

/// Single-precision bandwidth, for callers instantiating the math at `f32`.
pub type Kbps32 = Bandwidth<f32>;
