//! The replication engine: walks demand traces tick by tick, drives the
//! broker and allocator under a chosen scheme, and aggregates satisfaction
//! and utilization statistics across seeded replications.
//!
//! Replications are paired: the same per-replication seed produces the same
//! demand traces under both schemes, so per-tick scheme comparisons are
//! exact rather than statistical. Replication `k` depends only on
//! `(base_seed, k)` and replications run independently (in parallel).

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::broker::{
    negotiate, reserve_bandwidth, HistoryRecord, ReservationWindow, Scheme, SlaPolicy, WindowParams,
};
use crate::model::{
    allocate_proposed, allocate_traditional, utilization, Allocation, Bandwidth, LinkSample,
};
use crate::traffic::{
    gen_bg_trace, gen_femto_trace, BackgroundTrafficConfig, FemtoTrafficConfig, TrafficError,
};
use crate::Kbps;

/// Run lengths, replication count and the base seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunParams {
    /// Measured span in seconds (after warmup).
    pub duration_s: f64,
    /// Warmup span in seconds, excluded from statistics.
    pub warmup_s: f64,
    pub replications: u32,
    pub base_seed: u64,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams {
            duration_s: 4000.0,
            warmup_s: 600.0,
            replications: 20,
            base_seed: 42,
        }
    }
}

/// Everything one experiment needs: link capacity, both traffic models,
/// the broker window and the run lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub capacity_kbps: Kbps,
    pub femto: FemtoTrafficConfig,
    pub background: BackgroundTrafficConfig,
    pub window: WindowParams,
    pub run: RunParams,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            capacity_kbps: Bandwidth::new(6000.0),
            femto: FemtoTrafficConfig::default(),
            background: BackgroundTrafficConfig::default(),
            window: WindowParams::default(),
            run: RunParams::default(),
        }
    }
}

impl ScenarioConfig {
    /// Validates the whole config, collecting every violation rather than
    /// stopping at the first.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut violations = Vec::new();

        if self.capacity_kbps.value() <= 0.0 {
            violations.push("capacity_kbps must be positive".to_string());
        }

        violations.extend(self.window.violations());

        if self.run.duration_s.is_nan() || self.run.duration_s <= 0.0 {
            violations.push(format!(
                "run.duration_s must be positive (got {})",
                self.run.duration_s
            ));
        }
        if self.run.warmup_s < 0.0 {
            violations.push(format!(
                "run.warmup_s must not be negative (got {})",
                self.run.warmup_s
            ));
        }
        if self.run.warmup_s.is_nan() || self.run.warmup_s >= self.run.duration_s {
            violations.push(format!(
                "run.warmup_s ({}) must be less than run.duration_s ({})",
                self.run.warmup_s, self.run.duration_s
            ));
        }
        if self.run.replications == 0 {
            violations.push("run.replications must be at least 1".to_string());
        }
        if self.window.violations().is_empty() {
            let t1 = self.window.sample_interval_s;
            for (key, value) in [
                ("run.duration_s", self.run.duration_s),
                ("run.warmup_s", self.run.warmup_s),
            ] {
                let ratio = value / t1;
                if value >= 0.0 && (ratio - ratio.round()).abs() > 1e-9 {
                    violations.push(format!(
                        "{key} ({value}) must be an integer multiple of window.t1_s ({t1})"
                    ));
                }
            }
        }

        if self.femto.users == 0 {
            violations.push("femto.users must be at least 1".to_string());
        }
        if self.femto.classes.is_empty() {
            violations.push("femto.classes must not be empty".to_string());
        }
        for (i, class) in self.femto.classes.iter().enumerate() {
            if class.mix_weight.is_nan() || class.mix_weight <= 0.0 {
                violations.push(format!(
                    "femto.classes[{i}].mix_weight must be positive (got {})",
                    class.mix_weight
                ));
            }
            if class.mean_lifetime_s.is_nan() || class.mean_lifetime_s <= 0.0 {
                violations.push(format!(
                    "femto.classes[{i}].mean_lifetime_s must be positive (got {})",
                    class.mean_lifetime_s
                ));
            }
        }

        if self.background.per_flow_kbps.value() <= 0.0 {
            violations.push(format!(
                "background.per_flow_kbps must be positive (got {})",
                self.background.per_flow_kbps.value()
            ));
        }
        if self.background.mean_flow_duration_s.is_nan()
            || self.background.mean_flow_duration_s <= 0.0
        {
            violations.push(format!(
                "background.mean_flow_duration_s must be positive (got {})",
                self.background.mean_flow_duration_s
            ));
        }

        if violations.is_empty() {
            Ok(())
        } else {
            Err(ConfigError { violations })
        }
    }
}

/// A configuration rejected by validation; lists every violation found.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub violations: Vec<String>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration:")?;
        for violation in &self.violations {
            write!(f, "\n  - {violation}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Traffic(#[from] TrafficError),
    #[error(transparent)]
    Broker(#[from] crate::broker::BrokerError),
}

/// Everything observed at one monitoring instant of one replication.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TickRecord {
    pub time_s: f64,
    pub femto_demand: Kbps,
    pub background_demand: Kbps,
    pub reserved: Kbps,
    pub allocation: Allocation,
    pub utilization: f64,
    pub scheme: Scheme,
}

impl TickRecord {
    pub fn history_record(&self) -> HistoryRecord {
        HistoryRecord {
            time_s: self.time_s,
            femto_demand: self.femto_demand,
            background_demand: self.background_demand,
            reserved: self.reserved,
            scheme: self.scheme,
        }
    }
}

/// Outcome of one replication: post-warmup means, plus the full per-tick
/// record when captured.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub scheme: Scheme,
    pub seed: u64,
    pub mean_sl: f64,
    pub mean_util: f64,
    pub ticks: Option<Vec<TickRecord>>,
}

/// Seed for replication `k`: depends only on `(base_seed, k)`.
pub fn replication_seed(base_seed: u64, replication: u32) -> u64 {
    mix(base_seed.wrapping_add(GOLDEN_GAMMA.wrapping_mul(replication as u64 + 1)))
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const FEMTO_STREAM: u64 = 0xF3A7_0CE1_1CA1_15ED;
const BACKGROUND_STREAM: u64 = 0xB06D_E41D_EF15_0BAD;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn stream_seed(replication_seed: u64, stream_tag: u64) -> u64 {
    mix(replication_seed ^ stream_tag)
}

/// Runs one replication of one scheme over freshly generated traces.
///
/// With `capture_timeseries` the per-tick records are retained (the means
/// are computed either way, over post-warmup ticks only).
pub fn run_replication(
    cfg: &ScenarioConfig,
    scheme: Scheme,
    seed: u64,
    capture_timeseries: bool,
) -> Result<RunResult, SimError> {
    cfg.validate()?;

    let t1 = cfg.window.sample_interval_s;
    let total_s = cfg.run.warmup_s + cfg.run.duration_s;
    let femto = gen_femto_trace(&cfg.femto, stream_seed(seed, FEMTO_STREAM), total_s, t1)?;
    let background = gen_bg_trace(
        &cfg.background,
        stream_seed(seed, BACKGROUND_STREAM),
        total_s,
        t1,
    )?;
    debug_assert_eq!(femto.len(), background.len());

    let capacity = cfg.capacity_kbps;
    let policy = SlaPolicy::for_capacity(capacity, cfg.window)?;
    let mut window = ReservationWindow::new(cfg.window)?;

    let warmup_ticks = (cfg.run.warmup_s / t1 + 1e-9).floor() as usize;
    let ticks = femto.len();
    let mut records = capture_timeseries.then(|| Vec::with_capacity(ticks));
    let mut sl_total = 0.0;
    let mut util_total = 0.0;
    let mut measured = 0usize;

    for tick in 0..ticks {
        let sample = LinkSample::new(
            femto.sample_time(tick),
            background.samples[tick],
            femto.samples[tick],
        );
        let (reserved, allocation) = match scheme {
            Scheme::Traditional => (Bandwidth::zero(), allocate_traditional(capacity, sample)),
            Scheme::Proposed => {
                let reserved = negotiate(&policy, reserve_bandwidth(&window, &policy));
                let allocation = allocate_proposed(capacity, sample, reserved);
                window.push(sample.femto_demand);
                (reserved, allocation)
            }
        };
        let util = utilization(&allocation, capacity);
        // capacity conservation, allowing ~1 ulp of rounding
        assert!(
            allocation.total_served().value() <= capacity.value() * (1.0 + 1e-12) + 1e-9,
            "allocation exceeded capacity at t={}",
            sample.time_s
        );

        if tick >= warmup_ticks {
            sl_total += allocation.satisfaction;
            util_total += util;
            measured += 1;
        }
        if let Some(records) = records.as_mut() {
            records.push(TickRecord {
                time_s: sample.time_s,
                femto_demand: sample.femto_demand,
                background_demand: sample.background_demand,
                reserved,
                allocation,
                utilization: util,
                scheme,
            });
        }
    }

    let denom = measured.max(1) as f64;
    Ok(RunResult {
        scheme,
        seed,
        mean_sl: sl_total / denom,
        mean_util: util_total / denom,
        ticks: records,
    })
}

/// Cross-replication summary for one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeSummary {
    pub scheme: Scheme,
    pub mean_sl: f64,
    pub std_sl: f64,
    pub mean_util: f64,
    pub std_util: f64,
    /// Per-replication means, in seed order.
    pub runs: Vec<RunResult>,
}

/// Summaries of every requested scheme over the same paired seed list.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub replications: u32,
    pub schemes: Vec<SchemeSummary>,
}

impl ExperimentSummary {
    pub fn scheme(&self, scheme: Scheme) -> Option<&SchemeSummary> {
        self.schemes.iter().find(|s| s.scheme == scheme)
    }
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let var = values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
    var.sqrt()
}

/// Runs every requested scheme over `replications` seeds derived from the
/// base seed. The seed list is shared across schemes, so traces are paired.
pub fn run_experiment(
    cfg: &ScenarioConfig,
    schemes: &[Scheme],
) -> Result<ExperimentSummary, SimError> {
    cfg.validate()?;
    let seeds: Vec<u64> = (0..cfg.run.replications)
        .map(|k| replication_seed(cfg.run.base_seed, k))
        .collect();

    let mut summaries = Vec::new();
    for scheme in Scheme::all() {
        if !schemes.contains(&scheme) {
            continue;
        }
        let runs: Result<Vec<RunResult>, SimError> = seeds
            .par_iter()
            .map(|&seed| run_replication(cfg, scheme, seed, false))
            .collect();
        let runs = runs?;
        let sls: Vec<f64> = runs.iter().map(|r| r.mean_sl).collect();
        let utils: Vec<f64> = runs.iter().map(|r| r.mean_util).collect();
        summaries.push(SchemeSummary {
            scheme,
            mean_sl: mean(&sls),
            std_sl: sample_std(&sls),
            mean_util: mean(&utils),
            std_util: sample_std(&utils),
            runs,
        });
    }

    // paired traces make scheme dominance exact per seed
    if let (Some(trad), Some(prop)) = (
        summaries.iter().find(|s| s.scheme == Scheme::Traditional),
        summaries.iter().find(|s| s.scheme == Scheme::Proposed),
    ) {
        for (t, p) in trad.runs.iter().zip(&prop.runs) {
            debug_assert!(
                p.mean_sl >= t.mean_sl - 1e-12,
                "satisfaction dominance violated for seed {}",
                t.seed
            );
        }
    }

    Ok(ExperimentSummary {
        replications: cfg.run.replications,
        schemes: summaries,
    })
}

/// One row of a background-load sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub arbit_kbps: Kbps,
    pub scheme: Scheme,
    pub mean_sl: f64,
    pub std_sl: f64,
    pub mean_util: f64,
    pub std_util: f64,
    pub replications: u32,
}

/// Runs the experiment once per background load level; rows are ordered by
/// load level, then scheme.
pub fn sweep_arbit(
    cfg: &ScenarioConfig,
    arbit_levels: &[Kbps],
    schemes: &[Scheme],
) -> Result<Vec<SweepRow>, SimError> {
    let mut levels = arbit_levels.to_vec();
    levels.sort_by(|a, b| a.partial_cmp(b).expect("bandwidths are never NaN"));

    let mut rows = Vec::new();
    for level in levels {
        let mut scenario = cfg.clone();
        scenario.background.arbit_kbps = level;
        let summary = run_experiment(&scenario, schemes)?;
        for scheme_summary in &summary.schemes {
            rows.push(SweepRow {
                arbit_kbps: level,
                scheme: scheme_summary.scheme,
                mean_sl: scheme_summary.mean_sl,
                std_sl: scheme_summary.std_sl,
                mean_util: scheme_summary.mean_util,
                std_util: scheme_summary.std_util,
                replications: summary.replications,
            });
        }
    }
    Ok(rows)
}
