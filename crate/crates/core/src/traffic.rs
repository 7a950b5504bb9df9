//! Stochastic demand generators and their calibration.
//!
//! Femtocell demand is a marked Poisson process: calls arrive at a
//! calibrated aggregate rate, each call draws a class (voice/video/data)
//! by mix weight and holds its class bandwidth for a random lifetime.
//! Background (household internet) demand is a single-class flow process
//! with the same construction. Calibration picks the arrival rates so the
//! stationary mean demand hits the configured targets (Little's law).
//!
//! Generators are deterministic functions of `(config, seed)`; traces are
//! sampled on a fixed tick grid, with call boundaries rounded up to the
//! next tick.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::model::Bandwidth;
use crate::Kbps;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CallKind {
    Voice,
    Video,
    Data,
}

/// One femtocell call class: its bandwidth, how long calls last on
/// average, and its relative share of the call mix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CallClass {
    pub kind: CallKind,
    pub rate_kbps: Kbps,
    pub mean_lifetime_s: f64,
    pub mix_weight: f64,
}

impl CallClass {
    pub fn voice() -> Self {
        CallClass {
            kind: CallKind::Voice,
            rate_kbps: Bandwidth::new(14.4),
            mean_lifetime_s: 120.0,
            mix_weight: 5.0,
        }
    }

    pub fn video() -> Self {
        CallClass {
            kind: CallKind::Video,
            rate_kbps: Bandwidth::new(128.0),
            mean_lifetime_s: 120.0,
            mix_weight: 2.0,
        }
    }

    pub fn data() -> Self {
        CallClass {
            kind: CallKind::Data,
            rate_kbps: Bandwidth::new(30.0),
            mean_lifetime_s: 120.0,
            mix_weight: 1.0,
        }
    }
}

/// The default 5:2:1 voice/video/data mix.
pub fn default_call_mix() -> Vec<CallClass> {
    vec![CallClass::voice(), CallClass::video(), CallClass::data()]
}

/// How call lifetimes are drawn around the class mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LifetimeDistribution {
    #[default]
    Exponential,
    Fixed,
}

/// Femtocell-side traffic model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FemtoTrafficConfig {
    /// Users covered by the femtocell.
    pub users: u32,
    /// Stationary mean aggregate demand the calibration aims for.
    pub target_mean_kbps: Kbps,
    pub classes: Vec<CallClass>,
    pub lifetime_distribution: LifetimeDistribution,
}

impl Default for FemtoTrafficConfig {
    fn default() -> Self {
        FemtoTrafficConfig {
            users: 6,
            target_mean_kbps: Bandwidth::new(450.0),
            classes: default_call_mix(),
            lifetime_distribution: LifetimeDistribution::Exponential,
        }
    }
}

/// Background (non-femtocell) traffic model: Poisson flow arrivals, each
/// flow holding a fixed bandwidth for an exponential duration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BackgroundTrafficConfig {
    /// Average requested bandwidth of the aggregate background traffic.
    pub arbit_kbps: Kbps,
    pub per_flow_kbps: Kbps,
    pub mean_flow_duration_s: f64,
}

impl Default for BackgroundTrafficConfig {
    fn default() -> Self {
        BackgroundTrafficConfig {
            arbit_kbps: Bandwidth::new(6000.0),
            per_flow_kbps: Bandwidth::new(50.0),
            mean_flow_duration_s: 60.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TrafficError {
    #[error("femto.classes must not be empty")]
    EmptyClassMix,
    #[error("femto.classes mix weights must be positive and sum to a positive value")]
    NonPositiveMixWeight,
    #[error("class mean bandwidth is zero; the arrival rate cannot be calibrated")]
    ZeroMeanRate,
    #[error("call mean lifetime must be positive (got {0} s)")]
    NonPositiveLifetime(f64),
    #[error("femto.users must be at least 1")]
    ZeroUsers,
    #[error("background.per_flow_kbps must be positive (got {0})")]
    NonPositiveFlowRate(f64),
    #[error("background.mean_flow_duration_s must be positive (got {0})")]
    NonPositiveFlowDuration(f64),
}

fn total_weight(classes: &[CallClass]) -> Result<f64, TrafficError> {
    if classes.is_empty() {
        return Err(TrafficError::EmptyClassMix);
    }
    if classes
        .iter()
        .any(|c| c.mix_weight.is_nan() || c.mix_weight <= 0.0)
    {
        return Err(TrafficError::NonPositiveMixWeight);
    }
    Ok(classes.iter().map(|c| c.mix_weight).sum())
}

/// Mix-weighted mean call bandwidth.
pub fn mean_call_rate(classes: &[CallClass]) -> Result<Kbps, TrafficError> {
    let total = total_weight(classes)?;
    let weighted: f64 = classes
        .iter()
        .map(|c| c.mix_weight * c.rate_kbps.value())
        .sum();
    Ok(Bandwidth::new(weighted / total))
}

/// Mix-weighted mean call lifetime in seconds.
pub fn mean_call_lifetime(classes: &[CallClass]) -> Result<f64, TrafficError> {
    let total = total_weight(classes)?;
    for class in classes {
        if class.mean_lifetime_s.is_nan() || class.mean_lifetime_s <= 0.0 {
            return Err(TrafficError::NonPositiveLifetime(class.mean_lifetime_s));
        }
    }
    let weighted: f64 = classes
        .iter()
        .map(|c| c.mix_weight * c.mean_lifetime_s)
        .sum();
    Ok(weighted / total)
}

/// Per-user call arrival rate (calls/second) that makes the stationary mean
/// aggregate demand equal the configured target.
pub fn calibrate_femto_rate(cfg: &FemtoTrafficConfig) -> Result<f64, TrafficError> {
    if cfg.users == 0 {
        return Err(TrafficError::ZeroUsers);
    }
    let mean_rate = mean_call_rate(&cfg.classes)?;
    let mean_lifetime = mean_call_lifetime(&cfg.classes)?;
    if mean_rate.is_zero() {
        return Err(TrafficError::ZeroMeanRate);
    }
    Ok(cfg.target_mean_kbps.value() / (cfg.users as f64 * mean_lifetime * mean_rate.value()))
}

/// Flow arrival rate (flows/second) that makes the stationary mean
/// aggregate background demand equal the configured ARBIT.
pub fn calibrate_bg_rate(cfg: &BackgroundTrafficConfig) -> Result<f64, TrafficError> {
    if cfg.per_flow_kbps.value() <= 0.0 {
        return Err(TrafficError::NonPositiveFlowRate(cfg.per_flow_kbps.value()));
    }
    if cfg.mean_flow_duration_s.is_nan() || cfg.mean_flow_duration_s <= 0.0 {
        return Err(TrafficError::NonPositiveFlowDuration(
            cfg.mean_flow_duration_s,
        ));
    }
    Ok(cfg.arbit_kbps.value() / (cfg.per_flow_kbps.value() * cfg.mean_flow_duration_s))
}

/// A demand holding: `rate_kbps` is requested from `start_s` for
/// `duration_s` seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemandInterval {
    pub start_s: f64,
    pub duration_s: f64,
    pub rate_kbps: Kbps,
}

/// One generated femtocell call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Call {
    pub kind: CallKind,
    pub start_s: f64,
    pub lifetime_s: f64,
    pub rate_kbps: Kbps,
}

impl Call {
    pub fn interval(&self) -> DemandInterval {
        DemandInterval {
            start_s: self.start_s,
            duration_s: self.lifetime_s,
            rate_kbps: self.rate_kbps,
        }
    }
}

/// Per-tick demand samples: `samples[k]` is the demand at `k * t1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DemandTrace {
    pub tick_interval_s: f64,
    pub samples: Vec<Kbps>,
}

pub const TRACE_CSV_HEADER: &str = "t,value_kbps";

impl DemandTrace {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample_time(&self, tick: usize) -> f64 {
        tick as f64 * self.tick_interval_s
    }

    /// Mean demand over the whole trace (zero for an empty trace).
    pub fn time_average(&self) -> Kbps {
        if self.samples.is_empty() {
            return Bandwidth::zero();
        }
        let total: f64 = self.samples.iter().map(|s| s.value()).sum();
        Bandwidth::new(total / self.samples.len() as f64)
    }

    /// Dumps the trace as CSV (`t,value_kbps`); returns the row count.
    pub fn write_csv(&self, mut out: impl Write) -> io::Result<usize> {
        writeln!(out, "{TRACE_CSV_HEADER}")?;
        for (tick, sample) in self.samples.iter().enumerate() {
            writeln!(out, "{:.3},{:.3}", self.sample_time(tick), sample.value())?;
        }
        out.flush()?;
        Ok(self.samples.len())
    }
}

fn tick_count(duration_s: f64, tick_interval_s: f64) -> usize {
    (duration_s / tick_interval_s + 1e-9).floor().max(0.0) as usize
}

/// Sums interval rates onto the tick grid. An interval covers the ticks in
/// `[ceil(start / t1), ceil(end / t1))`; boundaries round up to the next
/// tick.
pub fn rasterize(
    intervals: impl IntoIterator<Item = DemandInterval>,
    duration_s: f64,
    tick_interval_s: f64,
) -> DemandTrace {
    assert!(tick_interval_s > 0.0, "tick interval must be positive");
    let ticks = tick_count(duration_s, tick_interval_s);
    let mut samples = vec![Bandwidth::zero(); ticks];
    for interval in intervals {
        let first = (interval.start_s / tick_interval_s).ceil().max(0.0) as usize;
        let end_s = interval.start_s + interval.duration_s;
        let last = ((end_s / tick_interval_s).ceil().max(0.0) as usize).min(ticks);
        for sample in samples.iter_mut().take(last).skip(first) {
            *sample += interval.rate_kbps;
        }
    }
    DemandTrace {
        tick_interval_s,
        samples,
    }
}

/// Draws the femtocell call arrivals over `[0, duration_s)`.
pub fn femto_calls(
    cfg: &FemtoTrafficConfig,
    seed: u64,
    duration_s: f64,
) -> Result<Vec<Call>, TrafficError> {
    let per_user_rate = calibrate_femto_rate(cfg)?;
    let aggregate_rate = per_user_rate * cfg.users as f64;
    let mut calls = Vec::new();
    if aggregate_rate <= 0.0 || duration_s <= 0.0 || duration_s.is_nan() {
        return Ok(calls);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gap = Exp::new(aggregate_rate).expect("positive arrival rate");
    let lifetimes: Vec<Exp<f64>> = cfg
        .classes
        .iter()
        .map(|c| Exp::new(1.0 / c.mean_lifetime_s).expect("positive lifetime"))
        .collect();
    let total = total_weight(&cfg.classes)?;

    let mut t = gap.sample(&mut rng);
    while t < duration_s {
        let mut pick = rng.random::<f64>() * total;
        let mut idx = cfg.classes.len() - 1;
        for (i, class) in cfg.classes.iter().enumerate() {
            if pick < class.mix_weight {
                idx = i;
                break;
            }
            pick -= class.mix_weight;
        }
        let class = &cfg.classes[idx];
        let lifetime_s = match cfg.lifetime_distribution {
            LifetimeDistribution::Exponential => lifetimes[idx].sample(&mut rng),
            LifetimeDistribution::Fixed => class.mean_lifetime_s,
        };
        calls.push(Call {
            kind: class.kind,
            start_s: t,
            lifetime_s,
            rate_kbps: class.rate_kbps,
        });
        t += gap.sample(&mut rng);
    }
    Ok(calls)
}

/// Femtocell demand sampled on the tick grid. Identical inputs produce a
/// bit-identical trace.
pub fn gen_femto_trace(
    cfg: &FemtoTrafficConfig,
    seed: u64,
    duration_s: f64,
    tick_interval_s: f64,
) -> Result<DemandTrace, TrafficError> {
    let calls = femto_calls(cfg, seed, duration_s)?;
    Ok(rasterize(
        calls.iter().map(Call::interval),
        duration_s,
        tick_interval_s,
    ))
}

/// Draws the background flow arrivals over `[0, duration_s)`.
pub fn background_flows(
    cfg: &BackgroundTrafficConfig,
    seed: u64,
    duration_s: f64,
) -> Result<Vec<DemandInterval>, TrafficError> {
    let arrival_rate = calibrate_bg_rate(cfg)?;
    let mut flows = Vec::new();
    if arrival_rate <= 0.0 || duration_s <= 0.0 || duration_s.is_nan() {
        return Ok(flows);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gap = Exp::new(arrival_rate).expect("positive arrival rate");
    let holding = Exp::new(1.0 / cfg.mean_flow_duration_s).expect("positive duration");

    let mut t = gap.sample(&mut rng);
    while t < duration_s {
        flows.push(DemandInterval {
            start_s: t,
            duration_s: holding.sample(&mut rng),
            rate_kbps: cfg.per_flow_kbps,
        });
        t += gap.sample(&mut rng);
    }
    Ok(flows)
}

/// Background demand sampled on the tick grid. Identical inputs produce a
/// bit-identical trace.
pub fn gen_bg_trace(
    cfg: &BackgroundTrafficConfig,
    seed: u64,
    duration_s: f64,
    tick_interval_s: f64,
) -> Result<DemandTrace, TrafficError> {
    let flows = background_flows(cfg, seed, duration_s)?;
    Ok(rasterize(flows, duration_s, tick_interval_s))
}
