//! The bandwidth broker: sliding demand history, dynamic reservation, SLA
//! policy, and the call-history log.
//!
//! The broker samples femtocell demand every `t1_s` seconds and keeps the
//! most recent samples in a ring buffer. The reservation granted for the
//! next instant is the arithmetic mean of the `N = T_s / t1_s` samples
//! starting `m` samples back, capped by the SLA policy. Pushing the current
//! sample happens *after* the instant's reservation has been read, so a
//! reservation never depends on the demand it is reserving for.

use std::collections::VecDeque;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::Bandwidth;
use crate::scalar::Scalar;

/// Sliding-window parameters, chosen by the operator.
///
/// In config files these appear under `window` as `t1_s` (sampling
/// interval), `T_s` (observation period) and `m` (start offset of the
/// window, in samples).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindowParams {
    /// Sampling interval in seconds.
    #[serde(rename = "t1_s")]
    pub sample_interval_s: f64,
    /// Observation period in seconds; must be an integer multiple of the
    /// sampling interval.
    #[serde(rename = "T_s")]
    pub observation_period_s: f64,
    /// How many samples back the window starts (1 = the newest sample).
    #[serde(rename = "m")]
    pub start_offset: usize,
}

impl Default for WindowParams {
    fn default() -> Self {
        WindowParams {
            sample_interval_s: 1.0,
            observation_period_s: 60.0,
            start_offset: 1,
        }
    }
}

impl WindowParams {
    /// Number of samples averaged per reservation (`T_s / t1_s`).
    pub fn sample_count(&self) -> Result<usize, BrokerError> {
        if self.sample_interval_s.is_nan() || self.sample_interval_s <= 0.0 {
            return Err(BrokerError::NonPositiveInterval(self.sample_interval_s));
        }
        if self.observation_period_s.is_nan() || self.observation_period_s <= 0.0 {
            return Err(BrokerError::NonPositivePeriod(self.observation_period_s));
        }
        if self.start_offset == 0 {
            return Err(BrokerError::ZeroStartOffset);
        }
        let ratio = self.observation_period_s / self.sample_interval_s;
        let rounded = ratio.round();
        if rounded < 1.0 || (ratio - rounded).abs() > 1e-9 {
            return Err(BrokerError::PeriodNotMultiple {
                observation_period_s: self.observation_period_s,
                sample_interval_s: self.sample_interval_s,
            });
        }
        Ok(rounded as usize)
    }

    /// Configuration problems, one message per violation, with the config
    /// keys they refer to.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.sample_interval_s.is_nan() || self.sample_interval_s <= 0.0 {
            out.push(format!(
                "window.t1_s must be positive (got {})",
                self.sample_interval_s
            ));
        }
        if self.observation_period_s.is_nan() || self.observation_period_s <= 0.0 {
            out.push(format!(
                "window.T_s must be positive (got {})",
                self.observation_period_s
            ));
        }
        if self.start_offset == 0 {
            out.push("window.m must be at least 1".to_string());
        }
        if out.is_empty() {
            if let Err(err @ BrokerError::PeriodNotMultiple { .. }) = self.sample_count() {
                out.push(err.to_string());
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BrokerError {
    #[error("window.t1_s must be positive (got {0})")]
    NonPositiveInterval(f64),
    #[error("window.T_s must be positive (got {0})")]
    NonPositivePeriod(f64),
    #[error("window.m must be at least 1")]
    ZeroStartOffset,
    #[error("window.T_s ({observation_period_s}) is not an integer multiple of window.t1_s ({sample_interval_s})")]
    PeriodNotMultiple {
        observation_period_s: f64,
        sample_interval_s: f64,
    },
    #[error("reservation cap {cap_kbps} kbps exceeds link capacity {capacity_kbps} kbps")]
    CapAboveCapacity { cap_kbps: f64, capacity_kbps: f64 },
}

/// Ring buffer of recent femtocell demand samples, newest first.
///
/// Holds at most `(m − 1) + N` samples: the `m − 1` newest samples sit in
/// front of the window and the `N` after them are the ones averaged.
#[derive(Debug, Clone)]
pub struct ReservationWindow<S = f64> {
    params: WindowParams,
    sample_count: usize,
    samples: VecDeque<Bandwidth<S>>,
}

impl<S: Scalar> ReservationWindow<S> {
    pub fn new(params: WindowParams) -> Result<Self, BrokerError> {
        let sample_count = params.sample_count()?;
        Ok(ReservationWindow {
            params,
            sample_count,
            samples: VecDeque::with_capacity((params.start_offset - 1) + sample_count),
        })
    }

    /// Maximum number of samples retained.
    pub fn capacity(&self) -> usize {
        (self.params.start_offset - 1) + self.sample_count
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn params(&self) -> WindowParams {
        self.params
    }

    /// Records the demand observed at the current instant, evicting the
    /// oldest sample when full.
    ///
    /// Call once per sampling tick, after the tick's reservation has been
    /// read: the reservation for an instant must not see that instant's
    /// own demand.
    pub fn push(&mut self, demand: Bandwidth<S>) {
        self.samples.push_front(demand);
        self.samples.truncate(self.capacity());
    }

    /// Arithmetic mean of the samples inside the observation window.
    ///
    /// With fewer samples than the window spans, the mean is taken over
    /// whatever falls inside it (cold-start partial mean); an empty window
    /// yields zero.
    pub fn window_mean(&self) -> Bandwidth<S> {
        let mut total = S::zero();
        let mut count = 0usize;
        for sample in self
            .samples
            .iter()
            .skip(self.params.start_offset - 1)
            .take(self.sample_count)
        {
            total = total + sample.value();
            count += 1;
        }
        if count == 0 {
            Bandwidth::zero()
        } else {
            Bandwidth::new(total / S::from_usize(count).expect("sample count fits in scalar"))
        }
    }
}

/// The SLA between the link operator and the femtocell operator: link
/// capacity, the cap on how much may be reserved, and the observation
/// window the broker runs with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlaPolicy<S = f64> {
    capacity: Bandwidth<S>,
    reserve_cap: Bandwidth<S>,
    window: WindowParams,
}

impl<S: Scalar> SlaPolicy<S> {
    pub fn new(
        capacity: Bandwidth<S>,
        reserve_cap: Bandwidth<S>,
        window: WindowParams,
    ) -> Result<Self, BrokerError> {
        window.sample_count()?;
        if reserve_cap > capacity {
            return Err(BrokerError::CapAboveCapacity {
                cap_kbps: reserve_cap.value().to_f64().unwrap_or(f64::NAN),
                capacity_kbps: capacity.value().to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(SlaPolicy {
            capacity,
            reserve_cap,
            window,
        })
    }

    /// Policy with the reservation cap defaulted to the full link capacity.
    pub fn for_capacity(capacity: Bandwidth<S>, window: WindowParams) -> Result<Self, BrokerError> {
        SlaPolicy::new(capacity, capacity, window)
    }

    pub fn capacity(&self) -> Bandwidth<S> {
        self.capacity
    }

    pub fn reserve_cap(&self) -> Bandwidth<S> {
        self.reserve_cap
    }

    pub fn window(&self) -> WindowParams {
        self.window
    }

    pub fn new_window(&self) -> ReservationWindow<S> {
        ReservationWindow::new(self.window).expect("policy window already validated")
    }
}

/// The dynamic reservation for the next instant: the window mean of recent
/// femtocell demand, capped by the policy.
pub fn reserve_bandwidth<S: Scalar>(
    window: &ReservationWindow<S>,
    policy: &SlaPolicy<S>,
) -> Bandwidth<S> {
    window.window_mean().min(policy.reserve_cap())
}

/// SLA negotiation outcome: the granted floor is the requested reservation,
/// capped by the policy. This value feeds the proposed-scheme allocator.
pub fn negotiate<S: Scalar>(policy: &SlaPolicy<S>, requested: Bandwidth<S>) -> Bandwidth<S> {
    requested.min(policy.reserve_cap())
}

/// Which allocation scheme produced a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Traditional,
    Proposed,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Traditional => "traditional",
            Scheme::Proposed => "proposed",
        }
    }

    /// Both schemes, in canonical (baseline first) order.
    pub fn all() -> [Scheme; 2] {
        [Scheme::Traditional, Scheme::Proposed]
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "traditional" => Ok(Scheme::Traditional),
            "proposed" => Ok(Scheme::Proposed),
            other => Err(format!(
                "unknown scheme '{other}' (expected 'traditional' or 'proposed')"
            )),
        }
    }
}

/// One row of the broker's call/demand history database.
///
/// Within a run, records are strictly increasing in time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryRecord<S = f64> {
    pub time_s: f64,
    pub femto_demand: Bandwidth<S>,
    pub background_demand: Bandwidth<S>,
    pub reserved: Bandwidth<S>,
    pub scheme: Scheme,
}

pub const HISTORY_CSV_HEADER: &str = "t,b_f,b_i,b_r,scheme";

/// Writes the history as CSV (`t,b_f,b_i,b_r,scheme`) and returns the
/// number of data rows written.
pub fn write_history_csv<S: Scalar>(
    records: &[HistoryRecord<S>],
    mut out: impl Write,
) -> io::Result<usize> {
    writeln!(out, "{HISTORY_CSV_HEADER}")?;
    for record in records {
        writeln!(
            out,
            "{:.3},{:.3},{:.3},{:.3},{}",
            record.time_s,
            record.femto_demand.value(),
            record.background_demand.value(),
            record.reserved.value(),
            record.scheme
        )?;
    }
    out.flush()?;
    Ok(records.len())
}

#[derive(Debug, thiserror::Error)]
#[error("cannot write history to {path}: {source}")]
pub struct HistoryExportError {
    pub path: PathBuf,
    #[source]
    pub source: io::Error,
}

/// Writes the history CSV to `path`, returning the number of data rows.
pub fn export_history<S: Scalar>(
    records: &[HistoryRecord<S>],
    path: &Path,
) -> Result<usize, HistoryExportError> {
    let wrap = |source| HistoryExportError {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(wrap)?;
    write_history_csv(records, BufWriter::new(file)).map_err(wrap)
}

#[cfg(test)]
mod tests {
    use super::*;

    use proptest::prelude::*;

    fn kbps(v: f64) -> Bandwidth {
        Bandwidth::new(v)
    }

    fn window(t1: f64, period: f64, offset: usize) -> ReservationWindow {
        ReservationWindow::new(WindowParams {
            sample_interval_s: t1,
            observation_period_s: period,
            start_offset: offset,
        })
        .unwrap()
    }

    fn policy(capacity: f64) -> SlaPolicy {
        SlaPolicy::for_capacity(kbps(capacity), WindowParams::default()).unwrap()
    }

    /// Brute-force reference: collect samples newest-first, slice positions
    /// m..m+N (1-indexed), average.
    fn oracle_mean(samples: &[f64], sample_count: usize, offset: usize) -> f64 {
        let start = offset - 1;
        let end = (start + sample_count).min(samples.len());
        if start >= samples.len() {
            return 0.0;
        }
        let slice = &samples[start..end];
        slice.iter().sum::<f64>() / slice.len() as f64
    }

    #[test]
    fn rejects_invalid_window_params() {
        assert!(matches!(
            window_err(1.0, 61.5, 1),
            BrokerError::PeriodNotMultiple { .. }
        ));
        assert!(matches!(
            window_err(0.0, 60.0, 1),
            BrokerError::NonPositiveInterval(_)
        ));
        assert!(matches!(
            window_err(1.0, 60.0, 0),
            BrokerError::ZeroStartOffset
        ));
    }

    fn window_err(t1: f64, period: f64, offset: usize) -> BrokerError {
        ReservationWindow::<f64>::new(WindowParams {
            sample_interval_s: t1,
            observation_period_s: period,
            start_offset: offset,
        })
        .unwrap_err()
    }

    #[test]
    fn push_grows_then_evicts() {
        let mut w = window(1.0, 60.0, 1);
        w.push(kbps(450.0));
        assert_eq!(w.len(), 1);

        for i in 0..60 {
            w.push(kbps(i as f64));
        }
        assert_eq!(w.len(), 60);
        w.push(kbps(0.0));
        assert_eq!(w.len(), 60);
        // newest sample is the zero just pushed
        assert_eq!(w.samples.front().copied(), Some(kbps(0.0)));
    }

    #[test]
    fn mean_of_constant_history_is_the_constant() {
        let mut w = window(1.0, 60.0, 1);
        for _ in 0..60 {
            w.push(kbps(450.0));
        }
        assert_eq!(w.window_mean().value(), 450.0);
    }

    #[test]
    fn mean_of_three_samples() {
        let mut w = window(1.0, 3.0, 1);
        w.push(kbps(300.0));
        w.push(kbps(200.0));
        w.push(kbps(100.0)); // newest first: [100, 200, 300]
        assert_eq!(w.window_mean().value(), 200.0);
    }

    #[test]
    fn partial_mean_on_cold_start() {
        let mut w = window(1.0, 60.0, 1);
        assert_eq!(w.window_mean().value(), 0.0);
        w.push(kbps(400.0));
        assert_eq!(w.window_mean().value(), 400.0);
    }

    #[test]
    fn degenerate_window_returns_newest_sample() {
        let mut w = window(1.0, 1.0, 1);
        w.push(kbps(100.0));
        w.push(kbps(900.0));
        assert_eq!(w.window_mean().value(), 900.0);
    }

    #[test]
    fn offset_skips_newest_samples() {
        let mut w = window(1.0, 2.0, 3); // N=2, m=3: capacity 4
        for v in [10.0, 20.0, 30.0, 40.0] {
            w.push(kbps(v));
        }
        // newest-first buffer is [40, 30, 20, 10]; window covers [20, 10]
        assert_eq!(w.window_mean().value(), 15.0);
        // with only the newest two samples present the window is empty
        let mut fresh = window(1.0, 2.0, 3);
        fresh.push(kbps(10.0));
        fresh.push(kbps(20.0));
        assert_eq!(fresh.window_mean().value(), 0.0);
    }

    #[test]
    fn reservation_is_capped_by_policy() {
        let p = SlaPolicy::new(kbps(6000.0), kbps(300.0), WindowParams::default()).unwrap();
        let mut w = p.new_window();
        for _ in 0..60 {
            w.push(kbps(450.0));
        }
        assert_eq!(reserve_bandwidth(&w, &p).value(), 300.0);
    }

    #[test]
    fn negotiate_caps_requests() {
        let p = policy(6000.0);
        assert_eq!(negotiate(&p, kbps(450.0)).value(), 450.0);
        assert_eq!(negotiate(&p, kbps(7000.0)).value(), 6000.0);
        assert_eq!(negotiate(&p, kbps(0.0)).value(), 0.0);
    }

    #[test]
    fn policy_rejects_cap_above_capacity() {
        let err = SlaPolicy::new(kbps(6000.0), kbps(6001.0), WindowParams::default()).unwrap_err();
        assert!(matches!(err, BrokerError::CapAboveCapacity { .. }));
    }

    #[test]
    fn history_csv_round() {
        let records = vec![
            HistoryRecord {
                time_s: 0.0,
                femto_demand: kbps(100.0),
                background_demand: kbps(5000.0),
                reserved: kbps(0.0),
                scheme: Scheme::Proposed,
            },
            HistoryRecord {
                time_s: 1.0,
                femto_demand: kbps(114.4),
                background_demand: kbps(5100.0),
                reserved: kbps(100.0),
                scheme: Scheme::Proposed,
            },
            HistoryRecord {
                time_s: 2.0,
                femto_demand: kbps(114.4),
                background_demand: kbps(5250.0),
                reserved: kbps(107.2),
                scheme: Scheme::Proposed,
            },
        ];
        let mut buf = Vec::new();
        let rows = write_history_csv(&records, &mut buf).unwrap();
        assert_eq!(rows, 3);
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], HISTORY_CSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "0.000,100.000,5000.000,0.000,proposed");
        assert_eq!(lines[2], "1.000,114.400,5100.000,100.000,proposed");
    }

    #[test]
    fn empty_history_writes_header_only() {
        let mut buf = Vec::new();
        let rows = write_history_csv::<f64>(&[], &mut buf).unwrap();
        assert_eq!(rows, 0);
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            format!("{HISTORY_CSV_HEADER}\n")
        );
    }

    #[test]
    fn export_error_names_the_path() {
        let path = Path::new("/nonexistent-dir/history.csv");
        let err = export_history::<f64>(&[], path).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/history.csv"));
    }

    proptest! {
        #[test]
        fn window_mean_matches_brute_force(
            values in proptest::collection::vec(0.0f64..10_000.0, 0..200),
            n in 1usize..64,
            m in 1usize..4,
        ) {
            let mut w = window(1.0, n as f64, m);
            for &v in &values {
                w.push(kbps(v));
            }
            // oracle sees the same newest-first view, straight from the input
            let newest_first: Vec<f64> = values.iter().rev().copied()
                .take((m - 1) + n)
                .collect();
            let expected = oracle_mean(&newest_first, n, m);
            let got = w.window_mean().value();
            prop_assert!((got - expected).abs() <= 1e-9 * expected.max(1.0));

            // the mean is bounded by the window contents
            if !newest_first.is_empty() {
                let lo = newest_first.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = newest_first.iter().cloned().fold(0.0, f64::max);
                if newest_first.len() > m - 1 {
                    prop_assert!(got >= lo - 1e-9 && got <= hi + 1e-9);
                }
            }
        }
    }
}
