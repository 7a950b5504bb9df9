//! Per-instant bandwidth allocation on a shared backhaul link.
//!
//! Two allocation schemes share a link of capacity `C` between aggregate
//! background (non-femtocell) demand and aggregate femtocell demand:
//!
//! * **traditional**: background traffic is served first and femtocell
//!   calls get whatever residual capacity is left;
//! * **proposed**: a broker-negotiated reservation guarantees the
//!   femtocell side a bandwidth floor, borrowed from background traffic
//!   when the residual falls short.
//!
//! Everything in this module is a pure function of its arguments; there is
//! no randomness and no state, so calls are safe from any thread.

use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::Scalar;

/// Non-negative bandwidth in kilobits per second.
///
/// The constructor clamps negative (and NaN) inputs to zero, so a value of
/// this type is always a valid amount of bandwidth.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Bandwidth<S = f64>(S);

impl<S: Scalar> Bandwidth<S> {
    /// Wraps a kbps value, clamping anything below zero (or NaN) to zero.
    pub fn new(kbps: S) -> Self {
        Bandwidth(kbps.max(S::zero()))
    }

    pub fn zero() -> Self {
        Bandwidth(S::zero())
    }

    /// The underlying kbps value.
    pub fn value(self) -> S {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == S::zero()
    }

    /// `max(0, self − rhs)`; subtraction never goes negative.
    pub fn saturating_sub(self, rhs: Self) -> Self {
        Bandwidth((self.0 - rhs.0).max(S::zero()))
    }

    pub fn min(self, rhs: Self) -> Self {
        Bandwidth(self.0.min(rhs.0))
    }

    pub fn max(self, rhs: Self) -> Self {
        Bandwidth(self.0.max(rhs.0))
    }
}

impl<S: Scalar> Add for Bandwidth<S> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Bandwidth(self.0 + rhs.0)
    }
}

impl<S: Scalar> AddAssign for Bandwidth<S> {
    fn add_assign(&mut self, rhs: Self) {
        self.0 = self.0 + rhs.0;
    }
}

impl<S: Scalar> Sum for Bandwidth<S> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Bandwidth::zero(), |acc, b| acc + b)
    }
}

impl<S: Scalar + Serialize> Serialize for Bandwidth<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de, S: Scalar + Deserialize<'de>> Deserialize<'de> for Bandwidth<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let kbps = S::deserialize(deserializer)?;
        if !kbps.is_finite() || kbps < S::zero() {
            return Err(D::Error::custom(format!(
                "bandwidth must be a finite, non-negative number of kbps (got {kbps})"
            )));
        }
        Ok(Bandwidth(kbps))
    }
}

/// One monitoring instant: the demands observed on the link at time `time_s`.
///
/// Both fields are *demands*, not served amounts; either may exceed the link
/// capacity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSample<S = f64> {
    /// Simulation time in seconds (non-negative).
    pub time_s: f64,
    /// Aggregate non-femtocell (household internet) demand.
    pub background_demand: Bandwidth<S>,
    /// Aggregate requested bandwidth of all live femtocell calls.
    pub femto_demand: Bandwidth<S>,
}

impl<S: Scalar> LinkSample<S> {
    pub fn new(time_s: f64, background_demand: Bandwidth<S>, femto_demand: Bandwidth<S>) -> Self {
        debug_assert!(time_s >= 0.0, "sample time must be non-negative");
        LinkSample {
            time_s,
            background_demand,
            femto_demand,
        }
    }
}

/// Outcome of allocating one [`LinkSample`] under one scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Allocation<S = f64> {
    /// Bandwidth the femtocell side is entitled to at this instant.
    pub femto_grant: Bandwidth<S>,
    /// Femtocell demand actually served (≤ grant, ≤ demand).
    pub femto_served: Bandwidth<S>,
    /// Background demand actually served.
    pub background_served: Bandwidth<S>,
    /// Bandwidth taken from background traffic to honor the reservation.
    pub borrowed: Bandwidth<S>,
    /// Satisfaction level in [0, 1].
    pub satisfaction: S,
}

impl<S: Scalar> Allocation<S> {
    /// Total bandwidth served at this instant (femtocell plus background).
    pub fn total_served(&self) -> Bandwidth<S> {
        self.femto_served + self.background_served
    }
}

/// Residual capacity left for femtocell calls once background demand is
/// taken out, clamped at zero when demand exceeds capacity.
pub fn available_bandwidth<S: Scalar>(
    capacity: Bandwidth<S>,
    background_demand: Bandwidth<S>,
) -> Bandwidth<S> {
    capacity.saturating_sub(background_demand)
}

/// Satisfaction level: 1 when the available bandwidth covers the demand,
/// otherwise the served fraction `available / demand`. Zero demand counts
/// as fully satisfied.
pub fn satisfaction_level<S: Scalar>(available: Bandwidth<S>, demand: Bandwidth<S>) -> S {
    if demand.is_zero() || available >= demand {
        S::one()
    } else {
        available.value() / demand.value()
    }
}

/// Bandwidth that must be taken from background traffic to honor a
/// reservation: `max(0, reserved − available)`.
pub fn borrowed_bandwidth<S: Scalar>(
    reserved: Bandwidth<S>,
    available: Bandwidth<S>,
) -> Bandwidth<S> {
    reserved.saturating_sub(available)
}

/// No-prioritization baseline: background traffic is served first and the
/// femtocell side gets the residual.
pub fn allocate_traditional<S: Scalar>(
    capacity: Bandwidth<S>,
    sample: LinkSample<S>,
) -> Allocation<S> {
    let grant = available_bandwidth(capacity, sample.background_demand);
    Allocation {
        femto_grant: grant,
        femto_served: sample.femto_demand.min(grant),
        background_served: sample.background_demand.min(capacity),
        borrowed: Bandwidth::zero(),
        satisfaction: satisfaction_level(grant, sample.femto_demand),
    }
}

/// Reservation scheme: the femtocell side is entitled to at least
/// `reserved`, taken from background traffic when the residual falls short.
///
/// Reserved headroom above actual femtocell use is held for imminent calls
/// and is *not* released to background traffic; that holdback is what a
/// reservation costs in utilization.
///
/// Panics if `reserved` exceeds `capacity`; the broker caps reservations at
/// link capacity before they reach this point.
pub fn allocate_proposed<S: Scalar>(
    capacity: Bandwidth<S>,
    sample: LinkSample<S>,
    reserved: Bandwidth<S>,
) -> Allocation<S> {
    assert!(
        reserved <= capacity,
        "reservation of {:?} kbps exceeds link capacity {:?} kbps",
        reserved.value(),
        capacity.value()
    );
    if reserved.is_zero() {
        // a zero reservation is exactly the no-prioritization scheme
        return allocate_traditional(capacity, sample);
    }
    let residual = available_bandwidth(capacity, sample.background_demand);
    let grant = capacity.min(reserved.max(residual));
    let femto_served = sample.femto_demand.min(grant);
    let held = reserved.max(femto_served);
    Allocation {
        femto_grant: grant,
        femto_served,
        background_served: sample.background_demand.min(capacity.saturating_sub(held)),
        borrowed: borrowed_bandwidth(reserved, residual),
        satisfaction: satisfaction_level(grant, sample.femto_demand),
    }
}

/// Fraction of link capacity in use: `(femto_served + background_served) / C`.
///
/// Capacity must be positive; a zero capacity is a configuration error and
/// is rejected during config validation.
pub fn utilization<S: Scalar>(allocation: &Allocation<S>, capacity: Bandwidth<S>) -> S {
    assert!(
        capacity.value() > S::zero(),
        "link capacity must be positive"
    );
    allocation.total_served().value() / capacity.value()
}
