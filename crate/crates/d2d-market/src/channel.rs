//! Physical-layer quantities for one D2D cluster: SINR, Shannon link rates,
//! the buyer's aggregate rate under even bandwidth sharing, and the
//! graph-asymptotic system delay.
//!
//! Path loss is the model's literal `1/sqrt(distance)` attenuation, not a
//! conventional `d^-alpha` exponent. All powers are in milliwatts; dBm
//! conversions happen at the configuration boundary.

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

/// One neighbor cluster treated as a point interference source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceSource {
    power_mw: f64,
    gain: f64,
    center_distance_m: f64,
}

impl InterferenceSource {
    pub fn new(power_mw: f64, gain: f64, center_distance_m: f64) -> Result<Self> {
        if !(power_mw >= 0.0) {
            return Err(Error::InvalidInput {
                what: "InterferenceSource.power_mw",
                why: format!("must be >= 0, got {power_mw}"),
            });
        }
        if !(gain >= 0.0) {
            return Err(Error::InvalidInput {
                what: "InterferenceSource.gain",
                why: format!("must be >= 0, got {gain}"),
            });
        }
        if !(center_distance_m > 0.0) {
            return Err(Error::InvalidInput {
                what: "InterferenceSource.center_distance_m",
                why: format!("must be > 0, got {center_distance_m}"),
            });
        }
        Ok(Self {
            power_mw,
            gain,
            center_distance_m,
        })
    }

    pub fn power_mw(&self) -> f64 {
        self.power_mw
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn center_distance_m(&self) -> f64 {
        self.center_distance_m
    }

    /// Received interference contribution, `power * gain / sqrt(distance)`.
    pub fn received_power_mw(&self) -> f64 {
        self.power_mw * self.gain / self.center_distance_m.sqrt()
    }
}

/// Shared radio conditions for every link in the cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct RadioEnvironment {
    bandwidth_hz: f64,
    noise_power_mw: f64,
    interferers: Vec<InterferenceSource>,
}

impl RadioEnvironment {
    pub fn new(
        bandwidth_hz: f64,
        noise_power_mw: f64,
        interferers: Vec<InterferenceSource>,
    ) -> Result<Self> {
        if !(bandwidth_hz > 0.0) {
            return Err(Error::InvalidInput {
                what: "RadioEnvironment.bandwidth_hz",
                why: format!("must be > 0, got {bandwidth_hz}"),
            });
        }
        if !(noise_power_mw > 0.0) {
            return Err(Error::InvalidInput {
                what: "RadioEnvironment.noise_power_mw",
                why: format!("must be > 0, got {noise_power_mw}"),
            });
        }
        Ok(Self {
            bandwidth_hz,
            noise_power_mw,
            interferers,
        })
    }

    pub fn bandwidth_hz(&self) -> f64 {
        self.bandwidth_hz
    }

    pub fn noise_power_mw(&self) -> f64 {
        self.noise_power_mw
    }

    pub fn interferers(&self) -> &[InterferenceSource] {
        &self.interferers
    }
}

/// Geometry of a single buyer-seller link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    distance_m: f64,
    gain: f64,
    max_power_mw: f64,
}

impl LinkGeometry {
    pub fn new(distance_m: f64, gain: f64, max_power_mw: f64) -> Result<Self> {
        if !(distance_m > 0.0) {
            return Err(Error::InvalidInput {
                what: "LinkGeometry.distance_m",
                why: format!("must be > 0, got {distance_m}"),
            });
        }
        if !(gain > 0.0) {
            return Err(Error::InvalidInput {
                what: "LinkGeometry.gain",
                why: format!("must be > 0, got {gain}"),
            });
        }
        if !(max_power_mw > 0.0) {
            return Err(Error::InvalidInput {
                what: "LinkGeometry.max_power_mw",
                why: format!("must be > 0, got {max_power_mw}"),
            });
        }
        Ok(Self {
            distance_m,
            gain,
            max_power_mw,
        })
    }

    pub fn distance_m(&self) -> f64 {
        self.distance_m
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn max_power_mw(&self) -> f64 {
        self.max_power_mw
    }
}

/// Inputs of the system-delay model.
///
/// `active_users` is the transaction's own head count (buyers plus sellers),
/// `background_users` everyone else transmitting in the cell. Their sum must
/// be at least 2 (the delay model is undefined below that) and at most
/// `max_users`, the cellular cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayParams {
    beta_ms: f64,
    active_users: u32,
    background_users: u32,
    max_users: u32,
}

impl DelayParams {
    pub fn new(
        beta_ms: f64,
        active_users: u32,
        background_users: u32,
        max_users: u32,
    ) -> Result<Self> {
        if !(beta_ms >= 0.0) {
            return Err(Error::InvalidInput {
                what: "DelayParams.beta_ms",
                why: format!("must be >= 0, got {beta_ms}"),
            });
        }
        if active_users < 1 {
            return Err(Error::InvalidInput {
                what: "DelayParams.active_users",
                why: "must be >= 1".into(),
            });
        }
        let total = active_users as u64 + background_users as u64;
        if total < 2 {
            return Err(Error::InvalidInput {
                what: "DelayParams",
                why: format!("active + background users must be >= 2, got {total}"),
            });
        }
        if total > max_users as u64 {
            return Err(Error::UserLimitExceeded {
                users: total as u32,
                max_users,
            });
        }
        Ok(Self {
            beta_ms,
            active_users,
            background_users,
            max_users,
        })
    }

    pub fn beta_ms(&self) -> f64 {
        self.beta_ms
    }

    pub fn active_users(&self) -> u32 {
        self.active_users
    }

    pub fn background_users(&self) -> u32 {
        self.background_users
    }

    pub fn max_users(&self) -> u32 {
        self.max_users
    }

    fn total_users(&self) -> u32 {
        self.active_users + self.background_users
    }
}

/// Total received interference power: the sum of every neighbor cluster's
/// `power * gain / sqrt(center_distance)` contribution. Zero when there are
/// no interferers.
pub fn interference_power(env: &RadioEnvironment) -> f64 {
    compensated_sum(env.interferers.iter().map(|s| s.received_power_mw()))
}

/// Transmit power at which the link reaches an SINR of exactly 1, i.e.
/// `sqrt(d) * (noise + interference) / gain`. The SINR at power `G` is
/// `G / unit_sinr_power`.
pub fn unit_sinr_power(link: &LinkGeometry, env: &RadioEnvironment) -> f64 {
    link.distance_m.sqrt() * (env.noise_power_mw + interference_power(env)) / link.gain
}

/// Signal-to-interference-plus-noise ratio at the given transmit power.
///
/// Linear in power; rejects powers outside `[0, max_power]`.
pub fn sinr(power_mw: f64, link: &LinkGeometry, env: &RadioEnvironment) -> Result<f64> {
    if !(power_mw >= 0.0 && power_mw <= link.max_power_mw) {
        return Err(Error::PowerOutOfRange {
            power_mw,
            max_power_mw: link.max_power_mw,
        });
    }
    let signal = power_mw * link.gain / link.distance_m.sqrt();
    Ok(signal / (env.noise_power_mw + interference_power(env)))
}

/// Shannon rate of one link over a bandwidth share: `share * log2(1 + sinr)`.
///
/// The share must lie in `(0, W]`.
pub fn link_rate(
    power_mw: f64,
    link: &LinkGeometry,
    env: &RadioEnvironment,
    bandwidth_share_hz: f64,
) -> Result<f64> {
    if !(bandwidth_share_hz > 0.0 && bandwidth_share_hz <= env.bandwidth_hz) {
        return Err(Error::BandwidthShareOutOfRange {
            share_hz: bandwidth_share_hz,
            bandwidth_hz: env.bandwidth_hz,
        });
    }
    let s = sinr(power_mw, link, env)?;
    Ok(bandwidth_share_hz * (1.0 + s).log2())
}

/// Buyer's total rate across N simultaneous links, each on a `W/(N+1)` share.
pub fn buyer_aggregate_rate(
    powers_mw: &[f64],
    links: &[LinkGeometry],
    env: &RadioEnvironment,
) -> Result<f64> {
    if powers_mw.len() != links.len() {
        return Err(Error::LengthMismatch {
            what: "buyer_aggregate_rate powers vs links",
            left: powers_mw.len(),
            right: links.len(),
        });
    }
    if powers_mw.is_empty() {
        return Err(Error::EmptyMarket { what: "links" });
    }
    let share = env.bandwidth_hz / (powers_mw.len() as f64 + 1.0);
    let mut rates = Vec::with_capacity(powers_mw.len());
    for (power, link) in powers_mw.iter().zip(links) {
        rates.push(link_rate(*power, link, env, share)?);
    }
    Ok(compensated_sum(rates))
}

/// System delay `beta * sqrt(Y+V) / sqrt(ln(Y+V))` in milliseconds.
///
/// The logarithm is the natural log; the choice is a constant factor the
/// `beta` coefficient absorbs. Well defined because `DelayParams` guarantees
/// `Y+V >= 2`.
pub fn system_delay(params: &DelayParams) -> f64 {
    let total = params.total_users() as f64;
    params.beta_ms * total.sqrt() / total.ln().sqrt()
}
