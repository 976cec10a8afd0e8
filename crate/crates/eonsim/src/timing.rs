//! Closed-form recovery-time models for the three protection schemes and
//! the recovery-time-constraint check.
//!
//! All times are in microseconds. The models share four ingredients:
//! failure detection (`f_d`), per-node message processing and
//! acknowledgement (`M_p`, `M_a`), per-node cross-connect configuration
//! (`c_x`), and round-trip signal propagation along the recovery route.
//! `n` counts the interior nodes of the route (hops − 1): pass-through
//! nodes reconfigure their switching fabric, endpoints terminate.
//!
//! - Shared backup (SPP): signaling traverses the whole backup and each
//!   interior node configures its cross-connect in turn, so the `n·c_x`
//!   term is serialized.
//! - Dedicated backup (DPP): interior cross-connects are already in place
//!   at setup time, so no `c_x` term remains.
//! - Intermediate-node scheme (INCB): setup messages launch simultaneously
//!   from both endpoints toward a designated interior node and every node
//!   triggers its cross-connect on message receipt, so the route's two
//!   halves overlap and the serialized `n·c_x` collapses into a single
//!   `c_x`; the slower half dominates.
//!
//! Detection time is added uniformly to all three schemes; setting
//! `f_d_us = 0` removes it without touching any inter-scheme ordering.

use serde::Serialize;

/// Recovery-time constraint default for the 20-node backbone: 45 ms.
pub const RTC_ARPANET_US: f64 = 45_000.0;
/// Recovery-time constraint default for the 11-node European mesh: 21 ms.
pub const RTC_COST239_US: f64 = 21_000.0;

pub const DEFAULT_F_D_US: f64 = 10.0;
pub const DEFAULT_M_P_US: f64 = 10.0;
pub const DEFAULT_M_A_US: f64 = 10.0;
/// Propagation: 400 μs per 85 km of fiber.
pub const DEFAULT_PROP_US_PER_KM: f64 = 400.0 / 85.0;
pub const DEFAULT_C_X_US: f64 = 2_000.0;

/// Model parameters, all in μs (propagation in μs per km).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimingParams {
    pub f_d_us: f64,
    pub m_p_us: f64,
    pub m_a_us: f64,
    pub prop_us_per_km: f64,
    pub c_x_us: f64,
    pub rtc_us: f64,
}

impl TimingParams {
    /// Defaults with an explicit recovery-time constraint.
    pub fn with_rtc(rtc_us: f64) -> TimingParams {
        TimingParams {
            f_d_us: DEFAULT_F_D_US,
            m_p_us: DEFAULT_M_P_US,
            m_a_us: DEFAULT_M_A_US,
            prop_us_per_km: DEFAULT_PROP_US_PER_KM,
            c_x_us: DEFAULT_C_X_US,
            rtc_us,
        }
    }
}

impl Default for TimingParams {
    /// Defaults with the 45 ms constraint of the larger builtin network.
    fn default() -> TimingParams {
        TimingParams::with_rtc(RTC_ARPANET_US)
    }
}

/// A recovery time decomposed into its additive components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecoveryTime {
    pub detection_us: f64,
    pub processing_us: f64,
    pub cross_connect_us: f64,
    pub propagation_us: f64,
}

impl RecoveryTime {
    pub const ZERO: RecoveryTime = RecoveryTime {
        detection_us: 0.0,
        processing_us: 0.0,
        cross_connect_us: 0.0,
        propagation_us: 0.0,
    };

    pub fn total_us(&self) -> f64 {
        self.detection_us + self.processing_us + self.cross_connect_us + self.propagation_us
    }
}

/// Shared-backup recovery over a route with `n` interior nodes and length
/// `l_km`: detection + round-trip processing at interior nodes + serialized
/// cross-connects + round-trip propagation.
pub fn rt_spp(p: &TimingParams, n: u32, l_km: f64) -> RecoveryTime {
    RecoveryTime {
        detection_us: p.f_d_us,
        processing_us: 2.0 * n as f64 * (p.m_p_us + p.m_a_us),
        cross_connect_us: n as f64 * p.c_x_us,
        propagation_us: 2.0 * l_km * p.prop_us_per_km,
    }
}

/// Dedicated-backup recovery: as [`rt_spp`] but with no cross-connect work,
/// since the backup is pre-cross-connected at setup.
pub fn rt_dpp(p: &TimingParams, n: u32, l_km: f64) -> RecoveryTime {
    RecoveryTime {
        detection_us: p.f_d_us,
        processing_us: 2.0 * n as f64 * (p.m_p_us + p.m_a_us),
        cross_connect_us: 0.0,
        propagation_us: 2.0 * l_km * p.prop_us_per_km,
    }
}

/// Intermediate-node recovery: both halves of the backup are signaled in
/// parallel, the slower half dominates, and one overlapped cross-connect
/// configuration remains. Each half is `(interior node count, length km)`.
pub fn rt_incb(p: &TimingParams, half1: (u32, f64), half2: (u32, f64)) -> RecoveryTime {
    let part = |(n, l_km): (u32, f64)| {
        (
            2.0 * n as f64 * (p.m_p_us + p.m_a_us),
            2.0 * l_km * p.prop_us_per_km,
        )
    };
    let (proc1, prop1) = part(half1);
    let (proc2, prop2) = part(half2);
    let (processing_us, propagation_us) = if proc1 + prop1 >= proc2 + prop2 {
        (proc1, prop1)
    } else {
        (proc2, prop2)
    };
    RecoveryTime {
        detection_us: p.f_d_us,
        processing_us,
        cross_connect_us: p.c_x_us,
        propagation_us,
    }
}

/// Accepts iff the recovery time meets the constraint (boundary inclusive).
pub fn check_rtc(p: &TimingParams, rt: &RecoveryTime) -> bool {
    rt.total_us() <= p.rtc_us
}
