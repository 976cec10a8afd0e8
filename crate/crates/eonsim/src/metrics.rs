//! Aggregation of provisioning and recovery results into the reported
//! figures: blocking probability, provisioning ratio, and mean recovery
//! time.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::failure::{Impact, RecoveryOutcome};
use crate::protection::{Connection, ProvisionOutcome, RejectReason, Scheme};
use crate::spectrum::SpectrumGrid;

/// Blocking probability: rejected requests over demanded requests.
pub fn bbp(outcomes: &[ProvisionOutcome]) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(Error::validation("bbp undefined for zero requests"));
    }
    let rejected = outcomes.iter().filter(|o| !o.is_accepted()).count();
    Ok(rejected as f64 / outcomes.len() as f64)
}

/// Demand-weighted variant: rejected slots over demanded slots.
pub fn bbp_fs_weighted(outcomes: &[ProvisionOutcome]) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(Error::validation("bbp undefined for zero requests"));
    }
    let mut rejected = 0usize;
    let mut demanded = 0usize;
    for o in outcomes {
        demanded += o.request().fr;
        if !o.is_accepted() {
            rejected += o.request().fr;
        }
    }
    Ok(rejected as f64 / demanded as f64)
}

/// Provisioning ratio: occupied slot-link cells (working + backup, shared
/// cells counted once) over the total accepted demand. Always at least 1
/// when anything is accepted — the primary alone occupies `fr` cells per
/// hop.
pub fn bpr<'a>(
    grid: &SpectrumGrid,
    accepted: impl IntoIterator<Item = &'a Connection>,
) -> Result<f64> {
    let demand: usize = accepted.into_iter().map(|c| c.request.fr).sum();
    if demand == 0 {
        return Err(Error::validation("bpr undefined with zero accepted connections"));
    }
    let (working, backup) = grid.utilization();
    Ok((working + backup) as f64 / demand as f64)
}

/// Mean recovery time over outcomes that actually performed recovery
/// signaling; survivals that never left the primary (recovery time 0) are
/// excluded. `None` when nothing recovered with signaling.
pub fn mean_rt(outcomes: &[RecoveryOutcome]) -> Option<f64> {
    let mut total = 0.0;
    let mut count = 0usize;
    for o in outcomes {
        if !o.recovered {
            continue;
        }
        if let Some(rt) = o.rt {
            let t = rt.total_us();
            if t > 0.0 {
                total += t;
                count += 1;
            }
        }
    }
    (count > 0).then(|| total / count as f64)
}

/// Unrecovered share among affected connections (impact other than
/// untouched). `None` when no connection was affected.
pub fn recovery_failure_rate(outcomes: &[RecoveryOutcome]) -> Option<f64> {
    let mut affected = 0usize;
    let mut failed = 0usize;
    for o in outcomes {
        if o.impact == Impact::Untouched {
            continue;
        }
        affected += 1;
        if !o.recovered {
            failed += 1;
        }
    }
    (affected > 0).then(|| failed as f64 / affected as f64)
}

/// Rejection histogram by reason.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RejectionCounts {
    pub no_disjoint_route: usize,
    pub no_spectrum_primary: usize,
    pub no_spectrum_backup: usize,
    pub rtc_violation: usize,
}

impl RejectionCounts {
    pub fn tally(outcomes: &[ProvisionOutcome]) -> RejectionCounts {
        let mut counts = RejectionCounts::default();
        for o in outcomes {
            if let ProvisionOutcome::Rejected { reason, .. } = o {
                match reason {
                    RejectReason::NoDisjointRoute => counts.no_disjoint_route += 1,
                    RejectReason::NoSpectrumPrimary => counts.no_spectrum_primary += 1,
                    RejectReason::NoSpectrumBackup => counts.no_spectrum_backup += 1,
                    RejectReason::RtcViolation => counts.rtc_violation += 1,
                }
            }
        }
        counts
    }

    pub fn total(&self) -> usize {
        self.no_disjoint_route + self.no_spectrum_primary + self.no_spectrum_backup + self.rtc_violation
    }
}

/// Aggregated figures for one (scheme, request count, seed) run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub scheme: Scheme,
    pub topology: String,
    pub seed: u64,
    pub request_count: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub bbp: f64,
    pub bpr: Option<f64>,
    pub mean_rt_us: Option<f64>,
    pub recovery_failure_rate: Option<f64>,
    pub rejections: RejectionCounts,
}

impl RunReport {
    /// Pinned CSV column order.
    pub const CSV_HEADER: &'static str = "scheme,topology,seed,request_count,accepted,rejected,\
bbp,bpr,mean_rt_us,recovery_failure_rate,\
no_disjoint_route,no_spectrum_primary,no_spectrum_backup,rtc_violation";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.6},{},{},{},{},{},{},{}",
            self.scheme,
            self.topology,
            self.seed,
            self.request_count,
            self.accepted,
            self.rejected,
            self.bbp,
            self.bpr.map(|v| format!("{v:.6}")).unwrap_or_default(),
            self.mean_rt_us.map(|v| format!("{v:.3}")).unwrap_or_default(),
            self.recovery_failure_rate
                .map(|v| format!("{v:.6}"))
                .unwrap_or_default(),
            self.rejections.no_disjoint_route,
            self.rejections.no_spectrum_primary,
            self.rejections.no_spectrum_backup,
            self.rejections.rtc_violation,
        )
    }
}
