//! Provisioning engines for the three protection schemes.
//!
//! All schemes route a request as a link-disjoint pair (shortest primary,
//! shortest backup in the residual graph) and assign first-fit slot blocks:
//!
//! - `dpp` — dedicated backup: both blocks are exclusive, and the backup is
//!   pre-cross-connected, so recovery needs no switching work.
//! - `spp` — shared backup: the backup reservation may share cells with
//!   other connections whose primaries are mutually link-disjoint (a single
//!   link failure can then activate at most one sharer).
//! - `incb` — shared backup plus a designated intermediate node near the
//!   backup's km-midpoint (recovery signals both halves in parallel) and a
//!   second, unreserved restoration route kept for dual failures that take
//!   out the primary and its backup together.
//!
//! Requests are provisioned online, in id order, with no re-optimization.
//! Admission is gated by the recovery-time constraint: a request whose
//! worst-case recovery time would breach it is rejected with the grid left
//! untouched.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectrum::{ConnId, FitMode, SlotBlock, SpectrumGrid};
use crate::timing::{check_rtc, rt_dpp, rt_incb, rt_spp, RecoveryTime, TimingParams};
use crate::topology::{Metric, NodeId, Path, Topology};
use crate::workload::Request;

/// Protection scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Dpp,
    Spp,
    Incb,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Dpp, Scheme::Spp, Scheme::Incb];
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::Dpp => write!(f, "dpp"),
            Scheme::Spp => write!(f, "spp"),
            Scheme::Incb => write!(f, "incb"),
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scheme> {
        match s {
            "dpp" => Ok(Scheme::Dpp),
            "spp" => Ok(Scheme::Spp),
            "incb" => Ok(Scheme::Incb),
            other => Err(Error::validation(format!(
                "unknown scheme `{other}` (expected dpp, spp or incb)"
            ))),
        }
    }
}

/// Why a request was refused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RejectReason {
    NoDisjointRoute,
    NoSpectrumPrimary,
    NoSpectrumBackup,
    RtcViolation,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RejectReason::NoDisjointRoute => "no-disjoint-route",
            RejectReason::NoSpectrumPrimary => "no-spectrum-primary",
            RejectReason::NoSpectrumBackup => "no-spectrum-backup",
            RejectReason::RtcViolation => "rtc-violation",
        };
        write!(f, "{s}")
    }
}

/// An accepted request with its routes, blocks and admission-time
/// worst-case recovery time.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    pub id: ConnId,
    pub request: Request,
    pub scheme: Scheme,
    pub primary: Path,
    pub primary_block: SlotBlock,
    pub backup: Path,
    pub backup_block: SlotBlock,
    /// Unreserved restoration route (intermediate-node scheme only),
    /// link-disjoint from both the primary and the reserved backup.
    /// Best-effort: absent when the graph offers none.
    pub pbr_route: Option<Path>,
    /// Designated signaling node on the backup (intermediate-node scheme).
    pub intermediate: Option<NodeId>,
    pub worst_rt: RecoveryTime,
}

/// Result of one provisioning attempt.
#[derive(Debug, Clone, PartialEq)]
pub enum ProvisionOutcome {
    Accepted(Connection),
    Rejected {
        request: Request,
        reason: RejectReason,
    },
}

impl ProvisionOutcome {
    pub fn is_accepted(&self) -> bool {
        matches!(self, ProvisionOutcome::Accepted(_))
    }

    pub fn request(&self) -> &Request {
        match self {
            ProvisionOutcome::Accepted(c) => &c.request,
            ProvisionOutcome::Rejected { request, .. } => request,
        }
    }
}

/// Mutable provisioning state: the grid plus the accepted connections.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState {
    pub grid: SpectrumGrid,
    pub connections: BTreeMap<ConnId, Connection>,
}

impl NetworkState {
    pub fn new(t: &Topology) -> NetworkState {
        NetworkState {
            grid: SpectrumGrid::for_topology(t),
            connections: BTreeMap::new(),
        }
    }

    pub fn accepted(&self) -> impl Iterator<Item = &Connection> {
        self.connections.values()
    }

    /// Structural audit of the full state:
    ///
    /// - every connection's primary block is working-owned by it with the
    ///   same slot indices on every primary link, and its backup block is
    ///   backup-owned (sharer set containing it) with the same indices on
    ///   every backup link;
    /// - blocks are in-range contiguous runs of exactly the demanded size;
    /// - primary and backup are link-disjoint;
    /// - no orphan ownership: every working cell belongs to exactly the
    ///   recorded owner's primary block, every sharer-set entry to that
    ///   connection's backup block, and no sharer set is empty;
    /// - any two connections co-owning a backup cell are sharable.
    pub fn validate(&self, t: &Topology) -> std::result::Result<(), String> {
        use crate::spectrum::SlotOwnership;

        let f = self.grid.slot_capacity();
        for conn in self.connections.values() {
            let fr = conn.request.fr;
            for (what, path, block) in [
                ("primary", &conn.primary, conn.primary_block),
                ("backup", &conn.backup, conn.backup_block),
            ] {
                if block.size != fr {
                    return Err(format!(
                        "conn {}: {what} block size {} != demand {fr}",
                        conn.id, block.size
                    ));
                }
                if block.end() > f {
                    return Err(format!("conn {}: {what} block out of range", conn.id));
                }
                for &link in path.links() {
                    for slot in block.slots() {
                        let cell = self.grid.cell(link, slot);
                        let ok = match (what, cell) {
                            ("primary", SlotOwnership::Working(c)) => *c == conn.id,
                            ("backup", SlotOwnership::Backup(set)) => set.contains(&conn.id),
                            _ => false,
                        };
                        if !ok {
                            return Err(format!(
                                "conn {}: {what} cell (link {link}, slot {slot}) not owned as expected: {cell:?}",
                                conn.id
                            ));
                        }
                    }
                }
            }
            if conn.primary.shares_link(&conn.backup) {
                return Err(format!("conn {}: primary and backup share a link", conn.id));
            }
        }

        for link in t.links() {
            for slot in 0..f {
                match self.grid.cell(link.id, slot) {
                    SlotOwnership::Free => {}
                    SlotOwnership::Working(c) => {
                        let conn = self
                            .connections
                            .get(c)
                            .ok_or_else(|| format!("working cell owned by unknown conn {c}"))?;
                        if !conn.primary.contains_link(link.id)
                            || !conn.primary_block.slots().contains(&slot)
                        {
                            return Err(format!(
                                "orphan working cell (link {}, slot {slot}) for conn {c}",
                                link.id
                            ));
                        }
                    }
                    SlotOwnership::Backup(sharers) => {
                        if sharers.is_empty() {
                            return Err(format!(
                                "empty sharer set at (link {}, slot {slot})",
                                link.id
                            ));
                        }
                        for c in sharers {
                            let conn = self
                                .connections
                                .get(c)
                                .ok_or_else(|| format!("backup cell owned by unknown conn {c}"))?;
                            if !conn.backup.contains_link(link.id)
                                || !conn.backup_block.slots().contains(&slot)
                            {
                                return Err(format!(
                                    "orphan backup cell (link {}, slot {slot}) for conn {c}",
                                    link.id
                                ));
                            }
                        }
                        let ids: Vec<ConnId> = sharers.iter().copied().collect();
                        for (i, &a) in ids.iter().enumerate() {
                            for &b in &ids[i + 1..] {
                                if !sharable(&self.connections[&a], &self.connections[&b]) {
                                    return Err(format!(
                                        "unsharable pair {a},{b} co-own (link {}, slot {slot})",
                                        link.id
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// True iff `a` and `b` may share backup cells: distinct, neither dedicated,
/// and their primaries link-disjoint (so one link failure activates at most
/// one of them).
pub fn sharable(a: &Connection, b: &Connection) -> bool {
    a.id != b.id
        && a.scheme != Scheme::Dpp
        && b.scheme != Scheme::Dpp
        && !a.primary.shares_link(&b.primary)
}

/// The interior node of `backup` nearest its km-midpoint (ties toward the
/// source side). A single-link backup has no interior node; its destination
/// is designated and the second signaling half degenerates to nothing.
pub fn designate_intermediate(t: &Topology, backup: &Path) -> NodeId {
    if backup.hops() <= 1 {
        return backup.destination();
    }
    let total = backup.length_km();
    let mut cum = 0.0;
    let mut best: Option<(f64, NodeId)> = None;
    for k in 1..backup.hops() {
        cum += t.link(backup.links()[k - 1]).length_km;
        let score = (2.0 * cum - total).abs();
        if best.map_or(true, |(s, _)| score < s) {
            best = Some((score, backup.nodes()[k]));
        }
    }
    best.expect("multi-link path has interior nodes").1
}

/// Splits `backup` at `intermediate` into two signaling halves of
/// `(interior node count, length km)` each.
pub fn incb_halves(
    t: &Topology,
    backup: &Path,
    intermediate: NodeId,
) -> ((u32, f64), (u32, f64)) {
    if intermediate == backup.destination() {
        return ((0, backup.length_km()), (0, 0.0));
    }
    let k = backup
        .nodes()
        .iter()
        .position(|&n| n == intermediate)
        .expect("intermediate lies on the backup path");
    let seg = |range: std::ops::Range<usize>| -> f64 {
        backup.links()[range]
            .iter()
            .map(|&l| t.link(l).length_km)
            .sum()
    };
    let h = backup.hops();
    (
        ((k - 1) as u32, seg(0..k)),
        ((h - k - 1) as u32, seg(k..h)),
    )
}

/// Releases a connection's allocations and forgets it. Idempotent.
pub fn teardown(state: &mut NetworkState, conn: ConnId) {
    state.grid.release(conn);
    state.connections.remove(&conn);
}

/// Provisioning engine for one scheme on one topology.
pub struct Provisioner<'a> {
    pub topology: &'a Topology,
    pub scheme: Scheme,
    pub metric: Metric,
    pub timing: TimingParams,
}

impl<'a> Provisioner<'a> {
    pub fn new(topology: &'a Topology, scheme: Scheme, timing: TimingParams) -> Provisioner<'a> {
        Provisioner {
            topology,
            scheme,
            metric: Metric::Km,
            timing,
        }
    }

    pub fn with_metric(mut self, metric: Metric) -> Provisioner<'a> {
        self.metric = metric;
        self
    }

    /// Attempts to admit `req`. Rejection precedence mirrors the pipeline:
    /// routing, then primary spectrum, then backup spectrum, then the
    /// recovery-time constraint. A rejected request leaves `state`
    /// untouched.
    pub fn provision(&self, state: &mut NetworkState, req: &Request) -> ProvisionOutcome {
        assert!(req.source != req.destination && req.fr >= 1, "invalid request");
        let reject = |reason| ProvisionOutcome::Rejected {
            request: *req,
            reason,
        };

        let Some((primary, backup)) =
            self.topology
                .disjoint_pair(req.source, req.destination, self.metric)
        else {
            return reject(RejectReason::NoDisjointRoute);
        };

        let Some(primary_block) = state.grid.find_first_fit(&primary, req.fr, &FitMode::Working)
        else {
            return reject(RejectReason::NoSpectrumPrimary);
        };

        // Backup reservation: exclusive for the dedicated scheme, sharable
        // with link-disjoint-primary peers otherwise. Dedicated backups are
        // never offered for sharing in either direction.
        let share_with = |other: ConnId| -> bool {
            state.connections.get(&other).is_some_and(|c| {
                c.scheme != Scheme::Dpp && !c.primary.shares_link(&primary)
            })
        };
        let backup_mode = match self.scheme {
            Scheme::Dpp => FitMode::Backup {
                sharable_with: &|_| false,
            },
            Scheme::Spp | Scheme::Incb => FitMode::Backup {
                sharable_with: &share_with,
            },
        };

        let Some(backup_block) = state.grid.find_first_fit(&backup, req.fr, &backup_mode) else {
            return reject(RejectReason::NoSpectrumBackup);
        };

        let (intermediate, worst_rt) = match self.scheme {
            Scheme::Dpp => (
                None,
                rt_dpp(&self.timing, backup.interior_node_count(), backup.length_km()),
            ),
            Scheme::Spp => (
                None,
                rt_spp(&self.timing, backup.interior_node_count(), backup.length_km()),
            ),
            Scheme::Incb => {
                let mid = designate_intermediate(self.topology, &backup);
                let (h1, h2) = incb_halves(self.topology, &backup, mid);
                (Some(mid), rt_incb(&self.timing, h1, h2))
            }
        };
        if !check_rtc(&self.timing, &worst_rt) {
            return reject(RejectReason::RtcViolation);
        }

        let pbr_route = if self.scheme == Scheme::Incb {
            let excluded = primary
                .links()
                .iter()
                .chain(backup.links())
                .copied()
                .collect();
            self.topology
                .shortest_path(req.source, req.destination, self.metric, &excluded)
        } else {
            None
        };

        state
            .grid
            .allocate(&primary, primary_block, &FitMode::Working, req.id)
            .expect("fresh primary block must allocate");
        state
            .grid
            .allocate(&backup, backup_block, &backup_mode, req.id)
            .expect("fresh backup block must allocate");

        let conn = Connection {
            id: req.id,
            request: *req,
            scheme: self.scheme,
            primary,
            primary_block,
            backup,
            backup_block,
            pbr_route,
            intermediate,
            worst_rt,
        };
        state.connections.insert(conn.id, conn.clone());
        ProvisionOutcome::Accepted(conn)
    }
}
