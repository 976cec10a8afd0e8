//! Dual-link failure scenarios: generation, per-connection impact
//! classification, and recovery evaluation.
//!
//! Both links fail at the same instant and recovery signaling for every
//! affected connection proceeds concurrently. Contention on shared backup
//! cells is resolved by connection id (a proxy for arrival order): the
//! lowest id claims the cells, later sharers lose. Scenario evaluation is
//! side-effect-free — it reads the provisioned state and never mutates it —
//! so scenarios can be evaluated independently and in parallel.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::protection::{designate_intermediate, incb_halves, Connection, NetworkState, Scheme};
use crate::rng::SplitMix64;
use crate::spectrum::{ConnId, FitMode};
use crate::timing::{check_rtc, rt_dpp, rt_incb, rt_spp, RecoveryTime, TimingParams};
use crate::topology::{LinkId, Topology};

/// An unordered pair of distinct failed links.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FailureScenario {
    pub id: usize,
    pub first: LinkId,
    pub second: LinkId,
}

impl FailureScenario {
    pub fn hits(&self, link: LinkId) -> bool {
        self.first == link || self.second == link
    }
}

/// All `C(|L|, 2)` dual-link scenarios in lexicographic order.
pub fn enumerate_scenarios(t: &Topology) -> Vec<FailureScenario> {
    let l = t.link_count() as u32;
    let mut out = Vec::with_capacity((l as usize) * (l as usize - 1) / 2);
    for a in 0..l {
        for b in (a + 1)..l {
            out.push(FailureScenario {
                id: out.len(),
                first: LinkId(a),
                second: LinkId(b),
            });
        }
    }
    out
}

/// `count` scenarios drawn without replacement from the full enumeration,
/// reproducible from `seed`; returned in lexicographic order with fresh ids.
pub fn sample_scenarios(t: &Topology, count: usize, seed: u64) -> Result<Vec<FailureScenario>> {
    let mut all = enumerate_scenarios(t);
    if count == 0 || count > all.len() {
        return Err(Error::validation(format!(
            "scenario sample count must be in 1..={} (got {count})",
            all.len()
        )));
    }
    let mut rng = SplitMix64::new(seed);
    for k in 0..count {
        let j = k + rng.bounded((all.len() - k) as u64) as usize;
        all.swap(k, j);
    }
    let mut sampled = all[..count].to_vec();
    sampled.sort_by_key(|s| (s.first, s.second));
    for (i, s) in sampled.iter_mut().enumerate() {
        s.id = i;
    }
    Ok(sampled)
}

/// How a scenario touches one connection's reserved routes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Impact {
    Untouched,
    PrimaryHit,
    BackupHit,
    BothHit,
}

impl fmt::Display for Impact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Impact::Untouched => "untouched",
            Impact::PrimaryHit => "primary-hit",
            Impact::BackupHit => "backup-hit",
            Impact::BothHit => "both-hit",
        };
        write!(f, "{s}")
    }
}

/// Classifies one connection by membership of the failed links in its
/// primary and reserved-backup link sets.
pub fn classify_connection(scenario: &FailureScenario, conn: &Connection) -> Impact {
    let p = conn.primary.contains_link(scenario.first) || conn.primary.contains_link(scenario.second);
    let b = conn.backup.contains_link(scenario.first) || conn.backup.contains_link(scenario.second);
    match (p, b) {
        (false, false) => Impact::Untouched,
        (true, false) => Impact::PrimaryHit,
        (false, true) => Impact::BackupHit,
        (true, true) => Impact::BothHit,
    }
}

/// Impact of a scenario on every provisioned connection.
pub fn classify(
    scenario: &FailureScenario,
    connections: &BTreeMap<ConnId, Connection>,
) -> BTreeMap<ConnId, Impact> {
    connections
        .iter()
        .map(|(&id, c)| (id, classify_connection(scenario, c)))
        .collect()
}

/// Why a connection stayed down.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailReason {
    /// Primary and reserved backup both failed and no restoration route is
    /// held (dedicated/shared schemes, or an intermediate-node connection
    /// for which no disjoint restoration route existed at setup).
    BackupAlsoFailedNoPbr,
    /// The reserved backup's cells were claimed by a lower-id sharer
    /// recovering in the same scenario.
    BackupContentionLost,
    /// The restoration route exists but is unusable in this scenario: it
    /// crosses a failed link or first-fit finds no free spectrum on it.
    PbrNoSpectrum,
    /// The achievable recovery time breaches the constraint.
    RtcViolation,
}

impl fmt::Display for FailReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FailReason::BackupAlsoFailedNoPbr => "backup-also-failed-no-pbr",
            FailReason::BackupContentionLost => "backup-contention-lost",
            FailReason::PbrNoSpectrum => "pbr-no-spectrum",
            FailReason::RtcViolation => "rtc-violation",
        };
        write!(f, "{s}")
    }
}

/// Outcome of recovery for one connection in one scenario. Survivals that
/// needed no signaling (untouched, or backup-hit with the primary intact)
/// report `recovered` with no recovery time.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryOutcome {
    pub conn: ConnId,
    pub impact: Impact,
    pub recovered: bool,
    pub rt: Option<RecoveryTime>,
    pub reason: Option<FailReason>,
}

impl RecoveryOutcome {
    fn survived(conn: ConnId, impact: Impact) -> RecoveryOutcome {
        RecoveryOutcome {
            conn,
            impact,
            recovered: true,
            rt: None,
            reason: None,
        }
    }

    fn recovered(conn: ConnId, impact: Impact, rt: RecoveryTime) -> RecoveryOutcome {
        RecoveryOutcome {
            conn,
            impact,
            recovered: true,
            rt: Some(rt),
            reason: None,
        }
    }

    fn lost(conn: ConnId, impact: Impact, reason: FailReason) -> RecoveryOutcome {
        RecoveryOutcome {
            conn,
            impact,
            recovered: false,
            rt: None,
            reason: Some(reason),
        }
    }
}

/// Evaluates recovery of every connection under one scenario, in
/// connection-id order. The provisioned state is only read.
///
/// - untouched / backup-hit: traffic never leaves the primary; the
///   connection survives with no recovery action.
/// - primary-hit: switch to the reserved backup using the scheme's timing
///   model; a sharer loses if any of its backup cells was already claimed
///   in this scenario (dedicated backups never contend).
/// - both-hit: dedicated/shared schemes are down; the intermediate-node
///   scheme tries its restoration route with first-fit over free spectrum
///   (failed links avoided, cells claimed in this scenario excluded).
///
/// Every recovery time is re-checked against the constraint.
pub fn recover(
    scenario: &FailureScenario,
    state: &NetworkState,
    t: &Topology,
    params: &TimingParams,
) -> Vec<RecoveryOutcome> {
    let mut claimed: BTreeSet<(LinkId, usize)> = BTreeSet::new();
    let mut outcomes = Vec::with_capacity(state.connections.len());

    for (&id, conn) in &state.connections {
        let impact = classify_connection(scenario, conn);
        let outcome = match impact {
            Impact::Untouched | Impact::BackupHit => RecoveryOutcome::survived(id, impact),
            Impact::PrimaryHit => {
                let cells = || {
                    conn.backup.links().iter().flat_map(|&l| {
                        conn.backup_block.slots().map(move |s| (l, s))
                    })
                };
                let contended = conn.scheme != Scheme::Dpp
                    && cells().any(|cell| claimed.contains(&cell));
                if contended {
                    RecoveryOutcome::lost(id, impact, FailReason::BackupContentionLost)
                } else {
                    let rt = reserved_backup_rt(conn, t, params);
                    if check_rtc(params, &rt) {
                        claimed.extend(cells());
                        RecoveryOutcome::recovered(id, impact, rt)
                    } else {
                        RecoveryOutcome::lost(id, impact, FailReason::RtcViolation)
                    }
                }
            }
            Impact::BothHit => {
                if conn.scheme != Scheme::Incb {
                    RecoveryOutcome::lost(id, impact, FailReason::BackupAlsoFailedNoPbr)
                } else {
                    match &conn.pbr_route {
                        None => RecoveryOutcome::lost(id, impact, FailReason::BackupAlsoFailedNoPbr),
                        Some(pbr) => {
                            let usable = !pbr.contains_link(scenario.first)
                                && !pbr.contains_link(scenario.second);
                            let block = usable.then(|| {
                                state.grid.find_first_fit_masked(
                                    pbr,
                                    conn.request.fr,
                                    &FitMode::Working,
                                    &|l, s| claimed.contains(&(l, s)),
                                )
                            });
                            match block.flatten() {
                                None => RecoveryOutcome::lost(id, impact, FailReason::PbrNoSpectrum),
                                Some(block) => {
                                    let mid = designate_intermediate(t, pbr);
                                    let (h1, h2) = incb_halves(t, pbr, mid);
                                    let rt = rt_incb(params, h1, h2);
                                    if check_rtc(params, &rt) {
                                        for &l in pbr.links() {
                                            for s in block.slots() {
                                                claimed.insert((l, s));
                                            }
                                        }
                                        RecoveryOutcome::recovered(id, impact, rt)
                                    } else {
                                        RecoveryOutcome::lost(id, impact, FailReason::RtcViolation)
                                    }
                                }
                            }
                        }
                    }
                }
            }
        };
        outcomes.push(outcome);
    }
    outcomes
}

/// Recovery time for switching onto the reserved backup under the
/// connection's own scheme.
fn reserved_backup_rt(conn: &Connection, t: &Topology, params: &TimingParams) -> RecoveryTime {
    let n = conn.backup.interior_node_count();
    let l = conn.backup.length_km();
    match conn.scheme {
        Scheme::Dpp => rt_dpp(params, n, l),
        Scheme::Spp => rt_spp(params, n, l),
        Scheme::Incb => {
            let mid = conn
                .intermediate
                .unwrap_or_else(|| designate_intermediate(t, &conn.backup));
            let (h1, h2) = incb_halves(t, &conn.backup, mid);
            rt_incb(params, h1, h2)
        }
    }
}

/// Writes scenario results as CSV:
/// `scenario_id,link_a,link_b,conn_id,impact,recovered,reason,rt_us`.
/// `outcomes[i]` must belong to `scenarios[i]`. Survivals report an `rt_us`
/// of 0; unrecovered connections leave it empty.
pub fn write_scenarios_csv<W: Write>(
    w: &mut W,
    scenarios: &[FailureScenario],
    outcomes: &[Vec<RecoveryOutcome>],
) -> io::Result<()> {
    assert_eq!(scenarios.len(), outcomes.len());
    writeln!(w, "scenario_id,link_a,link_b,conn_id,impact,recovered,reason,rt_us")?;
    for (sc, outs) in scenarios.iter().zip(outcomes) {
        for o in outs {
            let reason = o.reason.map(|r| r.to_string()).unwrap_or_default();
            let rt = if o.recovered {
                format!("{:.3}", o.rt.map(|r| r.total_us()).unwrap_or(0.0))
            } else {
                String::new()
            };
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                sc.id, sc.first, sc.second, o.conn, o.impact, o.recovered, reason, rt
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::protection::{ProvisionOutcome, Provisioner};
    use crate::topology::NodeId;
    use crate::workload::Request;

    /// Four nodes A=0, B=1, C=2, D=3; complete graph with C-B stretched so
    /// that C->A routes primary C-A, reserved backup C-D-A, restoration
    /// route C-B-A, and B->A routes primary B-A, backup B-D-A. The two
    /// backups share cells on D-A under the shared schemes.
    pub(crate) fn k4() -> Topology {
        Topology::from_parts(
            "k4",
            8,
            vec!["A".into(), "B".into(), "C".into(), "D".into()],
            &[
                (0, 1, 1.0), // A-B
                (0, 2, 1.0), // A-C
                (0, 3, 1.0), // A-D
                (1, 2, 3.0), // B-C (stretched)
                (1, 3, 1.0), // B-D
                (2, 3, 1.0), // C-D
            ],
        )
        .unwrap()
    }

    fn provision_pair(t: &Topology, scheme: Scheme) -> NetworkState {
        let mut state = NetworkState::new(t);
        let prov = Provisioner::new(t, scheme, TimingParams::default());
        for (id, s, d) in [(0u32, 2u32, 0u32), (1, 1, 0)] {
            let out = prov.provision(
                &mut state,
                &Request {
                    id,
                    source: NodeId(s),
                    destination: NodeId(d),
                    fr: 1,
                },
            );
            assert!(matches!(out, ProvisionOutcome::Accepted(_)));
        }
        state
    }

    fn scenario(t: &Topology, a: (u32, u32), b: (u32, u32)) -> FailureScenario {
        let la = t.link_between(NodeId(a.0), NodeId(a.1)).unwrap();
        let lb = t.link_between(NodeId(b.0), NodeId(b.1)).unwrap();
        FailureScenario {
            id: 0,
            first: la.min(lb),
            second: la.max(lb),
        }
    }

    #[test]
    fn scenario_counts_match_link_pairs() {
        let arpanet = Topology::load_builtin("arpanet").unwrap();
        assert_eq!(enumerate_scenarios(&arpanet).len(), 496);
        let cost = Topology::load_builtin("cost239").unwrap();
        assert_eq!(enumerate_scenarios(&cost).len(), 325);
        let line = Topology::from_parts(
            "line",
            4,
            vec!["A".into(), "B".into(), "C".into()],
            &[(0, 1, 1.0), (1, 2, 1.0)],
        )
        .unwrap();
        assert_eq!(enumerate_scenarios(&line).len(), 1);
    }

    #[test]
    fn sampling_is_deterministic_without_replacement() {
        let t = Topology::load_builtin("cost239").unwrap();
        let a = sample_scenarios(&t, 40, 9).unwrap();
        let b = sample_scenarios(&t, 40, 9).unwrap();
        assert_eq!(a, b);
        let pairs: BTreeSet<(LinkId, LinkId)> = a.iter().map(|s| (s.first, s.second)).collect();
        assert_eq!(pairs.len(), 40);
        assert!(sample_scenarios(&t, 326, 9).is_err());
    }

    #[test]
    fn classification_of_the_dual_failure_cases() {
        let t = k4();
        let state = provision_pair(&t, Scheme::Spp);

        // Case (a): both primaries fail.
        let both_primaries = scenario(&t, (2, 0), (1, 0));
        let impacts = classify(&both_primaries, &state.connections);
        assert_eq!(impacts[&0], Impact::PrimaryHit);
        assert_eq!(impacts[&1], Impact::PrimaryHit);

        // Case (b): connection 0 loses primary C-A and backup link C-D.
        let primary_and_backup = scenario(&t, (2, 0), (2, 3));
        let impacts = classify(&primary_and_backup, &state.connections);
        assert_eq!(impacts[&0], Impact::BothHit);
        assert_eq!(impacts[&1], Impact::Untouched);

        // A failure touching neither of connection 0's paths.
        let untouched = scenario(&t, (1, 2), (1, 3));
        let impacts = classify(&untouched, &state.connections);
        assert_eq!(impacts[&0], Impact::Untouched);
        assert_eq!(impacts[&1], Impact::BackupHit);
    }

    #[test]
    fn contention_lets_exactly_one_sharer_recover() {
        let t = k4();
        let state = provision_pair(&t, Scheme::Spp);
        let c0 = &state.connections[&0];
        let c1 = &state.connections[&1];
        assert_eq!(c0.backup_block, c1.backup_block, "backups share cells on D-A");

        let both_primaries = scenario(&t, (2, 0), (1, 0));
        let outcomes = recover(&both_primaries, &state, &t, &TimingParams::default());
        assert_eq!(outcomes.len(), 2);
        assert!(outcomes[0].recovered, "lowest id claims the shared cells");
        assert!(!outcomes[1].recovered);
        assert_eq!(outcomes[1].reason, Some(FailReason::BackupContentionLost));
    }

    #[test]
    fn dedicated_backups_never_contend() {
        let t = k4();
        let state = provision_pair(&t, Scheme::Dpp);
        let both_primaries = scenario(&t, (2, 0), (1, 0));
        let outcomes = recover(&both_primaries, &state, &t, &TimingParams::default());
        assert!(outcomes.iter().all(|o| o.recovered));
    }

    #[test]
    fn dual_hit_is_fatal_without_a_restoration_route() {
        let t = k4();
        for scheme in [Scheme::Dpp, Scheme::Spp] {
            let state = provision_pair(&t, scheme);
            let sc = scenario(&t, (2, 0), (2, 3));
            let outcomes = recover(&sc, &state, &t, &TimingParams::default());
            assert!(!outcomes[0].recovered);
            assert_eq!(outcomes[0].reason, Some(FailReason::BackupAlsoFailedNoPbr));
            assert!(outcomes[1].recovered, "other connection untouched");
        }
    }

    #[test]
    fn restoration_route_survives_the_dual_hit() {
        let t = k4();
        let state = provision_pair(&t, Scheme::Incb);
        let sc = scenario(&t, (2, 0), (2, 3));
        let outcomes = recover(&sc, &state, &t, &TimingParams::default());
        assert!(outcomes[0].recovered, "restoration route C-B-A in service");
        let rt = outcomes[0].rt.unwrap();
        assert!(rt.total_us() > 0.0);
        assert!(outcomes[1].recovered);
    }

    #[test]
    fn recovery_is_side_effect_free() {
        let t = k4();
        let state = provision_pair(&t, Scheme::Incb);
        let before = state.clone();
        for sc in enumerate_scenarios(&t) {
            let _ = recover(&sc, &state, &t, &TimingParams::default());
        }
        assert_eq!(state, before);
    }

    #[test]
    fn impact_covers_every_connection() {
        let t = k4();
        let state = provision_pair(&t, Scheme::Spp);
        for sc in enumerate_scenarios(&t) {
            let outcomes = recover(&sc, &state, &t, &TimingParams::default());
            let ids: Vec<ConnId> = outcomes.iter().map(|o| o.conn).collect();
            assert_eq!(ids, vec![0, 1]);
        }
    }

    #[test]
    fn csv_export_shape() {
        let t = k4();
        let state = provision_pair(&t, Scheme::Spp);
        let scenarios = enumerate_scenarios(&t);
        let outcomes: Vec<_> = scenarios
            .iter()
            .map(|sc| recover(sc, &state, &t, &TimingParams::default()))
            .collect();
        let mut buf = Vec::new();
        write_scenarios_csv(&mut buf, &scenarios, &outcomes).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "scenario_id,link_a,link_b,conn_id,impact,recovered,reason,rt_us"
        );
        // 15 scenarios x 2 connections.
        assert_eq!(lines.count(), 30);
    }
}
