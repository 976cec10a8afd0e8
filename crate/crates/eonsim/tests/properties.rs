//! Property-based tests over randomized graphs, workloads, parameters,
//! and grid states.

use std::collections::BTreeSet;

use proptest::prelude::*;

use eonsim::rng::SplitMix64;
use eonsim::spectrum::{ConnId, FitMode, SpectrumGrid};
use eonsim::timing::{rt_dpp, rt_incb, rt_spp, TimingParams};
use eonsim::topology::{Metric, NodeId, Path, Topology};
use eonsim::workload::{self, WorkloadSpec};

/// A random connected simple graph: a spanning chain over a shuffled node
/// order plus random extra edges, all with integer lengths.
fn arb_graph() -> impl Strategy<Value = Topology> {
    (2usize..=8, any::<u64>()).prop_map(|(n, seed)| {
        let mut rng = SplitMix64::new(seed);
        let mut order: Vec<u32> = (0..n as u32).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.bounded(i as u64 + 1) as usize);
        }
        let mut edges: Vec<(u32, u32, f64)> = Vec::new();
        let mut seen = BTreeSet::new();
        for w in order.windows(2) {
            let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
            seen.insert((a, b));
            edges.push((a, b, rng.bounded(20) as f64 + 1.0));
        }
        for a in 0..n as u32 {
            for b in (a + 1)..n as u32 {
                if !seen.contains(&(a, b)) && rng.bounded(100) < 40 {
                    edges.push((a, b, rng.bounded(20) as f64 + 1.0));
                }
            }
        }
        let labels = (0..n).map(|i| format!("N{i}")).collect();
        Topology::from_parts("random", 8, labels, &edges).unwrap()
    })
}

/// Every simple path from `s` to `d`, by exhaustive depth-first search.
fn all_simple_paths(t: &Topology, s: NodeId, d: NodeId) -> Vec<Vec<NodeId>> {
    fn walk(t: &Topology, d: NodeId, here: NodeId, trail: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
        if here == d {
            out.push(trail.clone());
            return;
        }
        for &(next, _) in t.neighbors(here) {
            if !trail.contains(&next) {
                trail.push(next);
                walk(t, d, next, trail, out);
                trail.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(t, d, s, &mut vec![s], &mut out);
    out
}

fn brute_force_shortest(t: &Topology, s: NodeId, d: NodeId, metric: Metric) -> Option<Vec<NodeId>> {
    let cost = |nodes: &[NodeId]| -> f64 {
        nodes
            .windows(2)
            .map(|w| {
                let link = t.link(t.link_between(w[0], w[1]).unwrap());
                match metric {
                    Metric::Km => link.length_km,
                    Metric::Hops => 1.0,
                }
            })
            .sum()
    };
    let paths = all_simple_paths(t, s, d);
    // Integer lengths keep every cost exactly representable, so equality
    // comparison finds the full minimum-cost tie set.
    let best = paths.iter().map(|p| cost(p)).fold(f64::INFINITY, f64::min);
    paths
        .into_iter()
        .filter(|p| cost(p) == best)
        .min_by(|a, b| {
            let ka: Vec<u32> = a.iter().map(|n| n.0).collect();
            let kb: Vec<u32> = b.iter().map(|n| n.0).collect();
            ka.cmp(&kb)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// The routing is exactly the brute-force answer: minimum cost AND the
    /// lexicographically smallest node sequence among minimum-cost ties.
    #[test]
    fn routing_matches_brute_force((t, pick) in (arb_graph(), any::<u64>())) {
        let mut rng = SplitMix64::new(pick);
        let n = t.node_count() as u64;
        for metric in [Metric::Km, Metric::Hops] {
            let s = NodeId(rng.bounded(n) as u32);
            let mut d = NodeId(rng.bounded(n) as u32);
            while d == s {
                d = NodeId(rng.bounded(n) as u32);
            }
            let got = t.shortest_path(s, d, metric, &BTreeSet::new());
            let want = brute_force_shortest(&t, s, d, metric);
            prop_assert_eq!(got.map(|p| p.nodes().to_vec()), want);
        }
    }

    /// When a disjoint pair exists, primary and backup connect the same
    /// endpoints, share no link, and the primary is never longer.
    #[test]
    fn disjoint_pairs_are_disjoint((t, pick) in (arb_graph(), any::<u64>())) {
        let mut rng = SplitMix64::new(pick);
        let n = t.node_count() as u64;
        let s = NodeId(rng.bounded(n) as u32);
        let mut d = NodeId(rng.bounded(n) as u32);
        while d == s {
            d = NodeId(rng.bounded(n) as u32);
        }
        if let Some((primary, backup)) = t.disjoint_pair(s, d, Metric::Km) {
            prop_assert_eq!(primary.source(), s);
            prop_assert_eq!(backup.source(), s);
            prop_assert_eq!(primary.destination(), d);
            prop_assert_eq!(backup.destination(), d);
            prop_assert!(!primary.shares_link(&backup));
            prop_assert!(primary.length_km() <= backup.length_km());
        }
    }

    /// Workloads are valid (sequential ids, distinct endpoints, demands in
    /// range, no repeated pair), count-k output is a strict prefix of any
    /// larger count with the same seed, and the CSV round-trips.
    #[test]
    fn workloads_are_valid_prefix_stable_and_round_trip(
        seed in any::<u64>(),
        count in 1usize..=55,
        shorter in 1usize..=55,
        fr_min in 1usize..=4,
        fr_span in 0usize..=12,
    ) {
        let t = Topology::load_builtin("cost239").unwrap();
        let fr_max = fr_min + fr_span;
        let spec = WorkloadSpec { count, fr_min, fr_max, seed };
        let requests = workload::generate(&t, &spec).unwrap();
        prop_assert_eq!(requests.len(), count);
        let mut pairs = BTreeSet::new();
        for (i, r) in requests.iter().enumerate() {
            prop_assert_eq!(r.id as usize, i);
            prop_assert_ne!(r.source, r.destination);
            prop_assert!(r.fr >= fr_min && r.fr <= fr_max);
            prop_assert!(pairs.insert((r.source.min(r.destination), r.source.max(r.destination))));
        }

        let shorter = shorter.min(count);
        let prefix = workload::generate(&t, &WorkloadSpec { count: shorter, ..spec }).unwrap();
        prop_assert_eq!(&requests[..shorter], &prefix[..]);

        let parsed = workload::read_csv(&workload::to_csv(&requests)).unwrap();
        prop_assert_eq!(parsed, requests);
    }

    /// Recovery times are monotone in interior-node count and backup
    /// length, affine in length with slope 2 x propagation rate, and the
    /// split-signaling form never exceeds the serialized shared form for
    /// any placement of the intermediate node.
    #[test]
    fn recovery_times_are_monotone_and_split_never_loses(
        f_d in 0.0f64..100.0,
        m in 0.1f64..50.0,
        prop_rate in 0.1f64..10.0,
        c_x in 0.0f64..5000.0,
        n in 1u32..12,
        l in 1.0f64..5000.0,
        dn in 0u32..4,
        dl in 0.0f64..500.0,
        k in 0u32..12,
        frac in 0.0f64..1.0,
    ) {
        let p = TimingParams {
            f_d_us: f_d,
            m_p_us: m,
            m_a_us: m,
            prop_us_per_km: prop_rate,
            c_x_us: c_x,
            rtc_us: 1e12,
        };
        let base = rt_spp(&p, n, l).total_us();
        prop_assert!(rt_spp(&p, n + dn, l).total_us() >= base);
        prop_assert!(rt_spp(&p, n, l + dl).total_us() >= base);
        prop_assert!(rt_dpp(&p, n, l).total_us() <= base);

        let grown = rt_spp(&p, n, l + dl).total_us();
        let expected_growth = 2.0 * dl * prop_rate;
        prop_assert!((grown - base - expected_growth).abs() < 1e-6);

        // Any split of the backup into two halves around an interior node
        // (k interior nodes before it, n-1-k after; lengths summing to l)
        // recovers no slower than the serialized form.
        let k = k.min(n - 1);
        let l1 = l * frac;
        let split = rt_incb(&p, (k, l1), (n - 1 - k, l - l1)).total_us();
        prop_assert!(split <= base, "split {} > serialized {}", split, base);
    }

    /// Allocating a found block and releasing the connection restores the
    /// grid to its exact prior state, for working and shared use alike.
    #[test]
    fn allocate_then_release_round_trips(seed in any::<u64>(), fr in 1usize..=6) {
        let t = Topology::load_builtin("cost239").unwrap();
        let mut grid = SpectrumGrid::new(t.link_count(), 24);
        let mut rng = SplitMix64::new(seed);

        // Occupy a random slice of the grid first.
        let mut next: ConnId = 1000;
        for _ in 0..rng.bounded(12) {
            let s = NodeId(rng.bounded(11) as u32);
            let mut d = NodeId(rng.bounded(11) as u32);
            while d == s {
                d = NodeId(rng.bounded(11) as u32);
            }
            let Some((primary, backup)) = t.disjoint_pair(s, d, Metric::Km) else { continue };
            let size = rng.bounded(4) as usize + 1;
            if let Some(block) = grid.find_first_fit(&primary, size, &FitMode::Working) {
                grid.allocate(&primary, block, &FitMode::Working, next).unwrap();
            }
            let share = FitMode::Backup { sharable_with: &|_| true };
            if let Some(block) = grid.find_first_fit(&backup, size, &share) {
                grid.allocate(&backup, block, &share, next).unwrap();
            }
            next += 1;
        }

        let snapshot = grid.clone();
        let path = Path::from_nodes(&t, &[NodeId(0), NodeId(2), NodeId(6)]).unwrap();
        let share = FitMode::Backup { sharable_with: &|_| true };
        for mode in [FitMode::Working, share] {
            if let Some(block) = grid.find_first_fit(&path, fr, &mode) {
                grid.allocate(&path, block, &mode, 7).unwrap();
                prop_assert_ne!(&grid, &snapshot);
                grid.release(7);
            }
            prop_assert_eq!(&grid, &snapshot);
        }
    }

    /// A grid never double-books: after any sequence of successful
    /// first-fit allocations, re-searching with a working query never
    /// lands inside another connection's working block.
    #[test]
    fn first_fit_never_returns_occupied_cells(seed in any::<u64>()) {
        let t = Topology::load_builtin("arpanet").unwrap();
        let mut grid = SpectrumGrid::new(t.link_count(), 16);
        let mut rng = SplitMix64::new(seed);
        for conn in 0..20u32 {
            let s = NodeId(rng.bounded(20) as u32);
            let mut d = NodeId(rng.bounded(20) as u32);
            while d == s {
                d = NodeId(rng.bounded(20) as u32);
            }
            let Some(path) = t.shortest_path(s, d, Metric::Km, &BTreeSet::new()) else { continue };
            let fr = rng.bounded(5) as usize + 1;
            let Some(block) = grid.find_first_fit(&path, fr, &FitMode::Working) else { continue };
            // The found block must be entirely free right now.
            for &link in path.links() {
                for slot in block.start..block.start + block.size {
                    prop_assert_eq!(
                        grid.cell(link, slot),
                        &eonsim::spectrum::SlotOwnership::Free
                    );
                }
            }
            grid.allocate(&path, block, &FitMode::Working, conn).unwrap();
        }
    }
}
