//! Tour of the two built-in topologies: sizes, deterministic shortest
//! paths under both metrics, and link-disjoint primary/backup pairs.
//!
//! Run with: cargo run --example builtin_topologies

use eonsim::topology::{Metric, NodeId, Topology};

fn main() -> eonsim::Result<()> {
    for name in Topology::builtin_names() {
        let t = Topology::load_builtin(name)?;
        println!(
            "{}: {} nodes, {} links, {} slots per link, {} node pairs",
            t.name(),
            t.node_count(),
            t.link_count(),
            t.slot_capacity(),
            t.pair_population()
        );

        let total: f64 = t.links().iter().map(|l| l.length_km).sum();
        println!(
            "  total fiber {:.0} km, mean link {:.0} km",
            total,
            total / t.link_count() as f64
        );

        // The same request routed by distance and by hop count.
        let (s, d) = (NodeId(0), NodeId(t.node_count() as u32 - 1));
        for metric in [Metric::Km, Metric::Hops] {
            let path = t
                .shortest_path(s, d, metric, &Default::default())
                .expect("builtins are connected");
            println!(
                "  {} -> {} by {metric}: {} hops, {:.0} km via {}",
                t.label(s),
                t.label(d),
                path.hops(),
                path.length_km(),
                path.nodes()
                    .iter()
                    .map(|&n| t.label(n))
                    .collect::<Vec<_>>()
                    .join(" - ")
            );
        }

        // Protection needs two link-disjoint routes; builtins guarantee a
        // pair for every endpoint combination.
        let (primary, backup) = t.disjoint_pair(s, d, Metric::Km).expect("two-connected");
        println!(
            "  disjoint pair: primary {} hops / {:.0} km, backup {} hops / {:.0} km",
            primary.hops(),
            primary.length_km(),
            backup.hops(),
            backup.length_km()
        );
        println!();
    }

    // Any graph in the text format works the same way.
    let ring = Topology::parse_str(
        "topology ring 64\n\
         node 0 WEST\nnode 1 NORTH\nnode 2 EAST\nnode 3 SOUTH\n\
         link 0 0 1 250\nlink 1 1 2 250\nlink 2 2 3 250\nlink 3 3 0 250\n",
    )?;
    let (primary, backup) = ring
        .disjoint_pair(NodeId(0), NodeId(2), Metric::Km)
        .expect("a ring splits into two arcs");
    println!(
        "custom {}: opposite corners split the ring into {}-hop and {}-hop arcs",
        ring.name(),
        primary.hops(),
        backup.hops()
    );
    Ok(())
}
