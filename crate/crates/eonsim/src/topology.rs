//! Graph model: built-in and file-loaded topologies plus deterministic path
//! computation (shortest paths and link-disjoint path pairs).
//!
//! Networks are undirected simple graphs with a per-link length in km and a
//! uniform slot capacity `F`. Two reference networks ship with the crate:
//! a 20-node/32-link continental backbone (`arpanet`) and an 11-node/26-link
//! European mesh (`cost239`). Their link lengths are shipped defaults chosen
//! at continental scale; both are overridable through the topology file
//! format (see [`Topology::parse_str`]).

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path as FsPath;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default slot capacity per link: a 4 THz band at 12.5 GHz granularity.
pub const DEFAULT_SLOT_CAPACITY: usize = 320;

/// Index of a node within its topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Index of a link within its topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinkId(pub u32);

impl fmt::Display for LinkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An undirected link between two distinct nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub id: LinkId,
    pub a: NodeId,
    pub b: NodeId,
    pub length_km: f64,
}

impl Link {
    pub fn touches(&self, n: NodeId) -> bool {
        self.a == n || self.b == n
    }

    /// The endpoint opposite `n`, if `n` is an endpoint.
    pub fn other(&self, n: NodeId) -> Option<NodeId> {
        if self.a == n {
            Some(self.b)
        } else if self.b == n {
            Some(self.a)
        } else {
            None
        }
    }
}

/// Cost function for path computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Sum of link lengths in km (default; propagation delay follows length).
    Km,
    /// Hop count.
    Hops,
}

impl Metric {
    fn cost(&self, link: &Link) -> f64 {
        match self {
            Metric::Km => link.length_km,
            Metric::Hops => 1.0,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Km => write!(f, "km"),
            Metric::Hops => write!(f, "hops"),
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "km" => Ok(Metric::Km),
            "hops" => Ok(Metric::Hops),
            other => Err(Error::validation(format!(
                "unknown metric `{other}` (expected `km` or `hops`)"
            ))),
        }
    }
}

/// A simple path: an ordered node sequence and the links joining it.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    nodes: Vec<NodeId>,
    links: Vec<LinkId>,
    length_km: f64,
}

impl Path {
    fn assemble(t: &Topology, nodes: Vec<NodeId>, links: Vec<LinkId>) -> Path {
        debug_assert_eq!(nodes.len(), links.len() + 1);
        let length_km = links.iter().map(|&l| t.link(l).length_km).sum();
        Path {
            nodes,
            links,
            length_km,
        }
    }

    /// Builds a path from a node sequence, looking up the joining links.
    /// Fails if consecutive nodes are not adjacent or a node repeats.
    pub fn from_nodes(t: &Topology, nodes: &[NodeId]) -> Result<Path> {
        if nodes.len() < 2 {
            return Err(Error::validation("a path needs at least two nodes"));
        }
        let mut seen = BTreeSet::new();
        for n in nodes {
            if !seen.insert(*n) {
                return Err(Error::validation(format!("path repeats node {n}")));
            }
        }
        let mut links = Vec::with_capacity(nodes.len() - 1);
        for pair in nodes.windows(2) {
            let link = t.link_between(pair[0], pair[1]).ok_or_else(|| {
                Error::validation(format!("no link between nodes {} and {}", pair[0], pair[1]))
            })?;
            links.push(link);
        }
        Ok(Path::assemble(t, nodes.to_vec(), links))
    }

    pub fn source(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn destination(&self) -> NodeId {
        *self.nodes.last().unwrap()
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn links(&self) -> &[LinkId] {
        &self.links
    }

    pub fn hops(&self) -> usize {
        self.links.len()
    }

    /// Number of nodes strictly between source and destination.
    pub fn interior_node_count(&self) -> u32 {
        (self.nodes.len() - 2) as u32
    }

    pub fn length_km(&self) -> f64 {
        self.length_km
    }

    pub fn contains_link(&self, link: LinkId) -> bool {
        self.links.contains(&link)
    }

    pub fn shares_link(&self, other: &Path) -> bool {
        self.links.iter().any(|l| other.links.contains(l))
    }
}

/// An undirected simple connected graph with per-link lengths and a uniform
/// per-link slot capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    name: String,
    slot_capacity: usize,
    labels: Vec<String>,
    links: Vec<Link>,
    /// Per node: (neighbor, joining link), sorted by neighbor id.
    adjacency: Vec<Vec<(NodeId, LinkId)>>,
}

impl Topology {
    /// Validates and builds a topology from raw parts. Link ids are assigned
    /// in `edges` order; `edges` entries are `(node, node, length_km)`.
    pub fn from_parts(
        name: &str,
        slot_capacity: usize,
        labels: Vec<String>,
        edges: &[(u32, u32, f64)],
    ) -> Result<Topology> {
        if labels.is_empty() {
            return Err(Error::validation("topology has no nodes"));
        }
        if slot_capacity == 0 {
            return Err(Error::validation("slot capacity must be at least 1"));
        }
        let n = labels.len();
        let mut links = Vec::with_capacity(edges.len());
        let mut seen_pairs = BTreeSet::new();
        for (i, &(u, v, length_km)) in edges.iter().enumerate() {
            if u as usize >= n || v as usize >= n {
                return Err(Error::validation(format!(
                    "link {i} references a node outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::validation(format!(
                    "link {i} endpoints must be distinct (both are {u})"
                )));
            }
            if !(length_km.is_finite() && length_km > 0.0) {
                return Err(Error::validation(format!(
                    "link {i} length_km must be positive and finite (got {length_km})"
                )));
            }
            if !seen_pairs.insert((u.min(v), u.max(v))) {
                return Err(Error::validation(format!(
                    "duplicate link between nodes {} and {} (simple graph required)",
                    u.min(v),
                    u.max(v)
                )));
            }
            links.push(Link {
                id: LinkId(i as u32),
                a: NodeId(u),
                b: NodeId(v),
                length_km,
            });
        }

        let mut adjacency = vec![Vec::new(); n];
        for link in &links {
            adjacency[link.a.0 as usize].push((link.b, link.id));
            adjacency[link.b.0 as usize].push((link.a, link.id));
        }
        for adj in &mut adjacency {
            adj.sort();
        }

        let t = Topology {
            name: name.to_string(),
            slot_capacity,
            labels,
            links,
            adjacency,
        };
        if !t.is_connected() {
            return Err(Error::validation("topology graph is not connected"));
        }
        Ok(t)
    }

    fn is_connected(&self) -> bool {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adjacency[u] {
                let v = v.0 as usize;
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    stack.push(v);
                }
            }
        }
        reached == n
    }

    /// Loads one of the built-in reference networks: `arpanet` or `cost239`
    /// (case-insensitive).
    pub fn load_builtin(name: &str) -> Result<Topology> {
        match name.to_ascii_lowercase().as_str() {
            "arpanet" => Topology::from_parts(
                "arpanet",
                DEFAULT_SLOT_CAPACITY,
                ARPANET_LABELS.iter().map(|s| s.to_string()).collect(),
                &ARPANET_LINKS,
            ),
            "cost239" => Topology::from_parts(
                "cost239",
                DEFAULT_SLOT_CAPACITY,
                COST239_LABELS.iter().map(|s| s.to_string()).collect(),
                &COST239_LINKS,
            ),
            _ => Err(Error::UnknownTopology(name.to_string())),
        }
    }

    pub fn builtin_names() -> &'static [&'static str] {
        &["arpanet", "cost239"]
    }

    /// Loads a topology from the text format (see [`Topology::parse_str`]).
    pub fn load_file(path: &FsPath) -> Result<Topology> {
        let text = std::fs::read_to_string(path)?;
        Topology::parse_str(&text)
    }

    /// Parses the topology text format:
    ///
    /// ```text
    /// # comment
    /// topology <name> <slot_capacity>
    /// node <id> <label>
    /// link <id> <node> <node> <length_km>
    /// ```
    ///
    /// The header must come first; node and link ids must be sequential from
    /// 0. The graph must be simple and connected with positive link lengths.
    pub fn parse_str(text: &str) -> Result<Topology> {
        let mut header: Option<(String, usize)> = None;
        let mut labels: Vec<String> = Vec::new();
        let mut edges: Vec<(u32, u32, f64)> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens[0] {
                "topology" => {
                    if header.is_some() {
                        return Err(Error::parse(line_no, "duplicate `topology` header"));
                    }
                    if tokens.len() != 3 {
                        return Err(Error::parse(
                            line_no,
                            "expected `topology <name> <slot_capacity>`",
                        ));
                    }
                    let f: usize = tokens[2].parse().map_err(|_| {
                        Error::parse(line_no, format!("bad slot capacity `{}`", tokens[2]))
                    })?;
                    if f == 0 {
                        return Err(Error::parse(line_no, "slot capacity must be at least 1"));
                    }
                    header = Some((tokens[1].to_string(), f));
                }
                "node" => {
                    if header.is_none() {
                        return Err(Error::parse(line_no, "`node` before `topology` header"));
                    }
                    if tokens.len() != 3 {
                        return Err(Error::parse(line_no, "expected `node <id> <label>`"));
                    }
                    let id: usize = tokens[1]
                        .parse()
                        .map_err(|_| Error::parse(line_no, format!("bad node id `{}`", tokens[1])))?;
                    if id != labels.len() {
                        return Err(Error::parse(
                            line_no,
                            format!("node ids must be sequential: expected {}, got {id}", labels.len()),
                        ));
                    }
                    labels.push(tokens[2].to_string());
                }
                "link" => {
                    if header.is_none() {
                        return Err(Error::parse(line_no, "`link` before `topology` header"));
                    }
                    if tokens.len() != 5 {
                        return Err(Error::parse(
                            line_no,
                            "expected `link <id> <node> <node> <length_km>`",
                        ));
                    }
                    let id: usize = tokens[1]
                        .parse()
                        .map_err(|_| Error::parse(line_no, format!("bad link id `{}`", tokens[1])))?;
                    if id != edges.len() {
                        return Err(Error::parse(
                            line_no,
                            format!("link ids must be sequential: expected {}, got {id}", edges.len()),
                        ));
                    }
                    let u: u32 = tokens[2]
                        .parse()
                        .map_err(|_| Error::parse(line_no, format!("bad node id `{}`", tokens[2])))?;
                    let v: u32 = tokens[3]
                        .parse()
                        .map_err(|_| Error::parse(line_no, format!("bad node id `{}`", tokens[3])))?;
                    let length_km: f64 = tokens[4].parse().map_err(|_| {
                        Error::parse(line_no, format!("bad length `{}`", tokens[4]))
                    })?;
                    if u as usize >= labels.len() || v as usize >= labels.len() {
                        return Err(Error::parse(
                            line_no,
                            format!("link references undeclared node (have {} nodes)", labels.len()),
                        ));
                    }
                    if u == v {
                        return Err(Error::parse(line_no, "link endpoints must be distinct"));
                    }
                    if !(length_km.is_finite() && length_km > 0.0) {
                        return Err(Error::parse(line_no, "length_km must be positive and finite"));
                    }
                    if edges
                        .iter()
                        .any(|&(a, b, _)| (a.min(b), a.max(b)) == (u.min(v), u.max(v)))
                    {
                        return Err(Error::parse(
                            line_no,
                            format!("duplicate link between nodes {} and {}", u.min(v), u.max(v)),
                        ));
                    }
                    edges.push((u, v, length_km));
                }
                other => {
                    return Err(Error::parse(
                        line_no,
                        format!("unknown record `{other}` (expected topology/node/link)"),
                    ));
                }
            }
        }

        let (name, slot_capacity) =
            header.ok_or_else(|| Error::parse(1, "missing `topology <name> <slot_capacity>` header"))?;
        Topology::from_parts(&name, slot_capacity, labels, &edges)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn slot_capacity(&self) -> usize {
        self.slot_capacity
    }

    /// Overrides the slot capacity (used by experiment configs).
    pub fn set_slot_capacity(&mut self, slot_capacity: usize) -> Result<()> {
        if slot_capacity == 0 {
            return Err(Error::validation("slot capacity must be at least 1"));
        }
        self.slot_capacity = slot_capacity;
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn label(&self, n: NodeId) -> &str {
        &self.labels[n.0 as usize]
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.labels.len() as u32).map(NodeId)
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, id: LinkId) -> &Link {
        &self.links[id.0 as usize]
    }

    /// Neighbors of `n` with the joining link, sorted by neighbor id.
    pub fn neighbors(&self, n: NodeId) -> &[(NodeId, LinkId)] {
        &self.adjacency[n.0 as usize]
    }

    pub fn link_between(&self, a: NodeId, b: NodeId) -> Option<LinkId> {
        self.adjacency[a.0 as usize]
            .iter()
            .find(|&&(v, _)| v == b)
            .map(|&(_, l)| l)
    }

    /// Number of unordered node pairs, `N(N-1)/2`.
    pub fn pair_population(&self) -> usize {
        let n = self.node_count();
        n * (n - 1) / 2
    }

    /// Renders the topology in the text format accepted by [`Topology::parse_str`];
    /// `parse_str(t.to_text())` reproduces `t` exactly.
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut text = format!("topology {} {}\n", self.name, self.slot_capacity);
        for (id, label) in self.labels.iter().enumerate() {
            writeln!(text, "node {id} {label}").expect("writing to a String cannot fail");
        }
        for link in &self.links {
            writeln!(text, "link {} {} {} {}", link.id, link.a, link.b, link.length_km)
                .expect("writing to a String cannot fail");
        }
        text
    }

    /// Minimum-cost simple path from `s` to `d` avoiding `excluded` links.
    ///
    /// Deterministic: among equal-cost paths the lexicographically smallest
    /// node-id sequence is returned. `None` when `d` is unreachable (or when
    /// `s == d`, which callers rule out).
    pub fn shortest_path(
        &self,
        s: NodeId,
        d: NodeId,
        metric: Metric,
        excluded: &BTreeSet<LinkId>,
    ) -> Option<Path> {
        if s == d {
            return None;
        }
        let n = self.node_count();
        // Distance-to-destination table (Dijkstra from `d`; the graph is
        // undirected). Small graphs, so the O(V^2) selection is fine.
        let mut dist = vec![f64::INFINITY; n];
        let mut visited = vec![false; n];
        dist[d.0 as usize] = 0.0;
        for _ in 0..n {
            let mut u = usize::MAX;
            let mut best = f64::INFINITY;
            for (i, &dv) in dist.iter().enumerate() {
                if !visited[i] && dv < best {
                    best = dv;
                    u = i;
                }
            }
            if u == usize::MAX {
                break;
            }
            visited[u] = true;
            for &(v, lid) in &self.adjacency[u] {
                if excluded.contains(&lid) {
                    continue;
                }
                let nd = dist[u] + metric.cost(self.link(lid));
                let v = v.0 as usize;
                if nd < dist[v] {
                    dist[v] = nd;
                }
            }
        }
        if !dist[s.0 as usize].is_finite() {
            return None;
        }

        // Forward walk from `s`: at each node take the neighbor minimizing
        // (link cost + remaining distance), breaking ties by smallest node
        // id. This realizes the lexicographically smallest minimum-cost node
        // sequence. Positive link costs make the remaining distance strictly
        // decrease, so the walk is simple and terminates at `d`.
        let mut nodes = vec![s];
        let mut links = Vec::new();
        let mut cur = s;
        while cur != d {
            let mut best: Option<(f64, NodeId, LinkId)> = None;
            for &(v, lid) in &self.adjacency[cur.0 as usize] {
                if excluded.contains(&lid) {
                    continue;
                }
                let dv = dist[v.0 as usize];
                if !dv.is_finite() {
                    continue;
                }
                let c = metric.cost(self.link(lid)) + dv;
                // Adjacency is sorted by node id, so strict improvement
                // keeps the smallest-id neighbor among equal costs.
                if best.map_or(true, |(bc, _, _)| c < bc) {
                    best = Some((c, v, lid));
                }
            }
            let (_, v, lid) = best.expect("reachable destination must have a next hop");
            nodes.push(v);
            links.push(lid);
            cur = v;
            debug_assert!(nodes.len() <= n, "walk exceeded node count");
        }
        Some(Path::assemble(self, nodes, links))
    }

    /// Link-disjoint path pair: primary = shortest path, backup = shortest
    /// path with the primary's links removed. `None` when no disjoint backup
    /// exists.
    pub fn disjoint_pair(&self, s: NodeId, d: NodeId, metric: Metric) -> Option<(Path, Path)> {
        let primary = self.shortest_path(s, d, metric, &BTreeSet::new())?;
        let excluded: BTreeSet<LinkId> = primary.links().iter().copied().collect();
        let backup = self.shortest_path(s, d, metric, &excluded)?;
        debug_assert!(!primary.shares_link(&backup));
        Some((primary, backup))
    }
}

const ARPANET_LABELS: [&str; 20] = [
    "SRI", "MCCLELLAN", "UTAH", "GWC", "ILLINOIS", "CASE", "CARNEGIE", "LINCOLN", "MIT", "BBN",
    "UCLA", "UCSB", "RAND", "SDC", "TINKER", "ETAC", "MITRE", "NBS", "HARVARD", "BTL",
];

/// Shipped default lengths (km) for the 20-node/32-link backbone, sized so
/// that the longest disjoint backup stays inside the topology's default
/// recovery-time constraint.
const ARPANET_LINKS: [(u32, u32, f64); 32] = [
    // northern chain
    (0, 1, 210.0),
    (1, 2, 385.0),
    (2, 3, 336.0),
    (3, 4, 280.0),
    (4, 5, 252.0),
    (5, 6, 224.0),
    (6, 7, 308.0),
    (7, 8, 175.0),
    (8, 9, 147.0),
    // southern chain
    (10, 11, 189.0),
    (11, 12, 266.0),
    (12, 13, 364.0),
    (13, 14, 315.0),
    (14, 15, 210.0),
    (15, 16, 238.0),
    (16, 17, 294.0),
    (17, 18, 182.0),
    (18, 19, 161.0),
    // coast closures
    (0, 10, 217.0),
    (9, 19, 203.0),
    // vertical rungs
    (2, 12, 231.0),
    (4, 14, 196.0),
    (5, 15, 245.0),
    (7, 17, 217.0),
    // express chords
    (0, 4, 630.0),
    (5, 9, 525.0),
    (10, 14, 595.0),
    (15, 19, 490.0),
    // diagonal rungs
    (1, 11, 301.0),
    (3, 13, 287.0),
    (6, 16, 273.0),
    (8, 18, 259.0),
];

const COST239_LABELS: [&str; 11] = [
    "LONDON",
    "AMSTERDAM",
    "BRUSSELS",
    "LUXEMBOURG",
    "PARIS",
    "ZURICH",
    "MILAN",
    "VIENNA",
    "PRAGUE",
    "BERLIN",
    "COPENHAGEN",
];

/// Shipped default lengths (km) for the 11-node/26-link European mesh.
const COST239_LINKS: [(u32, u32, f64); 26] = [
    (0, 1, 360.0),
    (0, 2, 320.0),
    (0, 4, 340.0),
    (0, 10, 950.0),
    (1, 2, 170.0),
    (1, 3, 320.0),
    (1, 9, 580.0),
    (1, 10, 620.0),
    (2, 3, 190.0),
    (2, 4, 260.0),
    (2, 6, 700.0),
    (3, 4, 290.0),
    (3, 5, 340.0),
    (4, 5, 490.0),
    (4, 6, 640.0),
    (5, 6, 220.0),
    (5, 7, 600.0),
    (5, 8, 530.0),
    (6, 7, 630.0),
    (6, 8, 650.0),
    (7, 8, 250.0),
    (7, 9, 520.0),
    (7, 10, 770.0),
    (8, 9, 280.0),
    (8, 10, 630.0),
    (9, 10, 360.0),
];
