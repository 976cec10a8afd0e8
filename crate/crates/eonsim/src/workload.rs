//! Deterministic random request generation over distinct node pairs.
//!
//! Pairs are sampled without replacement, uniformly over all `N(N-1)/2`
//! unordered pairs, via a partial Fisher–Yates shuffle of the lexicographic
//! pair list. The pair draw and the demand draw for each request are
//! interleaved, so for a fixed seed the first `k` requests are identical
//! whatever `count` is — sweeping the request count means replaying a
//! prefix of one workload, not reshuffling.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::spectrum::ConnId;
use crate::topology::{NodeId, Topology};

pub const DEFAULT_FR_MIN: usize = 1;
pub const DEFAULT_FR_MAX: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkloadSpec {
    pub count: usize,
    pub fr_min: usize,
    pub fr_max: usize,
    pub seed: u64,
}

/// A connection request: distinct endpoints and a contiguous-slot demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Request {
    pub id: ConnId,
    pub source: NodeId,
    pub destination: NodeId,
    pub fr: usize,
}

/// Generates `spec.count` requests on `t`, reproducible from `spec.seed`.
/// Ids are assigned `0..count` in generation order.
pub fn generate(t: &Topology, spec: &WorkloadSpec) -> Result<Vec<Request>> {
    let population = t.pair_population();
    if spec.count == 0 {
        return Err(Error::validation("workload count must be at least 1"));
    }
    if spec.count > population {
        return Err(Error::validation(format!(
            "workload count {} exceeds the {} distinct node pairs of `{}`",
            spec.count,
            population,
            t.name()
        )));
    }
    if spec.fr_min < 1 || spec.fr_min > spec.fr_max {
        return Err(Error::validation(format!(
            "demand bounds must satisfy 1 <= fr_min <= fr_max (got {}..{})",
            spec.fr_min, spec.fr_max
        )));
    }
    if spec.fr_max > t.slot_capacity() {
        return Err(Error::validation(format!(
            "fr_max {} exceeds slot capacity {}",
            spec.fr_max,
            t.slot_capacity()
        )));
    }

    let mut pool: Vec<(NodeId, NodeId)> = Vec::with_capacity(population);
    for s in t.node_ids() {
        for d in t.node_ids() {
            if s < d {
                pool.push((s, d));
            }
        }
    }

    let mut rng = SplitMix64::new(spec.seed);
    let span = (spec.fr_max - spec.fr_min + 1) as u64;
    let mut requests = Vec::with_capacity(spec.count);
    for k in 0..spec.count {
        let j = k + rng.bounded((population - k) as u64) as usize;
        pool.swap(k, j);
        let fr = spec.fr_min + rng.bounded(span) as usize;
        let (source, destination) = pool[k];
        requests.push(Request {
            id: k as ConnId,
            source,
            destination,
            fr,
        });
    }
    Ok(requests)
}

/// Writes requests as CSV (`id,src,dst,fr`) so a workload can be replayed.
pub fn write_csv<W: Write>(requests: &[Request], w: &mut W) -> io::Result<()> {
    writeln!(w, "id,src,dst,fr")?;
    for r in requests {
        writeln!(w, "{},{},{},{}", r.id, r.source, r.destination, r.fr)?;
    }
    Ok(())
}

/// Convenience: the exact CSV bytes for a workload.
pub fn to_csv(requests: &[Request]) -> String {
    let mut buf = Vec::new();
    write_csv(requests, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is ASCII")
}

/// Parses workload CSV produced by [`write_csv`].
pub fn read_csv(text: &str) -> Result<Vec<Request>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "id,src,dst,fr" => {}
        _ => return Err(Error::parse(1, "expected header `id,src,dst,fr`")),
    }
    let mut requests = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::parse(line_no, "expected 4 fields `id,src,dst,fr`"));
        }
        let parse_u32 = |s: &str, what: &str| -> Result<u32> {
            s.trim()
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad {what} `{s}`")))
        };
        let id = parse_u32(fields[0], "id")?;
        let src = parse_u32(fields[1], "src")?;
        let dst = parse_u32(fields[2], "dst")?;
        let fr = parse_u32(fields[3], "fr")? as usize;
        if id as usize != requests.len() {
            return Err(Error::parse(
                line_no,
                format!("ids must be sequential: expected {}, got {id}", requests.len()),
            ));
        }
        if src == dst {
            return Err(Error::parse(line_no, "src and dst must differ"));
        }
        if fr == 0 {
            return Err(Error::parse(line_no, "fr must be at least 1"));
        }
        requests.push(Request {
            id,
            source: NodeId(src),
            destination: NodeId(dst),
            fr,
        });
    }
    Ok(requests)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn full_population_covers_every_pair_once() {
        let t = Topology::load_builtin("arpanet").unwrap();
        let spec = WorkloadSpec {
            count: 190,
            fr_min: 1,
            fr_max: 8,
            seed: 3,
        };
        let reqs = generate(&t, &spec).unwrap();
        assert_eq!(reqs.len(), 190);
        let pairs: BTreeSet<(NodeId, NodeId)> = reqs
            .iter()
            .map(|r| {
                assert!(r.source != r.destination);
                (
                    r.source.min(r.destination),
                    r.source.max(r.destination),
                )
            })
            .collect();
        assert_eq!(pairs.len(), 190);
    }

    #[test]
    fn count_above_population_is_rejected() {
        let t = Topology::load_builtin("cost239").unwrap();
        let spec = WorkloadSpec {
            count: 56,
            fr_min: 1,
            fr_max: 8,
            seed: 1,
        };
        match generate(&t, &spec) {
            Err(Error::Validation(msg)) => assert!(msg.contains("55")),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_demand_distribution() {
        let t = Topology::load_builtin("cost239").unwrap();
        let spec = WorkloadSpec {
            count: 55,
            fr_min: 1,
            fr_max: 1,
            seed: 9,
        };
        assert!(generate(&t, &spec).unwrap().iter().all(|r| r.fr == 1));
    }

    #[test]
    fn prefix_stability_across_counts() {
        let t = Topology::load_builtin("cost239").unwrap();
        let short = generate(
            &t,
            &WorkloadSpec { count: 10, fr_min: 1, fr_max: 8, seed: 42 },
        )
        .unwrap();
        let long = generate(
            &t,
            &WorkloadSpec { count: 55, fr_min: 1, fr_max: 8, seed: 42 },
        )
        .unwrap();
        assert_eq!(short[..], long[..10]);
    }

    #[test]
    fn demand_mean_matches_uniform_distribution() {
        // Ring with 150 nodes: 11175 pairs, enough for a 10^4-sample mean.
        let labels = (0..150).map(|i| format!("N{i}")).collect();
        let edges: Vec<(u32, u32, f64)> = (0..150)
            .map(|i| (i as u32, ((i + 1) % 150) as u32, 10.0))
            .collect();
        let t = Topology::from_parts("bigring", 64, labels, &edges).unwrap();
        let spec = WorkloadSpec {
            count: 10_000,
            fr_min: 1,
            fr_max: 8,
            seed: 77,
        };
        let reqs = generate(&t, &spec).unwrap();
        let mean = reqs.iter().map(|r| r.fr as f64).sum::<f64>() / reqs.len() as f64;
        // Uniform on [1,8]: mean 4.5, variance 5.25; three standard errors
        // over 10^4 samples is about 0.069.
        assert!((mean - 4.5).abs() < 3.0 * (5.25f64 / 10_000.0).sqrt());
    }

    #[test]
    fn csv_round_trip() {
        let t = Topology::load_builtin("cost239").unwrap();
        let reqs = generate(
            &t,
            &WorkloadSpec { count: 20, fr_min: 1, fr_max: 8, seed: 5 },
        )
        .unwrap();
        let csv = to_csv(&reqs);
        assert_eq!(read_csv(&csv).unwrap(), reqs);
    }

    #[test]
    fn csv_rejects_bad_rows() {
        assert!(matches!(read_csv("nope\n"), Err(Error::Parse { line: 1, .. })));
        let bad = "id,src,dst,fr\n0,3,3,2\n";
        assert!(matches!(read_csv(bad), Err(Error::Parse { line: 2, .. })));
    }
}
