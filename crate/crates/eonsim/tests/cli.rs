//! End-to-end tests of the command-line front end and its exit codes:
//! 0 success, 1 validation error, 2 I/O error.

use std::path::Path;
use std::process::{Command, Output};

fn eonsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eonsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn run_emits_artifacts_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("results");
    let config = dir.path().join("exp.cfg");
    std::fs::write(
        &config,
        format!(
            "topology = cost239\nsweep = 5, 10\nseeds = 1, 2\nworkload.fr_max = 8\noutput.dir = {}\n",
            out_dir.display()
        ),
    )
    .unwrap();

    let out = eonsim(&["run", "--config", config.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert_eq!(out.status.code(), Some(0));
    for name in ["bbp.csv", "rt.csv", "bpr.csv", "cells.csv", "summary.json", "manifest.json"] {
        assert!(out_dir.join(name).exists(), "{name} missing");
    }
    assert!(!out_dir.join("grids").exists(), "grid dumps are opt-in");

    let bbp = std::fs::read_to_string(out_dir.join("bbp.csv")).unwrap();
    let mut lines = bbp.lines();
    assert_eq!(lines.next(), Some("request_count,dpp,spp,incb"));
    assert_eq!(bbp.lines().count(), 3, "header + one row per sweep point");

    let manifest = std::fs::read_to_string(out_dir.join("manifest.json")).unwrap();
    assert!(manifest.contains("\"generator\": \"splitmix64\""));
    assert!(manifest.contains("\"config_sha256\""));
    assert!(stdout(&out).contains("cost239"));
}

#[test]
fn dump_grid_flag_writes_grids() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("results");
    let config = dir.path().join("exp.cfg");
    std::fs::write(
        &config,
        format!(
            "topology = cost239\nsweep = 3\nseeds = 1\nworkload.fr_max = 4\noutput.dir = {}\n",
            out_dir.display()
        ),
    )
    .unwrap();

    let out = eonsim(&["run", "--config", config.to_str().unwrap(), "--dump-grid"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let grids = out_dir.join("grids");
    for scheme in ["dpp", "spp", "incb"] {
        let file = grids.join(format!("{scheme}_c3_s1.grid"));
        let text = std::fs::read_to_string(&file).unwrap();
        // One row per link: id, endpoints, and a slot-state string.
        assert_eq!(text.lines().count(), 26);
        assert!(text.lines().all(|l| l.split(' ').count() == 3));
    }
}

#[test]
fn missing_config_file_is_an_io_error() {
    let out = eonsim(&["run", "--config", "/nonexistent/exp.cfg"]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("error"));
}

#[test]
fn invalid_config_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.cfg");
    std::fs::write(&config, "topology = cost239\nsweep = 56\n").unwrap();
    let out = eonsim(&["run", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("55"), "names the pair population: {}", stderr(&out));

    std::fs::write(&config, "topology = cost239\nbogus = 1\n").unwrap();
    let out = eonsim(&["run", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = eonsim(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    let out = eonsim(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("run"));
    assert!(stdout(&out).contains("topologies"));
    assert!(stdout(&out).contains("workload"));
}

#[test]
fn topologies_lists_builtins() {
    let out = eonsim(&["topologies"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("arpanet: 20 nodes, 32 links"), "{text}");
    assert!(text.contains("cost239: 11 nodes, 26 links"), "{text}");
}

#[test]
fn workload_export_is_deterministic_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = eonsim(&[
            "workload",
            "--topology",
            "arpanet",
            "--count",
            "25",
            "--seed",
            "7",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    }
    let bytes_a = std::fs::read(&a).unwrap();
    assert_eq!(bytes_a, std::fs::read(&b).unwrap(), "same seed, same bytes");

    let text = String::from_utf8(bytes_a).unwrap();
    assert_eq!(text.lines().next(), Some("id,src,dst,fr"));
    assert_eq!(text.lines().count(), 26);

    // A different seed produces a different workload.
    let c = dir.path().join("c.csv");
    let out = eonsim(&[
        "workload", "--topology", "arpanet", "--count", "25", "--seed", "8", "--out",
        c.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_ne!(std::fs::read(&c).unwrap(), std::fs::read(&a).unwrap());

    // Oversized counts are validation errors naming the limit.
    let out = eonsim(&[
        "workload", "--topology", "cost239", "--count", "56", "--seed", "1", "--out", "-",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("55"), "{}", stderr(&out));
}

#[test]
fn workload_reads_topology_files() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("ring.net");
    std::fs::write(
        &net,
        "# four-node ring\ntopology ring 16\nnode 0 A\nnode 1 B\nnode 2 C\nnode 3 D\n\
link 0 0 1 100\nlink 1 1 2 100\nlink 2 2 3 100\nlink 3 3 0 100\n",
    )
    .unwrap();
    let spec = format!("file:{}", net.display());
    let out = eonsim(&[
        "workload", "--topology", &spec, "--count", "6", "--seed", "1", "--fr-max", "8", "--out", "-",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out).lines().count(), 7, "header + all six pairs");
}

fn run_config_in(dir: &Path, body: &str) -> Output {
    let config = dir.join("exp.cfg");
    std::fs::write(&config, body).unwrap();
    eonsim(&["run", "--config", config.to_str().unwrap()])
}

#[test]
fn run_accepts_topology_files_too() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("ring.net");
    std::fs::write(
        &net,
        "topology ring 32\nnode 0 A\nnode 1 B\nnode 2 C\nnode 3 D\nnode 4 E\n\
link 0 0 1 100\nlink 1 1 2 100\nlink 2 2 3 100\nlink 3 3 4 100\nlink 4 4 0 100\n",
    )
    .unwrap();
    let out_dir = dir.path().join("results");
    let out = run_config_in(
        dir.path(),
        &format!(
            "topology = file:{}\nsweep = 4, 8\nseeds = 1\nworkload.fr_max = 4\noutput.dir = {}\n",
            net.display(),
            out_dir.display()
        ),
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let summary = std::fs::read_to_string(out_dir.join("summary.json")).unwrap();
    assert!(summary.contains("\"topology\": \"ring\""), "{summary}");
}
