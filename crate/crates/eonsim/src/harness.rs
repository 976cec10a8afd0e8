//! Experiment orchestration: default resolution, the (scheme × request
//! count × seed) sweep, seed averaging, and deterministic artifact
//! emission.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{ExperimentConfig, FailureMode, TopologySource};
use crate::error::{Error, Result};
use crate::failure::{self, FailureScenario};
use crate::metrics::{self, RejectionCounts, RunReport};
use crate::protection::{NetworkState, ProvisionOutcome, Provisioner, Scheme};
use crate::timing::{TimingParams, RTC_ARPANET_US, RTC_COST239_US};
use crate::topology::{Metric, Topology};
use crate::workload::{self, WorkloadSpec, DEFAULT_FR_MAX, DEFAULT_FR_MIN};

/// Name of the pseudo-random generator, recorded in the manifest so runs
/// can be matched to the workload algorithm that produced them.
pub const GENERATOR_NAME: &str = "splitmix64";

/// Default seed list for seed-averaged sweeps.
pub const DEFAULT_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

/// A fully resolved experiment: every optional config knob replaced by its
/// default, with the applied defaults recorded.
#[derive(Debug, Clone)]
pub struct ResolvedExperiment {
    pub topology: Topology,
    pub topology_source: String,
    pub schemes: Vec<Scheme>,
    pub sweep: Vec<usize>,
    pub seeds: Vec<u64>,
    pub metric: Metric,
    pub timing: TimingParams,
    pub fr_min: usize,
    pub fr_max: usize,
    pub failure_mode: FailureMode,
    pub sample_count: Option<usize>,
    pub sample_seed: u64,
    pub fs_weighted_bbp: bool,
    pub out_dir: PathBuf,
    pub dump_grids: bool,
    /// `key = value` lines for every default the resolver filled in.
    pub defaults_applied: Vec<String>,
}

/// Default sweep: ten evenly spaced request counts up to the pair
/// population, computed in integer arithmetic and deduplicated.
pub fn default_sweep(population: usize) -> Vec<usize> {
    let mut counts: Vec<usize> = (1..=10).map(|k| (population * k + 5) / 10).collect();
    counts.dedup();
    counts.retain(|&c| c >= 1);
    counts
}

/// Resolves a parsed config against the documented defaults.
pub fn resolve(cfg: &ExperimentConfig) -> Result<ResolvedExperiment> {
    let mut defaults = Vec::new();

    let (mut topology, topology_source) = match &cfg.topology {
        TopologySource::Builtin(name) => {
            let t = Topology::load_builtin(name)?;
            let source = format!("builtin:{}", t.name());
            (t, source)
        }
        TopologySource::File(path) => {
            let t = Topology::load_file(path)?;
            (t, format!("file:{}", path.display()))
        }
    };
    if let Some(f) = cfg.slot_capacity {
        topology.set_slot_capacity(f)?;
    } else {
        defaults.push(format!("slot_capacity = {}", topology.slot_capacity()));
    }

    let schemes = match &cfg.schemes {
        Some(schemes) if schemes.is_empty() => {
            return Err(Error::validation("at least one scheme is required"));
        }
        Some(schemes) => schemes.clone(),
        None => {
            defaults.push("schemes = dpp,spp,incb".to_string());
            Scheme::ALL.to_vec()
        }
    };

    let population = topology.pair_population();
    let sweep = match &cfg.sweep {
        Some(sweep) if sweep.is_empty() => {
            return Err(Error::validation("sweep needs at least one request count"));
        }
        Some(sweep) => sweep.clone(),
        None => {
            let sweep = default_sweep(population);
            defaults.push(format!("sweep = {}", join(&sweep)));
            sweep
        }
    };
    if let Some(&max) = sweep.last() {
        if max > population {
            return Err(Error::validation(format!(
                "sweep count {max} exceeds the {population} distinct node pairs of `{}`",
                topology.name()
            )));
        }
    }

    let seeds = match &cfg.seeds {
        Some(seeds) if seeds.is_empty() => {
            return Err(Error::validation("at least one seed is required"));
        }
        Some(seeds) => seeds.clone(),
        None => {
            defaults.push(format!("seeds = {}", join(&DEFAULT_SEEDS)));
            DEFAULT_SEEDS.to_vec()
        }
    };

    let metric = cfg.metric.unwrap_or_else(|| {
        defaults.push(format!("metric = {}", Metric::Km));
        Metric::Km
    });

    let mut timing = TimingParams::default();
    let mut apply = |value: Option<f64>, slot: &mut f64, key: &str| {
        match value {
            Some(v) => *slot = v,
            None => defaults.push(format!("{key} = {}", *slot)),
        }
    };
    apply(cfg.f_d_us, &mut timing.f_d_us, "timing.f_d_us");
    apply(cfg.m_p_us, &mut timing.m_p_us, "timing.m_p_us");
    apply(cfg.m_a_us, &mut timing.m_a_us, "timing.m_a_us");
    apply(cfg.prop_us_per_km, &mut timing.prop_us_per_km, "timing.prop_us_per_km");
    apply(cfg.c_x_us, &mut timing.c_x_us, "timing.c_x_us");
    match cfg.rtc_us {
        Some(v) => timing.rtc_us = v,
        None => {
            timing.rtc_us = match topology.name() {
                "arpanet" => RTC_ARPANET_US,
                "cost239" => RTC_COST239_US,
                _ => RTC_ARPANET_US,
            };
            defaults.push(format!("timing.rtc_us = {}", timing.rtc_us));
        }
    }

    let fr_min = cfg.fr_min.unwrap_or_else(|| {
        defaults.push(format!("workload.fr_min = {DEFAULT_FR_MIN}"));
        DEFAULT_FR_MIN
    });
    let fr_max = cfg.fr_max.unwrap_or_else(|| {
        defaults.push(format!("workload.fr_max = {DEFAULT_FR_MAX}"));
        DEFAULT_FR_MAX
    });
    if fr_min < 1 || fr_min > fr_max {
        return Err(Error::validation(format!(
            "invalid demand range [{fr_min}, {fr_max}]"
        )));
    }
    if fr_max > topology.slot_capacity() {
        return Err(Error::validation(format!(
            "workload.fr_max ({fr_max}) exceeds the slot capacity ({})",
            topology.slot_capacity()
        )));
    }

    let failure_mode = cfg.failure_mode.unwrap_or_else(|| {
        defaults.push("failure.mode = enumerate".to_string());
        FailureMode::Enumerate
    });
    let sample_seed = match failure_mode {
        FailureMode::Sample => cfg.sample_seed.unwrap_or_else(|| {
            defaults.push("failure.sample_seed = 1".to_string());
            1
        }),
        FailureMode::Enumerate => cfg.sample_seed.unwrap_or(1),
    };

    let out_dir = cfg.out_dir.clone().unwrap_or_else(|| {
        defaults.push("output.dir = out".to_string());
        PathBuf::from("out")
    });

    defaults.sort();
    Ok(ResolvedExperiment {
        topology,
        topology_source,
        schemes,
        sweep,
        seeds,
        metric,
        timing,
        fr_min,
        fr_max,
        failure_mode,
        sample_count: cfg.sample_count,
        sample_seed,
        fs_weighted_bbp: cfg.fs_weighted_bbp.unwrap_or(false),
        out_dir,
        dump_grids: cfg.dump_grids,
        defaults_applied: defaults,
    })
}

impl ResolvedExperiment {
    /// Canonical sorted `key = value` text of every knob that influences
    /// results (the output directory and debug dumps are excluded). Hashed
    /// into the manifest so identical settings are recognizable across
    /// runs.
    pub fn canonical_text(&self) -> String {
        let mut lines = vec![
            format!("failure.mode = {}", match self.failure_mode {
                FailureMode::Enumerate => "enumerate",
                FailureMode::Sample => "sample",
            }),
            format!("metric = {}", self.metric),
            format!("metrics.fs_weighted_bbp = {}", self.fs_weighted_bbp),
            format!(
                "schemes = {}",
                self.schemes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
            ),
            format!("seeds = {}", join(&self.seeds)),
            format!("slot_capacity = {}", self.topology.slot_capacity()),
            format!("sweep = {}", join(&self.sweep)),
            format!("timing.c_x_us = {}", self.timing.c_x_us),
            format!("timing.f_d_us = {}", self.timing.f_d_us),
            format!("timing.m_a_us = {}", self.timing.m_a_us),
            format!("timing.m_p_us = {}", self.timing.m_p_us),
            format!("timing.prop_us_per_km = {}", self.timing.prop_us_per_km),
            format!("timing.rtc_us = {}", self.timing.rtc_us),
            format!("topology = {}", self.topology_source),
            format!("topology_table_sha256 = {}", sha256_hex(&self.topology.to_text())),
            format!("workload.fr_max = {}", self.fr_max),
            format!("workload.fr_min = {}", self.fr_min),
        ];
        if self.failure_mode == FailureMode::Sample {
            if let Some(count) = self.sample_count {
                lines.push(format!("failure.sample_count = {count}"));
            }
            lines.push(format!("failure.sample_seed = {}", self.sample_seed));
        }
        lines.sort();
        let mut text = lines.join("\n");
        text.push('\n');
        text
    }
}

/// Seed-averaged figures for one (scheme, request count) sweep point.
#[derive(Debug, Clone, Serialize)]
pub struct AveragedPoint {
    pub scheme: Scheme,
    pub request_count: usize,
    pub bbp: f64,
    pub mean_rt_us: Option<f64>,
    pub bpr: Option<f64>,
    pub recovery_failure_rate: Option<f64>,
}

/// Whole-sweep averages per scheme.
#[derive(Debug, Clone, Serialize)]
pub struct SchemeSummary {
    pub scheme: Scheme,
    pub mean_bbp: f64,
    pub mean_rt_us: Option<f64>,
    pub mean_bpr: Option<f64>,
    pub mean_recovery_failure_rate: Option<f64>,
    pub accepted_total: usize,
    pub rejected_total: usize,
}

/// Provenance block written as `manifest.json`.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub config_sha256: String,
    pub generator: &'static str,
    pub topology: String,
    pub topology_source: String,
    pub topology_table_sha256: String,
    pub node_count: usize,
    pub link_count: usize,
    pub slot_capacity: usize,
    pub schemes: Vec<Scheme>,
    pub sweep: Vec<usize>,
    pub seeds: Vec<u64>,
    pub fr_min: usize,
    pub fr_max: usize,
    pub metric: String,
    pub timing: TimingParams,
    pub failure_mode: String,
    pub scenario_count: usize,
    pub workload_sha256: BTreeMap<u64, String>,
    pub defaults_applied: Vec<String>,
    pub canonical_config: String,
}

/// Complete result of a sweep run.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub topology: String,
    pub schemes: Vec<Scheme>,
    pub sweep: Vec<usize>,
    pub seeds: Vec<u64>,
    pub scenario_count: usize,
    /// One report per (scheme, count, seed), scheme-major order.
    pub cells: Vec<RunReport>,
    /// Seed-averaged figures, scheme-major then count order.
    pub points: Vec<AveragedPoint>,
    pub summary: Vec<SchemeSummary>,
    pub manifest: Manifest,
    /// Grid dumps keyed by file name, present when dumps were requested.
    pub grids: BTreeMap<String, String>,
}

fn sha256_hex(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        write!(out, "{byte:02x}").expect("writing to a String cannot fail");
    }
    out
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let mut total = 0.0;
    let mut count = 0usize;
    for v in values {
        total += v;
        count += 1;
    }
    (count > 0).then(|| total / count as f64)
}

/// Runs the full sweep: for every seed a workload of the largest request
/// count is generated once, every sweep point consumes a prefix of it, and
/// every (scheme, count, seed) cell provisions on a fresh grid and then
/// evaluates every failure scenario. Cells are independent and evaluated
/// in parallel; results are merged in a fixed order so output bytes never
/// depend on scheduling.
pub fn run_experiment(exp: &ResolvedExperiment) -> Result<SweepResult> {
    let t = &exp.topology;
    let scenarios: Vec<FailureScenario> = match exp.failure_mode {
        FailureMode::Enumerate => failure::enumerate_scenarios(t),
        FailureMode::Sample => {
            let count = exp
                .sample_count
                .ok_or_else(|| Error::validation("failure sampling requires a sample count"))?;
            failure::sample_scenarios(t, count, exp.sample_seed)?
        }
    };

    let max_count = *exp.sweep.last().expect("resolve guarantees a non-empty sweep");
    let mut workloads = BTreeMap::new();
    let mut workload_hashes = BTreeMap::new();
    for &seed in &exp.seeds {
        let spec = WorkloadSpec {
            count: max_count,
            fr_min: exp.fr_min,
            fr_max: exp.fr_max,
            seed,
        };
        let requests = workload::generate(t, &spec)?;
        workload_hashes.insert(seed, sha256_hex(&workload::to_csv(&requests)));
        workloads.insert(seed, requests);
    }

    let mut jobs = Vec::new();
    for &scheme in &exp.schemes {
        for &count in &exp.sweep {
            for &seed in &exp.seeds {
                jobs.push((scheme, count, seed));
            }
        }
    }

    let cell_results: Vec<(RunReport, Option<String>)> = jobs
        .par_iter()
        .map(|&(scheme, count, seed)| {
            let requests = &workloads[&seed][..count];
            let provisioner = Provisioner::new(t, scheme, exp.timing).with_metric(exp.metric);
            let mut state = NetworkState::new(t);
            let outcomes: Vec<ProvisionOutcome> = requests
                .iter()
                .map(|req| provisioner.provision(&mut state, req))
                .collect();

            let accepted = outcomes.iter().filter(|o| o.is_accepted()).count();
            let bbp = if exp.fs_weighted_bbp {
                metrics::bbp_fs_weighted(&outcomes)
            } else {
                metrics::bbp(&outcomes)
            }
            .expect("sweep points are non-empty");
            let bpr = (accepted > 0)
                .then(|| metrics::bpr(&state.grid, state.accepted()).expect("accepted demand is positive"));

            let mut recoveries = Vec::new();
            for scenario in &scenarios {
                recoveries.extend(failure::recover(scenario, &state, t, &exp.timing));
            }

            let report = RunReport {
                scheme,
                topology: t.name().to_string(),
                seed,
                request_count: count,
                accepted,
                rejected: count - accepted,
                bbp,
                bpr,
                mean_rt_us: metrics::mean_rt(&recoveries),
                recovery_failure_rate: metrics::recovery_failure_rate(&recoveries),
                rejections: RejectionCounts::tally(&outcomes),
            };
            let dump = exp
                .dump_grids
                .then(|| state.grid.dump(t));
            (report, dump)
        })
        .collect();

    let mut cells = Vec::with_capacity(cell_results.len());
    let mut grids = BTreeMap::new();
    for ((report, dump), &(scheme, count, seed)) in cell_results.into_iter().zip(&jobs) {
        if let Some(text) = dump {
            grids.insert(format!("{scheme}_c{count}_s{seed}.grid"), text);
        }
        cells.push(report);
    }

    let mut points = Vec::new();
    for &scheme in &exp.schemes {
        for &count in &exp.sweep {
            let of_point: Vec<&RunReport> = cells
                .iter()
                .filter(|r| r.scheme == scheme && r.request_count == count)
                .collect();
            points.push(AveragedPoint {
                scheme,
                request_count: count,
                bbp: mean(of_point.iter().map(|r| r.bbp)).expect("every point has seeds"),
                mean_rt_us: mean(of_point.iter().filter_map(|r| r.mean_rt_us)),
                bpr: mean(of_point.iter().filter_map(|r| r.bpr)),
                recovery_failure_rate: mean(of_point.iter().filter_map(|r| r.recovery_failure_rate)),
            });
        }
    }

    let mut summary = Vec::new();
    for &scheme in &exp.schemes {
        let of_scheme: Vec<&RunReport> = cells.iter().filter(|r| r.scheme == scheme).collect();
        summary.push(SchemeSummary {
            scheme,
            mean_bbp: mean(of_scheme.iter().map(|r| r.bbp)).expect("every scheme has cells"),
            mean_rt_us: mean(of_scheme.iter().filter_map(|r| r.mean_rt_us)),
            mean_bpr: mean(of_scheme.iter().filter_map(|r| r.bpr)),
            mean_recovery_failure_rate: mean(of_scheme.iter().filter_map(|r| r.recovery_failure_rate)),
            accepted_total: of_scheme.iter().map(|r| r.accepted).sum(),
            rejected_total: of_scheme.iter().map(|r| r.rejected).sum(),
        });
    }

    let canonical = exp.canonical_text();
    let manifest = Manifest {
        config_sha256: sha256_hex(&canonical),
        generator: GENERATOR_NAME,
        topology: t.name().to_string(),
        topology_source: exp.topology_source.clone(),
        topology_table_sha256: sha256_hex(&t.to_text()),
        node_count: t.node_count(),
        link_count: t.link_count(),
        slot_capacity: t.slot_capacity(),
        schemes: exp.schemes.clone(),
        sweep: exp.sweep.clone(),
        seeds: exp.seeds.clone(),
        fr_min: exp.fr_min,
        fr_max: exp.fr_max,
        metric: exp.metric.to_string(),
        timing: exp.timing,
        failure_mode: match exp.failure_mode {
            FailureMode::Enumerate => "enumerate".to_string(),
            FailureMode::Sample => format!(
                "sample:{}:{}",
                exp.sample_count.unwrap_or_default(),
                exp.sample_seed
            ),
        },
        scenario_count: scenarios.len(),
        workload_sha256: workload_hashes,
        defaults_applied: exp.defaults_applied.clone(),
        canonical_config: canonical,
    };

    Ok(SweepResult {
        topology: t.name().to_string(),
        schemes: exp.schemes.clone(),
        sweep: exp.sweep.clone(),
        seeds: exp.seeds.clone(),
        scenario_count: scenarios.len(),
        cells,
        points,
        summary,
        manifest,
        grids,
    })
}

impl SweepResult {
    fn point(&self, scheme: Scheme, count: usize) -> &AveragedPoint {
        self.points
            .iter()
            .find(|p| p.scheme == scheme && p.request_count == count)
            .expect("every (scheme, count) pair has a point")
    }

    fn sweep_csv(&self, value: impl Fn(&AveragedPoint) -> String) -> String {
        let mut text = String::from("request_count");
        for scheme in &self.schemes {
            text.push(',');
            text.push_str(&scheme.to_string());
        }
        text.push('\n');
        for &count in &self.sweep {
            text.push_str(&count.to_string());
            for &scheme in &self.schemes {
                text.push(',');
                text.push_str(&value(self.point(scheme, count)));
            }
            text.push('\n');
        }
        text
    }

    /// Plot data: blocking probability per sweep point and scheme.
    pub fn bbp_csv(&self) -> String {
        self.sweep_csv(|p| format!("{:.6}", p.bbp))
    }

    /// Plot data: mean recovery time (μs) per sweep point and scheme.
    pub fn rt_csv(&self) -> String {
        self.sweep_csv(|p| p.mean_rt_us.map(|v| format!("{v:.3}")).unwrap_or_default())
    }

    /// Plot data: provisioning ratio per sweep point and scheme.
    pub fn bpr_csv(&self) -> String {
        self.sweep_csv(|p| p.bpr.map(|v| format!("{v:.6}")).unwrap_or_default())
    }

    /// Per-cell reports, one row per (scheme, count, seed).
    pub fn cells_csv(&self) -> String {
        let mut text = String::from(RunReport::CSV_HEADER);
        text.push('\n');
        for cell in &self.cells {
            text.push_str(&cell.csv_row());
            text.push('\n');
        }
        text
    }

    /// Sweep-wide averages in the shape of the comparison table: one entry
    /// per scheme with its mean figures on this topology.
    pub fn summary_json(&self) -> String {
        #[derive(Serialize)]
        struct SummaryDoc<'a> {
            topology: &'a str,
            request_counts: &'a [usize],
            seeds: &'a [u64],
            scenario_count: usize,
            schemes: &'a [SchemeSummary],
        }
        let doc = SummaryDoc {
            topology: &self.topology,
            request_counts: &self.sweep,
            seeds: &self.seeds,
            scenario_count: self.scenario_count,
            schemes: &self.summary,
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("summary serializes");
        text.push('\n');
        text
    }

    pub fn manifest_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.manifest).expect("manifest serializes");
        text.push('\n');
        text
    }

    /// Writes `bbp.csv`, `rt.csv`, `bpr.csv`, `cells.csv`, `summary.json`,
    /// `manifest.json`, and any requested grid dumps under `dir`.
    pub fn emit(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("bbp.csv"), self.bbp_csv())?;
        std::fs::write(dir.join("rt.csv"), self.rt_csv())?;
        std::fs::write(dir.join("bpr.csv"), self.bpr_csv())?;
        std::fs::write(dir.join("cells.csv"), self.cells_csv())?;
        std::fs::write(dir.join("summary.json"), self.summary_json())?;
        std::fs::write(dir.join("manifest.json"), self.manifest_json())?;
        if !self.grids.is_empty() {
            let grid_dir = dir.join("grids");
            std::fs::create_dir_all(&grid_dir)?;
            for (name, text) in &self.grids {
                std::fs::write(grid_dir.join(name), text)?;
            }
        }
        Ok(())
    }
}

/// Convenience entry point used by the command-line front end: resolve,
/// run, and emit into the resolved output directory.
pub fn execute(cfg: &ExperimentConfig) -> Result<(ResolvedExperiment, SweepResult)> {
    let exp = resolve(cfg)?;
    let result = run_experiment(&exp)?;
    result.emit(&exp.out_dir)?;
    Ok((exp, result))
}
