//! Plain-text experiment configuration.
//!
//! A config file is a sequence of `key = value` lines; `#` starts a
//! comment and blank lines are ignored. Every key except `topology` is
//! optional — the harness fills in documented defaults and records which
//! ones it applied.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::protection::Scheme;
use crate::topology::Metric;

/// Where the topology comes from: a named builtin or a file path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TopologySource {
    Builtin(String),
    File(PathBuf),
}

/// How failure scenarios are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureMode {
    /// Every distinct link pair.
    Enumerate,
    /// A seeded sample without replacement.
    Sample,
}

/// Parsed experiment configuration. `None` means "not specified" — the
/// harness resolves defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub topology: TopologySource,
    pub schemes: Option<Vec<Scheme>>,
    pub sweep: Option<Vec<usize>>,
    pub seeds: Option<Vec<u64>>,
    pub metric: Option<Metric>,
    pub slot_capacity: Option<usize>,
    pub fr_min: Option<usize>,
    pub fr_max: Option<usize>,
    pub f_d_us: Option<f64>,
    pub m_p_us: Option<f64>,
    pub m_a_us: Option<f64>,
    pub prop_us_per_km: Option<f64>,
    pub c_x_us: Option<f64>,
    pub rtc_us: Option<f64>,
    pub failure_mode: Option<FailureMode>,
    pub sample_count: Option<usize>,
    pub sample_seed: Option<u64>,
    pub fs_weighted_bbp: Option<bool>,
    pub out_dir: Option<PathBuf>,
    /// Set by the CLI flag rather than a file key.
    pub dump_grids: bool,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)?;
        ExperimentConfig::parse_str(&text)
    }

    pub fn parse_str(text: &str) -> Result<ExperimentConfig> {
        let mut topology = None;
        let mut cfg = ExperimentConfig {
            topology: TopologySource::Builtin(String::new()),
            schemes: None,
            sweep: None,
            seeds: None,
            metric: None,
            slot_capacity: None,
            fr_min: None,
            fr_max: None,
            f_d_us: None,
            m_p_us: None,
            m_a_us: None,
            prop_us_per_km: None,
            c_x_us: None,
            rtc_us: None,
            failure_mode: None,
            sample_count: None,
            sample_seed: None,
            fs_weighted_bbp: None,
            out_dir: None,
            dump_grids: false,
        };
        let mut seen = BTreeSet::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(line_no, "expected `key = value`"))?;
            let key = key.trim();
            let value = value.trim();
            if value.is_empty() {
                return Err(Error::parse(line_no, format!("empty value for `{key}`")));
            }
            if !seen.insert(key.to_string()) {
                return Err(Error::parse(line_no, format!("duplicate key `{key}`")));
            }

            match key {
                "topology" => {
                    topology = Some(if let Some(path) = value.strip_prefix("file:") {
                        TopologySource::File(PathBuf::from(path.trim()))
                    } else {
                        TopologySource::Builtin(value.to_string())
                    });
                }
                "schemes" => {
                    let mut schemes = Vec::new();
                    for part in value.split(',') {
                        let scheme: Scheme = part
                            .trim()
                            .parse()
                            .map_err(|e: Error| Error::parse(line_no, e.to_string()))?;
                        if schemes.contains(&scheme) {
                            return Err(Error::parse(line_no, format!("scheme `{scheme}` listed twice")));
                        }
                        schemes.push(scheme);
                    }
                    cfg.schemes = Some(schemes);
                }
                "sweep" => {
                    let counts = parse_list::<usize>(line_no, value)?;
                    if counts.iter().any(|&c| c == 0) {
                        return Err(Error::parse(line_no, "sweep counts must be positive"));
                    }
                    if counts.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(Error::parse(line_no, "sweep counts must be strictly increasing"));
                    }
                    cfg.sweep = Some(counts);
                }
                "seeds" => {
                    let seeds = parse_list::<u64>(line_no, value)?;
                    let unique: BTreeSet<_> = seeds.iter().collect();
                    if unique.len() != seeds.len() {
                        return Err(Error::parse(line_no, "seeds must be distinct"));
                    }
                    cfg.seeds = Some(seeds);
                }
                "metric" => {
                    cfg.metric = Some(
                        value
                            .parse()
                            .map_err(|e: Error| Error::parse(line_no, e.to_string()))?,
                    );
                }
                "slot_capacity" => cfg.slot_capacity = Some(parse_scalar(line_no, key, value)?),
                "workload.fr_min" => cfg.fr_min = Some(parse_scalar(line_no, key, value)?),
                "workload.fr_max" => cfg.fr_max = Some(parse_scalar(line_no, key, value)?),
                "timing.f_d_us" => cfg.f_d_us = Some(parse_time(line_no, key, value)?),
                "timing.m_p_us" => cfg.m_p_us = Some(parse_time(line_no, key, value)?),
                "timing.m_a_us" => cfg.m_a_us = Some(parse_time(line_no, key, value)?),
                "timing.prop_us_per_km" => cfg.prop_us_per_km = Some(parse_time(line_no, key, value)?),
                "timing.c_x_us" => cfg.c_x_us = Some(parse_time(line_no, key, value)?),
                "timing.rtc_us" => cfg.rtc_us = Some(parse_time(line_no, key, value)?),
                "failure.mode" => {
                    cfg.failure_mode = Some(match value {
                        "enumerate" => FailureMode::Enumerate,
                        "sample" => FailureMode::Sample,
                        other => {
                            return Err(Error::parse(
                                line_no,
                                format!("unknown failure mode `{other}` (expected `enumerate` or `sample`)"),
                            ))
                        }
                    });
                }
                "failure.sample_count" => cfg.sample_count = Some(parse_scalar(line_no, key, value)?),
                "failure.sample_seed" => cfg.sample_seed = Some(parse_scalar(line_no, key, value)?),
                "metrics.fs_weighted_bbp" => {
                    cfg.fs_weighted_bbp = Some(match value {
                        "true" => true,
                        "false" => false,
                        other => {
                            return Err(Error::parse(
                                line_no,
                                format!("invalid boolean `{other}` for `{key}`"),
                            ))
                        }
                    });
                }
                "output.dir" => cfg.out_dir = Some(PathBuf::from(value)),
                other => return Err(Error::parse(line_no, format!("unknown key `{other}`"))),
            }
        }

        cfg.topology = topology.ok_or_else(|| Error::validation("config is missing required key `topology`"))?;
        if let (Some(lo), Some(hi)) = (cfg.fr_min, cfg.fr_max) {
            if lo > hi {
                return Err(Error::validation(format!(
                    "workload.fr_min ({lo}) exceeds workload.fr_max ({hi})"
                )));
            }
        }
        if cfg.failure_mode == Some(FailureMode::Sample) && cfg.sample_count.is_none() {
            return Err(Error::validation(
                "failure.mode = sample requires failure.sample_count",
            ));
        }
        Ok(cfg)
    }
}

fn parse_list<T: std::str::FromStr>(line_no: usize, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<T>()
                .map_err(|_| Error::parse(line_no, format!("invalid list entry `{}`", part.trim())))
        })
        .collect()
}

fn parse_scalar<T: std::str::FromStr>(line_no: usize, key: &str, value: &str) -> Result<T> {
    value
        .parse::<T>()
        .map_err(|_| Error::parse(line_no, format!("invalid value `{value}` for `{key}`")))
}

fn parse_time(line_no: usize, key: &str, value: &str) -> Result<f64> {
    let v: f64 = parse_scalar(line_no, key, value)?;
    if !v.is_finite() || v < 0.0 {
        return Err(Error::parse(
            line_no,
            format!("`{key}` must be finite and non-negative, got `{value}`"),
        ));
    }
    Ok(v)
}
