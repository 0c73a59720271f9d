//! Experiment configuration, hashing, and the run manifest.
//!
//! A run is fully determined by its configuration and seed: with one
//! thread the output files are byte-identical across runs, and with any
//! thread count the record set is identical because every replicate
//! derives its own RNG stream from (seed, n, replicate).

use mapforge::series::ps::Q;
use mapforge::series::table::parse_rational;
use num_traits::One;
use std::time::{Duration, Instant};

pub const BUDGET_ENV: &str = "MAPFORGE_BUDGET_SECS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<OutputFormat, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiameterMode {
    Exact,
    Bounds,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub name: String,
    pub grid: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub x: Q,
    pub x_text: String,
    pub threads: usize,
    pub out_dir: String,
    pub format: OutputFormat,
    pub diameter_mode: DiameterMode,
    /// Default exact-diameter size cap; larger inputs fall back to
    /// certified bounds unless the mode is forced.
    pub exact_cap: usize,
}

impl ExperimentConfig {
    pub fn new(name: &str) -> ExperimentConfig {
        ExperimentConfig {
            name: name.to_string(),
            grid: vec![1024],
            reps: 100,
            seed: 1,
            x: Q::one(),
            x_text: "1".into(),
            threads: 1,
            out_dir: "out".into(),
            format: OutputFormat::Csv,
            diameter_mode: DiameterMode::Exact,
            exact_cap: 100_000,
        }
    }

    pub fn with_x(mut self, text: &str) -> Result<Self, String> {
        self.x = parse_rational(text).map_err(|e| e.to_string())?;
        self.x_text = text.to_string();
        Ok(self)
    }

    pub fn weighted(&self) -> bool {
        !self.x.is_one()
    }

    /// Canonical one-line rendering; the config hash is FNV-1a over it.
    pub fn config_string(&self) -> String {
        let grid: Vec<String> = self.grid.iter().map(|n| n.to_string()).collect();
        format!(
            "name={};grid={};reps={};seed={};x={};format={:?};diameter={:?}",
            self.name,
            grid.join(","),
            self.reps,
            self.seed,
            self.x_text,
            self.format,
            self.diameter_mode,
        )
    }

    pub fn config_hash(&self) -> String {
        format!("{:016x}", fnv1a64(self.config_string().as_bytes()))
    }

    pub fn manifest_json(&self, extra: &[(String, String)]) -> String {
        let grid: Vec<String> = self.grid.iter().map(|n| n.to_string()).collect();
        let mut s = String::from("{\n");
        s.push_str(&format!("  \"experiment\": \"{}\",\n", self.name));
        s.push_str(&format!("  \"config_hash\": \"{}\",\n", self.config_hash()));
        s.push_str(&format!("  \"seed\": {},\n", self.seed));
        s.push_str(&format!("  \"grid\": [{}],\n", grid.join(",")));
        s.push_str(&format!("  \"reps\": {},\n", self.reps));
        s.push_str(&format!("  \"x\": \"{}\",\n", self.x_text));
        s.push_str(&format!("  \"threads\": {},\n", self.threads));
        s.push_str(&format!(
            "  \"version\": \"{}\"",
            env!("CARGO_PKG_VERSION")
        ));
        for (k, v) in extra {
            s.push_str(&format!(",\n  \"{k}\": {v}"));
        }
        s.push_str("\n}\n");
        s
    }
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Wall-clock budget from the environment; checked between replicates.
#[derive(Debug, Clone)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn from_env() -> Budget {
        let deadline = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.parse::<u64>().ok())
            .map(|secs| Instant::now() + Duration::from_secs(secs));
        Budget { deadline }
    }

    pub fn unlimited() -> Budget {
        Budget { deadline: None }
    }

    pub fn exceeded(&self) -> bool {
        matches!(self.deadline, Some(d) if Instant::now() >= d)
    }
}
