//! Instance generation, list enumeration and the theorem suites.

pub mod canvases;
pub mod graphs;
pub mod lists;
pub mod oracles;
pub mod theorems;

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::{Duration, Instant};
use thiserror::Error;

/// Environment variable read for the default worker count.
pub const THREADS_ENV: &str = "FRACLIST_THREADS";

pub const SUITES: &[&str] = &[
    "thm-cyl",
    "cor-distflaws",
    "thm-2flaws",
    "thm-canvas",
    "lemma-neipaths",
    "lemma-neiparel",
    "lemma-sgcrit",
    "lemma-addit",
    "lemma-small",
    "hypcyl",
    "reductions",
    "crit-shortcut",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteParams {
    pub nmax: usize,
    pub a: Vec<usize>,
    /// Palette size; `None` means `5a`.
    pub universe: Option<usize>,
    pub seed: u64,
    pub samples: usize,
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Per-instance solver budget in milliseconds.
    pub timeout_ms: Option<u64>,
    /// Corrupts the conclusion check; the suite must then report violations.
    pub mutate: bool,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            nmax: 7,
            a: vec![1],
            universe: None,
            seed: 0,
            samples: 10_000,
            threads: None,
            timeout_ms: None,
            mutate: false,
        }
    }
}

impl SuiteParams {
    pub fn universe_for(&self, a: usize) -> usize {
        self.universe.unwrap_or(5 * a)
    }

    pub fn deadline(&self) -> Option<Instant> {
        self.timeout_ms.map(|ms| Instant::now() + Duration::from_millis(ms))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub instance: String,
    pub detail: String,
    /// A replayable instance file or record.
    pub witness: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub params: SuiteParams,
    pub instances: u64,
    pub stats: BTreeMap<String, u64>,
    pub violations: Vec<Violation>,
    /// Wall-clock time; kept out of the JSON so reruns compare equal.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SuiteResult {
    pub fn new(suite: &str, params: &SuiteParams) -> Self {
        SuiteResult {
            suite: suite.to_string(),
            params: params.clone(),
            instances: 0,
            stats: BTreeMap::new(),
            violations: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn bump(&mut self, key: &str, by: u64) {
        *self.stats.entry(key.to_string()).or_default() += by;
    }

    pub fn stat(&self, key: &str) -> u64 {
        self.stats.get(key).copied().unwrap_or(0)
    }

    /// Folds a per-item partial result in; call in item order. Counters add
    /// up, except that keys starting with `max_` or `min_` keep the extreme.
    pub fn absorb(&mut self, part: Partial) {
        self.instances += part.instances;
        for (k, v) in part.stats {
            let e = self.stats.entry(k.clone());
            if k.starts_with("max_") {
                let e = e.or_default();
                *e = (*e).max(v);
            } else if k.starts_with("min_") {
                let e = e.or_insert(u64::MAX);
                *e = (*e).min(v);
            } else {
                *e.or_default() += v;
            }
        }
        self.violations.extend(part.violations);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// One header line and one data line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,instances,violations,elapsed_ms");
        for k in self.stats.keys() {
            out.push(',');
            out.push_str(k);
        }
        out.push('\n');
        out.push_str(&format!(
            "{},{},{},{}",
            self.suite,
            self.instances,
            self.violations.len(),
            self.elapsed.as_millis()
        ));
        for v in self.stats.values() {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
        out
    }
}

/// Counters and violations gathered by one worker item.
#[derive(Debug, Clone, Default)]
pub struct Partial {
    pub instances: u64,
    pub stats: BTreeMap<String, u64>,
    pub violations: Vec<Violation>,
}

impl Partial {
    pub fn bump(&mut self, key: &str, by: u64) {
        *self.stats.entry(key.to_string()).or_default() += by;
    }

    pub fn max(&mut self, key: &str, value: u64) {
        let e = self.stats.entry(key.to_string()).or_default();
        *e = (*e).max(value);
    }

    pub fn min(&mut self, key: &str, value: u64) {
        let e = self.stats.entry(key.to_string()).or_insert(u64::MAX);
        *e = (*e).min(value);
    }

    pub fn violation(&mut self, instance: impl Into<String>, detail: impl Into<String>, witness: serde_json::Value) {
        self.violations.push(Violation {
            instance: instance.into(),
            detail: detail.into(),
            witness,
        });
    }
}

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite {0:?}; known: {list}", list = SUITES.join(", "))]
    Unknown(String),
    #[error(transparent)]
    Generate(#[from] graphs::GenerateError),
    #[error("thread pool: {0}")]
    Pool(String),
}

/// Worker count: explicit, else the environment variable, else rayon's
/// default.
pub fn thread_count(explicit: Option<usize>) -> Option<usize> {
    explicit
        .or_else(|| std::env::var(THREADS_ENV).ok()?.parse().ok())
        .filter(|&n| n > 0)
}

pub fn run_suite(name: &str, params: &SuiteParams) -> Result<SuiteResult, SuiteError> {
    if !SUITES.contains(&name) {
        return Err(SuiteError::Unknown(name.to_string()));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count(params.threads) {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| SuiteError::Pool(e.to_string()))?;
    let start = Instant::now();
    let mut result = pool.install(|| -> Result<SuiteResult, SuiteError> {
        Ok(match name {
            "thm-cyl" => theorems::run_face_suite(theorems::FaceTheorem::TwoFaces, params)?,
            "cor-distflaws" => theorems::run_face_suite(theorems::FaceTheorem::OneFace, params)?,
            "thm-2flaws" => theorems::run_path_suite(params)?,
            "thm-canvas" | "lemma-neipaths" | "lemma-neiparel" | "lemma-sgcrit" => {
                canvases::run_discovery_suite(name, params)?
            }
            "lemma-addit" => canvases::run_additivity_suite(params)?,
            "lemma-small" => canvases::run_small_canvas_suite(params)?,
            "hypcyl" => canvases::run_hypcyl_suite(params)?,
            "reductions" => oracles::run_reductions_suite(params)?,
            "crit-shortcut" => oracles::run_shortcut_suite(params)?,
            _ => unreachable!("checked above"),
        })
    })?;
    result.elapsed = start.elapsed();
    if params.mutate {
        for v in &mut result.violations {
            v.detail = format!("mutated check: {}", v.detail);
        }
    }
    Ok(result)
}
