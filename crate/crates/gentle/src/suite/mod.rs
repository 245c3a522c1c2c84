//! The acceptance suite: eleven criteria over a fixed corpus, shared by the
//! `acceptance` test target and `gentle suite run`.

mod corpus;
mod criteria;

use serde::Serialize;

pub use corpus::{build_corpus, Bounds, CorpusItem, CorpusSize, DatumCorpus};
pub use criteria::{load_corpus, run_criterion, worked_band, worked_string, LIMITS, NAMES};

use crate::error::Result;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SuiteConfig {
    pub corpus: CorpusSize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { corpus: CorpusSize::Full, seed: DEFAULT_SEED }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub seconds: f64,
    pub limit_seconds: Option<f64>,
    pub detail: String,
}

impl CriterionReport {
    /// `[PASS] 3 name (detail, 0.12s)`.
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {} ({}, {:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub criteria: Vec<CriterionReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

/// Runs every criterion in order.
pub fn run_suite(cfg: SuiteConfig) -> Result<SuiteReport> {
    let corpus = load_corpus(&cfg)?;
    let criteria = (1..=NAMES.len()).map(|id| run_criterion(id, &cfg, &corpus)).collect();
    Ok(SuiteReport { config: cfg, criteria })
}
