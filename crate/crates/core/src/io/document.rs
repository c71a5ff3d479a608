//! Versioned JSON result documents.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::IsingProblem;
use crate::runner::{BatchSpec, BatchStats};
use crate::solvers::{RunOutcome, SolverConfig};

pub const DOCUMENT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemInfo {
    /// Free-form identifier, usually the instance file name.
    pub id: String,
    pub n: usize,
    /// See [`problem_hash`].
    pub hash: String,
}

impl ProblemInfo {
    pub fn new(id: impl Into<String>, problem: &IsingProblem) -> Self {
        ProblemInfo {
            id: id.into(),
            n: problem.n(),
            hash: problem_hash(problem),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub format_version: u32,
    pub artifact_version: String,
    /// Seconds since the Unix epoch when the document was produced.
    pub timestamp: Option<u64>,
    pub problem: ProblemInfo,
    pub solver: SolverConfig,
    pub runs: usize,
    pub base_seed: u64,
    pub workers: usize,
    pub stats: BatchStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcomes: Option<Vec<RunOutcome>>,
}

impl ResultDocument {
    pub fn new(problem: ProblemInfo, spec: &BatchSpec, stats: BatchStats) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
        ResultDocument {
            format_version: DOCUMENT_VERSION,
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
            problem,
            solver: spec.solver.clone(),
            runs: spec.runs,
            base_seed: spec.base_seed,
            workers: spec.workers,
            stats,
            outcomes: None,
        }
    }

    pub fn with_outcomes(mut self, outcomes: Vec<RunOutcome>) -> Self {
        self.outcomes = Some(outcomes);
        self
    }

    /// Drops the timestamp and zeroes every timing field, leaving only values
    /// that are a function of the inputs and the seed.
    pub fn without_volatile_fields(mut self) -> Self {
        self.timestamp = None;
        self.stats = self.stats.without_timing();
        if let Some(outcomes) = &mut self.outcomes {
            for o in outcomes {
                if let RunOutcome::Completed(r) = o {
                    r.elapsed_seconds = 0.0;
                }
            }
        }
        self
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let found = value
            .get("format_version")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::Structure("result document lacks format_version".into()))?;
        if found != DOCUMENT_VERSION as u64 {
            return Err(Error::Version {
                found: found as u32,
                supported: DOCUMENT_VERSION,
            });
        }
        Ok(serde_json::from_value(value)?)
    }

    /// Checks that this document was produced for `problem`.
    pub fn verify(&self, problem: &IsingProblem) -> Result<()> {
        let actual = problem_hash(problem);
        if actual != self.problem.hash {
            return Err(Error::Integrity {
                expected: self.problem.hash.clone(),
                actual,
            });
        }
        Ok(())
    }
}

/// SHA-256 over `n` (u64 LE) followed by the little-endian bits of every
/// coupling in row-major order and then every field entry.
pub fn problem_hash(problem: &IsingProblem) -> String {
    let mut hasher = Sha256::new();
    hasher.update((problem.n() as u64).to_le_bytes());
    for v in problem.couplings().iter().chain(problem.field()) {
        hasher.update(v.to_bits().to_le_bytes());
    }
    hex::encode(hasher.finalize())
}

pub fn save_result(document: &ResultDocument, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = document.to_json()?;
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    out.write_all(text.as_bytes())
        .map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn load_result(path: impl AsRef<Path>) -> Result<ResultDocument> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    ResultDocument::from_json(&text)
}

/// Loads a document and checks it against the problem it claims to describe.
pub fn load_result_for(path: impl AsRef<Path>, problem: &IsingProblem) -> Result<ResultDocument> {
    let doc = load_result(path)?;
    doc.verify(problem)?;
    Ok(doc)
}
