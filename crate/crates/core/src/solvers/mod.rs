//! MARS and the four reference heuristics behind one contract:
//! `(problem, parameters, seed) -> RunResult`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{self, IsingProblem, SpinConfig};

pub mod mars;
pub mod mfa;
pub mod nmfa;
pub mod sa;
mod schedule;
pub mod simcim;

pub use mars::{mars_descent, mars_sweep, MarsParams, StartMode, UpdateOrder};
pub use mfa::{mfa_run, MfaParams};
pub use nmfa::{nmfa_run, NmfaParams};
pub use sa::{sa_run, Cooling, SaParams};
pub use schedule::Schedule;
pub use simcim::{simcim_run, SimCimParams};

/// Below this temperature the tanh/logistic maps are replaced by their sign limits.
pub(crate) const ZERO_TEMPERATURE: f64 = 1e-12;

/// Outcome of a single descent or chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    /// Hamiltonian of `spins`.
    pub energy: f64,
    /// Cut value of `spins`.
    pub cut: f64,
    pub spins: SpinConfig,
    /// Starting temperature of the descent (initial temperature for the baselines).
    pub start_temp: f64,
    /// Relaxation sweeps (MARS, MFA), iterations (NMFA, SimCIM) or MC steps (SA).
    pub descent_iters: u64,
    pub elapsed_seconds: f64,
}

impl RunResult {
    pub(crate) fn evaluate(
        problem: &IsingProblem,
        spins: SpinConfig,
        start_temp: f64,
        descent_iters: u64,
        started: Instant,
    ) -> Self {
        let energy = model::energy_unchecked(problem, spins.as_slice());
        let cut = model::cut_value(problem, &spins).expect("solver output has problem length");
        RunResult {
            energy,
            cut,
            spins,
            start_temp,
            descent_iters,
            elapsed_seconds: started.elapsed().as_secs_f64(),
        }
    }
}

/// What happened to one scheduled run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunOutcome {
    Completed(RunResult),
    /// A MARS grid slot whose starting temperature is not positive.
    Skipped {
        start_temp: f64,
    },
    Failed {
        message: String,
    },
}

impl RunOutcome {
    pub fn result(&self) -> Option<&RunResult> {
        match self {
            RunOutcome::Completed(r) => Some(r),
            _ => None,
        }
    }

    fn from_result(r: Result<RunResult>) -> Self {
        match r {
            Ok(r) => RunOutcome::Completed(r),
            Err(e) => RunOutcome::Failed {
                message: e.to_string(),
            },
        }
    }
}

/// A solver together with its parameter record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "solver", rename_all = "lowercase")]
pub enum SolverConfig {
    Mars(MarsParams),
    Sa(SaParams),
    Mfa(MfaParams),
    Nmfa(NmfaParams),
    #[serde(rename = "simcim")]
    SimCim(SimCimParams),
}

impl SolverConfig {
    pub fn name(&self) -> &'static str {
        match self {
            SolverConfig::Mars(_) => "MARS",
            SolverConfig::Sa(_) => "SA",
            SolverConfig::Mfa(_) => "MFA",
            SolverConfig::Nmfa(_) => "NMFA",
            SolverConfig::SimCim(_) => "SimCIM",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SolverConfig::Mars(p) => p.validate(),
            SolverConfig::Sa(p) => p.validate(),
            SolverConfig::Mfa(p) => p.validate(),
            SolverConfig::Nmfa(p) => p.validate(),
            SolverConfig::SimCim(p) => p.validate(),
        }
    }

    /// Number of scheduled runs for a requested count. A MARS grid sweep
    /// ignores `runs` and uses its grid size.
    pub fn job_count(&self, runs: usize) -> usize {
        match self {
            SolverConfig::Mars(p) if p.start_mode == StartMode::GridSweep => p.grid_len(),
            _ => runs,
        }
    }

    /// Runs job `index` of a batch seeded with `base_seed`.
    ///
    /// The job's generator depends only on `(base_seed, index)`, so a batch
    /// gives the same results in any execution order.
    pub fn run_job(&self, problem: &IsingProblem, base_seed: u64, index: usize) -> RunOutcome {
        let sub = crate::seed::derive_seed(base_seed, index as u64);
        match self {
            SolverConfig::Mars(p) => mars::run_slot(problem, p, sub, index),
            SolverConfig::Sa(p) => RunOutcome::from_result(sa_run(problem, p, sub)),
            SolverConfig::Mfa(p) => RunOutcome::from_result(mfa_run(problem, p, sub)),
            SolverConfig::Nmfa(p) => RunOutcome::from_result(nmfa_run(problem, p, sub)),
            SolverConfig::SimCim(p) => RunOutcome::from_result(simcim_run(problem, p, sub)),
        }
    }
}

pub(crate) fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

pub(crate) fn check_non_negative(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!(
            "{name} must be non-negative and finite, got {v}"
        )))
    }
}

/// `-tanh(field / t)`, with the sign limit at (near) zero temperature.
#[inline]
pub(crate) fn neg_tanh(field: f64, t: f64) -> f64 {
    if t < ZERO_TEMPERATURE {
        if field > 0.0 {
            -1.0
        } else if field < 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        -(field / t).tanh()
    }
}
