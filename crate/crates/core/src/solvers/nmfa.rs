//! Noisy mean-field annealing.
//!
//! Every iteration draws Gaussian noise for the normalised mean fields,
//!
//! ```text
//! Φ_i = (h_i + Σ_j J_ij s_j) / sqrt(h_i² + Σ_j J_ij²) + N(0, σ)
//! ŝ_i = -tanh(Φ_i / T)
//! s_i ← α ŝ_i + (1 − α) s_i
//! ```
//!
//! updating all spins together. The state starts at zero. A spin with no
//! couplings and no field has normaliser zero; its normalised field is 0.

use std::time::Instant;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{check_non_negative, neg_tanh, RunResult, Schedule};
use crate::error::{Error, Result};
use crate::model::{round_spins, ContinuousState, IsingProblem};
use crate::seed::{rng_from_seed, SolverRng};

/// Defaults are placeholders calibrated on small Gaussian instances, not
/// tuned values from the literature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NmfaParams {
    pub alpha: f64,
    pub noise_sigma: f64,
    /// Temperature per iteration.
    pub schedule: Schedule,
    pub iters: usize,
}

impl Default for NmfaParams {
    fn default() -> Self {
        NmfaParams {
            alpha: 0.15,
            noise_sigma: 0.15,
            schedule: Schedule::Steps {
                levels: vec![1.0, 0.5, 0.1],
            },
            iters: 1000,
        }
    }
}

impl NmfaParams {
    pub fn validate(&self) -> Result<()> {
        // alpha = 0 freezes the state.
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::param(format!(
                "alpha must lie in [0, 1], got {}",
                self.alpha
            )));
        }
        check_non_negative("noise_sigma", self.noise_sigma)?;
        self.schedule.validate()?;
        if self.iters == 0 {
            return Err(Error::param("iters must be positive"));
        }
        Ok(())
    }
}

/// Normalisers `sqrt(h_i² + Σ_j J_ij²)`.
fn normalizers(problem: &IsingProblem) -> Vec<f64> {
    (0..problem.n())
        .map(|i| {
            let h = problem.field()[i];
            let sum_sq: f64 = problem.neighbors(i).map(|(_, w)| w * w).sum();
            (h * h + sum_sq).sqrt()
        })
        .collect()
}

/// One synchronous NMFA iteration at temperature `t`.
pub(crate) fn nmfa_step(
    problem: &IsingProblem,
    norms: &[f64],
    params: &NmfaParams,
    state: &mut Vec<f64>,
    next: &mut Vec<f64>,
    t: f64,
    rng: &mut SolverRng,
) {
    let field = problem.field();
    for i in 0..state.len() {
        let mut phi = if norms[i] > 0.0 {
            (field[i] + problem.coupling_dot(i, state)) / norms[i]
        } else {
            0.0
        };
        if params.noise_sigma > 0.0 {
            let z: f64 = StandardNormal.sample(rng);
            phi += params.noise_sigma * z;
        }
        let trial = neg_tanh(phi, t);
        next[i] = (params.alpha * trial + (1.0 - params.alpha) * state[i]).clamp(-1.0, 1.0);
    }
    std::mem::swap(state, next);
}

pub fn nmfa_run(problem: &IsingProblem, params: &NmfaParams, seed: u64) -> Result<RunResult> {
    params.validate()?;
    let started = Instant::now();
    let n = problem.n();
    let mut rng = rng_from_seed(seed);
    let norms = normalizers(problem);
    let mut state = vec![0.0; n];
    let mut next = vec![0.0; n];

    for k in 0..params.iters {
        let t = params.schedule.at(k, params.iters);
        nmfa_step(problem, &norms, params, &mut state, &mut next, t, &mut rng);
    }

    let spins = round_spins(&ContinuousState::from_raw(state));
    Ok(RunResult::evaluate(
        problem,
        spins,
        params.schedule.at(0, params.iters),
        params.iters as u64,
        started,
    ))
}
