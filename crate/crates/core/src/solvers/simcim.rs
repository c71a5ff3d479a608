//! Clamped gradient dynamics in the style of a simulated coherent Ising machine.
//!
//! Continuous amplitudes `X_j` start at zero and evolve as
//!
//! ```text
//! X_j ← clamp(X_j + η (p_t X_j + F_j) + σ ξ_j, [-1, 1])
//! F_j = -(1/2) Σ_k J_jk X_k − h_j / 4
//! ```
//!
//! where `p_t` is the pump schedule and `F` is the descent direction of the
//! Hamiltonian scaled by 1/4. All amplitudes are updated together.

use std::time::Instant;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{check_non_negative, check_positive, RunResult, Schedule};
use crate::error::{Error, Result};
use crate::model::{round_spins, ContinuousState, IsingProblem};
use crate::seed::{rng_from_seed, SolverRng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimCimParams {
    pub step_size: f64,
    pub noise_sigma: f64,
    /// Pump amplitude per iteration.
    pub pump: Schedule,
    pub iters: usize,
}

impl Default for SimCimParams {
    fn default() -> Self {
        SimCimParams {
            step_size: 0.05,
            noise_sigma: 0.05,
            pump: Schedule::Linear {
                start: -1.0,
                end: 1.0,
            },
            iters: 1000,
        }
    }
}

impl SimCimParams {
    /// Defaults with the pump scaled to the problem's typical field, so the
    /// ramp crosses the instability point of the coupling term.
    pub fn for_problem(problem: &IsingProblem) -> Self {
        let scale = problem.typical_field().max(f64::MIN_POSITIVE);
        SimCimParams {
            step_size: 0.5 / scale,
            pump: Schedule::Linear {
                start: -scale,
                end: scale,
            },
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("step_size", self.step_size)?;
        check_non_negative("noise_sigma", self.noise_sigma)?;
        self.pump.validate()?;
        if self.iters == 0 {
            return Err(Error::param("iters must be positive"));
        }
        Ok(())
    }
}

fn simcim_step(
    problem: &IsingProblem,
    params: &SimCimParams,
    amps: &mut Vec<f64>,
    next: &mut Vec<f64>,
    pump: f64,
    rng: &mut SolverRng,
) {
    let field = problem.field();
    for j in 0..amps.len() {
        let force = -0.5 * problem.coupling_dot(j, amps) - 0.25 * field[j];
        let mut x = amps[j] + params.step_size * (pump * amps[j] + force);
        if params.noise_sigma > 0.0 {
            let z: f64 = StandardNormal.sample(rng);
            x += params.noise_sigma * z;
        }
        next[j] = x.clamp(-1.0, 1.0);
    }
    std::mem::swap(amps, next);
}

pub fn simcim_run(problem: &IsingProblem, params: &SimCimParams, seed: u64) -> Result<RunResult> {
    params.validate()?;
    let started = Instant::now();
    let n = problem.n();
    let mut rng = rng_from_seed(seed);
    let mut amps = vec![0.0; n];
    let mut next = vec![0.0; n];

    for k in 0..params.iters {
        let pump = params.pump.at(k, params.iters);
        simcim_step(problem, params, &mut amps, &mut next, pump, &mut rng);
    }

    let spins = round_spins(&ContinuousState::from_raw(amps));
    Ok(RunResult::evaluate(
        problem,
        spins,
        params.pump.at(0, params.iters),
        params.iters as u64,
        started,
    ))
}
