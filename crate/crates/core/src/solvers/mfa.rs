//! Mean-field annealing with logistic spin averages.
//!
//! Each spin carries the probability `x_i ∈ [0, 1]` of pointing up; the spin
//! mean is `m_i = 2 x_i − 1`. A relaxation sweep visits the spins in a random
//! order and sets
//!
//! ```text
//! Φ_i = h_i + 2 Σ_j J_ij m_j,    x_i = 1 / (1 + exp(Φ_i / T))
//! ```
//!
//! until the largest change is at most `d_min`. The temperature then drops
//! by the factor `t_decay` until it falls below `t_final`. The result is the
//! sign of `x_i − 1/2`.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{check_non_negative, check_positive, RunResult, ZERO_TEMPERATURE};
use crate::error::{Error, Result};
use crate::model::{round_spins, ContinuousState, IsingProblem};
use crate::seed::rng_from_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MfaParams {
    pub t_init: f64,
    pub t_final: f64,
    /// Geometric factor applied after each relaxation stage.
    pub t_decay: f64,
    /// Standard deviation of the Gaussian offset added to the initial 1/2.
    pub init_noise_sigma: f64,
    /// Sweep cap per temperature stage.
    pub max_relax_iters: u64,
    pub d_min: f64,
}

impl Default for MfaParams {
    fn default() -> Self {
        MfaParams {
            t_init: 20.0,
            t_final: 0.05,
            t_decay: 0.9,
            init_noise_sigma: 0.01,
            max_relax_iters: 1000,
            d_min: 1e-4,
        }
    }
}

impl MfaParams {
    pub fn validate(&self) -> Result<()> {
        check_positive("t_init", self.t_init)?;
        check_non_negative("t_final", self.t_final)?;
        if self.t_init <= self.t_final {
            return Err(Error::param("t_init must exceed t_final"));
        }
        if !(self.t_decay > 0.0 && self.t_decay < 1.0) {
            return Err(Error::param(format!(
                "t_decay must lie in (0, 1), got {}",
                self.t_decay
            )));
        }
        check_non_negative("init_noise_sigma", self.init_noise_sigma)?;
        check_positive("d_min", self.d_min)?;
        if self.max_relax_iters == 0 {
            return Err(Error::param("max_relax_iters must be positive"));
        }
        Ok(())
    }
}

/// Logistic occupation `1 / (1 + exp(Φ / T))`, with its step limit at `T → 0`.
#[inline]
pub(crate) fn occupation(field: f64, t: f64) -> f64 {
    if t < ZERO_TEMPERATURE {
        if field > 0.0 {
            0.0
        } else if field < 0.0 {
            1.0
        } else {
            0.5
        }
    } else {
        1.0 / (1.0 + (field / t).exp())
    }
}

pub fn mfa_run(problem: &IsingProblem, params: &MfaParams, seed: u64) -> Result<RunResult> {
    params.validate()?;
    let started = Instant::now();
    let n = problem.n();
    let field = problem.field();
    let mut rng = rng_from_seed(seed);

    let mut occ: Vec<f64> = (0..n)
        .map(|_| {
            let delta: f64 = StandardNormal.sample(&mut rng);
            (0.5 + params.init_noise_sigma * delta).clamp(0.0, 1.0)
        })
        .collect();
    let mut mean: Vec<f64> = occ.iter().map(|x| 2.0 * x - 1.0).collect();
    let mut order: Vec<usize> = (0..n).collect();
    let mut sweeps: u64 = 0;

    let mut t = params.t_init;
    while t >= params.t_final {
        for _ in 0..params.max_relax_iters {
            sweeps += 1;
            order.shuffle(&mut rng);
            let mut d = 0.0f64;
            for &i in &order {
                let phi = field[i] + 2.0 * problem.coupling_dot(i, &mean);
                let next = occupation(phi, t);
                d = d.max((next - occ[i]).abs());
                occ[i] = next;
                mean[i] = 2.0 * next - 1.0;
            }
            if d <= params.d_min {
                break;
            }
        }
        t *= params.t_decay;
    }

    let spins = round_spins(&ContinuousState::clamped(mean));
    Ok(RunResult::evaluate(
        problem,
        spins,
        params.t_init,
        sweeps,
        started,
    ))
}
