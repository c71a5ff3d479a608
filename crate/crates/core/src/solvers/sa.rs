//! Metropolis single-spin-flip simulated annealing.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_non_negative, RunResult};
use crate::error::{Error, Result};
use crate::model::{self, IsingProblem, SpinConfig};
use crate::seed::rng_from_seed;

/// Temperature law between `t_init` and `t_final`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "ratio", rename_all = "snake_case")]
pub enum Cooling {
    /// Equal decrements so that the last step runs at `t_final`.
    Linear,
    /// Constant ratio chosen so that the last step runs at `t_final`.
    Geometric,
    /// Fixed per-step ratio in `(0, 1)`, floored at `t_final`.
    GeometricRatio(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SaParams {
    pub t_init: f64,
    pub t_final: f64,
    pub cooling: Cooling,
    /// Single-spin-flip attempts; the temperature is lowered after each one.
    pub mc_steps: u64,
}

impl Default for SaParams {
    fn default() -> Self {
        SaParams {
            t_init: 10.0,
            t_final: 0.01,
            cooling: Cooling::Geometric,
            mc_steps: 100_000,
        }
    }
}

impl SaParams {
    pub fn validate(&self) -> Result<()> {
        check_non_negative("t_final", self.t_final)?;
        check_non_negative("t_init", self.t_init)?;
        if self.t_init < self.t_final {
            return Err(Error::param(format!(
                "t_init ({}) must not be below t_final ({})",
                self.t_init, self.t_final
            )));
        }
        if self.mc_steps == 0 {
            return Err(Error::param("mc_steps must be positive"));
        }
        match self.cooling {
            Cooling::Geometric if self.t_final == 0.0 && self.t_init > 0.0 => Err(Error::param(
                "geometric cooling cannot reach t_final = 0; use linear or a fixed ratio",
            )),
            Cooling::GeometricRatio(r) if !(r > 0.0 && r < 1.0) => Err(Error::param(format!(
                "geometric ratio must lie in (0, 1), got {r}"
            ))),
            _ => Ok(()),
        }
    }

    /// Temperature used at step `k`.
    pub fn temperature(&self, k: u64) -> f64 {
        let last = self.mc_steps.saturating_sub(1).max(1) as f64;
        let frac = k as f64 / last;
        match self.cooling {
            Cooling::Linear => self.t_init + (self.t_final - self.t_init) * frac,
            Cooling::Geometric => {
                if self.t_init == 0.0 {
                    0.0
                } else {
                    self.t_init * (self.t_final / self.t_init).powf(frac)
                }
            }
            Cooling::GeometricRatio(r) => (self.t_init * r.powf(k as f64)).max(self.t_final),
        }
    }
}

/// One annealing chain; returns the best configuration ever visited.
pub fn sa_run(problem: &IsingProblem, params: &SaParams, seed: u64) -> Result<RunResult> {
    params.validate()?;
    let started = Instant::now();
    let n = problem.n();
    let field = problem.field();
    let mut rng = rng_from_seed(seed);

    let mut spins: Vec<i8> = (0..n)
        .map(|_| if rng.random::<bool>() { 1 } else { -1 })
        .collect();
    let mut row_sums: Vec<f64> = (0..n).map(|i| problem.coupling_dot(i, &spins)).collect();
    let mut current = model::energy_unchecked(problem, &spins);
    let mut best_tracked = current;
    let mut best = spins.clone();

    for k in 0..params.mc_steps {
        let t = params.temperature(k);
        let i = rng.random_range(0..n);
        let s = spins[i] as f64;
        let delta = -2.0 * s * (2.0 * row_sums[i] + field[i]);
        let accept = delta < 0.0 || (t > 0.0 && rng.random::<f64>() < (-delta / t).exp());
        if accept {
            spins[i] = -spins[i];
            current += delta;
            let change = -2.0 * s;
            for (j, w) in problem.neighbors(i) {
                row_sums[j] += w * change;
            }
            if current < best_tracked {
                best_tracked = current;
                best.copy_from_slice(&spins);
            }
        }
    }

    // The tracked energy carries round-off; settle the final choice exactly.
    let final_energy = model::energy_unchecked(problem, &spins);
    let best_energy = model::energy_unchecked(problem, &best);
    let chosen = if final_energy < best_energy {
        spins
    } else {
        best
    };

    Ok(RunResult::evaluate(
        problem,
        SpinConfig::from_raw(chosen),
        params.t_init,
        params.mc_steps,
        started,
    ))
}
