//! Mean-field annealing from a random state.
//!
//! One descent draws every continuous spin uniformly from `(-1, 1)`, then
//! lowers the temperature from the starting value in steps of `c_step`. At
//! each temperature the state is relaxed to a mean-field fixed point,
//!
//! ```text
//! ŝ_i = -tanh(Φ_i / T),   Φ_i = Σ_j J_ij s_j + h_i / 2
//! ```
//!
//! repeating sweeps until the largest change `max_i |ŝ_i − s_i|` drops to
//! `d_min`. The last step is taken at `T = 0` (a sign quench), after which
//! the state is rounded to ±1. Many such descents with different starting
//! temperatures are independent and run in parallel.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_positive, neg_tanh, RunOutcome, RunResult};
use crate::error::{Error, Result};
use crate::model::{round_spins, ContinuousState, IsingProblem};
use crate::seed::{derive_seed, rng_from_seed};

/// How starting temperatures are assigned to descents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartMode {
    /// One descent per grid temperature `t_min, t_min + t_step, …, ≤ t_max`.
    GridSweep,
    /// Each descent draws its temperature uniformly from `[t_min, t_max]`.
    UniformRandom,
}

/// Update order inside one relaxation sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateOrder {
    /// Spins are updated in index order and each update sees the ones before it.
    Sequential,
    /// All trial values are computed from the previous sweep, then assigned together.
    Synchronous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MarsParams {
    pub t_min: f64,
    pub t_max: f64,
    pub t_step: f64,
    pub c_step: f64,
    pub d_min: f64,
    pub start_mode: StartMode,
    pub update_order: UpdateOrder,
    /// Hard cap on relaxation sweeps per descent.
    pub max_sweeps: u64,
}

impl Default for MarsParams {
    fn default() -> Self {
        MarsParams {
            t_min: 0.0,
            t_max: 30.0,
            t_step: 0.1,
            c_step: 1.0,
            d_min: 1e-4,
            start_mode: StartMode::GridSweep,
            update_order: UpdateOrder::Sequential,
            max_sweeps: 1_000_000,
        }
    }
}

impl MarsParams {
    /// Grid sweep over `[t_min, t_max]` with the default cooling step and threshold.
    pub fn grid(t_min: f64, t_max: f64, t_step: f64) -> Self {
        MarsParams {
            t_min,
            t_max,
            t_step,
            ..Default::default()
        }
    }

    /// Uniformly random starting temperatures in `[t_min, t_max]`.
    pub fn uniform(t_min: f64, t_max: f64) -> Self {
        MarsParams {
            t_min,
            t_max,
            start_mode: StartMode::UniformRandom,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min >= 0.0 && self.t_min.is_finite()) {
            return Err(Error::param(format!(
                "t_min must be >= 0, got {}",
                self.t_min
            )));
        }
        if !(self.t_max > self.t_min && self.t_max.is_finite()) {
            return Err(Error::param(format!(
                "t_max ({}) must exceed t_min ({})",
                self.t_max, self.t_min
            )));
        }
        check_positive("t_step", self.t_step)?;
        check_positive("c_step", self.c_step)?;
        check_positive("d_min", self.d_min)?;
        if self.max_sweeps == 0 {
            return Err(Error::param("max_sweeps must be positive"));
        }
        Ok(())
    }

    /// Number of grid slots, `floor((t_max − t_min) / t_step) + 1`.
    pub fn grid_len(&self) -> usize {
        ((self.t_max - self.t_min) / self.t_step + 1e-9).floor() as usize + 1
    }

    /// Starting temperature of grid slot `k`.
    pub fn grid_temperature(&self, k: usize) -> f64 {
        self.t_min + k as f64 * self.t_step
    }
}

/// One MARS descent from `start_temp` with a generator seeded by `seed`.
pub fn mars_descent(
    problem: &IsingProblem,
    start_temp: f64,
    params: &MarsParams,
    seed: u64,
) -> Result<RunResult> {
    params.validate()?;
    check_positive("start_temp", start_temp)?;
    let started = Instant::now();
    let n = problem.n();
    let mut rng = rng_from_seed(seed);

    let mut state: Vec<f64> = (0..n)
        .map(|_| loop {
            let v: f64 = rng.random_range(-1.0..1.0);
            if v != -1.0 {
                break v;
            }
        })
        .collect();
    let half_field: Vec<f64> = problem.field().iter().map(|h| 0.5 * h).collect();
    let mut trial = vec![0.0; n];
    let mut sweeps: u64 = 0;

    let mut temperature = start_temp;
    while temperature > 0.0 {
        temperature = (temperature - params.c_step).max(0.0);
        loop {
            if sweeps >= params.max_sweeps {
                return Err(Error::Diverged {
                    sweeps,
                    temperature,
                    state: Box::new(ContinuousState::clamped(state)),
                });
            }
            sweeps += 1;
            let d = match params.update_order {
                UpdateOrder::Sequential => {
                    sequential_sweep(problem, &half_field, &mut state, temperature)
                }
                UpdateOrder::Synchronous => {
                    synchronous_sweep(problem, &half_field, &mut state, &mut trial, temperature)
                }
            };
            if d <= params.d_min {
                break;
            }
        }
    }

    let spins = round_spins(&ContinuousState::from_raw(state));
    Ok(RunResult::evaluate(
        problem, spins, start_temp, sweeps, started,
    ))
}

/// One in-place sweep; returns the largest change.
fn sequential_sweep(
    problem: &IsingProblem,
    half_field: &[f64],
    state: &mut [f64],
    temperature: f64,
) -> f64 {
    let mut d = 0.0f64;
    for i in 0..state.len() {
        let phi = problem.coupling_dot(i, state) + half_field[i];
        let next = neg_tanh(phi, temperature);
        d = d.max((next - state[i]).abs());
        state[i] = next;
    }
    d
}

/// One Jacobi sweep through a trial buffer; returns the largest change.
fn synchronous_sweep(
    problem: &IsingProblem,
    half_field: &[f64],
    state: &mut Vec<f64>,
    trial: &mut Vec<f64>,
    temperature: f64,
) -> f64 {
    let mut d = 0.0f64;
    for i in 0..state.len() {
        let phi = problem.coupling_dot(i, state) + half_field[i];
        trial[i] = neg_tanh(phi, temperature);
        d = d.max((trial[i] - state[i]).abs());
    }
    std::mem::swap(state, trial);
    d
}

/// Runs one slot of a sweep. Slot seeds come from [`derive_seed`] so that
/// [`mars_sweep`] and the parallel batch runner agree exactly.
pub(crate) fn run_slot(
    problem: &IsingProblem,
    params: &MarsParams,
    slot_seed: u64,
    index: usize,
) -> RunOutcome {
    let start_temp = match params.start_mode {
        StartMode::GridSweep => params.grid_temperature(index),
        StartMode::UniformRandom => {
            let mut rng = rng_from_seed(derive_seed(slot_seed, 0));
            rng.random_range(params.t_min..=params.t_max)
        }
    };
    if start_temp <= super::ZERO_TEMPERATURE {
        return RunOutcome::Skipped { start_temp };
    }
    let descent_seed = match params.start_mode {
        StartMode::GridSweep => slot_seed,
        StartMode::UniformRandom => derive_seed(slot_seed, 1),
    };
    match mars_descent(problem, start_temp, params, descent_seed) {
        Ok(r) => RunOutcome::Completed(r),
        Err(e) => RunOutcome::Failed {
            message: e.to_string(),
        },
    }
}

/// Runs every slot of a MARS schedule sequentially.
///
/// A grid sweep yields one outcome per grid temperature (a slot at `t = 0`
/// is reported as skipped); a uniform sweep yields `runs` outcomes.
pub fn mars_sweep(
    problem: &IsingProblem,
    params: &MarsParams,
    seed: u64,
    runs: usize,
) -> Result<Vec<RunOutcome>> {
    params.validate()?;
    let count = match params.start_mode {
        StartMode::GridSweep => {
            let len = params.grid_len();
            if params.t_min <= super::ZERO_TEMPERATURE && len == 1 {
                return Err(Error::param(
                    "temperature grid holds no positive starting temperature",
                ));
            }
            len
        }
        StartMode::UniformRandom => {
            if runs == 0 {
                return Err(Error::param("runs must be at least 1"));
            }
            runs
        }
    };
    Ok((0..count)
        .map(|k| run_slot(problem, params, derive_seed(seed, k as u64), k))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{brute_force_ground_state, local_field};

    fn ferro_pair() -> IsingProblem {
        IsingProblem::from_rows(vec![vec![0.0, -1.0], vec![-1.0, 0.0]], vec![0.0; 2]).unwrap()
    }

    #[test]
    fn ferromagnetic_pair_aligns_for_every_seed() {
        let p = ferro_pair();
        assert_eq!(brute_force_ground_state(&p).unwrap().energy, -2.0);
        for seed in 0..200 {
            let r = mars_descent(&p, 5.0, &MarsParams::default(), seed).unwrap();
            assert_eq!(r.energy, -2.0, "seed {seed}");
            assert_eq!(r.cut, 0.0);
        }
    }

    #[test]
    fn synchronous_quench_can_two_cycle() {
        // At T = 0 the Jacobi map sends (1, -1) to (-1, 1) and back.
        let p = ferro_pair();
        let mut state = vec![1.0, -1.0];
        let mut trial = vec![0.0; 2];
        let d = synchronous_sweep(&p, &[0.0; 2], &mut state, &mut trial, 0.0);
        assert_eq!(state, vec![-1.0, 1.0]);
        assert_eq!(d, 2.0);
        let params = MarsParams {
            update_order: UpdateOrder::Synchronous,
            max_sweeps: 1000,
            ..Default::default()
        };
        let diverged = (0..50)
            .filter(|&s| {
                matches!(
                    mars_descent(&p, 5.0, &params, s),
                    Err(Error::Diverged { .. })
                )
            })
            .count();
        assert!(diverged > 0);
    }

    #[test]
    fn rejects_non_positive_start() {
        let p = ferro_pair();
        assert!(mars_descent(&p, 0.0, &MarsParams::default(), 1).is_err());
        assert!(mars_descent(&p, -1.0, &MarsParams::default(), 1).is_err());
    }

    #[test]
    fn zero_field_sweep_gives_zero_trial() {
        // Isolated spins: every Φ_i is zero, so one sweep sends the state to 0
        // and the change equals max |s_i|.
        let p = IsingProblem::from_dense(3, vec![0.0; 9], vec![0.0; 3]).unwrap();
        let mut state = vec![0.4, -0.7, 0.1];
        let mut trial = vec![0.0; 3];
        let d = synchronous_sweep(&p, &[0.0; 3], &mut state, &mut trial, 2.0);
        assert_eq!(state, vec![0.0; 3]);
        assert_eq!(d, 0.7);
    }

    #[test]
    fn grid_arithmetic() {
        let p = MarsParams::grid(0.0, 30.0, 1.0);
        assert_eq!(p.grid_len(), 31);
        assert_eq!(p.grid_temperature(30), 30.0);
        assert_eq!(MarsParams::grid(0.0, 10.0, 0.1).grid_len(), 101);
        assert_eq!(MarsParams::grid(0.0, 30.0, 0.03).grid_len(), 1001);

        let outcomes = mars_sweep(&ferro_pair(), &p, 3, 0).unwrap();
        assert_eq!(outcomes.len(), 31);
        assert_eq!(outcomes[0], RunOutcome::Skipped { start_temp: 0.0 });
        for (k, o) in outcomes.iter().enumerate().skip(1) {
            assert_eq!(o.result().unwrap().start_temp, k as f64);
        }
    }

    #[test]
    fn empty_grid_is_an_error() {
        let p = MarsParams::grid(0.0, 0.5, 1.0);
        assert!(mars_sweep(&ferro_pair(), &p, 0, 1).is_err());
        let p = MarsParams::grid(0.2, 0.5, 1.0);
        assert_eq!(mars_sweep(&ferro_pair(), &p, 0, 1).unwrap().len(), 1);
    }

    #[test]
    fn uniform_mode_respects_bounds() {
        let p = MarsParams::uniform(2.0, 3.0);
        let out = mars_sweep(&ferro_pair(), &p, 9, 50).unwrap();
        assert_eq!(out.len(), 50);
        for o in &out {
            let t = o.result().unwrap().start_temp;
            assert!((2.0..=3.0).contains(&t));
        }
        assert!(mars_sweep(&ferro_pair(), &p, 9, 0).is_err());
    }

    #[test]
    fn sweep_is_deterministic() {
        let p = crate::io::generate_sk(10, 4).unwrap();
        let params = MarsParams::grid(0.0, 5.0, 0.5);
        let a = mars_sweep(&p, &params, 77, 0).unwrap();
        let b = mars_sweep(&p, &params, 77, 0).unwrap();
        let strip = |v: Vec<RunOutcome>| -> Vec<(f64, Vec<i8>)> {
            v.into_iter()
                .filter_map(|o| o.result().map(|r| (r.energy, r.spins.as_slice().to_vec())))
                .collect()
        };
        assert_eq!(strip(a), strip(b));
    }

    #[test]
    fn sweep_cap_reports_divergence() {
        let p = crate::io::generate_sk(8, 1).unwrap();
        let params = MarsParams {
            max_sweeps: 3,
            ..Default::default()
        };
        match mars_descent(&p, 10.0, &params, 0) {
            Err(Error::Diverged { sweeps, state, .. }) => {
                assert_eq!(sweeps, 3);
                assert_eq!(state.len(), 8);
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn final_state_is_quenched() {
        // After the closing T = 0 relaxation the rounded spins oppose their fields.
        let p = crate::io::generate_sk(16, 11).unwrap();
        for seed in 0..20 {
            let r = mars_descent(&p, 7.3, &MarsParams::default(), seed).unwrap();
            let s = ContinuousState::from(&r.spins);
            for i in 0..16 {
                let phi = local_field(&p, &s, i).unwrap();
                if phi.abs() > 10.0 * 1e-4 {
                    assert_eq!(r.spins.as_slice()[i] as f64, -phi.signum());
                }
            }
        }
    }
}
