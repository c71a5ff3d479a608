//! Seeded parallel batches and their statistics.
//!
//! A batch is a list of independent jobs. Job `k` draws all of its randomness
//! from `derive_seed(base_seed, k)`, and results are stored by index, so the
//! statistics do not depend on the worker count or scheduling order.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::IsingProblem;
use crate::solvers::{RunOutcome, RunResult, SolverConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSpec {
    pub solver: SolverConfig,
    /// Requested runs; a MARS grid sweep uses its grid size instead.
    pub runs: usize,
    pub base_seed: u64,
    /// Worker threads; 0 picks the available parallelism.
    pub workers: usize,
}

impl BatchSpec {
    pub fn new(solver: SolverConfig, runs: usize, base_seed: u64) -> Self {
        BatchSpec {
            solver,
            runs,
            base_seed,
            workers: 0,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn job_count(&self) -> usize {
        self.solver.job_count(self.runs)
    }

    pub fn validate(&self) -> Result<()> {
        self.solver.validate()?;
        if self.job_count() == 0 {
            return Err(Error::param("a batch needs at least one run"));
        }
        Ok(())
    }

    pub fn effective_workers(&self) -> usize {
        let requested = if self.workers == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            self.workers
        };
        requested.clamp(1, self.job_count().max(1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchStats {
    pub best_energy: f64,
    pub mean_energy: f64,
    /// Largest cut among completed runs.
    pub best_cut: f64,
    pub mean_cut: f64,
    /// Completed runs whose energy equals `best_energy`.
    pub hit_count: usize,
    /// `hit_count / completed`.
    pub success_probability: f64,
    /// Wall-clock time of the whole batch.
    pub total_seconds: f64,
    /// Mean of the per-run solver times.
    pub mean_seconds_per_run: f64,
    pub best_result: RunResult,
    /// Energies of completed runs in job order.
    pub energies: Vec<f64>,
    pub completed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl BatchStats {
    /// Aggregates outcomes given in job order.
    pub fn from_outcomes(
        problem: &IsingProblem,
        outcomes: &[RunOutcome],
        total_seconds: f64,
    ) -> Result<Self> {
        let mut failed = 0;
        let mut skipped = 0;
        let mut done: Vec<&RunResult> = Vec::with_capacity(outcomes.len());
        for o in outcomes {
            match o {
                RunOutcome::Completed(r) => done.push(r),
                RunOutcome::Skipped { .. } => skipped += 1,
                RunOutcome::Failed { .. } => failed += 1,
            }
        }
        if done.is_empty() {
            return Err(Error::AllRunsFailed { failed, skipped });
        }

        let count = done.len() as f64;
        let best_result = done
            .iter()
            .copied()
            .reduce(|a, b| if b.energy < a.energy { b } else { a })
            .expect("non-empty")
            .clone();
        let best_energy = best_result.energy;
        let energies: Vec<f64> = done.iter().map(|r| r.energy).collect();
        let hit_count = energies
            .iter()
            .filter(|&&e| problem.energies_equal(e, best_energy))
            .count();

        Ok(BatchStats {
            best_energy,
            mean_energy: energies.iter().sum::<f64>() / count,
            best_cut: done.iter().map(|r| r.cut).fold(f64::NEG_INFINITY, f64::max),
            mean_cut: done.iter().map(|r| r.cut).sum::<f64>() / count,
            hit_count,
            success_probability: hit_count as f64 / count,
            total_seconds,
            mean_seconds_per_run: done.iter().map(|r| r.elapsed_seconds).sum::<f64>() / count,
            best_result,
            energies,
            completed: done.len(),
            failed,
            skipped,
        })
    }

    /// Copy with every wall-clock field zeroed.
    pub fn without_timing(&self) -> Self {
        let mut s = self.clone();
        s.total_seconds = 0.0;
        s.mean_seconds_per_run = 0.0;
        s.best_result.elapsed_seconds = 0.0;
        s
    }
}

/// Progress notification sent after each finished job.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Progress {
    pub index: usize,
    pub finished: usize,
    pub total: usize,
    /// Lowest energy seen so far, if any run has completed.
    pub best_energy: Option<f64>,
}

/// Statistics together with the per-job outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchRun {
    pub stats: BatchStats,
    pub outcomes: Vec<RunOutcome>,
}

pub fn run_batch(problem: &IsingProblem, spec: &BatchSpec) -> Result<BatchStats> {
    Ok(execute_batch(problem, spec, None)?.stats)
}

/// Runs every job of `spec` on a fixed pool of workers pulling job indices
/// from a shared counter.
pub fn execute_batch(
    problem: &IsingProblem,
    spec: &BatchSpec,
    progress: Option<&(dyn Fn(&Progress) + Sync)>,
) -> Result<BatchRun> {
    spec.validate()?;
    let total = spec.job_count();
    let workers = spec.effective_workers();
    let started = Instant::now();

    let next = AtomicUsize::new(0);
    let finished = AtomicUsize::new(0);
    let best = Mutex::new(None::<f64>);

    let work = || {
        let mut local = Vec::new();
        loop {
            let k = next.fetch_add(1, Ordering::Relaxed);
            if k >= total {
                break;
            }
            let outcome = spec.solver.run_job(problem, spec.base_seed, k);
            if let Some(cb) = progress {
                let best_energy = {
                    let mut guard = best.lock().unwrap_or_else(|e| e.into_inner());
                    if let Some(r) = outcome.result() {
                        if guard.is_none_or(|b| r.energy < b) {
                            *guard = Some(r.energy);
                        }
                    }
                    *guard
                };
                let done = finished.fetch_add(1, Ordering::Relaxed) + 1;
                cb(&Progress {
                    index: k,
                    finished: done,
                    total,
                    best_energy,
                });
            }
            local.push((k, outcome));
        }
        local
    };

    let pieces: Vec<Vec<(usize, RunOutcome)>> = if workers == 1 {
        vec![work()]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers).map(|_| scope.spawn(work)).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("batch worker panicked"))
                .collect()
        })
    };

    let mut slots: Vec<Option<RunOutcome>> = vec![None; total];
    for (k, o) in pieces.into_iter().flatten() {
        slots[k] = Some(o);
    }
    let outcomes: Vec<RunOutcome> = slots
        .into_iter()
        .map(|o| o.expect("every job index is claimed exactly once"))
        .collect();

    for o in &outcomes {
        if let RunOutcome::Failed { message } = o {
            warn!("{} run failed: {message}", spec.solver.name());
        }
    }

    let stats = BatchStats::from_outcomes(problem, &outcomes, started.elapsed().as_secs_f64())?;
    Ok(BatchRun { stats, outcomes })
}

/// Fraction of completed runs within `tolerance` of an external reference energy.
pub fn success_probability(stats: &BatchStats, reference_energy: f64, tolerance: f64) -> f64 {
    if stats.energies.is_empty() {
        return 0.0;
    }
    let hits = stats
        .energies
        .iter()
        .filter(|&&e| (e - reference_energy).abs() <= tolerance)
        .count();
    hits as f64 / stats.energies.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<usize>,
}

/// Equal-width bins over `[min, max]`; every bin is right-open except the
/// last. When all samples coincide the result is a single bin holding them all.
pub fn histogram(samples: &[f64], bins: usize) -> Result<Histogram> {
    if samples.is_empty() {
        return Err(Error::param("histogram needs at least one sample"));
    }
    if bins == 0 {
        return Err(Error::param("histogram needs at least one bin"));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::param("histogram samples must be finite"));
    }
    let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        return Ok(Histogram {
            bin_edges: vec![min, max],
            counts: vec![samples.len()],
        });
    }

    let width = (max - min) / bins as f64;
    let mut bin_edges: Vec<f64> = (0..bins).map(|k| min + k as f64 * width).collect();
    bin_edges.push(max);
    let mut counts = vec![0; bins];
    for &x in samples {
        // Last edge <= x, so the bin boundaries agree with the reported edges.
        let k = bin_edges[..bins].partition_point(|&e| e <= x) - 1;
        counts[k] += 1;
    }
    Ok(Histogram { bin_edges, counts })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub solver: String,
    pub stats: Option<BatchStats>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    /// Row with the lowest best energy; ties go to the lower mean, then to the earlier row.
    pub winner: Option<usize>,
}

pub fn compare_solvers(problem: &IsingProblem, specs: &[BatchSpec]) -> Result<Comparison> {
    if specs.is_empty() {
        return Err(Error::param("comparison needs at least one solver"));
    }
    let rows: Vec<ComparisonRow> = specs
        .iter()
        .map(|spec| match run_batch(problem, spec) {
            Ok(stats) => ComparisonRow {
                solver: spec.solver.name().to_string(),
                stats: Some(stats),
                error: None,
            },
            Err(e) => ComparisonRow {
                solver: spec.solver.name().to_string(),
                stats: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let winner = pick_winner(problem, &rows);
    Ok(Comparison { rows, winner })
}

fn pick_winner(problem: &IsingProblem, rows: &[ComparisonRow]) -> Option<usize> {
    let mut winner: Option<(usize, &BatchStats)> = None;
    for (k, row) in rows.iter().enumerate() {
        let Some(stats) = &row.stats else { continue };
        winner = match winner {
            None => Some((k, stats)),
            Some((w, ws)) => {
                let better = if problem.energies_equal(stats.best_energy, ws.best_energy) {
                    stats.mean_energy < ws.mean_energy
                } else {
                    stats.best_energy < ws.best_energy
                };
                if better {
                    Some((k, stats))
                } else {
                    Some((w, ws))
                }
            }
        };
    }
    winner.map(|(k, _)| k)
}
