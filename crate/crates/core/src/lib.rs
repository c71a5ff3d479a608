//! Ising ground-state search and MAX-CUT by mean-field annealing from random
//! states, with simulated annealing, mean-field annealing, noisy mean-field
//! annealing and SimCIM-style dynamics as reference solvers.
//!
//! ```
//! use mars_ising::io::generate_sk;
//! use mars_ising::model::brute_force_ground_state;
//! use mars_ising::runner::{run_batch, BatchSpec};
//! use mars_ising::solvers::{MarsParams, SolverConfig};
//!
//! let problem = generate_sk(10, 1).unwrap();
//! let spec = BatchSpec::new(SolverConfig::Mars(MarsParams::grid(0.0, 8.0, 0.25)), 0, 42);
//! let stats = run_batch(&problem, &spec).unwrap();
//! let exact = brute_force_ground_state(&problem).unwrap();
//! assert!(problem.energies_equal(stats.best_energy, exact.energy));
//! ```

pub mod cli;
pub mod error;
pub mod io;
pub mod model;
pub mod report;
pub mod runner;
pub mod seed;
pub mod solvers;

pub use error::{Error, Result};
pub use model::{ContinuousState, IsingProblem, SpinConfig};
