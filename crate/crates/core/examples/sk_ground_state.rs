// Exact ground state of a small SK instance and a MARS grid sweep that finds it.
//
//     cargo run --example sk_ground_state

use mars_ising::io::generate_sk;
use mars_ising::model::brute_force_ground_state;
use mars_ising::runner::{run_batch, BatchSpec};
use mars_ising::solvers::{MarsParams, SolverConfig};

/// Returns `(exact energy, best MARS energy)`.
pub fn run_example() -> mars_ising::Result<(f64, f64)> {
    let problem = generate_sk(14, 7)?;
    let exact = brute_force_ground_state(&problem)?;

    let params = MarsParams::grid(0.0, 10.0, 0.1);
    let spec = BatchSpec::new(SolverConfig::Mars(params), 0, 1);
    let stats = run_batch(&problem, &spec)?;

    println!("exact ground state  {:.6}", exact.energy);
    println!(
        "MARS best           {:.6}  ({} of {} descents hit it)",
        stats.best_energy, stats.hit_count, stats.completed
    );
    Ok((exact.energy, stats.best_energy))
}

#[allow(dead_code)]
fn main() -> mars_ising::Result<()> {
    run_example().map(|_| ())
}
