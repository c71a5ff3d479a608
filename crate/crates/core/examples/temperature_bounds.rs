// Mean MARS energy for different ranges of starting temperature.
//
//     cargo run --release --example temperature_bounds

use mars_ising::io::generate_sk;
use mars_ising::runner::{run_batch, BatchSpec};
use mars_ising::solvers::{MarsParams, SolverConfig};

/// `(t_min, t_max, mean energy, best energy)` per range.
pub fn run_example(n: usize, runs: usize) -> mars_ising::Result<Vec<(f64, f64, f64, f64)>> {
    let problem = generate_sk(n, 21)?;
    let scale = (n as f64).sqrt();
    let mut out = Vec::new();
    for (lo, hi) in [(0.0, 0.5), (0.5, 1.0), (1.0, 2.0)] {
        let (lo, hi) = (lo * scale, hi * scale);
        let spec = BatchSpec::new(SolverConfig::Mars(MarsParams::uniform(lo, hi)), runs, 9);
        let stats = run_batch(&problem, &spec)?;
        println!(
            "T in [{lo:6.2}, {hi:6.2}]  mean {:12.3}  best {:12.3}",
            stats.mean_energy, stats.best_energy
        );
        out.push((lo, hi, stats.mean_energy, stats.best_energy));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> mars_ising::Result<()> {
    run_example(200, 200).map(|_| ())
}
