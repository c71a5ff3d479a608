// Energy histogram of a batch, printed as CSV and a text bar chart.
//
//     cargo run --release --example energy_histogram

use mars_ising::io::generate_sk;
use mars_ising::runner::{histogram, run_batch, BatchSpec, Histogram};
use mars_ising::solvers::{MarsParams, SolverConfig};

pub fn run_example() -> mars_ising::Result<Histogram> {
    let problem = generate_sk(60, 4)?;
    let spec = BatchSpec::new(SolverConfig::Mars(MarsParams::uniform(0.0, 12.0)), 300, 2);
    let stats = run_batch(&problem, &spec)?;
    let hist = histogram(&stats.energies, 12)?;

    println!("bin_lo,bin_hi,count");
    for (k, c) in hist.counts.iter().enumerate() {
        println!("{:.3},{:.3},{c}", hist.bin_edges[k], hist.bin_edges[k + 1]);
    }
    let peak = hist.counts.iter().copied().max().unwrap_or(1).max(1);
    for (k, c) in hist.counts.iter().enumerate() {
        println!("{:10.2} {}", hist.bin_edges[k], "#".repeat(c * 50 / peak));
    }
    Ok(hist)
}

#[allow(dead_code)]
fn main() -> mars_ising::Result<()> {
    run_example().map(|_| ())
}
