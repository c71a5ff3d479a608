// MAX-CUT on a G-set graph. Pass a file path to use your own graph; otherwise
// a small ring with chords is used.
//
//     cargo run --release --example gset_maxcut -- G1.txt

use mars_ising::io::{gset_to_problem, parse_gset_str, read_gset_file, GsetGraph};
use mars_ising::runner::{run_batch, BatchSpec};
use mars_ising::solvers::{MarsParams, SolverConfig};

const DEMO: &str = "\
# 8-cycle plus two chords
8 10
1 2 1
2 3 1
3 4 1
4 5 1
5 6 1
6 7 1
7 8 1
8 1 1
1 5 1
3 7 1
";

/// Returns `(best cut, total edge weight)`.
pub fn run_example(path: Option<&str>) -> mars_ising::Result<(f64, i64)> {
    let graph: GsetGraph = match path {
        Some(p) => read_gset_file(p)?,
        None => parse_gset_str(DEMO)?,
    };
    let problem = gset_to_problem(&graph)?;
    let spec = BatchSpec::new(SolverConfig::Mars(MarsParams::grid(0.0, 30.0, 0.5)), 0, 3);
    let stats = run_batch(&problem, &spec)?;

    println!(
        "{} vertices, {} edges, total weight {}",
        graph.n_vertices,
        graph.edges.len(),
        graph.total_weight()
    );
    println!("best cut {} (mean {:.2})", stats.best_cut, stats.mean_cut);
    let side: String = stats
        .best_result
        .spins
        .as_slice()
        .iter()
        .take(64)
        .map(|&s| if s > 0 { 'A' } else { 'B' })
        .collect();
    println!("partition {side}");
    Ok((stats.best_cut, graph.total_weight()))
}

#[allow(dead_code)]
fn main() -> mars_ising::Result<()> {
    let path = std::env::args().nth(1);
    run_example(path.as_deref()).map(|_| ())
}
