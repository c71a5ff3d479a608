// Save a batch as a versioned result document, reload it and check that it
// belongs to the instance.
//
//     cargo run --example result_document

use mars_ising::io::{
    generate_sk, load_result_for, save_result, ProblemInfo, ResultDocument,
};
use mars_ising::runner::{execute_batch, BatchSpec};
use mars_ising::solvers::{SaParams, SolverConfig};

pub fn run_example(dir: &std::path::Path) -> mars_ising::Result<ResultDocument> {
    let problem = generate_sk(30, 6)?;
    let spec = BatchSpec::new(
        SolverConfig::Sa(SaParams {
            mc_steps: 10_000,
            ..Default::default()
        }),
        8,
        12,
    );
    let run = execute_batch(&problem, &spec, None)?;
    let doc = ResultDocument::new(ProblemInfo::new("sk30", &problem), &spec, run.stats)
        .with_outcomes(run.outcomes)
        .without_volatile_fields();

    let path = dir.join("sk30-sa.json");
    save_result(&doc, &path)?;
    let loaded = load_result_for(&path, &problem)?;
    println!(
        "{}: format {}, {} runs, best energy {}, hash {}",
        path.display(),
        loaded.format_version,
        loaded.stats.completed,
        loaded.stats.best_energy,
        &loaded.problem.hash[..16]
    );

    let other = generate_sk(30, 7)?;
    match load_result_for(&path, &other) {
        Err(e) => println!("wrong instance rejected: {e}"),
        Ok(_) => println!("wrong instance accepted"),
    }
    Ok(loaded)
}

#[allow(dead_code)]
fn main() -> mars_ising::Result<()> {
    run_example(&std::env::temp_dir()).map(|_| ())
}
