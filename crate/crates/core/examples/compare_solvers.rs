// All five solvers side by side on one SK instance, with the CSV report.
//
//     cargo run --release --example compare_solvers

use mars_ising::io::generate_sk;
use mars_ising::report::{human_table, write_csv, ReportRow};
use mars_ising::runner::{compare_solvers, BatchSpec, Comparison};
use mars_ising::solvers::{
    MarsParams, MfaParams, NmfaParams, SaParams, SimCimParams, SolverConfig,
};

pub fn run_example() -> mars_ising::Result<Comparison> {
    let problem = generate_sk(40, 11)?;
    let specs = [
        SolverConfig::Mars(MarsParams::uniform(0.0, 10.0)),
        SolverConfig::Sa(SaParams {
            mc_steps: 20_000,
            ..Default::default()
        }),
        SolverConfig::Mfa(MfaParams::default()),
        SolverConfig::Nmfa(NmfaParams::default()),
        SolverConfig::SimCim(SimCimParams::for_problem(&problem)),
    ]
    .map(|solver| BatchSpec::new(solver, 20, 5));

    let cmp = compare_solvers(&problem, &specs)?;
    let rows: Vec<ReportRow> = cmp
        .rows
        .iter()
        .zip(&specs)
        .map(|(row, spec)| match &row.stats {
            Some(s) => ReportRow::from_stats("sk40", &row.solver, spec.job_count(), s),
            None => ReportRow::failure("sk40", &row.solver, spec.job_count(), row.error.clone().unwrap_or_default()),
        })
        .collect();

    print!("{}", human_table(&rows));
    if let Some(w) = cmp.winner {
        println!("winner: {}", cmp.rows[w].solver);
    }
    let mut csv = Vec::new();
    write_csv(&rows, &mut csv)?;
    println!("\n{}", String::from_utf8_lossy(&csv));
    Ok(cmp)
}

#[allow(dead_code)]
fn main() -> mars_ising::Result<()> {
    run_example().map(|_| ())
}
