//! Acceptance suite. Prints one line per criterion and exits nonzero if a
//! gating criterion fails.
//!
//! `MARS_G1` may point at the G-set file of G_1 (800 vertices, 19176 edges);
//! `tests/data/G1.txt` is used when present. Without it the G_1 rows report
//! NOT RUN and a random graph of the same size and density stands in,
//! labelled as a surrogate. `MARS_ACCEPTANCE_STRETCH=1` adds the 10^4-restart
//! stretch run.

mod common;

use std::path::PathBuf;
use std::time::Instant;

use common::naive_cut;
use mars_ising::io::{
    generate_sk, gset_to_problem, read_gset_file, ProblemInfo, ResultDocument,
};
use mars_ising::model::{brute_force_ground_state, coupling_energy};
use mars_ising::runner::{execute_batch, run_batch, BatchSpec};
use mars_ising::seed::rng_from_seed;
use mars_ising::solvers::{
    mfa_run, nmfa_run, sa_run, simcim_run, Cooling, MarsParams, MfaParams, NmfaParams,
    RunResult, SaParams, SimCimParams, SolverConfig,
};
use mars_ising::{IsingProblem, Result, SpinConfig};
use rand::Rng;

const G1_BOUND: f64 = 11500.0;
const G1_STRETCH: f64 = 11600.0;
const G1_EDGES: usize = 19176;

enum Verdict {
    Pass,
    Fail,
    NotRun,
    SoftFail,
    Skipped,
}

struct Suite {
    failures: usize,
}

impl Suite {
    fn report(&mut self, id: &str, title: &str, verdict: Verdict, detail: String) {
        let tag = match verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => {
                self.failures += 1;
                "FAIL"
            }
            Verdict::NotRun => "NOT RUN",
            Verdict::SoftFail => "SOFT FAIL",
            Verdict::Skipped => "SKIPPED",
        };
        println!("[{tag}] {id} {title}: {detail}");
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn oracle_equivalence(suite: &mut Suite) {
    let started = Instant::now();
    let params = MarsParams {
        c_step: 1.0,
        d_min: 1e-4,
        ..MarsParams::grid(0.0, 10.0, 0.1)
    };
    let mut hits = 0;
    for k in 0..100u64 {
        let p = generate_sk(14, 14_000 + k).unwrap();
        let exact = brute_force_ground_state(&p).unwrap().energy;
        let stats = run_batch(&p, &BatchSpec::new(SolverConfig::Mars(params.clone()), 0, k)).unwrap();
        if (stats.best_energy - exact).abs() <= 1e-9 {
            hits += 1;
        }
    }
    suite.report(
        "1",
        "oracle equivalence, SK N=14",
        verdict(hits >= 95),
        format!("{hits}/100 instances (need >= 95), {:.1?}", started.elapsed()),
    );
}

fn g1_path() -> Option<PathBuf> {
    if let Some(p) = std::env::var_os("MARS_G1") {
        return Some(PathBuf::from(p));
    }
    let local = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/G1.txt");
    local.exists().then_some(local)
}

/// 800 vertices and 19176 distinct unit-weight edges drawn uniformly.
fn surrogate_graph() -> (IsingProblem, Vec<(usize, usize, f64)>) {
    let mut rng = rng_from_seed(0x61);
    let mut seen = std::collections::HashSet::new();
    let mut edges = Vec::with_capacity(G1_EDGES);
    while edges.len() < G1_EDGES {
        let u = rng.random_range(0..800usize);
        let v = rng.random_range(0..800usize);
        if u != v && seen.insert((u.min(v), u.max(v))) {
            edges.push((u, v, 1.0));
        }
    }
    (IsingProblem::from_edges(800, &edges).unwrap(), edges)
}

fn best_cut(p: &IsingProblem, t_step: f64, seed: u64) -> (f64, usize, std::time::Duration) {
    let started = Instant::now();
    let params = MarsParams::grid(0.0, 30.0, t_step);
    let stats = run_batch(p, &BatchSpec::new(SolverConfig::Mars(params), 0, seed)).unwrap();
    (stats.best_cut, stats.completed, started.elapsed())
}

fn gset_regression(suite: &mut Suite, g1: Option<&IsingProblem>, surrogate: &IsingProblem) {
    let stretch = std::env::var("MARS_ACCEPTANCE_STRETCH").is_ok_and(|v| v == "1");
    match g1 {
        Some(p) => {
            let (cut, runs, t) = best_cut(p, 0.03, 1);
            suite.report(
                "2",
                "G_1 regression",
                verdict(cut >= G1_BOUND),
                format!("best cut {cut} over {runs} restarts (need >= {G1_BOUND}), {t:.1?}"),
            );
            if stretch {
                let (cut, runs, t) = best_cut(p, 0.003, 2);
                let v = if cut >= G1_STRETCH { Verdict::Pass } else { Verdict::SoftFail };
                suite.report("2+", "G_1 stretch", v, format!("best cut {cut} over {runs} restarts (target >= {G1_STRETCH}), {t:.1?}"));
            }
        }
        None => suite.report(
            "2",
            "G_1 regression",
            Verdict::NotRun,
            "G_1 file unavailable; set MARS_G1 or add tests/data/G1.txt".into(),
        ),
    }
    let (cut, runs, t) = best_cut(surrogate, 0.03, 1);
    suite.report(
        "2s",
        "surrogate for G_1 (random graph, 800 vertices, 19176 unit edges)",
        verdict(cut >= G1_BOUND),
        format!("best cut {cut} over {runs} restarts (need >= {G1_BOUND}), {t:.1?}"),
    );
}

fn random_spins(n: usize, rng: &mut impl Rng) -> SpinConfig {
    SpinConfig::new((0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect()).unwrap()
}

fn cut_identity(suite: &mut Suite, id: &str, name: &str, p: &IsingProblem, edges: Option<&[(usize, usize, f64)]>) {
    let started = Instant::now();
    let total: f64 = p.couplings().iter().sum();
    let mut rng = rng_from_seed(0xC07);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let s = random_spins(p.n(), &mut rng);
        let cut = match edges {
            Some(edges) => edges
                .iter()
                .filter(|&&(u, v, _)| s.as_slice()[u] != s.as_slice()[v])
                .map(|&(_, _, w)| w)
                .sum(),
            None => naive_cut(p, s.as_slice()),
        };
        let e = coupling_energy(p, &s).unwrap();
        worst = worst.max((4.0 * cut + e - total).abs());
    }
    suite.report(
        id,
        &format!("cut-energy identity on {name}"),
        verdict(worst <= 1e-6),
        format!("max residual {worst:.3e} over 10^4 configurations (need <= 1e-6), {:.1?}", started.elapsed()),
    );
}

fn oracle_hits(run: impl Fn(&IsingProblem, u64) -> Result<RunResult>) -> usize {
    (0..100u64)
        .filter(|&k| {
            let p = generate_sk(12, 12_000 + k).unwrap();
            let exact = brute_force_ground_state(&p).unwrap().energy;
            p.energies_equal(run(&p, k).unwrap().energy, exact)
        })
        .count()
}

fn baselines(suite: &mut Suite) {
    let sa = SaParams {
        mc_steps: 100_000,
        cooling: Cooling::Geometric,
        ..Default::default()
    };
    let rows: [(&str, usize, usize); 4] = [
        ("SA", oracle_hits(|p, s| sa_run(p, &sa, s)), 90),
        ("MFA", oracle_hits(|p, s| mfa_run(p, &MfaParams::default(), s)), 70),
        ("NMFA", oracle_hits(|p, s| nmfa_run(p, &NmfaParams::default(), s)), 70),
        ("SimCIM", oracle_hits(|p, s| simcim_run(p, &SimCimParams::for_problem(p), s)), 70),
    ];
    let ok = rows.iter().all(|&(_, h, need)| h >= need);
    let detail = rows
        .iter()
        .map(|(name, h, need)| format!("{name} {h}/100 (need >= {need})"))
        .collect::<Vec<_>>()
        .join(", ");
    suite.report("4", "baselines against the oracle, SK N=12", verdict(ok), detail);
}

fn temperature_bounds(suite: &mut Suite) {
    let started = Instant::now();
    let p = generate_sk(500, 8_500).unwrap();
    let mean = |lo: f64, hi: f64| {
        let spec = BatchSpec::new(SolverConfig::Mars(MarsParams::uniform(lo, hi)), 1000, 85);
        run_batch(&p, &spec).unwrap().mean_energy
    };
    let low = mean(0.0, 10.0);
    let high = mean(10.0, 20.0);
    suite.report(
        "5",
        "MARS temperature bounds, SK N=500",
        verdict(high < low),
        format!("mean energy [10,20] {high:.2} vs [0,10] {low:.2} over 10^3 runs each (need [10,20] lower), {:.1?}", started.elapsed()),
    );
}

fn sa_steps(suite: &mut Suite) {
    let started = Instant::now();
    let p = generate_sk(200, 6_200).unwrap();
    let best: Vec<f64> = [1_000u64, 10_000, 100_000]
        .iter()
        .map(|&mc_steps| {
            let params = SaParams {
                mc_steps,
                ..Default::default()
            };
            run_batch(&p, &BatchSpec::new(SolverConfig::Sa(params), 20, 62)).unwrap().best_energy
        })
        .collect();
    suite.report(
        "6",
        "SA improves with MC steps, SK N=200",
        verdict(best[1] < best[0] && best[2] < best[1]),
        format!(
            "best energy {:.3} / {:.3} / {:.3} at 10^3 / 10^4 / 10^5 steps, 20 runs each (need strictly decreasing), {:.1?}",
            best[0], best[1], best[2], started.elapsed()
        ),
    );
}

fn determinism(suite: &mut Suite) {
    let p = generate_sk(60, 7_000).unwrap();
    let solvers = [
        SolverConfig::Mars(MarsParams::grid(0.0, 10.0, 0.1)),
        SolverConfig::Sa(SaParams {
            mc_steps: 20_000,
            ..Default::default()
        }),
        SolverConfig::Nmfa(NmfaParams::default()),
    ];
    let mut stats_equal = true;
    let mut docs_equal = true;
    for solver in &solvers {
        let runs: Vec<_> = [1usize, 2, 8]
            .iter()
            .map(|&w| execute_batch(&p, &BatchSpec::new(solver.clone(), 40, 77).with_workers(w), None).unwrap())
            .collect();
        stats_equal &= runs
            .iter()
            .all(|r| r.stats.without_timing() == runs[0].stats.without_timing() && r.outcomes.len() == runs[0].outcomes.len());
        let doc = || {
            let spec = BatchSpec::new(solver.clone(), 40, 77).with_workers(2);
            let run = execute_batch(&p, &spec, None).unwrap();
            ResultDocument::new(ProblemInfo::new("sk60", &p), &spec, run.stats)
                .with_outcomes(run.outcomes)
                .without_volatile_fields()
                .to_json()
                .unwrap()
        };
        docs_equal &= doc() == doc();
    }
    suite.report(
        "7",
        "determinism and worker invariance",
        verdict(stats_equal && docs_equal),
        format!("stats identical for workers 1/2/8: {stats_equal}; documents byte-identical across repeats: {docs_equal}"),
    );
}

fn throughput(suite: &mut Suite) {
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    if cores < 4 {
        suite.report("8", "parallel throughput", Verdict::Skipped, format!("{cores} core(s) available, need >= 4"));
        return;
    }
    let p = generate_sk(500, 8_800).unwrap();
    let time = |workers: usize| {
        let spec = BatchSpec::new(SolverConfig::Mars(MarsParams::uniform(0.0, 10.0)), 200, 88).with_workers(workers);
        let started = Instant::now();
        run_batch(&p, &spec).unwrap();
        started.elapsed().as_secs_f64()
    };
    let one = time(1);
    let four = time(4);
    let ratio = four / one;
    let v = if ratio <= 0.6 { Verdict::Pass } else { Verdict::SoftFail };
    suite.report("8", "parallel throughput (soft)", v, format!("4 workers {four:.2}s vs 1 worker {one:.2}s, ratio {ratio:.2} (target <= 0.6)"));
}

fn main() {
    let started = Instant::now();
    let mut suite = Suite { failures: 0 };
    println!("acceptance suite");

    oracle_equivalence(&mut suite);

    let g1 = g1_path().map(|path| {
        let graph = read_gset_file(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let edges: Vec<(usize, usize, f64)> = graph
            .edges
            .iter()
            .map(|e| (e.u - 1, e.v - 1, e.weight as f64))
            .collect();
        (gset_to_problem(&graph).unwrap(), edges)
    });
    let (surrogate, surrogate_edges) = surrogate_graph();
    gset_regression(&mut suite, g1.as_ref().map(|(p, _)| p), &surrogate);

    match &g1 {
        Some((p, edges)) => cut_identity(&mut suite, "3a", "G_1", p, Some(edges)),
        None => suite.report("3a", "cut-energy identity on G_1", Verdict::NotRun, "G_1 file unavailable".into()),
    }
    cut_identity(&mut suite, "3s", "the G_1 surrogate", &surrogate, Some(&surrogate_edges));
    cut_identity(&mut suite, "3b", "SK N=500", &generate_sk(500, 5_000).unwrap(), None);

    baselines(&mut suite);
    temperature_bounds(&mut suite);
    sa_steps(&mut suite);
    determinism(&mut suite);
    throughput(&mut suite);

    println!("{} gating failure(s), {:.1?}", suite.failures, started.elapsed());
    if suite.failures > 0 {
        std::process::exit(1);
    }
}
