use std::path::Path;
use std::process::Command;

use mars_ising::io::{load_result, read_matrix_file};
use mars_ising::report::read_csv;

fn mars(dir: &Path, args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mars"))
        .args(args)
        .current_dir(dir)
        .env_remove("MARS_WORKERS")
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn generate_is_seeded_and_reloadable() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = mars(dir.path(), &["generate", "--n", "16", "--seed", "4", "--out", "a.txt"]);
    assert_eq!(code, 0, "{err}");
    assert!(err.contains("# mars generate --n 16 --seed 4"));
    mars(dir.path(), &["generate", "--n", "16", "--seed", "4", "--out", "b.txt"]);
    let a = std::fs::read(dir.path().join("a.txt")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.txt")).unwrap());
    let p = read_matrix_file(dir.path().join("a.txt")).unwrap();
    assert_eq!(p.n(), 16);
    assert_eq!(mars(dir.path(), &["generate", "--n", "1", "--out", "c.txt"]).0, 2);
}

#[test]
fn solve_ferromagnetic_pair() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("pair.txt"), "2\n0 -1\n-1 0\n").unwrap();
    let (code, out, err) = mars(
        dir.path(),
        &["solve", "-i", "pair.txt", "--start-mode", "uniform", "--runs", "10", "--out", "doc.json"],
    );
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("best energy -2.0,"), "{out}");
    let doc = load_result(dir.path().join("doc.json")).unwrap();
    assert_eq!(doc.stats.best_energy, -2.0);
    assert_eq!(doc.stats.completed, 10);
}

#[test]
fn banner_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    mars(dir.path(), &["generate", "--n", "10", "--seed", "2", "--out", "sk.txt"]);
    let (code, first, err) = mars(
        dir.path(),
        &["solve", "-i", "sk.txt", "--solver", "sa", "--runs", "6", "--sa-steps", "2000",
          "--report", "json", "--deterministic", "--workers", "2"],
    );
    assert_eq!(code, 0, "{err}");
    let line = err.lines().find(|l| l.starts_with("# mars solve")).unwrap();
    let words: Vec<&str> = line.trim_start_matches("# mars ").split(' ').collect();
    let (code, second, _) = mars(dir.path(), &words);
    assert_eq!(code, 0);
    assert_eq!(first, second);
}

#[test]
fn solve_failures_use_distinct_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(mars(dir.path(), &["solve", "-i", "missing.txt"]).0, 3);
    std::fs::write(dir.path().join("bad.txt"), "2\n0 1\n1 zz\n").unwrap();
    let (code, _, err) = mars(dir.path(), &["solve", "-i", "bad.txt"]);
    assert_eq!(code, 3);
    assert!(err.contains("line 3"), "{err}");
    std::fs::write(dir.path().join("pair.txt"), "2\n0 -1\n-1 0\n").unwrap();
    let (code, _, _) = mars(
        dir.path(),
        &["solve", "-i", "pair.txt", "--start-mode", "uniform", "--runs", "3", "--max-sweeps", "1"],
    );
    assert_eq!(code, 4);
    assert_eq!(mars(dir.path(), &["solve", "-i", "pair.txt", "--t-step", "-1"]).0, 2);
    assert_eq!(mars(dir.path(), &["solve", "--bogus"]).0, 2);
}

#[test]
fn bench_rows_match_the_oracle_and_reload() {
    let dir = tempfile::tempdir().unwrap();
    mars(dir.path(), &["generate", "--n", "12", "--seed", "9", "--out", "sk.txt"]);
    std::fs::write(
        dir.path().join("bench.toml"),
        "runs = 20\nseed = 3\n[[instances]]\npath = \"sk.txt\"\n\
         [[solvers]]\nsolver = \"mars\"\nt_max = 8.0\nt_step = 0.25\n\
         [[solvers]]\nsolver = \"sa\"\n",
    )
    .unwrap();
    let (code, out, err) = mars(dir.path(), &["bench", "--config", "bench.toml", "--report", "csv"]);
    assert_eq!(code, 0, "{err}");
    let rows = read_csv(out.as_bytes()).unwrap();
    assert_eq!(rows.len(), 2);
    let p = read_matrix_file(dir.path().join("sk.txt")).unwrap();
    let exact = mars_ising::model::brute_force_ground_state(&p).unwrap().energy;
    for row in &rows {
        assert!(p.energies_equal(row.best_energy.unwrap(), exact), "{row:?}");
    }
    let mut buf = Vec::new();
    mars_ising::report::write_csv(&rows, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), out);
}

#[test]
fn bench_fails_only_when_every_row_fails() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bench.toml"),
        "[[instances]]\npath = \"none.txt\"\n[[solvers]]\nsolver = \"sa\"\n",
    )
    .unwrap();
    let (code, out, _) = mars(dir.path(), &["bench", "--config", "bench.toml"]);
    assert_eq!(code, 4);
    assert!(out.contains("failed"));
}

#[test]
fn hist_counts_every_run() {
    let dir = tempfile::tempdir().unwrap();
    mars(dir.path(), &["generate", "--n", "10", "--seed", "1", "--out", "sk.txt"]);
    mars(dir.path(), &["solve", "-i", "sk.txt", "--t-max", "5", "--out", "doc.json"]);
    let (code, out, err) = mars(dir.path(), &["hist", "-i", "doc.json", "--bins", "4"]);
    assert_eq!(code, 0, "{err}");
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("bin_lo,bin_hi,count"));
    let total: usize = lines
        .map(|l| l.rsplit(',').next().unwrap().parse::<usize>().unwrap())
        .sum();
    assert_eq!(total, 50);
    assert_eq!(mars(dir.path(), &["hist", "-i", "doc.json", "--bins", "0"]).0, 2);
    assert_eq!(mars(dir.path(), &["hist", "-i", "sk.txt"]).0, 3);
}

#[test]
fn convert_round_trips_gset() {
    let dir = tempfile::tempdir().unwrap();
    let text = "4 3\n1 2 1\n2 3 -1\n3 4 1\n";
    std::fs::write(dir.path().join("g.txt"), text).unwrap();
    assert_eq!(mars(dir.path(), &["convert", "-i", "g.txt", "--to", "matrix", "--out", "m.txt"]).0, 0);
    assert_eq!(mars(dir.path(), &["convert", "-i", "m.txt", "--to", "gset", "--out", "g2.txt"]).0, 0);
    assert_eq!(std::fs::read_to_string(dir.path().join("g2.txt")).unwrap(), text);
}

#[test]
fn workers_env_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("pair.txt"), "2\n0 -1\n-1 0\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_mars"))
        .args(["solve", "-i", "pair.txt", "--t-max", "2"])
        .current_dir(dir.path())
        .env("MARS_WORKERS", "3")
        .output()
        .unwrap();
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("--workers 3"), "{err}");
}
