//! Command-line frontend for the `mars` binary.
//!
//! Exit codes: 0 success, 2 usage or parameter error, 3 input/output error
//! (unreadable, malformed or mismatched files), 4 runtime failure (every run
//! of a batch failed, or every bench row failed).
//!
//! Each subcommand prints an effective-configuration banner on stderr: the
//! full command line with every default filled in, which reproduces the run.

use std::ffi::OsString;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{
    generate_sk, load_instance, load_result, problem_to_gset, write_gset, write_matrix,
    InstanceFormat, ProblemInfo, ResultDocument, DOCUMENT_VERSION,
};
use crate::model::IsingProblem;
use crate::report::{human_table, write_csv, ReportRow};
use crate::runner::{compare_solvers, execute_batch, histogram, BatchSpec, Progress};
use crate::solvers::{
    Cooling, MarsParams, MfaParams, NmfaParams, SaParams, Schedule, SimCimParams, SolverConfig,
    StartMode, UpdateOrder,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_RUNTIME: i32 = 4;

/// Environment variable read by `--workers`.
pub const WORKERS_ENV: &str = "MARS_WORKERS";

#[derive(Debug, Parser)]
#[command(
    name = "mars",
    version,
    about = "Ising ground states and MAX-CUT by mean-field annealing from random states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded Gaussian SK instance as a dense matrix.
    Generate(GenerateArgs),
    /// Run a batch of one solver on one instance.
    Solve(Box<SolveArgs>),
    /// Run every solver of a TOML config on every listed instance.
    Bench(BenchArgs),
    /// Histogram the per-run energies of a result document as CSV.
    Hist(HistArgs),
    /// Convert an instance between the G-set and dense matrix formats.
    Convert(ConvertArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    /// Two integers on the first line mean G-set, one means matrix.
    Auto,
    Gset,
    Matrix,
}

impl FormatArg {
    fn resolve(self) -> Option<InstanceFormat> {
        match self {
            FormatArg::Auto => None,
            FormatArg::Gset => Some(InstanceFormat::Gset),
            FormatArg::Matrix => Some(InstanceFormat::Matrix),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetFormat {
    Gset,
    Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Mars,
    Sa,
    Mfa,
    Nmfa,
    Simcim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    /// Fixed-width table.
    Human,
    /// One CSV row with the frozen report columns.
    Csv,
    /// The structured result document.
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StartModeArg {
    Grid,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UpdateOrderArg {
    Sequential,
    Synchronous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoolingArg {
    Linear,
    Geometric,
    /// Fixed ratio given by `--sa-ratio`.
    Ratio,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    /// Number of spins (at least 2).
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct BatchArgs {
    /// Runs per batch; a MARS grid sweep runs once per grid temperature instead.
    #[arg(long, default_value_t = 1000)]
    pub runs: usize,
    /// Base seed; run k is seeded from (seed, k).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses every available core.
    #[arg(long, env = WORKERS_ENV, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Clone, Args)]
#[command(next_help_heading = "MARS options")]
pub struct MarsArgs {
    #[arg(long, default_value_t = MarsParams::default().t_min)]
    pub t_min: f64,
    #[arg(long, default_value_t = MarsParams::default().t_max)]
    pub t_max: f64,
    /// Grid spacing of starting temperatures.
    #[arg(long, default_value_t = MarsParams::default().t_step)]
    pub t_step: f64,
    /// Temperature decrement between relaxations.
    #[arg(long, default_value_t = MarsParams::default().c_step)]
    pub c_step: f64,
    /// Relaxation stops once the largest spin change is at most this.
    #[arg(long, default_value_t = MarsParams::default().d_min)]
    pub d_min: f64,
    #[arg(long, value_enum, default_value_t = StartModeArg::Grid)]
    pub start_mode: StartModeArg,
    #[arg(long, value_enum, default_value_t = UpdateOrderArg::Sequential)]
    pub update_order: UpdateOrderArg,
    /// Relaxation sweeps allowed per descent before it counts as failed.
    #[arg(long, default_value_t = MarsParams::default().max_sweeps)]
    pub max_sweeps: u64,
}

#[derive(Debug, Clone, Args)]
#[command(next_help_heading = "SA options")]
pub struct SaArgs {
    #[arg(long, default_value_t = SaParams::default().t_init)]
    pub sa_t_init: f64,
    #[arg(long, default_value_t = SaParams::default().t_final)]
    pub sa_t_final: f64,
    #[arg(long, value_enum, default_value_t = CoolingArg::Geometric)]
    pub sa_cooling: CoolingArg,
    /// Per-step ratio for `--sa-cooling ratio`.
    #[arg(long, default_value_t = 0.9999)]
    pub sa_ratio: f64,
    /// Single-spin-flip attempts per run.
    #[arg(long, default_value_t = SaParams::default().mc_steps)]
    pub sa_steps: u64,
}

#[derive(Debug, Clone, Args)]
#[command(next_help_heading = "MFA options")]
pub struct MfaArgs {
    #[arg(long, default_value_t = MfaParams::default().t_init)]
    pub mfa_t_init: f64,
    #[arg(long, default_value_t = MfaParams::default().t_final)]
    pub mfa_t_final: f64,
    #[arg(long, default_value_t = MfaParams::default().t_decay)]
    pub mfa_t_decay: f64,
    /// Standard deviation of the initial perturbation around 1/2.
    #[arg(long, default_value_t = MfaParams::default().init_noise_sigma)]
    pub mfa_noise: f64,
    #[arg(long, default_value_t = MfaParams::default().max_relax_iters)]
    pub mfa_max_relax: u64,
    #[arg(long, default_value_t = MfaParams::default().d_min)]
    pub mfa_d_min: f64,
}

#[derive(Debug, Clone, Args)]
#[command(next_help_heading = "NMFA options")]
pub struct NmfaArgs {
    /// Weight of the new mean-field value in each update.
    #[arg(long, default_value_t = NmfaParams::default().alpha)]
    pub nmfa_alpha: f64,
    #[arg(long, default_value_t = NmfaParams::default().noise_sigma)]
    pub nmfa_noise: f64,
    /// Temperature schedule: linear:A,B | geometric:A,B | steps:L1,L2,...
    #[arg(long, default_value_t = NmfaParams::default().schedule)]
    pub nmfa_schedule: Schedule,
    #[arg(long, default_value_t = NmfaParams::default().iters)]
    pub nmfa_iters: usize,
}

#[derive(Debug, Clone, Args)]
#[command(next_help_heading = "SimCIM options")]
pub struct SimCimArgs {
    /// Gradient step [default: 0.5 / typical field of the instance].
    #[arg(long)]
    pub simcim_step: Option<f64>,
    #[arg(long, default_value_t = SimCimParams::default().noise_sigma)]
    pub simcim_noise: f64,
    /// Pump schedule [default: linear from -s to s, s = typical field of the instance].
    #[arg(long)]
    pub simcim_pump: Option<Schedule>,
    #[arg(long, default_value_t = SimCimParams::default().iters)]
    pub simcim_iters: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    pub format: FormatArg,
    #[arg(long, value_enum, default_value_t = SolverArg::Mars)]
    pub solver: SolverArg,
    #[command(flatten)]
    pub batch: BatchArgs,
    /// Write the result document here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// What to print on stdout.
    #[arg(long, value_enum, default_value_t = ReportFormat::Human)]
    pub report: ReportFormat,
    /// Leave the timestamp and all timings out of the result document.
    #[arg(long)]
    pub deterministic: bool,
    /// Store every run's outcome, including spins, in the result document.
    #[arg(long)]
    pub include_runs: bool,
    /// No live progress line.
    #[arg(long)]
    pub quiet: bool,
    #[command(flatten)]
    pub mars: MarsArgs,
    #[command(flatten)]
    pub sa: SaArgs,
    #[command(flatten)]
    pub mfa: MfaArgs,
    #[command(flatten)]
    pub nmfa: NmfaArgs,
    #[command(flatten)]
    pub simcim: SimCimArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// TOML file listing instances and solvers.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Human)]
    pub report: ReportFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses every available core.
    #[arg(long, env = WORKERS_ENV, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Clone, Args)]
pub struct HistArgs {
    /// Result document written by `solve --out`.
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 20)]
    pub bins: usize,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ConvertArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    pub from: FormatArg,
    #[arg(long, value_enum)]
    pub to: TargetFormat,
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `args` (program name first), runs the subcommand and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(&a),
        Command::Solve(a) => cmd_solve(&a),
        Command::Bench(a) => cmd_bench(&a),
        Command::Hist(a) => cmd_hist(&a),
        Command::Convert(a) => cmd_convert(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code for an error class.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::InvalidParameter(_) | Error::TooLarge { .. } => EXIT_USAGE,
        Error::Diverged { .. } | Error::AllRunsFailed { .. } => EXIT_RUNTIME,
        Error::DimensionMismatch { .. }
        | Error::IndexOutOfRange { .. }
        | Error::InvalidProblem(_)
        | Error::Parse { .. }
        | Error::Structure(_)
        | Error::Version { .. }
        | Error::Integrity { .. }
        | Error::Io { .. }
        | Error::Json(_) => EXIT_INPUT,
    }
}

fn banner(words: &[String]) {
    eprintln!("# mars {}", words.join(" "));
}

fn path_word(p: &Path) -> String {
    let s = p.display().to_string();
    if s.is_empty() || s.contains(char::is_whitespace) {
        format!("{s:?}")
    } else {
        s
    }
}

fn value_name<V: ValueEnum>(v: V) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default()
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Error::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn instance_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<i32> {
    banner(&[
        "generate".into(),
        format!("--n {}", args.n),
        format!("--seed {}", args.seed),
        format!("--out {}", path_word(&args.out)),
    ]);
    let problem = generate_sk(args.n, args.seed)?;
    let mut buf = Vec::new();
    write_matrix(&problem, &mut buf).map_err(|e| Error::io(&args.out, e))?;
    std::fs::write(&args.out, buf).map_err(|e| Error::io(&args.out, e))?;
    Ok(EXIT_OK)
}

impl SolveArgs {
    /// The parameter record selected by `--solver`, with instance-dependent
    /// defaults resolved against `problem`.
    pub fn solver_config(&self, problem: &IsingProblem) -> SolverConfig {
        match self.solver {
            SolverArg::Mars => {
                let m = &self.mars;
                SolverConfig::Mars(MarsParams {
                    t_min: m.t_min,
                    t_max: m.t_max,
                    t_step: m.t_step,
                    c_step: m.c_step,
                    d_min: m.d_min,
                    start_mode: match m.start_mode {
                        StartModeArg::Grid => StartMode::GridSweep,
                        StartModeArg::Uniform => StartMode::UniformRandom,
                    },
                    update_order: match m.update_order {
                        UpdateOrderArg::Sequential => UpdateOrder::Sequential,
                        UpdateOrderArg::Synchronous => UpdateOrder::Synchronous,
                    },
                    max_sweeps: m.max_sweeps,
                })
            }
            SolverArg::Sa => SolverConfig::Sa(SaParams {
                t_init: self.sa.sa_t_init,
                t_final: self.sa.sa_t_final,
                cooling: match self.sa.sa_cooling {
                    CoolingArg::Linear => Cooling::Linear,
                    CoolingArg::Geometric => Cooling::Geometric,
                    CoolingArg::Ratio => Cooling::GeometricRatio(self.sa.sa_ratio),
                },
                mc_steps: self.sa.sa_steps,
            }),
            SolverArg::Mfa => SolverConfig::Mfa(MfaParams {
                t_init: self.mfa.mfa_t_init,
                t_final: self.mfa.mfa_t_final,
                t_decay: self.mfa.mfa_t_decay,
                init_noise_sigma: self.mfa.mfa_noise,
                max_relax_iters: self.mfa.mfa_max_relax,
                d_min: self.mfa.mfa_d_min,
            }),
            SolverArg::Nmfa => SolverConfig::Nmfa(NmfaParams {
                alpha: self.nmfa.nmfa_alpha,
                noise_sigma: self.nmfa.nmfa_noise,
                schedule: self.nmfa.nmfa_schedule.clone(),
                iters: self.nmfa.nmfa_iters,
            }),
            SolverArg::Simcim => {
                let auto = SimCimParams::for_problem(problem);
                SolverConfig::SimCim(SimCimParams {
                    step_size: self.simcim.simcim_step.unwrap_or(auto.step_size),
                    noise_sigma: self.simcim.simcim_noise,
                    pump: self.simcim.simcim_pump.clone().unwrap_or(auto.pump),
                    iters: self.simcim.simcim_iters,
                })
            }
        }
    }
}

/// Flags that reproduce `config` exactly.
pub fn solver_flags(config: &SolverConfig) -> Vec<String> {
    match config {
        SolverConfig::Mars(p) => vec![
            "--solver mars".into(),
            format!("--t-min {:?}", p.t_min),
            format!("--t-max {:?}", p.t_max),
            format!("--t-step {:?}", p.t_step),
            format!("--c-step {:?}", p.c_step),
            format!("--d-min {:?}", p.d_min),
            format!(
                "--start-mode {}",
                match p.start_mode {
                    StartMode::GridSweep => "grid",
                    StartMode::UniformRandom => "uniform",
                }
            ),
            format!(
                "--update-order {}",
                match p.update_order {
                    UpdateOrder::Sequential => "sequential",
                    UpdateOrder::Synchronous => "synchronous",
                }
            ),
            format!("--max-sweeps {}", p.max_sweeps),
        ],
        SolverConfig::Sa(p) => {
            let mut words = vec![
                "--solver sa".into(),
                format!("--sa-t-init {:?}", p.t_init),
                format!("--sa-t-final {:?}", p.t_final),
            ];
            match p.cooling {
                Cooling::Linear => words.push("--sa-cooling linear".into()),
                Cooling::Geometric => words.push("--sa-cooling geometric".into()),
                Cooling::GeometricRatio(r) => {
                    words.push("--sa-cooling ratio".into());
                    words.push(format!("--sa-ratio {r:?}"));
                }
            }
            words.push(format!("--sa-steps {}", p.mc_steps));
            words
        }
        SolverConfig::Mfa(p) => vec![
            "--solver mfa".into(),
            format!("--mfa-t-init {:?}", p.t_init),
            format!("--mfa-t-final {:?}", p.t_final),
            format!("--mfa-t-decay {:?}", p.t_decay),
            format!("--mfa-noise {:?}", p.init_noise_sigma),
            format!("--mfa-max-relax {}", p.max_relax_iters),
            format!("--mfa-d-min {:?}", p.d_min),
        ],
        SolverConfig::Nmfa(p) => vec![
            "--solver nmfa".into(),
            format!("--nmfa-alpha {:?}", p.alpha),
            format!("--nmfa-noise {:?}", p.noise_sigma),
            format!("--nmfa-schedule {}", p.schedule),
            format!("--nmfa-iters {}", p.iters),
        ],
        SolverConfig::SimCim(p) => vec![
            "--solver simcim".into(),
            format!("--simcim-step {:?}", p.step_size),
            format!("--simcim-noise {:?}", p.noise_sigma),
            format!("--simcim-pump {}", p.pump),
            format!("--simcim-iters {}", p.iters),
        ],
    }
}

pub fn cmd_solve(args: &SolveArgs) -> Result<i32> {
    let (problem, format) = load_instance(&args.input, args.format.resolve())?;
    let solver = args.solver_config(&problem);
    let spec =
        BatchSpec::new(solver, args.batch.runs, args.batch.seed).with_workers(args.batch.workers);

    let mut words = vec![
        "solve".into(),
        format!("--input {}", path_word(&args.input)),
        format!(
            "--format {}",
            match format {
                InstanceFormat::Gset => "gset",
                InstanceFormat::Matrix => "matrix",
            }
        ),
    ];
    words.extend(solver_flags(&spec.solver));
    words.push(format!("--runs {}", spec.runs));
    words.push(format!("--seed {}", spec.base_seed));
    words.push(format!("--workers {}", spec.workers));
    if let Some(out) = &args.out {
        words.push(format!("--out {}", path_word(out)));
    }
    words.push(format!("--report {}", value_name(args.report)));
    if args.deterministic {
        words.push("--deterministic".into());
    }
    if args.include_runs {
        words.push("--include-runs".into());
    }
    banner(&words);
    spec.validate()?;
    eprintln!(
        "# n = {}, jobs = {}, worker threads = {}",
        problem.n(),
        spec.job_count(),
        spec.effective_workers()
    );

    let live = !args.quiet && std::io::stderr().is_terminal();
    let show = |p: &Progress| {
        let best = p.best_energy.map_or("-".to_string(), |e| format!("{e:.6}"));
        eprint!("\r# {}/{} runs, best energy {best}   ", p.finished, p.total);
    };
    let progress: Option<&(dyn Fn(&Progress) + Sync)> = if live { Some(&show) } else { None };
    let batch = execute_batch(&problem, &spec, progress);
    if live {
        eprintln!();
    }
    let batch = batch?;

    let id = instance_id(&args.input);
    let row = ReportRow::from_stats(&id, spec.solver.name(), spec.job_count(), &batch.stats);
    let mut doc = ResultDocument::new(ProblemInfo::new(&id, &problem), &spec, batch.stats);
    if args.include_runs {
        doc = doc.with_outcomes(batch.outcomes);
    }
    if args.deterministic {
        doc = doc.without_volatile_fields();
    }
    if let Some(out) = &args.out {
        crate::io::save_result(&doc, out)?;
    }

    match args.report {
        ReportFormat::Human => {
            let mut text = human_table(std::slice::from_ref(&row));
            text.push_str(&format!(
                "best energy {:?}, best cut {:?}\n",
                doc.stats.best_energy, doc.stats.best_cut
            ));
            write_output(None, text.as_bytes())?;
        }
        ReportFormat::Csv => {
            let mut buf = Vec::new();
            write_csv(std::slice::from_ref(&row), &mut buf)?;
            write_output(None, &buf)?;
        }
        ReportFormat::Json => write_output(None, doc.to_json()?.as_bytes())?,
    }
    Ok(EXIT_OK)
}

/// Contents of a `bench` TOML file.
///
/// ```toml
/// runs = 100
/// seed = 1
///
/// [[instances]]
/// path = "G1.txt"        # relative to the config file
/// format = "gset"        # optional, detected when absent
///
/// [[solvers]]
/// solver = "mars"
/// t_min = 0.0
/// t_max = 30.0
///
/// [[solvers]]
/// solver = "sa"
/// mc_steps = 100000
/// ```
///
/// Omitted solver parameters take their defaults; a `simcim` entry without
/// `step_size` or `pump` is scaled to each instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    #[serde(default = "default_bench_runs")]
    pub runs: usize,
    #[serde(default)]
    pub seed: u64,
    pub instances: Vec<BenchInstance>,
    pub solvers: Vec<toml::Table>,
}

fn default_bench_runs() -> usize {
    100
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchInstance {
    pub path: PathBuf,
    #[serde(default)]
    pub format: Option<InstanceFormat>,
    /// Report label; defaults to the file stem.
    #[serde(default)]
    pub id: Option<String>,
}

/// JSON form of a bench report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchReport {
    pub format_version: u32,
    pub rows: Vec<ReportRow>,
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: BenchConfig = toml::from_str(text).map_err(|e| Error::Parse {
            line: e
                .span()
                .map_or(0, |s| text[..s.start].matches('\n').count() + 1),
            message: e.message().to_string(),
        })?;
        if config.instances.is_empty() || config.solvers.is_empty() {
            return Err(Error::param(
                "bench config needs at least one instance and one solver",
            ));
        }
        Ok(config)
    }

    /// Solver configurations for one instance.
    pub fn solver_configs(&self, problem: &IsingProblem) -> Result<Vec<SolverConfig>> {
        self.solvers
            .iter()
            .map(|table| {
                let mut table = table.clone();
                if table.get("solver").and_then(|v| v.as_str()) == Some("simcim") {
                    let auto = SimCimParams::for_problem(problem);
                    let auto = toml::Table::try_from(&auto)
                        .map_err(|e| Error::Structure(e.to_string()))?;
                    for key in ["step_size", "pump"] {
                        if !table.contains_key(key) {
                            table.insert(key.into(), auto[key].clone());
                        }
                    }
                }
                let config: SolverConfig = table.try_into().map_err(|e: toml::de::Error| {
                    Error::param(format!("solver entry: {}", e.message()))
                })?;
                config.validate()?;
                Ok(config)
            })
            .collect()
    }
}

fn solver_label(table: &toml::Table) -> String {
    match table.clone().try_into::<SolverConfig>() {
        Ok(config) => config.name().to_string(),
        Err(_) => table
            .get("solver")
            .and_then(|v| v.as_str())
            .unwrap_or("?")
            .to_string(),
    }
}

pub fn cmd_bench(args: &BenchArgs) -> Result<i32> {
    banner(&[
        "bench".into(),
        format!("--config {}", path_word(&args.config)),
        format!("--report {}", value_name(args.report)),
        format!("--workers {}", args.workers),
    ]);
    let text = std::fs::read_to_string(&args.config).map_err(|e| Error::io(&args.config, e))?;
    let config = BenchConfig::from_toml(&text)?;
    let base = args.config.parent().unwrap_or(Path::new("."));
    eprintln!("# runs = {}, seed = {}", config.runs, config.seed);

    let mut rows = Vec::new();
    for inst in &config.instances {
        let path = base.join(&inst.path);
        let id = inst.id.clone().unwrap_or_else(|| instance_id(&inst.path));
        let loaded = load_instance(&path, inst.format)
            .and_then(|(p, _)| config.solver_configs(&p).map(|s| (p, s)));
        let (problem, solvers) = match loaded {
            Ok(v) => v,
            Err(e) => {
                for table in &config.solvers {
                    rows.push(ReportRow::failure(
                        &id,
                        &solver_label(table),
                        config.runs,
                        e.to_string(),
                    ));
                }
                continue;
            }
        };
        let specs: Vec<BatchSpec> = solvers
            .into_iter()
            .map(|s| BatchSpec::new(s, config.runs, config.seed).with_workers(args.workers))
            .collect();
        for spec in &specs {
            let mut words = vec![format!("solve --input {}", path_word(&path))];
            words.extend(solver_flags(&spec.solver));
            words.push(format!("--runs {} --seed {}", spec.runs, spec.base_seed));
            eprintln!("#   {}", words.join(" "));
        }
        let comparison = compare_solvers(&problem, &specs)?;
        for (row, spec) in comparison.rows.iter().zip(&specs) {
            rows.push(match (&row.stats, &row.error) {
                (Some(stats), _) => {
                    ReportRow::from_stats(&id, &row.solver, spec.job_count(), stats)
                }
                (None, err) => ReportRow::failure(
                    &id,
                    &row.solver,
                    spec.job_count(),
                    err.clone().unwrap_or_default(),
                ),
            });
        }
    }

    let bytes = match args.report {
        ReportFormat::Human => human_table(&rows).into_bytes(),
        ReportFormat::Csv => {
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf)?;
            buf
        }
        ReportFormat::Json => {
            let report = BenchReport {
                format_version: DOCUMENT_VERSION,
                rows: rows.clone(),
            };
            let mut s = serde_json::to_string_pretty(&report)?;
            s.push('\n');
            s.into_bytes()
        }
    };
    write_output(args.out.as_deref(), &bytes)?;
    if rows.iter().all(ReportRow::is_failure) {
        eprintln!("error: every bench row failed");
        return Ok(EXIT_RUNTIME);
    }
    Ok(EXIT_OK)
}

pub fn cmd_hist(args: &HistArgs) -> Result<i32> {
    let mut words = vec![
        "hist".into(),
        format!("--input {}", path_word(&args.input)),
        format!("--bins {}", args.bins),
    ];
    if let Some(out) = &args.out {
        words.push(format!("--out {}", path_word(out)));
    }
    banner(&words);
    if args.bins == 0 {
        return Err(Error::param("--bins must be at least 1"));
    }
    let doc = load_result(&args.input)?;
    if doc.stats.energies.is_empty() {
        return Err(Error::Structure(format!(
            "{} holds no per-run energies",
            args.input.display()
        )));
    }
    let hist = histogram(&doc.stats.energies, args.bins)?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Structure(e.to_string());
    writer
        .write_record(["bin_lo", "bin_hi", "count"])
        .map_err(csv_err)?;
    for (k, count) in hist.counts.iter().enumerate() {
        writer
            .write_record([
                format!("{:?}", hist.bin_edges[k]),
                format!("{:?}", hist.bin_edges[k + 1]),
                count.to_string(),
            ])
            .map_err(csv_err)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Structure(e.to_string()))?;
    write_output(args.out.as_deref(), &bytes)?;
    Ok(EXIT_OK)
}

pub fn cmd_convert(args: &ConvertArgs) -> Result<i32> {
    let (problem, from) = load_instance(&args.input, args.from.resolve())?;
    banner(&[
        "convert".into(),
        format!("--input {}", path_word(&args.input)),
        format!(
            "--from {}",
            match from {
                InstanceFormat::Gset => "gset",
                InstanceFormat::Matrix => "matrix",
            }
        ),
        format!("--to {}", value_name(args.to)),
        format!("--out {}", path_word(&args.out)),
    ]);
    let mut buf = Vec::new();
    match args.to {
        TargetFormat::Matrix => write_matrix(&problem, &mut buf),
        TargetFormat::Gset => write_gset(&problem_to_gset(&problem)?, &mut buf),
    }
    .map_err(|e| Error::io(&args.out, e))?;
    std::fs::write(&args.out, buf).map_err(|e| Error::io(&args.out, e))?;
    Ok(EXIT_OK)
}
