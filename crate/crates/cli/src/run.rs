use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use jumpmc_core::config::{Discretization, LevelRange, MethodSpec};
use jumpmc_core::fem::PathSolver;
use jumpmc_core::mlmc::{
    build_schedule, compute_reference, default_c_rho, rmse_study, Reference, StudyPlan, StudyTable,
};
use jumpmc_core::{Error, ProblemConfig, RandomStream};

use crate::args::{RunArgs, ScheduleArgs};
use crate::plot::emit_plot;
use crate::report::{write_study, write_summary, write_timing};

/// Failure classes with distinct process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    Config,
    Numerical,
    Io,
}

impl FailureKind {
    pub fn exit_code(self) -> i32 {
        match self {
            FailureKind::Config => 2,
            FailureKind::Numerical => 3,
            FailureKind::Io => 4,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: FailureKind,
    pub message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = if e.is_config() {
            FailureKind::Config
        } else if e.is_io() || matches!(e, Error::Json(_) | Error::Cache(_)) {
            FailureKind::Io
        } else {
            FailureKind::Numerical
        };
        CliError {
            kind,
            message: e.to_string(),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError {
        kind: FailureKind::Io,
        message: format!("{}: {e}", path.display()),
    }
}

fn config_error(message: String) -> CliError {
    CliError {
        kind: FailureKind::Config,
        message,
    }
}

/// The configuration file with command-line overrides applied.
pub fn effective_config(args: &RunArgs) -> Result<ProblemConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => ProblemConfig::load(path).map_err(|e| match e {
            Error::Io(io) => config_error(format!("cannot read {}: {io}", path.display())),
            other => other.into(),
        })?,
        None => ProblemConfig::default(),
    };
    let study = &mut cfg.study;
    if let Some(m) = &args.methods {
        study.methods = MethodSpec::parse_list(m)?;
    }
    if let Some(l) = &args.levels {
        study.levels = l.parse::<LevelRange>()?;
    }
    if let Some(r) = args.reps {
        study.reps = r;
    }
    if let Some(r) = args.ref_level {
        study.ref_level = r;
    }
    if let Some(s) = args.seed {
        study.seed = s;
    }
    if let Some(t) = args.threads {
        study.threads = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Debug, Serialize)]
struct ReferenceRecord {
    value: f64,
    level: usize,
    fingerprint: String,
    cached: bool,
}

#[derive(Debug, Serialize)]
struct Manifest {
    tool: &'static str,
    version: &'static str,
    config_fingerprint: String,
    seed: u64,
    threads: usize,
    reference: ReferenceRecord,
    slopes: Vec<(String, Option<f64>)>,
    outputs: Vec<&'static str>,
    /// Effective configuration; rerunning with it reproduces the CSV files.
    config: String,
}

/// Files written into the output directory.
pub const OUTPUTS: [&str; 6] = [
    "study.csv",
    "summary.csv",
    "timing.csv",
    "rmse.svg",
    "config.toml",
    "manifest.json",
];

#[derive(Debug)]
pub struct RunOutcome {
    pub out: PathBuf,
    pub reference: Reference,
    pub table: StudyTable,
}

/// Execute a study and write all artifacts.
pub fn run(args: &RunArgs) -> Result<RunOutcome, CliError> {
    let cfg = effective_config(args)?;
    std::fs::create_dir_all(&args.out).map_err(|e| io_error(&args.out, e))?;
    // probe writability before spending time on the study
    let probe = args.out.join(".write-test");
    std::fs::write(&probe, b"").map_err(|e| io_error(&args.out, e))?;
    let _ = std::fs::remove_file(&probe);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.study.threads)
        .build()
        .map_err(|e| CliError {
            kind: FailureKind::Config,
            message: format!("cannot start {} worker threads: {e}", cfg.study.threads),
        })?;
    let threads = pool.current_num_threads();
    let log = |msg: String| {
        if !args.quiet {
            eprintln!("{msg}");
        }
    };

    let (reference, table) = pool.install(|| -> Result<_, CliError> {
        let solver = PathSolver::new(&cfg)?;
        let root = RandomStream::from_seed(cfg.study.seed);
        let cache = args.cache_dir.clone().unwrap_or_else(|| args.out.clone());
        let started = Instant::now();
        log(format!("reference: adapted level {} on {threads} thread(s)", cfg.study.ref_level));
        let reference = compute_reference(&solver, cfg.study.ref_level, &root, Some(&cache))?;
        log(format!(
            "reference = {} ({}, {:.1?})",
            reference.value,
            if reference.cached { "cached" } else { "computed" },
            started.elapsed()
        ));
        let plan = StudyPlan {
            methods: cfg.study.methods.clone(),
            levels: cfg.study.levels.levels().collect(),
            reps: cfg.study.reps,
            kappa: cfg.kappa,
        };
        let reps = plan.reps;
        let table = rmse_study(&plan, reference.value, &solver, &root, &mut |row| {
            if row.rep + 1 == reps {
                log(format!("{} L={}: {reps} replications done", row.method, row.level));
            }
        })?;
        Ok((reference, table))
    })?;

    let path = |name: &str| args.out.join(name);
    let write = |name: &str, f: &dyn Fn(&Path) -> std::io::Result<()>| {
        let p = path(name);
        f(&p).map_err(|e| io_error(&p, e))
    };
    write("study.csv", &|p| write_study(&table, p))?;
    write("summary.csv", &|p| write_summary(&table, p))?;
    write("timing.csv", &|p| write_timing(&table, p))?;
    write("rmse.svg", &|p| emit_plot(&table.summary, p))?;
    let config_text = cfg.to_toml()?;
    write("config.toml", &|p| std::fs::write(p, &config_text))?;
    let manifest = Manifest {
        tool: "jumpmc",
        version: env!("CARGO_PKG_VERSION"),
        config_fingerprint: cfg.fingerprint(),
        seed: cfg.study.seed,
        threads,
        reference: ReferenceRecord {
            value: reference.value,
            level: reference.level,
            fingerprint: reference.fingerprint.clone(),
            cached: reference.cached,
        },
        slopes: table.methods().iter().map(|&m| (m.to_string(), table.slope(m))).collect(),
        outputs: OUTPUTS.to_vec(),
        config: config_text.clone(),
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| CliError {
        kind: FailureKind::Io,
        message: e.to_string(),
    })?;
    write("manifest.json", &|p| std::fs::write(p, &json))?;
    for m in table.methods() {
        if let Some(s) = table.slope(m) {
            log(format!("{m}: fitted RMSE slope {s:.3}"));
        }
    }
    Ok(RunOutcome {
        out: args.out.clone(),
        reference,
        table,
    })
}

/// Render the level schedule as a text table.
pub fn schedule_table(args: &ScheduleArgs) -> Result<String, CliError> {
    let method = match args.method.as_str() {
        "adapted" => Discretization::Adapted,
        "nonadapted" => Discretization::Nonadapted,
        other => return Err(config_error(format!("unknown method '{other}'"))),
    };
    let c_rho = args.c_rho.unwrap_or_else(|| default_c_rho(method));
    let s = build_schedule(args.level, method, args.kappa, c_rho)?;
    let mut out = format!("{:>5} {:>12} {:>12} {:>12} {:>10} {:>8}\n", "level", "h_bar", "eps", "dt", "rho", "M");
    for l in &s.levels {
        let rho = l.rho.map(|r| format!("{r:.6}")).unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "{:>5} {:>12.6} {:>12.6} {:>12.6} {:>10} {:>8}\n",
            l.level, l.params.h_bar, l.params.eps, l.params.dt, rho, l.samples
        ));
    }
    Ok(out)
}
