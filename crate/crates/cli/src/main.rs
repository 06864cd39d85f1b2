//! `theta-closure`: orbit closures for nilpotent orbits of theta-groups.

mod cache;
mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use theta_closure::closure::{build_hasse, decide_inclusion, pair_seed, Orbit};
use theta_closure::fixtures::Fixture;
use theta_closure::stratum::{split_identity_check, RankStrategy};
use theta_closure::Error;

use cache::Cache;
use config::{Format, Resolved, RunConfig};
use output::{to_dot, to_json, DecideOutput, HasseOutput, OrbitRow, OrbitTable, Timings, TOOL_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Config(_) | CliError::Io(_) => 4,
            CliError::Core(e) => match e {
                Error::Cycle(_) | Error::NotTransitive(..) => 3,
                Error::InvalidType(_)
                | Error::InvalidGrading(_)
                | Error::UnknownOrbit(_)
                | Error::Json(_)
                | Error::Io(_) => 4,
                _ => 2,
            },
        }
    }
}

#[derive(Parser)]
#[command(name = "theta-closure", version, about = "Closure order of nilpotent orbits of theta-groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_parser = parse_rank)]
    rank_strategy: Option<RankStrategy>,
    /// Enumerate orbits with characteristic labels up to this bound instead
    /// of reading a fixture.
    #[arg(long, global = true)]
    label_bound: Option<i64>,
    /// Fixture file with the orbit list.
    #[arg(long, global = true)]
    fixture: Option<PathBuf>,
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the orbit table.
    ListOrbits,
    /// Decide whether orbit LOWER lies in the closure of orbit UPPER.
    Decide { upper: usize, lower: usize },
    /// Compute the Hasse diagram of the closure order.
    Hasse,
    /// Reconstruct every row of the given fixtures and check it.
    ValidateFixtures { fixtures: Vec<PathBuf> },
}

fn parse_rank(s: &str) -> Result<RankStrategy, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| format!("unknown rank strategy {s:?}; expected auto, exact or randomized"))
}

impl Cli {
    fn run_config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if self.seed.is_some() {
            cfg.seed = self.seed;
        }
        if self.jobs.is_some() {
            cfg.jobs = self.jobs;
        }
        if self.format.is_some() {
            cfg.format = self.format;
        }
        if self.out.is_some() {
            cfg.out.clone_from(&self.out);
        }
        if self.rank_strategy.is_some() {
            cfg.rank_strategy = self.rank_strategy;
        }
        if self.label_bound.is_some() {
            cfg.label_bound = self.label_bound;
            cfg.fixture = None;
        }
        if self.fixture.is_some() {
            cfg.fixture.clone_from(&self.fixture);
            cfg.label_bound = None;
        }
        if self.cache_dir.is_some() {
            cfg.cache_dir.clone_from(&self.cache_dir);
        }
        Ok(cfg)
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn find(orbits: &[Orbit], id: usize) -> Result<&Orbit, CliError> {
    orbits
        .iter()
        .find(|o| o.id == id)
        .ok_or(CliError::Core(Error::UnknownOrbit(id)))
}

fn list_orbits(cfg: &RunConfig) -> Result<(), CliError> {
    let r = Resolved::new(cfg)?;
    let orbits = r.orbits()?;
    let table = OrbitTable {
        orbits: orbits
            .iter()
            .map(|o| OrbitRow {
                id: o.id,
                characteristic: o.triple.h.coords.clone(),
                dim: o.dim,
                label: o.label.clone(),
            })
            .collect(),
        seed: r.seed,
        config_hash: r.hash.clone(),
        tool_version: TOOL_VERSION.to_string(),
    };
    match cfg.format {
        Some(Format::Json) => emit(cfg.out.as_deref(), &to_json(&table)),
        Some(Format::Dot) => Err(CliError::Config("list-orbits has no dot output".into())),
        None => {
            for row in &table.orbits {
                let ch: Vec<String> = row.characteristic.iter().map(|c| c.to_string()).collect();
                println!("{:>4}  {:>4}  {}", row.id, row.dim, ch.join(" "));
            }
            match &cfg.out {
                Some(p) => emit(Some(p), &to_json(&table)),
                None => Ok(()),
            }
        }
    }
}

fn decide(cfg: &RunConfig, upper: usize, lower: usize) -> Result<(), CliError> {
    let r = Resolved::new(cfg)?;
    let orbits = r.orbits()?;
    let (u, l) = (find(&orbits, upper)?, find(&orbits, lower)?);
    let decision = decide_inclusion(&r.tg, l, u, &r.closure, pair_seed(r.seed, lower, upper))?;
    eprintln!(
        "orbit {lower} is {}in the closure of orbit {upper}",
        if decision.included { "" } else { "not " }
    );
    let doc = DecideOutput {
        decision,
        seed: r.seed,
        config_hash: r.hash,
        tool_version: TOOL_VERSION.to_string(),
    };
    emit(cfg.out.as_deref(), &to_json(&doc))
}

fn hasse(cfg: &RunConfig, no_cache: bool) -> Result<(), CliError> {
    let r = Resolved::new(cfg)?;
    let cache = if no_cache {
        None
    } else {
        cfg.cache_dir.clone().or_else(Cache::default_dir).map(Cache::new)
    };
    let doc = match cache.as_ref().and_then(|c| c.get(&r.hash)) {
        Some(doc) => doc,
        None => {
            let t0 = Instant::now();
            let orbits = r.orbits()?;
            let t1 = Instant::now();
            let (diagram, _) = build_hasse(&r.tg, &orbits, &r.closure, r.seed)?;
            let doc = HasseOutput {
                diagram,
                seed: r.seed,
                timings: Timings {
                    orbits_ms: (t1 - t0).as_millis() as u64,
                    closure_ms: t1.elapsed().as_millis() as u64,
                },
                config_hash: r.hash.clone(),
                tool_version: TOOL_VERSION.to_string(),
            };
            if let Some(c) = &cache {
                if let Err(e) = c.put(&doc) {
                    eprintln!("warning: could not write cache: {e}");
                }
            }
            doc
        }
    };
    let text = match cfg.format.unwrap_or_default() {
        Format::Json => to_json(&doc),
        Format::Dot => to_dot(&doc),
    };
    emit(cfg.out.as_deref(), &text)
}

fn validate_fixtures(cfg: &RunConfig, paths: &[PathBuf]) -> Result<(), CliError> {
    let paths: Vec<PathBuf> = if paths.is_empty() {
        cfg.fixture.iter().cloned().collect()
    } else {
        paths.to_vec()
    };
    if paths.is_empty() {
        return Err(CliError::Config("no fixtures given".into()));
    }
    let seed = cfg.seed.unwrap_or(0);
    let mut failures = 0usize;
    for path in &paths {
        let fx = Fixture::load(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let tg = fx.theta_group()?;
        let mut ok = 0usize;
        for (row, res) in fx.orbits.iter().zip(fx.reconstruct_rows(&tg, seed)) {
            let problem = match res {
                Err(e) => Some(e.to_string()),
                Ok(o) if row.dim.is_some_and(|d| d != o.dim) => {
                    Some(format!("dimension {} but fixture says {}", o.dim, row.dim.unwrap()))
                }
                Ok(o) if !split_identity_check(&tg, &o.triple) => Some("split identity check failed".into()),
                Ok(_) => None,
            };
            match problem {
                Some(p) => {
                    failures += 1;
                    println!("{} row {}: FAIL {p}", fx.case, row.id);
                }
                None => ok += 1,
            }
        }
        println!("{}: {ok}/{} rows ok", fx.case, fx.orbits.len());
    }
    if failures > 0 {
        return Err(CliError::Validation(format!("{failures} rows failed")));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = cli.run_config()?;
    if let Some(n) = cfg.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    match &cli.command {
        Command::ListOrbits => list_orbits(&cfg),
        Command::Decide { upper, lower } => decide(&cfg, *upper, *lower),
        Command::Hasse => hasse(&cfg, cli.no_cache),
        Command::ValidateFixtures { fixtures } => validate_fixtures(&cfg, fixtures),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
