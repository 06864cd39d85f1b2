//! Run configuration: what to compute and how.

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use theta_closure::closure::{ClosureConfig, Orbit};
use theta_closure::fixtures::{AlgebraSpec, Fixture};
use theta_closure::grading::{Grading, GradingSpec, ThetaGroup};
use theta_closure::sl2::{enumerate_characteristics, SampleOptions};
use theta_closure::stratum::{RankStrategy, RowSpanPolicy};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Dot,
}

/// Contents of a `--config` file. Relative paths are resolved against the
/// directory of the file.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub algebra: Option<AlgebraSpec>,
    pub kac_labels: Option<Vec<i64>>,
    pub degrees: Option<Vec<i64>>,
    pub simple_root_order: Option<Vec<usize>>,
    pub fixture: Option<PathBuf>,
    pub label_bound: Option<i64>,
    pub seed: Option<u64>,
    pub rank_strategy: Option<RankStrategy>,
    pub row_span: Option<RowSpanPolicy>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub cache_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.fixture, &mut cfg.out, &mut cfg.cache_dir].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

pub enum Source {
    Fixture(Box<Fixture>),
    Enumerator { bound: i64 },
}

/// A configuration checked for consistency, with the algebra built.
pub struct Resolved {
    pub tg: ThetaGroup,
    pub source: Source,
    pub seed: u64,
    pub closure: ClosureConfig,
    pub hash: String,
}

/// The fields that determine a result; hashed for the cache key.
#[derive(Serialize)]
struct HashInput<'a> {
    tool: &'a str,
    algebra: &'a AlgebraSpec,
    grading: &'a GradingSpec,
    simple_root_order: &'a [usize],
    fixture_sha256: Option<String>,
    label_bound: Option<i64>,
    seed: u64,
    closure: &'a ClosureConfig,
}

impl Resolved {
    pub fn new(cfg: &RunConfig) -> Result<Resolved, CliError> {
        let bad = |m: &str| CliError::Config(m.to_string());
        let (fixture, fixture_sha) = match &cfg.fixture {
            Some(p) => {
                let bytes = std::fs::read(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                let fx: Fixture = serde_json::from_slice(&bytes)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                (Some(fx), Some(hex::encode(Sha256::digest(&bytes))))
            }
            None => (None, None),
        };
        let source = match (fixture, cfg.label_bound) {
            (Some(fx), None) => Source::Fixture(Box::new(fx)),
            (None, Some(bound)) if bound >= 0 => Source::Enumerator { bound },
            (None, Some(_)) => return Err(bad("label_bound must be non-negative")),
            (Some(_), Some(_)) => return Err(bad("give either a fixture or a label bound, not both")),
            (None, None) => return Err(bad("no orbit source: give a fixture or a label bound")),
        };
        let (algebra, grading, order) = match &source {
            Source::Fixture(fx) => {
                if cfg.algebra.as_ref().is_some_and(|a| *a != fx.algebra)
                    || cfg.kac_labels.as_ref().is_some_and(|k| *k != fx.kac_labels)
                    || cfg.degrees.is_some()
                {
                    return Err(bad("algebra or grading in the config disagrees with the fixture"));
                }
                (
                    fx.algebra.clone(),
                    GradingSpec::KacLabels(fx.kac_labels.clone()),
                    fx.simple_root_order.clone().or(cfg.simple_root_order.clone()),
                )
            }
            Source::Enumerator { .. } => {
                let algebra = cfg.algebra.clone().ok_or_else(|| bad("missing algebra"))?;
                let grading = match (&cfg.kac_labels, &cfg.degrees) {
                    (Some(k), None) => GradingSpec::KacLabels(k.clone()),
                    (None, Some(d)) => GradingSpec::Degrees(d.clone()),
                    _ => return Err(bad("give exactly one of kac_labels and degrees")),
                };
                (algebra, grading, cfg.simple_root_order.clone())
            }
        };
        let g = algebra.build().map_err(|e| CliError::Config(e.to_string()))?;
        let gr = Grading::from_spec(&g, &grading).map_err(|e| CliError::Config(e.to_string()))?;
        let tg = match &order {
            Some(o) => ThetaGroup::with_simple_order(g, gr, o).map_err(|e| CliError::Config(e.to_string()))?,
            None => ThetaGroup::new(g, gr),
        };
        let mut closure = ClosureConfig::default();
        if let Some(r) = cfg.rank_strategy {
            closure.dense.rank = r;
        }
        if let Some(r) = cfg.row_span {
            closure.dense.row_span = r;
        }
        let seed = cfg.seed.unwrap_or(0);
        let input = HashInput {
            tool: env!("CARGO_PKG_VERSION"),
            algebra: &algebra,
            grading: &grading,
            simple_root_order: &tg.data.simple_names,
            fixture_sha256: fixture_sha,
            label_bound: cfg.label_bound,
            seed,
            closure: &closure,
        };
        let hash = hex::encode(Sha256::digest(serde_json::to_vec(&input).expect("serializable")));
        Ok(Resolved {
            tg,
            source,
            seed,
            closure,
            hash,
        })
    }

    /// Orbits with triples, ordered by id. Enumerated orbits are numbered by
    /// decreasing dimension, ties broken by characteristic.
    pub fn orbits(&self) -> Result<Vec<Orbit>, CliError> {
        match &self.source {
            Source::Fixture(fx) => Ok(fx.orbits(&self.tg, self.seed)?),
            Source::Enumerator { bound } => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                let mut orbits: Vec<Orbit> =
                    enumerate_characteristics(&self.tg, *bound, &mut rng, SampleOptions::default())
                        .into_iter()
                        .map(|t| Orbit::new(&self.tg, 0, t))
                        .collect();
                orbits.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| a.triple.h.coords.cmp(&b.triple.h.coords)));
                for (i, o) in orbits.iter_mut().enumerate() {
                    o.id = i + 1;
                }
                Ok(orbits)
            }
        }
    }
}
