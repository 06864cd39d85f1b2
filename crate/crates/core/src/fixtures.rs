//! Orbit tables stored as JSON: characteristics in `g_0` coordinates, with
//! optional orbit dimensions, labels and covering edges.

use std::path::Path;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closure::{pair_seed, Orbit};
use crate::error::{Error, Result};
use crate::grading::{Grading, ThetaGroup};
use crate::lie::{CartanType, LieAlgebra};
use crate::sl2::{self, Characteristic, SampleOptions};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraSpec {
    #[serde(rename = "type")]
    pub family: String,
    pub rank: usize,
}

impl AlgebraSpec {
    pub fn cartan_type(&self) -> Result<CartanType> {
        CartanType::parse(&self.family, self.rank)
    }

    pub fn build(&self) -> Result<Arc<LieAlgebra>> {
        Ok(Arc::new(LieAlgebra::new(self.cartan_type()?)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureOrbit {
    pub id: usize,
    pub characteristic: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub case: String,
    pub algebra: AlgebraSpec,
    pub kac_labels: Vec<i64>,
    /// Kac nodes of the simple roots of `g_0`, in the order used by the
    /// characteristic columns. Defaults to increasing node order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simple_root_order: Option<Vec<usize>>,
    pub orbits: Vec<FixtureOrbit>,
    /// `[upper, lower]` covering pairs of the closure order, if known.
    #[serde(default)]
    pub covering_edges: Vec<(usize, usize)>,
}

impl Fixture {
    pub fn load(path: impl AsRef<Path>) -> Result<Fixture> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn theta_group(&self) -> Result<ThetaGroup> {
        let g = self.algebra.build()?;
        let gr = Grading::from_kac(&g, &self.kac_labels)?;
        match &self.simple_root_order {
            Some(order) => ThetaGroup::with_simple_order(g, gr, order),
            None => Ok(ThetaGroup::new(g, gr)),
        }
    }

    fn row_error(&self, row: usize, reason: impl Into<String>) -> Error {
        Error::Fixture {
            case: self.case.clone(),
            row,
            reason: reason.into(),
        }
    }

    /// Reconstructs a triple for one row. The random choices depend only on
    /// `seed` and the row id.
    pub fn reconstruct_row(&self, tg: &ThetaGroup, row: &FixtureOrbit, seed: u64) -> Result<Orbit> {
        if tg.data.center_dim() > 0 {
            return Err(self.row_error(row.id, "g_0 has a center; characteristics need central values"));
        }
        let h = Characteristic::from_coords(tg, &row.characteristic, &[])
            .map_err(|e| self.row_error(row.id, e.to_string()))?;
        if !h.is_dominant() {
            return Err(self.row_error(row.id, "characteristic is not dominant"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(pair_seed(seed, row.id, 0));
        let t = sl2::triple_from_characteristic(tg, &h, &mut rng, SampleOptions::default())
            .ok_or_else(|| self.row_error(row.id, "no sl2-triple with this characteristic"))?;
        let mut o = Orbit::new(tg, row.id, t);
        o.label = row.label.clone();
        Ok(o)
    }

    /// All rows in parallel, each with its own outcome.
    pub fn reconstruct_rows(&self, tg: &ThetaGroup, seed: u64) -> Vec<Result<Orbit>> {
        self.orbits
            .par_iter()
            .map(|row| self.reconstruct_row(tg, row, seed))
            .collect()
    }

    /// All rows, failing on the first bad one.
    pub fn orbits(&self, tg: &ThetaGroup, seed: u64) -> Result<Vec<Orbit>> {
        self.reconstruct_rows(tg, seed).into_iter().collect()
    }
}
