//! JSON scenario files (`"schema": 1`) and their translation into the
//! library's domain objects.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{LocalOperator, Pauli};
use crate::error::{Error, Result};
use crate::ffunc::{FFunction, PowerLaw};
use crate::interactions::{preset, Interaction, InteractionPath, Model};
use crate::lattice::{MetricGraph, SiteSet};
use crate::linalg::ONE;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u32,
    #[serde(default)]
    pub name: Option<String>,
    pub lattice: LatticeSpec,
    #[serde(default)]
    pub ffunction: Option<FSpec>,
    #[serde(default)]
    pub interaction: Option<Model>,
    /// Second interaction for the continuity estimate.
    #[serde(default)]
    pub perturbed: Option<Model>,
    #[serde(default)]
    pub path: Option<PathSpec>,
    /// Finite volume Λ; all sites when absent.
    #[serde(default)]
    pub volume: Option<Vec<usize>>,
    #[serde(default)]
    pub pairs: Option<PairsSpec>,
    #[serde(default)]
    pub observable: Option<OpSpec>,
    #[serde(default)]
    pub times: Option<GridSpec>,
    #[serde(default)]
    pub lightcone: Option<LightconeSpec>,
    #[serde(default)]
    pub continuity: Option<ContinuitySpec>,
    #[serde(default)]
    pub gap: Option<GapSpec>,
    #[serde(default)]
    pub flow: Option<FlowSpec>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LatticeSpec {
    Chain { n: usize },
    Ring { n: usize },
    Grid { dims: Vec<usize>, #[serde(default)] periodic: bool },
    Explicit { dist: Vec<Vec<u32>> },
}

impl LatticeSpec {
    pub fn build(&self) -> Result<MetricGraph> {
        match self {
            LatticeSpec::Chain { n } => MetricGraph::chain(*n),
            LatticeSpec::Ring { n } => MetricGraph::ring(*n),
            LatticeSpec::Grid { dims, periodic } => MetricGraph::grid(dims, *periodic),
            LatticeSpec::Explicit { dist } => MetricGraph::explicit(dist.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FSpec {
    PowerLaw { nu: f64, eps: f64 },
    Weighted { a: f64, theta: f64, nu: f64, eps: f64 },
    LogWeighted { a: f64, nu: f64, eps: f64 },
}

impl FSpec {
    pub fn build(&self) -> Result<FFunction> {
        match *self {
            FSpec::PowerLaw { nu, eps } => FFunction::power_law(nu, eps),
            FSpec::Weighted { a, theta, nu, eps } => FFunction::weighted(a, theta, PowerLaw::new(nu, eps)?),
            FSpec::LogWeighted { a, nu, eps } => FFunction::log_weighted(a, PowerLaw::new(nu, eps)?),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSpec {
    pub start: Model,
    pub end: Model,
}

/// Pauli string `coeff · ⊗_k P_k` on `sites`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpSpec {
    pub sites: Vec<usize>,
    pub paulis: String,
    #[serde(default = "one")]
    pub coeff: f64,
}

fn one() -> f64 {
    1.0
}

impl OpSpec {
    pub fn build(&self) -> Result<LocalOperator> {
        let letters: Vec<char> = self.paulis.chars().collect();
        if letters.len() != self.sites.len() || letters.is_empty() {
            return Err(Error::Config(format!(
                "observable needs one Pauli letter per site, got {:?} on {:?}",
                self.paulis, self.sites
            )));
        }
        let mut sorted = self.sites.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.sites.len() {
            return Err(Error::Config(format!("observable sites {:?} repeat", self.sites)));
        }
        let pairs: Vec<(usize, Pauli)> =
            self.sites.iter().zip(&letters).map(|(s, c)| Ok((*s, Pauli::from_char(*c)?))).collect::<Result<_>>()?;
        if !self.coeff.is_finite() {
            return Err(Error::Config("observable coefficient must be finite".into()));
        }
        LocalOperator::pauli_string(ONE * self.coeff, &pairs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PairsSpec {
    /// `(P_x, P_y)` for all ordered `x ≠ y` in Λ.
    AllOrdered { pauli: char },
    /// `(P_site, P_y)` for every other `y` in Λ.
    FromSite { site: usize, pauli: char },
    Explicit { pairs: Vec<PairSpec> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub a: OpSpec,
    pub b: OpSpec,
}

impl PairsSpec {
    pub fn build(&self, lambda: &SiteSet) -> Result<Vec<(LocalOperator, LocalOperator)>> {
        match self {
            PairsSpec::AllOrdered { pauli } => {
                let p = Pauli::from_char(*pauli)?;
                Ok(crate::dynamics::all_site_pairs(lambda, p))
            }
            PairsSpec::FromSite { site, pauli } => {
                let p = Pauli::from_char(*pauli)?;
                if !lambda.contains(*site) {
                    return Err(Error::Config(format!("site {site} is not in Λ = {lambda}")));
                }
                Ok(lambda
                    .iter()
                    .filter(|y| y != site)
                    .map(|y| (LocalOperator::pauli(*site, p), LocalOperator::pauli(y, p)))
                    .collect())
            }
            PairsSpec::Explicit { pairs } => pairs.iter().map(|p| Ok((p.a.build()?, p.b.build()?))).collect(),
        }
    }
}

/// Either an explicit list or `start, stop, step` (both ends included).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Values { values: Vec<f64> },
    Range { start: f64, stop: f64, step: f64 },
    Count { start: f64, stop: f64, points: usize },
}

impl GridSpec {
    pub fn build(&self) -> Result<Vec<f64>> {
        let v = match *self {
            GridSpec::Values { ref values } => values.clone(),
            GridSpec::Range { start, stop, step } => {
                if !(step > 0.0) || !(stop >= start) {
                    return Err(Error::Config(format!("bad range grid {start}..{stop} step {step}")));
                }
                let n = ((stop - start) / step + 1e-9).floor() as usize;
                (0..=n).map(|k| start + k as f64 * step).collect()
            }
            GridSpec::Count { start, stop, points } => {
                if points < 2 || !(stop >= start) {
                    return Err(Error::Config(format!("bad grid {start}..{stop} with {points} points")));
                }
                (0..points).map(|k| start + (stop - start) * k as f64 / (points - 1) as f64).collect()
            }
        };
        if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("grid must be non-empty and finite".into()));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LightconeSpec {
    /// Absolute threshold; `1e-3 ‖A‖‖B‖` of the first pair when absent.
    #[serde(default)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContinuitySpec {
    pub times: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapSpec {
    /// Chain lengths; each volume is the first `n` sites.
    pub sizes: Vec<usize>,
    pub s_grid: GridSpec,
    #[serde(default)]
    pub floor: f64,
    #[serde(default = "default_deg_tol")]
    pub deg_tol: f64,
}

fn default_deg_tol() -> f64 {
    crate::gsphase::DEFAULT_DEG_TOL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowSpec {
    /// Number of sites of the volume (first `n` sites).
    pub n: usize,
    pub steps: usize,
    /// Filter width; `γ_min / 2` from the scan when absent.
    #[serde(default)]
    pub xi: Option<f64>,
    #[serde(default = "default_target")]
    pub fidelity_target: f64,
    #[serde(default)]
    pub gap_floor: f64,
    #[serde(default = "default_panels")]
    pub quad_panels: usize,
    #[serde(default = "default_nodes")]
    pub quad_nodes: usize,
    #[serde(default = "default_quad_tol")]
    pub quad_tol: f64,
    /// Observables for the transported gap inequality; single-site `σᶻ`
    /// on every site when absent.
    #[serde(default)]
    pub observables: Option<Vec<OpSpec>>,
}

fn default_target() -> f64 {
    0.99
}
fn default_panels() -> usize {
    crate::gsphase::QuadParams::default().panels
}
fn default_nodes() -> usize {
    crate::gsphase::QuadParams::default().nodes_per_panel
}
fn default_quad_tol() -> f64 {
    crate::gsphase::QuadParams::default().tol
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let sc: Scenario = serde_json::from_str(text).map_err(|e| Error::Config(format!("scenario: {e}")))?;
        if sc.schema != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema {} (expected {SCHEMA_VERSION})",
                sc.schema
            )));
        }
        Ok(sc)
    }

    pub fn graph(&self) -> Result<MetricGraph> {
        self.lattice.build()
    }

    pub fn ffunction(&self) -> Result<FFunction> {
        self.ffunction.as_ref().ok_or_else(|| missing("ffunction"))?.build()
    }

    pub fn interaction(&self, g: &MetricGraph) -> Result<Interaction> {
        preset(self.interaction.as_ref().ok_or_else(|| missing("interaction"))?, g)
    }

    pub fn perturbed(&self, g: &MetricGraph) -> Result<Interaction> {
        preset(self.perturbed.as_ref().ok_or_else(|| missing("perturbed"))?, g)
    }

    pub fn path(&self, g: &MetricGraph) -> Result<InteractionPath> {
        let p = self.path.as_ref().ok_or_else(|| missing("path"))?;
        InteractionPath::linear(preset(&p.start, g)?, preset(&p.end, g)?)
    }

    pub fn volume(&self, g: &MetricGraph) -> Result<SiteSet> {
        match &self.volume {
            None => Ok(g.sites()),
            Some(v) => {
                let set = SiteSet::new(v.iter().copied());
                g.check_sites(&set).map_err(|e| Error::Config(e.to_string()))?;
                Ok(set)
            }
        }
    }

    pub fn times(&self) -> Result<Vec<f64>> {
        self.times.as_ref().ok_or_else(|| missing("times"))?.build()
    }

    /// SHA-256 over the canonical (key-sorted, compact) JSON form and the
    /// effective seed.
    pub fn hash(&self, seed: Option<u64>) -> String {
        let value = serde_json::to_value(self).expect("scenario serializes");
        let canonical = serde_json::to_string(&value).expect("value serializes");
        let mut h = Sha256::new();
        h.update(canonical.as_bytes());
        h.update(format!("|seed={:?}", seed.or(self.seed)).as_bytes());
        hex::encode(h.finalize())
    }
}

fn missing(field: &str) -> Error {
    Error::Config(format!("scenario is missing the `{field}` section"))
}

/// First `n` sites of the graph.
pub fn prefix_volume(g: &MetricGraph, n: usize) -> Result<SiteSet> {
    if n == 0 || n > g.n_sites() {
        return Err(Error::Config(format!("volume size {n} outside 1..={}", g.n_sites())));
    }
    Ok(SiteSet::range(n))
}
