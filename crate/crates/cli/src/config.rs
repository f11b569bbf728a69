//! Run configuration: CLI flags merged over an optional JSON config file,
//! resolved to fully explicit values before anything executes.

use serde::{Deserialize, Serialize};
use srechain::criticality::{
    Engine, ExtremumKind, GridSpec, Measure, ObservableSpec, SectorRequest, Sites, SweepModel,
    SweepSpec,
};

/// Optional fields as read from `--config FILE` (JSON). Flags take
/// precedence over file values.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<String>,
    pub n_sites: Option<usize>,
    pub j1: Option<f64>,
    pub j2: Option<f64>,
    pub jx: Option<f64>,
    pub jz: Option<f64>,
    pub gamma: Option<f64>,
    pub xmin: Option<f64>,
    pub xmax: Option<f64>,
    pub steps: Option<usize>,
    pub sites: Option<String>,
    pub measure: Option<String>,
    pub engine: Option<String>,
    pub sector: Option<String>,
    pub separation: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub out: Option<String>,
    pub plot: Option<bool>,
    // finite-size scaling panel
    pub sizes: Option<Vec<usize>>,
    pub known_c: Option<f64>,
    pub window: Option<[f64; 2]>,
    pub extremum: Option<String>,
}

impl FileConfig {
    pub fn load(path: &str) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {path}: {e}"))?;
        serde_json::from_str(&text).map_err(|e| format!("cannot parse config {path}: {e}"))
    }
}

/// Fully resolved run description; everything that affects output is
/// explicit here and echoed into the CSV header.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub command: String,
    pub model: String,
    pub n_sites: usize,
    pub j1: f64,
    pub j2: f64,
    pub jz: f64,
    pub xmin: f64,
    pub xmax: f64,
    pub steps: usize,
    pub sites: String,
    pub measure: String,
    pub engine: String,
    pub sector: String,
    pub separation: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_iter: usize,
    pub out: String,
    pub plot: bool,
}

impl ResolvedConfig {
    /// Deterministic `key = value` lines for CSV comments.
    pub fn comment_lines(&self) -> Vec<String> {
        vec![
            format!("command = {}", self.command),
            format!("model = {}", self.model),
            format!("n_sites = {}", self.n_sites),
            format!("j1 = {}", self.j1),
            format!("j2 = {}", self.j2),
            format!("jz = {}", self.jz),
            format!("xmin = {}", self.xmin),
            format!("xmax = {}", self.xmax),
            format!("steps = {}", self.steps),
            format!("sites = {}", self.sites),
            format!("measure = {}", self.measure),
            format!("engine = {}", self.engine),
            format!("sector = {}", self.sector),
            format!("separation = {}", self.separation),
            format!("seed = {}", self.seed),
            format!("tol = {:e}", self.tol),
            format!("max_iter = {}", self.max_iter),
        ]
    }

    pub fn sweep_model(&self) -> Result<SweepModel, String> {
        match self.model.as_str() {
            "tannni" => Ok(SweepModel::Tannni {
                j1: self.j1,
                j2: self.j2,
            }),
            "tfim" => Ok(SweepModel::Tfim { j1: self.j1 }),
            "qcm" => Ok(SweepModel::Qcm { jz: self.jz }),
            other => Err(format!("unknown model {other:?}")),
        }
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec, String> {
        Ok(SweepSpec {
            model: self.sweep_model()?,
            n_sites: self.n_sites,
            engine: parse_engine(&self.engine)?,
            sector: parse_sector(&self.sector)?,
            separation: self.separation,
            seed: self.seed,
            tol: self.tol,
            max_iter: self.max_iter,
        })
    }

    pub fn grid(&self) -> Result<GridSpec, String> {
        GridSpec::new(self.xmin, self.xmax, self.steps).map_err(|e| e.to_string())
    }

    pub fn observable(&self) -> Result<ObservableSpec, String> {
        Ok(ObservableSpec {
            measure: parse_measure(&self.measure)?,
            sites: parse_sites(&self.sites)?,
        })
    }
}

pub fn parse_engine(s: &str) -> Result<Engine, String> {
    match s {
        "ed" => Ok(Engine::Ed),
        "freefermion" => Ok(Engine::FreeFermion),
        "auto" => Ok(Engine::Auto),
        other => Err(format!("unknown engine {other:?} (ed|freefermion|auto)")),
    }
}

pub fn parse_sector(s: &str) -> Result<SectorRequest, String> {
    match s {
        "auto" => Ok(SectorRequest::Auto),
        "integer" => Ok(SectorRequest::Integer),
        "half" => Ok(SectorRequest::Half),
        other => Err(format!("unknown sector {other:?} (auto|integer|half)")),
    }
}

pub fn parse_measure(s: &str) -> Result<Measure, String> {
    match s {
        "m2" => Ok(Measure::M2),
        "m2tilde" => Ok(Measure::M2Tilde),
        other => Err(format!("unknown measure {other:?} (m2|m2tilde)")),
    }
}

pub fn parse_sites(s: &str) -> Result<Sites, String> {
    match s {
        "one" => Ok(Sites::One),
        "two" => Ok(Sites::Two),
        other => Err(format!("unknown sites {other:?} (one|two)")),
    }
}

pub fn parse_extremum(s: &str) -> Result<ExtremumKind, String> {
    match s {
        "maximum" | "max" => Ok(ExtremumKind::Maximum),
        "minimum" | "min" => Ok(ExtremumKind::Minimum),
        other => Err(format!("unknown extremum kind {other:?} (maximum|minimum)")),
    }
}
