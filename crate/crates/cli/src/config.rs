//! Run configuration. Every numeric field is validated while parsing, so a
//! bad value is reported with its JSON path and position.

use std::path::PathBuf;

use roughlim_core::analysis::suite::SuiteConfig;
use roughlim_core::analysis::{DEFAULT_EPS_GRID, DEFAULT_LAMBDA_GRID};
use roughlim_core::{
    BaseNorm, DensityConfig, DoubleSequence, Grid, IndexMap, PNormKind, PrefixSchedule, ProbabilisticNorm, RoughParams, SetKind,
    TNorm, Vector,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub sequence: DoubleSequence,
    #[serde(default)]
    pub pnorm: PNormName,
    #[serde(default)]
    pub base_norm: BaseNormName,
    #[serde(default)]
    pub tnorm: TNormName,
    pub analysis: Analysis,
    #[serde(default)]
    pub schedule: PrefixSchedule,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub eps_grid: EpsGrid,
    #[serde(default)]
    pub lambda_grid: LambdaGrid,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub outputs: Outputs,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn probabilistic_norm(&self) -> ProbabilisticNorm {
        let kind = match self.pnorm {
            PNormName::Dirac => PNormKind::Dirac,
            PNormName::Menger => PNormKind::MengerRatio,
        };
        let base = match self.base_norm {
            BaseNormName::Euclidean => BaseNorm::Euclidean,
            BaseNormName::Sup => BaseNorm::Sup,
        };
        ProbabilisticNorm::new(kind, base)
    }

    pub fn tnorm(&self) -> TNorm {
        match self.tnorm {
            TNormName::Min => TNorm::Min,
            TNormName::Product => TNorm::Product,
            TNormName::Lukasiewicz => TNorm::Lukasiewicz,
        }
    }

    pub fn params(&self, r: Roughness) -> RoughParams {
        RoughParams { r: r.0, eps_grid: self.eps_grid.0.clone(), lambda_grid: self.lambda_grid.0.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PNormName {
    #[default]
    Dirac,
    Menger,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseNormName {
    #[default]
    Euclidean,
    Sup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TNormName {
    #[default]
    Min,
    Product,
    Lukasiewicz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetName {
    RoughStatLimit,
    RoughCluster,
    RoughLimit,
}

impl From<SetName> for SetKind {
    fn from(s: SetName) -> Self {
        match s {
            SetName::RoughStatLimit => SetKind::RoughStatLimit,
            SetName::RoughCluster => SetKind::RoughCluster,
            SetName::RoughLimit => SetKind::RoughLimit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Analysis {
    Eval {
        indices: Vec<(u64, u64)>,
    },
    Density {
        set: IndexSetSpec,
    },
    Member {
        set: SetName,
        point: Vector,
        r: Roughness,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        horizon: Option<u64>,
    },
    Scan {
        set: SetName,
        r: Roughness,
    },
    TheoremSuite {
        r: Roughness,
        #[serde(default)]
        options: SuiteOptions,
    },
}

/// Index sets whose double density the `density` analysis estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum IndexSetSpec {
    /// Both indices perfect squares.
    SquarePairs {},
    /// `m + n` even.
    Parity {},
    /// Image of an index map.
    Image { map: IndexMap },
    /// `{(m, n) : ϑ(x_mn - point; t) <= 1 - lambda}` for the configured sequence.
    Exception { point: Vector, t: Positive, lambda: Level },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteOptions {
    pub coarse_step: Positive,
    pub fine_step: Positive,
    pub separation_m: Vec<Positive>,
    pub linearity_r: Roughness,
    pub alpha: f64,
    pub dense_map: IndexMap,
    pub partner: DoubleSequence,
    pub partner_limit: f64,
    pub axiom_samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        let d = SuiteConfig::default();
        SuiteOptions {
            coarse_step: Positive(d.coarse_step),
            fine_step: Positive(d.fine_step),
            separation_m: d.separation_m.into_iter().map(Positive).collect(),
            linearity_r: Roughness(d.linearity_r),
            alpha: d.alpha,
            dense_map: d.dense_map,
            partner: d.partner,
            partner_limit: d.partner_limit,
            axiom_samples: 1000,
        }
    }
}

impl SuiteOptions {
    pub fn suite_config(&self, cfg: &RunConfig, r: Roughness) -> SuiteConfig {
        SuiteConfig {
            r: r.0,
            grid: cfg.grid.0,
            eps_grid: cfg.eps_grid.0.clone(),
            lambda_grid: cfg.lambda_grid.0.clone(),
            coarse_step: self.coarse_step.0,
            fine_step: self.fine_step.0,
            separation_m: self.separation_m.iter().map(|m| m.0).collect(),
            linearity_r: self.linearity_r.0,
            alpha: self.alpha,
            dense_map: self.dense_map.clone(),
            partner: self.partner.clone(),
            partner_limit: self.partner_limit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

/// Finite, nonnegative roughness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Roughness(pub f64);

impl TryFrom<f64> for Roughness {
    type Error = String;

    fn try_from(v: f64) -> Result<Self, String> {
        if v.is_finite() && v >= 0.0 {
            Ok(Roughness(v))
        } else {
            Err(format!("roughness must be finite and >= 0, got {v}"))
        }
    }
}

impl From<Roughness> for f64 {
    fn from(v: Roughness) -> f64 {
        v.0
    }
}

/// Finite and strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Positive(pub f64);

impl TryFrom<f64> for Positive {
    type Error = String;

    fn try_from(v: f64) -> Result<Self, String> {
        if v.is_finite() && v > 0.0 {
            Ok(Positive(v))
        } else {
            Err(format!("value must be finite and > 0, got {v}"))
        }
    }
}

impl From<Positive> for f64 {
    fn from(v: Positive) -> f64 {
        v.0
    }
}

/// A level in the open interval `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Level(pub f64);

impl TryFrom<f64> for Level {
    type Error = String;

    fn try_from(v: f64) -> Result<Self, String> {
        if v > 0.0 && v < 1.0 {
            Ok(Level(v))
        } else {
            Err(format!("level must lie in (0, 1), got {v}"))
        }
    }
}

impl From<Level> for f64 {
    fn from(v: Level) -> f64 {
        v.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "DensityConfig", into = "DensityConfig")]
pub struct Tolerances(pub DensityConfig);

impl TryFrom<DensityConfig> for Tolerances {
    type Error = String;

    fn try_from(c: DensityConfig) -> Result<Self, String> {
        c.validate().map_err(|e| e.to_string())?;
        Ok(Tolerances(c))
    }
}

impl From<Tolerances> for DensityConfig {
    fn from(t: Tolerances) -> Self {
        t.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct EpsGrid(pub Vec<f64>);

impl Default for EpsGrid {
    fn default() -> Self {
        EpsGrid(DEFAULT_EPS_GRID.to_vec())
    }
}

impl TryFrom<Vec<f64>> for EpsGrid {
    type Error = String;

    fn try_from(v: Vec<f64>) -> Result<Self, String> {
        RoughParams::new(0.0, v.clone(), DEFAULT_LAMBDA_GRID.to_vec()).map_err(|e| e.to_string())?;
        Ok(EpsGrid(v))
    }
}

impl From<EpsGrid> for Vec<f64> {
    fn from(g: EpsGrid) -> Self {
        g.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct LambdaGrid(pub Vec<f64>);

impl Default for LambdaGrid {
    fn default() -> Self {
        LambdaGrid(DEFAULT_LAMBDA_GRID.to_vec())
    }
}

impl TryFrom<Vec<f64>> for LambdaGrid {
    type Error = String;

    fn try_from(v: Vec<f64>) -> Result<Self, String> {
        RoughParams::new(0.0, DEFAULT_EPS_GRID.to_vec(), v.clone()).map_err(|e| e.to_string())?;
        Ok(LambdaGrid(v))
    }
}

impl From<LambdaGrid> for Vec<f64> {
    fn from(g: LambdaGrid) -> Self {
        g.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Grid", into = "Grid")]
pub struct GridSpec(pub Grid);

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec(Grid { lo: -4.0, hi: 4.0, step: 0.01 })
    }
}

impl TryFrom<Grid> for GridSpec {
    type Error = String;

    fn try_from(g: Grid) -> Result<Self, String> {
        g.validate().map_err(|e| e.to_string())?;
        Ok(GridSpec(g))
    }
}

impl From<GridSpec> for Grid {
    fn from(g: GridSpec) -> Self {
        g.0
    }
}

/// Parses a configuration, reporting the failing field path with the
/// line and column of the error.
pub fn parse(text: &str) -> Result<RunConfig, String> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            inner.to_string()
        } else {
            format!("{path}: {inner}")
        }
    })
}
