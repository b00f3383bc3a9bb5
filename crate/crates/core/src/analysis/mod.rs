//! Membership tests, set scanners and theorem checks.
//!
//! Quantifiers over `ε > 0` and `λ ∈ (0, 1)` are discretized by the finite
//! grids in [`RoughParams`]; a point is a member only if every grid pair
//! gives the required density verdict, so results are semidecisions with an
//! explicit [`Verdict::Indeterminate`].

mod membership;
mod scan;
pub mod suite;
pub mod theorems;

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::density::{DensityConfig, PrefixSchedule};
use crate::error::{Error, Result};
use crate::pns::ProbabilisticNorm;
use crate::sequences::DoubleSequence;

pub use membership::{BoundedVerdict, Boundedness, Membership, PairEstimate, RoughLimitDetail};
pub use scan::{Interval, PointVerdict, SetEstimate, SetKind};
pub use suite::{run_suite, SuiteConfig};
pub use theorems::{StatementForm, TheoremReport, TheoremVerdict, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Member,
    NonMember,
    Indeterminate,
}

pub const DEFAULT_EPS_GRID: [f64; 5] = [0.5, 0.25, 0.1, 0.05, 0.01];
pub const DEFAULT_LAMBDA_GRID: [f64; 3] = [0.1, 0.5, 0.9];
pub const DEFAULT_G_LADDER: [f64; 4] = [1.0, 10.0, 100.0, 1000.0];

/// Roughness degree and the grids discretizing `ε` and `λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoughParams {
    pub r: f64,
    #[serde(default = "default_eps")]
    pub eps_grid: Vec<f64>,
    #[serde(default = "default_lambda")]
    pub lambda_grid: Vec<f64>,
}

fn default_eps() -> Vec<f64> {
    DEFAULT_EPS_GRID.to_vec()
}

fn default_lambda() -> Vec<f64> {
    DEFAULT_LAMBDA_GRID.to_vec()
}

impl RoughParams {
    pub fn new(r: f64, eps_grid: Vec<f64>, lambda_grid: Vec<f64>) -> Result<Self> {
        let p = RoughParams { r, eps_grid, lambda_grid };
        p.validate()?;
        Ok(p)
    }

    pub fn with_r(r: f64) -> Self {
        RoughParams { r, eps_grid: default_eps(), lambda_grid: default_lambda() }
    }

    /// Same grids, different roughness.
    pub fn at(&self, r: f64) -> Self {
        RoughParams { r, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r >= 0.0 && self.r.is_finite()) {
            return Err(Error::Domain { what: "roughness r", value: self.r });
        }
        validate_eps(&self.eps_grid)?;
        validate_lambda(&self.lambda_grid)
    }

    /// `(ε, λ)` pairs in grid order.
    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.eps_grid.iter().flat_map(move |&e| self.lambda_grid.iter().map(move |&l| (e, l)))
    }

    pub(crate) fn key(&self) -> Vec<u64> {
        std::iter::once(self.r)
            .chain(self.eps_grid.iter().copied())
            .chain([f64::NAN])
            .chain(self.lambda_grid.iter().copied())
            .map(f64::to_bits)
            .collect()
    }
}

impl Default for RoughParams {
    fn default() -> Self {
        RoughParams::with_r(0.0)
    }
}

pub(crate) fn validate_eps(eps: &[f64]) -> Result<()> {
    if eps.is_empty() {
        return Err(Error::invalid("eps grid must be nonempty"));
    }
    if let Some(&e) = eps.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(Error::Domain { what: "eps", value: e });
    }
    if eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("eps grid must be strictly decreasing"));
    }
    Ok(())
}

pub(crate) fn validate_lambda(lambda: &[f64]) -> Result<()> {
    if lambda.is_empty() {
        return Err(Error::invalid("lambda grid must be nonempty"));
    }
    for &l in lambda {
        crate::pns::check_level(l)?;
    }
    Ok(())
}

/// Uniform 1D grid `lo, lo + step, ..., hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        let g = Grid { lo, hi, step };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::invalid(format!("grid needs lo < hi, got [{}, {}]", self.lo, self.hi)));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::Domain { what: "grid step", value: self.step });
        }
        if self.len() > 1_000_000 {
            return Err(Error::invalid("grid has more than 10^6 points"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, i: usize) -> f64 {
        snap(self.lo + i as f64 * self.step)
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    pub fn with_step(&self, step: f64) -> Grid {
        Grid { step, ..*self }
    }
}

/// Rounds grid coordinates to 1e-9 so that e.g. `-4 + 500·0.01` is exactly 1.
pub(crate) fn snap(x: f64) -> f64 {
    let s = (x * 1e9).round() / 1e9;
    if s == 0.0 {
        0.0
    } else {
        s
    }
}

/// Probabilistic norm, prefix schedule and density thresholds shared by
/// every analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Context {
    pub pnorm: ProbabilisticNorm,
    pub schedule: PrefixSchedule,
    pub density: DensityConfig,
}

impl Context {
    pub fn new(pnorm: ProbabilisticNorm, schedule: PrefixSchedule, density: DensityConfig) -> Result<Self> {
        density.validate()?;
        Ok(Context { pnorm, schedule, density })
    }

    pub fn dirac() -> Self {
        Context {
            pnorm: ProbabilisticNorm::dirac(),
            schedule: PrefixSchedule::default(),
            density: DensityConfig::default(),
        }
    }

    pub fn with_pnorm(pnorm: ProbabilisticNorm) -> Self {
        Context { pnorm, ..Context::dirac() }
    }

    /// Evaluates `seq` over the largest prefix rectangle.
    pub fn sample(&self, seq: &DoubleSequence) -> Result<Sampled> {
        let (rows, cols) = self.schedule.last();
        let window = Window::materialize(seq, rows, cols, self.density.budget)?;
        Ok(Sampled { ctx: self.clone(), seq: seq.clone(), window, scans: Mutex::new(HashMap::new()) })
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Window {
    pub rows: u64,
    pub cols: u64,
    pub dim: usize,
    pub values: Vec<f64>,
}

impl Window {
    pub(crate) fn materialize(seq: &DoubleSequence, rows: u64, cols: u64, budget: u64) -> Result<Self> {
        let cells = rows as u128 * cols as u128;
        if cells > budget as u128 {
            return Err(Error::Budget { cells, budget });
        }
        let dim = seq.dimension()?;
        let mut values = vec![0.0; cells as usize * dim];
        let mut chunks = values.chunks_exact_mut(dim);
        for i in 1..=rows {
            for j in 1..=cols {
                seq.evaluate_into(i, j, chunks.next().expect("sized"))?;
            }
        }
        Ok(Window { rows, cols, dim, values })
    }

    #[inline]
    pub(crate) fn at(&self, i: u64, j: u64) -> &[f64] {
        let idx = ((i - 1) * self.cols + (j - 1)) as usize * self.dim;
        &self.values[idx..idx + self.dim]
    }
}

type ScanKey = (SetKind, Vec<u64>, [u64; 3]);

/// A sequence evaluated over the context's largest prefix rectangle, with
/// memoized scans.
#[derive(Debug)]
pub struct Sampled {
    ctx: Context,
    seq: DoubleSequence,
    window: Window,
    scans: Mutex<HashMap<ScanKey, SetEstimate>>,
}

impl Sampled {
    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn sequence(&self) -> &DoubleSequence {
        &self.seq
    }

    pub fn dim(&self) -> usize {
        self.window.dim
    }

    /// Samples another sequence under the same context.
    pub fn sibling(&self, seq: &DoubleSequence) -> Result<Sampled> {
        self.ctx.sample(seq)
    }

    pub(crate) fn check_point(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.window.dim {
            return Err(Error::DimensionMismatch { expected: self.window.dim, found: point.len() });
        }
        if let Some(&bad) = point.iter().find(|c| !c.is_finite()) {
            return Err(Error::Domain { what: "point coordinate", value: bad });
        }
        Ok(())
    }
}
