//! Runs every structural check on one sequence with shared settings.

use serde::{Deserialize, Serialize};

use super::theorems::{
    check_ball_characterizations, check_boundedness_equivalence, check_closedness, check_closedness_of, check_convexity,
    check_dense_subsequence, check_linearity, check_perturbation, check_separation, cluster_neighborhood_check, BallMode,
    LinearityCase, LinearityMode, TheoremReport,
};
use super::{Context, Grid, RoughParams, SetKind, DEFAULT_EPS_GRID, DEFAULT_LAMBDA_GRID};
use crate::error::Result;
use crate::sequences::{DoubleSequence, IndexMap};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub r: f64,
    pub grid: Grid,
    pub eps_grid: Vec<f64>,
    pub lambda_grid: Vec<f64>,
    pub coarse_step: f64,
    pub fine_step: f64,
    pub separation_m: Vec<f64>,
    pub linearity_r: f64,
    pub alpha: f64,
    pub dense_map: IndexMap,
    pub partner: DoubleSequence,
    pub partner_limit: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            r: 1.0,
            grid: Grid { lo: -4.0, hi: 4.0, step: 0.01 },
            eps_grid: DEFAULT_EPS_GRID.to_vec(),
            lambda_grid: DEFAULT_LAMBDA_GRID.to_vec(),
            coarse_step: 0.05,
            fine_step: 0.01,
            separation_m: vec![2.5, 3.0],
            linearity_r: 1.0,
            alpha: 3.0,
            dense_map: IndexMap::drop_first_row(),
            partner: DoubleSequence::StatConvergentTo { xi: 0.0 },
            partner_limit: 0.0,
        }
    }
}

impl SuiteConfig {
    pub fn with_r(r: f64) -> Self {
        SuiteConfig { r, ..Default::default() }
    }

    pub fn params(&self) -> Result<RoughParams> {
        RoughParams::new(self.r, self.eps_grid.clone(), self.lambda_grid.clone())
    }
}

/// Reports in a fixed order, one per check.
pub fn run_suite(ctx: &Context, seq: &DoubleSequence, cfg: &SuiteConfig) -> Result<Vec<TheoremReport>> {
    cfg.grid.validate()?;
    let p = cfg.params()?;
    let grid = &cfg.grid;
    let s = ctx.sample(seq)?;
    let mut out = Vec::new();

    out.push(check_dense_subsequence(&s, &cfg.dense_map, &p, grid)?);
    out.push(check_boundedness_equivalence(&s, &p, grid)?);

    let lin = s.scan(SetKind::RoughStatLimit, &p.at(cfg.linearity_r), grid)?;
    let beta = lin.members().fold(None, |acc: Option<f64>, b| Some(acc.map_or(b, |a| a.max(b))));
    let case = beta.map(|b| LinearityCase {
        a: seq.clone(),
        b: seq.clone(),
        beta_a: vec![b],
        beta_b: vec![b],
        r_a: cfg.linearity_r,
        r_b: cfg.linearity_r,
        alpha: cfg.alpha,
    });
    for mode in [LinearityMode::Literal, LinearityMode::Corrected] {
        out.push(match &case {
            Some(c) => check_linearity(ctx, c, mode, &p)?,
            None => {
                let id = match mode {
                    LinearityMode::Literal => "linearity-literal",
                    LinearityMode::Corrected => "linearity-corrected",
                };
                TheoremReport::merge(id, "sums and nonzero multiples of rough statistical limits are limits", vec![])
                    .note(format!("no rough statistical limit at r = {} on the grid", cfg.linearity_r))
            }
        });
    }

    out.push(check_closedness(&s, &p, grid, cfg.coarse_step, cfg.fine_step)?);
    let lim = s.scan(SetKind::RoughStatLimit, &p, grid)?;
    out.push(check_convexity(&lim));
    out.push(check_perturbation(ctx, seq, &cfg.partner, &[cfg.partner_limit], cfg.r, &p)?);
    out.push(check_separation(&lim, &ctx.pnorm, cfg.r, &cfg.separation_m, &cfg.lambda_grid));
    out.push(check_closedness_of(SetKind::RoughCluster, &s, &p, grid, cfg.coarse_step, cfg.fine_step)?);

    let cluster0 = s.scan(SetKind::RoughCluster, &p.at(0.0), grid)?;
    let parts = cluster0
        .intervals
        .iter()
        .map(|iv| cluster_neighborhood_check(&s, super::snap(iv.midpoint()), &p, grid))
        .collect::<Result<Vec<_>>>()?;
    out.push(TheoremReport::merge(
        "cluster-neighborhood",
        "points within probabilistic distance r of an ordinary cluster point are rough cluster points",
        parts,
    ));

    for mode in [BallMode::Union, BallMode::Intersection, BallMode::StatConvergentBall, BallMode::Equality] {
        out.push(check_ball_characterizations(&s, &p, grid, mode)?);
    }
    Ok(out)
}
