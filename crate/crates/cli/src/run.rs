//! Executes a resolved configuration and assembles the report.

use std::cell::RefCell;
use std::fmt::Write as _;
use std::time::Instant;

use roughlim_core::analysis::run_suite;
use roughlim_core::density::{density_estimate, is_perfect_square};
use roughlim_core::pns::{check_pnorm_axioms, check_tnorm_axioms, AxiomReport};
use roughlim_core::{
    Context, DensityEstimate, Error as CoreError, Membership, SetEstimate, TheoremReport, Vector, Verdict,
};
use roughlim_core::analysis::RoughLimitDetail;
use serde::Serialize;
use thiserror::Error;

use crate::config::{Analysis, IndexSetSpec, RunConfig, SetName};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error("budget error: {0}")]
    Budget(String),
    #[error("output error: {0}")]
    Output(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Budget(_) => 3,
            RunError::Output(_) => 4,
        }
    }
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Budget { .. } => RunError::Budget(e.to_string()),
            other => RunError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub version: &'static str,
    pub config: RunConfig,
    pub results: Results,
    pub wall_time_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalValue {
    pub m: u64,
    pub n: u64,
    pub value: Vector,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Results {
    Eval {
        values: Vec<EvalValue>,
    },
    Density {
        estimate: DensityEstimate,
    },
    Member {
        verdict: Verdict,
        #[serde(skip_serializing_if = "Option::is_none")]
        membership: Option<Membership>,
        #[serde(skip_serializing_if = "Option::is_none")]
        rough_limit: Option<RoughLimitDetail>,
    },
    Scan {
        set: SetEstimate,
    },
    TheoremSuite {
        reports: Vec<TheoremReport>,
        axioms: Vec<AxiomReport>,
    },
}

pub fn execute(cfg: &RunConfig) -> Result<Report, RunError> {
    let start = Instant::now();
    let results = analyse(cfg)?;
    Ok(Report {
        schema: SCHEMA,
        version: env!("CARGO_PKG_VERSION"),
        config: cfg.clone(),
        results,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

fn context(cfg: &RunConfig) -> Result<Context, RunError> {
    Ok(Context::new(cfg.probabilistic_norm(), cfg.schedule.clone(), cfg.tolerances.0)?)
}

fn analyse(cfg: &RunConfig) -> Result<Results, RunError> {
    cfg.sequence.dimension()?;
    match &cfg.analysis {
        Analysis::Eval { indices } => {
            let values = indices
                .iter()
                .map(|&(m, n)| Ok(EvalValue { m, n, value: cfg.sequence.evaluate(m, n)? }))
                .collect::<Result<Vec<_>, CoreError>>()?;
            Ok(Results::Eval { values })
        }
        Analysis::Density { set } => Ok(Results::Density { estimate: density(cfg, set)? }),
        Analysis::Member { set, point, r, horizon } => {
            let s = context(cfg)?.sample(&cfg.sequence)?;
            let params = cfg.params(*r);
            let point = point.coords();
            match set {
                SetName::RoughStatLimit | SetName::RoughCluster => {
                    let m = if *set == SetName::RoughStatLimit {
                        s.member_rough_stat_limit(point, &params)?
                    } else {
                        s.member_rough_cluster(point, &params)?
                    };
                    Ok(Results::Member { verdict: m.verdict, membership: Some(m), rough_limit: None })
                }
                SetName::RoughLimit => {
                    let h = horizon.unwrap_or(cfg.schedule.last().0.min(cfg.schedule.last().1));
                    let d = s.member_rough_limit(point, &params, h)?;
                    Ok(Results::Member { verdict: d.verdict, membership: None, rough_limit: Some(d) })
                }
            }
        }
        Analysis::Scan { set, r } => {
            let s = context(cfg)?.sample(&cfg.sequence)?;
            Ok(Results::Scan { set: s.scan((*set).into(), &cfg.params(*r), &cfg.grid.0)? })
        }
        Analysis::TheoremSuite { r, options } => {
            let ctx = context(cfg)?;
            let reports = run_suite(&ctx, &cfg.sequence, &options.suite_config(cfg, *r))?;
            let t = cfg.tnorm();
            let axioms = vec![
                check_tnorm_axioms(&t, options.axiom_samples, cfg.seed),
                check_pnorm_axioms(&ctx.pnorm, &t, options.axiom_samples, cfg.seed),
            ];
            Ok(Results::TheoremSuite { reports, axioms })
        }
    }
}

fn density(cfg: &RunConfig, set: &IndexSetSpec) -> Result<DensityEstimate, RunError> {
    let (schedule, dcfg) = (&cfg.schedule, &cfg.tolerances.0);
    let est = match set {
        IndexSetSpec::SquarePairs {} => density_estimate(|m, n| is_perfect_square(m) && is_perfect_square(n), schedule, dcfg)?,
        IndexSetSpec::Parity {} => density_estimate(|m, n| (m + n) % 2 == 0, schedule, dcfg)?,
        IndexSetSpec::Image { map } => density_estimate(|m, n| map.image_contains(m, n), schedule, dcfg)?,
        IndexSetSpec::Exception { point, t, lambda } => {
            let pnorm = cfg.probabilistic_norm();
            if point.dim() != cfg.sequence.dimension()? {
                return Err(RunError::Config(format!(
                    "analysis.set.point: dimension {} does not match the sequence",
                    point.dim()
                )));
            }
            let failure = RefCell::new(None);
            let est = density_estimate(
                |m, n| match cfg.sequence.evaluate(m, n) {
                    Ok(x) => pnorm.eval_diff(x.coords(), point.coords(), t.0) <= 1.0 - lambda.0,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        false
                    }
                },
                schedule,
                dcfg,
            )?;
            if let Some(e) = failure.into_inner() {
                return Err(e.into());
            }
            est
        }
    };
    Ok(est)
}

/// Plot data for a scan: one row per grid point.
pub fn scan_csv(set: &SetEstimate) -> String {
    let mut out = String::from("beta,verdict,density_last\n");
    for p in &set.points {
        let v = match p.verdict {
            Verdict::Member => "member",
            Verdict::NonMember => "nonmember",
            Verdict::Indeterminate => "indeterminate",
        };
        let _ = writeln!(out, "{},{},{}", p.beta, v, p.density_last);
    }
    out
}
