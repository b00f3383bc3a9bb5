use serde::Serialize;

use super::{validate_lambda, RoughParams, Sampled, Verdict, Window};
use crate::density::{self, DensityEstimate, DensityVerdict, FamilyVerdict};
use crate::error::{Error, Result};
use crate::pns::ProbabilisticNorm;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairEstimate {
    pub eps: f64,
    pub lambda: f64,
    pub estimate: DensityEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Membership {
    pub verdict: Verdict,
    /// Worst final-prefix density across the `(ε, λ)` grid: the largest
    /// exception density for limit tests, the smallest inclusion density for
    /// cluster tests.
    pub density_last: f64,
    pub estimates: Vec<PairEstimate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundedVerdict {
    Bounded,
    Unbounded,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Boundedness {
    pub verdict: BoundedVerdict,
    /// Smallest ladder value `G` certifying boundedness.
    pub witness: Option<f64>,
    pub estimates: Vec<(f64, Vec<PairEstimate>)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoughLimitDetail {
    pub verdict: Verdict,
    pub horizon: u64,
    /// Per `(ε, λ)`: first `n0` after which no cell of the window violates
    /// the bound.
    pub clean_from: Vec<(f64, f64, u64)>,
    pub density_last: f64,
}

/// Thresholds `(t, 1 - λ)` for each `(ε, λ)` pair at roughness `r`.
fn thresholds(params: &RoughParams) -> Vec<(f64, f64)> {
    params.pairs().map(|(e, l)| (params.r + e, 1.0 - l)).collect()
}

impl Sampled {
    /// Counts, per `(ε, λ)`, the cells whose probabilistic distance to
    /// `point` at time `r + ε` is at most `1 - λ` (`inside = false`) or above
    /// it (`inside = true`).
    fn pair_estimates(&self, point: &[f64], params: &RoughParams, inside: bool) -> Result<Vec<PairEstimate>> {
        self.check_point(point)?;
        params.validate()?;
        let th = thresholds(params);
        let pn = self.ctx.pnorm;
        let w = &self.window;
        let est = density::estimate_family(&self.ctx.schedule, &self.ctx.density, th.len(), |i, j, hits| {
            let d = pn.base.distance(w.at(i, j), point);
            for (h, &(t, level)) in hits.iter_mut().zip(&th) {
                *h = (pn.eval_at_norm(d, t) > level) == inside;
            }
        })?;
        Ok(params
            .pairs()
            .zip(est)
            .map(|((eps, lambda), estimate)| PairEstimate { eps, lambda, estimate })
            .collect())
    }

    /// `point` is an r-statistical limit when every exception set
    /// `{(m, n) : ϑ(x_mn - point; r + ε) <= 1 - λ}` has density zero.
    pub fn member_rough_stat_limit(&self, point: &[f64], params: &RoughParams) -> Result<Membership> {
        let estimates = self.pair_estimates(point, params, false)?;
        let verdicts: Vec<DensityVerdict> = estimates.iter().map(|p| p.estimate.verdict).collect();
        let verdict = match density::combine(&verdicts) {
            FamilyVerdict::AllZero => Verdict::Member,
            FamilyVerdict::SomePositive => Verdict::NonMember,
            FamilyVerdict::Indeterminate => Verdict::Indeterminate,
        };
        let density_last = estimates.iter().map(|p| p.estimate.last()).fold(0.0, f64::max);
        Ok(Membership { verdict, density_last, estimates })
    }

    /// `point` is an r-statistical cluster point when every inclusion set
    /// `{(m, n) : ϑ(x_mn - point; r + ε) > 1 - λ}` has positive density.
    pub fn member_rough_cluster(&self, point: &[f64], params: &RoughParams) -> Result<Membership> {
        let estimates = self.pair_estimates(point, params, true)?;
        let verdicts = estimates.iter().map(|p| p.estimate.verdict);
        let verdict = if verdicts.clone().any(|v| v == DensityVerdict::Zero) {
            Verdict::NonMember
        } else if verdicts.clone().all(|v| v == DensityVerdict::Positive) {
            Verdict::Member
        } else {
            Verdict::Indeterminate
        };
        let density_last = estimates.iter().map(|p| p.estimate.last()).fold(1.0, f64::min);
        Ok(Membership { verdict, density_last, estimates })
    }

    /// Statistical convergence to `xi`: the rough statistical limit test
    /// with `r = 0`.
    pub fn is_stat_convergent(&self, xi: &[f64], eps_grid: &[f64], lambda_grid: &[f64]) -> Result<Membership> {
        let params = RoughParams::new(0.0, eps_grid.to_vec(), lambda_grid.to_vec())?;
        self.member_rough_stat_limit(xi, &params)
    }

    /// Statistical boundedness: some ladder value `G` makes every set
    /// `{(m, n) : ϑ(x_mn; G) <= 1 - λ}` density zero.
    pub fn is_stat_bounded(&self, lambda_grid: &[f64], ladder: &[f64]) -> Result<Boundedness> {
        validate_lambda(lambda_grid)?;
        if ladder.is_empty() || ladder.iter().any(|g| !(*g > 0.0 && g.is_finite())) {
            return Err(Error::invalid("G ladder must be nonempty and positive"));
        }
        if ladder.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("G ladder must be increasing"));
        }
        let pairs: Vec<(f64, f64)> =
            ladder.iter().flat_map(|&g| lambda_grid.iter().map(move |&l| (g, l))).collect();
        let pn = self.ctx.pnorm;
        let w = &self.window;
        let est = density::estimate_family(&self.ctx.schedule, &self.ctx.density, pairs.len(), |i, j, hits| {
            let n = pn.base.norm(w.at(i, j));
            for (h, &(g, l)) in hits.iter_mut().zip(&pairs) {
                *h = pn.eval_at_norm(n, g) <= 1.0 - l;
            }
        })?;
        let mut per_g: Vec<(f64, Vec<PairEstimate>)> = Vec::with_capacity(ladder.len());
        let mut iter = pairs.iter().zip(est);
        for &g in ladder {
            let row = iter
                .by_ref()
                .take(lambda_grid.len())
                .map(|(&(_, lambda), estimate)| PairEstimate { eps: g, lambda, estimate })
                .collect();
            per_g.push((g, row));
        }
        let all = |row: &[PairEstimate], v: DensityVerdict| row.iter().all(|p| p.estimate.verdict == v);
        let witness = per_g.iter().find(|(_, row)| all(row, DensityVerdict::Zero)).map(|(g, _)| *g);
        let unbounded = per_g
            .iter()
            .all(|(_, row)| row.iter().any(|p| p.estimate.verdict == DensityVerdict::Positive));
        let verdict = match (witness, unbounded) {
            (Some(_), _) => BoundedVerdict::Bounded,
            (None, true) => BoundedVerdict::Unbounded,
            (None, false) => BoundedVerdict::Indeterminate,
        };
        Ok(Boundedness { verdict, witness, estimates: per_g })
    }

    /// Rough convergence over the finite window `[1, horizon]²`.
    ///
    /// Member when, for every `(ε, λ)`, all violations of
    /// `ϑ(x_mn - point; r + ε) > 1 - λ` have `min(m, n) < horizon / 2`;
    /// non-member when for some pair a violation occurs with
    /// `min(m, n) > 3·horizon / 4`.
    pub fn member_rough_limit(&self, point: &[f64], params: &RoughParams, horizon: u64) -> Result<RoughLimitDetail> {
        self.check_point(point)?;
        params.validate()?;
        let (sm, sn) = self.ctx.schedule.last();
        if horizon < sm.max(sn) {
            return Err(Error::invalid(format!(
                "horizon {horizon} is below the largest schedule corner ({sm}, {sn})"
            )));
        }
        let owned;
        let w: &Window = if horizon <= self.window.rows && horizon <= self.window.cols {
            &self.window
        } else {
            owned = Window::materialize(&self.seq, horizon, horizon, self.ctx.density.budget)?;
            &owned
        };
        let th = thresholds(params);
        let pn: ProbabilisticNorm = self.ctx.pnorm;
        let mut depth = vec![0u64; th.len()];
        let mut violations = vec![0u64; th.len()];
        for i in 1..=horizon {
            for j in 1..=horizon {
                let d = pn.base.distance(w.at(i, j), point);
                for (k, &(t, level)) in th.iter().enumerate() {
                    if pn.eval_at_norm(d, t) <= level {
                        violations[k] += 1;
                        depth[k] = depth[k].max(i.min(j));
                    }
                }
            }
        }
        let clean_from: Vec<(f64, f64, u64)> =
            params.pairs().zip(&depth).map(|((e, l), &dp)| (e, l, dp + 1)).collect();
        let verdict = if clean_from.iter().all(|c| c.2 <= horizon / 2) {
            Verdict::Member
        } else if depth.iter().any(|&dp| 4 * dp > 3 * horizon) {
            Verdict::NonMember
        } else {
            Verdict::Indeterminate
        };
        let cells = (horizon * horizon) as f64;
        let density_last = violations.iter().map(|&v| v as f64 / cells).fold(0.0, f64::max);
        Ok(RoughLimitDetail { verdict, horizon, clean_from, density_last })
    }

    /// First cell of the window violating `ϑ(x_mn - point; t) > 1 - λ`.
    pub fn first_violation(&self, point: &[f64], t: f64, lambda: f64) -> Option<(u64, u64, Vec<f64>)> {
        let pn = self.ctx.pnorm;
        let w = &self.window;
        (1..=w.rows)
            .flat_map(|i| (1..=w.cols).map(move |j| (i, j)))
            .find(|&(i, j)| pn.eval_diff(w.at(i, j), point, t) <= 1.0 - lambda)
            .map(|(i, j)| (i, j, w.at(i, j).to_vec()))
    }

    /// Whether `ϑ(x_mn - y_mn; t) > 1 - λ` holds on every window cell, for
    /// every `λ` given; returns the first failing cell otherwise.
    pub fn pointwise_close(&self, other: &Sampled, t: f64, lambda_grid: &[f64]) -> Result<Option<(u64, u64, f64)>> {
        if self.window.dim != other.window.dim {
            return Err(Error::DimensionMismatch { expected: self.window.dim, found: other.window.dim });
        }
        validate_lambda(lambda_grid)?;
        let strictest = lambda_grid.iter().copied().fold(1.0, f64::min);
        let pn = self.ctx.pnorm;
        let (a, b) = (&self.window, &other.window);
        for i in 1..=a.rows.min(b.rows) {
            for j in 1..=a.cols.min(b.cols) {
                let v = pn.eval_diff(a.at(i, j), b.at(i, j), t);
                if v <= 1.0 - strictest {
                    return Ok(Some((i, j, v)));
                }
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::Context;
    use crate::sequences::DoubleSequence;

    fn dirac(seq: &DoubleSequence) -> Sampled {
        Context::dirac().sample(seq).unwrap()
    }

    #[test]
    fn example31_limit_membership() {
        let s = dirac(&DoubleSequence::Example31);
        assert_eq!(s.member_rough_stat_limit(&[0.0], &RoughParams::with_r(2.0)).unwrap().verdict, Verdict::Member);
        assert_eq!(s.member_rough_stat_limit(&[0.0], &RoughParams::with_r(0.5)).unwrap().verdict, Verdict::NonMember);
    }

    #[test]
    fn example32_boundary_point_is_limit() {
        let s = dirac(&DoubleSequence::Example32);
        let m = s.member_rough_stat_limit(&[1.0], &RoughParams::with_r(1.0)).unwrap();
        assert_eq!(m.verdict, Verdict::Member);
        // every square-square cell except (1, 1) is an exception
        assert!((m.density_last - 483.0 / 262_144.0).abs() < 1e-15);
    }

    #[test]
    fn cluster_points_of_example31() {
        let s = dirac(&DoubleSequence::Example31);
        assert_eq!(s.member_rough_cluster(&[1.0], &RoughParams::with_r(0.0)).unwrap().verdict, Verdict::Member);
        assert_eq!(s.member_rough_cluster(&[1.5], &RoughParams::with_r(0.5)).unwrap().verdict, Verdict::Member);
        assert_eq!(s.member_rough_cluster(&[5.0], &RoughParams::with_r(1.0)).unwrap().verdict, Verdict::NonMember);
    }

    #[test]
    fn statistical_convergence() {
        let eps = crate::analysis::DEFAULT_EPS_GRID;
        let lam = crate::analysis::DEFAULT_LAMBDA_GRID;
        let conv = |seq: DoubleSequence, xi: f64| dirac(&seq).is_stat_convergent(&[xi], &eps, &lam).unwrap().verdict;
        assert_eq!(conv(DoubleSequence::Example32, 0.0), Verdict::Member);
        assert_eq!(conv(DoubleSequence::Alternating, 0.0), Verdict::NonMember);
        assert_eq!(conv(DoubleSequence::StatConvergentTo { xi: 2.5 }, 2.5), Verdict::Member);
    }

    #[test]
    fn statistical_boundedness() {
        let lam = crate::analysis::DEFAULT_LAMBDA_GRID;
        let ladder = crate::analysis::DEFAULT_G_LADDER;
        let b = dirac(&DoubleSequence::Example32).is_stat_bounded(&lam, &ladder).unwrap();
        assert_eq!((b.verdict, b.witness), (BoundedVerdict::Bounded, Some(1.0)));
        let b = dirac(&DoubleSequence::Drift).is_stat_bounded(&lam, &[1.0, 10.0, 100.0]).unwrap();
        assert_eq!(b.verdict, BoundedVerdict::Unbounded);
        // {m + n >= 1000} has 325 cells in the 512 x 512 window
        let b = dirac(&DoubleSequence::Drift).is_stat_bounded(&lam, &ladder).unwrap();
        assert_eq!((b.verdict, b.witness), (BoundedVerdict::Bounded, Some(1000.0)));
        let b = dirac(&DoubleSequence::constant(0.0)).is_stat_bounded(&lam, &ladder).unwrap();
        assert_eq!(b.witness, Some(1.0));
        let b = dirac(&DoubleSequence::Example31).is_stat_bounded(&lam, &ladder).unwrap();
        assert_eq!(b.witness, Some(10.0));
        assert!(dirac(&DoubleSequence::Drift).is_stat_bounded(&lam, &[10.0, 1.0]).is_err());
    }

    #[test]
    fn rough_limit_examples() {
        let p = RoughParams::with_r(2.0);
        let r = |seq: DoubleSequence, b: f64| dirac(&seq).member_rough_limit(&[b], &p, 512).unwrap().verdict;
        assert_eq!(r(DoubleSequence::constant(0.3), 0.3), Verdict::Member);
        assert_eq!(r(DoubleSequence::Example31, 0.0), Verdict::NonMember);
        assert_eq!(r(DoubleSequence::Alternating, 0.0), Verdict::Member);
        let s = dirac(&DoubleSequence::Alternating);
        assert!(s.member_rough_limit(&[0.0], &p, 100).is_err());
        // a larger horizon is sampled on demand
        assert_eq!(s.member_rough_limit(&[0.0], &p, 600).unwrap().verdict, Verdict::Member);
    }

    #[test]
    fn point_dimension_is_checked() {
        let s = dirac(&DoubleSequence::Alternating);
        assert!(s.member_rough_stat_limit(&[0.0, 1.0], &RoughParams::with_r(1.0)).is_err());
        assert!(s.member_rough_stat_limit(&[f64::NAN], &RoughParams::with_r(1.0)).is_err());
    }
}
