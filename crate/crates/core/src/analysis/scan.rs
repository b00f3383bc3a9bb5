use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Grid, RoughParams, Sampled, Verdict};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SetKind {
    RoughStatLimit,
    RoughLimit,
    RoughCluster,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        (self.lo + self.hi) / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointVerdict {
    pub beta: f64,
    pub verdict: Verdict,
    pub density_last: f64,
}

/// Grid scan of a 1D limit or cluster set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SetEstimate {
    pub kind: SetKind,
    pub params: RoughParams,
    pub grid: Grid,
    pub points: Vec<PointVerdict>,
    /// Maximal runs of member grid points; each endpoint is uncertain by
    /// `uncertainty` in either direction.
    pub intervals: Vec<Interval>,
    pub uncertainty: f64,
    pub indeterminate: Vec<f64>,
}

impl SetEstimate {
    pub fn from_points(kind: SetKind, params: RoughParams, grid: Grid, points: Vec<PointVerdict>) -> Self {
        let members: Vec<bool> = points.iter().map(|p| p.verdict == Verdict::Member).collect();
        let intervals = runs(&members)
            .into_iter()
            .map(|(a, b)| Interval { lo: points[a].beta, hi: points[b].beta })
            .collect();
        let indeterminate =
            points.iter().filter(|p| p.verdict == Verdict::Indeterminate).map(|p| p.beta).collect();
        SetEstimate { kind, params, intervals, uncertainty: grid.step / 2.0, indeterminate, grid, points }
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn members(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().filter(|p| p.verdict == Verdict::Member).map(|p| p.beta)
    }

    pub fn verdict_at(&self, beta: f64) -> Option<Verdict> {
        let i = ((beta - self.grid.lo) / self.grid.step).round();
        if i < 0.0 {
            return None;
        }
        self.points.get(i as usize).filter(|p| (p.beta - beta).abs() < 1e-9).map(|p| p.verdict)
    }
}

/// Maximal runs of `true` as inclusive index pairs.
pub(crate) fn runs(flags: &[bool]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, &f) in flags.iter().enumerate() {
        match (f, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((s, i - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, flags.len() - 1));
    }
    out
}

impl Sampled {
    /// Membership verdict for a single point of a 1D set.
    pub fn point_verdict(&self, kind: SetKind, params: &RoughParams, beta: f64) -> Result<PointVerdict> {
        let point = [beta];
        let (verdict, density_last) = match kind {
            SetKind::RoughStatLimit => {
                let m = self.member_rough_stat_limit(&point, params)?;
                (m.verdict, m.density_last)
            }
            SetKind::RoughCluster => {
                let m = self.member_rough_cluster(&point, params)?;
                (m.verdict, m.density_last)
            }
            SetKind::RoughLimit => {
                let (m, n) = self.context().schedule.last();
                let d = self.member_rough_limit(&point, params, m.max(n))?;
                (d.verdict, d.density_last)
            }
        };
        Ok(PointVerdict { beta, verdict, density_last })
    }

    /// Tests every grid point and extracts maximal member intervals.
    ///
    /// Points are evaluated in parallel; the result equals sequential
    /// evaluation. Scans are memoized per `(kind, params, grid)`.
    pub fn scan(&self, kind: SetKind, params: &RoughParams, grid: &Grid) -> Result<SetEstimate> {
        if self.dim() != 1 {
            return Err(Error::invalid(format!("set scans are 1D only; sequence has dimension {}", self.dim())));
        }
        params.validate()?;
        grid.validate()?;
        let key = (kind, params.key(), [grid.lo.to_bits(), grid.hi.to_bits(), grid.step.to_bits()]);
        if let Some(hit) = self.scans.lock().expect("scan cache").get(&key) {
            return Ok(hit.clone());
        }
        let points = grid
            .points()
            .into_par_iter()
            .map(|b| self.point_verdict(kind, params, b))
            .collect::<Result<Vec<_>>>()?;
        let est = SetEstimate::from_points(kind, params.clone(), *grid, points);
        self.scans.lock().expect("scan cache").insert(key, est.clone());
        Ok(est)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::Context;
    use crate::sequences::{DoubleSequence, IndexMap};

    #[test]
    fn runs_extraction() {
        assert_eq!(runs(&[false, true, true, false, true]), vec![(1, 2), (4, 4)]);
        assert_eq!(runs(&[true, true]), vec![(0, 1)]);
        assert!(runs(&[false, false]).is_empty());
    }

    #[test]
    fn example32_scans() {
        let ctx = Context::dirac();
        let grid = Grid::new(-2.0, 2.0, 0.05).unwrap();
        let s = ctx.sample(&DoubleSequence::Example32).unwrap();
        let est = s.scan(SetKind::RoughStatLimit, &RoughParams::with_r(1.0), &grid).unwrap();
        assert_eq!(est.intervals, vec![Interval { lo: -1.0, hi: 1.0 }]);
        assert!(est.indeterminate.is_empty());
        assert_eq!(est.verdict_at(1.0), Some(Verdict::Member));
        assert_eq!(est.verdict_at(1.05), Some(Verdict::NonMember));

        let sub = ctx.sample(&DoubleSequence::subsequence(DoubleSequence::Example32, IndexMap::Squares)).unwrap();
        let est = sub.scan(SetKind::RoughStatLimit, &RoughParams::with_r(1.0), &grid).unwrap();
        assert!(est.is_empty());
        assert!(est.points.iter().all(|p| p.verdict == Verdict::NonMember));
    }

    #[test]
    fn scans_are_memoized_and_reproducible() {
        let ctx = Context::dirac();
        let grid = Grid::new(-2.0, 2.0, 0.1).unwrap();
        let s = ctx.sample(&DoubleSequence::Example31).unwrap();
        let a = s.scan(SetKind::RoughCluster, &RoughParams::with_r(0.5), &grid).unwrap();
        let b = s.scan(SetKind::RoughCluster, &RoughParams::with_r(0.5), &grid).unwrap();
        let fresh = ctx.sample(&DoubleSequence::Example31).unwrap();
        let c = fresh.scan(SetKind::RoughCluster, &RoughParams::with_r(0.5), &grid).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.intervals.len(), 2);
    }

    #[test]
    fn rough_limit_scan_of_alternating() {
        let ctx = Context::dirac();
        let grid = Grid::new(-2.0, 2.0, 0.25).unwrap();
        let s = ctx.sample(&DoubleSequence::Alternating).unwrap();
        let est = s.scan(SetKind::RoughLimit, &RoughParams::with_r(2.0), &grid).unwrap();
        assert_eq!(est.intervals, vec![Interval { lo: -1.0, hi: 1.0 }]);
    }

    #[test]
    fn multi_dimensional_scan_rejected() {
        let seq = DoubleSequence::Constant { value: crate::pns::Vector::new(vec![0.0, 0.0]).unwrap() };
        let s = Context::dirac().sample(&seq).unwrap();
        let grid = Grid::new(-1.0, 1.0, 0.5).unwrap();
        assert!(s.scan(SetKind::RoughStatLimit, &RoughParams::with_r(1.0), &grid).is_err());
        // pointwise membership still works in 2D
        assert_eq!(
            s.member_rough_stat_limit(&[0.5, 0.5], &RoughParams::with_r(1.0)).unwrap().verdict,
            Verdict::Member
        );
    }
}
