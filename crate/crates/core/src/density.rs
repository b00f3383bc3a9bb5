//! Exhaustive counting of index sets over prefix rectangles.
//!
//! The double natural density of `K` is the limit of
//! `|K ∩ [1..M]×[1..N]| / (M·N)`. The limit is discretized by a
//! [`PrefixSchedule`] of nested rectangles and turned into a three-valued
//! [`DensityVerdict`]; existence of the limit is never asserted.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Nested prefix-rectangle corners `(M, N)`, strictly increasing in both
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(u64, u64)>", into = "Vec<(u64, u64)>")]
pub struct PrefixSchedule(Vec<(u64, u64)>);

impl PrefixSchedule {
    pub fn new(corners: Vec<(u64, u64)>) -> Result<Self> {
        if corners.is_empty() {
            return Err(Error::invalid("prefix schedule must be nonempty"));
        }
        if corners.iter().any(|&(m, n)| m == 0 || n == 0) {
            return Err(Error::invalid("prefix corners must be positive"));
        }
        if corners.windows(2).any(|w| w[1].0 <= w[0].0 || w[1].1 <= w[0].1) {
            return Err(Error::invalid("prefix corners must be strictly increasing in both coordinates"));
        }
        Ok(PrefixSchedule(corners))
    }

    /// Square corners `(s, s)` for each size.
    pub fn squares(sizes: &[u64]) -> Result<Self> {
        PrefixSchedule::new(sizes.iter().map(|&s| (s, s)).collect())
    }

    pub fn corners(&self) -> &[(u64, u64)] {
        &self.0
    }

    pub fn last(&self) -> (u64, u64) {
        *self.0.last().expect("schedule is nonempty")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl Default for PrefixSchedule {
    fn default() -> Self {
        PrefixSchedule(vec![(64, 64), (128, 128), (256, 256), (512, 512)])
    }
}

impl TryFrom<Vec<(u64, u64)>> for PrefixSchedule {
    type Error = Error;

    fn try_from(v: Vec<(u64, u64)>) -> Result<Self> {
        PrefixSchedule::new(v)
    }
}

impl From<PrefixSchedule> for Vec<(u64, u64)> {
    fn from(s: PrefixSchedule) -> Self {
        s.0
    }
}

/// Verdict thresholds and the per-call counting budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DensityConfig {
    pub zero_tol: f64,
    pub pos_tol: f64,
    pub budget: u64,
}

impl Default for DensityConfig {
    fn default() -> Self {
        DensityConfig { zero_tol: 0.005, pos_tol: 0.05, budget: DEFAULT_BUDGET }
    }
}

impl DensityConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.zero_tol >= 0.0 && self.zero_tol < self.pos_tol && self.pos_tol <= 1.0;
        if !ok {
            return Err(Error::invalid(format!(
                "tolerances must satisfy 0 <= zero_tol < pos_tol <= 1 (got {} and {})",
                self.zero_tol, self.pos_tol
            )));
        }
        if self.budget == 0 {
            return Err(Error::invalid("counting budget must be positive"));
        }
        Ok(())
    }

    pub(crate) fn check_budget(&self, m: u64, n: u64) -> Result<()> {
        let cells = m as u128 * n as u128;
        if cells > self.budget as u128 {
            Err(Error::Budget { cells, budget: self.budget })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DensityVerdict {
    Zero,
    Positive,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyVerdict {
    AllZero,
    SomePositive,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub corners: Vec<(u64, u64)>,
    pub counts: Vec<u64>,
    pub estimates: Vec<f64>,
    pub verdict: DensityVerdict,
    pub zero_tol: f64,
    pub pos_tol: f64,
}

impl DensityEstimate {
    pub fn from_counts(schedule: &PrefixSchedule, counts: Vec<u64>, cfg: &DensityConfig) -> Self {
        debug_assert_eq!(counts.len(), schedule.len());
        let estimates: Vec<f64> = schedule
            .corners()
            .iter()
            .zip(&counts)
            .map(|(&(m, n), &c)| c as f64 / (m as f64 * n as f64))
            .collect();
        let verdict = verdict_for(&estimates, cfg);
        DensityEstimate {
            corners: schedule.corners().to_vec(),
            counts,
            estimates,
            verdict,
            zero_tol: cfg.zero_tol,
            pos_tol: cfg.pos_tol,
        }
    }

    /// Estimate for the complementary index set over the same schedule.
    pub fn complement(&self) -> Self {
        let counts: Vec<u64> =
            self.corners.iter().zip(&self.counts).map(|(&(m, n), &c)| m * n - c).collect();
        let cfg = DensityConfig { zero_tol: self.zero_tol, pos_tol: self.pos_tol, budget: u64::MAX };
        let schedule = PrefixSchedule(self.corners.clone());
        DensityEstimate::from_counts(&schedule, counts, &cfg)
    }

    pub fn last(&self) -> f64 {
        *self.estimates.last().expect("schedule is nonempty")
    }
}

fn verdict_for(estimates: &[f64], cfg: &DensityConfig) -> DensityVerdict {
    let tail = &estimates[estimates.len().saturating_sub(2)..];
    if tail.iter().all(|&e| e <= cfg.zero_tol) {
        DensityVerdict::Zero
    } else if estimates[estimates.len() - 1] >= cfg.pos_tol {
        DensityVerdict::Positive
    } else {
        DensityVerdict::Indeterminate
    }
}

/// `|{(i, j) : i <= m, j <= n, pred(i, j)}|` by exhaustive enumeration.
pub fn prefix_count<P>(pred: P, m: u64, n: u64, budget: u64) -> Result<u64>
where
    P: Fn(u64, u64) -> bool,
{
    if m == 0 || n == 0 {
        return Err(Error::invalid("prefix corner must be positive"));
    }
    let cells = m as u128 * n as u128;
    if cells > budget as u128 {
        return Err(Error::Budget { cells, budget });
    }
    let mut count = 0;
    for i in 1..=m {
        for j in 1..=n {
            count += pred(i, j) as u64;
        }
    }
    Ok(count)
}

pub fn density_estimate<P>(pred: P, schedule: &PrefixSchedule, cfg: &DensityConfig) -> Result<DensityEstimate>
where
    P: Fn(u64, u64) -> bool,
{
    let mut out = estimate_family(schedule, cfg, 1, |i, j, hits| hits[0] = pred(i, j))?;
    Ok(out.pop().expect("one member"))
}

/// Estimates `members` index sets in a single pass over the largest prefix
/// rectangle.
///
/// `classify(i, j, hits)` sets `hits[k]` when `(i, j)` belongs to set `k`;
/// the slice is cleared before each call. Each returned estimate equals what
/// [`density_estimate`] would give for that set alone.
pub fn estimate_family<F>(
    schedule: &PrefixSchedule,
    cfg: &DensityConfig,
    members: usize,
    mut classify: F,
) -> Result<Vec<DensityEstimate>>
where
    F: FnMut(u64, u64, &mut [bool]),
{
    let (big_m, big_n) = schedule.last();
    cfg.check_budget(big_m, big_n)?;
    let bands = schedule.len();
    let corners = schedule.corners();
    // smallest schedule index whose rectangle contains the row (column)
    let band_of = |k: u64, pick: fn(&(u64, u64)) -> u64| corners.iter().position(|c| pick(c) >= k).unwrap();
    let col_band: Vec<usize> = (1..=big_n).map(|j| band_of(j, |c| c.1)).collect();

    let mut per_band = vec![0u64; members * bands];
    let mut hits = vec![false; members];
    for i in 1..=big_m {
        let rb = band_of(i, |c| c.0);
        for (j, &cb) in (1..=big_n).zip(&col_band) {
            let band = rb.max(cb);
            hits.iter_mut().for_each(|h| *h = false);
            classify(i, j, &mut hits);
            for (k, &h) in hits.iter().enumerate() {
                per_band[k * bands + band] += h as u64;
            }
        }
    }

    Ok((0..members)
        .map(|k| {
            let counts: Vec<u64> = per_band[k * bands..(k + 1) * bands]
                .iter()
                .scan(0, |acc, &c| {
                    *acc += c;
                    Some(*acc)
                })
                .collect();
            DensityEstimate::from_counts(schedule, counts, cfg)
        })
        .collect())
}

/// Quantifies a family of verdicts: all zero, some positive, or neither.
pub fn combine(verdicts: &[DensityVerdict]) -> FamilyVerdict {
    if verdicts.contains(&DensityVerdict::Positive) {
        FamilyVerdict::SomePositive
    } else if !verdicts.is_empty() && verdicts.iter().all(|&v| v == DensityVerdict::Zero) {
        FamilyVerdict::AllZero
    } else {
        FamilyVerdict::Indeterminate
    }
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

pub fn is_perfect_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> DensityConfig {
        DensityConfig::default()
    }

    fn square_pairs(i: u64, j: u64) -> bool {
        is_perfect_square(i) && is_perfect_square(j)
    }

    #[test]
    fn isqrt_exact_near_boundaries() {
        for r in [0u64, 1, 2, 3, 1000, 4_294_967_295] {
            assert_eq!(isqrt(r * r), r);
            if r > 0 {
                assert_eq!(isqrt(r * r - 1), r - 1);
            }
        }
        assert_eq!(isqrt(u64::MAX), 4_294_967_295);
    }

    #[test]
    fn prefix_count_examples() {
        assert_eq!(prefix_count(square_pairs, 100, 100, DEFAULT_BUDGET).unwrap(), 100);
        assert_eq!(prefix_count(|_, _| false, 37, 91, DEFAULT_BUDGET).unwrap(), 0);
        assert_eq!(prefix_count(|_, _| true, 64, 64, DEFAULT_BUDGET).unwrap(), 4096);
    }

    #[test]
    fn prefix_count_budget() {
        let err = prefix_count(|_, _| true, 1000, 1000, 999_999).unwrap_err();
        assert_eq!(err, Error::Budget { cells: 1_000_000, budget: 999_999 });
    }

    #[test]
    fn square_pair_density_is_zero() {
        let est = density_estimate(square_pairs, &PrefixSchedule::default(), &cfg()).unwrap();
        assert_eq!(est.verdict, DensityVerdict::Zero);
        assert_eq!(est.counts, vec![64, 121, 256, 484]);
        assert!((est.last() - 484.0 / 262_144.0).abs() < 1e-15);
    }

    #[test]
    fn parity_density_is_half() {
        let est = density_estimate(|i, j| (i + j) % 2 == 0, &PrefixSchedule::default(), &cfg()).unwrap();
        assert_eq!(est.verdict, DensityVerdict::Positive);
        assert!(est.estimates.iter().all(|&e| e == 0.5));
    }

    #[test]
    fn finite_set_is_zero() {
        let est = density_estimate(|i, j| (i, j) == (1, 1) || (i, j) == (2, 2), &PrefixSchedule::default(), &cfg())
            .unwrap();
        assert_eq!(est.verdict, DensityVerdict::Zero);
    }

    #[test]
    fn indeterminate_between_tolerances() {
        // one row out of 64 at the last corner: 1/64 ≈ 0.0156
        let s = PrefixSchedule::squares(&[32, 64]).unwrap();
        let est = density_estimate(|i, _| i == 1, &s, &cfg()).unwrap();
        assert_eq!(est.verdict, DensityVerdict::Indeterminate);
    }

    #[test]
    fn family_matches_individual_estimates() {
        let s = PrefixSchedule::new(vec![(3, 5), (20, 21), (50, 40)]).unwrap();
        let preds: [fn(u64, u64) -> bool; 3] =
            [square_pairs, |i, j| (i * j) % 3 == 0, |i, j| i + 2 * j < 30];
        let fam = estimate_family(&s, &cfg(), 3, |i, j, h| {
            for (k, p) in preds.iter().enumerate() {
                h[k] = p(i, j);
            }
        })
        .unwrap();
        for (k, p) in preds.iter().enumerate() {
            let single = density_estimate(p, &s, &cfg()).unwrap();
            assert_eq!(fam[k], single);
            for (idx, &(m, n)) in s.corners().iter().enumerate() {
                assert_eq!(single.counts[idx], prefix_count(p, m, n, DEFAULT_BUDGET).unwrap());
            }
        }
    }

    #[test]
    fn complement_sums_to_one() {
        let est = density_estimate(square_pairs, &PrefixSchedule::default(), &cfg()).unwrap();
        let c = est.complement();
        for (a, b) in est.estimates.iter().zip(&c.estimates) {
            assert_eq!(a + b, 1.0);
        }
        assert_eq!(c.verdict, DensityVerdict::Positive);
    }

    #[test]
    fn combine_rules() {
        use DensityVerdict::*;
        assert_eq!(combine(&[Zero, Zero, Zero]), FamilyVerdict::AllZero);
        assert_eq!(combine(&[Zero, Positive]), FamilyVerdict::SomePositive);
        assert_eq!(combine(&[Zero, Indeterminate]), FamilyVerdict::Indeterminate);
        assert_eq!(combine(&[Indeterminate, Positive]), FamilyVerdict::SomePositive);
    }

    #[test]
    fn schedule_validation() {
        assert!(PrefixSchedule::new(vec![]).is_err());
        assert!(PrefixSchedule::new(vec![(4, 4), (4, 8)]).is_err());
        assert!(PrefixSchedule::new(vec![(0, 4)]).is_err());
        let s: PrefixSchedule = serde_json::from_str("[[2,3],[4,5]]").unwrap();
        assert_eq!(s.last(), (4, 5));
        assert!(serde_json::from_str::<PrefixSchedule>("[[4,4],[2,2]]").is_err());
    }

    #[test]
    fn tolerance_validation() {
        assert!(DensityConfig::default().validate().is_ok());
        let bad = DensityConfig { zero_tol: 0.1, pos_tol: 0.05, ..DensityConfig::default() };
        assert!(bad.validate().is_err());
    }
}
