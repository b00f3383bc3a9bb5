//! Double sequences `(m, n) -> x_mn` built from a catalog and combinators.

use serde::{Deserialize, Serialize};

use crate::density::{self, is_perfect_square, isqrt, DensityConfig, DensityEstimate, DensityVerdict, PrefixSchedule};
use crate::error::{Error, Result};
use crate::pns::Vector;

/// Expression tree describing a double sequence.
///
/// Serialized as JSON objects tagged by `"kind"`; unknown kinds and fields
/// are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeqRepr", into = "SeqRepr")]
pub enum DoubleSequence {
    /// `(-1)^(m+n)`, except `m·n` when both indices are perfect squares.
    Example31,
    /// `m·n` when both indices are perfect squares, else 0.
    Example32,
    /// `(-1)^(m+n)`.
    Alternating,
    Constant { value: Vector },
    /// `m·n` on square-square indices, `base` elsewhere.
    SpikesOnSquares { base: f64 },
    /// `m + n`; not statistically bounded.
    Drift,
    /// `xi` everywhere except `m·n` on square-square indices.
    StatConvergentTo { xi: f64 },
    Sum { a: Box<DoubleSequence>, b: Box<DoubleSequence> },
    Scale { alpha: f64, a: Box<DoubleSequence> },
    Subsequence { a: Box<DoubleSequence>, map: IndexMap },
}

// Wire form with empty struct variants in place of unit variants.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
enum SeqRepr {
    Example31 {},
    Example32 {},
    Alternating {},
    Constant { value: Vector },
    SpikesOnSquares { base: f64 },
    Drift {},
    StatConvergentTo { xi: f64 },
    Sum { a: Box<DoubleSequence>, b: Box<DoubleSequence> },
    Scale { alpha: f64, a: Box<DoubleSequence> },
    Subsequence { a: Box<DoubleSequence>, map: IndexMap },
}

impl TryFrom<SeqRepr> for DoubleSequence {
    type Error = Error;

    fn try_from(r: SeqRepr) -> Result<Self> {
        let seq = match r {
            SeqRepr::Example31 {} => DoubleSequence::Example31,
            SeqRepr::Example32 {} => DoubleSequence::Example32,
            SeqRepr::Alternating {} => DoubleSequence::Alternating,
            SeqRepr::Constant { value } => DoubleSequence::Constant { value },
            SeqRepr::SpikesOnSquares { base } => DoubleSequence::SpikesOnSquares { base },
            SeqRepr::Drift {} => DoubleSequence::Drift,
            SeqRepr::StatConvergentTo { xi } => DoubleSequence::StatConvergentTo { xi },
            SeqRepr::Sum { a, b } => DoubleSequence::Sum { a, b },
            SeqRepr::Scale { alpha, a } => DoubleSequence::Scale { alpha, a },
            SeqRepr::Subsequence { a, map } => DoubleSequence::Subsequence { a, map },
        };
        seq.dimension()?;
        Ok(seq)
    }
}

impl From<DoubleSequence> for SeqRepr {
    fn from(s: DoubleSequence) -> Self {
        match s {
            DoubleSequence::Example31 => SeqRepr::Example31 {},
            DoubleSequence::Example32 => SeqRepr::Example32 {},
            DoubleSequence::Alternating => SeqRepr::Alternating {},
            DoubleSequence::Constant { value } => SeqRepr::Constant { value },
            DoubleSequence::SpikesOnSquares { base } => SeqRepr::SpikesOnSquares { base },
            DoubleSequence::Drift => SeqRepr::Drift {},
            DoubleSequence::StatConvergentTo { xi } => SeqRepr::StatConvergentTo { xi },
            DoubleSequence::Sum { a, b } => SeqRepr::Sum { a, b },
            DoubleSequence::Scale { alpha, a } => SeqRepr::Scale { alpha, a },
            DoubleSequence::Subsequence { a, map } => SeqRepr::Subsequence { a, map },
        }
    }
}

impl DoubleSequence {
    pub fn constant(v: f64) -> Self {
        DoubleSequence::Constant { value: Vector::scalar(v).expect("finite constant") }
    }

    pub fn sum(a: DoubleSequence, b: DoubleSequence) -> Self {
        DoubleSequence::Sum { a: Box::new(a), b: Box::new(b) }
    }

    pub fn scale(alpha: f64, a: DoubleSequence) -> Self {
        DoubleSequence::Scale { alpha, a: Box::new(a) }
    }

    pub fn subsequence(a: DoubleSequence, map: IndexMap) -> Self {
        DoubleSequence::Subsequence { a: Box::new(a), map }
    }

    /// Catalog entries used by the property and acceptance suites.
    pub fn catalog() -> Vec<(&'static str, DoubleSequence)> {
        vec![
            ("Example31", DoubleSequence::Example31),
            ("Example32", DoubleSequence::Example32),
            ("Alternating", DoubleSequence::Alternating),
            ("Constant(0.7)", DoubleSequence::constant(0.7)),
            ("SpikesOnSquares(-0.5)", DoubleSequence::SpikesOnSquares { base: -0.5 }),
            ("Drift", DoubleSequence::Drift),
            ("StatConvergentTo(2.5)", DoubleSequence::StatConvergentTo { xi: 2.5 }),
        ]
    }

    /// Validates the tree and returns its dimension.
    pub fn dimension(&self) -> Result<usize> {
        use DoubleSequence::*;
        match self {
            Example31 | Example32 | Alternating | Drift => Ok(1),
            SpikesOnSquares { base: v } | StatConvergentTo { xi: v } => {
                if v.is_finite() {
                    Ok(1)
                } else {
                    Err(Error::Domain { what: "catalog parameter", value: *v })
                }
            }
            Constant { value } => Ok(value.dim()),
            Sum { a, b } => {
                let (da, db) = (a.dimension()?, b.dimension()?);
                if da == db {
                    Ok(da)
                } else {
                    Err(Error::DimensionMismatch { expected: da, found: db })
                }
            }
            Scale { alpha, a } => {
                if !alpha.is_finite() {
                    return Err(Error::Domain { what: "scale factor", value: *alpha });
                }
                a.dimension()
            }
            Subsequence { a, .. } => a.dimension(),
        }
    }

    pub fn evaluate(&self, m: u64, n: u64) -> Result<Vector> {
        let dim = self.dimension()?;
        let mut out = vec![0.0; dim];
        self.evaluate_into(m, n, &mut out)?;
        Vector::new(out)
    }

    /// Writes `x_mn` into `out`, whose length must equal the dimension.
    pub fn evaluate_into(&self, m: u64, n: u64, out: &mut [f64]) -> Result<()> {
        if m == 0 || n == 0 {
            return Err(Error::invalid(format!("indices start at 1, got ({m}, {n})")));
        }
        self.eval_rec(m, n, out)
    }

    fn eval_rec(&self, m: u64, n: u64, out: &mut [f64]) -> Result<()> {
        use DoubleSequence::*;
        let spike = || is_perfect_square(m) && is_perfect_square(n);
        let sign = || if (m + n).is_multiple_of(2) { 1.0 } else { -1.0 };
        let product = || m as f64 * n as f64;
        match self {
            Example31 => out[0] = if spike() { product() } else { sign() },
            Example32 => out[0] = if spike() { product() } else { 0.0 },
            Alternating => out[0] = sign(),
            Constant { value } => out.copy_from_slice(value.coords()),
            SpikesOnSquares { base: c } | StatConvergentTo { xi: c } => {
                out[0] = if spike() { product() } else { *c }
            }
            Drift => out[0] = m as f64 + n as f64,
            Sum { a, b } => {
                a.eval_rec(m, n, out)?;
                if let [o] = out {
                    let mut t = [0.0];
                    b.eval_rec(m, n, &mut t)?;
                    *o += t[0];
                } else {
                    let mut t = vec![0.0; out.len()];
                    b.eval_rec(m, n, &mut t)?;
                    out.iter_mut().zip(&t).for_each(|(o, v)| *o += v);
                }
            }
            Scale { alpha, a } => {
                a.eval_rec(m, n, out)?;
                out.iter_mut().for_each(|o| *o *= alpha);
            }
            Subsequence { a, map } => {
                let (rm, rn) = map.indices(m, n).ok_or(Error::IndexOverflow { m, n })?;
                a.eval_rec(rm, rn, out)?;
            }
        }
        Ok(())
    }
}

/// Strictly increasing reindexing `(j, k) -> (row(j), col(k))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "IndexMapRepr", into = "IndexMapRepr")]
pub enum IndexMap {
    Identity,
    /// `j -> j²` in both coordinates.
    Squares,
    /// `j -> j`-th positive non-square in both coordinates.
    ComplementOfSquares,
    /// Integer polynomials, coefficients in ascending degree.
    Custom { row: Polynomial, col: Polynomial },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
enum IndexMapRepr {
    Identity {},
    Squares {},
    ComplementOfSquares {},
    Custom { row: Vec<i64>, col: Vec<i64> },
}

impl TryFrom<IndexMapRepr> for IndexMap {
    type Error = Error;

    fn try_from(r: IndexMapRepr) -> Result<Self> {
        Ok(match r {
            IndexMapRepr::Identity {} => IndexMap::Identity,
            IndexMapRepr::Squares {} => IndexMap::Squares,
            IndexMapRepr::ComplementOfSquares {} => IndexMap::ComplementOfSquares,
            IndexMapRepr::Custom { row, col } => {
                IndexMap::Custom { row: Polynomial::new(row)?, col: Polynomial::new(col)? }
            }
        })
    }
}

impl From<IndexMap> for IndexMapRepr {
    fn from(m: IndexMap) -> Self {
        match m {
            IndexMap::Identity => IndexMapRepr::Identity {},
            IndexMap::Squares => IndexMapRepr::Squares {},
            IndexMap::ComplementOfSquares => IndexMapRepr::ComplementOfSquares {},
            IndexMap::Custom { row, col } => IndexMapRepr::Custom { row: row.0, col: col.0 },
        }
    }
}

/// Integer polynomial that is strictly increasing on the positive integers
/// and maps 1 to a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial(Vec<i64>);

impl Polynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Result<Self> {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::invalid("index polynomial must have degree at least 1"));
        }
        let p = Polynomial(coeffs);
        if p.eval_wide(1) < 1 {
            return Err(Error::invalid("index polynomial must map 1 to a positive index"));
        }
        // forward difference p(k+1) - p(k) checked up to its Cauchy bound
        let q: Vec<i128> = p.forward_difference();
        let lead = *q.last().unwrap();
        if lead <= 0 {
            return Err(Error::invalid("index polynomial must be strictly increasing"));
        }
        let bound = 1 + q[..q.len() - 1].iter().map(|c| (c.abs() + lead - 1) / lead).max().unwrap_or(0);
        if bound > 1_000_000 {
            return Err(Error::invalid("index polynomial coefficients are too large"));
        }
        for k in 1..=bound as i64 + 1 {
            if p.eval_wide(k + 1) <= p.eval_wide(k) {
                return Err(Error::invalid(format!("index polynomial is not increasing at {k}")));
            }
        }
        Ok(p)
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }

    fn eval_wide(&self, k: i64) -> i128 {
        self.0.iter().rev().fold(0i128, |acc, &c| acc.saturating_mul(k as i128).saturating_add(c as i128))
    }

    fn forward_difference(&self) -> Vec<i128> {
        // coefficients of p(k+1) - p(k) via binomial expansion
        let d = self.0.len() - 1;
        let mut q = vec![0i128; d];
        for (deg, &c) in self.0.iter().enumerate() {
            for (low, slot) in q.iter_mut().enumerate().take(deg) {
                *slot += c as i128 * binomial(deg as u32, low as u32);
            }
        }
        while q.len() > 1 && *q.last().unwrap() == 0 {
            q.pop();
        }
        q
    }

    pub fn eval(&self, k: u64) -> Option<u64> {
        let k = i64::try_from(k).ok()?;
        let mut acc: i128 = 0;
        for &c in self.0.iter().rev() {
            acc = acc.checked_mul(k as i128)?.checked_add(c as i128)?;
        }
        u64::try_from(acc).ok()
    }

    /// True when `i` is a value of the polynomial on the positive integers.
    fn is_value(&self, i: u64) -> bool {
        // p(k) >= k for increasing integer p with p(1) >= 1
        let (mut lo, mut hi) = (1u64, i);
        while lo <= hi {
            let mid = lo + (hi - lo) / 2;
            match self.eval(mid) {
                Some(v) if v == i => return true,
                Some(v) if v < i => lo = mid + 1,
                _ => {
                    if mid == 0 {
                        break;
                    }
                    hi = mid - 1
                }
            }
        }
        false
    }
}

fn binomial(n: u32, k: u32) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i as i128 + 1))
}

/// `k`-th positive integer that is not a perfect square.
pub fn nth_non_square(k: u64) -> Option<u64> {
    let r = isqrt(k);
    // k + round(sqrt(k))
    let rounded = if k > r * r + r { r + 1 } else { r };
    k.checked_add(rounded)
}

impl IndexMap {
    /// `(j, k) -> (j + 1, k)`: skips one row, so the image has density one
    /// and its complement decays like `1/M`.
    pub fn drop_first_row() -> Self {
        IndexMap::Custom {
            row: Polynomial::new(vec![1, 1]).expect("valid"),
            col: Polynomial::new(vec![0, 1]).expect("valid"),
        }
    }

    pub fn row(&self, j: u64) -> Option<u64> {
        match self {
            IndexMap::Identity => Some(j),
            IndexMap::Squares => j.checked_mul(j),
            IndexMap::ComplementOfSquares => nth_non_square(j),
            IndexMap::Custom { row, .. } => row.eval(j),
        }
    }

    pub fn col(&self, k: u64) -> Option<u64> {
        match self {
            IndexMap::Custom { col, .. } => col.eval(k),
            _ => self.row(k),
        }
    }

    pub fn indices(&self, j: u64, k: u64) -> Option<(u64, u64)> {
        Some((self.row(j)?, self.col(k)?))
    }

    /// Whether `(i, j)` lies in the image index set.
    pub fn image_contains(&self, i: u64, j: u64) -> bool {
        match self {
            IndexMap::Identity => true,
            IndexMap::Squares => is_perfect_square(i) && is_perfect_square(j),
            IndexMap::ComplementOfSquares => !is_perfect_square(i) && !is_perfect_square(j),
            IndexMap::Custom { row, col } => row.is_value(i) && col.is_value(j),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DenseVerdict {
    One,
    Zero,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsequenceDensity {
    pub verdict: DenseVerdict,
    /// Density estimate of the image index set.
    pub estimate: DensityEstimate,
}

/// Estimates the double density of the image of `map` and decides whether
/// the induced subsequence is dense (density one).
pub fn is_dense_subsequence(
    map: &IndexMap,
    schedule: &PrefixSchedule,
    cfg: &DensityConfig,
) -> Result<SubsequenceDensity> {
    let estimate = density::density_estimate(|i, j| map.image_contains(i, j), schedule, cfg)?;
    let verdict = match (estimate.verdict, estimate.complement().verdict) {
        (_, DensityVerdict::Zero) => DenseVerdict::One,
        (DensityVerdict::Zero, _) => DenseVerdict::Zero,
        _ => DenseVerdict::Indeterminate,
    };
    Ok(SubsequenceDensity { verdict, estimate })
}
