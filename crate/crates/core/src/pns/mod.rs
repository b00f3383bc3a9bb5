//! t-norms, probabilistic norms and probabilistic balls.
//!
//! A probabilistic norm assigns to each vector `x` a distribution function
//! `t -> eval(x, t)` read as "the probability that the norm of `x` is below
//! `t`". Both built-in norms are functions of a classical base norm, which
//! lets the analysis layer evaluate them from a precomputed distance.

mod axioms;
pub mod testing;

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use axioms::{check_pnorm_axioms, check_tnorm_axioms, AxiomOutcome, AxiomReport};

/// A binary operation on `[0, 1]`, evaluated without domain checks.
///
/// Implemented by [`TNorm`] and by the deliberately broken operations in
/// [`testing`], so that the axiom checker can be pointed at either.
pub trait TNormOp {
    fn combine(&self, a: f64, b: f64) -> f64;

    fn name(&self) -> String;
}

/// A candidate probabilistic norm evaluated on raw coordinates.
pub trait PNormOp {
    fn eval_coords(&self, x: &[f64], t: f64) -> f64;

    fn name(&self) -> String;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TNorm {
    Min,
    Product,
    Lukasiewicz,
}

impl TNorm {
    pub const ALL: [TNorm; 3] = [TNorm::Min, TNorm::Product, TNorm::Lukasiewicz];

    /// Applies the t-norm, rejecting arguments outside `[0, 1]`.
    pub fn apply(self, a: f64, b: f64) -> Result<f64> {
        check_unit("t-norm argument", a)?;
        check_unit("t-norm argument", b)?;
        Ok(self.combine(a, b))
    }
}

impl TNormOp for TNorm {
    #[inline]
    fn combine(&self, a: f64, b: f64) -> f64 {
        match self {
            TNorm::Min => a.min(b),
            TNorm::Product => a * b,
            TNorm::Lukasiewicz => (a + b - 1.0).max(0.0),
        }
    }

    fn name(&self) -> String {
        format!("{self:?}")
    }
}

fn check_unit(what: &'static str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Domain { what, value: v })
    }
}

/// A finite real vector. The zero element is the all-zero vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("vector must have dimension at least 1"));
        }
        if let Some(&bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::Domain { what: "vector coordinate", value: bad });
        }
        Ok(Vector(coords))
    }

    pub fn scalar(v: f64) -> Result<Self> {
        Vector::new(vec![v])
    }

    pub fn zero(dim: usize) -> Self {
        Vector(vec![0.0; dim.max(1)])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub fn scale(&self, alpha: f64) -> Vector {
        Vector(self.0.iter().map(|c| alpha * c).collect())
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    fn check_dim(&self, other: &Vector) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() })
        }
    }

    pub fn checked_add(&self, other: &Vector) -> Result<Vector> {
        self.check_dim(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Vector) -> Result<Vector> {
        self.check_dim(other)?;
        Ok(self - other)
    }
}

impl<'a> Add<&'a Vector> for &'a Vector {
    type Output = Vector;

    /// Panics on dimension mismatch; use [`Vector::checked_add`] otherwise.
    fn add(self, rhs: &'a Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a Vector> for &'a Vector {
    type Output = Vector;

    fn sub(self, rhs: &'a Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;

    fn neg(self) -> Vector {
        self.scale(-1.0)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [v] = self.0.as_slice() {
            return write!(f, "{v}");
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Scalar(f64),
            Coords(Vec<f64>),
        }
        let coords = match Repr::deserialize(de)? {
            Repr::Scalar(v) => vec![v],
            Repr::Coords(c) => c,
        };
        Vector::new(coords).map_err(serde::de::Error::custom)
    }
}

/// The classical norm underlying a probabilistic norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum BaseNorm {
    #[default]
    Euclidean,
    Sup,
}

impl BaseNorm {
    #[inline]
    pub fn norm(self, x: &[f64]) -> f64 {
        match self {
            BaseNorm::Euclidean => {
                if let [v] = x {
                    v.abs()
                } else {
                    x.iter().map(|c| c * c).sum::<f64>().sqrt()
                }
            }
            BaseNorm::Sup => x.iter().fold(0.0, |m, c| m.max(c.abs())),
        }
    }

    /// Norm of `x - y` without allocating.
    #[inline]
    pub fn distance(self, x: &[f64], y: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), y.len());
        match (self, x, y) {
            (_, [a], [b]) => (a - b).abs(),
            (BaseNorm::Euclidean, _, _) => {
                x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
            }
            (BaseNorm::Sup, _, _) => x.iter().zip(y).fold(0.0, |m, (a, b)| m.max((a - b).abs())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PNormKind {
    /// `t / (t + |x|)` for `t > 0`, else 0.
    MengerRatio,
    /// `1` if `t > |x|`, else 0. Embeds the classical normed space exactly.
    Dirac,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbabilisticNorm {
    pub kind: PNormKind,
    #[serde(default)]
    pub base: BaseNorm,
}

impl ProbabilisticNorm {
    pub const fn new(kind: PNormKind, base: BaseNorm) -> Self {
        ProbabilisticNorm { kind, base }
    }

    pub const fn dirac() -> Self {
        Self::new(PNormKind::Dirac, BaseNorm::Euclidean)
    }

    pub const fn menger() -> Self {
        Self::new(PNormKind::MengerRatio, BaseNorm::Euclidean)
    }

    pub fn eval(&self, x: &Vector, t: f64) -> Result<f64> {
        if !t.is_finite() {
            return Err(Error::Domain { what: "probabilistic norm time", value: t });
        }
        Ok(self.eval_at_norm(self.base.norm(x.coords()), t))
    }

    /// Evaluates the norm given the classical norm value `|x|`.
    #[inline]
    pub fn eval_at_norm(&self, norm: f64, t: f64) -> f64 {
        match self.kind {
            PNormKind::MengerRatio => {
                if t > 0.0 {
                    t / (t + norm)
                } else {
                    0.0
                }
            }
            PNormKind::Dirac => {
                if t > norm {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// `eval(x - y, t)` on raw coordinates.
    #[inline]
    pub fn eval_diff(&self, x: &[f64], y: &[f64], t: f64) -> f64 {
        self.eval_at_norm(self.base.distance(x, y), t)
    }

    /// True when ball membership does not depend on the level.
    pub fn level_independent(&self) -> bool {
        self.kind == PNormKind::Dirac
    }
}

impl PNormOp for ProbabilisticNorm {
    fn eval_coords(&self, x: &[f64], t: f64) -> f64 {
        self.eval_at_norm(self.base.norm(x), t)
    }

    fn name(&self) -> String {
        format!("{:?}/{:?}", self.kind, self.base)
    }
}

/// Probabilistic ball `{y : eval(y - center, radius) > 1 - level}` (open) or
/// with `>=` (closed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vector,
    pub level: f64,
    pub radius: f64,
    pub closed: bool,
}

impl Ball {
    pub fn new(center: Vector, level: f64, radius: f64, closed: bool) -> Result<Self> {
        check_level(level)?;
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::Domain { what: "ball radius", value: radius });
        }
        Ok(Ball { center, level, radius, closed })
    }

    pub fn closed(center: Vector, level: f64, radius: f64) -> Result<Self> {
        Ball::new(center, level, radius, true)
    }

    pub fn open(center: Vector, level: f64, radius: f64) -> Result<Self> {
        Ball::new(center, level, radius, false)
    }

    pub fn contains(&self, pnorm: &ProbabilisticNorm, y: &Vector) -> Result<bool> {
        check_level(self.level)?;
        self.center.check_dim(y)?;
        Ok(self.contains_coords(pnorm, y.coords()))
    }

    #[inline]
    pub(crate) fn contains_coords(&self, pnorm: &ProbabilisticNorm, y: &[f64]) -> bool {
        ball_test(pnorm, y, self.center.coords(), self.radius, self.level, self.closed)
    }
}

#[inline]
pub(crate) fn ball_test(
    pnorm: &ProbabilisticNorm,
    y: &[f64],
    center: &[f64],
    radius: f64,
    level: f64,
    closed: bool,
) -> bool {
    let v = pnorm.eval_diff(y, center, radius);
    if closed {
        v >= 1.0 - level
    } else {
        v > 1.0 - level
    }
}

pub(crate) fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain { what: "level lambda", value: level })
    }
}
