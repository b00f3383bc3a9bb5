//! Deliberately broken operations for exercising the axiom checkers.

use super::{BaseNorm, PNormOp, TNormOp};

/// `min(a + b, 1)`: commutative and monotone, but 1 is not a unit.
#[derive(Debug, Clone, Copy, Default)]
pub struct SaturatingSum;

impl TNormOp for SaturatingSum {
    fn combine(&self, a: f64, b: f64) -> f64 {
        (a + b).min(1.0)
    }

    fn name(&self) -> String {
        "SaturatingSum".into()
    }
}

/// `t / (t + |x|^2)`: fails the scaling axiom.
#[derive(Debug, Clone, Copy, Default)]
pub struct SquaredRatio;

impl PNormOp for SquaredRatio {
    fn eval_coords(&self, x: &[f64], t: f64) -> f64 {
        if t > 0.0 {
            let n = BaseNorm::Euclidean.norm(x);
            t / (t + n * n)
        } else {
            0.0
        }
    }

    fn name(&self) -> String {
        "SquaredRatio".into()
    }
}

/// `(t + 1) / (t + 1 + |x|)` for `t >= 0`: nonzero at `t = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LeakyRatio;

impl PNormOp for LeakyRatio {
    fn eval_coords(&self, x: &[f64], t: f64) -> f64 {
        if t >= 0.0 {
            (t + 1.0) / (t + 1.0 + BaseNorm::Euclidean.norm(x))
        } else {
            0.0
        }
    }

    fn name(&self) -> String {
        "LeakyRatio".into()
    }
}
