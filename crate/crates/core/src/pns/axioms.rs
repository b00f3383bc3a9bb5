use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{BaseNorm, PNormOp, TNormOp};

/// Tolerance applied to every floating-point axiom comparison.
pub const AXIOM_TOL: f64 = 1e-12;

/// Fixed probe values tried before the pseudorandom sample.
const UNIT_PROBES: [f64; 5] = [0.5, 0.25, 0.75, 0.0, 1.0];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomOutcome {
    pub axiom: String,
    pub passed: bool,
    pub trials: usize,
    /// First counterexample found, if any.
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub subject: String,
    pub samples: usize,
    pub seed: u64,
    pub outcomes: Vec<AxiomOutcome>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn outcome(&self, axiom: &str) -> Option<&AxiomOutcome> {
        self.outcomes.iter().find(|o| o.axiom == axiom)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }
}

struct Tally {
    axiom: &'static str,
    trials: usize,
    witness: Option<String>,
}

impl Tally {
    fn new(axiom: &'static str) -> Self {
        Tally { axiom, trials: 0, witness: None }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn finish(self) -> AxiomOutcome {
        AxiomOutcome {
            axiom: self.axiom.to_string(),
            passed: self.witness.is_none(),
            trials: self.trials,
            witness: self.witness,
        }
    }
}

/// Checks unit element, commutativity, monotonicity and associativity on
/// the probe grid followed by `samples` pseudorandom draws from `[0,1]`.
pub fn check_tnorm_axioms<T: TNormOp + ?Sized>(op: &T, samples: usize, seed: u64) -> AxiomReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unit = Tally::new("unit");
    let mut comm = Tally::new("commutativity");
    let mut mono = Tally::new("monotonicity");
    let mut assoc = Tally::new("associativity");

    let mut quads: Vec<[f64; 4]> = Vec::with_capacity(UNIT_PROBES.len().pow(2) + samples);
    for &a in &UNIT_PROBES {
        for &b in &UNIT_PROBES {
            quads.push([a, b, a * b, (a + b) / 2.0]);
        }
    }
    quads.extend((0..samples).map(|_| rng.gen::<[f64; 4]>()));

    for &[a, b, c, d] in &quads {
        let got = op.combine(a, 1.0);
        unit.record((got - a).abs() <= AXIOM_TOL, || format!("a={a}, b=1: a*1 = {got}, expected {a}"));

        let (ab, ba) = (op.combine(a, b), op.combine(b, a));
        comm.record((ab - ba).abs() <= AXIOM_TOL, || format!("a={a}, b={b}: {ab} != {ba}"));

        // order the pairs so that hi >= lo componentwise
        let (a_hi, c_lo) = (a.max(c), a.min(c));
        let (b_hi, d_lo) = (b.max(d), b.min(d));
        let (hi, lo) = (op.combine(a_hi, b_hi), op.combine(c_lo, d_lo));
        mono.record(hi + AXIOM_TOL >= lo, || {
            format!("({a_hi}, {b_hi}) -> {hi} < ({c_lo}, {d_lo}) -> {lo}")
        });

        let left = op.combine(a, op.combine(b, c));
        let right = op.combine(op.combine(a, b), c);
        assoc.record((left - right).abs() <= AXIOM_TOL, || {
            format!("a={a}, b={b}, c={c}: a*(b*c) = {left}, (a*b)*c = {right}")
        });
    }

    AxiomReport {
        subject: op.name(),
        samples,
        seed,
        outcomes: vec![unit.finish(), comm.finish(), mono.finish(), assoc.finish()],
    }
}

fn sample_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect()
}

fn fmt_coords(x: &[f64]) -> String {
    match x {
        [v] => format!("{v}"),
        _ => format!("{x:?}"),
    }
}

/// Checks the four probabilistic-norm axioms, plus the distribution
/// function shape (nondecreasing in `t`, tending to 1), on sampled vectors
/// of dimension 1 to 3.
///
/// The zero-identity axiom is read literally: `eval(theta, t) = 1` for every
/// sampled `t > 0`, and each sampled `x != theta` has some sampled `t > 0`
/// with `eval(x, t) < 1`.
pub fn check_pnorm_axioms<P, T>(pnorm: &P, tnorm: &T, samples: usize, seed: u64) -> AxiomReport
where
    P: PNormOp + ?Sized,
    T: TNormOp + ?Sized,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut at_zero = Tally::new("zero_at_nonpositive_time");
    let mut identity = Tally::new("identity_of_zero");
    let mut scaling = Tally::new("scaling");
    let mut triangle = Tally::new("triangle");
    let mut distribution = Tally::new("distribution_function");

    for _ in 0..samples.max(1) {
        let dim = rng.gen_range(1..=3);
        let x = sample_vector(&mut rng, dim);
        let y = sample_vector(&mut rng, dim);
        let norm_x = BaseNorm::Euclidean.norm(&x).max(1e-3);
        let t = rng.gen_range(1e-6..20.0);
        let s = rng.gen_range(1e-6..20.0);
        let neg_t = -rng.gen_range(0.0..20.0);

        for tt in [0.0, neg_t] {
            let v = pnorm.eval_coords(&x, tt);
            at_zero.record(v == 0.0, || format!("x={}, t={tt}: eval = {v}", fmt_coords(&x)));
        }

        let theta = vec![0.0; dim];
        let v = pnorm.eval_coords(&theta, t);
        identity.record(v == 1.0, || format!("x=theta, t={t}: eval = {v}, expected 1"));
        let probes = [norm_x / 2.0, norm_x * rng.gen_range(0.01..2.0), t];
        let below_one = probes.iter().any(|&tt| pnorm.eval_coords(&x, tt) < 1.0);
        identity.record(below_one, || {
            format!("x={} != theta but eval(x, t) = 1 at every probe t in {probes:?}", fmt_coords(&x))
        });

        let mut alpha: f64 = rng.gen_range(-5.0..5.0);
        if alpha.abs() < 1e-3 {
            alpha = 1.0;
        }
        let ax: Vec<f64> = x.iter().map(|c| alpha * c).collect();
        let (lhs, rhs) = (pnorm.eval_coords(&ax, t), pnorm.eval_coords(&x, t / alpha.abs()));
        scaling.record((lhs - rhs).abs() <= AXIOM_TOL, || {
            format!("x={}, alpha={alpha}, t={t}: eval(alpha x, t) = {lhs}, eval(x, t/|alpha|) = {rhs}", fmt_coords(&x))
        });

        let xy: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let lhs = pnorm.eval_coords(&xy, s + t);
        let rhs = tnorm.combine(pnorm.eval_coords(&x, t), pnorm.eval_coords(&y, s));
        triangle.record(lhs + AXIOM_TOL >= rhs, || {
            format!(
                "x={}, y={}, t={t}, s={s}: eval(x+y, s+t) = {lhs} < {rhs}",
                fmt_coords(&x),
                fmt_coords(&y)
            )
        });

        let (lo, hi) = (t.min(s), t.max(s));
        let (v_lo, v_hi) = (pnorm.eval_coords(&x, lo), pnorm.eval_coords(&x, hi));
        let far = pnorm.eval_coords(&x, 1e6 * (1.0 + norm_x));
        let in_range = [v_lo, v_hi, far].iter().all(|v| (0.0..=1.0).contains(v));
        distribution.record(in_range && v_lo <= v_hi + AXIOM_TOL && far >= 1.0 - 1e-6, || {
            format!("x={}: eval({lo}) = {v_lo}, eval({hi}) = {v_hi}, eval(far) = {far}", fmt_coords(&x))
        });
    }

    AxiomReport {
        subject: format!("{} with {}", pnorm.name(), tnorm.name()),
        samples,
        seed,
        outcomes: vec![
            at_zero.finish(),
            identity.finish(),
            scaling.finish(),
            triangle.finish(),
            distribution.finish(),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pns::testing::{LeakyRatio, SaturatingSum, SquaredRatio};
    use crate::pns::{ProbabilisticNorm, TNorm};

    #[test]
    fn builtin_tnorms_pass() {
        for t in TNorm::ALL {
            let rep = check_tnorm_axioms(&t, 1000, 42);
            assert!(rep.all_passed(), "{rep:?}");
            assert_eq!(rep.outcomes.len(), 4);
        }
    }

    #[test]
    fn saturating_sum_fails_unit_at_half() {
        let rep = check_tnorm_axioms(&SaturatingSum, 1000, 42);
        let unit = rep.outcome("unit").unwrap();
        assert!(!unit.passed);
        assert_eq!(unit.witness.as_deref(), Some("a=0.5, b=1: a*1 = 1, expected 0.5"));
        // the operation is commutative, so only some axioms fail
        assert!(rep.outcome("commutativity").unwrap().passed);
    }

    #[test]
    fn builtin_pnorms_pass() {
        for p in [ProbabilisticNorm::menger(), ProbabilisticNorm::dirac()] {
            let rep = check_pnorm_axioms(&p, &TNorm::Min, 1000, 7);
            assert!(rep.all_passed(), "{rep:?}");
        }
    }

    #[test]
    fn broken_pnorms_fail_with_witness() {
        let rep = check_pnorm_axioms(&SquaredRatio, &TNorm::Min, 200, 7);
        let sc = rep.outcome("scaling").unwrap();
        assert!(!sc.passed && sc.witness.is_some());
        let rep = check_pnorm_axioms(&LeakyRatio, &TNorm::Min, 200, 7);
        assert!(!rep.outcome("zero_at_nonpositive_time").unwrap().passed);
    }

    #[test]
    fn report_is_deterministic_in_seed() {
        let a = check_pnorm_axioms(&SquaredRatio, &TNorm::Product, 100, 3);
        let b = check_pnorm_axioms(&SquaredRatio, &TNorm::Product, 100, 3);
        assert_eq!(a, b);
    }
}
