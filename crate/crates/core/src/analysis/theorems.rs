//! Numerical checks of the structural results about rough statistical limit
//! sets and rough statistical cluster sets.
//!
//! Each check returns a [`TheoremReport`]. A failing report always carries
//! at least one [`Witness`]; a check whose hypotheses could not be
//! established reports [`TheoremVerdict::Indeterminate`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::scan::runs;
use super::{Context, Grid, Interval, RoughParams, Sampled, SetEstimate, SetKind, Verdict, DEFAULT_G_LADDER};
use crate::error::{Error, Result};
use crate::pns::{ball_test, ProbabilisticNorm};
use crate::sequences::{is_dense_subsequence, DenseVerdict, DoubleSequence, IndexMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremVerdict {
    Pass,
    Fail,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StatementForm {
    /// The statement as published.
    Literal,
    /// Roughness algebra adjusted to what the triangle inequality supports.
    Corrected,
    /// The hypothesis was refuted, so the implication holds vacuously.
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub label: String,
    pub values: BTreeMap<String, f64>,
}

impl Witness {
    pub fn new(label: impl Into<String>, values: &[(&str, f64)]) -> Self {
        Witness {
            label: label.into(),
            values: values.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    fn intervals(label: impl Into<String>, sets: &[(&str, &[Interval])]) -> Self {
        let mut values = BTreeMap::new();
        for (name, ivs) in sets {
            values.insert(format!("{name}.count"), ivs.len() as f64);
            for (k, iv) in ivs.iter().enumerate() {
                values.insert(format!("{name}[{k}].lo"), iv.lo);
                values.insert(format!("{name}[{k}].hi"), iv.hi);
            }
        }
        Witness { label: label.into(), values }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub statement: String,
    pub form: StatementForm,
    pub verdict: TheoremVerdict,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

impl TheoremReport {
    fn new(theorem: &str, statement: &str, form: StatementForm) -> Self {
        TheoremReport {
            theorem: theorem.to_string(),
            statement: statement.to_string(),
            form,
            verdict: TheoremVerdict::Pass,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn fail(mut self, w: Witness) -> Self {
        self.verdict = TheoremVerdict::Fail;
        self.witnesses.push(w);
        self
    }

    fn indeterminate(mut self, note: impl Into<String>) -> Self {
        self.verdict = TheoremVerdict::Indeterminate;
        self.notes.push(note.into());
        self
    }

    fn vacuous(mut self, note: impl Into<String>) -> Self {
        self.form = StatementForm::Vacuous;
        self.verdict = TheoremVerdict::Pass;
        self.notes.push(note.into());
        self
    }

    pub(crate) fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    fn with_witness(mut self, w: Witness) -> Self {
        self.witnesses.push(w);
        self
    }

    /// Fail dominates, then indeterminate; pass only when every part passes.
    pub(crate) fn merge(theorem: &str, statement: &str, parts: Vec<TheoremReport>) -> Self {
        let mut out = TheoremReport::new(theorem, statement, StatementForm::Literal);
        if parts.is_empty() {
            return out.indeterminate("nothing to check");
        }
        let worst = if parts.iter().any(|p| p.verdict == TheoremVerdict::Fail) {
            TheoremVerdict::Fail
        } else if parts.iter().all(|p| p.verdict == TheoremVerdict::Pass) {
            TheoremVerdict::Pass
        } else {
            TheoremVerdict::Indeterminate
        };
        out.form = parts[0].form;
        for p in parts {
            out.witnesses.extend(p.witnesses);
            out.notes.extend(p.notes);
        }
        out.verdict = worst;
        out
    }
}

fn grid_tol(step: f64) -> f64 {
    step * (1.0 + 1e-6)
}

/// Describes the first disagreement between two interval lists when
/// endpoints may differ by `tol`.
fn interval_mismatch(a: &[Interval], b: &[Interval], tol: f64) -> Option<String> {
    if a.len() != b.len() {
        return Some(format!("{} intervals vs {}", a.len(), b.len()));
    }
    a.iter().zip(b).enumerate().find_map(|(k, (x, y))| {
        let off = (x.lo - y.lo).abs().max((x.hi - y.hi).abs());
        (off > tol).then(|| format!("interval {k}: [{}, {}] vs [{}, {}]", x.lo, x.hi, y.lo, y.hi))
    })
}

/// Intervals of grid points inside the union (`all = false`) or the
/// intersection (`all = true`) of closed balls around `centers`.
fn ball_intervals(pnorm: &ProbabilisticNorm, centers: &[f64], level: f64, radius: f64, grid: &Grid, all: bool) -> Vec<Interval> {
    let points = grid.points();
    let flags: Vec<bool> = points
        .iter()
        .map(|&y| {
            let inside = |c: &f64| ball_test(pnorm, &[y], &[*c], radius, level, true);
            if all {
                centers.iter().all(inside)
            } else {
                centers.iter().any(inside)
            }
        })
        .collect();
    runs(&flags).into_iter().map(|(a, b)| Interval { lo: points[a], hi: points[b] }).collect()
}

/// Member points of a limit set form one contiguous run.
///
/// Runs of at most two indeterminate points between members are ignored.
pub fn check_convexity(set: &SetEstimate) -> TheoremReport {
    let rep = TheoremReport::new(
        "limit-set-convex",
        "the rough statistical limit set is convex (one interval in 1D)",
        StatementForm::Literal,
    );
    let rep = if set.kind == SetKind::RoughStatLimit {
        rep
    } else {
        rep.note(format!("input set kind is {:?}", set.kind))
    };
    let idx: Vec<usize> = (0..set.points.len()).filter(|&i| set.points[i].verdict == Verdict::Member).collect();
    let (Some(&first), Some(&last)) = (idx.first(), idx.last()) else {
        return rep.note("empty set is convex");
    };
    let mut unresolved = false;
    let mut i = first;
    while i < last {
        if set.points[i].verdict == Verdict::Member {
            i += 1;
            continue;
        }
        let start = i;
        while set.points[i].verdict != Verdict::Member {
            i += 1;
        }
        let gap = &set.points[start..i];
        if gap.iter().any(|p| p.verdict == Verdict::NonMember) {
            return rep.fail(Witness::new(
                "gap between member runs",
                &[
                    ("left_member", set.points[start - 1].beta),
                    ("gap_lo", gap[0].beta),
                    ("gap_hi", gap[gap.len() - 1].beta),
                    ("right_member", set.points[i].beta),
                ],
            ));
        }
        if gap.len() > 2 {
            unresolved = true;
        }
    }
    if unresolved {
        rep.indeterminate("wide indeterminate gap between member runs")
    } else {
        rep
    }
}

/// Grid-refinement stability as the computable proxy for closedness of the
/// rough statistical limit set.
pub fn check_closedness(s: &Sampled, params: &RoughParams, range: &Grid, coarse_step: f64, fine_step: f64) -> Result<TheoremReport> {
    check_closedness_of(SetKind::RoughStatLimit, s, params, range, coarse_step, fine_step)
}

/// Closedness proxy for any set kind: interval endpoints move by at most
/// `coarse_step` under refinement, and every coarse endpoint, together with
/// its inward fine-step neighbour, is retested as a member.
pub fn check_closedness_of(
    kind: SetKind,
    s: &Sampled,
    params: &RoughParams,
    range: &Grid,
    coarse_step: f64,
    fine_step: f64,
) -> Result<TheoremReport> {
    if !(fine_step > 0.0 && fine_step < coarse_step) {
        return Err(Error::invalid(format!("need 0 < fine_step < coarse_step, got {fine_step} and {coarse_step}")));
    }
    let (id, what) = match kind {
        SetKind::RoughCluster => ("cluster-set-closed", "the rough statistical cluster set is closed"),
        SetKind::RoughLimit => ("rough-limit-set-closed", "the rough limit set is closed"),
        SetKind::RoughStatLimit => ("limit-set-closed", "the rough statistical limit set is closed"),
    };
    let mut rep = TheoremReport::new(id, what, StatementForm::Literal);
    let coarse = s.scan(kind, params, &range.with_step(coarse_step))?;
    let fine = s.scan(kind, params, &range.with_step(fine_step))?;
    if let Some(msg) = interval_mismatch(&coarse.intervals, &fine.intervals, grid_tol(coarse_step)) {
        return Ok(rep
            .fail(Witness::intervals("endpoints unstable under refinement", &[("coarse", &coarse.intervals), ("fine", &fine.intervals)]))
            .note(msg));
    }
    let mut undecided = false;
    for iv in &coarse.intervals {
        let mut probes = vec![iv.lo, iv.hi];
        if iv.hi - iv.lo >= fine_step {
            probes.push(super::snap(iv.lo + fine_step));
            probes.push(super::snap(iv.hi - fine_step));
        }
        for b in probes {
            match s.point_verdict(kind, params, b)?.verdict {
                Verdict::Member => {}
                Verdict::NonMember => {
                    return Ok(rep.fail(Witness::new("endpoint not retained", &[("beta", b), ("lo", iv.lo), ("hi", iv.hi)])));
                }
                Verdict::Indeterminate => undecided = true,
            }
        }
        if iv.lo <= range.lo || iv.hi >= range.hi {
            rep = rep.note("an interval touches the scan range; the set may extend beyond it");
        }
    }
    rep = rep.with_witness(Witness::intervals("refined intervals", &[("coarse", &coarse.intervals), ("fine", &fine.intervals)]));
    Ok(if undecided { rep.indeterminate("an endpoint retest was indeterminate") } else { rep })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinearityMode {
    Literal,
    Corrected,
}

/// Inputs of the sum/scalar-multiple check.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearityCase {
    pub a: DoubleSequence,
    pub b: DoubleSequence,
    pub beta_a: Vec<f64>,
    pub beta_b: Vec<f64>,
    pub r_a: f64,
    pub r_b: f64,
    pub alpha: f64,
}

/// Sum and scalar multiple of rough statistical limits.
///
/// Literal form: `a + b` has limit `beta_a + beta_b` and `alpha·a` has limit
/// `alpha·beta_a`, both at the same roughness. Corrected form: the sum at
/// roughness `r_a + r_b`, the multiple at `|alpha|·r_a`.
pub fn check_linearity(ctx: &Context, case: &LinearityCase, mode: LinearityMode, params: &RoughParams) -> Result<TheoremReport> {
    let (id, form) = match mode {
        LinearityMode::Literal => ("linearity-literal", StatementForm::Literal),
        LinearityMode::Corrected => ("linearity-corrected", StatementForm::Corrected),
    };
    let rep = TheoremReport::new(id, "sums and nonzero multiples of rough statistical limits are limits", form);
    let sa = ctx.sample(&case.a)?;
    let sb = ctx.sample(&case.b)?;
    let pre_a = sa.member_rough_stat_limit(&case.beta_a, &params.at(case.r_a))?.verdict;
    let pre_b = sb.member_rough_stat_limit(&case.beta_b, &params.at(case.r_b))?.verdict;
    if pre_a != Verdict::Member || pre_b != Verdict::Member {
        return Ok(rep.indeterminate(format!("hypothesis not established: beta_a {pre_a:?}, beta_b {pre_b:?}")));
    }
    let (r_sum, r_scale) = match mode {
        LinearityMode::Literal => (case.r_a.max(case.r_b), case.r_a),
        LinearityMode::Corrected => (case.r_a + case.r_b, case.alpha.abs() * case.r_a),
    };
    let target_sum: Vec<f64> = case.beta_a.iter().zip(&case.beta_b).map(|(x, y)| x + y).collect();
    let mut claims = vec![("sum", DoubleSequence::sum(case.a.clone(), case.b.clone()), target_sum, r_sum)];
    let mut rep = rep;
    if case.alpha != 0.0 {
        let target: Vec<f64> = case.beta_a.iter().map(|x| case.alpha * x).collect();
        claims.push(("scalar", DoubleSequence::scale(case.alpha, case.a.clone()), target, r_scale));
    } else {
        rep = rep.note("alpha = 0 excluded; scalar claim skipped");
    }
    let mut undecided = false;
    for (label, seq, target, r) in claims {
        let s = ctx.sample(&seq)?;
        let p = params.at(r);
        let m = s.member_rough_stat_limit(&target, &p)?;
        match m.verdict {
            Verdict::Member => {}
            Verdict::Indeterminate => undecided = true,
            Verdict::NonMember => {
                let bad = m.estimates.iter().find(|e| e.estimate.verdict == crate::density::DensityVerdict::Positive);
                let mut vals = vec![("target", target[0]), ("roughness", r)];
                if let Some(e) = bad {
                    vals.push(("eps", e.eps));
                    vals.push(("lambda", e.lambda));
                    vals.push(("exception_density", e.estimate.last()));
                    if let Some((i, j, x)) = s.first_violation(&target, r + e.eps, e.lambda) {
                        vals.extend([("m", i as f64), ("n", j as f64), ("value", x[0])]);
                        let a_val = sa.sequence().evaluate(i, j)?.coords()[0];
                        vals.push(("a_value", a_val));
                    }
                }
                rep = rep.fail(Witness::new(format!("{label} claim fails"), &vals));
            }
        }
    }
    if rep.verdict == TheoremVerdict::Pass && undecided {
        rep = rep.indeterminate("a claim was indeterminate");
    }
    Ok(rep)
}

/// If `y` converges statistically to `xi` and `ϑ(x - y; r) > 1 - λ` holds
/// at every index for every `λ`, then `xi` is an r-statistical limit of `x`.
pub fn check_perturbation(
    ctx: &Context,
    x: &DoubleSequence,
    y: &DoubleSequence,
    xi: &[f64],
    r: f64,
    params: &RoughParams,
) -> Result<TheoremReport> {
    let rep = TheoremReport::new(
        "perturbation",
        "a uniform probabilistic perturbation of a statistically convergent sequence keeps its limit as a rough limit",
        StatementForm::Literal,
    );
    let sx = ctx.sample(x)?;
    let sy = ctx.sample(y)?;
    let conv = sy.is_stat_convergent(xi, &params.eps_grid, &params.lambda_grid)?.verdict;
    if conv != Verdict::Member {
        return Ok(rep.indeterminate(format!("hypothesis not met: y statistically convergent is {conv:?}")));
    }
    if let Some((i, j, v)) = sx.pointwise_close(&sy, r, &params.lambda_grid)? {
        return Ok(rep
            .with_witness(Witness::new("x - y too large", &[("m", i as f64), ("n", j as f64), ("eval", v)]))
            .indeterminate("hypothesis not met: pointwise bound fails"));
    }
    let m = sx.member_rough_stat_limit(xi, &params.at(r))?;
    Ok(match m.verdict {
        Verdict::Member => rep,
        Verdict::NonMember => rep.fail(Witness::new("conclusion fails", &[("xi", xi[0]), ("r", r), ("density_last", m.density_last)])),
        Verdict::Indeterminate => rep.indeterminate("conclusion indeterminate"),
    })
}

/// No two limits `x1, x2` satisfy `ϑ(x1 - x2; m·r) <= 1 - λ` for `m > 2`.
pub fn check_separation(set: &SetEstimate, pnorm: &ProbabilisticNorm, r: f64, m_values: &[f64], lambda_grid: &[f64]) -> TheoremReport {
    let rep = TheoremReport::new(
        "separation",
        "any two rough statistical limits are within probabilistic distance m·r for m > 2",
        StatementForm::Literal,
    );
    if r.is_nan() || r <= 0.0 {
        return rep.indeterminate("roughness must be positive");
    }
    if m_values.is_empty() || m_values.iter().any(|&m| m.is_nan() || m <= 2.0) {
        return rep.indeterminate("separation factors must exceed 2");
    }
    let members: Vec<f64> = set.members().collect();
    for (k, &x1) in members.iter().enumerate() {
        for &x2 in &members[k..] {
            for &m in m_values {
                for &l in lambda_grid {
                    let v = pnorm.eval_diff(&[x1], &[x2], m * r);
                    if v <= 1.0 - l {
                        return rep.fail(Witness::new(
                            "separated limits",
                            &[("x1", x1), ("x2", x2), ("m", m), ("lambda", l), ("eval", v)],
                        ));
                    }
                }
            }
        }
    }
    if members.len() <= 1 {
        rep.note("at most one member; holds vacuously")
    } else {
        rep
    }
}

/// The limit set of a sequence is contained in that of a dense subsequence.
pub fn check_dense_subsequence(s: &Sampled, map: &IndexMap, params: &RoughParams, grid: &Grid) -> Result<TheoremReport> {
    let rep = TheoremReport::new(
        "dense-subsequence-inclusion",
        "rough statistical limits of a sequence are limits of every dense subsequence",
        StatementForm::Literal,
    );
    let ctx = s.context();
    let dense = is_dense_subsequence(map, &ctx.schedule, &ctx.density)?;
    if dense.verdict != DenseVerdict::One {
        let gaps = dense.estimate.complement().last();
        return Ok(rep
            .with_witness(Witness::new("image density", &[("image_density_last", dense.estimate.last()), ("complement_last", gaps)]))
            .indeterminate(format!("index map is not certified dense ({:?})", dense.verdict)));
    }
    let sub = s.sibling(&DoubleSequence::subsequence(s.sequence().clone(), map.clone()))?;
    let full = s.scan(SetKind::RoughStatLimit, params, grid)?;
    let part = sub.scan(SetKind::RoughStatLimit, params, grid)?;
    for (p, q) in full.points.iter().zip(&part.points) {
        if p.verdict == Verdict::Member && q.verdict == Verdict::NonMember {
            return Ok(rep.fail(Witness::new("limit lost in subsequence", &[("beta", p.beta), ("density_last", q.density_last)])));
        }
    }
    Ok(rep.with_witness(Witness::intervals("limit sets", &[("sequence", &full.intervals), ("subsequence", &part.intervals)])))
}

pub const BOUNDEDNESS_R_LADDER: [f64; 4] = [1.0, 2.0, 5.0, 10.0];

/// Statistical boundedness holds iff some roughness gives a nonempty
/// rough statistical limit set.
pub fn check_boundedness_equivalence(s: &Sampled, params: &RoughParams, grid: &Grid) -> Result<TheoremReport> {
    use super::BoundedVerdict;
    let rep = TheoremReport::new(
        "bounded-iff-limit-set-nonempty",
        "statistically bounded iff the rough statistical limit set is nonempty for some r > 0",
        StatementForm::Literal,
    );
    let b = s.is_stat_bounded(&params.lambda_grid, &DEFAULT_G_LADDER)?;
    let mut ladder = BOUNDEDNESS_R_LADDER.to_vec();
    if let Some(g) = b.witness {
        if !ladder.contains(&g) {
            ladder.push(g);
        }
    }
    let mut nonempty = None;
    let mut any_indeterminate = false;
    for &r in &ladder {
        let set = s.scan(SetKind::RoughStatLimit, &params.at(r), grid)?;
        any_indeterminate |= !set.indeterminate.is_empty();
        if !set.is_empty() {
            nonempty = Some((r, set.intervals[0]));
            break;
        }
    }
    let g = b.witness.unwrap_or(f64::NAN);
    Ok(match (b.verdict, nonempty) {
        (BoundedVerdict::Bounded, Some((r, iv))) => {
            rep.with_witness(Witness::new("bounded with nonempty limit set", &[("G", g), ("r", r), ("lo", iv.lo), ("hi", iv.hi)]))
        }
        (BoundedVerdict::Unbounded, None) if !any_indeterminate => rep,
        (BoundedVerdict::Bounded, None) if !any_indeterminate => {
            rep.fail(Witness::new("bounded but every scanned limit set is empty", &[("G", g)]))
        }
        (BoundedVerdict::Unbounded, Some((r, iv))) => {
            rep.fail(Witness::new("unbounded but a limit set is nonempty", &[("r", r), ("lo", iv.lo), ("hi", iv.hi)]))
        }
        _ => rep.indeterminate(format!("boundedness {:?} with undecided scans", b.verdict)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BallMode {
    /// Cluster set equals the union of closed balls around ordinary cluster
    /// points.
    Union,
    /// Limit set equals the intersection of those balls.
    Intersection,
    /// For a statistically convergent sequence, the limit set is the closed
    /// ball around the statistical limit.
    StatConvergentBall,
    /// For a statistically convergent sequence, cluster set equals limit set.
    Equality,
}

enum Convergence {
    Holds(f64),
    Refuted(String),
    Unknown(String),
}

fn statistical_limit(s: &Sampled, params: &RoughParams, grid: &Grid, cluster0: &SetEstimate) -> Result<Convergence> {
    if cluster0.intervals.len() >= 2 {
        let pts: Vec<String> = cluster0.intervals.iter().map(|iv| format!("{}", iv.midpoint())).collect();
        return Ok(Convergence::Refuted(format!("ordinary cluster points at {} are not unique", pts.join(", "))));
    }
    let lim0 = s.scan(SetKind::RoughStatLimit, &params.at(0.0), grid)?;
    Ok(match lim0.intervals.as_slice() {
        [iv] => Convergence::Holds(super::snap(iv.midpoint())),
        [] if lim0.indeterminate.is_empty() && cluster0.is_empty() && cluster0.indeterminate.is_empty() => {
            Convergence::Refuted("no ordinary cluster point and no statistical limit on the grid".into())
        }
        _ => Convergence::Unknown(format!("statistical limit scan found {} intervals", lim0.intervals.len())),
    })
}

pub fn check_ball_characterizations(s: &Sampled, params: &RoughParams, grid: &Grid, mode: BallMode) -> Result<TheoremReport> {
    let (id, what) = match mode {
        BallMode::Union => ("cluster-set-ball-union", "the rough cluster set is the union of closed r-balls around ordinary cluster points"),
        BallMode::Intersection => ("limit-set-ball-intersection", "the rough limit set is the intersection of closed r-balls around ordinary cluster points"),
        BallMode::StatConvergentBall => ("limit-set-equals-ball", "for a statistically convergent sequence the rough limit set is a closed r-ball around the limit"),
        BallMode::Equality => ("cluster-set-equals-limit-set", "for a statistically convergent sequence the rough cluster set equals the rough limit set"),
    };
    let mut rep = TheoremReport::new(id, what, StatementForm::Literal);
    let pnorm = s.context().pnorm;
    let r = params.r;
    let tol = grid_tol(grid.step);
    let cluster0 = s.scan(SetKind::RoughCluster, &params.at(0.0), grid)?;
    let centers: Vec<f64> = cluster0.members().collect();

    let compare_per_level = |rep: TheoremReport, scanned: &SetEstimate, centers: &[f64], all: bool, need_all: bool| {
        let mut rep = rep;
        let mut matched = Vec::new();
        for &l in &params.lambda_grid {
            let balls = ball_intervals(&pnorm, centers, l, r, grid, all);
            let mismatch = interval_mismatch(&scanned.intervals, &balls, tol);
            matched.push((l, balls.clone(), mismatch.is_none()));
            if let Some(msg) = mismatch {
                rep = rep.note(format!("lambda {l}: {msg}"));
            }
        }
        let ok = if need_all { matched.iter().all(|m| m.2) } else { matched.iter().any(|m| m.2) };
        if !need_all {
            for (l, _, hit) in &matched {
                rep = rep.with_witness(Witness::new("per-level match", &[("lambda", *l), ("matched", f64::from(u8::from(*hit)))]));
            }
        }
        if ok {
            rep
        } else if !scanned.indeterminate.is_empty() {
            rep.indeterminate("scan has indeterminate points")
        } else {
            let (l, balls, _) = &matched[0];
            rep.fail(Witness::intervals(format!("lambda {l}"), &[("scan", &scanned.intervals), ("balls", balls)]))
        }
    };

    match mode {
        BallMode::Union => {
            let lam = s.scan(SetKind::RoughCluster, params, grid)?;
            Ok(compare_per_level(rep, &lam, &centers, false, true))
        }
        BallMode::Intersection => {
            if centers.is_empty() {
                return Ok(rep.indeterminate("no ordinary cluster points on the grid"));
            }
            let lim = s.scan(SetKind::RoughStatLimit, params, grid)?;
            Ok(compare_per_level(rep, &lim, &centers, true, true))
        }
        BallMode::StatConvergentBall | BallMode::Equality => {
            let zeta = match statistical_limit(s, params, grid, &cluster0)? {
                Convergence::Holds(z) => z,
                Convergence::Refuted(why) => return Ok(rep.vacuous(format!("not statistically convergent: {why}"))),
                Convergence::Unknown(why) => return Ok(rep.indeterminate(why)),
            };
            rep = rep.with_witness(Witness::new("statistical limit", &[("zeta", zeta)]));
            let lim = s.scan(SetKind::RoughStatLimit, params, grid)?;
            if mode == BallMode::Equality {
                let lam = s.scan(SetKind::RoughCluster, params, grid)?;
                return Ok(match interval_mismatch(&lam.intervals, &lim.intervals, tol) {
                    None => rep,
                    Some(_) if !lam.indeterminate.is_empty() || !lim.indeterminate.is_empty() => {
                        rep.indeterminate("scans have indeterminate points")
                    }
                    Some(msg) => rep
                        .fail(Witness::intervals("cluster set vs limit set", &[("cluster", &lam.intervals), ("limit", &lim.intervals)]))
                        .note(msg),
                });
            }
            if pnorm.level_independent() {
                let reference = ball_intervals(&pnorm, &[zeta], 0.5, r, grid, true);
                let varies = params
                    .lambda_grid
                    .iter()
                    .any(|&l| ball_intervals(&pnorm, &[zeta], l, r, grid, true) != reference);
                if varies {
                    return Ok(rep.fail(Witness::new("ball depends on level", &[("zeta", zeta)])));
                }
            }
            Ok(compare_per_level(rep, &lim, &[zeta], true, false))
        }
    }
}

/// Every grid point within probabilistic distance `r` of an ordinary
/// cluster point `zeta`, at every sampled level, is a rough cluster point.
pub fn cluster_neighborhood_check(s: &Sampled, zeta: f64, params: &RoughParams, grid: &Grid) -> Result<TheoremReport> {
    let rep = TheoremReport::new(
        "cluster-neighborhood",
        "points within probabilistic distance r of an ordinary cluster point are rough cluster points",
        StatementForm::Literal,
    );
    let pre = s.member_rough_cluster(&[zeta], &params.at(0.0))?.verdict;
    if pre != Verdict::Member {
        return Ok(rep.indeterminate(format!("{zeta} is not an ordinary cluster point ({pre:?})")));
    }
    let pnorm = s.context().pnorm;
    let lam = s.scan(SetKind::RoughCluster, params, grid)?;
    let mut undecided = false;
    for p in &lam.points {
        let near = params.lambda_grid.iter().all(|&l| pnorm.eval_diff(&[p.beta], &[zeta], params.r) > 1.0 - l);
        if !near {
            continue;
        }
        match p.verdict {
            Verdict::Member => {}
            Verdict::Indeterminate => undecided = true,
            Verdict::NonMember => {
                return Ok(rep.fail(Witness::new("near point not a cluster point", &[("zeta", zeta), ("gamma", p.beta)])));
            }
        }
    }
    Ok(if undecided { rep.indeterminate("a nearby point was indeterminate") } else { rep })
}
