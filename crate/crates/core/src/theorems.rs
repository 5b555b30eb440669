//! Verification harnesses: both sides of each coefficient/smoothness claim,
//! evaluated along a ladder of scales and turned into verdicts.
//!
//! The truncated sequence is treated as a finitely supported one, so `f` is
//! the polynomial `S_N f` and every coefficient sum stops at `N` (analytic
//! tails are used only where noted). Constants are never fixed in advance:
//! a claim `lhs <= K rhs` passes when the ratio `lhs / rhs` does not grow
//! along the ladder.

use std::f64::consts::PI;

use serde::Serialize;

use crate::discrete_ineq::{coefficient_condition, weighted_tail, ConditionCurve, ConditionMode, IneqReport};
use crate::par;
use crate::report::Row;
use crate::seqclass::{classify, CoeffSeq, Family, SeqFamily};
use crate::sum::{csum, NeumaierSum};
use crate::trigseries::{
    best_approx, gauss_legendre, lp_norm, modulus, modulus_star, second_difference_pow, smoothness_integral, Grid,
    Parity, PhiWeight, TrigPoly, WeightFn,
};
use crate::verdict::{ratio, Convergence, IncrementRule, Trend, TrendRule};
use crate::{Error, Result};

/// Tunables shared by all harnesses. Defaults reproduce the standard runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarnessConfig {
    /// `n` ladder (`h = 1/n`).
    pub ladder: Vec<usize>,
    /// Finer `n` ladder for the log-Lipschitz comparison.
    pub log_ladder: Vec<usize>,
    /// Uniform scan points in `(0, h]` before refinement.
    pub t_steps: usize,
    /// Quadrature nodes per decade for the smoothness integral.
    pub quad_steps: usize,
    /// Truncation `N` for modulus sweeps; `None` picks a per-harness default.
    pub truncation: Option<usize>,
    /// Truncation for integrals of `|f|` near the origin, which need `S_N f`
    /// accurate much closer to `x = 0`.
    pub pointwise_truncation: usize,
    /// Grid size `M`; `None` picks the smallest admissible grid.
    pub grid_points: Option<usize>,
    pub trend: TrendRule,
    pub increments: IncrementRule,
    /// `max/min` below this counts as a flat ratio.
    pub flat_band: f64,
    /// `last/first` at or above this counts as growth.
    pub growth_factor: f64,
    /// Exponent `s` of the double-sum functional; `None` means
    /// `1/p - 1/r + 0.25`.
    pub s: Option<f64>,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            ladder: vec![8, 16, 32, 64, 128, 256],
            log_ladder: vec![8, 16, 32, 64, 128, 256, 512],
            t_steps: 128,
            quad_steps: 1024,
            truncation: None,
            pointwise_truncation: 1 << 18,
            grid_points: None,
            trend: TrendRule::default(),
            increments: IncrementRule::default(),
            flat_band: 1.2,
            growth_factor: 1.3,
            s: None,
        }
    }
}

impl HarnessConfig {
    fn grid_for(&self, degree: usize) -> Result<Grid> {
        let g = match self.grid_points {
            Some(m) => Grid::new(m)?,
            None => Grid::for_degree(degree)?,
        };
        g.check_degree(degree)?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        for (name, ladder) in [("ladder", &self.ladder), ("log_ladder", &self.log_ladder)] {
            if ladder.is_empty() || ladder.iter().any(|&n| n < 1) || ladder.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::param(name, "must be a nonempty increasing list of positive integers"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "reason")]
pub enum Status {
    Pass,
    Fail(String),
    Skipped(String),
}

impl Status {
    /// Skips are not falsifications.
    pub fn ok(&self) -> bool {
        !matches!(self, Status::Fail(_))
    }

    pub fn label(&self) -> String {
        match self {
            Status::Pass => "pass".into(),
            Status::Fail(r) => format!("fail: {r}"),
            Status::Skipped(r) => format!("skipped: {r}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub scale: f64,
    pub report: IneqReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub check_id: String,
    pub points: Vec<SweepPoint>,
    pub trend: Trend,
    pub sup_ratio: f64,
    /// Nonnegative least-squares fit `lhs ≈ K1 u + K2 v` for two-term bounds.
    pub constants: Option<(f64, f64)>,
}

impl SweepResult {
    pub fn new(check_id: impl Into<String>, points: Vec<SweepPoint>, rule: &TrendRule) -> Self {
        let ratios: Vec<f64> = points.iter().map(|p| p.report.ratio).collect();
        let trend = rule.classify(&ratios);
        let sup_ratio = ratios.iter().copied().fold(0.0, f64::max);
        Self {
            check_id: check_id.into(),
            points,
            trend,
            sup_ratio,
            constants: None,
        }
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.report.ratio).collect()
    }

    /// `max/min` of the ratios.
    pub fn band(&self) -> f64 {
        let r = self.ratios();
        let lo = r.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = r.iter().copied().fold(0.0, f64::max);
        ratio(hi, lo)
    }

    /// Last ratio over first ratio.
    pub fn growth(&self) -> f64 {
        let r = self.ratios();
        match (r.first(), r.last()) {
            (Some(&a), Some(&b)) => ratio(b, a),
            _ => 0.0,
        }
    }

    pub fn rows(&self, family: &str, params: &str) -> Vec<Row> {
        self.points
            .iter()
            .map(|p| Row {
                check_id: self.check_id.clone(),
                family: family.to_string(),
                params: params.to_string(),
                scale: p.scale,
                lhs: p.report.lhs,
                rhs: p.report.rhs,
                ratio: p.report.ratio,
                verdict: self.trend.as_str().to_string(),
            })
            .collect()
    }
}

/// Increments `||S_{2n} g - S_n g||_p^p` for `n = 1, 2, 4, ...` with `2n <= len`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CauchyCurve {
    pub schedule: Vec<usize>,
    pub increments: Vec<f64>,
    pub verdict: Convergence,
}

impl CauchyCurve {
    pub fn rows(&self, check_id: &str, family: &str, params: &str) -> Vec<Row> {
        self.schedule
            .iter()
            .zip(&self.increments)
            .map(|(&n, &inc)| Row {
                check_id: check_id.to_string(),
                family: family.to_string(),
                params: params.to_string(),
                scale: n as f64,
                lhs: inc,
                rhs: f64::NAN,
                ratio: f64::NAN,
                verdict: self.verdict.as_str().to_string(),
            })
            .collect()
    }
}

pub fn lp_cauchy(parity: Parity, coeffs: &[f64], p: f64, grid: &Grid, rule: &IncrementRule) -> Result<CauchyCurve> {
    let mut schedule = Vec::new();
    let mut n = 1usize;
    while 2 * n <= coeffs.len() {
        schedule.push(n);
        n *= 2;
    }
    let results = par::map(&schedule, |&n| -> Result<f64> {
        let block: Vec<f64> = (1..=2 * n).map(|k| if k > n { coeffs[k - 1] } else { 0.0 }).collect();
        let g = TrigPoly::new(parity, CoeffSeq::new(block)?);
        Ok(lp_norm(&g, p, grid)?.powf(p))
    });
    let increments = results.into_iter().collect::<Result<Vec<_>>>()?;
    let verdict = rule.classify(&increments);
    Ok(CauchyCurve {
        schedule,
        increments,
        verdict,
    })
}

fn condition_rows(c: &ConditionCurve, family: &str, params: &str) -> Vec<Row> {
    c.schedule
        .iter()
        .zip(&c.partial_sums)
        .map(|(&m, &s)| Row {
            check_id: format!("coeff_sum.{}", c.mode.as_str()),
            family: family.to_string(),
            params: params.to_string(),
            scale: m as f64,
            lhs: s,
            rhs: c.limit.unwrap_or(f64::NAN),
            ratio: c.limit.map_or(f64::NAN, |l| ratio(s, l)),
            verdict: c.verdict.as_str().to_string(),
        })
        .collect()
}

fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        Err(Error::param("p", format!("need 1 < p < inf, got {p}")))
    }
}

/// The family truncated at `n`; explicit value lists are zero-padded instead.
pub fn sequence_for(family: &SeqFamily, n: usize) -> Result<CoeffSeq> {
    match &family.family {
        Family::Explicit { values } | Family::MonotoneCustom { values } => {
            let mut v = values.clone();
            if v.len() < n {
                v.resize(n, 0.0);
            }
            SeqFamily::new(
                match &family.family {
                    Family::Explicit { .. } => Family::Explicit { values: v.clone() },
                    _ => Family::MonotoneCustom { values: v.clone() },
                },
                v.len(),
            )
            .generate()
        }
        _ => family.with_len(n).generate(),
    }
}

fn nbvs_stable(a: &CoeffSeq) -> std::result::Result<(), String> {
    let c = classify(a).nbvs;
    if c.is_finite() && c.stable {
        Ok(())
    } else {
        Err(format!("sequence is not NBVS-stable (k_min = {}, half-length k = {})", c.k_min, c.k_half))
    }
}

/// `sup_{0<t<=1/n}` of a first or second difference norm for each `n`.
fn modulus_sweep(
    f: &TrigPoly,
    p: f64,
    ladder: &[usize],
    grid: &Grid,
    t_steps: usize,
    second: bool,
) -> Result<Vec<f64>> {
    ladder
        .iter()
        .map(|&n| {
            let h = 1.0 / n as f64;
            if second {
                modulus_star(f, p, h, grid, t_steps)
            } else {
                modulus(f, p, h, grid, t_steps)
            }
        })
        .collect()
}

fn fit_two(lhs: &[f64], u: &[f64], v: &[f64]) -> (f64, f64) {
    let dot = |x: &[f64], y: &[f64]| csum(x.iter().zip(y).map(|(a, b)| a * b));
    let (uu, vv, uv) = (dot(u, u), dot(v, v), dot(u, v));
    let (ul, vl) = (dot(u, lhs), dot(v, lhs));
    let det = uu * vv - uv * uv;
    if det > 1e-14 * uu * vv {
        let k1 = (ul * vv - vl * uv) / det;
        let k2 = (vl * uu - ul * uv) / det;
        if k1 >= 0.0 && k2 >= 0.0 {
            return (k1, k2);
        }
    }
    let err = |k1: f64, k2: f64| {
        csum(lhs.iter().zip(u.iter().zip(v)).map(|(l, (a, b))| (l - k1 * a - k2 * b).powi(2)))
    };
    let only_u = (ratio(ul, uu), 0.0);
    let only_v = (0.0, ratio(vl, vv));
    if err(only_u.0, 0.0) <= err(0.0, only_v.1) {
        only_u
    } else {
        only_v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem1Result {
    pub family: String,
    pub p: f64,
    pub truncation: usize,
    pub grid_points: usize,
    pub eq21: Option<ConditionCurve>,
    pub sweeps: Vec<(Parity, SweepResult)>,
    pub status: Status,
}

impl Theorem1Result {
    pub fn rows(&self) -> Vec<Row> {
        let params = format!("p={};N={};M={}", self.p, self.truncation, self.grid_points);
        let mut rows = Vec::new();
        if let Some(c) = &self.eq21 {
            rows.extend(condition_rows(c, &self.family, &params));
        }
        for (_, s) in &self.sweeps {
            rows.extend(s.rows(&self.family, &params));
        }
        rows.push(Row::summary("smoothness_upper", &self.family, &params, self.status.label()));
        rows
    }
}

/// Upper bound for the first modulus in terms of two weighted coefficient
/// sums, checked for the cosine and the sine series.
pub fn verify_theorem1(family: &SeqFamily, p: f64, cfg: &HarnessConfig) -> Result<Theorem1Result> {
    check_p(p)?;
    cfg.validate()?;
    let n = cfg.truncation.unwrap_or(2047);
    let a = sequence_for(family, n)?;
    let grid = cfg.grid_for(a.len())?;
    let mut out = Theorem1Result {
        family: family.to_string(),
        p,
        truncation: a.len(),
        grid_points: grid.points(),
        eq21: None,
        sweeps: Vec::new(),
        status: Status::Pass,
    };
    if let Err(reason) = nbvs_stable(&a) {
        out.status = Status::Skipped(reason);
        return Ok(out);
    }
    let eq21 = coefficient_condition(&a, p, ConditionMode::Eq21, &cfg.increments)?;
    let convergent = eq21.verdict.is_convergent();
    out.eq21 = Some(eq21);
    if !convergent {
        out.status = Status::Skipped("coefficient sum n^{p-2} a_n^p is not convergent".into());
        return Ok(out);
    }
    let v = a.values();
    let head = |m: usize| csum((1..m).map(|k| (k as f64).powf(2.0 * p - 2.0) * v[k - 1].powf(p)));
    let tail = |m: usize| csum((m..=v.len()).map(|k| (k as f64).powf(p - 2.0) * v[k - 1].powf(p)));
    let ladder: Vec<usize> = cfg.ladder.clone();
    let us: Vec<f64> = ladder.iter().map(|&m| head(m).powf(1.0 / p) / m as f64).collect();
    let vs: Vec<f64> = ladder.iter().map(|&m| tail(m).powf(1.0 / p)).collect();
    let finite = a.finite();
    let mut failures = Vec::new();
    for parity in [Parity::Cosine, Parity::Sine] {
        let f = TrigPoly::new(parity, finite.clone());
        let lhs = par::map(&ladder, |&m| modulus(&f, p, 1.0 / m as f64, &grid, cfg.t_steps))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let points = ladder
            .iter()
            .enumerate()
            .map(|(i, &m)| SweepPoint {
                scale: m as f64,
                report: IneqReport::empirical(lhs[i], us[i] + vs[i]),
            })
            .collect();
        let mut sweep = SweepResult::new(format!("smoothness_upper.{}", parity.as_str()), points, &cfg.trend);
        sweep.constants = Some(fit_two(&lhs, &us, &vs));
        if !sweep.trend.bounded_above() {
            failures.push(parity.as_str());
        }
        out.sweeps.push((parity, sweep));
    }
    if !failures.is_empty() {
        out.status = Status::Fail(format!("ratio grows for {}", failures.join(" and ")));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightChecks {
    pub doubling: (f64, f64),
    /// Head sum against its bound along `m = 2^k`.
    pub head: SweepResult,
    /// Tail sum convergence and the tail against its bound.
    pub tail_convergence: Convergence,
    pub tail: Option<SweepResult>,
}

impl WeightChecks {
    pub fn passed(&self) -> bool {
        self.doubling.0 > 0.0
            && self.head.trend.bounded_above()
            && self.tail_convergence.is_convergent()
            && self.tail.as_ref().is_some_and(|t| t.trend.bounded_above())
    }
}

const TAIL_LOG2: u32 = 21;
const WEIGHT_LADDER_LOG2: u32 = 16;

/// Numeric checks of the two growth conditions a weight must satisfy for
/// the reverse inequality.
pub fn weight_checks(lam: &WeightFn, r: f64, p: f64, cfg: &HarnessConfig) -> WeightChecks {
    let ladder: Vec<usize> = (0..=WEIGHT_LADDER_LOG2).map(|k| 1usize << k).collect();
    let e_head = r / p - r;
    let mut acc = NeumaierSum::new();
    let mut head_points = Vec::new();
    let mut next = 0usize;
    for m in 1..=*ladder.last().unwrap() {
        acc.add(lam.eval(m as f64) * (m as f64).powf(e_head));
        if m == ladder[next] {
            let rhs = lam.eval(m as f64) * (m as f64).powf(e_head + 1.0);
            head_points.push(SweepPoint {
                scale: m as f64,
                report: IneqReport::empirical(acc.value(), rhs),
            });
            next += 1;
        }
    }
    let head = SweepResult::new("weight_head", head_points, &cfg.trend);

    let e_tail = r * (1.0 / p - 3.0);
    let limit = 1usize << TAIL_LOG2;
    // prefix[k] = sum_{n<=k} g(n)
    let mut prefix = Vec::with_capacity(limit + 1);
    prefix.push(0.0);
    let mut acc = NeumaierSum::new();
    for n in 1..limit {
        acc.add(lam.eval(n as f64) * (n as f64).powf(e_tail));
        prefix.push(acc.value());
    }
    let blocks: Vec<f64> = (0..TAIL_LOG2)
        .map(|j| prefix[(1usize << (j + 1)) - 1] - prefix[(1usize << j) - 1])
        .collect();
    let tail_convergence = cfg.increments.classify(&blocks);
    let tail = tail_convergence.is_convergent().then(|| {
        let (b1, b0) = (blocks[blocks.len() - 1], blocks[blocks.len() - 2]);
        let q = ratio(b1, b0);
        let beyond = if q < 1.0 { b1 * q / (1.0 - q) } else { f64::INFINITY };
        let points = ladder
            .iter()
            .map(|&m| {
                let lhs = prefix[limit - 1] - prefix[m - 1] + beyond;
                let rhs = lam.eval(m as f64) * (m as f64).powf(1.0 + e_tail);
                SweepPoint {
                    scale: m as f64,
                    report: IneqReport::empirical(lhs, rhs),
                }
            })
            .collect();
        SweepResult::new("weight_tail", points, &cfg.trend)
    });
    WeightChecks {
        doubling: lam.doubling_constants(),
        head,
        tail_convergence,
        tail,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem2Result {
    pub family: String,
    pub lambda: WeightFn,
    pub r: f64,
    pub p: f64,
    pub weights: WeightChecks,
    /// Coefficient-sum verdict and partial-sum Cauchy verdict for `f in L^p`.
    pub membership: Option<(Convergence, Convergence)>,
    pub forward: Option<SweepResult>,
    pub reverse: Option<SweepResult>,
    pub reverse_status: Status,
    pub status: Status,
}

impl Theorem2Result {
    pub fn rows(&self) -> Vec<Row> {
        let params = format!(
            "r={};p={};lambda=c{}*x^{}*log^{}",
            self.r, self.p, self.lambda.c, self.lambda.gamma, self.lambda.delta
        );
        let fam = self.family.as_str();
        let mut rows = self.weights.head.rows(fam, &params);
        if let Some(t) = &self.weights.tail {
            rows.extend(t.rows(fam, &params));
        }
        if let Some((a, b)) = self.membership {
            rows.push(Row::summary("lp_membership.coeff", fam, &params, a.as_str()));
            rows.push(Row::summary("lp_membership.cauchy", fam, &params, b.as_str()));
        }
        for s in self.forward.iter().chain(&self.reverse) {
            rows.extend(s.rows(fam, &params));
        }
        rows.push(Row::summary("integral_vs_sum.status", fam, &params, self.reverse_status.label()));
        rows.push(Row::summary("weighted_smoothness", fam, &params, self.status.label()));
        rows
    }
}

/// Two-sided comparison of `sum lambda(n) a_n^r` with the weighted
/// second-difference integral, along a ladder of truncations.
pub fn verify_theorem2(family: &SeqFamily, lam: &WeightFn, r: f64, p: f64, cfg: &HarnessConfig) -> Result<Theorem2Result> {
    check_p(p)?;
    cfg.validate()?;
    if !(r.is_finite() && r >= 1.0) {
        return Err(Error::param("r", format!("need 1 <= r < inf, got {r}")));
    }
    let weights = weight_checks(lam, r, p, cfg);
    let mut out = Theorem2Result {
        family: family.to_string(),
        lambda: *lam,
        r,
        p,
        weights,
        membership: None,
        forward: None,
        reverse: None,
        reverse_status: Status::Pass,
        status: Status::Pass,
    };
    let top = cfg.truncation.unwrap_or(2048);
    let a = sequence_for(family, top)?;
    if let Err(reason) = nbvs_stable(&a) {
        out.status = Status::Skipped(reason);
        return Ok(out);
    }
    let coeff = coefficient_condition(&a, p, ConditionMode::Eq21, &cfg.increments)?.verdict;
    let grid = cfg.grid_for(a.len())?;
    let cauchy = lp_cauchy(Parity::Cosine, a.values(), p, &grid, &cfg.increments)?.verdict;
    out.membership = Some((coeff, cauchy));
    if coeff != cauchy {
        out.status = Status::Fail("coefficient test and partial-sum test disagree on L^p membership".into());
        return Ok(out);
    }
    if !coeff.is_convergent() {
        out.status = Status::Skipped("f is not in L^p".into());
        return Ok(out);
    }
    let results = par::map(&cfg.ladder, |&n| -> Result<(f64, f64)> {
        let a = sequence_for(family, n)?;
        let sum = csum(a.values().iter().enumerate().map(|(i, x)| lam.eval((i + 1) as f64) * x.powf(r)));
        let f = TrigPoly::new(Parity::Cosine, a.finite());
        let grid = cfg.grid_for(f.degree())?;
        let integral = smoothness_integral(&f, lam, r, p, cfg.quad_steps, &grid)?;
        Ok((sum, integral.as_f64()))
    });
    let values = results.into_iter().collect::<Result<Vec<_>>>()?;
    let point = |i: usize, lhs: f64, rhs: f64| SweepPoint {
        scale: cfg.ladder[i] as f64,
        report: IneqReport::empirical(lhs, rhs),
    };
    let forward = SweepResult::new(
        "sum_vs_integral",
        values.iter().enumerate().map(|(i, &(s, int))| point(i, s, int)).collect(),
        &cfg.trend,
    );
    let mut failures = Vec::new();
    if !forward.trend.bounded_above() {
        failures.push("sum/integral ratio grows");
    }
    out.forward = Some(forward);
    if out.weights.passed() {
        let reverse = SweepResult::new(
            "integral_vs_sum",
            values.iter().enumerate().map(|(i, &(s, int))| point(i, int, s)).collect(),
            &cfg.trend,
        );
        if !reverse.trend.bounded_above() {
            failures.push("integral/sum ratio grows");
        }
        out.reverse = Some(reverse);
    } else {
        out.reverse_status = Status::Skipped("weight fails the head or tail growth condition".into());
    }
    if !failures.is_empty() {
        out.status = Status::Fail(failures.join("; "));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Functional {
    pub name: &'static str,
    /// Mass in successive dyadic blocks (of `n`, or of `x`/`t` toward zero).
    pub contributions: Vec<f64>,
    pub total: f64,
    pub verdict: Convergence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem3Result {
    pub family: String,
    pub r: f64,
    pub p: f64,
    pub s: f64,
    pub phi: PhiWeight,
    pub phi_square_constant: f64,
    pub truncation: usize,
    pub pointwise_truncation: usize,
    pub functionals: Vec<Functional>,
    pub consistent: bool,
    pub status: Status,
}

impl Theorem3Result {
    pub fn rows(&self) -> Vec<Row> {
        let params = format!("r={};p={};s={};phi_s={};N={}", self.r, self.p, self.s, self.phi.s, self.truncation);
        let mut rows: Vec<Row> = self
            .functionals
            .iter()
            .map(|f| Row {
                check_id: format!("functional.{}", f.name),
                family: self.family.clone(),
                params: params.clone(),
                scale: f.contributions.len() as f64,
                lhs: f.total,
                rhs: f.contributions.last().copied().unwrap_or(f64::NAN),
                ratio: match f.contributions.as_slice() {
                    [.., a, b] => ratio(*b, *a),
                    _ => f64::NAN,
                },
                verdict: f.verdict.as_str().to_string(),
            })
            .collect();
        rows.push(Row::summary("equivalent_functionals", &self.family, &params, self.status.label()));
        rows
    }
}

pub const FUNCTIONAL_NAMES: [&str; 9] = [
    "coeff_power",
    "coeff_double_sum",
    "coeff_tail",
    "modulus",
    "best_approx",
    "f_cumulative",
    "f_phi_f",
    "f_phi_inv_x",
    "second_difference",
];

/// Number of dyadic blocks, so that the last block of `n` stays below `N/64`
/// and the smallest `x`-shell stays well above `1/N`.
fn block_count(truncation: usize) -> usize {
    let n_max = (truncation / 64).max(16);
    (usize::BITS - 1 - n_max.leading_zeros()) as usize
}

/// `g(n)` for `n = 1..=n_max`: exact up to 64, then 16 log-spaced samples per
/// dyadic block with log-log interpolation in between.
fn sampled_profile(n_max: usize, g: impl Fn(usize) -> Result<f64> + Sync + Send) -> Result<Vec<f64>> {
    let mut nodes: Vec<usize> = (1..=n_max.min(64)).collect();
    let mut lo = 64usize;
    while lo < n_max {
        let hi = (2 * lo).min(n_max);
        for i in 1..=16 {
            let x = (lo as f64) * ((hi as f64) / lo as f64).powf(i as f64 / 16.0);
            let k = (x.round() as usize).clamp(lo + 1, hi);
            if nodes.last() != Some(&k) {
                nodes.push(k);
            }
        }
        lo = hi;
    }
    let vals = par::map(&nodes, |&k| g(k)).into_iter().collect::<Result<Vec<_>>>()?;
    let mut out = vec![0.0; n_max];
    for w in 0..nodes.len() {
        out[nodes[w] - 1] = vals[w];
        if w + 1 < nodes.len() {
            let (k0, k1) = (nodes[w], nodes[w + 1]);
            let (v0, v1) = (vals[w], vals[w + 1]);
            for k in k0 + 1..k1 {
                let s = ((k as f64).ln() - (k0 as f64).ln()) / ((k1 as f64).ln() - (k0 as f64).ln());
                out[k - 1] = if v0 > 0.0 && v1 > 0.0 {
                    (v0.ln() + s * (v1.ln() - v0.ln())).exp()
                } else {
                    v0 + s * (v1 - v0)
                };
            }
        }
    }
    Ok(out)
}

fn dyadic_blocks(terms: &[f64], blocks: usize) -> Vec<f64> {
    (0..blocks)
        .map(|j| csum(terms[(1 << j) - 1..(1 << (j + 1)) - 1].iter().copied()))
        .collect()
}

/// Truncations of nine quantities that are all finite or all infinite
/// together, each classified from its dyadic contributions.
pub fn theorem3_functionals(
    family: &SeqFamily,
    phi: &PhiWeight,
    r: f64,
    p: f64,
    cfg: &HarnessConfig,
) -> Result<Theorem3Result> {
    check_p(p)?;
    cfg.validate()?;
    if !(r.is_finite() && r > p) {
        return Err(Error::param("r", format!("need p < r < inf, got r = {r}, p = {p}")));
    }
    let s = cfg.s.unwrap_or(1.0 / p - 1.0 / r + 0.25);
    if s.is_nan() || s <= 1.0 / p - 1.0 / r {
        return Err(Error::param("s", format!("need s > 1/p - 1/r, got {s}")));
    }
    let truncation = cfg.truncation.unwrap_or(1 << 14);
    let a = sequence_for(family, truncation)?;
    let big_n = a.len();
    if !phi.is_nondecreasing(big_n) {
        return Err(Error::param("phi", "phi must be nondecreasing"));
    }
    let phi_square_constant = phi.square_constant(big_n);
    let blocks = block_count(big_n);
    let n_max = (1usize << blocks) - 1;
    let mut out = Theorem3Result {
        family: family.to_string(),
        r,
        p,
        s,
        phi: *phi,
        phi_square_constant,
        truncation: big_n,
        pointwise_truncation: cfg.pointwise_truncation,
        functionals: Vec::new(),
        consistent: true,
        status: Status::Pass,
    };
    if let Err(reason) = nbvs_stable(&a) {
        out.status = Status::Skipped(reason);
        return Ok(out);
    }
    let v = a.values();
    let nf = |n: usize| n as f64;
    let w = |n: usize| phi.at(n) * nf(n).powf(r / p - 2.0);

    let f1: Vec<f64> = (1..=n_max).map(|n| phi.at(n) * nf(n).powf(r - 2.0) * v[n - 1].powf(r)).collect();
    let mut inner = NeumaierSum::new();
    let f2: Vec<f64> = (1..=n_max)
        .map(|n| {
            inner.add(nf(n).powf((s + 1.0) * p - 2.0) * v[n - 1].powf(p));
            phi.at(n) * nf(n).powf(-r * s + r / p - 2.0) * inner.value().powf(r / p)
        })
        .collect();
    let f3: Vec<f64> = (1..=n_max)
        .map(|n| w(n) * weighted_tail(&a, n, p - 2.0, p).powf(r / p))
        .collect();

    let f = TrigPoly::new(Parity::Cosine, a.finite());
    let grid = cfg.grid_for(big_n)?;
    let omega = sampled_profile(n_max, |n| modulus(&f, p, 1.0 / n as f64, &grid, cfg.t_steps))?;
    let f4: Vec<f64> = (1..=n_max).map(|n| w(n) * omega[n - 1].powf(r)).collect();
    let best = if p == 2.0 {
        (1..=n_max)
            .map(|n| best_approx(&f, n, p, &grid).map(|e| e.value))
            .collect::<Result<Vec<_>>>()?
    } else {
        sampled_profile(n_max, |n| best_approx(&f, n, p, &grid).map(|e| e.value))?
    };
    let f5: Vec<f64> = (1..=n_max).map(|n| w(n) * best[n - 1].powf(r)).collect();

    let (samples, x_grid, shell_count) = pointwise_samples(family, cfg.pointwise_truncation.max(big_n), cfg)?;
    let max_abs = samples.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let cap_phi = phi.cumulative(r, p, max_abs.floor() as usize + 1);
    let shells = |g: &dyn Fn(f64, f64) -> f64| -> Vec<f64> {
        let mut acc = vec![NeumaierSum::new(); shell_count];
        for (k, &fx) in samples.iter().enumerate().take(x_grid.points() / 2 + 1).skip(1) {
            let x = x_grid.x(k);
            // shell j is (π 2^{-j-1}, π 2^{-j}]
            let j = (PI / x).log2().floor() as usize;
            let j = if PI / (1u64 << j.min(63)) as f64 >= x { j } else { j.saturating_sub(1) };
            if j < shell_count {
                acc[j].add(g(x, fx.abs()));
            }
        }
        acc.iter().map(|a| a.value() * x_grid.weight()).collect()
    };
    let f6 = shells(&|_, y| y.powf(r - r / p + 1.0) * cap_phi[y.floor() as usize]);
    let f7 = shells(&|_, y| y.powf(r) * phi.step(y));
    let f8 = shells(&|x, y| y.powf(r) * phi.step(1.0 / x));

    let panels = cfg.quad_steps.div_ceil(8).clamp(4, 64);
    let f9 = (0..blocks)
        .map(|j| -> Result<f64> {
            let hi = PI / (1u64 << j) as f64;
            let g = |t: f64| {
                let inner = 0.5 * second_difference_pow(&f, t, p, &grid).unwrap_or(f64::NAN);
                phi.step(1.0 / t) * t.powf(-r / p) * inner.powf(r / p)
            };
            Ok(shell_quadrature(hi / 2.0, hi, panels, g))
        })
        .collect::<Result<Vec<_>>>()?;

    let series = [f1, f2, f3, f4, f5].map(|t| dyadic_blocks(&t, blocks));
    let all = series.into_iter().chain([f6, f7, f8, f9]);
    for (name, contributions) in FUNCTIONAL_NAMES.iter().zip(all) {
        let verdict = cfg.increments.classify(&contributions);
        out.functionals.push(Functional {
            name,
            total: csum(contributions.iter().copied()),
            contributions,
            verdict,
        });
    }
    let first = out.functionals[0].verdict;
    out.consistent = out.functionals.iter().all(|f| f.verdict == first);
    if !out.consistent {
        let split: Vec<String> = out
            .functionals
            .iter()
            .map(|f| format!("{}={}", f.name, f.verdict.as_str()))
            .collect();
        out.status = Status::Fail(format!("classifications disagree ({})", split.join(" ")));
    }
    Ok(out)
}

/// `S_N f` on a grid fine enough for `N`, plus the number of `x`-shells that
/// stay well above `1/N`.
fn pointwise_samples(family: &SeqFamily, n: usize, cfg: &HarnessConfig) -> Result<(Vec<f64>, Grid, usize)> {
    let a = sequence_for(family, n)?;
    let f = TrigPoly::new(Parity::Cosine, a.finite());
    let grid = match cfg.grid_points {
        Some(m) if m >= 4 * a.len() + 4 => Grid::new(m)?,
        _ => Grid::for_degree(a.len())?,
    };
    let samples = crate::trigseries::evaluate(&f, &grid)?;
    Ok((samples, grid, block_count(a.len())))
}

fn shell_quadrature(lo: f64, hi: f64, panels: usize, g: impl Fn(f64) -> f64 + Sync + Send) -> f64 {
    let nodes = gauss_legendre(8);
    let width = (hi - lo) / panels as f64;
    let pts: Vec<(f64, f64)> = (0..panels)
        .flat_map(|k| {
            let mid = lo + width * (k as f64 + 0.5);
            nodes.iter().map(move |&(x, w)| (mid + 0.5 * width * x, 0.5 * width * w))
        })
        .collect();
    csum(par::map(&pts, |&(t, w)| w * g(t)))
}

/// How `omega(f, h) / h` behaves along the ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LipschitzVerdict {
    Bounded,
    Growing,
    Inconclusive,
}

impl LipschitzVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            LipschitzVerdict::Bounded => "bounded",
            LipschitzVerdict::Growing => "growing",
            LipschitzVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem4Result {
    pub family: String,
    pub p: f64,
    pub truncation: usize,
    pub eq28: Option<ConditionCurve>,
    pub lipschitz: Vec<(Parity, SweepResult, LipschitzVerdict)>,
    pub derivative: Vec<(Parity, CauchyCurve)>,
    pub status: Status,
}

impl Theorem4Result {
    pub fn rows(&self) -> Vec<Row> {
        let params = format!("p={};N={}", self.p, self.truncation);
        let fam = self.family.as_str();
        let mut rows = Vec::new();
        if let Some(c) = &self.eq28 {
            rows.extend(condition_rows(c, fam, &params));
        }
        for (_, s, v) in &self.lipschitz {
            let mut r = s.rows(fam, &params);
            for row in &mut r {
                row.verdict = v.as_str().to_string();
            }
            rows.extend(r);
        }
        for (parity, c) in &self.derivative {
            rows.extend(c.rows(&format!("derivative_cauchy.{}", parity.as_str()), fam, &params));
        }
        rows.push(Row::summary("lipschitz_dichotomy", fam, &params, self.status.label()));
        rows
    }

    pub fn summary(&self) -> String {
        let eq = self.eq28.as_ref().map_or("n/a", |c| c.verdict.as_str());
        let lip = self.lipschitz.first().map_or("n/a", |l| l.2.as_str());
        format!("{eq} + {lip}")
    }
}

fn lipschitz_verdict(s: &SweepResult, cfg: &HarnessConfig) -> LipschitzVerdict {
    if s.band() < cfg.flat_band {
        LipschitzVerdict::Bounded
    } else if s.growth() >= cfg.growth_factor {
        LipschitzVerdict::Growing
    } else {
        LipschitzVerdict::Inconclusive
    }
}

/// The Lipschitz coefficient condition, the behaviour of `omega(f,h)/h`, and
/// the `L^p` Cauchy behaviour of the differentiated series must all agree.
pub fn verify_theorem4(family: &SeqFamily, p: f64, cfg: &HarnessConfig) -> Result<Theorem4Result> {
    check_p(p)?;
    cfg.validate()?;
    let a = sequence_for(family, cfg.truncation.unwrap_or(4095))?;
    let mut out = Theorem4Result {
        family: family.to_string(),
        p,
        truncation: a.len(),
        eq28: None,
        lipschitz: Vec::new(),
        derivative: Vec::new(),
        status: Status::Pass,
    };
    if let Err(reason) = nbvs_stable(&a) {
        out.status = Status::Skipped(reason);
        return Ok(out);
    }
    let eq28 = coefficient_condition(&a, p, ConditionMode::Eq28, &cfg.increments)?;
    let expect = eq28.verdict;
    out.eq28 = Some(eq28);
    let grid = cfg.grid_for(a.len())?;
    let weighted: Vec<f64> = a.values().iter().enumerate().map(|(i, x)| (i + 1) as f64 * x).collect();
    let mut disagreements = Vec::new();
    for parity in [Parity::Cosine, Parity::Sine] {
        let f = TrigPoly::new(parity, a.finite());
        let omega = modulus_sweep(&f, p, &cfg.ladder, &grid, cfg.t_steps, false)?;
        let points = cfg
            .ladder
            .iter()
            .zip(&omega)
            .map(|(&n, &w)| SweepPoint {
                scale: n as f64,
                report: IneqReport::empirical(w, 1.0 / n as f64),
            })
            .collect();
        let sweep = SweepResult::new(format!("lipschitz_ratio.{}", parity.as_str()), points, &cfg.trend);
        let lv = lipschitz_verdict(&sweep, cfg);
        let lip_ok = match expect {
            Convergence::Convergent => lv == LipschitzVerdict::Bounded,
            Convergence::Divergent => lv == LipschitzVerdict::Growing,
        };
        if !lip_ok {
            disagreements.push(format!("{} modulus ratio is {}", parity.as_str(), lv.as_str()));
        }
        out.lipschitz.push((parity, sweep, lv));
        // d/dx sum a_n sin(nx) = sum n a_n cos(nx), and the cosine series
        // differentiates to a sine series
        let dparity = match parity {
            Parity::Sine => Parity::Cosine,
            Parity::Cosine => Parity::Sine,
        };
        let d = lp_cauchy(dparity, &weighted, p, &grid, &cfg.increments)?;
        if d.verdict != expect {
            disagreements.push(format!("derivative of the {} series is {}", parity.as_str(), d.verdict.as_str()));
        }
        out.derivative.push((parity, d));
    }
    if !disagreements.is_empty() {
        out.status = Status::Fail(format!(
            "coefficient sum is {} but {}",
            expect.as_str(),
            disagreements.join("; ")
        ));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem5Parity {
    pub parity: Parity,
    pub zygmund: SweepResult,
    pub log_ratio: SweepResult,
    pub lipschitz: SweepResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem5Result {
    pub family: String,
    pub p: f64,
    pub truncation: usize,
    pub parities: Vec<Theorem5Parity>,
    /// `n^{1-1/p} a_n` against `omega^*(f, 1/n)`.
    pub lower_bound: Option<SweepResult>,
    /// `a_n` against `n^{-2+1/p}`.
    pub decay: Option<SweepResult>,
    pub status: Status,
}

impl Theorem5Result {
    pub fn rows(&self) -> Vec<Row> {
        let params = format!("p={};N={}", self.p, self.truncation);
        let fam = self.family.as_str();
        let mut rows = Vec::new();
        for t in &self.parities {
            for s in [&t.zygmund, &t.log_ratio, &t.lipschitz] {
                rows.extend(s.rows(fam, &params));
            }
        }
        for s in self.lower_bound.iter().chain(&self.decay) {
            rows.extend(s.rows(fam, &params));
        }
        rows.push(Row::summary("zygmund_log_bound", fam, &params, self.status.label()));
        rows
    }
}

/// For Zygmund-smooth sums, `omega(f,h) <= K h |log h|^{1/p}`; plus the
/// coefficient lower bound through `omega^*` and the resulting decay rate.
pub fn verify_theorem5(family: &SeqFamily, p: f64, cfg: &HarnessConfig) -> Result<Theorem5Result> {
    check_p(p)?;
    cfg.validate()?;
    let a = sequence_for(family, cfg.truncation.unwrap_or(4095))?;
    let mut out = Theorem5Result {
        family: family.to_string(),
        p,
        truncation: a.len(),
        parities: Vec::new(),
        lower_bound: None,
        decay: None,
        status: Status::Pass,
    };
    if let Err(reason) = nbvs_stable(&a) {
        out.status = Status::Skipped(reason);
        return Ok(out);
    }
    let grid = cfg.grid_for(a.len())?;
    let ladder = &cfg.log_ladder;
    let mut failures = Vec::new();
    let mut star_cos = Vec::new();
    for parity in [Parity::Cosine, Parity::Sine] {
        let f = TrigPoly::new(parity, a.finite());
        let star = modulus_sweep(&f, p, ladder, &grid, cfg.t_steps, true)?;
        let omega = modulus_sweep(&f, p, ladder, &grid, cfg.t_steps, false)?;
        let sweep = |id: &str, lhs: &[f64], rhs: &dyn Fn(f64) -> f64| {
            let points = ladder
                .iter()
                .zip(lhs)
                .map(|(&n, &l)| SweepPoint {
                    scale: n as f64,
                    report: IneqReport::empirical(l, rhs(1.0 / n as f64)),
                })
                .collect();
            SweepResult::new(format!("{id}.{}", parity.as_str()), points, &cfg.trend)
        };
        let zygmund = sweep("zygmund_ratio", &star, &|h| h);
        let log_ratio = sweep("log_lipschitz_ratio", &omega, &|h| h * h.ln().abs().powf(1.0 / p));
        let lipschitz = sweep("lipschitz_ratio", &omega, &|h| h);
        if !zygmund.trend.bounded_above() {
            out.status = Status::Skipped(format!("{} sum is not Zygmund-smooth on the ladder", parity.as_str()));
            return Ok(out);
        }
        if !log_ratio.trend.bounded_above() {
            failures.push(format!("{} log-Lipschitz ratio grows", parity.as_str()));
        }
        if parity == Parity::Cosine {
            star_cos = star;
        }
        out.parities.push(Theorem5Parity {
            parity,
            zygmund,
            log_ratio,
            lipschitz,
        });
    }
    let point = |n: usize, lhs: f64, rhs: f64| SweepPoint {
        scale: n as f64,
        report: IneqReport::empirical(lhs, rhs),
    };
    let lower = SweepResult::new(
        "second_modulus_lower",
        ladder
            .iter()
            .zip(&star_cos)
            .map(|(&n, &w)| point(n, (n as f64).powf(1.0 - 1.0 / p) * a.get(n), w))
            .collect(),
        &cfg.trend,
    );
    let decay = SweepResult::new(
        "coefficient_decay",
        ladder
            .iter()
            .map(|&n| point(n, a.get(n), (n as f64).powf(-2.0 + 1.0 / p)))
            .collect(),
        &cfg.trend,
    );
    if !lower.trend.bounded_above() {
        failures.push("coefficients outgrow the second modulus".into());
    }
    if !decay.trend.bounded_above() {
        failures.push("coefficients decay slower than n^{-2+1/p}".into());
    }
    out.lower_bound = Some(lower);
    out.decay = Some(decay);
    if !failures.is_empty() {
        out.status = Status::Fail(failures.join("; "));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma2Result {
    pub family: String,
    pub p: f64,
    pub truncation: usize,
    pub eq21: Option<ConditionCurve>,
    pub cauchy: Option<CauchyCurve>,
    pub status: Status,
}

impl Lemma2Result {
    pub fn agree(&self) -> bool {
        match (&self.eq21, &self.cauchy) {
            (Some(a), Some(b)) => a.verdict == b.verdict,
            _ => false,
        }
    }

    pub fn rows(&self) -> Vec<Row> {
        let params = format!("p={};N={}", self.p, self.truncation);
        let fam = self.family.as_str();
        let mut rows = Vec::new();
        if let Some(c) = &self.eq21 {
            rows.extend(condition_rows(c, fam, &params));
        }
        if let Some(c) = &self.cauchy {
            rows.extend(c.rows("lp_cauchy", fam, &params));
        }
        rows.push(Row::summary("lp_dichotomy", fam, &params, self.status.label()));
        rows
    }
}

/// The weighted coefficient sum converges exactly when the partial sums are
/// Cauchy in `L^p`.
pub fn verify_lemma2_dichotomy(family: &SeqFamily, p: f64, cfg: &HarnessConfig) -> Result<Lemma2Result> {
    check_p(p)?;
    let a = sequence_for(family, cfg.truncation.unwrap_or(2048))?;
    let mut out = Lemma2Result {
        family: family.to_string(),
        p,
        truncation: a.len(),
        eq21: None,
        cauchy: None,
        status: Status::Pass,
    };
    if let Err(reason) = nbvs_stable(&a) {
        out.status = Status::Skipped(reason);
        return Ok(out);
    }
    let grid = cfg.grid_for(a.len())?;
    out.eq21 = Some(coefficient_condition(&a, p, ConditionMode::Eq21, &cfg.increments)?);
    out.cauchy = Some(lp_cauchy(Parity::Cosine, a.values(), p, &grid, &cfg.increments)?);
    if !out.agree() {
        out.status = Status::Fail("coefficient sum and partial-sum Cauchy test disagree".into());
    }
    Ok(out)
}
