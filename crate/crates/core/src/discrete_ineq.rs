//! Both sides of the discrete inequalities, evaluated exactly.
//!
//! Every check returns an [`IneqReport`] oriented as `lhs <= K * rhs`. When
//! the constant is explicit (the Hardy-type bounds, `K = p^p`) `holds`
//! compares against it with a 1e-9 relative slack; otherwise the constant is
//! existential and `holds` only records that the ratio is finite. Boundedness
//! of such ratios is judged across a doubling ladder by [`lemma_sweep`].
//!
//! Sums run in ascending index order with compensated accumulation. For a
//! sequence carrying an analytic power tail, infinite sums add the closed-form
//! remainder past `N`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::par;
use crate::seqclass::{CoeffSeq, Tail};
use crate::sum::{csum, power_tail, NeumaierSum};
use crate::verdict::{ratio, Convergence, IncrementRule, Trend, TrendRule};
use crate::{Error, Result};

/// Relative slack for explicit-constant checks.
pub const EXPLICIT_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IneqReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// The explicit constant when there is one, else the observed ratio.
    pub constant_bound: f64,
    pub explicit_constant: bool,
    pub holds: bool,
}

impl IneqReport {
    pub fn explicit(lhs: f64, rhs: f64, constant: f64) -> Self {
        let holds = lhs <= constant * rhs * (1.0 + EXPLICIT_RTOL) + f64::MIN_POSITIVE;
        Self {
            lhs,
            rhs,
            ratio: ratio(lhs, rhs),
            constant_bound: constant,
            explicit_constant: true,
            holds,
        }
    }

    pub fn empirical(lhs: f64, rhs: f64) -> Self {
        let r = ratio(lhs, rhs);
        Self {
            lhs,
            rhs,
            ratio: r,
            constant_bound: r,
            explicit_constant: false,
            holds: r.is_finite(),
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        Err(Error::param("p", format!("need p > 1, got {p}")))
    }
}

fn check_nonneg(name: &'static str, xs: &[f64]) -> Result<()> {
    match xs.iter().position(|x| !x.is_finite() || *x < 0.0) {
        None => Ok(()),
        Some(i) => Err(Error::param(name, format!("entry {} is {}", i + 1, xs[i]))),
    }
}

fn check_index(n: usize, lo: usize, hi: usize) -> Result<()> {
    if n < lo || n > hi {
        Err(Error::IndexOutOfRange { index: n, lo, hi })
    } else {
        Ok(())
    }
}

fn at(xs: &[f64], k: usize) -> f64 {
    xs.get(k.wrapping_sub(1)).copied().unwrap_or(0.0)
}

/// Hardy-type bound for forward partial sums:
/// `sum_n λ_n (sum_{k<=n} α_k)^p <= p^p sum_j λ_{ν_j}^{1-p} (sum_{k>=ν_j} λ_k)^p (sum_{k=ν_{j-1}+1}^{ν_j} α_k)^p`
/// where `ν_1 < ν_2 < ...` are the indices with `λ > 0` and `ν_0 = 0`.
pub fn hardy_33(lambda: &[f64], alpha: &[f64], p: f64) -> Result<IneqReport> {
    check_p(p)?;
    check_nonneg("lambda", lambda)?;
    check_nonneg("alpha", alpha)?;
    let len = lambda.len().max(alpha.len());

    let mut lhs = NeumaierSum::new();
    let mut partial = NeumaierSum::new();
    for n in 1..=len {
        partial.add(at(alpha, n));
        let l = at(lambda, n);
        if l > 0.0 {
            lhs.add(l * partial.value().powf(p));
        }
    }

    let nus: Vec<usize> = (1..=len).filter(|&k| at(lambda, k) > 0.0).collect();
    let mut lambda_suffix = vec![0.0; len + 2];
    for k in (1..=len).rev() {
        lambda_suffix[k] = lambda_suffix[k + 1] + at(lambda, k);
    }
    let mut rhs = NeumaierSum::new();
    let mut prev = 0usize;
    for &nu in &nus {
        let block = csum((prev + 1..=nu).map(|k| at(alpha, k)));
        let l = at(lambda, nu);
        rhs.add(l.powf(1.0 - p) * lambda_suffix[nu].powf(p) * block.powf(p));
        prev = nu;
    }
    Ok(IneqReport::explicit(lhs.value(), rhs.value(), p.powf(p)))
}

/// Hardy-type bound for tail sums:
/// `sum_n λ_n (sum_{k>=n} α_k)^p <= p^p sum_j λ_{ν_j}^{1-p} (sum_{k<=ν_j} λ_k)^p (sum_{k=ν_j}^{ν_{j+1}-1} α_k)^p`
/// with the last block running to the end of the data.
pub fn hardy_34(lambda: &[f64], alpha: &[f64], p: f64) -> Result<IneqReport> {
    check_p(p)?;
    check_nonneg("lambda", lambda)?;
    check_nonneg("alpha", alpha)?;
    let len = lambda.len().max(alpha.len());

    let mut alpha_suffix = vec![0.0; len + 2];
    for k in (1..=len).rev() {
        alpha_suffix[k] = alpha_suffix[k + 1] + at(alpha, k);
    }
    let lhs = csum(
        (1..=len)
            .filter(|&n| at(lambda, n) > 0.0)
            .map(|n| at(lambda, n) * alpha_suffix[n].powf(p)),
    );

    let nus: Vec<usize> = (1..=len).filter(|&k| at(lambda, k) > 0.0).collect();
    let mut rhs = NeumaierSum::new();
    let mut lambda_prefix = NeumaierSum::new();
    let mut k_done = 0usize;
    for (j, &nu) in nus.iter().enumerate() {
        for k in k_done + 1..=nu {
            lambda_prefix.add(at(lambda, k));
        }
        k_done = nu;
        let next = nus.get(j + 1).copied().unwrap_or(len + 1);
        let block = csum((nu..next).map(|k| at(alpha, k)));
        let l = at(lambda, nu);
        rhs.add(l.powf(1.0 - p) * lambda_prefix.value().powf(p) * block.powf(p));
    }
    Ok(IneqReport::explicit(lhs, rhs.value(), p.powf(p)))
}

/// `sum_{ν >= from} ν^w a_ν^p`, including the analytic tail when present
/// (`+inf` if that tail diverges).
pub fn weighted_tail(a: &CoeffSeq, from: usize, w: f64, p: f64) -> f64 {
    let from = from.max(1);
    let finite = csum((from..=a.len()).map(|k| (k as f64).powf(w) * a.get(k).powf(p)));
    match a.tail() {
        Tail::Power { scale, beta } => {
            if scale == 0.0 {
                return finite;
            }
            let start = from.max(a.len() + 1);
            finite + scale.powf(p) * power_tail(beta * p - w, start)
        }
        Tail::Zero | Tail::Unresolved => finite,
    }
}

/// `sum_{ν=from}^{to} ν^w a_ν^p` over stored entries.
fn weighted_range(a: &CoeffSeq, from: usize, to: usize, w: f64, p: f64) -> f64 {
    csum((from.max(1)..=to).map(|k| (k as f64).powf(w) * a.value(k).powf(p)))
}

fn abs_delta(a: &CoeffSeq, k: usize) -> f64 {
    (a.value(k) - a.value(k + 1)).abs()
}

/// `sum_{k >= from} |Δa_k|`.
pub fn rest_variation(a: &CoeffSeq, from: usize) -> f64 {
    let n_len = a.len();
    let finite = csum((from.max(1)..=n_len).map(|k| abs_delta(a, k)));
    finite + a.continuation_variation(n_len.max(from.saturating_sub(1)))
}

/// `sum_{k>=n} |Δa_k|` against `a_n + a_{2n} + a_{4n} + sum_{k>=n} a_k / k`.
pub fn tail_variation_bound(a: &CoeffSeq, n: usize) -> Result<IneqReport> {
    check_index(n, 1, a.len())?;
    let lhs = rest_variation(a, n);
    let rhs = csum([
        a.value(n),
        a.value(2 * n),
        a.value(4 * n),
        weighted_tail(a, n, -1.0, 1.0),
    ]);
    Ok(IneqReport::empirical(lhs, rhs))
}

/// Common right side of the two sum-of-differences bounds:
/// `n^{-p} sum_{ν<n} ν^{2p-2} a_ν^p + sum_{ν>=n} ν^{p-2} a_ν^p`.
pub fn smoothness_rhs(a: &CoeffSeq, n: usize, p: f64) -> f64 {
    let n_f = n as f64;
    n_f.powf(-p) * weighted_range(a, 1, n - 1, 2.0 * p - 2.0, p) + weighted_tail(a, n, p - 2.0, p)
}

/// `n^{-p} sum_{m<n} m^{-2} (sum_{ν<=m} ν^2 |Δa_ν|)^p` against [`smoothness_rhs`].
pub fn lemma5_bound(a: &CoeffSeq, n: usize, p: f64) -> Result<IneqReport> {
    check_p(p)?;
    check_index(n, 2, a.len())?;
    let mut inner = NeumaierSum::new();
    let mut outer = NeumaierSum::new();
    for m in 1..n {
        let mf = m as f64;
        inner.add(mf * mf * abs_delta(a, m));
        outer.add(inner.value().powf(p) / (mf * mf));
    }
    let lhs = (n as f64).powf(-p) * outer.value();
    Ok(IneqReport::empirical(lhs, smoothness_rhs(a, n, p)))
}

/// `n^{-p} sum_{m<n} m^{p-2} (sum_{ν=m+1}^{n} ν |Δa_ν|)^p` against [`smoothness_rhs`].
pub fn lemma6_bound(a: &CoeffSeq, n: usize, p: f64) -> Result<IneqReport> {
    check_p(p)?;
    check_index(n, 2, a.len())?;
    // suffix[m] = sum_{ν=m}^{n} ν |Δa_ν|
    let mut suffix = vec![0.0; n + 2];
    let mut acc = NeumaierSum::new();
    for nu in (1..=n).rev() {
        acc.add(nu as f64 * abs_delta(a, nu));
        suffix[nu] = acc.value();
    }
    let outer = csum((1..n).map(|m| (m as f64).powf(p - 2.0) * suffix[m + 1].powf(p)));
    let lhs = (n as f64).powf(-p) * outer;
    Ok(IneqReport::empirical(lhs, smoothness_rhs(a, n, p)))
}

/// Block-mean bounds at scale `n`:
///
/// * first report: `a_n` against `n^{-1} sum_{k=[n/2]+1}^{2n-2} a_k`;
/// * second report: `n a_n` against `sum_{k=[n/2]}^{2n} a_k`, i.e. the block
///   sum dominates `n a_n` from below. `None` when `a_n = 0`.
pub fn block_mean_bound(a: &CoeffSeq, n: usize) -> Result<(IneqReport, Option<IneqReport>)> {
    let hi = if a.is_resolved() { usize::MAX / 4 } else { a.len() / 2 };
    check_index(n, 2, hi)?;
    let n_f = n as f64;
    let an = a.value(n);
    let mean = csum((n / 2 + 1..=2 * n - 2).map(|k| a.value(k))) / n_f;
    let first = IneqReport::empirical(an, mean);
    let second = (an > 0.0).then(|| {
        let block = csum((n / 2..=2 * n).map(|k| a.value(k)));
        IneqReport::empirical(n_f * an, block)
    });
    Ok((first, second))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionMode {
    /// `sum n^{p-2} a_n^p`
    Eq21,
    /// `sum n^{2p-2} a_n^p`
    Eq28,
}

impl ConditionMode {
    pub fn weight(self, p: f64) -> f64 {
        match self {
            ConditionMode::Eq21 => p - 2.0,
            ConditionMode::Eq28 => 2.0 * p - 2.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionMode::Eq21 => "eq21",
            ConditionMode::Eq28 => "eq28",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionCurve {
    pub mode: ConditionMode,
    /// Cut-offs `M = 1, 2, 4, ...` up to `N`.
    pub schedule: Vec<usize>,
    pub partial_sums: Vec<f64>,
    pub verdict: Convergence,
    /// Full sum when an analytic tail is attached and converges.
    pub limit: Option<f64>,
}

pub fn coefficient_condition(
    a: &CoeffSeq,
    p: f64,
    mode: ConditionMode,
    rule: &IncrementRule,
) -> Result<ConditionCurve> {
    check_p(p)?;
    let w = mode.weight(p);
    let mut schedule = Vec::new();
    let mut m = 1usize;
    while m <= a.len() {
        schedule.push(m);
        m *= 2;
    }
    let mut partial_sums = Vec::with_capacity(schedule.len());
    let mut acc = NeumaierSum::new();
    let mut k = 0usize;
    for &cut in &schedule {
        while k < cut {
            k += 1;
            acc.add((k as f64).powf(w) * a.get(k).powf(p));
        }
        partial_sums.push(acc.value());
    }
    let verdict = rule.classify_partial_sums(&partial_sums);
    let limit = match a.tail() {
        Tail::Power { .. } => {
            let total = weighted_tail(a, 1, w, p);
            total.is_finite().then_some(total)
        }
        Tail::Zero => Some(weighted_tail(a, 1, w, p)),
        Tail::Unresolved => None,
    };
    Ok(ConditionCurve {
        mode,
        schedule,
        partial_sums,
        verdict,
        limit,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LemmaId {
    /// Hardy forward bound.
    L3a,
    /// Hardy tail bound.
    L3b,
    /// Tail variation.
    L4,
    L5,
    L6,
    /// `a_n` against the local block mean.
    L38,
    /// `n a_n` against the local block sum.
    L42,
}

impl LemmaId {
    pub const ALL: [LemmaId; 7] = [
        LemmaId::L3a,
        LemmaId::L3b,
        LemmaId::L4,
        LemmaId::L5,
        LemmaId::L6,
        LemmaId::L38,
        LemmaId::L42,
    ];

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "3a" => LemmaId::L3a,
            "3b" => LemmaId::L3b,
            "4" => LemmaId::L4,
            "5" => LemmaId::L5,
            "6" => LemmaId::L6,
            "38" => LemmaId::L38,
            "42" => LemmaId::L42,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LemmaId::L3a => "3a",
            LemmaId::L3b => "3b",
            LemmaId::L4 => "4",
            LemmaId::L5 => "5",
            LemmaId::L6 => "6",
            LemmaId::L38 => "38",
            LemmaId::L42 => "42",
        }
    }
}

/// One sequence-based check at scale `n`. `Ok(None)` means the check does
/// not apply at this point (the second block-mean report when `a_n = 0`).
pub fn sequence_check(a: &CoeffSeq, id: LemmaId, n: usize, p: f64) -> Result<Option<IneqReport>> {
    match id {
        LemmaId::L4 => tail_variation_bound(a, n).map(Some),
        LemmaId::L5 => lemma5_bound(a, n, p).map(Some),
        LemmaId::L6 => lemma6_bound(a, n, p).map(Some),
        LemmaId::L38 => block_mean_bound(a, n).map(|r| Some(r.0)),
        LemmaId::L42 => block_mean_bound(a, n).map(|r| r.1),
        LemmaId::L3a | LemmaId::L3b => Err(Error::param(
            "id",
            "the Hardy bounds take two free sequences; use hardy_random_suite",
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaSweep {
    pub id: LemmaId,
    pub points: Vec<(usize, Option<IneqReport>)>,
    pub trend: Trend,
}

impl LemmaSweep {
    pub fn max_ratio(&self) -> f64 {
        self.points
            .iter()
            .filter_map(|(_, r)| r.map(|r| r.ratio))
            .fold(0.0, f64::max)
    }
}

/// Evaluate one check along a ladder of scales (in parallel) and classify the
/// ratio trend. Points where the check does not apply are skipped by the
/// trend rule.
pub fn lemma_sweep(a: &CoeffSeq, id: LemmaId, ladder: &[usize], p: f64, rule: &TrendRule) -> Result<LemmaSweep> {
    let results = par::map(ladder, |&n| sequence_check(a, id, n, p));
    let mut points = Vec::with_capacity(ladder.len());
    for (&n, r) in ladder.iter().zip(results) {
        points.push((n, r?));
    }
    let ratios: Vec<f64> = points.iter().filter_map(|(_, r)| r.map(|r| r.ratio)).collect();
    let trend = rule.classify(&ratios);
    Ok(LemmaSweep { id, points, trend })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HardySuite {
    pub p: f64,
    pub cases: usize,
    pub failures: usize,
    /// Largest observed `lhs / (p^p rhs)`.
    pub worst_normalized: f64,
}

/// Random nonnegative pairs of length `1..=max_len`; roughly a third of the
/// entries are zero so the positive-index bookkeeping is exercised.
pub fn random_pair(rng: &mut impl Rng, max_len: usize) -> (Vec<f64>, Vec<f64>) {
    let len = rng.random_range(1..=max_len.max(1));
    let lambda = random_entries(rng, len);
    let alpha = random_entries(rng, len);
    (lambda, alpha)
}

fn random_entries(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    (0..len)
        .map(|_| {
            if rng.random_bool(0.3) {
                0.0
            } else {
                let mag: f64 = rng.random_range(-3.0..3.0);
                rng.random::<f64>() * 10f64.powf(mag)
            }
        })
        .collect()
}

/// Run one Hardy bound on `count` seeded random pairs.
pub fn hardy_random_suite(id: LemmaId, p: f64, count: usize, max_len: usize, seed: u64) -> Result<HardySuite> {
    let check = match id {
        LemmaId::L3a => hardy_33,
        LemmaId::L3b => hardy_34,
        _ => return Err(Error::param("id", "random suites exist only for 3a and 3b")),
    };
    check_p(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<_> = (0..count).map(|_| random_pair(&mut rng, max_len)).collect();
    let reports = par::map(&pairs, |(l, a)| check(l, a, p));
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for r in reports {
        let r = r?;
        if !r.holds {
            failures += 1;
        }
        worst = worst.max(ratio(r.lhs, r.constant_bound * r.rhs));
    }
    Ok(HardySuite {
        p,
        cases: count,
        failures,
        worst_normalized: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqclass::{generate_family, SeqFamily};

    fn seq(v: &[f64]) -> CoeffSeq {
        CoeffSeq::new(v.to_vec()).unwrap()
    }

    #[test]
    fn hardy_33_examples() {
        let r = hardy_33(&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0], 2.0).unwrap();
        assert_eq!((r.lhs, r.rhs, r.constant_bound), (14.0, 14.0, 4.0));
        assert!(r.holds);
        let r = hardy_33(&[0.0; 5], &[1.0, 2.0, 3.0, 4.0, 5.0], 2.0).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        assert!(r.holds);
    }

    #[test]
    fn hardy_34_examples() {
        let r = hardy_34(&[1.0], &[1.0], 2.0).unwrap();
        assert_eq!((r.lhs, r.rhs), (1.0, 1.0));
        assert!(r.holds);
        let r = hardy_34(&[0.0, 1.0], &[1.0, 1.0], 2.0).unwrap();
        assert_eq!((r.lhs, r.rhs), (1.0, 1.0));
        assert!(r.holds);
    }

    #[test]
    fn hardy_rejects_bad_input() {
        assert!(hardy_33(&[1.0], &[1.0], 1.0).is_err());
        assert!(hardy_33(&[-1.0], &[1.0], 2.0).is_err());
        assert!(hardy_34(&[1.0], &[f64::NAN], 2.0).is_err());
    }

    #[test]
    fn tail_variation_harmonic() {
        let a = generate_family(&SeqFamily::power(1.0, 1024)).unwrap();
        let r = tail_variation_bound(&a, 8).unwrap();
        assert!((r.lhs - 0.125).abs() < 1e-15);
        // oracle: brute-force sum of k^{-2} to 4e6 plus integral remainder
        let tail: f64 = (8..4_000_000u64).map(|k| 1.0 / (k as f64 * k as f64)).sum::<f64>() + 1.0 / 4e6;
        let rhs = 0.125 + 0.0625 + 0.03125 + tail;
        assert!((r.rhs - rhs).abs() < 1e-9, "{} vs {rhs}", r.rhs);
        assert!((r.ratio - 0.355_227_657_686).abs() < 1e-11, "{}", r.ratio);
        let zero = tail_variation_bound(&seq(&[0.0; 4]), 2).unwrap();
        assert_eq!((zero.lhs, zero.rhs, zero.ratio), (0.0, 0.0, 0.0));
        assert!(tail_variation_bound(&a, 0).is_err());
        assert!(tail_variation_bound(&a, 1025).is_err());
    }

    #[test]
    fn lemma5_unit_vector() {
        let mut v = vec![0.0; 8];
        v[0] = 1.0;
        let r = lemma5_bound(&seq(&v), 4, 2.0).unwrap();
        assert!((r.lhs - (1.0 + 0.25 + 1.0 / 9.0) / 16.0).abs() < 1e-15);
        assert!((r.rhs - 1.0 / 16.0).abs() < 1e-15);
        assert!((r.ratio - 49.0 / 36.0).abs() < 1e-14);
        let z = lemma5_bound(&seq(&[0.0; 8]), 4, 2.0).unwrap();
        assert_eq!((z.lhs, z.rhs), (0.0, 0.0));
        assert!(lemma5_bound(&seq(&v), 1, 2.0).is_err());
        assert!(lemma5_bound(&seq(&v), 4, 1.0).is_err());
    }

    #[test]
    fn lemma6_unit_vector_is_zero() {
        let mut v = vec![0.0; 8];
        v[0] = 1.0;
        let r = lemma6_bound(&seq(&v), 4, 2.0).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(r.holds);
    }

    #[test]
    fn lemma6_harmonic_pinned() {
        // direct double loop oracle, no suffix sums
        let a = generate_family(&SeqFamily::power(1.0, 64)).unwrap();
        let n = 8usize;
        let p = 2.0;
        let d = |k: usize| 1.0 / k as f64 - 1.0 / (k + 1) as f64;
        let lhs: f64 = (1..n)
            .map(|m| {
                let inner: f64 = (m + 1..=n).map(|v| v as f64 * d(v)).sum();
                (m as f64).powf(p - 2.0) * inner.powf(p)
            })
            .sum::<f64>()
            / (n as f64).powf(p);
        let r = lemma6_bound(&a, n, p).unwrap();
        assert!((r.lhs - lhs).abs() < 1e-15);
        let head: f64 = (1..n).map(|v| (v as f64).powf(2.0) * (1.0 / v as f64).powf(2.0)).sum::<f64>() / 64.0;
        let tail = crate::sum::power_tail(2.0, n);
        assert!((r.rhs - (head + tail)).abs() < 1e-14);
    }

    #[test]
    fn block_mean_examples() {
        let a = generate_family(&SeqFamily::power(1.0, 64)).unwrap();
        let (_, second) = block_mean_bound(&a, 16).unwrap();
        let second = second.unwrap();
        let harmonic: f64 = (8..=32).map(|k| 1.0 / k as f64).sum();
        assert!((second.rhs - harmonic).abs() < 1e-14);
        assert!((second.rhs - 1.465_638_052_579_377_7).abs() < 1e-12);
        assert!((second.lhs - 1.0).abs() < 1e-15);

        let mut v = vec![0.0; 8];
        v[0] = 1.0;
        let (first, second) = block_mean_bound(&seq(&v), 4).unwrap();
        assert_eq!(first.lhs, 0.0);
        assert!(first.holds);
        assert!(second.is_none());
    }

    #[test]
    fn coefficient_condition_examples() {
        let rule = IncrementRule::default();
        let a = generate_family(&SeqFamily::power(1.0, 1 << 14)).unwrap();
        let c = coefficient_condition(&a, 2.0, ConditionMode::Eq21, &rule).unwrap();
        assert_eq!(c.verdict, Convergence::Convergent);
        let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((c.limit.unwrap() - zeta2).abs() < 1e-12);
        let c = coefficient_condition(&a, 2.0, ConditionMode::Eq28, &rule).unwrap();
        assert_eq!(c.verdict, Convergence::Divergent);
        for (m, s) in c.schedule.iter().zip(&c.partial_sums) {
            assert_eq!(*s, *m as f64);
        }
        assert!(c.limit.is_none());
        let a = generate_family(&SeqFamily::power(1.8, 1 << 14)).unwrap();
        let c = coefficient_condition(&a, 2.0, ConditionMode::Eq28, &rule).unwrap();
        assert_eq!(c.verdict, Convergence::Convergent);
    }

    #[test]
    fn random_suite_small() {
        let s = hardy_random_suite(LemmaId::L3a, 2.0, 50, 16, 7).unwrap();
        assert_eq!(s.failures, 0);
        let s = hardy_random_suite(LemmaId::L3b, 1.5, 50, 16, 7).unwrap();
        assert_eq!(s.failures, 0);
    }
}
