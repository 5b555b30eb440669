//! Nonnegative coefficient sequences and their variation classes.
//!
//! A [`CoeffSeq`] stores `a_1..a_N`. What lies beyond `N` is described by its
//! [`Tail`]: exact zeros for explicit vectors, an analytic power law for the
//! `power` family, or "unresolved" for family prefixes whose continuation is
//! not summed in closed form.
//!
//! [`classify`] measures the smallest constant for which each defining
//! inequality holds on the available indices:
//!
//! * RBVS: `sum_{k>=m} |Δa_k| <= K a_m`
//! * GBVS: `sum_{k=n}^{2n} |Δa_k| <= K a_n`
//! * NBVS: `sum_{k=n}^{2n} |Δa_k| <= K (a_n + a_{2n})`
//! * CQMS: `a_{n+1} <= a_n (1 + α/n)`
//!
//! with `Δa_k = a_k - a_{k+1}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::verdict::ratio;
use crate::{Error, Result};

/// Continuation of a coefficient prefix beyond its last stored index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Tail {
    /// The sequence is exactly zero after `N`.
    Zero,
    /// `a_n = scale * n^{-beta}` for every `n > N`.
    Power { scale: f64, beta: f64 },
    /// Prefix of an infinite family; entries after `N` are not known here.
    /// Class ratios only use blocks that close strictly inside the prefix and
    /// series sums stop at `N`.
    Unresolved,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeq {
    values: Vec<f64>,
    tail: Tail,
}

impl CoeffSeq {
    /// Finite-support sequence `a_1..a_N` followed by zeros.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSequence("need at least one coefficient".into()));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidSequence(format!(
                "a_{} = {v} is not a finite nonnegative number",
                i + 1
            )));
        }
        Ok(Self {
            values,
            tail: Tail::Zero,
        })
    }

    pub fn with_tail(mut self, tail: Tail) -> Result<Self> {
        if let Tail::Power { scale, beta } = tail {
            if !(scale.is_finite() && scale >= 0.0) {
                return Err(Error::param("scale", "must be finite and nonnegative"));
            }
            if !(beta.is_finite() && beta > 0.0) {
                return Err(Error::param("beta", "must be positive"));
            }
        }
        self.tail = tail;
        Ok(self)
    }

    /// Truncation length `N`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// `a_n` with finite-support semantics: zero for `n = 0` and `n > N`.
    pub fn get(&self, n: usize) -> f64 {
        if n == 0 {
            0.0
        } else {
            self.values.get(n - 1).copied().unwrap_or(0.0)
        }
    }

    /// `a_n` including an analytic continuation when one is attached.
    pub fn value(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        if n <= self.len() {
            return self.values[n - 1];
        }
        match self.tail {
            Tail::Power { scale, beta } => scale * (n as f64).powf(-beta),
            Tail::Zero | Tail::Unresolved => 0.0,
        }
    }

    /// Whether indices past `N` are known (zero or analytic).
    pub fn is_resolved(&self) -> bool {
        !matches!(self.tail, Tail::Unresolved)
    }

    /// Whether the block `[n, 2n]` and its closing difference are determined.
    pub fn block_resolved(&self, n: usize) -> bool {
        self.is_resolved() || 2 * n < self.len()
    }

    /// `sum_{k > from} |Δa_k|` over the continuation, for `from >= N`.
    pub(crate) fn continuation_variation(&self, from: usize) -> f64 {
        debug_assert!(from >= self.len());
        match self.tail {
            // power tails decrease to zero, so their variation telescopes
            Tail::Power { .. } => self.value(from + 1),
            Tail::Zero | Tail::Unresolved => 0.0,
        }
    }

    /// `c * a` with the tail scaled alike.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::param("c", "scale factor must be positive"));
        }
        let tail = match self.tail {
            Tail::Power { scale, beta } => Tail::Power {
                scale: scale * c,
                beta,
            },
            t => t,
        };
        CoeffSeq::new(self.values.iter().map(|v| v * c).collect())?.with_tail(tail)
    }

    /// First `len` coefficients; the tail kind is kept, so a power prefix
    /// still continues analytically.
    pub fn prefix(&self, len: usize) -> Result<Self> {
        let len = len.min(self.len());
        CoeffSeq::new(self.values[..len].to_vec())?.with_tail(self.tail)
    }

    /// Same coefficients with an exact zero tail.
    pub fn finite(&self) -> Self {
        Self {
            values: self.values.clone(),
            tail: Tail::Zero,
        }
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
    }
}

/// `Δa_n = a_n - a_{n+1}` for `n = 1..N`, with `a_{N+1} = 0`.
pub fn diff_sequence(a: &CoeffSeq) -> Vec<f64> {
    (1..=a.len()).map(|n| a.get(n) - a.get(n + 1)).collect()
}

/// Parametric generators for test sequences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Family {
    /// `a_n = n^{-beta}`.
    Power { beta: f64 },
    /// `a_n = n^{-beta} (ln(e + n))^{gamma}`.
    PowerLog { beta: f64, gamma: f64 },
    /// `a_n = rho^{k+1}` on `[4^k, 2*4^k]`, zero in the gaps.
    BlockWitness { rho: f64 },
    /// `a_n = c` for even `n`, zero for odd `n`.
    Alternating { c: f64 },
    /// User-supplied nonincreasing values.
    MonotoneCustom { values: Vec<f64> },
    /// User-supplied values.
    Explicit { values: Vec<f64> },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Power { .. } => "power",
            Family::PowerLog { .. } => "power_log",
            Family::BlockWitness { .. } => "block_witness",
            Family::Alternating { .. } => "alternating",
            Family::MonotoneCustom { .. } => "monotone_custom",
            Family::Explicit { .. } => "explicit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeqFamily {
    pub family: Family,
    /// Truncation length `N`.
    pub len: usize,
}

impl SeqFamily {
    pub fn new(family: Family, len: usize) -> Self {
        Self { family, len }
    }

    pub fn power(beta: f64, len: usize) -> Self {
        Self::new(Family::Power { beta }, len)
    }

    pub fn block_witness(rho: f64, len: usize) -> Self {
        Self::new(Family::BlockWitness { rho }, len)
    }

    pub fn alternating(c: f64, len: usize) -> Self {
        Self::new(Family::Alternating { c }, len)
    }

    pub fn explicit(values: Vec<f64>) -> Self {
        let len = values.len();
        Self::new(Family::Explicit { values }, len)
    }

    pub fn with_len(&self, len: usize) -> Self {
        let mut s = self.clone();
        s.len = len;
        s
    }

    pub fn generate(&self) -> Result<CoeffSeq> {
        generate_family(self)
    }
}

impl fmt::Display for SeqFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Power { beta } => write!(f, "power(beta={beta})"),
            Family::PowerLog { beta, gamma } => write!(f, "power_log(beta={beta};gamma={gamma})"),
            Family::BlockWitness { rho } => write!(f, "block_witness(rho={rho})"),
            Family::Alternating { c } => write!(f, "alternating(c={c})"),
            Family::MonotoneCustom { .. } => write!(f, "monotone_custom"),
            Family::Explicit { .. } => write!(f, "explicit"),
        }
    }
}

fn block_witness_value(rho: f64, n: usize) -> f64 {
    // block k covers [4^k, 2*4^k]
    let mut start = 1usize;
    let mut k = 0i32;
    while start <= n {
        if n <= 2 * start {
            return rho.powi(k + 1);
        }
        start = start.saturating_mul(4);
        k += 1;
    }
    0.0
}

pub fn generate_family(spec: &SeqFamily) -> Result<CoeffSeq> {
    let n = spec.len;
    if n < 1 {
        return Err(Error::param("N", "truncation length must be at least 1"));
    }
    let idx = || (1..=n).map(|k| k as f64);
    match &spec.family {
        Family::Power { beta } => {
            check_beta(*beta)?;
            let values = idx().map(|k| k.powf(-beta)).collect();
            CoeffSeq::new(values)?.with_tail(Tail::Power {
                scale: 1.0,
                beta: *beta,
            })
        }
        Family::PowerLog { beta, gamma } => {
            check_beta(*beta)?;
            if !gamma.is_finite() {
                return Err(Error::param("gamma", "must be finite"));
            }
            let e = std::f64::consts::E;
            let values = idx().map(|k| k.powf(-beta) * (e + k).ln().powf(*gamma)).collect();
            CoeffSeq::new(values)?.with_tail(Tail::Unresolved)
        }
        Family::BlockWitness { rho } => {
            if !(*rho > 0.0 && *rho < 1.0) {
                return Err(Error::param("rho", "must lie in (0, 1)"));
            }
            let values = (1..=n).map(|k| block_witness_value(*rho, k)).collect();
            CoeffSeq::new(values)?.with_tail(Tail::Unresolved)
        }
        Family::Alternating { c } => {
            if !(c.is_finite() && *c > 0.0) {
                return Err(Error::param("c", "must be positive"));
            }
            let values = (1..=n).map(|k| if k % 2 == 0 { *c } else { 0.0 }).collect();
            CoeffSeq::new(values)?.with_tail(Tail::Unresolved)
        }
        Family::MonotoneCustom { values } => {
            let seq = explicit_values(values, n)?;
            if !seq.is_nonincreasing() {
                return Err(Error::InvalidSequence("monotone_custom values must be nonincreasing".into()));
            }
            Ok(seq)
        }
        Family::Explicit { values } => explicit_values(values, n),
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::param("beta", "must be positive"))
    }
}

fn explicit_values(values: &[f64], n: usize) -> Result<CoeffSeq> {
    if values.len() != n {
        return Err(Error::param(
            "N",
            format!("explicit family has {} values but N = {n}", values.len()),
        ));
    }
    CoeffSeq::new(values.to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeqClass {
    Rbvs,
    Cqms,
    Gbvs,
    Nbvs,
}

impl SeqClass {
    pub const ALL: [SeqClass; 4] = [SeqClass::Rbvs, SeqClass::Cqms, SeqClass::Gbvs, SeqClass::Nbvs];

    pub fn as_str(self) -> &'static str {
        match self {
            SeqClass::Rbvs => "RBVS",
            SeqClass::Cqms => "CQMS",
            SeqClass::Gbvs => "GBVS",
            SeqClass::Nbvs => "NBVS",
        }
    }
}

/// Minimal constant for one class on one truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassConstant {
    pub k_min: f64,
    /// Index attaining `k_min` (first one on ties); 0 when no index applies.
    pub witness_index: usize,
    /// Same constant measured on the half-length prefix.
    pub k_half: f64,
    /// `k_min` finite and `k_min <= factor * k_half`.
    pub stable: bool,
}

impl ClassConstant {
    pub fn is_finite(&self) -> bool {
        self.k_min.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassReport {
    pub len: usize,
    pub rbvs: ClassConstant,
    pub cqms: ClassConstant,
    pub gbvs: ClassConstant,
    pub nbvs: ClassConstant,
}

impl ClassReport {
    pub fn get(&self, class: SeqClass) -> &ClassConstant {
        match class {
            SeqClass::Rbvs => &self.rbvs,
            SeqClass::Cqms => &self.cqms,
            SeqClass::Gbvs => &self.gbvs,
            SeqClass::Nbvs => &self.nbvs,
        }
    }

    /// `RBVS >= GBVS >= NBVS` wherever the larger side is finite.
    pub fn chain_holds(&self) -> bool {
        let le = |small: f64, big: f64| !big.is_finite() || small <= big;
        le(self.gbvs.k_min, self.rbvs.k_min) && le(self.nbvs.k_min, self.gbvs.k_min)
    }
}

/// Stability factor used by [`classify`].
pub const DEFAULT_STABILITY: f64 = 1.1;

pub fn classify(a: &CoeffSeq) -> ClassReport {
    classify_with(a, DEFAULT_STABILITY)
}

pub fn classify_with(a: &CoeffSeq, stability: f64) -> ClassReport {
    let full = raw_constants(a);
    let half = if a.len() >= 2 {
        // a prefix of a valid sequence is valid
        raw_constants(&a.prefix(a.len() / 2).expect("nonempty prefix"))
    } else {
        full
    };
    let pack = |i: usize| {
        let (k, w) = full[i];
        let (kh, _) = half[i];
        ClassConstant {
            k_min: k,
            witness_index: w,
            k_half: kh,
            stable: k.is_finite() && kh.is_finite() && k <= stability * kh + 1e-12,
        }
    };
    ClassReport {
        len: a.len(),
        rbvs: pack(0),
        cqms: pack(1),
        gbvs: pack(2),
        nbvs: pack(3),
    }
}

/// `(true, report)` iff the embedding chain holds on the measured constants.
pub fn embedding_audit(a: &CoeffSeq) -> (bool, ClassReport) {
    let report = classify(a);
    (report.chain_holds(), report)
}

fn argmax(ratios: impl Iterator<Item = (usize, f64)>) -> (f64, usize) {
    let mut best = (0.0, 0usize);
    for (i, r) in ratios {
        if r > best.0 || (best.1 == 0 && r == best.0) {
            best = (r, i);
        }
    }
    best
}

/// `[rbvs, cqms, gbvs, nbvs]` as `(k_min, witness)`.
fn raw_constants(a: &CoeffSeq) -> [(f64, usize); 4] {
    let n_len = a.len();
    let upper = if a.is_resolved() { 2 * n_len } else { n_len };
    // suffix[m] = sum_{k >= m} |Δa_k|; suffix sums of nonnegative terms are
    // monotone in floating point, so block sums below never exceed them.
    let mut suffix = vec![0.0; upper + 2];
    suffix[upper + 1] = a.continuation_variation(upper);
    for k in (1..=upper).rev() {
        suffix[k] = suffix[k + 1] + (a.value(k) - a.value(k + 1)).abs();
    }

    let rbvs = argmax((1..=n_len).map(|m| (m, ratio(suffix[m], a.value(m)))));

    let block = |n: usize| suffix[n] - suffix[2 * n + 1];
    let admissible = || (1..=n_len).filter(|&n| a.block_resolved(n));
    let gbvs = argmax(admissible().map(|n| (n, ratio(block(n), a.value(n)))));
    let nbvs = argmax(admissible().map(|n| (n, ratio(block(n), a.value(n) + a.value(2 * n)))));

    let last = (1..=n_len).rev().find(|&n| a.get(n) > 0.0).unwrap_or(0);
    let cqms = argmax((1..last).map(|n| {
        let (cur, next) = (a.get(n), a.get(n + 1));
        let alpha = if cur > 0.0 {
            (n as f64 * (next / cur - 1.0)).max(0.0)
        } else if next > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        (n, alpha)
    }));

    [
        (rbvs.0, rbvs.1),
        (cqms.0, cqms.1),
        (gbvs.0, gbvs.1),
        (nbvs.0, nbvs.1),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[f64]) -> CoeffSeq {
        CoeffSeq::new(v.to_vec()).unwrap()
    }

    #[test]
    fn diff_examples() {
        assert_eq!(diff_sequence(&seq(&[1.0, 0.5, 0.25])), vec![0.5, 0.25, 0.25]);
        assert_eq!(diff_sequence(&seq(&[0.0, 0.0, 0.0])), vec![0.0, 0.0, 0.0]);
        assert_eq!(diff_sequence(&seq(&[1.0, 1.0, 1.0])), vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn rejects_bad_sequences() {
        assert!(CoeffSeq::new(vec![]).is_err());
        assert!(CoeffSeq::new(vec![1.0, -0.1]).is_err());
        assert!(CoeffSeq::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn generate_examples() {
        let p = generate_family(&SeqFamily::power(1.0, 4)).unwrap();
        assert_eq!(p.values(), &[1.0, 0.5, 1.0 / 3.0, 0.25]);
        let e = generate_family(&SeqFamily::explicit(vec![2.0, 1.0])).unwrap();
        assert_eq!(e.values(), &[2.0, 1.0]);
        let b = generate_family(&SeqFamily::block_witness(0.5, 10)).unwrap();
        assert_eq!(
            b.values(),
            &[0.5, 0.5, 0.0, 0.25, 0.25, 0.25, 0.25, 0.25, 0.0, 0.0]
        );
        let alt = generate_family(&SeqFamily::alternating(1.0, 4)).unwrap();
        assert_eq!(alt.values(), &[0.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn generate_rejects_bad_params() {
        assert!(generate_family(&SeqFamily::power(0.0, 4)).is_err());
        assert!(generate_family(&SeqFamily::power(-1.0, 4)).is_err());
        assert!(generate_family(&SeqFamily::block_witness(1.0, 4)).is_err());
        assert!(generate_family(&SeqFamily::block_witness(0.0, 4)).is_err());
        assert!(generate_family(&SeqFamily::power(1.0, 0)).is_err());
        let bad = SeqFamily::new(Family::MonotoneCustom { values: vec![1.0, 2.0] }, 2);
        assert!(generate_family(&bad).is_err());
    }

    #[test]
    fn harmonic_sequence_constants() {
        for tail in [Tail::Zero, Tail::Power { scale: 1.0, beta: 1.0 }] {
            let a = generate_family(&SeqFamily::power(1.0, 64))
                .unwrap()
                .with_tail(tail)
                .unwrap();
            let r = classify(&a);
            assert!((r.rbvs.k_min - 1.0).abs() < 1e-12, "{:?}", r.rbvs);
            assert!(r.gbvs.k_min <= 1.0 + 1e-12);
            assert!(r.nbvs.k_min <= 1.0 + 1e-12);
            assert_eq!(r.cqms.k_min, 0.0);
            assert!(r.chain_holds());
            assert!(r.nbvs.stable && r.rbvs.stable);
        }
    }

    #[test]
    fn alternating_constant_doubles() {
        // brute-force oracle: NBVS ratio over every admissible n
        fn brute(n_len: usize) -> f64 {
            let a: Vec<f64> = (1..=n_len + 1).map(|k| if k % 2 == 0 { 1.0 } else { 0.0 }).collect();
            let at = |k: usize| a[k - 1];
            (1..=n_len)
                .filter(|n| 2 * n < n_len)
                .map(|n| {
                    let var: f64 = (n..=2 * n).map(|m| (at(m) - at(m + 1)).abs()).sum();
                    var / (at(n) + at(2 * n))
                })
                .fold(0.0, f64::max)
        }
        let mut prev = None;
        for n_len in [16, 32, 64] {
            let a = generate_family(&SeqFamily::alternating(1.0, n_len)).unwrap();
            let r = classify(&a);
            assert_eq!(r.nbvs.k_min, brute(n_len));
            assert!(!r.nbvs.stable);
            assert!(r.gbvs.k_min.is_infinite());
            if let Some(p) = prev {
                assert_eq!(r.nbvs.k_min, 2.0 * p);
            }
            prev = Some(r.nbvs.k_min);
        }
        assert_eq!(prev, Some(32.0));
    }

    #[test]
    fn block_witness_is_nbvs_not_gbvs() {
        for n_len in [128, 512] {
            let a = generate_family(&SeqFamily::block_witness(0.5, n_len)).unwrap();
            let r = classify(&a);
            assert!(r.gbvs.k_min.is_infinite());
            assert!(r.rbvs.k_min.is_infinite());
            assert!(r.cqms.k_min.is_infinite());
            assert_eq!(r.nbvs.k_min, 1.0);
            assert!(r.nbvs.stable);
            assert!(r.chain_holds());
        }
    }

    #[test]
    fn finite_support_blocks_reach_past_n() {
        // (1,1,1): the block [2,4] sees the drop at index 3
        let r = classify(&seq(&[1.0, 1.0, 1.0]));
        assert_eq!(r.gbvs.k_min, 1.0);
        assert_eq!(r.gbvs.witness_index, 2);
        assert_eq!(r.rbvs.k_min, 1.0);
    }

    #[test]
    fn zero_ratio_conventions() {
        let r = classify(&seq(&[0.0, 0.0, 0.0]));
        for c in SeqClass::ALL {
            assert_eq!(r.get(c).k_min, 0.0);
        }
        // a gap followed by mass is an infinite violation
        let r = classify(&seq(&[1.0, 0.0, 1.0]));
        assert!(r.gbvs.k_min.is_infinite());
        assert!(r.cqms.k_min.is_infinite());
        assert_eq!(r.cqms.witness_index, 2);
    }

    #[test]
    fn cqms_alpha() {
        // a_2 = 1.5 a_1 needs alpha >= 1 * 0.5
        let r = classify(&seq(&[1.0, 1.5, 1.0]));
        assert!((r.cqms.k_min - 0.5).abs() < 1e-15);
        assert_eq!(r.cqms.witness_index, 1);
    }
}
