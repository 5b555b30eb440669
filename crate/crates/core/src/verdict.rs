//! Fixed rules that turn finite evidence into verdicts.
//!
//! Two kinds of evidence show up everywhere: a ratio measured along a
//! doubling ladder (is it bounded?) and a sequence of increments of a
//! truncated series (does it converge?). Both rules look only at the last
//! few doublings so pre-asymptotic behaviour does not decide the outcome.

use serde::{Deserialize, Serialize};

/// `0/0 -> 0`, `x/0 -> inf` for `x > 0`.
pub fn ratio(lhs: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        lhs / rhs
    } else if lhs > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Bounded,
    Growing,
    Decaying,
}

impl Trend {
    pub fn as_str(self) -> &'static str {
        match self {
            Trend::Bounded => "bounded",
            Trend::Growing => "growing",
            Trend::Decaying => "decaying",
        }
    }

    /// A ratio that does not grow is bounded above.
    pub fn bounded_above(self) -> bool {
        self != Trend::Growing
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendRule {
    /// Per-doubling factor that counts as growth (1.15 = 15%).
    pub growth: f64,
    /// Number of trailing doublings inspected.
    pub window: usize,
}

impl Default for TrendRule {
    fn default() -> Self {
        Self {
            growth: 1.15,
            window: 3,
        }
    }
}

impl TrendRule {
    /// Growing iff two consecutive doublings inside the window each raise the
    /// ratio by at least `growth`; decaying iff two consecutive doublings each
    /// shrink it by that factor; bounded otherwise.
    pub fn classify(&self, ratios: &[f64]) -> Trend {
        if ratios.iter().any(|r| r.is_infinite() || r.is_nan()) {
            return Trend::Growing;
        }
        if ratios.len() < 3 {
            return Trend::Bounded;
        }
        let start = ratios.len().saturating_sub(self.window + 1);
        let tail = &ratios[start..];
        let steps: Vec<f64> = tail.windows(2).map(|w| ratio(w[1], w[0])).collect();
        let up = |s: f64| s >= self.growth;
        let down = |s: f64| s * self.growth <= 1.0;
        let has_pair = |pred: &dyn Fn(f64) -> bool| steps.windows(2).any(|w| pred(w[0]) && pred(w[1]));
        // a zero ratio that stays zero is flat, not decaying
        let all_zero = tail.iter().all(|&r| r == 0.0);
        if has_pair(&up) {
            Trend::Growing
        } else if !all_zero && has_pair(&down) {
            Trend::Decaying
        } else {
            Trend::Bounded
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convergence {
    Convergent,
    Divergent,
}

impl Convergence {
    pub fn as_str(self) -> &'static str {
        match self {
            Convergence::Convergent => "convergent",
            Convergence::Divergent => "divergent",
        }
    }

    pub fn is_convergent(self) -> bool {
        self == Convergence::Convergent
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncrementRule {
    /// Largest admissible ratio of successive increments.
    pub max_ratio: f64,
    /// Number of trailing increment ratios that must satisfy it.
    pub window: usize,
}

impl Default for IncrementRule {
    fn default() -> Self {
        Self {
            max_ratio: 0.9,
            window: 3,
        }
    }
}

impl IncrementRule {
    /// Classify a series from its increments along a doubling schedule
    /// (increment `j` is the mass added between `2^{j-1}` and `2^j`).
    pub fn classify(&self, increments: &[f64]) -> Convergence {
        if increments.iter().any(|x| !x.is_finite()) {
            return Convergence::Divergent;
        }
        let mags: Vec<f64> = increments.iter().map(|x| x.abs()).collect();
        if mags.iter().all(|&x| x == 0.0) {
            return Convergence::Convergent;
        }
        if mags.len() < self.window + 1 {
            return Convergence::Divergent;
        }
        let tail = &mags[mags.len() - self.window - 1..];
        let decays = tail.windows(2).all(|w| ratio(w[1], w[0]) <= self.max_ratio);
        if decays {
            Convergence::Convergent
        } else {
            Convergence::Divergent
        }
    }

    pub fn classify_partial_sums(&self, sums: &[f64]) -> Convergence {
        let mut inc = Vec::with_capacity(sums.len());
        let mut prev = 0.0;
        for &s in sums {
            inc.push(s - prev);
            prev = s;
        }
        self.classify(&inc)
    }
}
