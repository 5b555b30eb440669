//! Cosine/sine polynomials on a uniform periodic grid.
//!
//! All norms are taken over one full period `[0, 2π)` with the trapezoid
//! rule, which is exact for `|g|^2` when `g` is a trigonometric polynomial of
//! degree below `M/2` and spectrally accurate otherwise. Half-period
//! integrals `∫_0^π` of the even functions `|f|^p`, `|Δ_t^2 f|^p` are half of
//! the full-period ones.
//!
//! Shifted copies are never interpolated: `f(x + t)` is synthesised from the
//! phase-shifted coefficients `a_n e^{int}`. For `p = 2` the difference norms
//! skip the grid and use Parseval directly, which is exact and `O(N)`.

use std::f64::consts::{E, PI};
use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::par;
use crate::seqclass::CoeffSeq;
use crate::sum::{csum, NeumaierSum};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Cosine,
    Sine,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Cosine => "cos",
            Parity::Sine => "sin",
        }
    }

    fn part(self, z: Complex<f64>) -> f64 {
        match self {
            Parity::Cosine => z.re,
            Parity::Sine => z.im,
        }
    }
}

/// `f(x) = sum_{n=1}^{N} a_n cos(nx)` or `sum a_n sin(nx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    parity: Parity,
    coeffs: CoeffSeq,
}

impl TrigPoly {
    pub fn new(parity: Parity, coeffs: CoeffSeq) -> Self {
        Self { parity, coeffs }
    }

    pub fn cosine(values: Vec<f64>) -> Result<Self> {
        Ok(Self::new(Parity::Cosine, CoeffSeq::new(values)?))
    }

    pub fn sine(values: Vec<f64>) -> Result<Self> {
        Ok(Self::new(Parity::Sine, CoeffSeq::new(values)?))
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn coeffs(&self) -> &CoeffSeq {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    fn a(&self) -> &[f64] {
        self.coeffs.values()
    }

    /// Naive pointwise summation.
    pub fn eval_direct(&self, x: f64) -> f64 {
        let terms = self.a().iter().enumerate().map(|(i, a)| {
            let nx = (i + 1) as f64 * x;
            a * match self.parity {
                Parity::Cosine => nx.cos(),
                Parity::Sine => nx.sin(),
            }
        });
        csum(terms)
    }

    /// `S_n f`, the first `n` terms.
    pub fn partial(&self, n: usize) -> Result<Self> {
        Ok(Self::new(self.parity, self.coeffs.prefix(n.max(1))?.finite()))
    }

    /// `L^2` norm over a period by Parseval: `sqrt(π sum a_n^2)`.
    pub fn l2_norm_exact(&self) -> f64 {
        (PI * csum(self.a().iter().map(|a| a * a))).sqrt()
    }
}

/// Uniform grid `x_j = 2πj/M` with an FFT plan of length `M`.
#[derive(Clone)]
pub struct Grid {
    m: usize,
    fft: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("m", &self.m).finish()
    }
}

impl Grid {
    pub fn new(m: usize) -> Result<Self> {
        if m < 8 || !m.is_power_of_two() {
            return Err(Error::param("M", format!("grid size must be a power of two >= 8, got {m}")));
        }
        let fft = FftPlanner::new().plan_fft_inverse(m);
        Ok(Self { m, fft })
    }

    /// Smallest admissible grid for degree `n`.
    pub fn for_degree(n: usize) -> Result<Self> {
        Self::new((4 * n + 4).next_power_of_two().max(8))
    }

    pub fn points(&self) -> usize {
        self.m
    }

    pub fn weight(&self) -> f64 {
        2.0 * PI / self.m as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.m as f64
    }

    /// Largest degree the grid accepts.
    pub fn max_degree(&self) -> usize {
        (self.m - 4) / 4
    }

    pub fn check_degree(&self, degree: usize) -> Result<()> {
        let required = 4 * degree + 4;
        if self.m < required {
            Err(Error::GridTooCoarse {
                points: self.m,
                degree,
                required,
            })
        } else {
            Ok(())
        }
    }

    /// `g(x_j) = sum_{n=1}^{N} c_n e^{i n x_j}` for `j = 0..M`.
    fn synthesize(&self, coeff: impl Fn(usize) -> Complex<f64>, degree: usize) -> Vec<Complex<f64>> {
        let mut buf = vec![Complex::new(0.0, 0.0); self.m];
        for (n, slot) in buf.iter_mut().enumerate().take(degree + 1).skip(1) {
            *slot = coeff(n);
        }
        // rustfft's inverse transform is the unnormalised sum with e^{+i}
        self.fft.process(&mut buf);
        buf
    }

    fn samples(&self, parity: Parity, coeff: impl Fn(usize) -> Complex<f64>, degree: usize) -> Vec<f64> {
        self.synthesize(coeff, degree)
            .into_iter()
            .map(|z| parity.part(z))
            .collect()
    }

    /// `(sum_j |g_j|^p * 2π/M)^{1/p}`.
    fn lp(&self, samples: &[f64], p: f64) -> f64 {
        self.lp_pow(samples, p).powf(1.0 / p)
    }

    fn lp_pow(&self, samples: &[f64], p: f64) -> f64 {
        csum(samples.iter().map(|g| g.abs().powf(p))) * self.weight()
    }
}

fn check_p_norm(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(Error::param("p", format!("need p >= 1, got {p}")))
    }
}

/// Samples `f(x_j)` on the grid.
pub fn evaluate(f: &TrigPoly, grid: &Grid) -> Result<Vec<f64>> {
    grid.check_degree(f.degree())?;
    let a = f.a();
    Ok(grid.samples(f.parity, |n| Complex::new(a[n - 1], 0.0), f.degree()))
}

/// Samples of `f(x_j + t)`.
pub fn evaluate_shifted(f: &TrigPoly, t: f64, grid: &Grid) -> Result<Vec<f64>> {
    grid.check_degree(f.degree())?;
    let a = f.a();
    Ok(grid.samples(
        f.parity,
        |n| Complex::from_polar(a[n - 1], n as f64 * t),
        f.degree(),
    ))
}

pub fn lp_norm(f: &TrigPoly, p: f64, grid: &Grid) -> Result<f64> {
    check_p_norm(p)?;
    Ok(grid.lp(&evaluate(f, grid)?, p))
}

/// `||f(. + t) - f||_p` over a period.
pub fn first_difference_norm(f: &TrigPoly, t: f64, p: f64, grid: &Grid) -> Result<f64> {
    check_p_norm(p)?;
    grid.check_degree(f.degree())?;
    let a = f.a();
    if p == 2.0 {
        // |e^{int} - 1|^2 = 4 sin^2(nt/2)
        let s = csum(a.iter().enumerate().map(|(i, &an)| {
            let s = (0.5 * (i + 1) as f64 * t).sin();
            4.0 * an * an * s * s
        }));
        return Ok((PI * s).sqrt());
    }
    let s = grid.samples(
        f.parity,
        |n| {
            let nt = n as f64 * t;
            Complex::new(nt.cos() - 1.0, nt.sin()) * a[n - 1]
        },
        f.degree(),
    );
    Ok(grid.lp(&s, p))
}

/// Coefficients of `f(x+t) + f(x-t) - 2f(x)`: `a_n (2 cos(nt) - 2)`.
fn second_difference_coeff(a: f64, n: usize, t: f64) -> f64 {
    let s = (0.5 * n as f64 * t).sin();
    -4.0 * a * s * s
}

/// `||f(. + t) + f(. - t) - 2f||_p` over a period.
pub fn second_difference_norm(f: &TrigPoly, t: f64, p: f64, grid: &Grid) -> Result<f64> {
    check_p_norm(p)?;
    Ok(second_difference_pow(f, t, p, grid)?.powf(1.0 / p))
}

/// `∫_0^{2π} |Δ_t^2 f|^p dx`.
pub(crate) fn second_difference_pow(f: &TrigPoly, t: f64, p: f64, grid: &Grid) -> Result<f64> {
    grid.check_degree(f.degree())?;
    let a = f.a();
    if p == 2.0 {
        // Parseval: exact and O(N)
        let s = csum(a.iter().enumerate().map(|(i, &an)| {
            let c = second_difference_coeff(an, i + 1, t);
            c * c
        }));
        return Ok(PI * s);
    }
    let s = grid.samples(
        f.parity,
        |n| Complex::new(second_difference_coeff(a[n - 1], n, t), 0.0),
        f.degree(),
    );
    Ok(grid.lp_pow(&s, p))
}

fn check_modulus_args(h: f64, t_steps: usize) -> Result<()> {
    if !(h > 0.0 && h <= PI) {
        return Err(Error::param("h", format!("need 0 < h <= π, got {h}")));
    }
    if t_steps < 64 {
        return Err(Error::param("t_steps", format!("need at least 64, got {t_steps}")));
    }
    Ok(())
}

/// Maximise `g` over `(0, h]`: uniform scan, then golden-section search
/// around the best scan point.
fn sup_over_steps(h: f64, t_steps: usize, g: impl Fn(f64) -> f64 + Sync + Send) -> f64 {
    let step = h / t_steps as f64;
    let values = par::map_range(1..t_steps + 1, |j| g(step * j as f64));
    let (best_j, best) = values
        .iter()
        .enumerate()
        .fold((0usize, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i + 1, v) } else { acc });
    let lo = step * (best_j as f64 - 1.0);
    let hi = (step * (best_j as f64 + 1.0)).min(h);
    best.max(golden_max(&g, lo, hi, 48))
}

fn golden_max(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..iters {
        if g1 < g2 {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + phi * (hi - lo);
            g2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - phi * (hi - lo);
            g1 = g(x1);
        }
    }
    g1.max(g2)
}

/// `ω_p(f, h) = sup_{|t|<=h} ||f(.+t) - f||_p`. Negative shifts give the same
/// norms by translation invariance, so only `t in (0, h]` is scanned.
pub fn modulus(f: &TrigPoly, p: f64, h: f64, grid: &Grid, t_steps: usize) -> Result<f64> {
    check_p_norm(p)?;
    check_modulus_args(h, t_steps)?;
    grid.check_degree(f.degree())?;
    Ok(sup_over_steps(h, t_steps, |t| {
        first_difference_norm(f, t, p, grid).unwrap_or(f64::NAN)
    }))
}

/// `ω_p^*(f, h) = sup_{0<t<=h} ||f(.+t) + f(.-t) - 2f||_p`.
pub fn modulus_star(f: &TrigPoly, p: f64, h: f64, grid: &Grid, t_steps: usize) -> Result<f64> {
    check_p_norm(p)?;
    check_modulus_args(h, t_steps)?;
    grid.check_degree(f.degree())?;
    Ok(sup_over_steps(h, t_steps, |t| {
        second_difference_norm(f, t, p, grid).unwrap_or(f64::NAN)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BestApprox {
    pub value: f64,
    /// `true` when `value` is the best approximation itself; `false` when it
    /// is the partial-sum remainder, an upper bound.
    pub exact: bool,
}

/// `E_n^{(p)}(f)`: exact for `p = 2` (Parseval tail) and for `n >= N`;
/// otherwise `||f - S_n f||_p`.
pub fn best_approx(f: &TrigPoly, n: usize, p: f64, grid: &Grid) -> Result<BestApprox> {
    check_p_norm(p)?;
    if n < 1 {
        return Err(Error::IndexOutOfRange {
            index: n,
            lo: 1,
            hi: usize::MAX,
        });
    }
    let a = f.a();
    if n >= a.len() {
        return Ok(BestApprox { value: 0.0, exact: true });
    }
    if p == 2.0 {
        let tail = csum(a[n..].iter().map(|x| x * x));
        return Ok(BestApprox {
            value: (PI * tail).sqrt(),
            exact: true,
        });
    }
    grid.check_degree(f.degree())?;
    let s = grid.samples(
        f.parity,
        |k| Complex::new(if k > n { a[k - 1] } else { 0.0 }, 0.0),
        f.degree(),
    );
    Ok(BestApprox {
        value: grid.lp(&s, p),
        exact: false,
    })
}

/// Samples of `T_{m,2n}(x) = sum_{ν=m}^{2n} cos(νx)`.
pub fn dirichlet_block(m: usize, n: usize, grid: &Grid) -> Result<Vec<f64>> {
    if m < 1 || m > 2 * n {
        return Err(Error::param("m", format!("need 1 <= m <= 2n, got m = {m}, n = {n}")));
    }
    grid.check_degree(2 * n)?;
    Ok(grid.samples(
        Parity::Cosine,
        |k| Complex::new(if k >= m { 1.0 } else { 0.0 }, 0.0),
        2 * n,
    ))
}

/// Both sides of
/// `∫_{-π}^{π} (2f(x) - f(x+t) - f(x-t)) T_{m,2n}(x) dx = 4π sum_{ν=m}^{2n} a_ν sin^2(νt/2)`
/// for a cosine polynomial. Returns `(integral, closed_form)`.
pub fn block_kernel_identity(f: &TrigPoly, m: usize, n: usize, t: f64, grid: &Grid) -> Result<(f64, f64)> {
    if f.parity != Parity::Cosine {
        return Err(Error::param("parity", "the kernel identity is stated for cosine series"));
    }
    let kernel = dirichlet_block(m, n, grid)?;
    grid.check_degree(f.degree())?;
    let a = f.a();
    let diff = grid.samples(
        Parity::Cosine,
        |k| Complex::new(-second_difference_coeff(a[k - 1], k, t), 0.0),
        f.degree(),
    );
    let integral = csum(diff.iter().zip(&kernel).map(|(d, k)| d * k)) * grid.weight();
    let closed = 4.0
        * PI
        * csum((m..=2 * n).map(|nu| {
            let s = (0.5 * nu as f64 * t).sin();
            f.coeffs.get(nu) * s * s
        }));
    Ok((integral, closed))
}

/// `λ(x) = c x^γ (ln(e + x))^δ` on `[1, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightFn {
    pub c: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl WeightFn {
    pub fn new(c: f64, gamma: f64, delta: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::param("c", "weight scale must be positive"));
        }
        if !(gamma.is_finite() && delta.is_finite()) {
            return Err(Error::param("gamma", "weight exponents must be finite"));
        }
        let w = Self { c, gamma, delta };
        if !w.is_monotone() {
            return Err(Error::param("lambda", "weight is not monotone on [1, inf)"));
        }
        Ok(w)
    }

    pub fn power(gamma: f64) -> Result<Self> {
        Self::new(1.0, gamma, 0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut v = self.c * x.powf(self.gamma);
        if self.delta != 0.0 {
            v *= (E + x).ln().powf(self.delta);
        }
        v
    }

    /// `x λ'(x)/λ(x) = γ + δ x / ((e + x) ln(e + x))` keeps one sign.
    fn is_monotone(&self) -> bool {
        let mut pos = false;
        let mut neg = false;
        for k in 0..=4000 {
            let x = 10f64.powf(k as f64 * 0.01);
            let d = self.gamma + self.delta * x / ((E + x) * (E + x).ln());
            pos |= d > 0.0;
            neg |= d < 0.0;
        }
        !(pos && neg)
    }

    /// `(K_1, K_2)` with `K_1 λ(2^k) <= λ(2^{k+1}) <= K_2 λ(2^k)` for `k = 0..200`.
    pub fn doubling_constants(&self) -> (f64, f64) {
        (0..200).fold((f64::INFINITY, 0.0f64), |(lo, hi), k| {
            let x = 2f64.powi(k);
            let r = self.eval(2.0 * x) / self.eval(x);
            (lo.min(r), hi.max(r))
        })
    }
}

/// `φ_n = (ln(e + n))^s`, with the step function `φ(x) = φ_{ceil x}` and
/// `Φ(x) = sum_{n<=x} n^{r/p-2} φ_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiWeight {
    pub s: f64,
}

impl PhiWeight {
    pub fn new(s: f64) -> Result<Self> {
        if !(s.is_finite() && s >= 0.0) {
            return Err(Error::param("s", "phi exponent must be finite and nonnegative"));
        }
        Ok(Self { s })
    }

    pub fn at(&self, n: usize) -> f64 {
        if self.s == 0.0 {
            1.0
        } else {
            (E + n.max(1) as f64).ln().powf(self.s)
        }
    }

    /// `φ(x)` for `x > 0`; values in `(n-1, n]` map to `φ_n`.
    pub fn step(&self, x: f64) -> f64 {
        if !x.is_finite() {
            return self.at(usize::MAX / 2);
        }
        self.at(x.ceil().max(1.0) as usize)
    }

    /// `max_{n <= limit} φ_{n^2} / φ_n`.
    pub fn square_constant(&self, limit: usize) -> f64 {
        (1..=limit)
            .map(|n| self.at(n.saturating_mul(n)) / self.at(n))
            .fold(0.0, f64::max)
    }

    pub fn is_nondecreasing(&self, limit: usize) -> bool {
        (1..limit).all(|n| self.at(n + 1) >= self.at(n))
    }

    /// Table of `Φ(k)` for `k = 0..=max`, for evaluating `Φ(y) = table[floor y]`.
    pub fn cumulative(&self, r: f64, p: f64, max: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(max + 1);
        out.push(0.0);
        let mut acc = NeumaierSum::new();
        for n in 1..=max {
            acc.add((n as f64).powf(r / p - 2.0) * self.at(n));
            out.push(acc.value());
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum IntegralValue {
    Finite(f64),
    Divergent,
}

impl IntegralValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            IntegralValue::Finite(v) => Some(v),
            IntegralValue::Divergent => None,
        }
    }

    /// Divergent integrals compare as `+inf`.
    pub fn as_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub(crate) fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

const GL_ORDER: usize = 8;

/// `∫_{lo}^{hi} g(t) dt` in `u = ln t` with `panels` Gauss-Legendre panels.
pub(crate) fn log_quadrature(lo: f64, hi: f64, panels: usize, g: impl Fn(f64) -> f64 + Sync + Send) -> f64 {
    let nodes = gauss_legendre(GL_ORDER);
    let (ul, uh) = (lo.ln(), hi.ln());
    let width = (uh - ul) / panels as f64;
    let ts: Vec<(f64, f64)> = (0..panels)
        .flat_map(|k| {
            let mid = ul + width * (k as f64 + 0.5);
            nodes.iter().map(move |&(x, w)| {
                let t = (mid + 0.5 * width * x).exp();
                (t, 0.5 * width * w * t)
            })
        })
        .collect();
    let vals = par::map(&ts, |&(t, w)| w * g(t));
    csum(vals)
}

/// `I(f, λ, r, p) = ∫_0^1 λ(1/t) t^{r-2-r/p} (∫_0^π |f(x+t)+f(x-t)-2f(x)|^p dx)^{r/p} dt`.
///
/// Integrated decade by decade toward zero with `t_steps` nodes per decade.
/// Near zero `||Δ_t^2 f||_{L^p(0,π)} <= π^{1/p} t^2 sum n^2 a_n`, which bounds
/// the untouched remainder; integration stops once that bound is below
/// `1e-9` of the running total. Contributions that fail to decay once `t` is
/// far below `1/N` mark the integral divergent.
pub fn smoothness_integral(
    f: &TrigPoly,
    lam: &WeightFn,
    r: f64,
    p: f64,
    t_steps: usize,
    grid: &Grid,
) -> Result<IntegralValue> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::param("p", format!("need p > 1, got {p}")));
    }
    if !(r.is_finite() && r >= 1.0) {
        return Err(Error::param("r", format!("need r >= 1, got {r}")));
    }
    if t_steps < GL_ORDER {
        return Err(Error::param("t_steps", format!("need at least {GL_ORDER} nodes per decade")));
    }
    grid.check_degree(f.degree())?;
    let a = f.a();
    let curvature = csum(a.iter().enumerate().map(|(i, x)| ((i + 1) as f64).powi(2) * x));
    if curvature == 0.0 {
        return Ok(IntegralValue::Finite(0.0));
    }
    let power = r - 2.0 - r / p;
    let integrand = |t: f64| -> f64 {
        let half = 0.5 * second_difference_pow(f, t, p, grid).unwrap_or(f64::NAN);
        lam.eval(1.0 / t) * t.powf(power) * half.powf(r / p)
    };
    let panels = t_steps.div_ceil(GL_ORDER);
    // the integrand behaves like C t^{3r-2-r/p} λ(1/t) once t << 1/N
    let asymptotic_decade = ((10.0 * f.degree() as f64).log10().ceil() as usize).max(1);
    let log_c = (PI.powf(1.0 / p) * curvature).ln() * r;
    let mut total = NeumaierSum::new();
    let mut history: Vec<f64> = Vec::new();
    for k in 0..MAX_DECADES {
        let hi = 10f64.powi(-(k as i32));
        let lo = hi / 10.0;
        let d = log_quadrature(lo, hi, panels, integrand);
        total.add(d);
        history.push(d);
        if k > asymptotic_decade + 1 {
            let n = history.len();
            let (d0, d1, d2) = (history[n - 3], history[n - 2], history[n - 1]);
            if d1 >= 0.99 * d0 && d2 >= 0.99 * d1 && d2 > 0.0 {
                return Ok(IntegralValue::Divergent);
            }
        }
        if k >= asymptotic_decade {
            let bound = remainder_bound(lam, r, p, log_c, lo);
            if bound <= 1e-9 * total.value() {
                return Ok(IntegralValue::Finite(total.value()));
            }
        }
    }
    Ok(IntegralValue::Divergent)
}

const MAX_DECADES: usize = 60;

/// Upper bound of `∫_0^{t0} λ(1/t) t^{r-2-r/p} (π^{1/p} S t^2)^r dt` where
/// `log_c = r ln(π^{1/p} S)`, summed decade by decade in log space.
fn remainder_bound(lam: &WeightFn, r: f64, p: f64, log_c: f64, t0: f64) -> f64 {
    let e = 3.0 * r - 2.0 - r / p - lam.gamma;
    let ln10 = 10f64.ln();
    let mut sum = 0.0;
    let mut first = None;
    for j in 0..100_000 {
        let ln_hi = t0.ln() - j as f64 * ln10;
        let ln_lo = ln_hi - ln10;
        let ln_pow = if e >= 0.0 { e * ln_hi } else { e * ln_lo };
        // ln(e + 1/t) is decreasing in t
        let log_at = |ln_t: f64| (E + (-ln_t).exp()).ln().max(f64::MIN_POSITIVE);
        let ln_log = if lam.delta >= 0.0 {
            lam.delta * log_at(ln_lo).ln()
        } else {
            lam.delta * log_at(ln_hi).ln()
        };
        let ln_width = ln_hi + (0.9f64).ln();
        let term = (lam.c.ln() + log_c + ln_pow + ln_log + ln_width).exp();
        if !term.is_finite() {
            return f64::INFINITY;
        }
        sum += term;
        let f0 = *first.get_or_insert(term);
        if term < 1e-18 * f0 && j > 2 {
            return sum;
        }
    }
    f64::INFINITY
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluate_examples() {
        let g = Grid::new(64).unwrap();
        let f = TrigPoly::cosine(vec![1.0]).unwrap();
        assert!((evaluate(&f, &g).unwrap()[0] - 1.0).abs() < 1e-15);
        let s = TrigPoly::sine(vec![0.3, 0.7, 1.1]).unwrap();
        assert!(evaluate(&s, &g).unwrap()[0].abs() < 1e-15);
        let f = TrigPoly::cosine(vec![1.0, 1.0]).unwrap();
        // x = π is grid point M/2
        assert!(evaluate(&f, &g).unwrap()[32].abs() < 1e-14);
    }

    #[test]
    fn evaluate_matches_direct_summation() {
        let g = Grid::new(1024).unwrap();
        let a: Vec<f64> = (1..=200).map(|n| 1.0 / (n as f64).powf(0.7) * (n as f64).sin().abs()).collect();
        let scale: f64 = a.iter().sum();
        for parity in [Parity::Cosine, Parity::Sine] {
            let f = TrigPoly::new(parity, CoeffSeq::new(a.clone()).unwrap());
            let fast = evaluate(&f, &g).unwrap();
            for j in (0..1024).step_by(37) {
                let direct = f.eval_direct(g.x(j));
                assert!((fast[j] - direct).abs() <= 1e-12 * scale, "{parity:?} {j}");
            }
        }
    }

    #[test]
    fn grid_too_coarse() {
        let g = Grid::new(16).unwrap();
        let f = TrigPoly::cosine(vec![1.0; 4]).unwrap();
        assert!(matches!(evaluate(&f, &g), Err(Error::GridTooCoarse { .. })));
        assert!(Grid::new(100).is_err());
    }

    #[test]
    fn lp_norm_examples() {
        let g = Grid::new(256).unwrap();
        let f = TrigPoly::cosine(vec![1.0]).unwrap();
        assert!((lp_norm(&f, 2.0, &g).unwrap() - PI.sqrt()).abs() < 1e-13);
        let z = TrigPoly::cosine(vec![0.0; 3]).unwrap();
        assert_eq!(lp_norm(&z, 3.0, &g).unwrap(), 0.0);
        let f = TrigPoly::cosine(vec![1.0, 1.0]).unwrap();
        assert!((lp_norm(&f, 2.0, &g).unwrap() - (2.0 * PI).sqrt()).abs() < 1e-13);
        // ||cos||_1 = 4
        let f = TrigPoly::cosine(vec![1.0]).unwrap();
        assert!((lp_norm(&f, 1.0, &Grid::new(4096).unwrap()).unwrap() - 4.0).abs() < 1e-6);
    }

    #[test]
    fn shifted_samples_are_rotations() {
        let g = Grid::new(128).unwrap();
        let f = TrigPoly::sine(vec![0.5, 0.0, 2.0, 1.0]).unwrap();
        let base = evaluate(&f, &g).unwrap();
        let k = 5;
        let shifted = evaluate_shifted(&f, g.x(k), &g).unwrap();
        for j in 0..128 {
            assert!((shifted[j] - base[(j + k) % 128]).abs() < 1e-12);
        }
    }

    #[test]
    fn modulus_closed_forms() {
        let g = Grid::new(64).unwrap();
        let f = TrigPoly::cosine(vec![1.0]).unwrap();
        for h in [PI / 4.0, 0.1] {
            let w = modulus(&f, 2.0, h, &g, 64).unwrap();
            assert!((w - 2.0 * (h / 2.0).sin() * PI.sqrt()).abs() < 1e-12);
            let ws = modulus_star(&f, 2.0, h, &g, 64).unwrap();
            assert!((ws - 2.0 * (1.0 - h.cos()) * PI.sqrt()).abs() < 1e-12);
        }
        let z = TrigPoly::cosine(vec![0.0]).unwrap();
        assert_eq!(modulus(&z, 2.0, 0.5, &g, 64).unwrap(), 0.0);
        assert!(modulus(&f, 2.0, 0.0, &g, 64).is_err());
        assert!(modulus(&f, 2.0, 0.5, &g, 8).is_err());
    }

    #[test]
    fn modulus_cross_check_by_quadrature() {
        // brute force: direct pointwise evaluation, fine trapezoid, dense t scan
        // |g|^3 has kinks at the zeros of g, so the grid must be fine
        let f = TrigPoly::cosine(vec![1.0, 0.0, 0.5]).unwrap();
        let g = Grid::new(2048).unwrap();
        let h = 0.7;
        let brute = (1..=500)
            .map(|i| {
                let t = h * i as f64 / 500.0;
                let m = 4096;
                let s: f64 = (0..m)
                    .map(|j| {
                        let x = 2.0 * PI * j as f64 / m as f64;
                        (f.eval_direct(x + t) - f.eval_direct(x)).abs().powi(3)
                    })
                    .sum();
                (s * 2.0 * PI / m as f64).powf(1.0 / 3.0)
            })
            .fold(0.0, f64::max);
        let w = modulus(&f, 3.0, h, &g, 64).unwrap();
        assert!((w - brute).abs() < 1e-6 * brute, "{w} vs {brute}");
    }

    #[test]
    fn best_approx_examples() {
        let g = Grid::new(64).unwrap();
        let f = TrigPoly::cosine(vec![1.0, 1.0]).unwrap();
        let e = best_approx(&f, 1, 2.0, &g).unwrap();
        assert!((e.value - PI.sqrt()).abs() < 1e-14 && e.exact);
        let f = TrigPoly::cosine(vec![1.0]).unwrap();
        assert_eq!(best_approx(&f, 1, 2.0, &g).unwrap().value, 0.0);
        let a: Vec<f64> = (1..=64).map(|k| (k as f64).powf(-1.5)).collect();
        let f = TrigPoly::cosine(a).unwrap();
        let tail: f64 = (17..=64).map(|k| (k as f64).powf(-3.0)).sum();
        let e = best_approx(&f, 16, 2.0, &g.clone()).unwrap();
        assert!((e.value - (PI * tail).sqrt()).abs() < 1e-14);
        let e3 = best_approx(&f, 16, 3.0, &Grid::new(512).unwrap()).unwrap();
        assert!(!e3.exact && e3.value > 0.0);
        assert!(best_approx(&f, 0, 2.0, &g).is_err());
    }

    #[test]
    fn dirichlet_block_examples() {
        let g = Grid::new(64).unwrap();
        let t = dirichlet_block(1, 1, &g).unwrap();
        assert!((t[0] - 2.0).abs() < 1e-14);
        assert!(dirichlet_block(3, 1, &g).is_err());
        let f = TrigPoly::cosine(vec![1.0]).unwrap();
        let (lhs, rhs) = block_kernel_identity(&f, 1, 1, PI / 2.0, &g).unwrap();
        assert!((rhs - 2.0 * PI).abs() < 1e-14);
        assert!((lhs - 2.0 * PI).abs() < 1e-12);
        let z = TrigPoly::cosine(vec![0.0; 3]).unwrap();
        let (lhs, rhs) = block_kernel_identity(&z, 1, 2, 0.3, &g).unwrap();
        assert_eq!((lhs, rhs), (0.0, 0.0));
    }

    #[test]
    fn weight_functions() {
        let w = WeightFn::power(0.5).unwrap();
        let (k1, k2) = w.doubling_constants();
        assert!((k1 - 2f64.sqrt()).abs() < 1e-12 && (k2 - 2f64.sqrt()).abs() < 1e-12);
        assert!(WeightFn::new(1.0, 1.0, -5.0).is_err());
        assert!(WeightFn::new(1.0, 1.0, 1.0).is_ok());
        assert!(WeightFn::new(0.0, 1.0, 0.0).is_err());
        let phi = PhiWeight::new(1.0).unwrap();
        assert!(phi.square_constant(1000) <= 2.0);
        assert!(phi.is_nondecreasing(1000));
        assert_eq!(phi.step(2.5), phi.at(3));
        let table = PhiWeight::new(0.0).unwrap().cumulative(2.0, 2.0, 3);
        assert_eq!(table, vec![0.0, 1.0, 1.5, 1.5 + 1.0 / 3.0]);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let nodes = gauss_legendre(8);
        let s: f64 = nodes.iter().map(|(x, w)| w * x.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn smoothness_integral_zero_and_self_convergence() {
        let g = Grid::new(64).unwrap();
        let lam = WeightFn::power(0.0).unwrap();
        let z = TrigPoly::cosine(vec![0.0; 4]).unwrap();
        assert_eq!(smoothness_integral(&z, &lam, 2.0, 2.0, 64, &g).unwrap(), IntegralValue::Finite(0.0));
        let f = TrigPoly::cosine(vec![1.0]).unwrap();
        let a = smoothness_integral(&f, &lam, 2.0, 2.0, 64, &g).unwrap().finite().unwrap();
        let b = smoothness_integral(&f, &lam, 2.0, 2.0, 128, &g).unwrap().finite().unwrap();
        assert!((a - b).abs() < 1e-6 * b);
        // oracle: ∫_0^1 t^{-1} ((π/2) 16 sin^4(t/2)) dt by fine midpoint rule
        let n = 2_000_000;
        let oracle: f64 = (0..n)
            .map(|i| {
                let t = (i as f64 + 0.5) / n as f64;
                let s = (t / 2.0).sin();
                (PI / 2.0) * 16.0 * s.powi(4) / t
            })
            .sum::<f64>()
            / n as f64;
        assert!((a - oracle).abs() < 1e-9 * oracle, "{a} vs {oracle}");
    }

    #[test]
    fn smoothness_integral_detects_divergence() {
        // λ(x) = x^8 with r = p = 2: near 0 the integrand ~ t^{6-2-1-8} = t^{-5}
        let g = Grid::new(64).unwrap();
        let f = TrigPoly::cosine(vec![1.0]).unwrap();
        let lam = WeightFn::power(8.0).unwrap();
        assert_eq!(smoothness_integral(&f, &lam, 2.0, 2.0, 64, &g).unwrap(), IntegralValue::Divergent);
    }
}
