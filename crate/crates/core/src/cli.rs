//! Command-line entry point.
//!
//! Exit codes: 0 when every verdict passes (skips included), 1 on a
//! falsification, 2 on invalid input, a bad config file or an unwritable
//! output path.

use std::ffi::OsString;
use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{parse_config, RunConfig};
use crate::discrete_ineq::{hardy_random_suite, lemma_sweep, HardySuite, LemmaId, LemmaSweep};
use crate::report::{emit_report, Format, Row};
use crate::seqclass::{classify_with, CoeffSeq, SeqClass};
use crate::sum::power_tail;
use crate::theorems::{
    sequence_for, theorem3_functionals, verify_lemma2_dichotomy, verify_theorem1, verify_theorem2,
    verify_theorem4, verify_theorem5, Status,
};
use crate::trigseries::{lp_norm, modulus, modulus_star, Grid, Parity, TrigPoly};
use crate::verdict::Trend;
use crate::{par, Error, Result};

const CLASSIFY_LEN: usize = 64;
const LEMMA_LEN: usize = 8192;
const SEQUENCE_LEMMAS: [LemmaId; 5] = [LemmaId::L4, LemmaId::L5, LemmaId::L6, LemmaId::L38, LemmaId::L42];

#[derive(Debug, Parser)]
#[command(name = "nbvslab", version, about = "Coefficient classes and smoothness checks for trigonometric series")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimal class constants of a coefficient sequence.
    Classify,
    /// One sequence inequality along the ladder, or a random suite for 3a/3b.
    Lemma {
        #[arg(long, value_parser = ["3a", "3b", "4", "5", "6", "38", "42"])]
        id: String,
    },
    /// One series-level verification.
    Theorem {
        #[arg(long, value_parser = ["1", "2", "3", "4", "5", "L2"])]
        id: String,
    },
    /// Every sequence inequality on one family plus both random suites.
    Sweep,
    /// Quick numeric sanity checks of the building blocks.
    Selftest,
}

#[derive(Debug, Args)]
struct Opts {
    /// Flat `key = <json>` file applied before the flags below.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,

    /// power, power_log, block_witness, alternating, explicit, monotone_custom
    #[arg(long, global = true)]
    family: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta: Option<f64>,
    /// Log exponent of power_log.
    #[arg(long, global = true, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[arg(long, global = true)]
    rho: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    c: Option<f64>,
    /// Comma-separated coefficients for explicit families.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    values: Option<Vec<f64>>,
    /// Truncation length N.
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    p: Option<f64>,
    #[arg(long, global = true)]
    r: Option<f64>,

    #[arg(long, global = true)]
    lambda_c: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    lambda_gamma: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    lambda_delta: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    phi_s: Option<f64>,
    /// Exponent of the double-sum functional.
    #[arg(long, global = true)]
    s: Option<f64>,

    /// Number of random pairs for 3a/3b.
    #[arg(long, global = true)]
    random: Option<usize>,
    #[arg(long, global = true)]
    max_len: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    stability: Option<f64>,

    /// Comma-separated scale ladder.
    #[arg(long, global = true, value_delimiter = ',')]
    ladder: Option<Vec<usize>>,
    #[arg(long, global = true)]
    t_steps: Option<usize>,
    #[arg(long, global = true)]
    quad_steps: Option<usize>,
    /// Truncation for modulus sweeps.
    #[arg(long, global = true)]
    truncation: Option<usize>,
    #[arg(long, global = true)]
    pointwise_truncation: Option<usize>,
    #[arg(long, global = true)]
    grid_points: Option<usize>,
}

impl Opts {
    fn apply(&self, cfg: &mut RunConfig) -> Result<()> {
        macro_rules! set {
            ($($field:ident => $dst:expr),* $(,)?) => {
                $(if let Some(v) = &self.$field { $dst = v.clone(); })*
            };
        }
        set!(
            family => cfg.family,
            beta => cfg.beta,
            gamma => cfg.gamma,
            rho => cfg.rho,
            c => cfg.c,
            values => cfg.values,
            lambda_c => cfg.lambda_c,
            lambda_gamma => cfg.lambda_gamma,
            lambda_delta => cfg.lambda_delta,
            phi_s => cfg.phi_s,
            random => cfg.random,
            max_len => cfg.max_len,
            seed => cfg.seed,
            stability => cfg.stability,
            p => cfg.p,
            ladder => cfg.harness.ladder,
            t_steps => cfg.harness.t_steps,
            quad_steps => cfg.harness.quad_steps,
            pointwise_truncation => cfg.harness.pointwise_truncation,
        );
        if self.n.is_some() {
            cfg.n = self.n;
        }
        if self.r.is_some() {
            cfg.r = self.r;
        }
        if self.s.is_some() {
            cfg.s = self.s;
        }
        if self.truncation.is_some() {
            cfg.harness.truncation = self.truncation;
        }
        if self.grid_points.is_some() {
            cfg.harness.grid_points = self.grid_points;
        }
        if let Some(out) = &self.out {
            cfg.out = Some(out.clone());
        }
        if let Some(f) = &self.format {
            cfg.format = f.parse::<Format>()?;
        }
        cfg.validate()
    }
}

/// What a command produced: report rows, a one-line human summary per
/// check, and whether anything was falsified.
#[derive(Default)]
struct Outcome {
    rows: Vec<Row>,
    notes: Vec<String>,
    failed: bool,
}

impl Outcome {
    fn status(&mut self, what: &str, status: &Status) {
        self.failed |= !status.ok();
        self.notes.push(format!("{what}: {}", status.label()));
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    par::init_from_env();
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(false) => 0,
        Ok(true) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// `Ok(true)` when some verdict failed.
fn execute(cli: &Cli) -> Result<bool> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.opts.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::param("config", format!("cannot read {}: {e}", path.display())))?;
        cfg.apply(&parse_config(&text)?)?;
    }
    cli.opts.apply(&mut cfg)?;

    let out = match &cli.command {
        Command::Classify => classify_cmd(&cfg)?,
        Command::Lemma { id } => {
            let id = LemmaId::parse(id).expect("clap restricts the id");
            lemma_cmd(&cfg, id)?
        }
        Command::Theorem { id } => theorem_cmd(&cfg, id)?,
        Command::Sweep => sweep_cmd(&cfg)?,
        Command::Selftest => selftest_cmd(&cfg)?,
    };
    emit_report(&out.rows, cfg.format, cfg.out.as_deref())?;
    for note in &out.notes {
        eprintln!("{note}");
    }
    Ok(out.failed)
}

fn classify_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let fam = cfg.family_spec(cfg.n.unwrap_or(CLASSIFY_LEN))?;
    let a = sequence_for(&fam, fam.len)?;
    let report = classify_with(&a, cfg.stability);
    let name = fam.to_string();
    let params = format!("N={};stability={}", a.len(), cfg.stability);
    let mut out = Outcome::default();
    for class in SeqClass::ALL {
        let c = report.get(class);
        let verdict = if !c.is_finite() {
            "infinite"
        } else if c.stable {
            "stable"
        } else {
            "unstable"
        };
        out.rows.push(Row {
            check_id: format!("class.{}", class.as_str().to_lowercase()),
            family: name.clone(),
            params: params.clone(),
            scale: c.witness_index as f64,
            lhs: c.k_min,
            rhs: c.k_half,
            ratio: crate::verdict::ratio(c.k_min, c.k_half),
            verdict: verdict.into(),
        });
        out.notes.push(format!("{} k_min = {} ({verdict})", class.as_str(), c.k_min));
    }
    let status = if report.chain_holds() {
        Status::Pass
    } else {
        Status::Fail("class constants violate RBVS >= GBVS >= NBVS".into())
    };
    out.rows.push(Row::summary("class.chain", &name, &params, status.label()));
    out.status("class chain", &status);
    Ok(out)
}

fn hardy_rows(out: &mut Outcome, id: LemmaId, s: &HardySuite, max_len: usize, seed: u64) {
    let params = format!("p={};max_len={max_len};seed={seed}", s.p);
    let status = if s.failures == 0 {
        Status::Pass
    } else {
        Status::Fail(format!("{} of {} pairs violate the bound", s.failures, s.cases))
    };
    out.rows.push(Row {
        check_id: format!("hardy.{}", id.as_str()),
        family: "random".into(),
        params,
        scale: s.cases as f64,
        lhs: s.worst_normalized,
        rhs: 1.0,
        ratio: s.worst_normalized,
        verdict: status.label(),
    });
    out.notes.push(format!(
        "lemma {}: {}/{} hold, worst lhs/(p^p rhs) = {:.6}",
        id.as_str(),
        s.cases - s.failures,
        s.cases,
        s.worst_normalized
    ));
    out.failed |= s.failures > 0;
}

fn sweep_rows(out: &mut Outcome, s: &LemmaSweep, family: &str, p: f64, len: usize) {
    let params = format!("p={p};N={len}");
    let id = format!("lemma.{}", s.id.as_str());
    for (n, r) in &s.points {
        let row = match r {
            Some(r) => Row {
                check_id: id.clone(),
                family: family.into(),
                params: params.clone(),
                scale: *n as f64,
                lhs: r.lhs,
                rhs: r.rhs,
                ratio: r.ratio,
                verdict: if r.holds { s.trend.as_str() } else { "violated" }.into(),
            },
            None => Row {
                scale: *n as f64,
                ..Row::summary(id.clone(), family, &params, "not applicable")
            },
        };
        out.rows.push(row);
    }
    let status = if s.trend == Trend::Growing {
        Status::Fail("ratio grows along the ladder".into())
    } else if s.points.iter().any(|(_, r)| r.is_some_and(|r| !r.holds)) {
        Status::Fail("non-finite ratio".into())
    } else {
        Status::Pass
    };
    out.rows.push(Row::summary(format!("{id}.trend"), family, &params, status.label()));
    out.notes.push(format!(
        "lemma {} on {family}: {} (max ratio {:.6})",
        s.id.as_str(),
        s.trend.as_str(),
        s.max_ratio()
    ));
    out.failed |= !status.ok();
}

fn lemma_cmd(cfg: &RunConfig, id: LemmaId) -> Result<Outcome> {
    let mut out = Outcome::default();
    match id {
        LemmaId::L3a | LemmaId::L3b => {
            let s = hardy_random_suite(id, cfg.p, cfg.random, cfg.max_len, cfg.seed)?;
            hardy_rows(&mut out, id, &s, cfg.max_len, cfg.seed);
        }
        _ => {
            let (name, a) = lemma_sequence(cfg)?;
            let s = lemma_sweep(&a, id, &checked_ladder(cfg)?, cfg.p, &cfg.trend())?;
            sweep_rows(&mut out, &s, &name, cfg.p, a.len());
        }
    }
    Ok(out)
}

fn sweep_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let mut out = Outcome::default();
    for id in [LemmaId::L3a, LemmaId::L3b] {
        let s = hardy_random_suite(id, cfg.p, cfg.random, cfg.max_len, cfg.seed)?;
        hardy_rows(&mut out, id, &s, cfg.max_len, cfg.seed);
    }
    let (name, a) = lemma_sequence(cfg)?;
    let ladder = checked_ladder(cfg)?;
    for id in SEQUENCE_LEMMAS {
        let s = lemma_sweep(&a, id, &ladder, cfg.p, &cfg.trend())?;
        sweep_rows(&mut out, &s, &name, cfg.p, a.len());
    }
    Ok(out)
}

fn lemma_sequence(cfg: &RunConfig) -> Result<(String, CoeffSeq)> {
    let fam = cfg.family_spec(cfg.n.unwrap_or(LEMMA_LEN))?;
    let a = sequence_for(&fam, fam.len)?;
    Ok((fam.to_string(), a))
}

fn checked_ladder(cfg: &RunConfig) -> Result<Vec<usize>> {
    let l = &cfg.harness.ladder;
    if l.is_empty() || l[0] < 1 || l.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("ladder", "must be a nonempty increasing list of positive integers"));
    }
    Ok(l.clone())
}

fn theorem_cmd(cfg: &RunConfig, id: &str) -> Result<Outcome> {
    // the truncation flag `n` doubles as the harness truncation
    let h = cfg.harness();
    let fam = cfg.family_spec(h.truncation.unwrap_or(1))?;
    let p = cfg.p;
    let mut out = Outcome::default();
    match id {
        "1" => {
            let res = verify_theorem1(&fam, p, &h)?;
            out.rows = res.rows();
            out.status("theorem 1", &res.status);
        }
        "2" => {
            let r = cfg.r.unwrap_or(p);
            let res = verify_theorem2(&fam, &cfg.lambda()?, r, p, &h)?;
            out.rows = res.rows();
            out.status("theorem 2 reverse", &res.reverse_status);
            out.status("theorem 2", &res.status);
        }
        "3" => {
            let r = cfg.r.unwrap_or(2.0 * p);
            let res = theorem3_functionals(&fam, &cfg.phi()?, r, p, &h)?;
            out.rows = res.rows();
            let finite = res.functionals.iter().filter(|f| f.verdict.is_convergent()).count();
            out.notes.push(format!(
                "theorem 3: {finite} of {} functionals convergent",
                res.functionals.len()
            ));
            out.status("theorem 3", &res.status);
        }
        "4" => {
            let res = verify_theorem4(&fam, p, &h)?;
            out.rows = res.rows();
            let params = format!("p={p};N={}", res.truncation);
            out.rows.push(Row::summary("dichotomy", &res.family, &params, res.summary()));
            out.notes.push(format!("theorem 4: {}", res.summary()));
            out.status("theorem 4", &res.status);
        }
        "5" => {
            let res = verify_theorem5(&fam, p, &h)?;
            out.rows = res.rows();
            out.status("theorem 5", &res.status);
        }
        "L2" => {
            let res = verify_lemma2_dichotomy(&fam, p, &h)?;
            out.rows = res.rows();
            out.status("lp dichotomy", &res.status);
        }
        _ => unreachable!("clap restricts the id"),
    }
    Ok(out)
}

/// Known closed forms recomputed through the library.
fn selftest_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let mut out = Outcome::default();
    let mut check = |id: &str, got: f64, want: f64, tol: f64| {
        let err = ((got - want) / want).abs();
        let status = if err <= tol {
            Status::Pass
        } else {
            Status::Fail(format!("relative error {err:.3e} above {tol:e}"))
        };
        out.rows.push(Row {
            check_id: format!("selftest.{id}"),
            family: "fixed".into(),
            params: format!("tol={tol:e}"),
            scale: 1.0,
            lhs: got,
            rhs: want,
            ratio: crate::verdict::ratio(got, want),
            verdict: status.label(),
        });
        out.failed |= !status.ok();
    };

    check("zeta2", power_tail(2.0, 1), PI * PI / 6.0, 1e-13);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let grid = Grid::new(1 << 10)?;
    for parity in [Parity::Cosine, Parity::Sine] {
        let a: Vec<f64> = (0..200).map(|_| rng.random::<f64>()).collect();
        let f = TrigPoly::new(parity, CoeffSeq::new(a)?);
        let id = format!("parseval.{}", parity.as_str());
        check(&id, lp_norm(&f, 2.0, &grid)?, f.l2_norm_exact(), 1e-10);
    }

    let cos = TrigPoly::cosine(vec![1.0])?;
    let small = Grid::new(64)?;
    for k in [2, 4, 6] {
        let h = PI / f64::from(1 << k);
        let id = format!("modulus_cos.h=pi/{}", 1 << k);
        check(&id, modulus(&cos, 2.0, h, &small, 128)?, 2.0 * (h / 2.0).sin() * PI.sqrt(), 1e-6);
        let id = format!("modulus_star_cos.h=pi/{}", 1 << k);
        check(&id, modulus_star(&cos, 2.0, h, &small, 128)?, 2.0 * (1.0 - h.cos()) * PI.sqrt(), 1e-6);
    }

    for id in [LemmaId::L3a, LemmaId::L3b] {
        let s = hardy_random_suite(id, 2.0, 200, 32, cfg.seed)?;
        hardy_rows(&mut out, id, &s, 32, cfg.seed);
    }
    let passed = out.rows.iter().filter(|r| r.verdict == "pass").count();
    out.notes.push(format!("selftest: {passed}/{} checks pass", out.rows.len()));
    Ok(out)
}
