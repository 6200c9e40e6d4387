//! The verification suite: ten acceptance criteria plus special-function
//! checks, each producing named residuals.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use bergman_core::ballquad::{
    berezin_closed, berezin_quadrature, default_classify_radii, fr_asymptotic_classify, fr_boundary,
    fr_quadrature, fr_series, AsymptoticRegime, BallGrid, Boundary, FRQuery, GridSpec,
};
use bergman_core::classify::{compactness, parse_rational, Answer, ExponentPair, OperatorKind, Rule};
use bergman_core::operator::{
    finite_rank_check, galerkin_diagonal, nystrom_grid, radial_diff_apply, spectrum_compare, zhz_check,
    CoefficientVector, KernelKind, MonomialIndex,
};
use bergman_core::specfun::{gamma, hyp2f1_capped, log_gamma, pochhammer, HypergeometricQuery};
use bergman_core::spectral::{
    decay_exponent_fit, dixmier_trace_estimate, funo_ratio_range, schatten_sum, schatten_threshold,
    OperatorParams, SchattenSum,
};
use bergman_core::{ballquad, Result};

use crate::config::RunConfig;
use crate::report::{Cell, Field, Report, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Specfun,
    Spectral,
    Quad,
    Nystrom,
    Classify,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(flatten)]
    pub field: Field,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, field: Field, detail: impl Into<String>) -> Self {
        Self { name: name.into(), field, detail: detail.into() }
    }

    // A yes/no condition as a 0/1 mismatch held to 0.
    fn holds(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Self::new(name, Field::at_most(if ok { 0.0 } else { 1.0 }, 0.0), detail)
    }

    fn failed(name: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Self::new(name, Field::at_most(f64::NAN, 0.0), format!("error: {err}"))
    }
}

type CheckFn = fn(&RunConfig) -> Vec<Check>;

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub suite: Suite,
    /// Wall-clock budget in seconds.
    pub budget: f64,
    run: CheckFn,
}

/// Criteria whose literal statement cannot hold, with the reason.
pub const UNATTAINABLE: &[(u8, &str)] = &[(
    2,
    "for alpha < 0 the eigenvalues mu_n (n >= 1) are negative, so the singular value sum is 2 - Tr K_alpha, not Tr K_alpha",
)];

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, name: "spectrum_oracle", suite: Suite::Nystrom, budget: 240.0, run: spectrum_oracle },
        Criterion { id: 2, name: "trace_identity", suite: Suite::Spectral, budget: 5.0, run: trace_identity },
        Criterion { id: 3, name: "dixmier_trace", suite: Suite::Spectral, budget: 10.0, run: dixmier_trace },
        Criterion { id: 4, name: "schatten_thresholds", suite: Suite::Spectral, budget: 30.0, run: schatten_thresholds },
        Criterion { id: 5, name: "forelli_rudin", suite: Suite::Quad, budget: 60.0, run: forelli_rudin },
        Criterion { id: 6, name: "berezin_transform", suite: Suite::Quad, budget: 60.0, run: berezin_transform },
        Criterion { id: 7, name: "finite_rank", suite: Suite::Nystrom, budget: 60.0, run: finite_rank },
        Criterion { id: 8, name: "radial_operator_algebra", suite: Suite::Spectral, budget: 5.0, run: radial_algebra },
        Criterion { id: 9, name: "classifier_golden_table", suite: Suite::Classify, budget: 1.0, run: classifier_golden },
        Criterion { id: 10, name: "funo_ratio", suite: Suite::Spectral, budget: 5.0, run: funo_ratio },
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub suite: Suite,
    pub runtime: Field,
    pub passed: bool,
    pub checks: Vec<Check>,
}

pub fn run_criterion(c: &Criterion, cfg: &RunConfig) -> CriterionOutcome {
    let start = Instant::now();
    let mut checks = (c.run)(cfg);
    let runtime = Field::at_most(start.elapsed().as_secs_f64(), c.budget);
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    let passed = runtime.pass && checks.iter().all(|ch| ch.field.pass);
    CriterionOutcome { id: c.id, name: c.name, suite: c.suite, runtime, passed, checks }
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

fn spectrum_oracle(_cfg: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for alpha in [0.5, 1.0] {
        let tag = format!("spectrum_oracle/d1_alpha{alpha}");
        let start = Instant::now();
        let table = (|| {
            let params = OperatorParams::new(alpha, 1)?;
            let grids = [64, 128, 256].iter().map(|&a| nystrom_grid(1, a)).collect::<Result<Vec<_>>>()?;
            spectrum_compare(&params, &grids, 5)
        })();
        let elapsed = start.elapsed().as_secs_f64();
        match table {
            Ok(t) => {
                let last = t.rows.last().expect("three grids");
                let errors: Vec<String> = t.rows.iter().map(|r| format!("{}:{:.3e}", r.nodes, r.max_error)).collect();
                out.push(Check::new(
                    format!("{tag}/top5_error"),
                    Field::at_most(last.max_error, 1e-3),
                    format!("{} nodes; errors {}", last.nodes, errors.join(" ")),
                ));
                out.push(Check::holds(format!("{tag}/node_count"), last.nodes >= 2048, format!("{}", last.nodes)));
                out.push(Check::new(
                    format!("{tag}/reduction_per_doubling"),
                    Field::at_least(t.min_reduction, 2.0),
                    "smallest ratio of consecutive errors",
                ));
                out.push(Check::new(format!("{tag}/runtime"), Field::at_most(elapsed, 120.0), "seconds"));
            }
            Err(e) => out.push(Check::failed(tag, e)),
        }
    }
    out
}

// Σ m_n μ_n with signs; for α < 0 the terms decay like n^{α-2}.
fn signed_trace(alpha: f64, d: u32) -> f64 {
    let df = d as f64;
    let (mut mu, mut mult, mut total) = (1.0f64, 1.0f64, 0.0f64);
    for n in 0..2_000_000u64 {
        let nf = n as f64;
        total += mu * mult;
        mu *= (alpha + nf) / (df + 1.0 + nf);
        mult *= (nf + df) / (nf + 1.0);
    }
    total
}

fn trace_identity(_cfg: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for (d, alpha) in [(1u32, 0.5), (2, 0.3), (3, -0.7)] {
        let tag = format!("trace_identity/d{d}_alpha{alpha}");
        let result = (|| {
            let params = OperatorParams::new(alpha, d)?;
            let sum = schatten_sum(&params, 1.0)?;
            Ok::<_, bergman_core::Error>((sum.value(), ballquad::trace_formula(alpha, d)?))
        })();
        match result {
            Ok((Some(sum), closed)) => {
                out.push(Check::new(
                    format!("{tag}/schatten_sum"),
                    Field::at_most(rel(sum, closed), 1e-8),
                    format!("singular value sum {sum:.15} vs trace formula {closed:.15}"),
                ));
                if alpha < 0.0 {
                    let signed = signed_trace(alpha, d);
                    out.push(Check::new(
                        format!("{tag}/signed_eigenvalue_sum"),
                        Field::at_most(rel(signed, closed), 1e-8),
                        format!("signed eigenvalue sum {signed:.15}"),
                    ));
                    out.push(Check::new(
                        format!("{tag}/norm_is_two_minus_trace"),
                        Field::at_most(rel(sum, 2.0 - closed), 1e-8),
                        format!("2 - trace = {:.15}", 2.0 - closed),
                    ));
                }
            }
            Ok((None, _)) => out.push(Check::holds(format!("{tag}/schatten_sum"), false, "series diverged")),
            Err(e) => out.push(Check::failed(tag, e)),
        }
    }
    let exact = ballquad::trace_formula(0.5, 1).map(|v| (v - 2.0).abs()).unwrap_or(f64::NAN);
    out.push(Check::new("trace_identity/d1_alpha0.5/equals_two", Field::at_most(exact, 1e-14), ""));
    out
}

fn dixmier_trace(cfg: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for (d, alpha, target) in [(1u32, 1.0, 1.0), (2, 1.0, 1.0), (3, 1.0, 1.0), (1, 0.5, 0.0)] {
        let name = format!("dixmier_trace/d{d}_alpha{alpha}");
        match OperatorParams::new(alpha, d).and_then(|p| dixmier_trace_estimate(&p, cfg.k_max)) {
            Ok(acc) => out.push(Check::new(
                name,
                Field::at_most((acc.extrapolated - target).abs(), 0.01),
                format!("estimate {:.6} (k_max {}), target {target}", acc.extrapolated, cfg.k_max),
            )),
            Err(e) => out.push(Check::failed(name, e)),
        }
    }
    out
}

fn schatten_thresholds(_cfg: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for d in 1..=2u32 {
        for alpha in [0.5, 1.0, -1.3] {
            let tag = format!("schatten_thresholds/d{d}_alpha{alpha}");
            let params = match OperatorParams::new(alpha, d) {
                Ok(p) => p,
                Err(e) => {
                    out.push(Check::failed(tag, e));
                    continue;
                }
            };
            let threshold = schatten_threshold(&params).unwrap_or(f64::NAN);
            match schatten_sum(&params, threshold) {
                Ok(s) => out.push(Check::holds(
                    format!("{tag}/diverges_at_threshold"),
                    matches!(s, SchattenSum::Diverged { .. }),
                    format!("p = {threshold:.6}"),
                )),
                Err(e) => out.push(Check::failed(format!("{tag}/diverges_at_threshold"), e)),
            }
            match schatten_sum(&params, threshold + 0.05) {
                Ok(s) => out.push(Check::holds(
                    format!("{tag}/converges_above_threshold"),
                    s.value().is_some_and(f64::is_finite),
                    format!("p = {:.6}, value {:?}", threshold + 0.05, s.value()),
                )),
                Err(e) => out.push(Check::failed(format!("{tag}/converges_above_threshold"), e)),
            }
            let expected = -(d as f64 + 1.0 - alpha) / d as f64;
            match decay_exponent_fit(&params, 10_000) {
                Ok(slope) => out.push(Check::new(
                    format!("{tag}/decay_slope"),
                    Field::at_most(rel(slope, expected), 0.02),
                    format!("slope {slope:.6}, expected {expected:.6}"),
                )),
                Err(e) => out.push(Check::failed(format!("{tag}/decay_slope"), e)),
            }
        }
    }
    out
}

fn forelli_rudin(cfg: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for d in 1..=2u32 {
        let grid = match cfg.ball_grid(d) {
            Ok(g) => g,
            Err(e) => {
                out.push(Check::failed(format!("forelli_rudin/d{d}/grid"), e));
                continue;
            }
        };
        let df = d as f64;
        for c in [0.5, df, df + 1.5] {
            for t in [0.0, 1.0] {
                for r in [0.3, 0.8] {
                    let name = format!("forelli_rudin/quadrature_vs_series/d{d}_c{c}_t{t}_r{r}");
                    let result = (|| {
                        let q = fr_quadrature(c, t, r, &grid, cfg.quad_tol)?;
                        let s = fr_series(&FRQuery::new(c, t, r)?, d, cfg.series_tol)?;
                        Ok::<_, bergman_core::Error>((q, s))
                    })();
                    match result {
                        Ok((q, s)) => out.push(Check::new(
                            name,
                            Field::at_most(rel(q, s), 1e-6),
                            format!("quadrature {q:.12} series {s:.12}"),
                        )),
                        Err(e) => out.push(Check::failed(name, e)),
                    }
                }
            }
        }
    }
    let name = "forelli_rudin/boundary_d1_beta1";
    match fr_boundary(1.0, 0.0, 1) {
        Ok(Boundary::Finite(v)) => {
            let target = 4.0 / std::f64::consts::PI;
            out.push(Check::new(name, Field::at_most((v - target).abs(), 1e-10), format!("{v:.15}")))
        }
        Ok(Boundary::Infinite) => out.push(Check::holds(name, false, "reported infinite")),
        Err(e) => out.push(Check::failed(name, e)),
    }
    let radii = default_classify_radii();
    for d in 1..=2u32 {
        let df = d as f64;
        for (c, expected) in [(df, "bounded"), (df + 1.0, "log"), (df + 2.0, "power")] {
            let name = format!("forelli_rudin/asymptotic/d{d}_c{c}");
            match fr_asymptotic_classify(c, 0.0, d, &radii) {
                Ok(fit) => {
                    let (label, ok, detail) = match fit.regime {
                        AsymptoticRegime::Bounded => ("bounded", expected == "bounded", String::new()),
                        AsymptoticRegime::Log => ("log", expected == "log", String::new()),
                        AsymptoticRegime::Power { exponent } => {
                            let target = df + 1.0 - c;
                            let close = rel(exponent, target) <= 0.03;
                            ("power", expected == "power" && close, format!(" exponent {exponent:.5} vs {target}"))
                        }
                    };
                    out.push(Check::holds(
                        name,
                        ok,
                        format!("{label} (expected {expected}), slope {:.5}{detail}", fit.slope),
                    ));
                }
                Err(e) => out.push(Check::failed(name, e)),
            }
        }
    }
    out
}

fn berezin_transform(cfg: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for d in 1..=2u32 {
        let grid = match cfg.ball_grid(d) {
            Ok(g) => g,
            Err(e) => {
                out.push(Check::failed(format!("berezin_transform/d{d}/grid"), e));
                continue;
            }
        };
        for alpha in [-0.5, 1.0, d as f64 + 0.5] {
            for r in [0.0, 0.5, 0.9] {
                let name = format!("berezin_transform/d{d}_alpha{alpha}_r{r}");
                let result = (|| {
                    Ok::<_, bergman_core::Error>((
                        berezin_quadrature(alpha, d, r, &grid, cfg.quad_tol)?,
                        berezin_closed(alpha, d, r)?,
                    ))
                })();
                match result {
                    Ok((q, c)) => out.push(Check::new(
                        name,
                        Field::at_most(rel(q, c), 1e-6),
                        format!("quadrature {q:.12} closed form {c:.12}"),
                    )),
                    Err(e) => out.push(Check::failed(name, e)),
                }
            }
        }
    }
    out
}

fn finite_rank(_cfg: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for (n, d) in [(0u32, 1u32), (1, 1), (1, 2), (2, 1)] {
        let grid = if d == 1 { nystrom_grid(1, 16) } else { BallGrid::new(GridSpec::product(2, 4, 4, 8)) };
        let grid = match grid {
            Ok(g) => g,
            Err(e) => {
                out.push(Check::failed(format!("finite_rank/n{n}_d{d}"), e));
                continue;
            }
        };
        for kind in [KernelKind::Holomorphic, KernelKind::Absolute] {
            let label = match kind {
                KernelKind::Holomorphic => "holomorphic",
                KernelKind::Absolute => "absolute",
            };
            let name = format!("finite_rank/n{n}_d{d}/{label}");
            match finite_rank_check(n, d, kind, &grid) {
                Ok(rep) => {
                    let expected = rep.holomorphic_rank as usize;
                    let (ok, bound) = match kind {
                        KernelKind::Holomorphic => (rep.rank == expected, format!("= {expected}")),
                        KernelKind::Absolute => {
                            (rep.rank <= expected * expected, format!("<= {}", expected * expected))
                        }
                    };
                    out.push(Check::holds(
                        name,
                        ok,
                        format!("rank {} (required {bound}), next magnitude {:.2e}", rep.rank, rep.gap_below),
                    ));
                }
                Err(e) => out.push(Check::failed(name, e)),
            }
        }
    }
    out
}

fn random_vector(rng: &mut ChaCha8Rng, d: u32, max_degree: u64) -> CoefficientVector {
    let mut f = CoefficientVector::new(d, max_degree);
    for k in MonomialIndex::up_to_degree(d, max_degree) {
        if rng.gen_bool(0.3) {
            let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            f.insert(k, v).expect("index within bound");
        }
    }
    f
}

fn radial_algebra(cfg: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst: f64 = 0.0;
    let mut failure = None;
    for _ in 0..50 {
        let d = rng.gen_range(1..=3u32);
        let s = rng.gen_range(0.0..2.0);
        let t = rng.gen_range(-1.5..2.0);
        let f = random_vector(&mut rng, d, cfg.max_degree);
        match radial_diff_apply(s, t, &f).and_then(|g| radial_diff_apply(s + t, -t, &g)) {
            Ok(g) => worst = worst.max(g.max_abs_diff(&f)),
            Err(e) => failure = Some(e),
        }
    }
    match failure {
        Some(e) => out.push(Check::failed("radial_operator_algebra/inverse_composition", e)),
        None => out.push(Check::new(
            "radial_operator_algebra/inverse_composition",
            Field::at_most(worst, 1e-12),
            format!("50 random vectors of degree <= {}", cfg.max_degree),
        )),
    }

    let mut worst: f64 = 0.0;
    for (alpha, d) in [(0.5, 1u32), (1.0, 2), (1.7, 3), (-1.3, 2), (2.5, 2)] {
        let result = (|| {
            let params = OperatorParams::new(alpha, d)?;
            let mut w: f64 = 0.0;
            for (k, mu) in galerkin_diagonal(&params, cfg.max_degree)? {
                let f = CoefficientVector::monomial(k.clone(), Complex64::new(1.0, 0.0));
                let g = radial_diff_apply(0.0, alpha - d as f64 - 1.0, &f)?;
                w = w.max(rel(g.get(&k).re, mu));
            }
            Ok::<_, bergman_core::Error>(w)
        })();
        match result {
            Ok(w) => worst = worst.max(w),
            Err(e) => {
                out.push(Check::failed(format!("radial_operator_algebra/kernel_action/d{d}_alpha{alpha}"), e));
            }
        }
    }
    // Both sides are the same Pochhammer product, with d+1 + (α-d-1) in
    // place of α, so agreement is to a few ulps.
    out.push(Check::new(
        "radial_operator_algebra/kernel_action",
        Field::at_most(worst, 1e-14),
        "largest relative gap between R^{0,alpha-d-1} z^k and mu_|k| z^k",
    ));

    for n in 0..=2u32 {
        for (d, s, t) in [(1u32, 0.0, 1.0), (2, 0.5, -0.7), (3, 1.2, 2.5)] {
            let name = format!("radial_operator_algebra/zhz/n{n}_d{d}_s{s}_t{t}");
            match zhz_check(d, s, t, n, n + 40) {
                Ok(rep) => {
                    out.push(Check::new(name, Field::at_most(rep.residual, 1e-10), format!("h = {:?}", rep.h)))
                }
                Err(e) => out.push(Check::failed(name, e)),
            }
        }
    }
    out
}

/// `(α, d, p, q, kind, compact, bounded, rule, on an equality boundary)`.
pub type GoldenRow = (&'static str, u32, &'static str, &'static str, OperatorKind, Answer, Answer, Rule, bool);

pub fn golden_rows() -> Vec<GoldenRow> {
    use Answer::{No, Unknown, Yes};
    use OperatorKind::{Kplus, K};
    use Rule::*;
    vec![
        ("5/2", 1, "inf", "1", Kplus, Yes, Yes, SupercriticalInfiniteP, false),
        ("5/2", 1, "inf", "2", K, No, No, SupercriticalInfiniteP, true),
        ("5/2", 1, "inf", "1.5", K, Yes, Yes, SupercriticalInfiniteP, false),
        ("5/2", 1, "4", "1", K, Yes, Yes, SupercriticalFiniteP, false),
        ("5/2", 1, "4", "4/3", Kplus, No, No, SupercriticalFiniteP, true),
        ("5/2", 1, "2", "1", K, No, No, SupercriticalFiniteP, false),
        ("7/2", 2, "3", "1", K, Yes, Yes, SupercriticalFiniteP, false),
        ("7/2", 2, "3", "6/5", K, No, No, SupercriticalFiniteP, true),
        ("7/2", 2, "inf", "1.5", Kplus, Yes, Yes, SupercriticalInfiniteP, false),
        ("7/2", 2, "inf", "2", K, No, No, SupercriticalInfiniteP, true),
        ("3", 1, "2", "2", K, No, No, Unbounded, false),
        ("4", 2, "inf", "1", Kplus, No, No, Unbounded, false),
        ("5.5", 1, "1.5", "1", K, No, No, Unbounded, false),
        ("2", 1, "2", "2", K, No, Unknown, CriticalOrder, true),
        ("2", 1, "2", "2", Kplus, No, Unknown, CriticalOrder, false),
        ("2", 1, "3", "2", K, Yes, Yes, CriticalOrder, false),
        ("3", 2, "inf", "5", K, Yes, Yes, CriticalOrder, false),
        ("3", 2, "inf", "inf", Kplus, No, Unknown, CriticalOrder, true),
        ("1", 1, "1", "1", K, Yes, Yes, UnitP, false),
        ("1", 1, "1", "2", K, No, Unknown, UnitP, true),
        ("1", 1, "1.5", "3", K, Yes, Yes, IntermediateP, false),
        ("1", 1, "1.5", "6", Kplus, No, Unknown, IntermediateP, true),
        ("1", 1, "1.5", "7", K, No, Unknown, IntermediateP, false),
        ("1", 1, "2", "1000", K, Yes, Yes, CriticalP, false),
        ("1", 1, "2", "inf", K, No, Unknown, CriticalP, false),
        ("1", 1, "3", "inf", K, Yes, Yes, LargeP, false),
        ("0.5", 2, "1", "6", K, No, Unknown, UnitP, true),
        ("1/2", 2, "11/10", "66/5", K, No, Unknown, IntermediateP, true),
        ("1/2", 2, "11/10", "13", Kplus, Yes, Yes, IntermediateP, false),
        ("-1", 3, "1", "inf", K, Yes, Yes, NonpositiveOrder, false),
    ]
}

fn classifier_golden(_cfg: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for (i, (alpha, d, p, q, kind, compact, bounded, rule, boundary)) in golden_rows().into_iter().enumerate() {
        let name = format!("classifier_golden_table/row{:02}", i + 1);
        let verdict = parse_rational(alpha)
            .and_then(|a| Ok((a, ExponentPair::parse(p, q)?)))
            .map(|(a, pair)| compactness(&a, d, &pair, kind));
        match verdict {
            Ok(v) => {
                let ok = v.compact == compact && v.bounded == bounded && v.rule == rule;
                let tag = if boundary { " boundary" } else { "" };
                out.push(Check::holds(
                    name,
                    ok,
                    format!("alpha={alpha} d={d} p={p} q={q}{tag}: {:?}/{:?}/{}", v.compact, v.bounded, v.rule),
                ));
            }
            Err(e) => out.push(Check::failed(name, e)),
        }
    }
    let boundary = golden_rows().iter().filter(|r| r.8).count();
    out.push(Check::new("classifier_golden_table/boundary_rows", Field::at_least(boundary as f64, 10.0), ""));
    out
}

fn funo_ratio(_cfg: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for (d, alpha, p) in [(1u32, 0.5, 1.2), (2, 1.5, 1.1)] {
        let name = format!("funo_ratio/d{d}_alpha{alpha}_p{p}");
        match OperatorParams::new(alpha, d).and_then(|params| funo_ratio_range(&params, p, 100_000)) {
            Ok((lo, hi)) => {
                let ratio = if lo > 0.0 && hi.is_finite() { hi / lo } else { f64::INFINITY };
                out.push(Check::new(name, Field::at_most(ratio, 100.0), format!("range [{lo:.6}, {hi:.6}]")));
            }
            Err(e) => out.push(Check::failed(name, e)),
        }
    }
    out
}

/// Special-function checks outside the acceptance criteria.
pub fn specfun_checks(cfg: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let half = log_gamma(0.5).map(|g| (g.log_abs - 0.5 * std::f64::consts::PI.ln()).abs()).unwrap_or(f64::NAN);
    out.push(Check::new("specfun/log_gamma_half", Field::at_most(half, 1e-14), "ln Gamma(1/2) = ln sqrt(pi)"));

    let mut worst: f64 = 0.0;
    for i in 1..=200 {
        let x = 0.1 * i as f64;
        let ratio = gamma(x + 1.0).and_then(|a| Ok(a / (x * gamma(x)?))).unwrap_or(f64::NAN);
        worst = worst.max((ratio - 1.0).abs());
    }
    out.push(Check::new("specfun/gamma_recurrence", Field::at_most(worst, 1e-13), "x in [0.1, 20]"));

    let mut worst: f64 = 0.0;
    for &a in &[0.3, 1.7, -2.5, 4.0] {
        for j in 0..200u64 {
            let lhs = pochhammer(a, j + 1);
            let rhs = pochhammer(a, j) * (a + j as f64);
            if lhs.is_finite() && rhs.is_finite() && rhs != 0.0 {
                worst = worst.max(rel(lhs, rhs));
            }
        }
    }
    out.push(Check::new("specfun/pochhammer_recurrence", Field::at_most(worst, 1e-13), "(a)_{j+1} = (a)_j (a+j)"));

    let series = |a, b, c, x| hyp2f1_capped(&HypergeometricQuery::new(a, b, c, x), cfg.series_tol, cfg.max_terms);
    let mut worst: f64 = 0.0;
    for &x in &[0.1f64, 0.5, 0.9] {
        let s = x.sqrt();
        worst = worst.max(series(0.7, 2.3, 2.3, x).map(|v| rel(v, (1.0 - x).powf(-0.7))).unwrap_or(f64::NAN));
        worst = worst.max(series(0.5, 0.5, 1.5, x).map(|v| rel(v, s.asin() / s)).unwrap_or(f64::NAN));
        worst = worst.max(series(1.0, 1.0, 2.0, x).map(|v| rel(v, -(1.0 - x).ln() / x)).unwrap_or(f64::NAN));
    }
    out.push(Check::new("specfun/hyp2f1_closed_forms", Field::at_most(worst, 1e-12), "elementary reductions"));

    // Gauss: ₂F₁(a,b;c;1) = Γ(c)Γ(c-a-b)/(Γ(c-a)Γ(c-b)); c-a-b = 2 makes the
    // series at 1-1e-7 accurate to about 1e-7.
    let gauss = series(0.5, 1.0, 3.5, 1.0).ok();
    let near = hyp2f1_capped(&HypergeometricQuery::new(0.5, 1.0, 3.5, 1.0 - 1e-7), 1e-13, 50_000_000).ok();
    let gap = match (gauss, near) {
        (Some(g), Some(n)) => (g - n).abs(),
        _ => f64::NAN,
    };
    out.push(Check::new("specfun/gauss_sum_limit", Field::at_most(gap, 1e-6), "series at 1-1e-7 vs Gauss value"));
    let closed = (|| {
        Ok::<_, bergman_core::Error>(gamma(3.5)? * gamma(2.0)? / (gamma(3.0)? * gamma(2.5)?))
    })()
    .ok();
    let gap = match (gauss, closed) {
        (Some(g), Some(c)) => rel(g, c),
        _ => f64::NAN,
    };
    out.push(Check::new("specfun/gauss_sum_closed_form", Field::at_most(gap, 1e-14), "Gamma quotient"));
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub passed: bool,
    pub criteria: Vec<CriterionOutcome>,
    pub checks: Vec<Check>,
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> VerifyReport {
    let mut outcomes = Vec::new();
    for c in criteria() {
        if suite == Suite::All || suite == c.suite {
            outcomes.push(run_criterion(&c, cfg));
        }
    }
    let mut checks: Vec<Check> = outcomes
        .iter()
        .flat_map(|o| {
            let mut v = o.checks.clone();
            v.push(Check::new(format!("{}/runtime", o.name), o.runtime, "seconds"));
            v
        })
        .collect();
    if suite == Suite::All || suite == Suite::Specfun {
        checks.extend(specfun_checks(cfg));
    }
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    let passed = checks.iter().all(|c| c.field.pass);
    VerifyReport { suite, passed, criteria: outcomes, checks }
}

impl VerifyReport {
    pub fn into_report(self) -> Report {
        let mut table = Table::new(vec!["name", "value", "tolerance", "bound", "pass", "detail"]);
        for c in &self.checks {
            let bound = serde_json::to_value(c.field.bound).ok().and_then(|v| v.as_str().map(String::from));
            table.push(vec![
                Cell::from(c.name.clone()),
                c.field.value.into(),
                c.field.tolerance.into(),
                Cell::from(bound.unwrap_or_default()),
                c.field.pass.into(),
                Cell::from(c.detail.clone()),
            ]);
        }
        let criteria: Vec<_> = self
            .criteria
            .iter()
            .map(|o| json!({"id": o.id, "name": o.name, "suite": o.suite, "passed": o.passed, "runtime": o.runtime}))
            .collect();
        let json = json!({
            "suite": self.suite,
            "passed": self.passed,
            "criteria": criteria,
            "checks": self.checks,
        });
        Report { json, table, passed: Some(self.passed) }
    }
}
