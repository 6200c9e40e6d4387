//! Subcommands. Each delegates to `bergman-core` and returns a [`Report`].

use clap::{Subcommand, ValueEnum};
use serde_json::json;

use bergman_core::ballquad::{
    berezin_closed, berezin_quadrature, fr_asymptotic_classify, fr_boundary, fr_quadrature, fr_series_capped,
    default_classify_radii, trace_formula, AsymptoticRegime, Boundary, FRQuery, BEREZIN_MAX_RADIUS,
};
use bergman_core::classify::{compactness, parse_rational, schatten_macaev, Exponent, ExponentPair, OperatorKind};
use bergman_core::spectral::{
    dixmier_trace_estimate, schatten_sum, singular_values, OperatorParams, SchattenSum,
};

use crate::config::RunConfig;
use crate::report::{Cell, Field, Report, Table};
use crate::verify::{run_suite, Suite};
use crate::CliError;

/// Claimed relative accuracy of values computed from closed forms.
pub const CLOSED_FORM_TOL: f64 = 1e-13;
/// Accuracy claimed for extrapolated Dixmier trace estimates.
pub const DIXMIER_TOL: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FrMode {
    /// Hypergeometric series.
    Series,
    /// Direct quadrature on the configured grid (radius at most 0.999).
    Quadrature,
    /// Value on the unit sphere, or infinite.
    Boundary,
    /// Growth as the radius tends to 1: bounded, logarithmic or a power.
    Classify,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Largest singular values of K_alpha, expanded by multiplicity.
    Spectrum {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        dim: u32,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Compactness and boundedness of K_alpha or K_alpha^+ from L^p to L^q.
    Classify {
        /// Exact: `a/b` or a decimal.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        dim: u32,
        /// `inf` or a rational in `[1, inf)`.
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        /// `k` or `kplus`.
        #[arg(long, default_value = "k")]
        kind: String,
    },
    /// Run verification checks; exits 1 if any fails.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Dixmier trace `lim σ_k / ln k` of K_alpha, for alpha <= 1.
    Dixmier {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        dim: u32,
    },
    /// Schatten and Macaev membership, and the Schatten sum when finite.
    Schatten {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        p: String,
    },
    /// Berezin transform of K_alpha at `(radius, 0, …, 0)`.
    Berezin {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        radius: f64,
        /// Also integrate on the configured grid (radius at most 0.95).
        #[arg(long)]
        quadrature: bool,
    },
    /// Forelli–Rudin integral `J_{c,t}` at `(radius, 0, …, 0)`.
    Frudin {
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        t: f64,
        #[arg(long)]
        dim: u32,
        #[arg(long, default_value_t = 0.0)]
        radius: f64,
        #[arg(long, value_enum, default_value_t = FrMode::Series)]
        mode: FrMode,
    },
    /// Trace of K_alpha for alpha < 1.
    Trace {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        dim: u32,
    },
}

/// Radius above which grid quadrature of `J_{c,t}` loses accuracy.
pub const FR_WARN_RADIUS: f64 = 0.95;

pub fn run(cmd: &Command, cfg: &RunConfig) -> Result<Report, CliError> {
    match cmd {
        Command::Spectrum { alpha, dim, count } => spectrum(*alpha, *dim, *count),
        Command::Classify { alpha, dim, p, q, kind } => classify(alpha, *dim, p, q, kind),
        Command::Verify { suite } => Ok(run_suite(*suite, cfg).into_report()),
        Command::Dixmier { alpha, dim } => dixmier(*alpha, *dim, cfg),
        Command::Schatten { alpha, dim, p } => schatten(alpha, *dim, p),
        Command::Berezin { alpha, dim, radius, quadrature } => berezin(*alpha, *dim, *radius, *quadrature, cfg),
        Command::Frudin { c, t, dim, radius, mode } => frudin(*c, *t, *dim, *radius, *mode, cfg),
        Command::Trace { alpha, dim } => trace(*alpha, *dim),
    }
}

fn computed(x: f64) -> Field {
    Field::computed(x, CLOSED_FORM_TOL)
}

pub fn spectrum(alpha: f64, d: u32, count: usize) -> Result<Report, CliError> {
    let params = OperatorParams::new(alpha, d)?;
    let values = singular_values(&params, count)?;
    let mut table = Table::new(vec!["k", "singular_value", "degree", "multiplicity"]);
    let mut rows = Vec::with_capacity(values.len());
    for e in &values {
        let k = e.k + 1;
        table.push(vec![k.into(), e.value.into(), e.degree.into(), e.multiplicity.into()]);
        rows.push(json!({"k": k, "singular_value": computed(e.value), "degree": e.degree, "multiplicity": e.multiplicity}));
    }
    let json = json!({"command": "spectrum", "alpha": computed(alpha), "d": d, "rows": rows});
    Ok(Report { json, table, passed: None })
}

pub fn classify(alpha: &str, d: u32, p: &str, q: &str, kind: &str) -> Result<Report, CliError> {
    if d == 0 {
        return Err(CliError::Usage("dim must be at least 1".into()));
    }
    let a = parse_rational(alpha)?;
    let pair = ExponentPair::parse(p, q)?;
    let kind: OperatorKind = kind.parse()?;
    let v = compactness(&a, d, &pair, kind);
    let kind_name = match kind {
        OperatorKind::K => "k",
        OperatorKind::Kplus => "kplus",
    };
    let json = json!({
        "command": "classify",
        "alpha": a.to_string(),
        "d": d,
        "p": pair.p.to_string(),
        "q": pair.q.to_string(),
        "kind": kind_name,
        "compact": v.compact,
        "bounded": v.bounded,
        "rule": v.rule.name(),
    });
    let mut table = Table::new(vec!["alpha", "d", "p", "q", "kind", "compact", "bounded", "rule"]);
    let answer = |a| serde_json::to_value(a).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    table.push(vec![
        a.to_string().into(),
        d.into(),
        pair.p.to_string().into(),
        pair.q.to_string().into(),
        kind_name.into(),
        answer(v.compact).into(),
        answer(v.bounded).into(),
        v.rule.name().into(),
    ]);
    Ok(Report { json, table, passed: None })
}

pub fn dixmier(alpha: f64, d: u32, cfg: &RunConfig) -> Result<Report, CliError> {
    let params = OperatorParams::new(alpha, d)?;
    let acc = dixmier_trace_estimate(&params, cfg.k_max)?;
    let mut table = Table::new(vec!["k", "partial_sum", "ratio"]);
    for &(k, s) in &acc.partial_sums {
        let ratio = if k >= 2 { s / (k as f64).ln() } else { f64::NAN };
        table.push(vec![k.into(), s.into(), ratio.into()]);
    }
    let json = json!({
        "command": "dixmier",
        "alpha": computed(alpha),
        "d": d,
        "k_max": cfg.k_max,
        "estimate": Field::computed(acc.extrapolated, DIXMIER_TOL),
        "last_ratio": acc.estimates.last().map(|&(_, r)| computed(r)),
    });
    Ok(Report { json, table, passed: None })
}

pub fn schatten(alpha: &str, d: u32, p: &str) -> Result<Report, CliError> {
    let a = parse_rational(alpha)?;
    let pr = parse_rational(p)?;
    let m = schatten_macaev(&a, d, &pr)?;
    let (af, pf) = (Exponent::Finite(a.clone()).to_f64(), Exponent::Finite(pr.clone()).to_f64());
    let params = OperatorParams::new(af, d)?;
    let sum = if m.schatten { Some(schatten_sum(&params, pf)?) } else { None };
    let (value, error) = match sum {
        Some(SchattenSum::Converged { value, error_estimate }) => (Some(value), Some(error_estimate)),
        _ => (None, None),
    };
    let json = json!({
        "command": "schatten",
        "alpha": a.to_string(),
        "d": d,
        "p": pr.to_string(),
        "schatten": m.schatten,
        "macaev": m.macaev,
        "not_compact": m.not_compact,
        "hausdorff_dim": m.hausdorff_dim.map(computed),
        "sum": value.zip(error).map(|(v, e)| Field::computed(v, (e / v.abs()).max(f64::EPSILON))),
    });
    let mut table = Table::new(vec!["alpha", "d", "p", "schatten", "macaev", "hausdorff_dim", "sum"]);
    table.push(vec![
        a.to_string().into(),
        d.into(),
        pr.to_string().into(),
        m.schatten.into(),
        m.macaev.into(),
        m.hausdorff_dim.unwrap_or(f64::NAN).into(),
        value.unwrap_or(f64::INFINITY).into(),
    ]);
    Ok(Report { json, table, passed: None })
}

pub fn berezin(alpha: f64, d: u32, radius: f64, quadrature: bool, cfg: &RunConfig) -> Result<Report, CliError> {
    let closed = berezin_closed(alpha, d, radius)?;
    let quad = if quadrature {
        if radius > BEREZIN_MAX_RADIUS {
            return Err(CliError::Usage(format!("quadrature needs radius <= {BEREZIN_MAX_RADIUS}")));
        }
        Some(berezin_quadrature(alpha, d, radius, &cfg.ball_grid(d)?, cfg.quad_tol)?)
    } else {
        None
    };
    let residual = quad.map(|q| Field::at_most((q - closed).abs() / closed.abs(), 10.0 * cfg.quad_tol));
    let json = json!({
        "command": "berezin",
        "alpha": computed(alpha),
        "d": d,
        "radius": computed(radius),
        "closed_form": computed(closed),
        "quadrature": quad.map(|q| Field::computed(q, cfg.quad_tol)),
        "relative_difference": residual,
    });
    let mut table = Table::new(vec!["alpha", "d", "radius", "closed_form", "quadrature"]);
    table.push(vec![alpha.into(), d.into(), radius.into(), closed.into(), quad.unwrap_or(f64::NAN).into()]);
    let passed = residual.map(|f| f.pass);
    Ok(Report { json, table, passed })
}

pub fn frudin(c: f64, t: f64, d: u32, radius: f64, mode: FrMode, cfg: &RunConfig) -> Result<Report, CliError> {
    let mut table = Table::new(vec!["mode", "c", "t", "d", "radius", "value", "regime", "exponent"]);
    let base = |name: &str| -> Vec<Cell> { vec![name.into(), c.into(), t.into(), d.into()] };
    let json = match mode {
        FrMode::Series | FrMode::Quadrature => {
            let q = FRQuery::new(c, t, radius)?;
            let (name, value, tol) = if mode == FrMode::Series {
                ("series", fr_series_capped(&q, d, cfg.series_tol, cfg.max_terms)?, cfg.series_tol)
            } else {
                if radius > FR_WARN_RADIUS {
                    eprintln!("warning: quadrature at radius {radius} > {FR_WARN_RADIUS} may be inaccurate");
                }
                ("quadrature", fr_quadrature(c, t, radius, &cfg.ball_grid(d)?, cfg.quad_tol)?, cfg.quad_tol)
            };
            let mut row = base(name);
            row.extend([radius.into(), value.into(), "".into(), Cell::Num(f64::NAN)]);
            table.push(row);
            json!({"command": "frudin", "mode": name, "c": computed(c), "t": computed(t), "d": d,
                   "radius": computed(radius), "value": Field::computed(value, tol)})
        }
        FrMode::Boundary => {
            let value = match fr_boundary(c + t, t, d)? {
                Boundary::Finite(v) => v,
                Boundary::Infinite => f64::INFINITY,
            };
            let mut row = base("boundary");
            row.extend([1.0.into(), value.into(), "".into(), Cell::Num(f64::NAN)]);
            table.push(row);
            json!({"command": "frudin", "mode": "boundary", "c": computed(c), "t": computed(t), "d": d,
                   "finite": value.is_finite(), "value": value.is_finite().then(|| computed(value))})
        }
        FrMode::Classify => {
            let radii = default_classify_radii();
            let fit = fr_asymptotic_classify(c, t, d, &radii)?;
            let (regime, exponent) = match fit.regime {
                AsymptoticRegime::Bounded => ("bounded", None),
                AsymptoticRegime::Log => ("log", None),
                AsymptoticRegime::Power { exponent } => ("power", Some(exponent)),
            };
            for &(r, j) in &fit.samples {
                let mut row = base("classify");
                row.extend([r.into(), j.into(), regime.into(), exponent.unwrap_or(f64::NAN).into()]);
                table.push(row);
            }
            let samples: Vec<_> = fit.samples.iter().map(|&(r, j)| json!({"radius": computed(r), "value": computed(j)})).collect();
            json!({"command": "frudin", "mode": "classify", "c": computed(c), "t": computed(t), "d": d,
                   "regime": regime, "slope": computed(fit.slope), "exponent": exponent.map(computed), "samples": samples})
        }
    };
    Ok(Report { json, table, passed: None })
}

pub fn trace(alpha: f64, d: u32) -> Result<Report, CliError> {
    OperatorParams::new(alpha, d)?;
    let value = trace_formula(alpha, d)?;
    let json = json!({"command": "trace", "alpha": computed(alpha), "d": d, "trace": computed(value)});
    let mut table = Table::new(vec!["alpha", "d", "trace"]);
    table.push(vec![alpha.into(), d.into(), value.into()]);
    Ok(Report { json, table, passed: None })
}
