//! Command-line front end: evaluate expressions, localize zeros, scan zero counts and
//! run identity suites.

mod manifest;
mod verify;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;
use zetazero::expr::{eval_expr, parse_expr};
use zetazero::families::{linear_form_eval, LinearFormSeries};
use zetazero::zeros::{density_scan, localize_zeros, ContourConfig, Rectangle};
use zetazero::{ComplexValue, Error, EvalConfig};

use manifest::{RunManifest, ARTIFACT_VERSION};
use verify::Suite;

#[derive(Parser, Debug)]
#[command(name = "zetazero", version, about = "Evaluate zeta-function families and locate their zeros")]
struct Cli {
    /// Worker threads for contour work (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    csv: bool,
    /// Exit with status 4 when some cell could not be resolved.
    #[arg(long, global = true)]
    strict: bool,
    /// Absolute error target for `eval`, residual bound for accepted zeros otherwise.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an expression, or a linear-form series from --config, at points.
    Eval(EvalArgs),
    /// Localize the zeros of an expression in a rectangle.
    Zeros(ZerosArgs),
    /// Count zeros with Re(s) > sigma0 and 0 < Im(s) <= T for each T.
    Density(DensityArgs),
    /// Run an identity/oracle/symmetry residual suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Expression in s, e.g. "zeta(s)^2 - zeta(2*s)".
    #[arg(required_unless_present = "config")]
    expr: Option<String>,
    /// Linear-form series description (key = value lines).
    #[arg(long, conflicts_with = "expr")]
    config: Option<PathBuf>,
    /// Points such as 2, 0.5+14.13i, or comma-separated lists; with --config one tuple per flag.
    #[arg(long = "at", short = 's', required = true, allow_hyphen_values = true)]
    at: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ZerosArgs {
    expr: String,
    /// sigma_lo,sigma_hi,t_lo,t_hi
    #[arg(long, value_parser = parse_rect, allow_hyphen_values = true)]
    rect: Rectangle,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DensityArgs {
    expr: String,
    #[arg(long)]
    sigma0: f64,
    /// Comma-separated heights, strictly increasing.
    #[arg(long = "T", value_parser = parse_t_list)]
    t: TList,
    /// Right edge of the counting region; must lie in a zero-free half-plane of the expression.
    #[arg(long)]
    sigma_cap: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
}

#[derive(Debug, Clone)]
struct TList(Vec<f64>);

fn parse_floats(text: &str) -> Result<Vec<f64>, String> {
    text.split(',').map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{}`: {e}", p.trim()))).collect()
}

fn parse_rect(text: &str) -> Result<Rectangle, String> {
    let v = parse_floats(text)?;
    if v.len() != 4 {
        return Err(format!("expected 4 comma-separated numbers, got {}", v.len()));
    }
    Rectangle::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

fn parse_t_list(text: &str) -> Result<TList, String> {
    if text.trim().is_empty() {
        return Err("the T list is empty".into());
    }
    let v = parse_floats(text)?;
    if v.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err("T values must be finite and non-negative".into());
    }
    if v.windows(2).any(|w| w[1] <= w[0]) {
        return Err("T values must be strictly increasing".into());
    }
    Ok(TList(v))
}

fn parse_point(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    t.parse::<Complex64>().map_err(|_| format!("`{text}` is not a complex number"))
}

/// Failure carrying its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Syntax { .. } | Error::UnknownFamily { .. } | Error::Arity { .. } | Error::InvalidConfig(_) => 2,
            _ => 3,
        };
        Self { code, message: format!("{}: {e}", error_kind(&e)) }
    }
}

type Outcome = Result<u8, Failure>;

#[derive(Clone, Copy, PartialEq)]
enum Format {
    Text,
    Json,
    Csv,
}

struct Ctx {
    format: Format,
    strict: bool,
    tol: Option<f64>,
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Failure { code: 3, message: format!("cannot write {}: {e}", path.display()) }),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn to_json(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn eval_config(ctx: &Ctx, use_tol: bool) -> Result<EvalConfig, Failure> {
    let mut cfg = EvalConfig::default();
    if let (true, Some(t)) = (use_tol, ctx.tol) {
        cfg.target_abs_err = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn contour_config(ctx: &Ctx) -> Result<ContourConfig, Failure> {
    let mut c = ContourConfig::default();
    if let Some(t) = ctx.tol {
        c.zero_tol = t;
    }
    c.validate()?;
    Ok(c)
}

fn cmd_eval(a: EvalArgs, ctx: &Ctx) -> Outcome {
    let cfg = eval_config(ctx, true)?;
    let mut manifest = RunManifest::new("eval", cfg);
    manifest.output = a.out.as_ref().map(|p| p.display().to_string());
    let mut rows: Vec<(Vec<Complex64>, ComplexValue)> = Vec::new();

    if let Some(path) = &a.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        let spec = LinearFormSeries::from_config_str(&text)?;
        manifest.config = Some(path.display().to_string());
        for tuple in &a.at {
            let mut s = tuple.split(',').map(parse_point).collect::<Result<Vec<_>, _>>().map_err(Failure::usage)?;
            if s.len() == 1 {
                s = vec![s[0]; spec.m];
            }
            let v = linear_form_eval(&spec, &s, &cfg)?;
            rows.push((s, v));
        }
    } else {
        let text = a.expr.as_deref().expect("clap requires expr without --config");
        let e = parse_expr(text)?;
        manifest.expr = Some(text.to_string());
        for chunk in &a.at {
            for p in chunk.split(',') {
                let s = parse_point(p).map_err(Failure::usage)?;
                rows.push((vec![s], eval_expr(&e, s, &cfg)?));
            }
        }
    }

    let fmt_s = |s: &[Complex64]| s.iter().map(|z| z.to_string()).collect::<Vec<_>>().join(",");
    let body = match ctx.format {
        Format::Json => {
            let points: Vec<_> = rows
                .iter()
                .map(|(s, v)| {
                    json!({
                        "s": s.iter().map(|z| json!({"re": z.re, "im": z.im})).collect::<Vec<_>>(),
                        "re": v.value.re, "im": v.value.im, "abs_err": v.abs_err,
                    })
                })
                .collect();
            to_json(&json!({
                "expr": manifest.expr, "config": manifest.config, "points": points, "manifest": manifest.to_json(),
            }))
        }
        Format::Csv => {
            let mut s = format!("# {ARTIFACT_VERSION} manifest={}\ns,re,im,abs_err\n", manifest.hash());
            for (p, v) in &rows {
                let _ = writeln!(s, "\"{}\",{:e},{:e},{:e}", fmt_s(p), v.value.re, v.value.im, v.abs_err);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (p, v) in &rows {
                let _ = writeln!(s, "s = {}\tvalue = {:.16e} {:+.16e}i\tabs_err = {:.2e}", fmt_s(p), v.value.re, v.value.im, v.abs_err);
            }
            s
        }
    };
    emit(&a.out, &body)?;
    Ok(0)
}

fn rect_array(r: &Rectangle) -> serde_json::Value {
    json!([r.sigma_lo, r.sigma_hi, r.t_lo, r.t_hi])
}

fn cmd_zeros(a: ZerosArgs, ctx: &Ctx) -> Outcome {
    let e = parse_expr(&a.expr)?;
    let cfg = eval_config(ctx, false)?;
    let contour = contour_config(ctx)?;
    let mut manifest = RunManifest::new("zeros", cfg);
    manifest.expr = Some(a.expr.clone());
    manifest.contour = Some(contour);
    manifest.rect = Some(a.rect);
    manifest.output = a.out.as_ref().map(|p| p.display().to_string());

    let loc = localize_zeros(&e, &a.rect, &contour, &cfg)?;
    let body = if ctx.format == Format::Csv {
        let mut s = format!("# {ARTIFACT_VERSION} manifest={}\nre,im,residual,mult\n", manifest.hash());
        for z in &loc.zeros {
            let _ = writeln!(s, "{:e},{:e},{:e},{}", z.z().re, z.z().im, z.residual, z.winding_mult);
        }
        for u in &loc.unresolved {
            let _ = writeln!(s, "# unresolved {:?} winding {} ({})", [u.rect.sigma_lo, u.rect.sigma_hi, u.rect.t_lo, u.rect.t_hi], u.winding, u.reason);
        }
        s
    } else {
        let zeros: Vec<_> = loc
            .zeros
            .iter()
            .map(|z| json!({"re": z.z().re, "im": z.z().im, "residual": z.residual, "mult": z.winding_mult}))
            .collect();
        let unresolved: Vec<_> = loc
            .unresolved
            .iter()
            .map(|u| json!({"rect": rect_array(&u.rect), "winding": u.winding, "reason": u.reason}))
            .collect();
        let pole_cells: Vec<_> = loc
            .pole_cells
            .iter()
            .map(|p| {
                json!({
                    "rect": rect_array(&p.rect), "winding": p.winding,
                    "poles": p.poles.iter().map(|z| json!({"re": z.re, "im": z.im})).collect::<Vec<_>>(),
                })
            })
            .collect();
        to_json(&json!({
            "expr": a.expr, "rect": rect_array(&a.rect), "zeros": zeros, "unresolved": unresolved,
            "pole_cells": pole_cells, "manifest": manifest.to_json(),
        }))
    };
    emit(&a.out, &body)?;
    if ctx.strict && !loc.unresolved.is_empty() {
        eprintln!("{} unresolved cell(s)", loc.unresolved.len());
        return Ok(4);
    }
    Ok(0)
}

fn cmd_density(a: DensityArgs, ctx: &Ctx) -> Outcome {
    let e = parse_expr(&a.expr)?;
    let cfg = eval_config(ctx, false)?;
    let mut contour = contour_config(ctx)?;
    if let Some(cap) = a.sigma_cap {
        contour.sigma_cap = cap;
    }
    let t = a.t.0;
    let mut manifest = RunManifest::new("density", cfg);
    manifest.expr = Some(a.expr.clone());
    manifest.contour = Some(contour);
    manifest.sigma0 = Some(a.sigma0);
    manifest.t_values = Some(t.clone());
    manifest.output = a.out.as_ref().map(|p| p.display().to_string());

    let d = density_scan(&e, a.sigma0, &t, &contour, &cfg)?;
    let body = if ctx.format == Format::Json {
        let rows: Vec<_> = (0..t.len()).map(|i| json!({"T": t[i], "count": d.counts[i], "slope": d.slopes[i]})).collect();
        to_json(&json!({
            "expr": a.expr, "sigma0": d.sigma0, "sigma_cap": d.sigma_cap, "rows": rows,
            "fit_slope": d.fit_slope, "complete": d.complete, "manifest": manifest.to_json(),
        }))
    } else {
        let mut s = format!(
            "# {ARTIFACT_VERSION} manifest={} sigma0={} sigma_cap={} complete={}\nT,count,slope\n",
            manifest.hash(),
            d.sigma0,
            d.sigma_cap,
            d.complete
        );
        for i in 0..t.len() {
            let _ = writeln!(s, "{},{},{:e}", t[i], d.counts[i], d.slopes[i]);
        }
        s
    };
    emit(&a.out, &body)?;
    if ctx.strict && !d.complete {
        eprintln!("some tiles could not be counted; counts are lower bounds");
        return Ok(4);
    }
    Ok(0)
}

fn cmd_verify(a: VerifyArgs, ctx: &Ctx) -> Outcome {
    let cfg = eval_config(ctx, false)?;
    let rows = verify::run(a.suite, &cfg);
    let failed: Vec<_> = rows.iter().filter(|r| !r.pass).collect();
    let body = match ctx.format {
        Format::Json => to_json(&json!({"checks": rows, "failed": failed.len()})),
        Format::Csv => {
            let mut s = String::from("suite,check,residual,threshold,pass\n");
            for r in &rows {
                let _ = writeln!(s, "{},\"{}\",{:e},{:e},{}", r.suite, r.name, r.residual, r.threshold, r.pass);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &rows {
                let tag = if r.pass { "ok  " } else { "FAIL" };
                let _ = write!(s, "{tag} {:<10} {:<56} {:>10.2e} < {:.0e}", r.suite, r.name, r.residual, r.threshold);
                if let Some(e) = &r.error {
                    let _ = write!(s, "  ({e})");
                }
                s.push('\n');
            }
            let _ = writeln!(s, "{} checks, {} failed", rows.len(), failed.len());
            s
        }
    };
    print!("{body}");
    for r in &failed {
        eprintln!("failed: {} / {}", r.suite, r.name);
    }
    Ok(if failed.is_empty() { 0 } else { 1 })
}

fn run(cli: Cli) -> Outcome {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage(format!("cannot set up {n} threads: {e}")))?;
    }
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Text
    };
    let ctx = Ctx { format, strict: cli.strict, tol: cli.tol };
    match cli.command {
        Command::Eval(a) => cmd_eval(a, &ctx),
        Command::Zeros(a) => cmd_zeros(a, &ctx),
        Command::Density(a) => cmd_density(a, &ctx),
        Command::Verify(a) => cmd_verify(a, &ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
