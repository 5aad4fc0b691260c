//! Command-line front end: JSON experiment specs in, CSV/JSON reports out.
//!
//! Subcommands: `conjugate`, `predict`, `simulate`, `verify`, `audit`,
//! `transform`.  Exit codes are a stable contract: 0 pass, 1 comparison or
//! audit failure, 2 input/schema error, 3 runtime/convergence error.

use crate::cbf::{self, DualityKind, SpecialFn};
use crate::error::{Error, Result};
use crate::harness::{self, CompareConfig};
use crate::numeric::{self, fmt_g17};
use crate::opmodel::{CurveShape, Observable, ProfileKind, ResolventProfile, SpectralModel};
use crate::rates::{self, ProfileInput, RateInputs, RateRegime};
use crate::regvar::{self, SlowlyVaryingExpr, SvNode};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

// ---------------------------------------------------------------------------
// Experiment spec schema (version 1)
// ---------------------------------------------------------------------------

fn default_true() -> bool {
    true
}

/// Spectral model description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    Diagonal {
        /// Eigenvalues as `[re, im]` pairs.
        eigenvalues: Vec<(f64, f64)>,
    },
    Curve {
        shape: CurveShape,
        #[serde(default = "default_true")]
        conjugate_symmetric: bool,
    },
}

impl ModelSpec {
    pub fn build(&self) -> Result<SpectralModel> {
        match self {
            ModelSpec::Diagonal { eigenvalues } => SpectralModel::diagonal(
                eigenvalues
                    .iter()
                    .map(|&(re, im)| Complex64::new(re, im))
                    .collect(),
            ),
            ModelSpec::Curve {
                shape,
                conjugate_symmetric,
            } => SpectralModel::curve(shape.clone(), *conjugate_symmetric),
        }
    }
}

/// Time/frequency grids of an experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub points_per_decade: usize,
}

/// Comparison thresholds.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    #[serde(default = "ToleranceSpec::default_slope_tol")]
    pub slope_tol: f64,
    #[serde(default)]
    pub band_ratio_max: Option<f64>,
    /// Expected slope override; otherwise fitted from the envelope.
    #[serde(default)]
    pub slope_expected: Option<f64>,
}

impl ToleranceSpec {
    fn default_slope_tol() -> f64 {
        0.05
    }
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        ToleranceSpec {
            slope_tol: Self::default_slope_tol(),
            band_ratio_max: None,
            slope_expected: None,
        }
    }
}

/// A versioned experiment specification.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub version: u32,
    pub model: ModelSpec,
    pub observable: Observable,
    /// Upper envelope regime (used by `predict` and `verify`).
    #[serde(default)]
    pub regime: Option<RateRegime>,
    /// Optional lower envelope regime for two-sided verification.
    #[serde(default)]
    pub lower_regime: Option<RateRegime>,
    pub grids: GridSpec,
    /// Comparison window; defaults to the top four decades of the grid.
    #[serde(default)]
    pub window: Option<(f64, f64)>,
    #[serde(default)]
    pub tolerances: ToleranceSpec,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ExperimentSpec =
            serde_json::from_str(text).map_err(|e| Error::Spec(format!("bad spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != 1 {
            return Err(Error::Spec(format!(
                "unsupported spec version {}",
                self.version
            )));
        }
        if !(self.grids.t_min > 0.0 && self.grids.t_max > self.grids.t_min) {
            return Err(Error::Spec("grids need 0 < t_min < t_max".into()));
        }
        if self.grids.points_per_decade == 0 {
            return Err(Error::Spec("points_per_decade must be positive".into()));
        }
        Ok(())
    }

    fn window(&self) -> (f64, f64) {
        // asymptotic claims need tail windows: default to the top four
        // decades of the grid
        self.window
            .unwrap_or((self.grids.t_max / 1e4, self.grids.t_max))
    }
}

/// Builds the profile inputs a regime may need from the model itself.
pub fn profiles_from_model(model: &SpectralModel) -> RateInputs {
    let cap = ResolventProfile::new(model.clone(), ProfileKind::Mcap);
    let cap = Arc::new(cap);
    let low = ResolventProfile::new(model.clone(), ProfileKind::Mlow);
    let low = Arc::new(low);
    RateInputs {
        profile_cap: Some(ProfileInput::from_closure(
            move |s| cap.eval(s),
            1e-3,
            1e300,
        )),
        profile_low: Some(ProfileInput::from_closure(move |s| low.eval(s), 1e-12, 1.0)),
    }
}

// ---------------------------------------------------------------------------
// Expression string syntax
// ---------------------------------------------------------------------------

/// Parses the compact expression syntax:
/// `const(c) | logpow(b) | explogpow(b) | iterlog(k, b) |
///  product(e, e) | pow(e, a) | argpow(e, a)`.
pub fn parse_expr(text: &str) -> Result<SlowlyVaryingExpr> {
    let mut p = ExprParser {
        src: text.trim(),
        pos: 0,
    };
    let node = p.parse_node()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::Spec(format!(
            "trailing input at byte {} of expression '{text}'",
            p.pos
        )));
    }
    SlowlyVaryingExpr::new(node)
}

struct ExprParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> ExprParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src.as_bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, ch: u8) -> Result<()> {
        self.skip_ws();
        if self.pos < self.src.len() && self.src.as_bytes()[self.pos] == ch {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Spec(format!(
                "expected '{}' at byte {} of '{}'",
                ch as char, self.pos, self.src
            )))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src.as_bytes()[self.pos];
            if c.is_ascii_alphabetic() || c == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(Error::Spec(format!(
                "expected a name at byte {start} of '{}'",
                self.src
            )));
        }
        Ok(self.src[start..self.pos].to_ascii_lowercase())
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src.as_bytes()[self.pos];
            if c.is_ascii_digit() || matches!(c, b'.' | b'-' | b'+' | b'e' | b'E') {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| Error::Spec(format!("bad number at byte {start} of '{}'", self.src)))
    }

    fn parse_node(&mut self) -> Result<SvNode> {
        let name = self.ident()?;
        self.expect(b'(')?;
        let node = match name.as_str() {
            "const" => SvNode::Const(self.number()?),
            "logpow" => SvNode::LogPow(self.number()?),
            "explogpow" => SvNode::ExpLogPow(self.number()?),
            "iterlog" => {
                let k = self.number()?;
                self.expect(b',')?;
                let b = self.number()?;
                SvNode::IterLog(k as u32, b)
            }
            "product" => {
                let l = self.parse_node()?;
                self.expect(b',')?;
                let r = self.parse_node()?;
                SvNode::Product(Box::new(l), Box::new(r))
            }
            "pow" => {
                let e = self.parse_node()?;
                self.expect(b',')?;
                let a = self.number()?;
                SvNode::RealPower(Box::new(e), a)
            }
            "argpow" => {
                let e = self.parse_node()?;
                self.expect(b',')?;
                let a = self.number()?;
                SvNode::ArgPower(Box::new(e), a)
            }
            other => return Err(Error::Spec(format!("unknown expression head '{other}'"))),
        };
        self.expect(b')')?;
        Ok(node)
    }
}

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') || s.contains('\r') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// RFC-4180 CSV with a mandatory header row.
pub fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(
        &header
            .iter()
            .map(|h| csv_field(h))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push_str("\r\n");
    for row in rows {
        out.push_str(
            &row.iter()
                .map(|f| csv_field(f))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push_str("\r\n");
    }
    out
}

/// Atomic write: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp{}",
        path.extension().and_then(|e| e.to_str()).unwrap_or(""),
        std::process::id()
    ));
    std::fs::write(&tmp, contents)
        .and_then(|_| std::fs::rename(&tmp, path))
        .map_err(|e| Error::Spec(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str, quiet: bool) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, text),
        None => {
            if !quiet {
                let mut stdout = std::io::stdout().lock();
                let _ = stdout.write_all(text.as_bytes());
            }
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// Command definitions
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "opdecay",
    version,
    about = "Decay-rate envelopes and spectral simulation for operator semigroups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct CommonOut {
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format where both are supported.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Suppress stdout tables.
    #[arg(long, default_value_t = false)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// de Bruijn conjugate table for a slowly varying expression.
    Conjugate {
        /// Expression, e.g. 'logpow(1)' or 'product(const(2), logpow(3))'.
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 1e3)]
        smin: f64,
        #[arg(long, default_value_t = 1e12)]
        smax: f64,
        #[arg(long, default_value_t = 4)]
        points_per_decade: usize,
        /// Slow-variation audit tolerance (top decade).
        #[arg(long, default_value_t = 0.1)]
        tol: f64,
        #[command(flatten)]
        out: CommonOut,
    },
    /// Envelope prediction from a spec file: CSV of (t, predicted).
    Predict {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        out: CommonOut,
    },
    /// Raw decay curve from a spec file: CSV of (t, measured).
    Simulate {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        out: CommonOut,
    },
    /// Full comparison: JSON report plus CSV columns
    /// t, measured, predicted_lower, predicted_upper, ratio.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        /// Where to write the CSV (report JSON goes to --out / stdout).
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        out: CommonOut,
    },
    /// Inequality and asymptotics audits.
    Audit {
        #[command(subcommand)]
        kind: AuditCmd,
    },
    /// Value-level duality transforms of Stieltjes / complete Bernstein
    /// functions, with the class membership audited.
    Transform {
        /// JSON for the base function, e.g.
        /// '{"kind":"stieltjes","triple":{"a":0,"b":0,"measure":{"Atoms":[[1.0,1.0]]}}}'.
        #[arg(long, value_name = "JSON")]
        function: String,
        #[arg(long, value_enum)]
        which: WhichDuality,
        #[arg(long, default_value_t = 1e-3)]
        lmin: f64,
        #[arg(long, default_value_t = 1e3)]
        lmax: f64,
        #[command(flatten)]
        out: CommonOut,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichDuality {
    MulArgument,
    DivArgument,
    Reciprocal,
    FlipArgument,
}

impl From<WhichDuality> for DualityKind {
    fn from(w: WhichDuality) -> Self {
        match w {
            WhichDuality::MulArgument => DualityKind::MulArgument,
            WhichDuality::DivArgument => DualityKind::DivArgument,
            WhichDuality::Reciprocal => DualityKind::Reciprocal,
            WhichDuality::FlipArgument => DualityKind::FlipArgument,
        }
    }
}

#[derive(Subcommand)]
enum AuditCmd {
    /// Moment inequality on random positive diagonals.
    Moment {
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        out: CommonOut,
    },
    /// Interpolation identity between fractional powers.
    Interpolation {
        #[arg(long, default_value = "power-zero-1")]
        model: String,
        #[arg(long, default_value_t = 2.0)]
        gamma: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[command(flatten)]
        out: CommonOut,
    },
    /// Interpolation converse with f(z) = z^{1/2} on a finite model.
    Interpol2 {
        #[arg(long, default_value = "inv-power-2")]
        model: String,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[command(flatten)]
        out: CommonOut,
    },
    /// Bernstein bound with the frozen calibrated constant.
    Bernstein {
        #[arg(long, default_value_t = 32)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 11)]
        seed: u64,
        #[command(flatten)]
        out: CommonOut,
    },
    /// Transfer bound t||T(t)B|| <= 2 sup ||(z+A)^{-1}B|| on the catalogue.
    Transfer {
        /// Catalogue model name, or 'all'.
        #[arg(long, default_value = "all")]
        model: String,
        #[command(flatten)]
        out: CommonOut,
    },
    /// Karamata Tauberian constants vs the Beta-integral oracle.
    Karamata {
        #[arg(long)]
        sigma: f64,
        /// Slow part (expression syntax), default const(1).
        #[arg(long, default_value = "const(1)")]
        ell: String,
        #[arg(long, default_value_t = 1e4)]
        lambda_max: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        out: CommonOut,
    },
    /// Sectoriality of scalar symbols over the right-half-plane catalogue.
    Sectoriality {
        /// Symbol: 'half-half' for z^{1/2}(1+z)^{-1},
        /// 'half-sqrt' for z^{1/2}(1+z)^{-1/2}.
        #[arg(long, default_value = "half-half")]
        symbol: String,
        #[command(flatten)]
        out: CommonOut,
    },
}

/// Catalogue models addressable by name from the audit commands.
pub fn model_by_name(name: &str) -> Result<SpectralModel> {
    let shape = match name {
        "log-growth" => CurveShape::InvLog,
        "inv-power-05" => CurveShape::InvPower { alpha: 0.5 },
        "inv-power-1" => CurveShape::InvPower { alpha: 1.0 },
        "inv-power-2" => CurveShape::InvPower { alpha: 2.0 },
        "power-zero-1" => CurveShape::PowerZero { alpha: 1.0 },
        "power-zero-2" => CurveShape::PowerZero { alpha: 2.0 },
        "both-1-2" => CurveShape::BothPoly {
            alpha: 1.0,
            beta: 2.0,
        },
        "regvar-log2" => CurveShape::RegVarInf {
            alpha: 1.0,
            ell: SlowlyVaryingExpr::log_pow(2.0)?,
        },
        other => return Err(Error::Spec(format!("unknown catalogue model '{other}'"))),
    };
    SpectralModel::curve(shape, true)
}

// ---------------------------------------------------------------------------
// Command implementations
// ---------------------------------------------------------------------------

fn read_spec(path: &Path) -> Result<ExperimentSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Spec(format!("cannot read {}: {e}", path.display())))?;
    ExperimentSpec::from_json(&text)
}

fn cmd_conjugate(
    expr: &str,
    smin: f64,
    smax: f64,
    ppd: usize,
    tol: f64,
    out: &CommonOut,
) -> Result<bool> {
    let ell = parse_expr(expr)?;
    let conj = regvar::de_bruijn_conjugate(&ell)?;
    let n = (((smax / smin).log10() * ppd as f64).ceil() as usize + 1).max(2);
    let grid = numeric::log_spaced(smin.max(ell.domain_start() * 1.01), smax, n);
    let audit = regvar::slow_variation_audit(&ell, &[2.0, 10.0], &grid, tol)?;
    let mut rows = Vec::with_capacity(grid.len());
    let mut worst_identity = 0.0f64;
    for &s in &grid {
        let ls = ell.eval(s)?;
        let ks = conj.eval(s)?;
        let closed = conj.closed_form().map(|c| c.eval(s));
        let ratio = closed.map(|c| ks / c);
        worst_identity = worst_identity.max(conj.identity_residual(s)?);
        rows.push(vec![
            fmt_g17(s),
            fmt_g17(ls),
            fmt_g17(ks),
            closed.map(fmt_g17).unwrap_or_default(),
            ratio.map(fmt_g17).unwrap_or_default(),
        ]);
    }
    let pass = audit.pass && worst_identity < 1e-9;
    let text = match out.format {
        Format::Csv => csv_text(&["s", "ell", "conjugate", "closed_form", "ratio"], &rows),
        Format::Json => serde_json::to_string_pretty(&serde_json::json!({
            "expression": expr,
            "slow_variation": audit,
            "identity_residual_max": worst_identity,
            "closed_form": conj.closed_form().map(|c| c.to_string()),
            "pass": pass,
            "rows": rows,
            "version": env!("CARGO_PKG_VERSION"),
        }))
        .unwrap(),
    };
    emit(&out.out, &text, out.quiet)?;
    Ok(pass)
}

fn build_envelope(
    spec: &ExperimentSpec,
    regime: &RateRegime,
    model: &SpectralModel,
) -> Result<rates::RateEnvelope> {
    let _ = spec;
    rates::predict(regime, &profiles_from_model(model))
}

fn cmd_predict(spec_path: &Path, out: &CommonOut) -> Result<()> {
    let spec = read_spec(spec_path)?;
    let regime = spec
        .regime
        .clone()
        .ok_or_else(|| Error::Spec("predict needs a regime".into()))?;
    let model = spec.model.build()?;
    let env = build_envelope(&spec, &regime, &model)?;
    let decades = (spec.grids.t_max / spec.grids.t_min).log10();
    let n = ((decades * spec.grids.points_per_decade as f64).ceil() as usize + 1).max(2);
    let mut rows = Vec::new();
    for t in numeric::log_spaced(
        spec.grids.t_min.max(env.validity_start),
        spec.grids.t_max,
        n,
    ) {
        rows.push(vec![fmt_g17(t), fmt_g17(env.eval(t)?)]);
    }
    let text = match out.format {
        Format::Csv => csv_text(&["t", "predicted"], &rows),
        Format::Json => serde_json::to_string_pretty(&serde_json::json!({
            "spec": spec,
            "envelope": env.label,
            "validity_start": env.validity_start,
            "rows": rows,
            "version": env!("CARGO_PKG_VERSION"),
        }))
        .unwrap(),
    };
    emit(&out.out, &text, out.quiet)
}

fn cmd_simulate(spec_path: &Path, out: &CommonOut) -> Result<()> {
    let spec = read_spec(spec_path)?;
    let model = spec.model.build()?;
    let curve = harness::run_decay_experiment(
        &model,
        &spec.observable,
        spec.grids.t_min,
        spec.grids.t_max,
        spec.grids.points_per_decade,
    )?;
    let rows: Vec<Vec<String>> = curve
        .t_grid
        .iter()
        .zip(&curve.values)
        .map(|(&t, &v)| vec![fmt_g17(t), fmt_g17(v)])
        .collect();
    let text = match out.format {
        Format::Csv => csv_text(&["t", "measured"], &rows),
        Format::Json => serde_json::to_string_pretty(&serde_json::json!({
            "spec": spec,
            "curve": curve,
            "version": env!("CARGO_PKG_VERSION"),
        }))
        .unwrap(),
    };
    emit(&out.out, &text, out.quiet)
}

fn cmd_verify(spec_path: &Path, csv_path: &Option<PathBuf>, out: &CommonOut) -> Result<bool> {
    let spec = read_spec(spec_path)?;
    let model = spec.model.build()?;
    let regime = spec
        .regime
        .clone()
        .ok_or_else(|| Error::Spec("verify needs a regime".into()))?;
    let upper = build_envelope(&spec, &regime, &model)?;
    let lower = match &spec.lower_regime {
        Some(r) => Some(build_envelope(&spec, r, &model)?),
        None => None,
    };
    let curve = harness::run_decay_experiment(
        &model,
        &spec.observable,
        spec.grids.t_min,
        spec.grids.t_max,
        spec.grids.points_per_decade,
    )?;
    let config = CompareConfig {
        window: spec.window(),
        slope_expected: spec.tolerances.slope_expected,
        slope_tol: spec.tolerances.slope_tol,
        band_ratio_max: spec.tolerances.band_ratio_max,
    };
    let report = harness::compare(&curve, &upper, &config)?;

    // CSV: t, measured, predicted_lower, predicted_upper, ratio
    let mut rows = Vec::new();
    for (&t, &v) in curve.t_grid.iter().zip(&curve.values) {
        let up = if t >= upper.validity_start {
            Some(upper.eval(t)?)
        } else {
            None
        };
        let lo = match &lower {
            Some(l) if t >= l.validity_start => Some(l.eval(t)?),
            _ => None,
        };
        rows.push(vec![
            fmt_g17(t),
            fmt_g17(v),
            lo.map(fmt_g17).unwrap_or_default(),
            up.map(fmt_g17).unwrap_or_default(),
            up.map(|p| fmt_g17(v / p)).unwrap_or_default(),
        ]);
    }
    let csv = csv_text(
        &[
            "t",
            "measured",
            "predicted_lower",
            "predicted_upper",
            "ratio",
        ],
        &rows,
    );
    if let Some(path) = csv_path {
        write_atomic(path, &csv)?;
    }
    let json = serde_json::to_string_pretty(&serde_json::json!({
        "spec": spec,
        "report": report,
        "envelope": upper.label,
        "lower_envelope": lower.as_ref().map(|l| l.label.clone()),
        "failures": curve.failures,
        "seed": spec.seed,
        "version": env!("CARGO_PKG_VERSION"),
    }))
    .unwrap();
    match out.format {
        Format::Json => emit(&out.out, &json, out.quiet)?,
        Format::Csv => {
            if csv_path.is_none() {
                emit(&out.out, &csv, out.quiet)?;
            } else {
                emit(&out.out, &json, out.quiet)?;
            }
        }
    }
    Ok(report.pass)
}

fn emit_audit(outcome: &harness::AuditOutcome, out: &CommonOut) -> Result<bool> {
    let json = serde_json::to_string_pretty(&serde_json::json!({
        "audit": outcome,
        "version": env!("CARGO_PKG_VERSION"),
    }))
    .unwrap();
    emit(&out.out, &json, out.quiet)?;
    Ok(outcome.pass)
}

fn cmd_audit(kind: &AuditCmd) -> Result<bool> {
    match kind {
        AuditCmd::Moment {
            n,
            trials,
            seed,
            out,
        } => {
            let o = harness::moment_audit(*n, *trials, *seed, 1.0);
            emit_audit(&o, out)
        }
        AuditCmd::Interpolation {
            model,
            gamma,
            delta,
            out,
        } => {
            let m = model_by_name(model)?;
            let grid = numeric::log_spaced(1.0, 1e5, 11);
            let o = harness::interpolation_audit(&m, *gamma, *delta, &grid)?;
            emit_audit(&o, out)
        }
        AuditCmd::Interpol2 { model, gamma, out } => {
            let m = model_by_name(model)?;
            let m = harness::discretize_curve(&m, 1e-4, 1e8, 1024)?;
            let f = sqrt_cbf()?;
            let grid = numeric::log_spaced(1e2, 1e6, 13);
            let o = harness::interpol2_audit(&m, &f, *gamma, &grid, 1.0)?;
            emit_audit(&o, out)
        }
        AuditCmd::Bernstein {
            n,
            trials,
            seed,
            out,
        } => {
            let o =
                harness::bernstein_audit(*n, *trials, *seed, harness::BERNSTEIN_FROZEN_CONSTANT)?;
            emit_audit(&o, out)
        }
        AuditCmd::Transfer { model, out } => {
            let grid = numeric::log_spaced(1.0, 1e6, 13);
            let entries = harness::transfer_catalogue()?;
            let mut total = harness::AuditOutcome {
                kind: "transfer".into(),
                checked: 0,
                violations: 0,
                worst_constant: 0.0,
                seed: 0,
                pass: true,
            };
            for (name, m, obs) in &entries {
                if model != "all" && name != model {
                    continue;
                }
                let o = harness::transfer_audit(m, obs, &grid)?;
                total.checked += o.checked;
                total.violations += o.violations;
                total.worst_constant = total.worst_constant.max(o.worst_constant);
                total.pass &= o.pass;
            }
            if total.checked == 0 {
                return Err(Error::Spec(format!("no catalogue model matches '{model}'")));
            }
            emit_audit(&total, out)
        }
        AuditCmd::Karamata {
            sigma,
            ell,
            lambda_max,
            tol,
            out,
        } => {
            let ell = parse_expr(ell)?;
            let grid = numeric::log_spaced(lambda_max / 1e3, *lambda_max, 13);
            let rep = cbf::karamata_audit(&ell, *sigma, cbf::AsymptoticEnd::Infinity, &grid, *tol)?;
            let o = harness::AuditOutcome {
                kind: "karamata".into(),
                checked: rep.trace.len(),
                violations: usize::from(!rep.pass),
                worst_constant: rep
                    .trace
                    .last()
                    .map(|&(_, r)| (r - 1.0).abs())
                    .unwrap_or(f64::NAN),
                seed: 0,
                pass: rep.pass,
            };
            emit_audit(&o, out)
        }
        AuditCmd::Sectoriality { symbol, out } => {
            let (alpha, beta) = match symbol.as_str() {
                "half-half" => (0.5, 0.5),
                "half-sqrt" => (0.5, 0.0),
                other => {
                    return Err(Error::Spec(format!(
                        "unknown sectoriality symbol '{other}'"
                    )))
                }
            };
            let obs = Observable::FracComb { alpha, beta };
            let sym = obs.symbol()?;
            let grid = numeric::log_spaced(1e-6, 1e6, 97);
            let mut pass = true;
            let mut worst = 0.0f64;
            let mut checked = 0;
            for name in ["inv-power-2", "power-zero-1", "both-1-2", "log-growth"] {
                let m = model_by_name(name)?;
                let rep = crate::opmodel::sectoriality_audit(&m, &|z| sym.eval(z).unwrap(), &grid)?;
                pass &= rep.pass;
                worst = worst.max(rep.constant);
                checked += rep.per_decade.len();
            }
            let o = harness::AuditOutcome {
                kind: "sectoriality".into(),
                checked,
                violations: usize::from(!pass),
                worst_constant: worst,
                seed: 0,
                pass,
            };
            emit_audit(&o, out)
        }
    }
}

/// `f(z) = z^{1/2}` as a complete Bernstein function via its kernel.
pub fn sqrt_cbf() -> Result<SpecialFn> {
    use crate::cbf::{Measure, SpecialKind, StieltjesTriple};
    use crate::regvar::RegVarFn;
    Ok(SpecialFn::new(
        SpecialKind::CompleteBernstein,
        StieltjesTriple::new(
            0.0,
            0.0,
            Measure::Distribution(RegVarFn::new(
                0.5,
                SlowlyVaryingExpr::constant(2.0 / std::f64::consts::PI)?,
            )),
        )?,
    ))
}

fn cmd_transform(
    function: &str,
    which: DualityKind,
    lmin: f64,
    lmax: f64,
    out: &CommonOut,
) -> Result<bool> {
    let f: SpecialFn = serde_json::from_str(function)
        .map_err(|e| Error::Spec(format!("bad function JSON: {e}")))?;
    let dual = cbf::duality_transform(&f, which)?;
    let grid = numeric::log_spaced(lmin, lmax, 41);
    let pass = dual.class_audit(&grid)?;
    let mut rows = Vec::new();
    for &x in &grid {
        rows.push(vec![
            fmt_g17(x),
            fmt_g17(f.eval_real(x)?),
            fmt_g17(dual.eval_real(x)?),
        ]);
    }
    let text = match out.format {
        Format::Csv => csv_text(&["lambda", "f", "transformed"], &rows),
        Format::Json => serde_json::to_string_pretty(&serde_json::json!({
            "which": dual.which,
            "claimed_class": dual.claimed,
            "class_audit_pass": pass,
            "rows": rows,
            "version": env!("CARGO_PKG_VERSION"),
        }))
        .unwrap(),
    };
    emit(&out.out, &text, out.quiet)?;
    Ok(pass)
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

/// Runs the CLI; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let result: Result<bool> = match &cli.command {
        Command::Conjugate {
            expr,
            smin,
            smax,
            points_per_decade,
            tol,
            out,
        } => cmd_conjugate(expr, *smin, *smax, *points_per_decade, *tol, out),
        Command::Predict { spec, out } => cmd_predict(spec, out).map(|_| true),
        Command::Simulate { spec, out } => cmd_simulate(spec, out).map(|_| true),
        Command::Verify { spec, csv, out } => cmd_verify(spec, csv, out),
        Command::Audit { kind } => cmd_audit(kind),
        Command::Transform {
            function,
            which,
            lmin,
            lmax,
            out,
        } => cmd_transform(function, (*which).into(), *lmin, *lmax, out),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
