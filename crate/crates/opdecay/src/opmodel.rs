//! Quasi-multiplication operator models: finite diagonal operators and
//! parametric spectral curves `u -> a(u) + i u` in the closed right
//! half-plane.
//!
//! On these models every scalar observable `r` acts by its symbol, so
//! `||T(t) r(A)|| = sup { |e^{-z t} r(z)| : z in sigma(A) }` and resolvent
//! norms are reciprocal distances to the spectrum.  Suprema over curves are
//! computed on log-spaced parameter grids with golden-section refinement
//! and decade-extension truncation, plus the analytic value of the symbol
//! along the far tail.

use crate::cbf::{FgFm, Measure, SpecialFn, StieltjesTriple};
use crate::error::{Error, Result};
use crate::numeric;
use crate::regvar::{RegVarFn, SlowlyVaryingExpr};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Mutex;

/// Named curve profiles `a(u)` for the real part of the spectrum.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveShape {
    /// `a(u) = c`.
    Const { c: f64 },
    /// `a(u) = (1 + u)^{-alpha}`: resolvent growth `s^alpha` at infinity.
    InvPower { alpha: f64 },
    /// `a(u) = 1 / log u` on `u >= 2`: logarithmic resolvent growth.
    InvLog,
    /// `a(u) = min(1, u^alpha)`: resolvent growth `s^{-alpha}` at zero.
    PowerZero { alpha: f64 },
    /// `a(u) = min(u^alpha, u^{-beta})`: singularities at both ends.
    BothPoly { alpha: f64, beta: f64 },
    /// `a(u) = min(1, l(u)/u^alpha)`: resolvent growth `s^alpha / l(s)`.
    RegVarInf { alpha: f64, ell: SlowlyVaryingExpr },
}

impl CurveShape {
    /// The real part `a(u)` of the curve point.
    pub fn eval(&self, u: f64) -> f64 {
        match self {
            CurveShape::Const { c } => *c,
            CurveShape::InvPower { alpha } => (1.0 + u.abs()).powf(-alpha),
            CurveShape::InvLog => 1.0 / u.ln(),
            CurveShape::PowerZero { alpha } => u.abs().powf(*alpha).min(1.0),
            CurveShape::BothPoly { alpha, beta } => {
                u.abs().powf(*alpha).min(u.abs().powf(-beta)).min(1.0)
            }
            CurveShape::RegVarInf { alpha, ell } => {
                (ell.eval_ext(u).unwrap_or(f64::NAN) / u.powf(*alpha)).min(1.0)
            }
        }
    }

    /// Natural lower end of the parameter range.
    fn default_start(&self) -> f64 {
        match self {
            CurveShape::InvLog => 2.0,
            CurveShape::RegVarInf { ell, .. } => ell.domain_start().max(10.0),
            _ => 0.0,
        }
    }

    /// Limit of `a(u)` as `u -> oo`.
    fn limit_at_infinity(&self) -> f64 {
        match self {
            CurveShape::Const { c } => *c,
            CurveShape::PowerZero { .. } => 1.0,
            _ => 0.0,
        }
    }

    /// Infimum of `a` over `[u_from, oo)`; used to certify truncation of
    /// suprema (`e^{-a(u) t} <= e^{-tail_inf t}` on the remaining tail).
    fn tail_inf(&self, u_from: f64) -> f64 {
        match self {
            CurveShape::Const { c } => *c,
            // decreasing toward zero
            CurveShape::InvPower { .. }
            | CurveShape::InvLog
            | CurveShape::RegVarInf { .. }
            | CurveShape::BothPoly { .. } => 0.0,
            // increasing toward one
            CurveShape::PowerZero { alpha } => u_from.abs().powf(*alpha).min(1.0),
        }
    }

    /// Whether the closure of the curve contains the origin.
    fn touches_zero(&self) -> bool {
        matches!(
            self,
            CurveShape::PowerZero { .. } | CurveShape::BothPoly { .. }
        )
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            CurveShape::Const { c } => *c > 0.0,
            CurveShape::InvPower { alpha } => *alpha > 0.0,
            CurveShape::InvLog => true,
            CurveShape::PowerZero { alpha } => *alpha > 0.0,
            CurveShape::BothPoly { alpha, beta } => *alpha > 0.0 && *beta > 0.0,
            CurveShape::RegVarInf { alpha, .. } => *alpha > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Spec(
                "curve shape parameters must be positive".into(),
            ))
        }
    }
}

/// A spectral curve `{ a(u) + i u : u in [u_min, oo) }`, stored with
/// conjugate symmetry so only `u >= u_min` is enumerated.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralCurve {
    pub shape: CurveShape,
    /// Lower end of the enumerated parameter range.
    pub u_min: f64,
    /// Reflection symmetry: the spectrum also contains `a(u) - i u`.
    pub conjugate_symmetric: bool,
}

impl SpectralCurve {
    /// The spectrum point `a(u) + i u`.
    pub fn point(&self, u: f64) -> Complex64 {
        Complex64::new(self.shape.eval(u), u)
    }
}

/// A quasi-multiplication model: its spectrum determines every norm.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum SpectralModel {
    /// Finite eigenvalue list in the closed right half-plane.
    Diagonal(Vec<Complex64>),
    Curve(SpectralCurve),
}

/// Diagonal models are capped; beyond this a curve must be supplied.
pub const MAX_DIAGONAL: usize = 1_000_000;

/// Parameter value below which zero-touching curves are truncated when
/// enumerated numerically.
const CURVE_U_EPS: f64 = 1e-13;

impl SpectralModel {
    pub fn diagonal(eigs: Vec<Complex64>) -> Result<Self> {
        if eigs.len() > MAX_DIAGONAL {
            return Err(Error::Spec(format!(
                "diagonal models cap at {MAX_DIAGONAL} eigenvalues; supply a curve"
            )));
        }
        for z in &eigs {
            if z.re < 0.0 {
                return Err(Error::Spec(format!(
                    "eigenvalue {z} outside the closed right half-plane"
                )));
            }
            if z.re == 0.0 && z.im != 0.0 {
                return Err(Error::Spec(
                    "imaginary-axis spectrum is admitted only at 0".into(),
                ));
            }
        }
        Ok(SpectralModel::Diagonal(eigs))
    }

    pub fn curve(shape: CurveShape, conjugate_symmetric: bool) -> Result<Self> {
        shape.validate()?;
        let u_min = shape.default_start();
        Ok(SpectralModel::Curve(SpectralCurve {
            shape,
            u_min,
            conjugate_symmetric,
        }))
    }

    /// Whether `0` lies in the closure of the spectrum.
    pub fn touches_zero(&self) -> bool {
        match self {
            SpectralModel::Diagonal(eigs) => eigs.iter().any(|z| z.norm() == 0.0),
            SpectralModel::Curve(c) => c.shape.touches_zero(),
        }
    }

    fn curve_point(c: &SpectralCurve, u: f64) -> Complex64 {
        Complex64::new(c.shape.eval(u), u)
    }
}

// ---------------------------------------------------------------------------
// Observables
// ---------------------------------------------------------------------------

/// Scalar observables `r(z)`; on quasi-multiplication models the operator
/// `r(A)` acts by this symbol on the spectrum.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Observable {
    Identity,
    /// `1/z`; needs `0` outside the closed spectrum.
    InvA,
    /// `z/(1+z)`.
    BofA,
    /// `z/(1+z)^2`.
    Aia2,
    /// `z^alpha (1+z)^{-(alpha+beta)}`.
    FracComb {
        alpha: f64,
        beta: f64,
    },
    /// `(z/(1+z))^gamma`.
    PowBofA {
        gamma: f64,
    },
    /// `z^p` (negative `p` needs an invertible model).
    Pow {
        p: f64,
    },
    /// `z^{-(alpha-beta)} S_g(z)` with `g(s) = s^{1-beta} l(s)`: the
    /// cancellation operator for a singularity at infinity.
    Wop {
        alpha: f64,
        beta: f64,
        ell: SlowlyVaryingExpr,
    },
    /// `(z/(1+z))^{alpha-beta} f_m(z)`: the cancellation operator for a
    /// singularity at zero.
    Vop {
        alpha: f64,
        beta: f64,
        ell: SlowlyVaryingExpr,
    },
    /// `f(z)` for a Stieltjes/complete Bernstein function.
    CbfOf(SpecialFn),
    /// `z^gamma f(1/z)`: left side of the interpolation inequality.
    PowTimesCbfInv {
        gamma: f64,
        f: SpecialFn,
    },
}

/// A compiled observable: symbol evaluation plus tail metadata.
pub struct Symbol {
    eval: Box<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>,
    /// `lim |r(z)|` as `|z| -> oo` along the curve (`None`: unbounded).
    tail_limit: Option<f64>,
    /// Whether `|r|` is singular at `z = 0`.
    singular_at_zero: bool,
    pub label: String,
}

impl Symbol {
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        (self.eval)(z)
    }

    pub fn magnitude(&self, z: Complex64) -> f64 {
        self.eval(z).map(|v| v.norm()).unwrap_or(f64::NAN)
    }
}

impl Observable {
    /// Compiles the observable into an evaluable symbol.
    pub fn symbol(&self) -> Result<Symbol> {
        let (eval, tail_limit, singular_at_zero, label): (
            Box<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>,
            Option<f64>,
            bool,
            String,
        ) = match self {
            Observable::Identity => (
                Box::new(|_z| Ok(Complex64::new(1.0, 0.0))),
                Some(1.0),
                false,
                "identity".into(),
            ),
            Observable::InvA => (
                Box::new(|z: Complex64| Ok(z.inv())),
                Some(0.0),
                true,
                "inv-a".into(),
            ),
            Observable::BofA => (
                Box::new(|z: Complex64| Ok(z / (1.0 + z))),
                Some(1.0),
                false,
                "b-of-a".into(),
            ),
            Observable::Aia2 => (
                Box::new(|z: Complex64| Ok(z / ((1.0 + z) * (1.0 + z)))),
                Some(0.0),
                false,
                "a-i-a2".into(),
            ),
            Observable::FracComb { alpha, beta } => {
                if !(*alpha >= 0.0 && *beta >= 0.0) {
                    return Err(Error::Spec("frac-comb needs alpha, beta >= 0".into()));
                }
                let (a, b) = (*alpha, *beta);
                (
                    Box::new(move |z: Complex64| Ok(z.powf(a) * (1.0 + z).powf(-(a + b)))),
                    Some(if b > 0.0 { 0.0 } else { 1.0 }),
                    false,
                    format!("frac-comb({a},{b})"),
                )
            }
            Observable::PowBofA { gamma } => {
                let g = *gamma;
                if !(g > 0.0) {
                    return Err(Error::Spec("pow-b-of-a needs gamma > 0".into()));
                }
                (
                    Box::new(move |z: Complex64| Ok((z / (1.0 + z)).powf(g))),
                    Some(1.0),
                    false,
                    format!("pow-b-of-a({g})"),
                )
            }
            Observable::Pow { p } => {
                let p = *p;
                (
                    Box::new(move |z: Complex64| Ok(z.powf(p))),
                    if p < 0.0 {
                        Some(0.0)
                    } else if p == 0.0 {
                        Some(1.0)
                    } else {
                        None
                    },
                    p < 0.0,
                    format!("pow({p})"),
                )
            }
            Observable::Wop { alpha, beta, ell } => {
                if !(*alpha > 0.0 && *beta > 0.0 && *beta <= 1.0) {
                    return Err(Error::Spec(
                        "w-op needs alpha > 0 and beta in (0, 1]".into(),
                    ));
                }
                let g = RegVarFn::new(1.0 - beta, ell.clone());
                let triple = StieltjesTriple::new(0.0, 0.0, Measure::Distribution(g))?;
                let sg = SpecialFn::stieltjes(triple);
                let (a, b) = (*alpha, *beta);
                (
                    Box::new(move |z: Complex64| Ok(z.powf(-(a - b)) * sg.eval(z)?)),
                    Some(0.0),
                    a > b,
                    format!("w-op({a},{b})"),
                )
            }
            Observable::Vop { alpha, beta, ell } => {
                if !(*alpha >= 1.0 && *beta > 0.0 && *beta <= 1.0) {
                    return Err(Error::Spec(
                        "v-op needs alpha >= 1 and beta in (0, 1]".into(),
                    ));
                }
                let g = RegVarFn::new(1.0 - beta, ell.clone());
                let pair = FgFm::new(g)?;
                let (a, b) = (*alpha, *beta);
                (
                    Box::new(move |z: Complex64| Ok((z / (1.0 + z)).powf(a - b) * pair.fm(z)?)),
                    Some(1.0),
                    false,
                    format!("v-op({a},{b})"),
                )
            }
            Observable::CbfOf(f) => {
                let f = f.clone();
                let tail = match f.kind {
                    // h(z) -> b as |z| -> oo
                    crate::cbf::SpecialKind::Stieltjes => Some(f.triple.b),
                    // f(z) -> a + mu(0,oo) when b = 0 and the mass is finite
                    crate::cbf::SpecialKind::CompleteBernstein => {
                        if f.triple.b > 0.0 {
                            None
                        } else {
                            match &f.triple.measure {
                                Measure::Zero => Some(f.triple.a),
                                Measure::Atoms(atoms) => {
                                    Some(f.triple.a + atoms.iter().map(|&(_, w)| w).sum::<f64>())
                                }
                                Measure::Distribution(_) => None,
                            }
                        }
                    }
                };
                (
                    Box::new(move |z: Complex64| f.eval(z)),
                    tail,
                    false,
                    "cbf".into(),
                )
            }
            Observable::PowTimesCbfInv { gamma, f } => {
                let f = f.clone();
                let g = *gamma;
                (
                    Box::new(move |z: Complex64| Ok(z.powf(g) * f.eval(z.inv())?)),
                    None,
                    g < 0.0,
                    format!("pow({g})*cbf(1/z)"),
                )
            }
        };
        Ok(Symbol {
            eval,
            tail_limit,
            singular_at_zero,
            label,
        })
    }
}

// ---------------------------------------------------------------------------
// Resolvent norms
// ---------------------------------------------------------------------------

/// `||(i s + A)^{-1}||`: reciprocal distance from `-i s` to the spectrum.
///
/// Returns `+oo` when `-i s` lies in the closure of the spectrum.
pub fn resolvent_norm(model: &SpectralModel, s: f64) -> Result<f64> {
    match model {
        SpectralModel::Diagonal(eigs) => {
            let mut d = f64::INFINITY;
            for z in eigs {
                d = d.min((Complex64::new(0.0, s) + z).norm());
            }
            if d == 0.0 {
                Ok(f64::INFINITY)
            } else {
                Ok(1.0 / d)
            }
        }
        SpectralModel::Curve(c) => {
            if s == 0.0 && c.shape.touches_zero() {
                return Ok(f64::INFINITY);
            }
            let d = curve_distance(c, s)?;
            Ok(1.0 / d)
        }
    }
}

/// Distance from `-i s` to the curve (both branches when symmetric).
fn curve_distance(c: &SpectralCurve, s: f64) -> Result<f64> {
    let target = s.abs();
    let u_lo = if c.shape.touches_zero() {
        c.u_min.max(CURVE_U_EPS)
    } else {
        c.u_min.max(0.0)
    };
    // squared distance along the matching branch: a(u)^2 + (u - target)^2;
    // the opposite branch a(u)^2 + (u + target)^2 is minimized at the low end
    let d2 = |u: f64| {
        let a = c.shape.eval(u);
        a * a + (u - target) * (u - target)
    };
    // opposite branch a(u)^2 + (u + |s|)^2 is minimized at the low end
    let mut best = {
        let a0 = c.shape.eval(u_lo.max(c.u_min));
        a0 * a0 + (u_lo + target) * (u_lo + target)
    };
    // |is + a(u) + iu| = |a(u) + i(u + s)| is small near u = -s, so the
    // enumerated branch matches s <= 0; for s > 0 the conjugate branch
    // (when present) matches at u = s
    let matching = c.conjugate_symmetric || s <= 0.0;
    if matching {
        // candidate at u = target directly
        if target >= u_lo {
            best = best.min(d2(target));
        }
        let lo = u_lo.max(target / 16.0).max(CURVE_U_EPS);
        let hi = (target * 16.0).max(u_lo * 4.0).max(lo * 1e4).max(64.0);
        let grid = numeric::log_spaced(lo, hi, 513);
        let mut best_u = lo;
        let mut best_val = f64::INFINITY;
        for &u in &grid {
            if u < c.u_min && !c.shape.touches_zero() {
                continue;
            }
            let v = d2(u);
            if v < best_val {
                best_val = v;
                best_u = u;
            }
        }
        // golden refinement around the grid minimum
        let bracket_lo = (best_u / 3.0).max(lo);
        let bracket_hi = (best_u * 3.0).min(hi);
        let (_, refined) = numeric::golden_min(&d2, bracket_lo, bracket_hi, 200);
        best = best.min(best_val).min(refined);
        // also probe the lower endpoint
        best = best.min(d2(u_lo.max(c.u_min)));
    }
    if best <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(best.sqrt())
}

// ---------------------------------------------------------------------------
// Semigroup norms
// ---------------------------------------------------------------------------

/// `||T(t) r(A)|| = sup { e^{-Re z * t} |r(z)| : z in sigma(A) }`.
pub fn semigroup_norm(model: &SpectralModel, t: f64, obs: &Observable) -> Result<f64> {
    let sym = obs.symbol()?;
    semigroup_norm_sym(model, t, &sym)
}

/// As [`semigroup_norm`] with a pre-compiled symbol.
pub fn semigroup_norm_sym(model: &SpectralModel, t: f64, sym: &Symbol) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::Domain("t must be nonnegative".into()));
    }
    match model {
        SpectralModel::Diagonal(eigs) => {
            let mut best = 0.0f64;
            for z in eigs {
                if z.norm() == 0.0 && sym.singular_at_zero {
                    return Err(Error::Domain(format!(
                        "symbol {} is singular at 0, which lies in the spectrum",
                        sym.label
                    )));
                }
                let m = if z.norm() == 0.0 {
                    sym.eval(Complex64::new(0.0, 0.0))
                        .map(|v| v.norm())
                        .unwrap_or(0.0)
                } else {
                    (-z.re * t).exp() * sym.magnitude(*z)
                };
                if m.is_nan() {
                    return Err(Error::Domain(format!(
                        "symbol {} not finite at {z}",
                        sym.label
                    )));
                }
                best = best.max(m);
            }
            Ok(best)
        }
        SpectralModel::Curve(c) => {
            if c.shape.touches_zero() && sym.singular_at_zero {
                return Err(Error::Domain(format!(
                    "symbol {} is singular at 0, which lies in the spectral closure",
                    sym.label
                )));
            }
            curve_supremum(c, |z| (-z.re * t).exp() * sym.magnitude(z), sym, t)
        }
    }
}

/// Supremum of `h(z(u))` over the enumerated branch of a curve, by
/// per-decade grids, golden refinement around local maxima and a tail
/// limit from the symbol's asymptotics.
fn curve_supremum(
    c: &SpectralCurve,
    h: impl Fn(Complex64) -> f64,
    sym: &Symbol,
    t: f64,
) -> Result<f64> {
    let u_lo = if c.shape.touches_zero() {
        CURVE_U_EPS
    } else {
        c.u_min
    };
    let point = |u: f64| SpectralModel::curve_point(c, u);
    let hu = |u: f64| h(point(u));

    let mut best = hu(u_lo.max(c.u_min));
    if best.is_nan() {
        best = 0.0;
    }
    let mut best_u = u_lo;

    // decade sweep; truncation must be certified against the remaining
    // tail, bounding e^{-a(u) t} |r| by e^{-tail_inf(u) t} * (decade max of
    // |r| alone) -- the raw decade maximum can vanish in the gap between
    // the two peaks of a both-singularities curve and must not stop the
    // sweep there
    let start_decade = u_lo.max(c.u_min).max(CURVE_U_EPS).log10().floor() as i32;
    let a_inf = c.shape.limit_at_infinity();
    let tail_term = sym
        .tail_limit
        .filter(|r| r.is_finite())
        .map(|r| (-a_inf * t).exp() * r);
    let mut negligible = 0;
    let mut converged = 0;
    let mut decade = start_decade;
    let mut decade_records: Vec<(f64, f64)> = Vec::new();
    loop {
        let lo = 10f64.powi(decade).max(u_lo);
        let hi = 10f64.powi(decade + 1);
        if lo < hi {
            let grid = numeric::log_spaced(lo, hi, 33);
            let mut dec_best = 0.0f64;
            let mut dec_best_u = lo;
            let mut dec_sym = 0.0f64;
            for &u in &grid {
                let v = hu(u);
                if v > dec_best {
                    dec_best = v;
                    dec_best_u = u;
                }
                let m = sym.magnitude(point(u));
                if m > dec_sym {
                    dec_sym = m;
                }
            }
            decade_records.push((dec_best_u, dec_best));
            if dec_best > best {
                best = dec_best;
                best_u = dec_best_u;
            }
            // certified envelope of everything in and beyond this decade
            let envelope = (-c.shape.tail_inf(lo) * t).exp() * dec_sym;
            if best > 0.0 && envelope <= best * 1e-10 {
                negligible += 1;
            } else {
                negligible = 0;
            }
            // alternatively the decade maxima have converged onto the
            // far-tail limit value
            if let Some(term) = tail_term {
                if term > 0.0 && (dec_best / term - 1.0).abs() <= 1e-7 {
                    converged += 1;
                } else {
                    converged = 0;
                }
            }
        }
        decade += 1;
        if (negligible >= 3 || converged >= 3) && decade > start_decade + 4 {
            break;
        }
        if decade > 60 {
            // envelope never certified decreasing within the budget
            if sym.tail_limit.is_none() {
                return Err(Error::Tail(format!(
                    "no decreasing tail envelope for symbol {} on this curve",
                    sym.label
                )));
            }
            break;
        }
    }

    // golden refinement around the best grid points
    decade_records.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    for &(u, _) in decade_records.iter().take(3) {
        let lo = (u / 12.0).max(u_lo.max(CURVE_U_EPS));
        let hi = u * 12.0;
        let (ru, rv) = numeric::golden_max(&hu, lo, hi, 160);
        if rv > best {
            best = rv;
            best_u = ru;
        }
    }
    let _ = best_u;

    // far-tail limit of e^{-a t}|r|: a -> a_inf, |r| -> tail_limit
    if let Some(r_inf) = sym.tail_limit {
        if r_inf.is_finite() {
            let a_inf = c.shape.limit_at_infinity();
            best = best.max((-a_inf * t).exp() * r_inf);
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Resolvent profiles
// ---------------------------------------------------------------------------

/// Profile kinds built from running suprema of resolvent norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    /// `M(s) = sup { ||(ir+A)^{-1}|| : |r| <= s }`, `s >= 0`.
    Mcap,
    /// `m(s) = sup { ||(ir+A)^{-1}|| : |r| >= s }`, `s > 0`.
    Mlow,
    /// `M_log(s) = M(s) (log(1+M(s)) + log(1+s))`.
    McapLog,
    /// `m_log(s) = m(s) log((1+m(s))/s)`.
    MlowLog,
    /// `M_2(s) = sup { ||(ir+A)^{-1}|| : 1 <= |r| <= s }`, `s >= 1`.
    M2,
    /// `m_2(s) = sup { ||(ir+A)^{-1}|| : s < |r| <= 1 }`, `0 < s <= 1`.
    M2low,
}

/// Memoized running-supremum profile over a model's resolvent norms.
///
/// Values are monotone by construction: every query folds in all previously
/// sampled frequencies.  The cache is internally synchronized; concurrent
/// queries may duplicate work but never change results.
pub struct ResolventProfile {
    model: SpectralModel,
    kind: ProfileKind,
    cache: Mutex<Vec<(f64, f64)>>,
}

impl ResolventProfile {
    pub fn new(model: SpectralModel, kind: ProfileKind) -> Self {
        ResolventProfile {
            model,
            kind,
            cache: Mutex::new(Vec::new()),
        }
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    /// Profile value at `s`.
    pub fn eval(&self, s: f64) -> Result<f64> {
        match self.kind {
            ProfileKind::Mcap => self.sup_low_band(0.0, s),
            ProfileKind::M2 => {
                if s < 1.0 {
                    return Err(Error::Domain("M2 needs s >= 1".into()));
                }
                self.sup_low_band(1.0, s)
            }
            ProfileKind::McapLog => {
                let m = self.sup_low_band(0.0, s)?;
                Ok(m * ((1.0 + m).ln() + (1.0 + s).ln()))
            }
            ProfileKind::Mlow => {
                if !(s > 0.0) {
                    return Err(Error::Domain("m needs s > 0".into()));
                }
                self.sup_high_band(s, None)
            }
            ProfileKind::M2low => {
                if !(s > 0.0 && s <= 1.0) {
                    return Err(Error::Domain("m2 needs 0 < s <= 1".into()));
                }
                self.sup_high_band(s, Some(1.0))
            }
            ProfileKind::MlowLog => {
                if !(s > 0.0) {
                    return Err(Error::Domain("m_log needs s > 0".into()));
                }
                let m = self.sup_high_band(s, None)?;
                Ok(m * ((1.0 + m) / s).ln())
            }
        }
    }

    /// `sup || (ir+A)^{-1} ||` over `lo <= |r| <= s`, folded with the cache.
    fn sup_low_band(&self, lo: f64, s: f64) -> Result<f64> {
        if s < lo {
            return Err(Error::Domain(format!("s = {s} below band start {lo}")));
        }
        let mut best: f64 = 0.0;
        let grid_lo = lo.max(1e-12);
        if s > grid_lo * (1.0 + 1e-12) {
            for &r in &numeric::log_spaced(grid_lo, s, 129) {
                best = best.max(resolvent_norm(&self.model, r)?);
                if !self.sym() {
                    best = best.max(resolvent_norm(&self.model, -r)?);
                }
            }
        }
        best = best.max(resolvent_norm(&self.model, s)?);
        if lo == 0.0 {
            best = best.max(resolvent_norm(&self.model, 0.0)?);
        }
        let mut cache = self.cache.lock().unwrap();
        // running supremum: fold every cached sample at or below s
        for &(r, v) in cache.iter() {
            if r <= s {
                best = best.max(v);
            }
        }
        cache.push((s, best));
        Ok(best)
    }

    /// `sup || (ir+A)^{-1} ||` over `s <= |r| <= hi` (`hi = None`: probe a
    /// wide window above `s`), folded with the cache.
    fn sup_high_band(&self, s: f64, hi: Option<f64>) -> Result<f64> {
        let upper = hi.unwrap_or_else(|| (s * 1e6).max(1e3));
        let mut best: f64 = 0.0;
        for &r in &numeric::log_spaced(s, upper.max(s * (1.0 + 1e-9)), 129) {
            best = best.max(resolvent_norm(&self.model, r)?);
            if !self.sym() {
                best = best.max(resolvent_norm(&self.model, -r)?);
            }
        }
        let mut cache = self.cache.lock().unwrap();
        for &(r, v) in cache.iter() {
            if r >= s {
                best = best.max(v);
            }
        }
        cache.push((s, best));
        Ok(best)
    }

    fn sym(&self) -> bool {
        match &self.model {
            SpectralModel::Diagonal(_) => false,
            SpectralModel::Curve(c) => c.conjugate_symmetric,
        }
    }
}

// ---------------------------------------------------------------------------
// Cancellation suprema
// ---------------------------------------------------------------------------

/// Outcome of a cancellation supremum.
#[derive(Debug, Clone, Serialize)]
pub struct CancelSup {
    pub value: f64,
    pub finite: bool,
    /// Spectrum location witnessing the supremum (or the divergence).
    pub witness: (f64, f64),
}

/// `sup_{z in C_+} ||(z+A)^{-1} r(A)||`, which on quasi-multiplication
/// models reduces to `sup { |r(w)| / Re w : w in sigma(A) }` since
/// `inf_{z in C_+} |z + w| = Re w`.
pub fn cancel_sup(model: &SpectralModel, obs: &Observable) -> Result<CancelSup> {
    let sym = obs.symbol()?;
    let ratio = |w: Complex64| -> f64 {
        let m = sym.magnitude(w);
        if w.re == 0.0 {
            if m <= 1e-300 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            m / w.re
        }
    };
    match model {
        SpectralModel::Diagonal(eigs) => {
            let mut best = 0.0f64;
            let mut witness = (0.0, 0.0);
            for z in eigs {
                let v = if z.norm() == 0.0 && sym.singular_at_zero {
                    f64::INFINITY
                } else {
                    ratio(*z)
                };
                if v > best {
                    best = v;
                    witness = (z.re, z.im);
                }
            }
            Ok(CancelSup {
                value: best,
                finite: best.is_finite(),
                witness,
            })
        }
        SpectralModel::Curve(c) => {
            let u_lo = if c.shape.touches_zero() {
                CURVE_U_EPS
            } else {
                c.u_min
            };
            let f = |u: f64| ratio(SpectralModel::curve_point(c, u));
            // decade sweep; divergence shows as monotone growth of decade
            // maxima at the budget edge
            let mut best = 0.0f64;
            let mut best_u = u_lo;
            let mut last3: Vec<f64> = Vec::new();
            let start_decade = u_lo.max(CURVE_U_EPS).log10().floor() as i32;
            for decade in start_decade..30 {
                let lo = 10f64.powi(decade).max(u_lo);
                let hi = 10f64.powi(decade + 1);
                if lo >= hi {
                    continue;
                }
                let mut dec_best = 0.0f64;
                let mut dec_u = lo;
                for &u in &numeric::log_spaced(lo, hi, 33) {
                    let v = f(u);
                    if v > dec_best {
                        dec_best = v;
                        dec_u = u;
                    }
                }
                if dec_best > best {
                    best = dec_best;
                    best_u = dec_u;
                }
                last3.push(dec_best);
                if last3.len() > 3 {
                    last3.remove(0);
                }
            }
            let diverging = last3.len() == 3
                && last3[2] > last3[1] * (1.0 + 1e-6)
                && last3[1] > last3[0] * (1.0 + 1e-6)
                && last3[2] >= best * (1.0 - 1e-9);
            if diverging || !best.is_finite() {
                return Ok(CancelSup {
                    value: f64::INFINITY,
                    finite: false,
                    witness: (c.shape.eval(best_u), best_u),
                });
            }
            // refine around the incumbent
            let (ru, rv) = numeric::golden_max(&f, (best_u / 12.0).max(u_lo), best_u * 12.0, 160);
            if rv > best {
                best = rv;
                best_u = ru;
            }
            Ok(CancelSup {
                value: best,
                finite: true,
                witness: (c.shape.eval(best_u), best_u),
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Sectoriality audit
// ---------------------------------------------------------------------------

/// Outcome of the sectoriality audit for a scalar symbol over a model.
#[derive(Debug, Clone, Serialize)]
pub struct SectorialityAudit {
    /// `sup over lambda-decade of sup_mu lambda / |lambda + g(mu)|`.
    pub per_decade: Vec<(i32, f64)>,
    pub constant: f64,
    pub pass: bool,
}

/// Audits `sup_{lambda > 0} lambda / |lambda + g(mu)| <= C` over the
/// model's spectrum, flagging a growth trend across the last three
/// lambda-decades.
///
/// The symbol must map the spectrum into the closed right half-plane.
pub fn sectoriality_audit(
    model: &SpectralModel,
    symbol: &dyn Fn(Complex64) -> Complex64,
    lambda_grid: &[f64],
) -> Result<SectorialityAudit> {
    // sample the spectrum
    let spectrum: Vec<Complex64> = match model {
        SpectralModel::Diagonal(eigs) => eigs.clone(),
        SpectralModel::Curve(c) => {
            let u_lo = if c.shape.touches_zero() {
                1e-9
            } else {
                c.u_min
            };
            numeric::log_spaced(u_lo.max(1e-9), 1e9, 257)
                .into_iter()
                .map(|u| SpectralModel::curve_point(c, u))
                .collect()
        }
    };
    let values: Vec<Complex64> = spectrum.iter().map(|&z| symbol(z)).collect();
    for v in &values {
        if v.re < -1e-12 {
            return Err(Error::Domain(format!(
                "symbol value {v} leaves the closed right half-plane"
            )));
        }
    }
    let mut points = Vec::with_capacity(lambda_grid.len());
    for &lam in lambda_grid {
        if !(lam > 0.0) {
            return Err(Error::Domain("lambda grid must be positive".into()));
        }
        let mut worst = 0.0f64;
        for v in &values {
            let den = (lam + v).norm();
            let q = if den == 0.0 { f64::INFINITY } else { lam / den };
            worst = worst.max(q);
        }
        points.push((lam, worst));
    }
    let per_decade = numeric::per_decade_max(&points);
    let constant = per_decade.iter().map(|p| p.1).fold(0.0f64, f64::max);
    // no growth trend across last three decades
    let n = per_decade.len();
    let pass = constant.is_finite()
        && (n < 2 || {
            let tail = &per_decade[n.saturating_sub(3)..];
            tail.windows(2).all(|w| w[1].1 <= w[0].1 * 1.05)
        });
    Ok(SectorialityAudit {
        per_decade,
        constant,
        pass,
    })
}
