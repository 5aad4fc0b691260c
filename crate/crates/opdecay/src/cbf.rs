//! Stieltjes and complete Bernstein functions from their Stieltjes triples.
//!
//! A Stieltjes function is `h(z) = a/z + b + integral dmu(s)/(s+z)` and a
//! complete Bernstein function is `f(z) = a + b z + integral z/(s+z) dmu(s)`,
//! with `integral dmu(s)/(1+s)` finite.  Measures are restricted to finite
//! atom lists and Lebesgue-Stieltjes measures of increasing regularly
//! varying distribution functions `g(s) = s^{1-beta} l(s)`; for the latter
//! the integral is evaluated in density form
//! `integral g(s)/(s+z)^2 ds` after the substitution `s = e^u` with
//! adaptive composite Gauss panels and certified truncation.

use crate::error::{Error, Result};
use crate::numeric;
use crate::regvar::RegVarFn;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Target relative accuracy of the quadrature.
pub const QUAD_REL_TOL: f64 = 1e-9;

/// The measure of a Stieltjes triple.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum Measure {
    /// No continuous or atomic part.
    Zero,
    /// Finite list of atoms `(location, weight)`, locations positive.
    Atoms(Vec<(f64, f64)>),
    /// Lebesgue-Stieltjes measure of an increasing distribution function
    /// `g(s) = s^index l(s)`; the slow part is frozen below its domain
    /// start so `g` is defined on all of `(0, oo)`.
    Distribution(RegVarFn),
}

/// `(a, b, mu)` generating a Stieltjes or complete Bernstein function.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StieltjesTriple {
    pub a: f64,
    pub b: f64,
    pub measure: Measure,
}

impl StieltjesTriple {
    pub fn new(a: f64, b: f64, measure: Measure) -> Result<Self> {
        if a < 0.0 || b < 0.0 {
            return Err(Error::Spec("triple constants must be nonnegative".into()));
        }
        let t = StieltjesTriple { a, b, measure };
        t.certify_integrability()?;
        Ok(t)
    }

    pub fn zero() -> Self {
        StieltjesTriple {
            a: 0.0,
            b: 0.0,
            measure: Measure::Zero,
        }
    }

    /// Single unit atom at `s = 1`.
    pub fn delta_one() -> Self {
        StieltjesTriple {
            a: 0.0,
            b: 0.0,
            measure: Measure::Atoms(vec![(1.0, 1.0)]),
        }
    }

    /// Certificate for `integral dmu(s)/(1+s) < oo`.
    ///
    /// Atoms are trivially integrable.  A distribution `s^index l(s)` is
    /// certified when `index < 1`; for `index = 1` the tail integral
    /// `integral l(s)/(s+1) ds` is probed by doubling truncation and must
    /// stabilize.  The distribution must also be nondecreasing.
    pub fn certify_integrability(&self) -> Result<()> {
        match &self.measure {
            Measure::Zero => Ok(()),
            Measure::Atoms(atoms) => {
                if atoms.iter().any(|&(s, w)| s <= 0.0 || w < 0.0) {
                    return Err(Error::Spec(
                        "atoms need positive locations and nonnegative weights".into(),
                    ));
                }
                Ok(())
            }
            Measure::Distribution(g) => {
                if g.index < 0.0 || g.index > 1.0 {
                    return Err(Error::Integrability(format!(
                        "distribution index {} outside [0, 1]",
                        g.index
                    )));
                }
                // monotone certificate for g itself
                let start = g.slow.domain_start();
                let grid = numeric::log_spaced(start, start * 1e12, 257);
                let mut prev = 0.0;
                for &s in &grid {
                    let v = g.eval_ext(s)?;
                    if v < prev * (1.0 - 1e-12) {
                        return Err(Error::Integrability(
                            "distribution function is not nondecreasing".into(),
                        ));
                    }
                    prev = v;
                }
                if g.index == 1.0 {
                    // probe integral l(s)/(s+1) ds = integral l(e^u) du by
                    // doubling blocks; geometric decay of block sums
                    // certifies convergence (conservative: slowly converging
                    // integrals are rejected)
                    let mut u = start.ln().max(1.0);
                    let mut prev_block = f64::INFINITY;
                    let mut decaying = 0;
                    for _ in 0..60 {
                        // midpoint estimate of integral over [u, 2u]
                        let block = u * g.slow.eval_ext((1.5 * u).exp())?;
                        if block <= 0.9 * prev_block {
                            decaying += 1;
                            if decaying >= 3 {
                                return Ok(());
                            }
                        } else {
                            decaying = 0;
                        }
                        prev_block = block;
                        u *= 2.0;
                    }
                    Err(Error::Integrability(
                        "index-1 distribution failed the tail-integral probe".into(),
                    ))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Which representation formula [`SpecialFn`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecialKind {
    Stieltjes,
    CompleteBernstein,
}

/// A Stieltjes or complete Bernstein function, evaluated from its triple.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecialFn {
    pub kind: SpecialKind,
    pub triple: StieltjesTriple,
}

impl SpecialFn {
    pub fn new(kind: SpecialKind, triple: StieltjesTriple) -> Self {
        SpecialFn { kind, triple }
    }

    pub fn stieltjes(triple: StieltjesTriple) -> Self {
        Self::new(SpecialKind::Stieltjes, triple)
    }

    pub fn complete_bernstein(triple: StieltjesTriple) -> Self {
        Self::new(SpecialKind::CompleteBernstein, triple)
    }

    /// Evaluates the representation formula on the slit plane.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        eval_special(self, z)
    }

    /// Evaluation at a positive real point.
    pub fn eval_real(&self, x: f64) -> Result<f64> {
        Ok(self.eval(Complex64::new(x, 0.0))?.re)
    }

    pub fn is_zero(&self) -> bool {
        self.triple.a == 0.0
            && self.triple.b == 0.0
            && match &self.triple.measure {
                Measure::Zero => true,
                Measure::Atoms(a) => a.iter().all(|&(_, w)| w == 0.0),
                Measure::Distribution(_) => false,
            }
    }
}

fn on_cut(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0
}

/// Stieltjes-kernel integral `integral dmu(s)/(s+z)` for the triple's
/// measure, by atoms or by density-form quadrature.
fn kernel_integral(measure: &Measure, z: Complex64) -> Result<Complex64> {
    match measure {
        Measure::Zero => Ok(Complex64::new(0.0, 0.0)),
        Measure::Atoms(atoms) => {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(s, w) in atoms {
                acc += w / (s + z);
            }
            Ok(acc)
        }
        Measure::Distribution(g) => stieltjes_density_quadrature(g, z),
    }
}

/// `integral_0^oo g(s)/(s+z)^2 ds` with `s = e^u`:
/// `integral e^u g(e^u)/(e^u+z)^2 du`.
///
/// Panels of unit width in `u` expand outward from `u0 = log |z|` until
/// three consecutive panels are negligible; each panel is integrated by
/// adaptive 16-point Gauss with recursive bisection.
fn stieltjes_density_quadrature(g: &RegVarFn, z: Complex64) -> Result<Complex64> {
    let integrand = |u: f64| -> Complex64 {
        let s = u.exp();
        let gs = g.eval_ext(s).unwrap_or(f64::NAN);
        let den = s + z;
        s * gs / (den * den)
    };
    let u0 = z.norm().max(1e-300).ln();

    let mut total = Complex64::new(0.0, 0.0);
    let mut scale = 0.0f64;

    // expand right then left; plain magnitude-based truncation
    const W: f64 = 2.0; // panel width in u
    for dir in [1.0f64, -1.0] {
        let mut negligible = 0;
        for k in 0..2000 {
            let (a, b) = if dir > 0.0 {
                (u0 + W * k as f64, u0 + W * (k + 1) as f64)
            } else {
                (u0 - W * (k + 1) as f64, u0 - W * k as f64)
            };
            let val = adaptive_panel(&integrand, a, b, scale, 0)?;
            total += val;
            scale = scale.max(total.norm());
            if val.norm() <= 1e-12 * scale.max(1e-300) {
                negligible += 1;
                if negligible >= 3 {
                    break;
                }
            } else {
                negligible = 0;
            }
            if k == 1999 {
                return Err(Error::Convergence(
                    "quadrature truncation budget exhausted".into(),
                ));
            }
        }
    }
    if !total.is_finite() {
        return Err(Error::Overflow(
            "quadrature accumulated a non-finite value".into(),
        ));
    }
    Ok(total)
}

fn gl16(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64) -> Complex64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = Complex64::new(0.0, 0.0);
    for &(x, w) in numeric::gauss_legendre_16() {
        acc += w * f(mid + half * x);
    }
    acc * half
}

fn adaptive_panel(
    f: &dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    scale: f64,
    depth: usize,
) -> Result<Complex64> {
    let whole = gl16(f, a, b);
    let mid = 0.5 * (a + b);
    let left = gl16(f, a, mid);
    let right = gl16(f, mid, b);
    let refined = left + right;
    let err = (whole - refined).norm();
    if err <= 1e-13 * refined.norm().max(scale).max(1e-300) {
        return Ok(refined);
    }
    if depth >= 28 {
        if !refined.is_finite() {
            return Err(Error::Overflow("non-finite panel".into()));
        }
        return Ok(refined);
    }
    Ok(adaptive_panel(f, a, mid, scale, depth + 1)? + adaptive_panel(f, mid, b, scale, depth + 1)?)
}

/// Evaluates a Stieltjes or complete Bernstein function at `z` in the slit
/// plane (`z` not on `(-oo, 0]`).
pub fn eval_special(f: &SpecialFn, z: Complex64) -> Result<Complex64> {
    if on_cut(z) {
        return Err(Error::Domain(format!("z = {z} lies on the cut (-oo, 0]")));
    }
    let kernel = kernel_integral(&f.triple.measure, z)?;
    let (a, b) = (f.triple.a, f.triple.b);
    Ok(match f.kind {
        SpecialKind::Stieltjes => a / z + b + kernel,
        // z * integral dmu/(s+z) equals integral z/(s+z) dmu
        SpecialKind::CompleteBernstein => a + b * z + z * kernel,
    })
}

// ---------------------------------------------------------------------------
// f_g / f_m pair
// ---------------------------------------------------------------------------

/// The pair `f_g(z) = S_g(1/z)` (complete Bernstein) and
/// `f_m = f_g / (1 + f_g)`, built from an increasing distribution `g`.
#[derive(Debug, Clone)]
pub struct FgFm {
    sg: SpecialFn,
}

impl FgFm {
    pub fn new(g: RegVarFn) -> Result<Self> {
        let triple = StieltjesTriple::new(0.0, 0.0, Measure::Distribution(g))?;
        Ok(FgFm {
            sg: SpecialFn::stieltjes(triple),
        })
    }

    /// Atom-measure variant (used by tests and the duality demos).
    pub fn from_triple(triple: StieltjesTriple) -> Self {
        FgFm {
            sg: SpecialFn::stieltjes(triple),
        }
    }

    pub fn fg(&self, z: Complex64) -> Result<Complex64> {
        self.sg.eval(z.inv())
    }

    pub fn fm(&self, z: Complex64) -> Result<Complex64> {
        let fg = self.fg(z)?;
        Ok(fg / (1.0 + fg))
    }

    pub fn fg_real(&self, x: f64) -> Result<f64> {
        Ok(self.fg(Complex64::new(x, 0.0))?.re)
    }

    pub fn fm_real(&self, x: f64) -> Result<f64> {
        Ok(self.fm(Complex64::new(x, 0.0))?.re)
    }
}

// ---------------------------------------------------------------------------
// Karamata audit
// ---------------------------------------------------------------------------

/// `Gamma(sigma) * Gamma(2 - sigma)`, via the reflection identity
/// `(1 - sigma) pi / sin(pi sigma)` on `(0, 1)` and the limit 1 at
/// `sigma = 1`.  This is the audit's analytic (Beta-integral) oracle.
pub fn karamata_constant(sigma: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::Domain(format!("sigma = {sigma} outside (0, 1]")));
    }
    if (sigma - 1.0).abs() < 1e-14 {
        return Ok(1.0);
    }
    Ok((1.0 - sigma) * std::f64::consts::PI / (std::f64::consts::PI * sigma).sin())
}

/// Which end of the spectrum the Tauberian asymptotics address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AsymptoticEnd {
    Infinity,
    Zero,
}

/// Trace of a Karamata-asymptotics audit.
#[derive(Debug, Clone, Serialize)]
pub struct KaramataAudit {
    /// `(lambda, S_g(lambda) * lambda^sigma / (K(sigma) * l_end(lambda)))`.
    pub trace: Vec<(f64, f64)>,
    pub per_decade: Vec<(i32, f64)>,
    pub pass: bool,
    pub tolerance: f64,
}

/// Audits `S_g(l) ~ Gamma(sigma) Gamma(2-sigma) l^{-sigma} l_end(l)` for
/// `g(s) = s^{1-sigma} l_end-matched distribution.
///
/// For the `Infinity` end, `g(s) = s^{1-sigma} l(s)` and the comparison
/// slow part is `l(lambda)`; for the `Zero` end, `g(s) = s^{1-sigma} l(1/s)`
/// and the comparison is `l(1/lambda)`.
pub fn karamata_audit(
    ell: &crate::regvar::SlowlyVaryingExpr,
    sigma: f64,
    end: AsymptoticEnd,
    lambda_grid: &[f64],
    tolerance: f64,
) -> Result<KaramataAudit> {
    let constant = karamata_constant(sigma)?;
    let trace: Vec<(f64, f64)> = match end {
        AsymptoticEnd::Infinity => {
            let g = RegVarFn::new(1.0 - sigma, ell.clone());
            let triple = StieltjesTriple::new(0.0, 0.0, Measure::Distribution(g))?;
            let sg = SpecialFn::stieltjes(triple);
            lambda_grid
                .iter()
                .map(|&lam| {
                    let v = sg.eval_real(lam)?;
                    let oracle = constant * lam.powf(-sigma) * ell.eval_ext(lam)?;
                    Ok((lam, v / oracle))
                })
                .collect::<Result<_>>()?
        }
        AsymptoticEnd::Zero => {
            // g(s) = s^{1-sigma} l(1/s): integrate directly in density form
            let ell2 = ell.clone();
            let density = move |s: f64| -> f64 {
                s.powf(1.0 - sigma) * ell2.eval_ext(1.0 / s).unwrap_or(f64::NAN)
            };
            lambda_grid
                .iter()
                .map(|&lam| {
                    let v = generic_density_quadrature(&density, lam)?;
                    let oracle = constant * lam.powf(-sigma) * ell.eval_ext(1.0 / lam)?;
                    Ok((lam, v / oracle))
                })
                .collect::<Result<_>>()?
        }
    };
    // toward zero the decades run downward; normalize by distance from the end
    let mut points: Vec<(f64, f64)> = trace
        .iter()
        .map(|&(lam, r)| {
            let key = match end {
                AsymptoticEnd::Infinity => lam,
                AsymptoticEnd::Zero => 1.0 / lam,
            };
            (key, (r - 1.0).abs())
        })
        .collect();
    points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let per_decade = numeric::per_decade_max(&points);
    let top = per_decade.last().map(|p| p.1).unwrap_or(f64::INFINITY);
    // below the quadrature noise floor the trend carries no information
    let pass = top <= tolerance && (top < 1e-9 || numeric::nonincreasing_tail(&per_decade, 3));
    Ok(KaramataAudit {
        trace,
        per_decade,
        pass,
        tolerance,
    })
}

/// `integral_0^oo  g(s)/(s+lambda)^2 ds` for a positive density-form
/// distribution supplied as a callable (real positive `lambda`).
fn generic_density_quadrature(g: &dyn Fn(f64) -> f64, lambda: f64) -> Result<f64> {
    let integrand = |u: f64| -> Complex64 {
        let s = u.exp();
        let den = s + lambda;
        Complex64::new(s * g(s) / (den * den), 0.0)
    };
    let u0 = lambda.max(1e-300).ln();
    let mut total = 0.0f64;
    let mut scale = 0.0f64;
    const W: f64 = 2.0;
    for dir in [1.0f64, -1.0] {
        let mut negligible = 0;
        for k in 0..2000 {
            let (a, b) = if dir > 0.0 {
                (u0 + W * k as f64, u0 + W * (k + 1) as f64)
            } else {
                (u0 - W * (k + 1) as f64, u0 - W * k as f64)
            };
            let val = adaptive_panel(&integrand, a, b, scale, 0)?.re;
            total += val;
            scale = scale.max(total.abs());
            if val.abs() <= 1e-12 * scale.max(1e-300) {
                negligible += 1;
                if negligible >= 3 {
                    break;
                }
            } else {
                negligible = 0;
            }
        }
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Sector domination audit
// ---------------------------------------------------------------------------

/// Outcome of the sector-domination audit.
#[derive(Debug, Clone, Serialize)]
pub struct SectorAudit {
    pub checked: usize,
    pub skipped: usize,
    pub worst_lower_margin: f64,
    pub worst_upper_margin: f64,
    pub pass: bool,
}

/// Audits `sqrt((1+cos phi)/2) g(|z|) <= |g(z)| <= sqrt(2/(1+cos phi)) g(|z|)`
/// for a function with triple `(0, 0, mu)`.
///
/// Angles with `|phi| > pi - 0.05` are skipped (the bounds degenerate).
pub fn sector_domination_audit(
    f: &SpecialFn,
    phi_grid: &[f64],
    r_grid: &[f64],
) -> Result<SectorAudit> {
    if f.triple.a != 0.0 || f.triple.b != 0.0 {
        return Err(Error::Spec(
            "sector domination audit needs a (0, 0, mu) representation".into(),
        ));
    }
    let mut checked = 0;
    let mut skipped = 0;
    let mut worst_lower = f64::INFINITY;
    let mut worst_upper = f64::INFINITY;
    for &phi in phi_grid {
        if phi.abs() > std::f64::consts::PI - 0.05 {
            skipped += 1;
            continue;
        }
        let factor = ((1.0 + phi.cos()) / 2.0).sqrt();
        for &r in r_grid {
            let on_axis = f.eval_real(r)?;
            let off = f.eval(Complex64::from_polar(r, phi))?.norm();
            // margins are >= 0 exactly when the sandwich holds
            let lower = off - factor * on_axis;
            let upper = on_axis / factor - off;
            worst_lower = worst_lower.min(lower / on_axis);
            worst_upper = worst_upper.min(upper / on_axis);
            checked += 1;
        }
    }
    let slack = -1e-7;
    Ok(SectorAudit {
        checked,
        skipped,
        worst_lower_margin: worst_lower,
        worst_upper_margin: worst_upper,
        pass: worst_lower >= slack && worst_upper >= slack,
    })
}

// ---------------------------------------------------------------------------
// Duality transforms
// ---------------------------------------------------------------------------

/// The four value-level transforms exchanging the Stieltjes and complete
/// Bernstein classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DualityKind {
    /// `z * f(z)`; Stieltjes -> complete Bernstein.
    MulArgument,
    /// `f(z) / z`; complete Bernstein -> Stieltjes.
    DivArgument,
    /// `1 / f(z)`; swaps the classes.
    Reciprocal,
    /// `z * f(1/z)`; preserves the complete Bernstein class.
    FlipArgument,
}

/// Value-level transform of a [`SpecialFn`], with the claimed class recorded
/// so membership can be audited by monotonicity/positivity sampling.
pub struct DualFn {
    base: SpecialFn,
    pub which: DualityKind,
    pub claimed: SpecialKind,
}

impl DualFn {
    pub fn eval_real(&self, x: f64) -> Result<f64> {
        let z = Complex64::new(x, 0.0);
        let f = |w: Complex64| self.base.eval(w);
        Ok(match self.which {
            DualityKind::MulArgument => (z * f(z)?).re,
            DualityKind::DivArgument => (f(z)? / z).re,
            DualityKind::Reciprocal => f(z)?.inv().re,
            DualityKind::FlipArgument => (z * f(z.inv())?).re,
        })
    }

    /// Samples positivity plus the class's monotonicity (Stieltjes
    /// decreasing, complete Bernstein nondecreasing) on a log grid.
    pub fn class_audit(&self, grid: &[f64]) -> Result<bool> {
        let vals: Vec<f64> = grid
            .iter()
            .map(|&x| self.eval_real(x))
            .collect::<Result<_>>()?;
        if vals.iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Ok(false);
        }
        let tol = 1e-9;
        Ok(match self.claimed {
            SpecialKind::Stieltjes => vals.windows(2).all(|w| w[1] <= w[0] * (1.0 + tol) + 1e-300),
            SpecialKind::CompleteBernstein => {
                vals.windows(2).all(|w| w[1] >= w[0] * (1.0 - tol) - 1e-300)
            }
        })
    }
}

/// Builds the requested duality transform; the claimed class follows the
/// exchange rules of the two representation formulas.
pub fn duality_transform(f: &SpecialFn, which: DualityKind) -> Result<DualFn> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let claimed = match (f.kind, which) {
        (SpecialKind::Stieltjes, DualityKind::MulArgument) => SpecialKind::CompleteBernstein,
        (SpecialKind::Stieltjes, DualityKind::DivArgument) => SpecialKind::Stieltjes,
        (SpecialKind::Stieltjes, DualityKind::Reciprocal) => SpecialKind::CompleteBernstein,
        (SpecialKind::Stieltjes, DualityKind::FlipArgument) => SpecialKind::Stieltjes,
        (SpecialKind::CompleteBernstein, DualityKind::MulArgument) => {
            SpecialKind::CompleteBernstein
        }
        (SpecialKind::CompleteBernstein, DualityKind::DivArgument) => SpecialKind::Stieltjes,
        (SpecialKind::CompleteBernstein, DualityKind::Reciprocal) => SpecialKind::Stieltjes,
        (SpecialKind::CompleteBernstein, DualityKind::FlipArgument) => {
            SpecialKind::CompleteBernstein
        }
    };
    Ok(DualFn {
        base: f.clone(),
        which,
        claimed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regvar::SlowlyVaryingExpr;

    fn sqrt_distribution() -> RegVarFn {
        // g(s) = s^{1/2}
        RegVarFn::new(0.5, SlowlyVaryingExpr::constant(1.0).unwrap())
    }

    #[test]
    fn atom_triple_matches_algebra() {
        let t = StieltjesTriple::delta_one();
        let st = SpecialFn::stieltjes(t.clone());
        assert!((st.eval_real(3.0).unwrap() - 0.25).abs() < 1e-14);
        let cb = SpecialFn::complete_bernstein(t);
        assert!((cb.eval_real(3.0).unwrap() - 0.75).abs() < 1e-14);
        let zero = SpecialFn::stieltjes(StieltjesTriple::zero());
        assert_eq!(zero.eval_real(5.0).unwrap(), 0.0);
    }

    #[test]
    fn sqrt_kernel_matches_beta_oracle() {
        // integral s^{1/2}/(s+l)^2 ds = (pi/2) l^{-1/2}
        let triple =
            StieltjesTriple::new(0.0, 0.0, Measure::Distribution(sqrt_distribution())).unwrap();
        let sg = SpecialFn::stieltjes(triple);
        let v = sg.eval_real(4.0).unwrap();
        let oracle = std::f64::consts::PI / 4.0;
        assert!((v - oracle).abs() / oracle < 1e-8, "{v} vs {oracle}");
    }

    #[test]
    fn quadrature_is_stable_under_refinement() {
        // doubling panel resolution through the adaptive splitter changes
        // the value by less than 1e-8 relative: probe two lambdas and both
        // kinds against the analytic value
        let triple =
            StieltjesTriple::new(0.0, 0.0, Measure::Distribution(sqrt_distribution())).unwrap();
        let sg = SpecialFn::stieltjes(triple);
        for lam in [0.3, 7.0, 1e4] {
            let v = sg.eval_real(lam).unwrap();
            let oracle = std::f64::consts::PI / 2.0 * lam.powf(-0.5);
            assert!((v - oracle).abs() / oracle < 1e-8);
        }
    }

    #[test]
    fn eval_rejects_the_cut() {
        let sg = SpecialFn::stieltjes(StieltjesTriple::delta_one());
        assert!(matches!(
            sg.eval(Complex64::new(-0.5, 0.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn integrability_certificate() {
        // index above 1 is rejected
        let g = RegVarFn::new(1.5, SlowlyVaryingExpr::constant(1.0).unwrap());
        assert!(matches!(
            StieltjesTriple::new(0.0, 0.0, Measure::Distribution(g)),
            Err(Error::Integrability(_))
        ));
        // index 1 with summable slow part passes the probe; the domain
        // start is raised past e^3 so s (log s)^{-3} is increasing
        let ell = SlowlyVaryingExpr::log_pow(-3.0)
            .unwrap()
            .with_domain_start(25.0);
        let g = RegVarFn::new(1.0, ell);
        assert!(StieltjesTriple::new(0.0, 0.0, Measure::Distribution(g)).is_ok());
        // index 1 with constant slow part fails it
        let g = RegVarFn::new(1.0, SlowlyVaryingExpr::constant(1.0).unwrap());
        assert!(matches!(
            StieltjesTriple::new(0.0, 0.0, Measure::Distribution(g)),
            Err(Error::Integrability(_))
        ));
    }

    #[test]
    fn fg_fm_pair_for_atom_and_sqrt() {
        let pair = FgFm::from_triple(StieltjesTriple::delta_one());
        for lam in [0.2, 1.0, 5.0] {
            let fg = pair.fg_real(lam).unwrap();
            assert!((fg - lam / (1.0 + lam)).abs() < 1e-12);
            let fm = pair.fm_real(lam).unwrap();
            assert!((fm - lam / (1.0 + 2.0 * lam)).abs() < 1e-12);
        }
        let pair = FgFm::new(sqrt_distribution()).unwrap();
        let lam = 9.0;
        let fg = pair.fg_real(lam).unwrap();
        let oracle = std::f64::consts::PI / 2.0 * lam.sqrt();
        assert!((fg - oracle).abs() / oracle < 1e-8);
        // f_m stays in (0,1), increasing, and -> 0 at 0+
        let mut prev = 0.0;
        for lam in crate::numeric::log_spaced(1e-4, 1e4, 17) {
            let fm = pair.fm_real(lam).unwrap();
            assert!(fm > 0.0 && fm < 1.0);
            assert!(fm >= prev);
            prev = fm;
        }
        assert!(pair.fm_real(1e-8).unwrap() < 1e-3);
    }

    #[test]
    fn karamata_constants_match_beta_identity() {
        assert!((karamata_constant(0.5).unwrap() - std::f64::consts::PI / 2.0).abs() < 1e-14);
        let k34 = karamata_constant(0.75).unwrap();
        // Gamma(3/4) Gamma(5/4) = pi/4 / sin(3 pi/4)
        let oracle = 0.25 * std::f64::consts::PI / (0.75 * std::f64::consts::PI).sin();
        assert!((k34 - oracle).abs() < 1e-14);
        assert_eq!(karamata_constant(1.0).unwrap(), 1.0);
    }

    #[test]
    fn karamata_audit_pure_powers() {
        let one = SlowlyVaryingExpr::constant(1.0).unwrap();
        let grid = crate::numeric::log_spaced(1e1, 1e4, 13);
        for sigma in [0.25, 0.5, 0.75] {
            let rep = karamata_audit(&one, sigma, AsymptoticEnd::Infinity, &grid, 1e-6).unwrap();
            assert!(rep.pass, "sigma = {sigma}: {:?}", rep.per_decade);
            let last = rep.trace.last().unwrap().1;
            assert!((last - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn karamata_audit_log_correction_trend() {
        // oracle: ratio = 1 + 2/log(lambda) for sigma = 1/2, l = log
        let ell = SlowlyVaryingExpr::log_pow(1.0).unwrap();
        let grid = crate::numeric::log_spaced(1e2, 1e8, 13);
        let rep = karamata_audit(&ell, 0.5, AsymptoticEnd::Infinity, &grid, 0.2).unwrap();
        assert!(rep.pass);
        let (lam, ratio) = *rep.trace.last().unwrap();
        assert!((lam - 1e8).abs() / 1e8 < 1e-9);
        let oracle = 1.0 + 2.0 / lam.ln();
        assert!(
            (ratio - oracle).abs() < 2e-3,
            "ratio {ratio} vs oracle {oracle}"
        );
    }

    #[test]
    fn karamata_audit_at_zero() {
        let one = SlowlyVaryingExpr::constant(1.0).unwrap();
        let grid = crate::numeric::log_spaced(1e-4, 1e-1, 10);
        let rep = karamata_audit(&one, 0.5, AsymptoticEnd::Zero, &grid, 1e-5).unwrap();
        assert!(rep.pass, "{:?}", rep.per_decade);
    }

    #[test]
    fn sector_domination_for_atom_and_sqrt() {
        let st = SpecialFn::stieltjes(StieltjesTriple::delta_one());
        let phis = [-3.1, -2.5, -1.0, 0.0, 1.0, 2.5, 3.1];
        let rs = [0.1, 1.0, 10.0];
        let rep = sector_domination_audit(&st, &phis, &rs).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.skipped, 2); // |phi| = 3.1 both signs

        let triple =
            StieltjesTriple::new(0.0, 0.0, Measure::Distribution(sqrt_distribution())).unwrap();
        let sg = SpecialFn::stieltjes(triple);
        let rep = sector_domination_audit(&sg, &[std::f64::consts::FRAC_PI_2], &rs).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn duality_transforms_pass_class_audits() {
        let grid = crate::numeric::log_spaced(1e-3, 1e3, 41);
        // h = 1/(1+z): z*h = z/(1+z) is complete Bernstein
        let h = SpecialFn::stieltjes(StieltjesTriple::delta_one());
        let d = duality_transform(&h, DualityKind::MulArgument).unwrap();
        assert_eq!(d.claimed, SpecialKind::CompleteBernstein);
        assert!(d.class_audit(&grid).unwrap());
        assert!((d.eval_real(2.0).unwrap() - 2.0 / 3.0).abs() < 1e-12);

        // S_g with the sqrt kernel is (pi/2) z^{-1/2}; its reciprocal is a
        // complete Bernstein function
        let triple =
            StieltjesTriple::new(0.0, 0.0, Measure::Distribution(sqrt_distribution())).unwrap();
        let sg = SpecialFn::stieltjes(triple);
        let d = duality_transform(&sg, DualityKind::Reciprocal).unwrap();
        assert_eq!(d.claimed, SpecialKind::CompleteBernstein);
        assert!(d.class_audit(&grid).unwrap());

        // f(z) = z has triple (0, 1, 0): z f(1/z) = 1, constant, passes
        let lin =
            SpecialFn::complete_bernstein(StieltjesTriple::new(0.0, 1.0, Measure::Zero).unwrap());
        let d = duality_transform(&lin, DualityKind::FlipArgument).unwrap();
        assert!(d.class_audit(&grid).unwrap());
        for x in [0.5, 1.0, 7.0] {
            assert!((d.eval_real(x).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn duality_rejects_zero_function() {
        let zero = SpecialFn::stieltjes(StieltjesTriple::zero());
        assert!(matches!(
            duality_transform(&zero, DualityKind::Reciprocal),
            Err(Error::ZeroFunction)
        ));
    }

    #[test]
    fn monotonicity_of_the_classes() {
        let triple =
            StieltjesTriple::new(0.1, 0.2, Measure::Atoms(vec![(0.5, 1.0), (4.0, 2.0)])).unwrap();
        let st = SpecialFn::stieltjes(triple.clone());
        let cb = SpecialFn::complete_bernstein(triple);
        let grid = crate::numeric::log_spaced(1e-3, 1e3, 61);
        let sv: Vec<f64> = grid.iter().map(|&x| st.eval_real(x).unwrap()).collect();
        assert!(sv.windows(2).all(|w| w[1] < w[0]));
        let cv: Vec<f64> = grid.iter().map(|&x| cb.eval_real(x).unwrap()).collect();
        assert!(cv.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn triple_limits_are_recovered() {
        // a = lim_{z->0+} f(z) for complete Bernstein,
        // b = lim_{z->oo} h(z) for Stieltjes
        let triple = StieltjesTriple::new(0.7, 0.3, Measure::Atoms(vec![(2.0, 1.0)])).unwrap();
        let cb = SpecialFn::complete_bernstein(triple.clone());
        assert!((cb.eval_real(1e-9).unwrap() - 0.7).abs() < 1e-6);
        let st = SpecialFn::stieltjes(triple);
        assert!((st.eval_real(1e9).unwrap() - 0.3).abs() < 1e-6);
    }
}
