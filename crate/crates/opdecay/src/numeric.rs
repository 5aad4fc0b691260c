//! Shared numeric plumbing: grids, bracketed root-finding, monotone-tail
//! certification, golden-section search and Gauss-Legendre nodes.

use crate::error::{Error, Result};
use std::sync::OnceLock;

/// Relative tolerance used by the bisection root-finders.
pub const ROOT_REL_TOL: f64 = 1e-12;

/// `n` log-spaced points on `[lo, hi]`, inclusive of both ends.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Maximum of `|value - 1|` per decade of the abscissa, sorted by decade.
///
/// Returns `(decade, max)` pairs where `decade = floor(log10 s)`.
pub fn per_decade_max(points: &[(f64, f64)]) -> Vec<(i32, f64)> {
    let mut buckets: std::collections::BTreeMap<i32, f64> = Default::default();
    for &(s, v) in points {
        let d = s.log10().floor() as i32;
        let e = buckets.entry(d).or_insert(0.0);
        if v > *e {
            *e = v;
        }
    }
    buckets.into_iter().collect()
}

/// True when the last `k` entries are nonincreasing (small relative slack).
pub fn nonincreasing_tail(maxima: &[(i32, f64)], k: usize) -> bool {
    if maxima.len() < 2 {
        return true;
    }
    let start = maxima.len().saturating_sub(k);
    maxima[start..]
        .windows(2)
        .all(|w| w[1].1 <= w[0].1 * (1.0 + 1e-9) + 1e-300)
}

/// Ordinary least-squares slope of `y` against `x`.
pub fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
    }
    sxy / sxx
}

/// Finds `x >= lo` with `f(x) = target` for increasing `f`, by doubling then
/// log-space bisection to relative tolerance [`ROOT_REL_TOL`].
pub fn invert_increasing(
    f: &dyn Fn(f64) -> f64,
    target: f64,
    lo: f64,
    max_doublings: usize,
) -> Result<f64> {
    let flo = f(lo);
    if !flo.is_finite() {
        return Err(Error::Overflow(format!("f({lo:e}) is not finite")));
    }
    if flo > target {
        return Err(Error::Bracket(format!(
            "target {target:e} below f(tail start) = {flo:e}"
        )));
    }
    if flo == target {
        return Ok(lo);
    }
    let mut hi = lo.max(1e-300);
    let mut fhi = flo;
    let mut steps = 0;
    while fhi < target {
        hi *= 2.0;
        if !hi.is_finite() || hi > 1e300 {
            return Err(Error::Overflow("bracket escaped the floating range".into()));
        }
        fhi = f(hi);
        if fhi.is_nan() {
            return Err(Error::Domain(format!("f({hi:e}) is NaN")));
        }
        steps += 1;
        if steps > max_doublings {
            return Err(Error::Bracket(format!(
                "no bracket for target {target:e} within {max_doublings} doublings"
            )));
        }
    }
    let mut a = (hi / 2.0).max(lo);
    let mut b = hi;
    for _ in 0..200 {
        if (b - a) <= ROOT_REL_TOL * a.abs().max(1e-300) {
            break;
        }
        let m = (a.ln() + b.ln()).mul_add(0.5, 0.0).exp();
        if f(m) < target {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Finds `x` in `(0, hi]` with `f(x) = target` for *decreasing* `f`
/// (profiles with a singularity at zero), by halving then bisection.
pub fn invert_decreasing(
    f: &dyn Fn(f64) -> f64,
    target: f64,
    hi: f64,
    max_halvings: usize,
) -> Result<f64> {
    let fhi = f(hi);
    if fhi > target {
        return Err(Error::Bracket(format!(
            "target {target:e} below f(upper end) = {fhi:e}"
        )));
    }
    let mut lo = hi;
    let mut flo = fhi;
    let mut steps = 0;
    while flo < target {
        lo *= 0.5;
        if lo < 1e-300 {
            return Err(Error::Overflow("bracket collapsed to zero".into()));
        }
        flo = f(lo);
        if flo.is_nan() {
            return Err(Error::Domain(format!("f({lo:e}) is NaN")));
        }
        steps += 1;
        if steps > max_halvings {
            return Err(Error::Bracket(format!(
                "no bracket for target {target:e} within {max_halvings} halvings"
            )));
        }
    }
    let (mut a, mut b) = (lo, (lo * 2.0).min(hi));
    for _ in 0..200 {
        if (b - a) <= ROOT_REL_TOL * a.abs().max(1e-300) {
            break;
        }
        let m = (a.ln() + b.ln()).mul_add(0.5, 0.0).exp();
        if f(m) > target {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Certifies a start point `T` such that `f` is strictly monotone on a wide
/// tail window beginning at `T`.
///
/// Samples 64 log-spaced points on `[T, T * span]`, requires strict
/// monotonicity in the requested direction, then re-checks on a 4x refined
/// grid.  The candidate start doubles until the certificate holds or the
/// budget runs out.
pub fn find_monotone_tail(
    f: &dyn Fn(f64) -> f64,
    start: f64,
    increasing: bool,
    max_doublings: usize,
) -> Result<f64> {
    let span = 1e8;
    let ok = |t: f64| -> bool {
        for n in [64usize, 256] {
            let grid = log_spaced(t, t * span, n);
            let vals: Vec<f64> = grid.iter().map(|&s| f(s)).collect();
            if vals.iter().any(|v| !v.is_finite()) {
                return false;
            }
            let strict =
                vals.windows(2)
                    .all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] });
            if !strict {
                return false;
            }
        }
        true
    };
    let mut t = start;
    for _ in 0..=max_doublings {
        if ok(t) {
            return Ok(t);
        }
        t *= 2.0;
        if t > 1e250 {
            break;
        }
    }
    Err(Error::Monotonicity(format!(
        "no strictly {} tail found from {start:e} within budget",
        if increasing {
            "increasing"
        } else {
            "decreasing"
        }
    )))
}

const INV_GOLD: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximization of `f` on `[a, b]`; returns `(x, f(x))`.
pub fn golden_max(f: &dyn Fn(f64) -> f64, a: f64, b: f64, iters: usize) -> (f64, f64) {
    let (mut a, mut b) = (a, b);
    let mut x1 = b - INV_GOLD * (b - a);
    let mut x2 = a + INV_GOLD * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_GOLD * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_GOLD * (b - a);
            f1 = f(x1);
        }
        if (b - a).abs() <= 1e-14 * a.abs().max(b.abs()).max(1e-300) {
            break;
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Golden-section minimization of `f` on `[a, b]`; returns `(x, f(x))`.
pub fn golden_min(f: &dyn Fn(f64) -> f64, a: f64, b: f64, iters: usize) -> (f64, f64) {
    let (x, v) = golden_max(&|s| -f(s), a, b, iters);
    (x, -v)
}

/// 16-point Gauss-Legendre nodes and weights on `[-1, 1]`.
///
/// Computed once by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre_16() -> &'static [(f64, f64); 16] {
    static NODES: OnceLock<[(f64, f64); 16]> = OnceLock::new();
    NODES.get_or_init(|| {
        let n = 16usize;
        let mut out = [(0.0f64, 0.0f64); 16];
        for i in 0..n {
            // initial guess, then Newton on P_n
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0f64, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            out[i] = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        out
    })
}

/// Format a float with 17 significant digits, the reproducibility contract
/// for all CLI output.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_spaced_endpoints() {
        let g = log_spaced(1.0, 1e6, 7);
        assert_eq!(g.len(), 7);
        assert!((g[0] - 1.0).abs() < 1e-12);
        assert!((g[6] - 1e6).abs() / 1e6 < 1e-12);
        assert!((g[3] - 1e3).abs() / 1e3 < 1e-12);
    }

    #[test]
    fn invert_increasing_recovers_square_root() {
        let f = |x: f64| x * x;
        let x = invert_increasing(&f, 2.0, 1e-3, 600).unwrap();
        assert!((x - 2.0f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn invert_increasing_reports_bad_bracket() {
        let f = |x: f64| x;
        assert!(matches!(
            invert_increasing(&f, 0.5, 1.0, 600),
            Err(Error::Bracket(_))
        ));
    }

    #[test]
    fn invert_decreasing_recovers_reciprocal() {
        let f = |x: f64| 1.0 / x;
        let x = invert_decreasing(&f, 1e4, 1.0, 600).unwrap();
        assert!((x - 1e-4).abs() / 1e-4 < 1e-9);
    }

    #[test]
    fn monotone_tail_of_s_over_log_squared() {
        // s / (log s)^2 is increasing only once log s > 2.
        let f = |s: f64| s / s.ln().powi(2);
        let t = find_monotone_tail(&f, 3.0, true, 60).unwrap();
        assert!(t >= std::f64::consts::E.powi(2) / 2.0);
        assert!(t < 40.0);
    }

    #[test]
    fn golden_finds_quadratic_max() {
        let f = |x: f64| -(x - 3.7) * (x - 3.7) + 2.0;
        let (x, v) = golden_max(&f, 0.0, 10.0, 200);
        // near a quadratic maximum the abscissa is only sqrt(eps)-accurate,
        // the value is eps-accurate
        assert!((x - 3.7).abs() < 1e-6);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_nodes_integrate_polynomials_exactly() {
        // 16-point rule is exact through degree 31.
        let nodes = gauss_legendre_16();
        let int: f64 = nodes.iter().map(|&(x, w)| w * x.powi(20)).sum();
        assert!((int - 2.0 / 21.0).abs() < 1e-14);
        let total: f64 = nodes.iter().map(|&(_, w)| w).sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn slope_of_exact_line() {
        let x: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| -0.5 * v + 3.0).collect();
        assert!((ols_slope(&x, &y) + 0.5).abs() < 1e-12);
    }
}
