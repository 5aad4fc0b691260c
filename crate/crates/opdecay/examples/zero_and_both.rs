//! Singularities at zero and at both ends: measured decay slopes of
//! ||T(t) B(A)|| and ||T(t) A(I+A)^{-2}||, plus the inversion of a
//! measured decay curve back into a resolvent bound.
//!
//! Run: cargo run --example zero_and_both

use opdecay::harness::{compare, run_decay_experiment, CompareConfig};
use opdecay::numeric::log_spaced;
use opdecay::opmodel::{CurveShape, Observable, ProfileKind, ResolventProfile, SpectralModel};
use opdecay::rates::{self, predict, RateInputs, RateRegime};

fn main() -> opdecay::Result<()> {
    for alpha in [1.0, 2.0] {
        let model = SpectralModel::curve(CurveShape::PowerZero { alpha }, true)?;
        let curve = run_decay_experiment(&model, &Observable::BofA, 1e0, 1e8, 4)?;
        let env = predict(
            &RateRegime::ZeroHilbertPoly { alpha },
            &RateInputs::default(),
        )?;
        let rep = compare(
            &curve,
            &env,
            &CompareConfig {
                window: (1e3, 1e7),
                slope_expected: Some(-1.0 / alpha),
                slope_tol: 0.05,
                band_ratio_max: None,
            },
        )?;
        println!(
            "zero singularity, alpha = {alpha}: slope {:.4} (expected {:.4})",
            rep.slope_fit,
            -1.0 / alpha
        );
        // invert the measured decay into a resolvent bound and compare with
        // the model's own high-frequency profile
        let (n, lo, hi) = curve.tail_profile()?;
        let bound = rates::decay_to_resolvent(n, lo, hi, rates::DecayVariant::Zero, 0.5)?;
        let mlow = ResolventProfile::new(model, ProfileKind::Mlow);
        println!("  {:>10} {:>12} {:>12}", "s", "m(s)", "bound(s)");
        for s in log_spaced(1e-3, 1e-1, 3) {
            println!(
                "  {s:>10.2e} {:>12.4e} {:>12.4e}",
                mlow.eval(s)?,
                bound.near_zero(s)?
            );
        }
    }

    let model = SpectralModel::curve(
        CurveShape::BothPoly {
            alpha: 1.0,
            beta: 2.0,
        },
        true,
    )?;
    let curve = run_decay_experiment(&model, &Observable::Aia2, 1e1, 1e6, 4)?;
    let env = predict(
        &RateRegime::BothHilbertPoly {
            alpha: 1.0,
            beta: 2.0,
        },
        &RateInputs::default(),
    )?;
    let rep = compare(
        &curve,
        &env,
        &CompareConfig {
            window: (1e2, 1e6),
            slope_expected: Some(-0.5),
            slope_tol: 0.05,
            band_ratio_max: None,
        },
    )?;
    println!(
        "both singularities (1, 2): slope {:.4} (expected -0.5, gamma = max(1,2))",
        rep.slope_fit
    );
    Ok(())
}
