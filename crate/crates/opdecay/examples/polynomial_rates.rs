//! Polynomial resolvent growth M(s) ~ s^alpha: the measured decay of
//! ||T(t) A^{-1}|| follows t^{-1/alpha}, the optimal Hilbert-space rate.
//!
//! Run: cargo run --example polynomial_rates

use opdecay::harness::{compare, run_decay_experiment, CompareConfig};
use opdecay::opmodel::{CurveShape, Observable, SpectralModel};
use opdecay::rates::{predict, RateInputs, RateRegime};

fn main() -> opdecay::Result<()> {
    for alpha in [0.5, 1.0, 2.0] {
        let model = SpectralModel::curve(CurveShape::InvPower { alpha }, true)?;
        let curve = run_decay_experiment(&model, &Observable::InvA, 1e2, 1e8, 4)?;
        let env = predict(
            &RateRegime::InfHilbertPoly { alpha },
            &RateInputs::default(),
        )?;
        let rep = compare(
            &curve,
            &env,
            &CompareConfig {
                window: (1e2, 1e8),
                slope_expected: Some(-1.0 / alpha),
                slope_tol: 0.05,
                band_ratio_max: Some(20.0),
            },
        )?;
        println!(
            "alpha = {alpha}: slope {:.4} (expected {:.4}), band [{:.3}, {:.3}], {}",
            rep.slope_fit,
            -1.0 / alpha,
            rep.band_inf,
            rep.band_sup,
            if rep.pass { "pass" } else { "FAIL" }
        );
    }
    Ok(())
}
