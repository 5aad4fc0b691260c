//! Predicted decay envelopes across regimes, from a model's own resolvent
//! profiles: the general Banach-space upper bound, the lower bound, and
//! the regularly varying Hilbert-space rates.
//!
//! Run: cargo run --example envelopes

use opdecay::cli::profiles_from_model;
use opdecay::numeric::log_spaced;
use opdecay::opmodel::{CurveShape, SpectralModel};
use opdecay::rates::{predict, RateRegime};
use opdecay::regvar::SlowlyVaryingExpr;

fn main() -> opdecay::Result<()> {
    // M(s) ~ s (log s)^{-2}: slightly slower than linear growth
    let ell = SlowlyVaryingExpr::log_pow(2.0)?;
    let model = SpectralModel::curve(
        CurveShape::RegVarInf {
            alpha: 1.0,
            ell: ell.clone(),
        },
        true,
    )?;
    let inputs = profiles_from_model(&model);
    let lower = predict(&RateRegime::InfLower { c: 1.0, big_c: 1.0 }, &inputs)?;
    let upper = predict(&RateRegime::InfUpperBanach { c: 1.0 }, &inputs)?;
    let hilbert = predict(
        &RateRegime::InfHilbertRegVarSlower { alpha: 1.0, ell },
        &inputs,
    )?;
    println!(
        "{:>10} {:>14} {:>14} {:>14}",
        "t", "lower", "hilbert", "banach upper"
    );
    let start = lower
        .validity_start
        .max(upper.validity_start)
        .max(hilbert.validity_start)
        .max(1e3);
    for t in log_spaced(start, start * 1e4, 9) {
        println!(
            "{t:>10.2e} {:>14.5e} {:>14.5e} {:>14.5e}",
            lower.eval(t)?,
            hilbert.eval(t)?,
            upper.eval(t)?
        );
    }
    Ok(())
}
