//! The logarithmic resolvent-growth curve a(u) = 1/log(u): the measured
//! decay of ||T(t) A^{-1}|| collapses onto e^{-2 sqrt t}, while the
//! resolvent profile M(s) is bracketed by [log s, log(s+1)].
//!
//! Run: cargo run --example log_growth

use opdecay::numeric::log_spaced;
use opdecay::opmodel::{
    semigroup_norm, CurveShape, Observable, ProfileKind, ResolventProfile, SpectralModel,
};

fn main() -> opdecay::Result<()> {
    let model = SpectralModel::curve(CurveShape::InvLog, true)?;
    println!(
        "{:>8} {:>14} {:>14} {:>10}",
        "t", "measured", "e^(-2 sqrt t)", "rel diff"
    );
    for t in [16.0, 36.0, 64.0, 100.0f64] {
        let v = semigroup_norm(&model, t, &Observable::InvA)?;
        let oracle = (-2.0 * t.sqrt()).exp();
        println!(
            "{t:>8} {v:>14.6e} {oracle:>14.6e} {:>10.2e}",
            (v - oracle).abs() / oracle
        );
    }
    println!("\nresolvent profile bracket:");
    let prof = ResolventProfile::new(model, ProfileKind::Mcap);
    println!(
        "{:>12} {:>10} {:>10} {:>10}",
        "s", "log s", "M(s)", "log(s+1)"
    );
    for s in log_spaced(2.0, 1e6, 7) {
        println!(
            "{s:>12.3e} {:>10.5} {:>10.5} {:>10.5}",
            s.ln(),
            prof.eval(s)?,
            (s + 1.0).ln()
        );
    }
    Ok(())
}
