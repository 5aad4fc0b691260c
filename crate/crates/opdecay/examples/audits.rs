//! The inequality audits on finite quasi-multiplication models: moment,
//! Bernstein bound, transfer bound and the interpolation converse.
//!
//! Run: cargo run --example audits

use opdecay::harness::{
    bernstein_audit, discretize_curve, interpol2_audit, moment_audit, transfer_audit,
    transfer_catalogue, BERNSTEIN_FROZEN_CONSTANT,
};
use opdecay::numeric::log_spaced;
use opdecay::opmodel::{CurveShape, SpectralModel};

fn main() -> opdecay::Result<()> {
    let m = moment_audit(64, 1000, 7, 1.0);
    println!(
        "moment:    {} trials, {} violations, worst constant {:.6}",
        m.checked, m.violations, m.worst_constant
    );

    let b = bernstein_audit(32, 150, 11, BERNSTEIN_FROZEN_CONSTANT)?;
    println!(
        "bernstein: {} checks, {} violations, worst constant {:.6} (frozen C = {})",
        b.checked, b.violations, b.worst_constant, BERNSTEIN_FROZEN_CONSTANT
    );

    let grid = log_spaced(1.0, 1e6, 9);
    for (name, model, obs) in transfer_catalogue()? {
        let out = transfer_audit(&model, &obs, &grid)?;
        println!(
            "transfer:  {name}: {} violations, sup t||T(t)B||/S = {:.4} (bound 2)",
            out.violations, out.worst_constant
        );
    }

    let base = SpectralModel::curve(CurveShape::InvPower { alpha: 2.0 }, true)?;
    let model = discretize_curve(&base, 1e-4, 1e8, 1024)?;
    let f = opdecay::cli::sqrt_cbf()?;
    let out = interpol2_audit(&model, &f, 1.0, &log_spaced(1e2, 1e6, 9), 1.0)?;
    println!(
        "interpol2: {} violations with c = 1, worst empirical constant {:.3e}",
        out.violations, out.worst_constant
    );
    Ok(())
}
