//! Iterative refinement of regularly varying decay rates:
//! m_{n+1}(t) = l(t^{1/a} m_n(t)^{1/a}) from m_0 = 1, stabilizing at the
//! optimal slowly varying correction.
//!
//! Run: cargo run --example refinement

use opdecay::rates::{iterate_refinement, ProfileFn};
use opdecay::regvar::SlowlyVaryingExpr;
use std::sync::Arc;

fn main() -> opdecay::Result<()> {
    let one: ProfileFn = Arc::new(|_| Ok(1.0));
    for (name, ell) in [
        ("const(1)", SlowlyVaryingExpr::constant(1.0)?),
        ("logpow(2)", SlowlyVaryingExpr::log_pow(2.0)?),
        ("explogpow(0.55)", SlowlyVaryingExpr::exp_log_pow(0.55)?),
    ] {
        let r = iterate_refinement(1.0, &ell, one.clone(), 8, 0.75)?;
        println!(
            "l = {name}: stabilized after {} iteration(s)",
            r.stabilized_at
        );
        for (n, step) in r.steps.iter().enumerate() {
            let top = step.per_decade.last().map(|p| p.1).unwrap_or(f64::NAN);
            println!(
                "  step {n}: top-decade |m_(n+1)/m_n - 1| = {top:.4}  ({})",
                if step.stabilized {
                    "stabilized"
                } else {
                    "continue"
                }
            );
        }
        let t: f64 = 1e12;
        println!("  envelope at t = 1e12: {:.6e}\n", r.envelope.eval(t)?);
    }
    Ok(())
}
