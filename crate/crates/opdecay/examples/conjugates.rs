//! de Bruijn conjugates of the catalogued slowly varying functions:
//! numeric conjugates from the exact inverse of s*l(s), closed forms where
//! the catalogue has them, and the defining identity's residual.
//!
//! Run: cargo run --example conjugates

use opdecay::numeric::log_spaced;
use opdecay::regvar::{de_bruijn_conjugate, SlowlyVaryingExpr};

fn main() -> opdecay::Result<()> {
    let cases = [
        ("const(2)", SlowlyVaryingExpr::constant(2.0)?),
        ("logpow(-2)", SlowlyVaryingExpr::log_pow(-2.0)?),
        ("logpow(1)", SlowlyVaryingExpr::log_pow(1.0)?),
        ("logpow(3)", SlowlyVaryingExpr::log_pow(3.0)?),
        ("explogpow(0.4)", SlowlyVaryingExpr::exp_log_pow(0.4)?),
        ("explogpow(0.6)", SlowlyVaryingExpr::exp_log_pow(0.6)?),
    ];
    for (name, ell) in cases {
        let conj = de_bruijn_conjugate(&ell)?;
        println!("l = {name}");
        match conj.closed_form() {
            Some(c) => println!("  closed form: l#(s) ~ {c}"),
            None => println!("  closed form: (not catalogued)"),
        }
        println!(
            "  {:>12} {:>14} {:>14} {:>12}",
            "s", "l#(s)", "num/closed", "identity"
        );
        for s in log_spaced(1e4, 1e12, 5) {
            let k = conj.eval(s)?;
            let ratio = conj
                .closed_form()
                .map(|c| format!("{:.6}", k / c.eval(s)))
                .unwrap_or_else(|| "-".into());
            println!(
                "  {s:>12.3e} {k:>14.6e} {ratio:>14} {:>12.2e}",
                conj.identity_residual(s)?
            );
        }
        println!();
    }
    Ok(())
}
