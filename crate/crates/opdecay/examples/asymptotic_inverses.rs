//! Asymptotic inverses of regularly varying functions: the exact numeric
//! inverse against the closed form s^{1/a} * l#(s)^{1/a}.
//!
//! Run: cargo run --example asymptotic_inverses

use opdecay::numeric::log_spaced;
use opdecay::regvar::{asymptotic_inverse, RegVarFn, SlowlyVaryingExpr};

fn main() -> opdecay::Result<()> {
    let cases = [
        ("s^2", RegVarFn::new(2.0, SlowlyVaryingExpr::constant(1.0)?)),
        (
            "s log s",
            RegVarFn::new(1.0, SlowlyVaryingExpr::log_pow(1.0)?),
        ),
        (
            "s^2 log s",
            RegVarFn::new(2.0, SlowlyVaryingExpr::log_pow(1.0)?),
        ),
    ];
    for (name, f) in cases {
        let inv = asymptotic_inverse(&f)?;
        println!("f(s) = {name}");
        println!(
            "  {:>12} {:>14} {:>14} {:>10}",
            "y", "exact", "asymptotic", "ratio"
        );
        for (y, ratio) in inv.consistency(&log_spaced(1e4, 1e12, 5))? {
            println!(
                "  {y:>12.3e} {:>14.6e} {:>14.6e} {ratio:>10.5}",
                inv.exact(y)?,
                inv.asymptotic(y)?
            );
        }
        println!();
    }
    Ok(())
}
