//! Karamata Tauberian asymptotics of associated Stieltjes transforms:
//! S_g(l) ~ Gamma(sigma) Gamma(2-sigma) l^{-sigma} ell(l) for
//! g(s) = s^{1-sigma} ell(s), with the constant checked against the
//! Beta-integral identity (1-sigma) pi / sin(pi sigma).
//!
//! Run: cargo run --example karamata

use opdecay::cbf::{karamata_audit, karamata_constant, AsymptoticEnd};
use opdecay::numeric::log_spaced;
use opdecay::regvar::SlowlyVaryingExpr;

fn main() -> opdecay::Result<()> {
    let one = SlowlyVaryingExpr::constant(1.0)?;
    println!("pure powers, quadrature vs analytic oracle at lambda = 1e4:");
    for sigma in [0.25, 0.5, 0.75] {
        let grid = log_spaced(1e1, 1e4, 13);
        let rep = karamata_audit(&one, sigma, AsymptoticEnd::Infinity, &grid, 1e-6)?;
        let (_, ratio) = rep.trace.last().unwrap();
        println!(
            "  sigma = {sigma}: constant {:.10}, |ratio-1| = {:.2e}  ({})",
            karamata_constant(sigma)?,
            (ratio - 1.0f64).abs(),
            if rep.pass { "pass" } else { "FAIL" }
        );
    }
    println!("\nlogarithmic correction, sigma = 1/2, ell = log:");
    let ell = SlowlyVaryingExpr::log_pow(1.0)?;
    let grid = log_spaced(1e2, 1e8, 13);
    let rep = karamata_audit(&ell, 0.5, AsymptoticEnd::Infinity, &grid, 0.2)?;
    println!("  {:>12} {:>10} {:>12}", "lambda", "ratio", "2/ln(lambda)");
    for (lam, ratio) in rep.trace.iter().step_by(2) {
        println!(
            "  {lam:>12.2e} {ratio:>10.5} {:>12.5}",
            1.0 + 2.0 / lam.ln()
        );
    }
    Ok(())
}
