//! Decay rates of operator semigroups on spectral models.
//!
//! The crate has three layers:
//!
//! * a calculus of slowly and regularly varying functions ([`regvar`]) and of
//!   Stieltjes / complete Bernstein functions ([`cbf`]), which together supply
//!   de Bruijn conjugates, asymptotic inverses and Karamata-type asymptotics;
//! * exact operator calculus on quasi-multiplication models ([`opmodel`]):
//!   resolvent norms, semigroup norms of scalar observables and cancellation
//!   suprema, all computed as suprema over the spectrum;
//! * the prediction and verification layer ([`rates`], [`harness`]): decay
//!   envelopes for every supported resolvent-growth regime, measured decay
//!   curves, log-log slope fits and inequality audits.
//!
//! The [`cli`] module exposes the whole pipeline through JSON experiment
//! specs; the `opdecay` binary is a thin wrapper around it.  The `examples/`
//! directory has one runnable example per major capability.

pub mod cbf;
pub mod cli;
pub mod error;
pub mod harness;
pub mod numeric;
pub mod opmodel;
pub mod rates;
pub mod regvar;

pub use error::{Error, Result};
