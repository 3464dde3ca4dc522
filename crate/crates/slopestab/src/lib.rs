//! Exact-arithmetic slope stability of polarizations on products of
//! curves C x C, and of generic polarized surfaces given their
//! intersection numbers.
//!
//! The crate decides slope (in)stability, bounds Seshadri constants, and
//! evaluates the J-flow ampleness criterion, emitting self-contained
//! certificates whose every number is an exact rational or quadratic
//! surd.  See the `examples/` directory for one runnable example per
//! capability; the `slopestab` binary exposes the same functionality as
//! `analyze`, `scan`, `jflow`, `slope`, and `verify` subcommands.

pub mod cert;
pub mod cli;
pub mod exactnum;
pub mod family;
pub mod jflow;
pub mod nslattice;
pub mod slope;

pub use cert::{build_certificate, parse_certificate, verify_certificate, Certificate};
pub use exactnum::{Rational, Surd};
pub use family::{AmpleVerdict, CurveFamily, SeshadriInterval};
pub use jflow::{alpha_ample, alpha_class, correction_search, t_star, JFlowReport};
pub use nslattice::{Genus, NSClass, PlaneCoords};
pub use slope::{
    destabilizes, mu_c, mu_c_integral, mu_variety, product_mu, Decision, HilbertCoeffs,
    SurfaceSlopeData, Verdict,
};
