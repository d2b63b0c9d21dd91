//! Covering radii, distortion bounds and convexity radii for locally
//! univalent quasiconformal harmonic mappings `f = h + conj(g)` of the unit disk.
//!
//! The crate is organised bottom-up:
//!
//! * [`elliptic`]: `K`, `K'`, the modulus function `φ` and its inverse;
//! * [`mappings`]: the extremal families, dilatation, Jacobian and the
//!   Koebe / affine renormalisations;
//! * [`bounds`]: the closed-form and quadrature-defined bounds on
//!   `d_f/d_h`, growth, order and convexity radii;
//! * [`radii`]: the univalent-disk radius `d_f(z₀)`, analytically for the
//!   extremal families and numerically by ray lifting;
//! * [`verify`]: checks that tie the bounds to measured radii.
//!
//! A guide with worked examples lives in the `book/` directory of the
//! repository; its code blocks are compiled and run as doc tests.

pub mod bounds;
pub mod elliptic;
pub mod error;
pub mod format;
pub mod mappings;
pub mod quadrature;
pub mod radii;
pub mod verify;

pub use error::{Error, Result};
pub use mappings::{ComplexPoint, HarmonicMap};
pub use num_complex::Complex64;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/elliptic.md")]
    pub struct Elliptic;
    #[doc = include_str!("../../../book/src/mappings.md")]
    pub struct Mappings;
    #[doc = include_str!("../../../book/src/bounds.md")]
    pub struct Bounds;
    #[doc = include_str!("../../../book/src/radii.md")]
    pub struct Radii;
    #[doc = include_str!("../../../book/src/convexity.md")]
    pub struct Convexity;
    #[doc = include_str!("../../../book/src/verification.md")]
    pub struct Verification;
}
