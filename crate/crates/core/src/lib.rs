//! Exact-arithmetic kernels for large 2-adic symplectic images.
//!
//! The crate is organised by subject:
//!
//! * [`f2sym`] symplectic spaces over F_p, transvections, theta characteristics;
//! * [`spmod`] matrix groups over Z/p^n, congruence layers and group closure;
//! * [`padic`] fixed-precision towers of unramified and Eisenstein extensions;
//! * [`honda`] finite Honda systems of rank p^4 and their exponent-p^2 layers;
//! * [`points`] fields of points and conductor exponents;
//! * [`genus2`] the x−T Kummer map for genus-2 Jacobians over 2-adic fields;
//! * [`rational`] discriminants, S_m certificates and the global group counts.
//!
//! [`checks`] bundles the numbered acceptance checks into [`Report`] values.

pub mod checks;
pub mod error;
pub mod f2sym;
pub mod genus2;
pub mod honda;
pub mod padic;
pub mod points;
pub mod rational;
pub mod report;
pub mod spmod;

pub use error::{Error, Result};
pub use f2sym::{PermModel, Sign, SpLieElem, SympSpace, ThetaChar};
pub use honda::{ExtClassP, FiniteHondaSystem, HondaParams};
pub use padic::{KummerGroup, PadicElem, TowerRing};
pub use report::Report;
pub use spmod::{ClosureResult, ModMatrix};

/// Default base precision in p-adic digits.
pub const DEFAULT_PREC: u32 = 32;

/// Base precision, honouring the `GLAB_PREC` environment variable.
pub fn default_prec() -> u32 {
    std::env::var("GLAB_PREC")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n: &u32| n >= 8)
        .unwrap_or(DEFAULT_PREC)
}
