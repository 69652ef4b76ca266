//! Resonances of even asymptotically hyperbolic metrics.
//!
//! The library computes scattering resonances (poles of the meromorphically
//! continued resolvent of `Δ_g − ((n−1)/2)² − σ²`) for conformally compact
//! metrics `g = (dx² + h(x²))/x²` whose boundary family `h` is even in the
//! defining function `x`. The route is the boundary-extension method:
//!
//! 1. switch to the even coordinate `μ = x²` and conjugate the shifted
//!    Laplacian by `μ^{−iσ/2+(n+1)/4}`, strip a factor of `μ` from both
//!    sides, and conjugate once more by `(1+μ)^{iσ/4}` ([`extension`]);
//! 2. the resulting operator `P_σ` continues smoothly across `μ = 0` into a
//!    Lorentzian region `μ < 0`, where all of the nontrivial bicharacteristic
//!    dynamics lives ([`symbols`], [`flow`]);
//! 3. cap the extended region with a complex absorbing operator `Q_σ`
//!    ([`absorption`]), discretize `P_σ − iQ_σ` per angular mode by spectral
//!    collocation ([`grid`], [`pencil`]), and find resonances as the σ-values
//!    where the family is singular ([`solver`]).
//!
//! Exact model spaces (the hyperbolic plane and 3-space, and the hyperbolic
//! cylinder) have explicitly known resonance sets and serve as oracles for
//! the whole pipeline; see the `book/` guide for the narrative version.
//!
//! # Conventions
//!
//! `D_μ = −i ∂_μ` throughout, so the symbol of `D_μ` is `ξ` and second-order
//! terms like `4μD_μ²` discretize as `−4μ ∂_μ²`. Covectors are written
//! `ξ dμ + η dy`. The spectral parameter lives in the σ-plane; the physical
//! half-plane is `Im σ ≫ 0` and resonances sit in `Im σ < 0`.

pub mod absorption;
pub mod config;
pub mod error;
pub mod extension;
pub mod flow;
pub mod geometry;
pub mod grid;
pub mod linalg;
pub mod pencil;
pub mod report;
pub mod solver;
pub mod symbols;

mod book;

pub use error::{AhError, Result};

/// Library version embedded in output artifacts.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;
