//! Even conformally compact metric models.
//!
//! A model is the data of `g = (dx² + h)/x²` near the boundary with
//! `h = w(μ)·h₀` a warped family over the cross-section, `μ = x²` the even
//! boundary defining function. All model data are functions of `μ`, so
//! evenness holds by construction; [`validate_evenness`] exists for custom
//! input supplied in the odd coordinate `x`.
//!
//! The built-in models are normalized so that explicit resonance sets are
//! available as oracles:
//!
//! * hyperbolic plane: `w(μ) = (1 − μ/4)²`, `n = 2`, polar center at `μ = 4`
//!   (geodesic polar coordinates `μ = 4e^{−2r}`);
//! * hyperbolic 3-space: same warp with a round 2-sphere cross-section;
//! * hyperbolic cylinder of neck length `ℓ`: `w(μ) = ℓ̃²(1 + μ/4)²` with
//!   `ℓ̃ = ℓ/2π`; the neck `r = 0` sits at `μ = 4` and the full surface is
//!   recovered from the fundamental half by the neck reflection.

use crate::error::{AhError, Result};
use serde::{Deserialize, Serialize};

/// Boundary cross-section `Y` carrying the reference metric `h₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossSection {
    /// Unit circle; modes are Fourier modes `m ∈ ℤ` with eigenvalue `m²`.
    Circle,
    /// Round unit sphere of the given dimension; modes are spherical
    /// harmonics `ℓ ≥ 0` with eigenvalue `ℓ(ℓ + dim − 1)`.
    RoundSphere { dim: u32 },
}

/// What the right end of the μ-interval is geometrically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RightEnd {
    /// Polar center of a disk-type model: the warp vanishes quadratically and
    /// the mode ODE has a regular singular point there.
    PolarCenter,
    /// Neck of the cylinder: regular point; the full surface is the double of
    /// the computational domain under the reflection fixing the neck.
    NeckReflection,
    /// Artificial wall with a homogeneous Dirichlet condition (funnel model).
    DirichletWall,
    /// Nothing special; custom models end here.
    Regular,
}

/// Warp profile `w(μ)` of the boundary metric family `h = w·h₀`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Warp {
    /// `(1 − μ/4)²` — hyperbolic plane / space in the disk normalization.
    Disk,
    /// `ℓ̃²(1 + μ/4)²` — funnel end / hyperbolic cylinder.
    Neck { ell_tilde: f64 },
    /// Polynomial in μ, coefficients in increasing degree.
    Polynomial(Vec<f64>),
}

impl Warp {
    pub fn eval(&self, mu: f64) -> f64 {
        match self {
            Warp::Disk => {
                let t = 1.0 - mu / 4.0;
                t * t
            }
            Warp::Neck { ell_tilde } => {
                let t = 1.0 + mu / 4.0;
                ell_tilde * ell_tilde * t * t
            }
            Warp::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * mu + ck),
        }
    }

    pub fn eval_prime(&self, mu: f64) -> f64 {
        match self {
            Warp::Disk => -0.5 * (1.0 - mu / 4.0),
            Warp::Neck { ell_tilde } => 0.5 * ell_tilde * ell_tilde * (1.0 + mu / 4.0),
            Warp::Polynomial(c) => {
                let mut acc = 0.0;
                for k in (1..c.len()).rev() {
                    acc = acc * mu + c[k] * k as f64;
                }
                acc
            }
        }
    }
}

/// An even asymptotically hyperbolic metric model on the extended interval
/// `[μ_left, μ_right]`, `μ_left < 0 < μ_right`.
///
/// Immutable after construction; all evaluation methods are pure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvenMetricModel {
    /// Dimension of the space (2 for surfaces).
    pub n: u32,
    pub cross_section: CrossSection,
    pub warp: Warp,
    pub mu_left: f64,
    pub mu_right: f64,
    pub right_end: RightEnd,
    /// Whether the model carries trapped geodesics (cylinder neck).
    pub trapping: bool,
    /// Human-readable name used in artifacts.
    pub name: String,
}

impl EvenMetricModel {
    /// Hyperbolic plane `H²` in the disk normalization, center at `μ = 4`.
    pub fn hyperbolic_plane() -> Self {
        Self {
            n: 2,
            cross_section: CrossSection::Circle,
            warp: Warp::Disk,
            mu_left: -0.5,
            mu_right: 4.0,
            right_end: RightEnd::PolarCenter,
            trapping: false,
            name: "hyperbolic-plane".into(),
        }
    }

    /// Hyperbolic 3-space `H³`, center at `μ = 4`.
    pub fn hyperbolic_space_3() -> Self {
        Self {
            n: 3,
            cross_section: CrossSection::RoundSphere { dim: 2 },
            warp: Warp::Disk,
            mu_left: -0.5,
            mu_right: 4.0,
            right_end: RightEnd::PolarCenter,
            trapping: false,
            name: "hyperbolic-space-3".into(),
        }
    }

    /// Hyperbolic cylinder with closed geodesic of length `ell`. The domain
    /// is the fundamental half `μ ∈ [μ_left, 4]`; the full surface is its
    /// double under the neck reflection, so resonance runs solve both the
    /// even (Neumann) and odd (Dirichlet) sector at the neck and merge.
    pub fn cylinder(ell: f64) -> Self {
        Self {
            n: 2,
            cross_section: CrossSection::Circle,
            warp: Warp::Neck { ell_tilde: ell / (2.0 * std::f64::consts::PI) },
            mu_left: -0.5,
            mu_right: 4.0,
            right_end: RightEnd::NeckReflection,
            trapping: true,
            name: "cylinder".into(),
        }
    }

    /// Single funnel end closed off by a Dirichlet wall at the neck.
    pub fn funnel(ell: f64) -> Self {
        Self {
            right_end: RightEnd::DirichletWall,
            trapping: false,
            name: "funnel".into(),
            ..Self::cylinder(ell)
        }
    }

    /// Custom warped model. `warp` must stay positive on the interval.
    pub fn custom(
        n: u32,
        cross_section: CrossSection,
        warp: Warp,
        mu_left: f64,
        mu_right: f64,
    ) -> Result<Self> {
        let model = Self {
            n,
            cross_section,
            warp,
            mu_left,
            mu_right,
            right_end: RightEnd::Regular,
            trapping: false,
            name: "custom".into(),
        };
        model.validate()?;
        Ok(model)
    }

    /// Structural checks: dimension vs cross-section, interval ordering, the
    /// `(1+μ)`-conjugation bound `μ_left > −1`, and positivity of the warp
    /// sampled on the interval (excluding a polar center where it vanishes).
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(AhError::Validation("dimension n must be >= 2".into()));
        }
        let ydim = match self.cross_section {
            CrossSection::Circle => 1,
            CrossSection::RoundSphere { dim } => dim,
        };
        if ydim != self.n - 1 {
            return Err(AhError::Validation(format!(
                "cross-section dimension {} incompatible with n = {}",
                ydim, self.n
            )));
        }
        if !(self.mu_left < 0.0 && self.mu_right > 0.0) {
            return Err(AhError::Validation(
                "interval must satisfy mu_left < 0 < mu_right".into(),
            ));
        }
        if self.mu_left <= -1.0 {
            return Err(AhError::Validation(
                "mu_left must be > -1 (the (1+mu) conjugation weight degenerates)".into(),
            ));
        }
        let interior_cap = if self.right_end == RightEnd::PolarCenter {
            self.mu_right - 1e-6
        } else {
            self.mu_right
        };
        let samples = 200;
        for k in 0..=samples {
            let mu = self.mu_left + (interior_cap - self.mu_left) * k as f64 / samples as f64;
            let w = self.warp.eval(mu);
            if !w.is_finite() {
                return Err(AhError::NonFinite(format!("warp at mu = {mu}")));
            }
            if w <= 0.0 {
                return Err(AhError::Validation(format!(
                    "warp must be positive on the extended interval; w({mu}) = {w}"
                )));
            }
        }
        Ok(())
    }

    pub fn contains(&self, mu: f64) -> bool {
        mu >= self.mu_left && mu <= self.mu_right
    }

    fn check_domain(&self, mu: f64) -> Result<()> {
        if !self.contains(mu) {
            return Err(AhError::Domain(format!(
                "mu = {mu} outside [{}, {}]",
                self.mu_left, self.mu_right
            )));
        }
        Ok(())
    }

    pub fn w(&self, mu: f64) -> f64 {
        self.warp.eval(mu)
    }

    pub fn w_prime(&self, mu: f64) -> f64 {
        self.warp.eval_prime(mu)
    }

    /// First-order coefficient `γ(μ)` of the Laplacian written as
    /// `Δ_g = (xD_x)² + i(n−1 + x²γ)(xD_x) + x²Δ_h`.
    ///
    /// For the warped family `h = w(μ)h₀` this identity forces
    /// `γ = −(n−1)·w′/w = −2 ∂_μ log √det h`; the sign is pinned by the exact
    /// model: on `H²`, `γ(μ) = 2/(4−μ)` reproduces the `coth` term of the
    /// radial Laplacian. Has a simple pole at a polar center.
    pub fn gamma(&self, mu: f64) -> Result<f64> {
        self.check_domain(mu)?;
        let w = self.w(mu);
        Ok(-((self.n - 1) as f64) * self.w_prime(mu) / w)
    }

    /// Cross-section Laplacian eigenvalue of the given mode (with respect to
    /// the reference metric `h₀`).
    pub fn mode_eigenvalue(&self, mode_index: u32) -> f64 {
        match self.cross_section {
            CrossSection::Circle => (mode_index as f64) * (mode_index as f64),
            CrossSection::RoundSphere { dim } => {
                let l = mode_index as f64;
                l * (l + dim as f64 - 1.0)
            }
        }
    }

    /// Scalar multiplying `u` in the mode-reduced `Δ_h`, i.e. `λ_mode/w(μ)`.
    pub fn mode_laplacian_coeff(&self, mode_index: u32, mu: f64) -> Result<f64> {
        self.check_domain(mu)?;
        Ok(self.mode_eigenvalue(mode_index) / self.w(mu))
    }
}

/// Outcome of the odd-coefficient scan of a custom boundary family `h(x)`.
#[derive(Debug, Clone, Serialize)]
pub struct EvennessReport {
    pub pass: bool,
    /// Estimated Taylor coefficients of `x¹` and `x³` at `x = 0`.
    pub odd_coeffs: [f64; 2],
    /// Estimated Taylor coefficients of `x⁰` and `x²`.
    pub even_coeffs: [f64; 2],
    /// Scale the odd coefficients were compared against.
    pub even_scale: f64,
    pub tolerance: f64,
}

/// Estimates the first two odd Taylor coefficients of `h` at `0` by symmetric
/// finite differences and passes iff both are below `tolerance` relative to
/// the even ones.
pub fn validate_evenness<F: Fn(f64) -> f64>(h: F, tolerance: f64) -> Result<EvennessReport> {
    let x0 = 0.1;
    let eval = |x: f64| -> Result<f64> {
        let v = h(x);
        if !v.is_finite() {
            return Err(AhError::NonFinite(format!("h({x})")));
        }
        Ok(v)
    };
    let (hp, hm) = (eval(x0)?, eval(-x0)?);
    let (hp2, hm2) = (eval(x0 / 2.0)?, eval(-x0 / 2.0)?);
    let h0 = eval(0.0)?;

    let odd1 = 0.5 * (hp - hm);
    let odd2 = 0.5 * (hp2 - hm2);
    // odd(x) = c1 x + c3 x³ on the two stencils
    let c3 = (odd1 - 2.0 * odd2) / (x0.powi(3) * (1.0 - 0.25));
    let c1 = (odd1 - c3 * x0.powi(3)) / x0;

    let ev1 = (0.5 * (hp + hm) - h0) / (x0 * x0);
    let ev2 = (0.5 * (hp2 + hm2) - h0) / (x0 * x0 / 4.0);
    let c2 = (4.0 * ev2 - ev1) / 3.0;

    let even_scale = h0.abs().max(c2.abs()).max(f64::MIN_POSITIVE);
    let pass = c1.abs() <= tolerance * even_scale && c3.abs() <= tolerance * even_scale;
    Ok(EvennessReport {
        pass,
        odd_coeffs: [c1, c3],
        even_coeffs: [h0, c2],
        even_scale,
        tolerance,
    })
}
