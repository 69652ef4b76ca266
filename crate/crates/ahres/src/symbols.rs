//! Symbols and Hamilton vector fields of the extended operator.
//!
//! Covectors are `ξ dμ + η dy`, with the warped-product pairing
//! `|η|²_{μ,y} = η²/w(μ)`. Three symbol levels appear:
//!
//! * classical principal symbol `p = 4(1+a₁)μξ² + |η|²`, independent of σ;
//! * full high-energy symbol `p_full = p − 4(1+a₂)σξ − (1+a₃)σ²`;
//! * semiclassical symbol `p_{ħ,z}` — the same expression with `z = σ/|σ|`.
//!
//! The radial set `N*S = {μ = 0, η = 0}` sits at fiber infinity; projective
//! coordinates `(μ, y, ν, η̂)` with `ν = |ξ|⁻¹`, `η̂ = η/|ξ|` and the sign of
//! ξ tracked separately are used there (see [`CompactifiedPhasePoint`]).

use crate::extension::ExtendedCoeffs;
use crate::C64;
use serde::{Deserialize, Serialize};

/// Point of `T*(ℝ_μ × Y)` in the chart `(μ, y, ξ, η)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub mu: f64,
    pub y: f64,
    pub xi: f64,
    /// Scalar dual to `y`; for a sphere cross-section interpret as `|η|_{h₀}`
    /// (the warped dynamics only depends on the magnitude).
    pub eta: f64,
}

impl PhasePoint {
    pub fn new(mu: f64, y: f64, xi: f64, eta: f64) -> Self {
        Self { mu, y, xi, eta }
    }

    pub fn is_finite(&self) -> bool {
        self.mu.is_finite() && self.y.is_finite() && self.xi.is_finite() && self.eta.is_finite()
    }

    /// Projective fiber coordinates; requires `ξ ≠ 0`.
    pub fn compactify(&self) -> CompactifiedPhasePoint {
        let a = self.xi.abs();
        CompactifiedPhasePoint {
            mu: self.mu,
            y: self.y,
            nu: 1.0 / a,
            eta_hat: self.eta / a,
            sgn_xi: if self.xi >= 0.0 { 1 } else { -1 },
        }
    }
}

/// Fiber-compactified point `(μ, y, ν, η̂)` with `ν = |ξ|⁻¹ ≥ 0`; `ν = 0` is
/// fiber infinity. `sgn_xi` keeps the component information lost in `|ξ|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompactifiedPhasePoint {
    pub mu: f64,
    pub y: f64,
    pub nu: f64,
    pub eta_hat: f64,
    pub sgn_xi: i8,
}

impl CompactifiedPhasePoint {
    pub fn new(mu: f64, y: f64, nu: f64, eta_hat: f64, sgn_xi: i8) -> Self {
        Self { mu, y, nu, eta_hat, sgn_xi }
    }

    /// Back to affine coordinates; only valid for `ν > 0`.
    pub fn decompactify(&self) -> Option<PhasePoint> {
        if self.nu <= 0.0 {
            return None;
        }
        let xi = f64::from(self.sgn_xi) / self.nu;
        Some(PhasePoint { mu: self.mu, y: self.y, xi, eta: self.eta_hat / self.nu })
    }
}

/// High-energy bookkeeping `σ = z/h`, `h = |σ|⁻¹`, `|z| = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralParam {
    pub sigma: C64,
    pub h: f64,
    pub z: C64,
}

impl SpectralParam {
    pub fn new(sigma: C64) -> Option<Self> {
        let a = sigma.norm();
        if a == 0.0 {
            return None;
        }
        Some(Self { sigma, h: 1.0 / a, z: sigma / a })
    }
}

/// Classical principal symbol `p = 4(1+a₁)μξ² + η²/w`.
pub fn eval_p(coeffs: &ExtendedCoeffs, pt: &PhasePoint) -> f64 {
    4.0 * (1.0 + coeffs.a1(pt.mu)) * pt.mu * pt.xi * pt.xi
        + pt.eta * pt.eta / coeffs.model.w(pt.mu)
}

/// Full high-energy symbol `p − 4(1+a₂)σξ − (1+a₃)σ²`; real for σ real.
pub fn eval_p_full(coeffs: &ExtendedCoeffs, sigma: C64, pt: &PhasePoint) -> C64 {
    C64::new(eval_p(coeffs, pt), 0.0)
        - 4.0 * (1.0 + coeffs.a2(pt.mu)) * sigma * pt.xi
        - (1.0 + coeffs.a3(pt.mu)) * sigma * sigma
}

/// Semiclassical symbol split into real and imaginary part. The imaginary
/// part is identically `−2 Im z (2(1+a₂)ξ + (1+a₃)Re z)`.
pub fn eval_p_semi(coeffs: &ExtendedCoeffs, z: C64, pt: &PhasePoint) -> (f64, f64) {
    let v = eval_p_full(coeffs, z, pt);
    (v.re, v.im)
}

/// Hypersurface function `2(1+a₂)ξ + (1+a₃)Re z` separating the two
/// semiclassical characteristic components.
pub fn semi_splitting(coeffs: &ExtendedCoeffs, z: C64, pt: &PhasePoint) -> f64 {
    2.0 * (1.0 + coeffs.a2(pt.mu)) * pt.xi + (1.0 + coeffs.a3(pt.mu)) * z.re
}

/// Components of a Hamilton vector field in the `(μ, y, ξ, η)` chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonField<T> {
    pub d_mu: T,
    pub d_y: T,
    pub d_xi: T,
    pub d_eta: T,
}

/// `H_p` of the classical symbol: `μ̇ = 8(1+a₁)μξ`, `ẏ = 2η/w`,
/// `ξ̇ = −(4(1+a₁+μa₁′)ξ² + ∂_μ(η²/w))`, `η̇ = 0`.
pub fn hamilton_classical(coeffs: &ExtendedCoeffs, pt: &PhasePoint) -> HamiltonField<f64> {
    let m = &coeffs.model;
    let (w, dw) = (m.w(pt.mu), m.w_prime(pt.mu));
    let a1 = coeffs.a1(pt.mu);
    let eta2 = pt.eta * pt.eta;
    HamiltonField {
        d_mu: 8.0 * (1.0 + a1) * pt.mu * pt.xi,
        d_y: 2.0 * pt.eta / w,
        d_xi: -(4.0 * (1.0 + a1 + pt.mu * coeffs.a1_prime(pt.mu)) * pt.xi * pt.xi
            - eta2 * dw / (w * w)),
        d_eta: 0.0,
    }
}

/// `H_{p_full}` with the spectral parameter kept; complex components for
/// complex σ (used by the finite-difference consistency checks).
pub fn hamilton_full(coeffs: &ExtendedCoeffs, sigma: C64, pt: &PhasePoint) -> HamiltonField<C64> {
    let m = &coeffs.model;
    let (w, dw) = (m.w(pt.mu), m.w_prime(pt.mu));
    let a1 = coeffs.a1(pt.mu);
    let eta2 = pt.eta * pt.eta;
    HamiltonField {
        d_mu: C64::new(8.0 * (1.0 + a1) * pt.mu * pt.xi, 0.0)
            - 4.0 * (1.0 + coeffs.a2(pt.mu)) * sigma,
        d_y: C64::new(2.0 * pt.eta / w, 0.0),
        d_xi: -(C64::new(
            4.0 * (1.0 + a1 + pt.mu * coeffs.a1_prime(pt.mu)) * pt.xi * pt.xi
                - eta2 * dw / (w * w),
            0.0,
        ) - 4.0 * coeffs.a2_prime(pt.mu) * sigma * pt.xi
            + coeffs.a3_prime(pt.mu) * sigma * sigma),
        d_eta: C64::new(0.0, 0.0),
    }
}

/// Semiclassical Hamilton field `H_{p_{ħ,z}}` for real `z` (null
/// bicharacteristics only exist for z real; complex z is elliptic).
pub fn hamilton_semiclassical(
    coeffs: &ExtendedCoeffs,
    z: f64,
    pt: &PhasePoint,
) -> HamiltonField<f64> {
    let m = &coeffs.model;
    let (w, dw) = (m.w(pt.mu), m.w_prime(pt.mu));
    let a1 = coeffs.a1(pt.mu);
    let eta2 = pt.eta * pt.eta;
    HamiltonField {
        d_mu: 4.0 * (2.0 * (1.0 + a1) * pt.mu * pt.xi - (1.0 + coeffs.a2(pt.mu)) * z),
        d_y: 2.0 * pt.eta / w,
        d_xi: -(4.0 * (1.0 + a1 + pt.mu * coeffs.a1_prime(pt.mu)) * pt.xi * pt.xi
            - 4.0 * coeffs.a2_prime(pt.mu) * z * pt.xi
            + coeffs.a3_prime(pt.mu) * z * z
            - eta2 * dw / (w * w)),
        d_eta: 0.0,
    }
}

/// `(ρ̃, ρ₀)`: `ρ̃ = ν` and the quadratic defining function
/// `ρ₀ = |η̂|² + p̂²` of the radial sets, with `p̂ = ν²p = 4(1+a₁)μ + |η̂|²`.
pub fn radial_quantities(coeffs: &ExtendedCoeffs, cpt: &CompactifiedPhasePoint) -> (f64, f64) {
    let w = coeffs.model.w(cpt.mu);
    let eta_hat_sq = cpt.eta_hat * cpt.eta_hat / w;
    let p_hat = 4.0 * (1.0 + coeffs.a1(cpt.mu)) * cpt.mu + eta_hat_sq;
    (cpt.nu, eta_hat_sq + p_hat * p_hat)
}

/// Classification of a phase point against the (semi)classical
/// characteristic set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CharComponent {
    /// Classical characteristic set, `ξ > 0` side.
    SigmaPlus,
    /// Classical characteristic set, `ξ < 0` side.
    SigmaMinus,
    /// Semiclassical characteristic set, positive side of the splitting
    /// hypersurface `2(1+a₂)ξ + (1+a₃)Re z = 0`.
    SemiPlus,
    SemiMinus,
    NotCharacteristic,
}

/// Homogeneity-normalized membership tolerance.
pub const CHAR_TOL: f64 = 1e-9;

/// Classifies `pt`: against `p` when `z` is `None` (split by `sgn ξ`),
/// against `p_{ħ,z}` otherwise (split by the separating hypersurface).
///
/// A point within tolerance of both the characteristic set and the
/// semiclassical splitting hypersurface is impossible (the real part is
/// bounded below there); it is reported as `NotCharacteristic` after an
/// internal consistency `debug_assert`.
pub fn char_component(coeffs: &ExtendedCoeffs, pt: &PhasePoint, z: Option<C64>) -> CharComponent {
    let scale = 1.0 + pt.xi * pt.xi + pt.eta * pt.eta;
    match z {
        None => {
            let p = eval_p(coeffs, pt);
            if p.abs() / scale >= CHAR_TOL {
                return CharComponent::NotCharacteristic;
            }
            if pt.xi > 0.0 {
                CharComponent::SigmaPlus
            } else if pt.xi < 0.0 {
                CharComponent::SigmaMinus
            } else {
                // ξ = 0 forces p = η²/w ≥ 0 with equality only at the zero
                // section, which is not characteristic.
                CharComponent::NotCharacteristic
            }
        }
        Some(z) => {
            let v = eval_p_full(coeffs, z, pt);
            if v.norm() / scale >= CHAR_TOL {
                return CharComponent::NotCharacteristic;
            }
            let split = semi_splitting(coeffs, z, pt);
            if split > 0.0 {
                CharComponent::SemiPlus
            } else if split < 0.0 {
                CharComponent::SemiMinus
            } else {
                debug_assert!(false, "characteristic point on the splitting hypersurface");
                CharComponent::NotCharacteristic
            }
        }
    }
}
