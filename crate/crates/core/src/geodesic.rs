//! Forward geodesic map `(β, φ, t) ↦ γ(β, φ; t)`.
//!
//! Every arclength-parametrized geodesic through the identity is the product
//! of two one-parameter subgroups,
//!
//! ```text
//! γ(β, φ; t) = exp(t(cos φ·p1 + sin φ·p2 + β·k)) · exp(−tβ·k),
//! ```
//!
//! and also has an explicit entrywise form in terms of the coefficients
//! `(m, n)` returned by [`mn_coeffs`]. Both are implemented so that each can
//! check the other.

use nalgebra::Matrix2;
use serde::Serialize;

use crate::algebra::{mat_exp, AlgebraVector, GroupElement};

/// Half-width of the band around `β² = 1` evaluated with the Unit-regime
/// Taylor forms.
pub const UNIT_BAND: f64 = 1e-8;

/// Covector parameters `(β, φ)` and arclength `t` of a geodesic from `e`.
///
/// `φ` is stored unreduced; geodesics whose `φ` differ by a multiple of 2π
/// coincide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeodesicParams {
    pub beta: f64,
    pub phi: f64,
    pub t: f64,
}

impl GeodesicParams {
    pub const fn new(beta: f64, phi: f64, t: f64) -> Self {
        Self { beta, phi, t }
    }

    /// Same geodesic, different time.
    pub fn at(&self, t: f64) -> Self {
        Self { t, ..*self }
    }

    /// The horizontal direction `cos φ·p1 + sin φ·p2 + β·k` generating the
    /// left factor of the product formula.
    pub fn generator(&self) -> AlgebraVector {
        AlgebraVector::new(self.phi.cos(), self.phi.sin(), self.beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MnRegime {
    /// `β² = 1`
    Unit,
    /// `β² < 1`
    Hyperbolic,
    /// `β² > 1`
    Trigonometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MnCoefficients {
    pub m: f64,
    pub n: f64,
    pub regime: MnRegime,
}

fn regime_of(d: f64) -> MnRegime {
    if d.abs() < UNIT_BAND {
        MnRegime::Unit
    } else if d > 0.0 {
        MnRegime::Hyperbolic
    } else {
        MnRegime::Trigonometric
    }
}

/// The coefficients `m(β, t)`, `n(β, t)` of the explicit geodesic.
///
/// With `d = 1 − β²`:
/// `m = sh(t√d/2)/√d, n = ch(t√d/2)` for `d > 0`,
/// `m = sin(t√−d/2)/√−d, n = cos(t√−d/2)` for `d < 0`,
/// `m = t/2, n = 1` at `d = 0`. Inside `|d| < UNIT_BAND` the two-term Taylor
/// expansion about `d = 0` is used.
pub fn mn_coeffs(beta: f64, t: f64) -> MnCoefficients {
    let d = 1.0 - beta * beta;
    let regime = regime_of(d);
    let (m, n) = match regime {
        MnRegime::Unit => {
            let u = d * t * t;
            (
                0.5 * t * (1.0 + u / 24.0 + u * u / 1920.0),
                1.0 + u / 8.0 + u * u / 384.0,
            )
        }
        MnRegime::Hyperbolic => {
            let r = d.sqrt();
            let x = 0.5 * r * t;
            (x.sinh() / r, x.cosh())
        }
        MnRegime::Trigonometric => {
            let r = (-d).sqrt();
            let x = 0.5 * r * t;
            (x.sin() / r, x.cos())
        }
    };
    MnCoefficients { m, n, regime }
}

/// Explicit entrywise geodesic matrix.
pub fn geodesic_point(p: &GeodesicParams) -> GroupElement {
    let MnCoefficients { m, n, .. } = mn_coeffs(p.beta, p.t);
    let y = 0.5 * p.beta * p.t;
    let (sy, cy) = y.sin_cos();
    let (sp, cp) = (y + p.phi).sin_cos();
    let b = p.beta;
    GroupElement::from_matrix_unchecked(Matrix2::new(
        n * cy + m * (cp + b * sy),
        n * sy + m * (sp - b * cy),
        -n * sy + m * (sp + b * cy),
        n * cy + m * (-cp + b * sy),
    ))
}

/// Product of one-parameter subgroups, evaluated with [`mat_exp`].
pub fn geodesic_point_product(p: &GeodesicParams) -> GroupElement {
    let left = mat_exp(&(p.generator() * p.t));
    let right = mat_exp(&(AlgebraVector::K * (-p.t * p.beta)));
    left * right
}

/// The unit horizontal control `cos(βt + φ)·p1 + sin(βt + φ)·p2`, so that
/// `γ̇ = γ·u(t)`.
pub fn control(p: &GeodesicParams) -> AlgebraVector {
    let (s, c) = (p.beta * p.t + p.phi).sin_cos();
    AlgebraVector::new(c, s, 0.0)
}

/// The one-parameter isometry group carrying the geodesic along itself:
/// `Φ(s)(g) = exp(s(cos φ·p1 + sin φ·p2 + β·k)) · g · exp(−sβ·k)`.
/// Only `β` and `φ` of `p` are used.
pub fn orbit_flow(p: &GeodesicParams, s: f64, g: &GroupElement) -> GroupElement {
    let left = mat_exp(&(p.generator() * s));
    let right = mat_exp(&(AlgebraVector::K * (-s * p.beta)));
    &(&left * g) * &right
}
