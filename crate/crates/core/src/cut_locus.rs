//! Cut time, cut locus and conjugate set at the identity.
//!
//! The cut locus of `e` is `Sim⁻ ∪ (SO(2) − {e})`. Geodesics with
//! `|β| ≥ 2/√3` are cut when they close up onto a rotation, at
//! `T = 2π/√(β² − 1)`; all others (with `β ≠ 0`) are cut on first reaching
//! `Sim⁻`, which happens at the root of a transcendental equation inside an
//! explicitly known bracket.
//!
//! The equations are solved in the pole-free form
//! `n·sin(βT/2) − βm·cos(βT/2) = 0`, normalized by `√(n² + β²m²)` so the
//! residual is the sine of an angle.

use std::f64::consts::PI;

use serde::Serialize;

use crate::algebra::{m_invariant, GroupElement};
use crate::error::{Result, Sl2Error};
use crate::geodesic::{geodesic_point, mn_coeffs, GeodesicParams};
use crate::roots::{find_root, DEFAULT_REL_TOL};

/// `3/(2√2)`: the local minimum of the cut time.
pub const BETA_LOCAL_MIN: f64 = 1.060_660_171_779_821_2;

/// `2/√3`: the local maximum of the cut time; from here on geodesics are cut
/// on SO(2).
pub const BETA_LOCAL_MAX: f64 = 1.154_700_538_379_251_5;

/// Dispatch band around the closed-form thresholds.
pub const THRESHOLD_BAND: f64 = 1e-12;

/// Distance kept from the tangent poles that bound the brackets.
pub const POLE_MARGIN: f64 = 1e-9;

/// Default tolerance of [`is_in_cut_locus`].
pub const CUT_LOCUS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CutRegime {
    /// `β = 0`: never cut.
    Straight,
    /// `|β| ≥ 2/√3`
    R1,
    /// `|β| = 1`
    R2,
    /// `0 < |β| < 1`
    R3,
    /// `|β| = 3/(2√2)`
    R4,
    /// `3/(2√2) < |β| < 2/√3`
    R5,
    /// `1 < |β| < 3/(2√2)`
    R6,
}

impl CutRegime {
    pub fn label(&self) -> &'static str {
        match self {
            CutRegime::Straight => "straight",
            CutRegime::R1 => "R1",
            CutRegime::R2 => "R2",
            CutRegime::R3 => "R3",
            CutRegime::R4 => "R4",
            CutRegime::R5 => "R5",
            CutRegime::R6 => "R6",
        }
    }

    /// Regime of `|β|` without solving anything.
    pub fn of(beta: f64) -> Self {
        let b = beta.abs();
        if b == 0.0 {
            CutRegime::Straight
        } else if b >= BETA_LOCAL_MAX - THRESHOLD_BAND {
            CutRegime::R1
        } else if (b - BETA_LOCAL_MIN).abs() < THRESHOLD_BAND {
            CutRegime::R4
        } else if (b - 1.0).abs() < THRESHOLD_BAND {
            CutRegime::R2
        } else if b < 1.0 {
            CutRegime::R3
        } else if b > BETA_LOCAL_MIN {
            CutRegime::R5
        } else {
            CutRegime::R6
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutTimeResult {
    /// Cut time; `+∞` for `β = 0`.
    pub t: f64,
    pub regime: CutRegime,
    /// Analytic bracket in `t` that contains the root, for root-found regimes.
    pub bracket: Option<(f64, f64)>,
    /// Normalized residual of the defining equation at `t`.
    pub residual: f64,
}

/// Interval in which the cut time must lie, for root-found regimes.
pub fn regime_interval(beta: f64) -> Option<(f64, f64)> {
    let b = beta.abs();
    match CutRegime::of(beta) {
        CutRegime::R2 => Some((2.0 * PI, 3.0 * PI)),
        CutRegime::R3 => Some((2.0 * PI / b, 3.0 * PI / b)),
        CutRegime::R5 => Some((3.0 * PI / b, 2.0 * PI * (b + (b * b - 1.0).sqrt()))),
        CutRegime::R6 => Some((2.0 * PI * (b + (b * b - 1.0).sqrt()), 3.0 * PI / b)),
        _ => None,
    }
}

/// Cut time `T(|β|)` of the geodesics `γ(β, φ; ·)`, which does not depend on φ.
pub fn cut_time(beta: f64) -> CutTimeResult {
    let b = beta.abs();
    let regime = CutRegime::of(beta);
    let closed = |t: f64| CutTimeResult { t, regime, bracket: None, residual: 0.0 };
    match regime {
        CutRegime::Straight => closed(f64::INFINITY),
        CutRegime::R1 => closed(2.0 * PI / (b * b - 1.0).sqrt()),
        CutRegime::R4 => closed(2.0 * 2f64.sqrt() * PI),
        CutRegime::R2 => {
            // tan y = y on (π, 3π/2), y = T/2.
            let f = |y: f64| (y.sin() - y * y.cos()) / (1.0 + y * y).sqrt();
            let (y, residual) = solve_in(f, PI, 1.5 * PI);
            CutTimeResult { t: 2.0 * y, regime, bracket: regime_interval(beta), residual }
        }
        CutRegime::R3 => {
            // tan y = k·th(y/k) on (π, 3π/2), y = |β|T/2, k = |β|/√(1 − β²).
            let k = b / (1.0 - b * b).sqrt();
            let f = |y: f64| {
                let q = k * (y / k).tanh();
                (y.sin() - q * y.cos()) / (1.0 + q * q).sqrt()
            };
            let (y, residual) = solve_in(f, PI, 1.5 * PI);
            CutTimeResult { t: 2.0 * y / b, regime, bracket: regime_interval(beta), residual }
        }
        CutRegime::R5 | CutRegime::R6 => {
            // tan kx = k·tan x, x = T√(β² − 1)/2, k = |β|/√(β² − 1).
            let s = (b * b - 1.0).sqrt();
            let k = b / s;
            let f = |x: f64| {
                let (sx, cx) = x.sin_cos();
                let (sk, ck) = (k * x).sin_cos();
                (cx * sk - k * sx * ck) / cx.hypot(k * sx)
            };
            let (lo, hi) = if regime == CutRegime::R5 {
                (1.5 * PI / k, PI / (k - 1.0))
            } else {
                (PI / (k - 1.0), 1.5 * PI / k)
            };
            let (x, residual) = solve_in(f, lo, hi);
            CutTimeResult { t: 2.0 * x / s, regime, bracket: regime_interval(beta), residual }
        }
    }
}

/// Root of `f` inside `(lo, hi)`; returns the abscissa and `|f|` there.
fn solve_in<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> (f64, f64) {
    let margin = POLE_MARGIN.min(0.25 * (hi - lo));
    for (a, b) in [(lo + margin, hi - margin), (lo, hi)] {
        if let Ok(root) = find_root(&f, a, b, DEFAULT_REL_TOL) {
            return (root.x, root.residual.abs());
        }
    }
    // Degenerate bracket next to a threshold: the midpoint is as good as it gets.
    let mid = 0.5 * (lo + hi);
    (mid, f(mid).abs())
}

/// The two scalar conditions for `γ(β, ·; t)` to lie in Sim⁻:
/// `(n·sin(βt/2) − βm·cos(βt/2), n·cos(βt/2) + βm·sin(βt/2))`.
/// The first must vanish and the second be negative.
pub fn sim_minus_condition(beta: f64, t: f64) -> (f64, f64) {
    let c = mn_coeffs(beta, t);
    let y = 0.5 * beta * t;
    let (sy, cy) = y.sin_cos();
    (c.n * sy - beta * c.m * cy, c.n * cy + beta * c.m * sy)
}

/// Which part of the cut locus `C(e) = K(e) ∪ S₁(e)` a point belongs to,
/// with `K(e) = Sim⁻` and `S₁(e) = SO(2) − {e}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CutLocusWitness {
    K,
    S1,
    /// Only `−e`.
    Both,
    No,
}

impl CutLocusWitness {
    pub fn is_member(&self) -> bool {
        !matches!(self, CutLocusWitness::No)
    }
}

pub fn is_in_cut_locus(g: &GroupElement) -> CutLocusWitness {
    is_in_cut_locus_with(g, CUT_LOCUS_TOL)
}

/// Membership test with tolerance `tol`, scaled by `max(1, ‖g‖∞)` for the
/// symmetry and trace conditions.
pub fn is_in_cut_locus_with(g: &GroupElement, tol: f64) -> CutLocusWitness {
    let scale = g.sup_norm().max(1.0);
    let in_k = g.is_symmetric_within(tol) && g.trace() <= -2.0 + tol * scale;
    let in_s1 = m_invariant(g) <= tol && g.sup_dist(&GroupElement::identity()) > tol;
    match (in_k, in_s1) {
        (true, true) => CutLocusWitness::Both,
        (true, false) => CutLocusWitness::K,
        (false, true) => CutLocusWitness::S1,
        (false, false) => CutLocusWitness::No,
    }
}

/// `γ(β, φ; T(β))`.
pub fn cut_point(beta: f64, phi: f64) -> Result<GroupElement> {
    if !beta.is_finite() || !phi.is_finite() {
        return Err(Sl2Error::NonFinite("beta/phi"));
    }
    if beta == 0.0 {
        return Err(Sl2Error::InvalidArgument(
            "beta = 0 geodesics are never cut".into(),
        ));
    }
    let t = cut_time(beta).t;
    Ok(geodesic_point(&GeodesicParams::new(beta, phi, t)))
}

/// Kind of conjugate point along a geodesic with `β² > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ConjugateKind {
    /// `t = 2π/√(β² − 1)`, where the geodesic closes onto SO(2) and the
    /// endpoint stops depending on φ.
    FirstClosure,
    /// Root `x > π` of `tan x = x`, with `x = t√(β² − 1)/2`.
    Tangent { x: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConjugateTime {
    pub t: f64,
    pub kind: ConjugateKind,
}

/// Conjugate times in `(0, t_max]`: the first closure time followed by the
/// `tan x = x` family. Empty for `β² ≤ 1`.
pub fn conjugate_points(beta: f64, t_max: f64) -> Result<Vec<ConjugateTime>> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Sl2Error::InvalidArgument(format!("t_max must be positive, got {t_max}")));
    }
    if !beta.is_finite() {
        return Err(Sl2Error::NonFinite("beta"));
    }
    let mut out = Vec::new();
    let d = beta * beta - 1.0;
    if d <= 0.0 {
        return Ok(out);
    }
    let s = d.sqrt();
    let closure = 2.0 * PI / s;
    if closure <= t_max {
        out.push(ConjugateTime { t: closure, kind: ConjugateKind::FirstClosure });
    }
    let x_max = 0.5 * t_max * s;
    for j in 0usize.. {
        let lo = (2 * j + 1) as f64 * PI / 2.0;
        if lo > x_max {
            break;
        }
        let hi = lo + PI;
        let f = |x: f64| x.sin() - x * x.cos();
        let root = find_root(f, lo + POLE_MARGIN, hi - POLE_MARGIN, 1e-16)?;
        let x = polish_tan_fixed_point(root.x);
        if x <= PI {
            continue;
        }
        let t = 2.0 * x / s;
        if t <= t_max {
            out.push(ConjugateTime { t, kind: ConjugateKind::Tangent { x } });
        }
    }
    Ok(out)
}

/// Conjugate times as plain numbers; see [`conjugate_points`].
pub fn conjugate_times(beta: f64, t_max: f64) -> Result<Vec<f64>> {
    Ok(conjugate_points(beta, t_max)?.into_iter().map(|c| c.t).collect())
}

/// Among the floats next to `x`, the one minimizing `|tan x − x|`.
fn polish_tan_fixed_point(x: f64) -> f64 {
    let mut best = x;
    let mut best_r = (x.tan() - x).abs();
    let mut lo = x;
    let mut hi = x;
    for _ in 0..4 {
        lo = f64::from_bits(lo.to_bits() - 1);
        hi = f64::from_bits(hi.to_bits() + 1);
        for c in [lo, hi] {
            let r = (c.tan() - c).abs();
            if r < best_r {
                best = c;
                best_r = r;
            }
        }
    }
    best
}

/// One row of the tabulated cut-time curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutCurveRow {
    pub beta: f64,
    pub t: f64,
    pub regime: CutRegime,
    pub residual: f64,
}

/// `T(|β|)` on `samples` evenly spaced points of `[beta_min, beta_max]`,
/// optionally merged with the regime thresholds that fall inside the range.
pub fn cut_curve(
    beta_min: f64,
    beta_max: f64,
    samples: usize,
    with_landmarks: bool,
) -> Result<Vec<CutCurveRow>> {
    if !(beta_min.is_finite() && beta_max.is_finite()) || beta_min > beta_max {
        return Err(Sl2Error::InvalidArgument(format!(
            "invalid beta range [{beta_min}, {beta_max}]"
        )));
    }
    if samples < 1 || (samples == 1 && beta_min != beta_max) {
        return Err(Sl2Error::InvalidArgument("need at least two samples".into()));
    }
    let mut betas: Vec<f64> = if samples == 1 {
        vec![beta_min]
    } else {
        let h = (beta_max - beta_min) / (samples - 1) as f64;
        (0..samples).map(|i| beta_min + h * i as f64).collect()
    };
    if with_landmarks {
        for b in [1.0, BETA_LOCAL_MIN, BETA_LOCAL_MAX] {
            for v in [b, -b] {
                if v >= beta_min && v <= beta_max && !betas.contains(&v) {
                    betas.push(v);
                }
            }
        }
        betas.sort_by(|a, b| a.total_cmp(b));
    }
    Ok(betas
        .into_iter()
        .map(|beta| {
            let r = cut_time(beta);
            CutCurveRow { beta, t: r.t, regime: r.regime, residual: r.residual }
        })
        .collect())
}
