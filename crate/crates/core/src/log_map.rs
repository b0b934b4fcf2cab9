//! Logarithm of the sub-Riemannian exponential: minimizing geodesics from
//! `e` to a target and the distance `δ(e, g)`.
//!
//! A geodesic `γ(β, φ; t)` ends at `g` iff `m(β, t) = m(g)` and the pair
//! `((g11 + g22)/2, (g12 − g21)/2)` equals
//! `(n·cos(βt/2) + βm·sin(βt/2), n·sin(βt/2) − βm·cos(βt/2))`; φ then follows
//! from the symmetric trace-free part. On arcs that can still be minimizing
//! (`m ≥ 0`, first arch) the first condition fixes `t` as a function of `β`,
//! so the search runs over a single curve parameter `λ`:
//!
//! - `|λ| ≤ 1`: `β = λ`, `t = 2·asinh(M√(1 − β²))/√(1 − β²)`;
//! - `|λ| > 1`: `w = |λ| − 1`, `√(β² − 1) = sin w / M`, `t = 2wM / sin w`,
//!
//! with `M = m(g)`. Sign changes of the rotation mismatch along `λ` are the
//! candidate geodesics; those reaching `g` no later than their cut time are
//! minimizers.

use std::f64::consts::PI;

use serde::Serialize;

use crate::algebra::{m_invariant, wrap_angle, GroupElement};
use crate::cut_locus::{cut_time, BETA_LOCAL_MAX};
use crate::error::{Result, Sl2Error};
use crate::geodesic::{geodesic_point, mn_coeffs, GeodesicParams};
use crate::roots::{find_root, minimize_golden};

/// Default endpoint match tolerance, relative to `max(1, ‖g‖∞)`.
pub const MATCH_TOL: f64 = 1e-8;

/// Two parameter triples are the same geodesic when `β` and `φ mod 2π` agree
/// this closely.
pub const DEDUP_TOL: f64 = 1e-7;

/// Below this `m(g)`, a target is treated as a rotation.
pub const ROTATION_TOL: f64 = 1e-12;

/// Uniform grid size on `β ∈ [−1, 1]`.
const UNIT_GRID: usize = 401;
/// Uniform grid size in `w` on each `|β| > 1` branch.
const W_GRID: usize = 200;
/// Log-spaced `β − 1` samples on each `|β| > 1` branch.
const LOG_GRID: usize = 100;
/// Neighbouring grid values of the mismatch are refined until they differ
/// by less than this.
const REFINE_STEP: f64 = 0.5;
const MAX_REFINE_DEPTH: u32 = 40;

/// Largest cut time of geodesics with `|β| > 1`, plus margin.
fn t_cap() -> f64 {
    cut_time(BETA_LOCAL_MAX).t * (1.0 + 1e-6)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EndpointResidual {
    /// `m(β, t) − m(g)`
    pub r_sym: f64,
    /// Angle mismatch in `(−π, π]`.
    pub r_rot: f64,
}

/// Residuals of the endpoint system for `(β, t)`; both vanish iff some φ
/// gives `γ(β, φ; t) = g`.
pub fn endpoint_equations(g: &GroupElement, beta: f64, t: f64) -> EndpointResidual {
    let c = mn_coeffs(beta, t);
    let [g11, g12, g21, g22] = g.entries();
    let (p, q) = (0.5 * (g11 + g22), 0.5 * (g12 - g21));
    EndpointResidual {
        r_sym: c.m - m_invariant(g),
        r_rot: rotation_mismatch(p, q, beta, t, c.m, c.n),
    }
}

fn rotation_mismatch(p: f64, q: f64, beta: f64, t: f64, m: f64, n: f64) -> f64 {
    wrap_angle(q.atan2(p) - wrap_angle(0.5 * beta * t) + (beta * m).atan2(n))
}

/// Direction angle of the geodesic with parameters `(β, t)` reaching `g`,
/// reduced to `(−π, π]`.
pub fn recover_phi(g: &GroupElement, beta: f64, t: f64) -> Result<f64> {
    let m = mn_coeffs(beta, t).m;
    let scale = g.sup_norm().max(1.0);
    if m.abs() <= ROTATION_TOL * scale {
        return Err(Sl2Error::UndeterminedDirection { m });
    }
    let [g11, g12, g21, g22] = g.entries();
    let (y, x) = ((g12 + g21) / (2.0 * m), (g11 - g22) / (2.0 * m));
    Ok(wrap_angle(y.atan2(x) - wrap_angle(0.5 * beta * t)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Multiplicity {
    Unique,
    /// Two or more minimizers, reaching `g` at their common cut time.
    CutPair,
    /// `g ∈ SO(2) − {e}`: a circle of minimizers, one per φ.
    S1Circle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogResult {
    /// Minimizers, each with `t` equal to the distance. For
    /// [`Multiplicity::S1Circle`] only the `φ = 0` representatives are
    /// listed.
    pub solutions: Vec<GeodesicParams>,
    pub distance: f64,
    pub multiplicity: Multiplicity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogOptions {
    /// Endpoint match tolerance, relative to `max(1, ‖g‖∞)`.
    pub match_tol: f64,
}

impl Default for LogOptions {
    fn default() -> Self {
        Self { match_tol: MATCH_TOL }
    }
}

pub fn sr_log(g: &GroupElement) -> Result<LogResult> {
    sr_log_with(g, &LogOptions::default())
}

pub fn sr_distance(g: &GroupElement) -> Result<f64> {
    Ok(sr_log(g)?.distance)
}

/// [`sr_log`] with fast paths for `e`, rotations and `Sim⁺`, falling back to
/// [`sr_log_general`].
pub fn sr_log_with(g: &GroupElement, opts: &LogOptions) -> Result<LogResult> {
    let m = m_invariant(g);
    let scale = g.sup_norm().max(1.0);
    if m <= ROTATION_TOL * scale {
        let [g11, _, g21, _] = g.entries();
        let theta = g21.atan2(g11);
        if theta.abs() <= ROTATION_TOL {
            return Ok(LogResult {
                solutions: vec![GeodesicParams::new(0.0, 0.0, 0.0)],
                distance: 0.0,
                multiplicity: Multiplicity::Unique,
            });
        }
        return Ok(rotation_log(theta));
    }
    if g.is_symmetric_within(ROTATION_TOL) && g.trace() > 0.0 {
        let [g11, g12, g21, g22] = g.entries();
        let t = 2.0 * m.asinh();
        let phi = (0.5 * (g12 + g21)).atan2(0.5 * (g11 - g22));
        return Ok(LogResult {
            solutions: vec![GeodesicParams::new(0.0, phi, t)],
            distance: t,
            multiplicity: Multiplicity::Unique,
        });
    }
    sr_log_general(g, opts)
}

/// Minimizers to the rotation `[[cos θ, −sin θ], [sin θ, cos θ]]`, `θ ≠ 0`.
fn rotation_log(theta: f64) -> LogResult {
    let xi = PI + theta.abs();
    let r = (xi * xi - PI * PI).sqrt();
    let b = xi / r;
    let t = 2.0 * r;
    let betas: Vec<f64> = if PI - theta.abs() <= ROTATION_TOL {
        vec![b, -b]
    } else {
        vec![-theta.signum() * b]
    };
    LogResult {
        solutions: betas.into_iter().map(|beta| GeodesicParams::new(beta, 0.0, t)).collect(),
        distance: t,
        multiplicity: Multiplicity::S1Circle,
    }
}

/// Point `(β, t)` of the curve `m(β, t) = m_g`.
fn curve_point(lambda: f64, m_g: f64) -> (f64, f64) {
    let a = lambda.abs();
    if a <= 1.0 {
        let beta = lambda;
        let d = (1.0 - beta) * (1.0 + beta);
        let z = m_g * d.sqrt();
        let ratio = if z < 1e-8 { 1.0 - z * z / 6.0 } else { z.asinh() / z };
        (beta, 2.0 * m_g * ratio)
    } else {
        let w = a - 1.0;
        let s = w.sin() / m_g;
        let beta = lambda.signum() * s.hypot(1.0);
        (beta, 2.0 * m_g * w / w.sin())
    }
}

/// Largest `w` with `2wM / sin w ≤ t_cap`, if any.
fn w_limit(m_g: f64) -> Option<f64> {
    let c = 2.0 * m_g / t_cap();
    if c >= 1.0 {
        return None;
    }
    find_root(|w: f64| w.sin() - c * w, 1e-9, PI, 1e-15).ok().map(|r| r.x)
}

fn search_grid(m_g: f64) -> Vec<f64> {
    let mut lambdas: Vec<f64> = (0..UNIT_GRID)
        .map(|i| -1.0 + 2.0 * i as f64 / (UNIT_GRID - 1) as f64)
        .collect();
    if let Some(w_max) = w_limit(m_g) {
        let mut ws: Vec<f64> = (1..=W_GRID).map(|i| w_max * i as f64 / W_GRID as f64).collect();
        let b_max = (1.0 + 1.0 / (m_g * m_g)).sqrt();
        if b_max - 1.0 > 1e-6 {
            let (l0, l1) = (1e-6f64.ln(), (b_max - 1.0).ln());
            for i in 0..LOG_GRID {
                let beta = 1.0 + (l0 + (l1 - l0) * i as f64 / (LOG_GRID - 1) as f64).exp();
                let ms = (m_g * (beta * beta - 1.0).sqrt()).min(1.0);
                let w = ms.asin();
                ws.extend([w, PI - w].into_iter().filter(|&w| w > 0.0 && w <= w_max));
            }
        }
        for w in ws {
            lambdas.push(1.0 + w);
            lambdas.push(-1.0 - w);
        }
    }
    lambdas.sort_by(|a, b| a.total_cmp(b));
    lambdas.dedup();
    lambdas
}

/// General solver, without fast paths. Requires `m(g) > 0`.
pub fn sr_log_general(g: &GroupElement, opts: &LogOptions) -> Result<LogResult> {
    let m_g = m_invariant(g);
    if !(m_g > 0.0) {
        return Err(Sl2Error::InvalidArgument(
            "general log solver needs a target off SO(2)".into(),
        ));
    }
    let [g11, g12, g21, g22] = g.entries();
    let (p, q) = (0.5 * (g11 + g22), 0.5 * (g12 - g21));
    let residual = |lambda: f64| {
        let (beta, t) = curve_point(lambda, m_g);
        let c = mn_coeffs(beta, t);
        rotation_mismatch(p, q, beta, t, c.m, c.n)
    };

    let mut samples: Vec<(f64, f64)> = Vec::new();
    let grid = search_grid(m_g);
    let mut prev = (grid[0], residual(grid[0]));
    samples.push(prev);
    for &l in &grid[1..] {
        let next = (l, residual(l));
        refine(&residual, prev, next, 0, &mut samples);
        samples.push(next);
        prev = next;
    }

    let mut seeds: Vec<f64> = Vec::new();
    for w in samples.windows(2) {
        let ((la, ra), (lb, rb)) = (w[0], w[1]);
        if ra == 0.0 {
            seeds.push(la);
        } else if ra.signum() != rb.signum() && rb != 0.0 && (ra - rb).abs() < PI {
            if let Ok(root) = find_root(&residual, la, lb, 1e-16) {
                seeds.push(root.x);
            }
        }
    }
    if let Some(&(l, r)) = samples.last() {
        if r == 0.0 {
            seeds.push(l);
        }
    }
    // Tangential zeros do not change sign.
    for w in samples.windows(3) {
        let (a, b, c) = (w[0], w[1], w[2]);
        if b.1.abs() < a.1.abs() && b.1.abs() < c.1.abs() && b.1.abs() < 0.1 && a.1.signum() == c.1.signum() {
            let (l, _) = minimize_golden(|l| residual(l).abs(), a.0, c.0, 1e-15);
            seeds.push(l);
        }
    }

    let scale = g.sup_norm().max(1.0);
    let tol = opts.match_tol * scale;
    let mut best_residual = f64::INFINITY;
    let mut candidates: Vec<GeodesicParams> = Vec::new();
    for lambda in seeds {
        let (beta, t) = curve_point(lambda, m_g);
        let Ok(phi) = recover_phi(g, beta, t) else { continue };
        let params = GeodesicParams::new(beta, phi, t);
        let err = geodesic_point(&params).sup_dist(g);
        best_residual = best_residual.min(err);
        if err > tol {
            continue;
        }
        let cut = cut_time(beta).t;
        if t > cut + MATCH_TOL * cut.max(1.0) {
            continue;
        }
        candidates.push(params);
    }
    if candidates.is_empty() {
        return Err(Sl2Error::SearchFailure { best_residual });
    }

    let distance = candidates.iter().map(|c| c.t).fold(f64::INFINITY, f64::min);
    let mut solutions: Vec<GeodesicParams> = Vec::new();
    for c in candidates {
        if c.t - distance > MATCH_TOL * distance.max(1.0) {
            continue;
        }
        if !solutions.iter().any(|s| same_geodesic(s, &c)) {
            solutions.push(c);
        }
    }
    solutions.sort_by(|a, b| a.beta.total_cmp(&b.beta));
    let multiplicity = if solutions.len() > 1 { Multiplicity::CutPair } else { Multiplicity::Unique };
    Ok(LogResult { solutions, distance, multiplicity })
}

fn same_geodesic(a: &GeodesicParams, b: &GeodesicParams) -> bool {
    (a.beta - b.beta).abs() <= DEDUP_TOL && wrap_angle(a.phi - b.phi).abs() <= DEDUP_TOL
}

/// Inserts midpoints between `a` and `b` until neighbouring residuals are
/// within [`REFINE_STEP`] of each other (modulo 2π).
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: (f64, f64),
    b: (f64, f64),
    depth: u32,
    out: &mut Vec<(f64, f64)>,
) {
    if depth >= MAX_REFINE_DEPTH || wrap_angle(b.1 - a.1).abs() <= REFINE_STEP {
        return;
    }
    let lm = 0.5 * (a.0 + b.0);
    if lm <= a.0 || lm >= b.0 {
        return;
    }
    let mid = (lm, f(lm));
    refine(f, a, mid, depth + 1, out);
    out.push(mid);
    refine(f, mid, b, depth + 1, out);
}
