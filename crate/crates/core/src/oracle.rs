//! Slow, independent cross-checks for the closed-form routines. Nothing in
//! the production paths calls into this module.

use nalgebra::{Matrix2, Matrix3, Vector3};
use serde::Serialize;

use crate::algebra::{lie_bracket, AlgebraVector, GroupElement};
use crate::error::{Result, Sl2Error};
use crate::geodesic::{control, geodesic_point, GeodesicParams};
use crate::roots::find_root;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegrationReport {
    /// Largest sup-norm deviation from [`geodesic_point`] over all steps.
    pub max_error: f64,
    pub steps: usize,
    /// Step actually used: `t_end / steps`.
    pub step_size: f64,
    /// Largest `|det − 1|` over all steps.
    pub det_drift: f64,
}

/// Classical RK4 on `γ̇ = γ·u(t)` with `u(t) = cos(βt + φ)·p1 + sin(βt + φ)·p2`,
/// integrating the full 2×2 matrix without projecting back onto SL(2).
pub fn integrate_geodesic_ode(
    beta: f64,
    phi: f64,
    t_end: f64,
    step: f64,
) -> Result<(GroupElement, IntegrationReport)> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Sl2Error::InvalidArgument(format!("step must be positive, got {step}")));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Sl2Error::InvalidArgument(format!("t_end must be nonnegative, got {t_end}")));
    }
    if !beta.is_finite() || !phi.is_finite() {
        return Err(Sl2Error::NonFinite("beta/phi"));
    }
    let steps = (t_end / step).ceil() as usize;
    let h = if steps == 0 { 0.0 } else { t_end / steps as f64 };
    let p = GeodesicParams::new(beta, phi, 0.0);
    let rhs = |t: f64, x: &Matrix2<f64>| x * control(&p.at(t)).assemble();

    let mut x = Matrix2::identity();
    let mut max_error: f64 = 0.0;
    let mut det_drift: f64 = 0.0;
    for i in 0..steps {
        let t = i as f64 * h;
        let k1 = rhs(t, &x);
        let k2 = rhs(t + 0.5 * h, &(x + k1 * (0.5 * h)));
        let k3 = rhs(t + 0.5 * h, &(x + k2 * (0.5 * h)));
        let k4 = rhs(t + h, &(x + k3 * h));
        x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);

        let exact = geodesic_point(&p.at((i + 1) as f64 * h));
        max_error = max_error.max((x - exact.matrix()).abs().max());
        det_drift = det_drift.max((x.determinant() - 1.0).abs());
    }
    let report = IntegrationReport { max_error, steps, step_size: h, det_drift };
    Ok((GroupElement::from_matrix_unchecked(x), report))
}

/// `‖[u(t), −βk] − u̇(t)‖∞` with `u̇(t) = β(−sin(βt + φ)·p1 + cos(βt + φ)·p2)`:
/// the costate equation, evaluated through the bracket.
pub fn costate_identity_residual(beta: f64, phi: f64, t: f64) -> f64 {
    let p = GeodesicParams::new(beta, phi, t);
    let u = control(&p);
    let bracket = lie_bracket(&u, &(AlgebraVector::K * -beta));
    let (s, c) = (beta * t + phi).sin_cos();
    let u_dot = AlgebraVector::new(-s, c, 0.0) * beta;
    (bracket - u_dot).sup_norm()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForceConfig {
    pub grid_beta: usize,
    pub grid_t: usize,
    pub beta_max: f64,
    pub t_max: f64,
    /// Endpoint match tolerance, relative to `max(1, ‖g‖∞)`.
    pub match_tol: f64,
    /// Number of grid local minima that get polished.
    pub polish: usize,
}

impl Default for BruteForceConfig {
    fn default() -> Self {
        Self { grid_beta: 401, grid_t: 400, beta_max: 10.0, t_max: 20.0, match_tol: 1e-4, polish: 200 }
    }
}

/// Shortest `t` among geodesics reaching `g` found by a `(β, t)` grid scan,
/// with φ recovered from `g`, followed by Levenberg-Marquardt polishing of
/// the best grid minima. `+∞` if nothing matches.
pub fn brute_force_distance(g: &GroupElement, grid_beta: usize, grid_t: usize, t_max: f64) -> f64 {
    brute_force_distance_with(g, &BruteForceConfig { grid_beta, grid_t, t_max, ..Default::default() })
}

pub fn brute_force_distance_with(g: &GroupElement, cfg: &BruteForceConfig) -> f64 {
    let scale = g.sup_norm().max(1.0);
    let tol = cfg.match_tol * scale;
    if g.sup_dist(&GroupElement::identity()) <= tol {
        return 0.0;
    }
    let (nb, nt) = (cfg.grid_beta.max(2), cfg.grid_t.max(2));
    let beta_at = |i: usize| -cfg.beta_max + 2.0 * cfg.beta_max * i as f64 / (nb - 1) as f64;
    let t_at = |j: usize| cfg.t_max * (j + 1) as f64 / nt as f64;

    let mut cost = vec![0.0; nb * nt];
    let mut phis = vec![0.0; nb * nt];
    for i in 0..nb {
        for j in 0..nt {
            let (beta, t) = (beta_at(i), t_at(j));
            let phi = direction_for(g, beta, t);
            phis[i * nt + j] = phi;
            cost[i * nt + j] = geodesic_point(&GeodesicParams::new(beta, phi, t)).sup_dist(g);
        }
    }

    let mut minima: Vec<(f64, usize)> = Vec::new();
    for i in 0..nb {
        for j in 0..nt {
            let c = cost[i * nt + j];
            let is_min = (-1i64..=1).all(|di| {
                (-1i64..=1).all(|dj| {
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    if (di, dj) == (0, 0) || ni < 0 || nj < 0 || ni >= nb as i64 || nj >= nt as i64 {
                        return true;
                    }
                    c <= cost[ni as usize * nt + nj as usize]
                })
            });
            if is_min {
                minima.push((c, i * nt + j));
            }
        }
    }
    minima.sort_by(|a, b| a.0.total_cmp(&b.0));
    minima.truncate(cfg.polish);

    let mut best = f64::INFINITY;
    for (_, idx) in minima {
        let (i, j) = (idx / nt, idx % nt);
        let start = Vector3::new(beta_at(i), phis[idx], t_at(j));
        let x = levenberg_marquardt(g, start);
        let p = GeodesicParams::new(x[0], x[1], x[2]);
        if geodesic_point(&p).sup_dist(g) <= tol {
            best = best.min(p.t.abs());
        }
    }
    best
}

/// φ making the symmetric trace-free part of `γ(β, φ; t)` point the same way
/// as that of `g`; 0 when either vanishes.
fn direction_for(g: &GroupElement, beta: f64, t: f64) -> f64 {
    let [g11, g12, g21, g22] = g.entries();
    let (y, x) = (g12 + g21, g11 - g22);
    let m = crate::geodesic::mn_coeffs(beta, t).m;
    if m == 0.0 || (x == 0.0 && y == 0.0) {
        return 0.0;
    }
    let (y, x) = if m < 0.0 { (-y, -x) } else { (y, x) };
    y.atan2(x) - 0.5 * beta * t
}

fn entry_residual(g: &GroupElement, x: &Vector3<f64>) -> [f64; 4] {
    let e = geodesic_point(&GeodesicParams::new(x[0], x[1], x[2])).entries();
    let t = g.entries();
    [e[0] - t[0], e[1] - t[1], e[2] - t[2], e[3] - t[3]]
}

fn levenberg_marquardt(g: &GroupElement, start: Vector3<f64>) -> Vector3<f64> {
    let norm2 = |r: &[f64; 4]| r.iter().map(|v| v * v).sum::<f64>();
    let mut x = start;
    let mut r = entry_residual(g, &x);
    let mut cost = norm2(&r);
    let mut mu = 1e-3;
    for _ in 0..200 {
        if cost < 1e-30 {
            break;
        }
        let mut jac = [[0.0; 3]; 4];
        for k in 0..3 {
            let h = 1e-7 * x[k].abs().max(1.0);
            let (mut xp, mut xm) = (x, x);
            xp[k] += h;
            xm[k] -= h;
            let (rp, rm) = (entry_residual(g, &xp), entry_residual(g, &xm));
            for row in 0..4 {
                jac[row][k] = (rp[row] - rm[row]) / (2.0 * h);
            }
        }
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for row in 0..4 {
            for a in 0..3 {
                jtr[a] += jac[row][a] * r[row];
                for b in 0..3 {
                    jtj[(a, b)] += jac[row][a] * jac[row][b];
                }
            }
        }
        let mut improved = false;
        for _ in 0..20 {
            let mut lhs = jtj;
            for a in 0..3 {
                lhs[(a, a)] += mu * (jtj[(a, a)] + 1e-12);
            }
            let Some(delta) = lhs.lu().solve(&(-jtr)) else {
                mu *= 10.0;
                continue;
            };
            let xn = x + delta;
            let rn = entry_residual(g, &xn);
            let cn = norm2(&rn);
            if cn.is_finite() && cn < cost {
                x = xn;
                r = rn;
                cost = cn;
                mu = (mu * 0.3).max(1e-15);
                improved = true;
                break;
            }
            mu *= 10.0;
        }
        if !improved {
            break;
        }
    }
    x
}

/// Cut time of `γ(β, 0; ·)` found by scanning forward in steps of `dt` for
/// the first arrival in `Sim⁻` (a sign change of `g12 − g21` with negative
/// trace) or on SO(2) (the closure time `2π/√(β² − 1)`). `None` if neither
/// happens before `t_max`.
pub fn scan_cut_time(beta: f64, t_max: f64, dt: f64) -> Option<f64> {
    let closure = if beta * beta > 1.0 { 2.0 * std::f64::consts::PI / (beta * beta - 1.0).sqrt() } else { f64::INFINITY };
    let skew = |t: f64| {
        let [_, b, c, _] = geodesic_point(&GeodesicParams::new(beta, 0.0, t)).entries();
        b - c
    };
    let trace = |t: f64| geodesic_point(&GeodesicParams::new(beta, 0.0, t)).trace();
    let limit = t_max.min(closure);
    let mut t0 = dt;
    let mut f0 = skew(t0);
    while t0 < limit {
        let t1 = (t0 + dt).min(limit);
        let f1 = skew(t1);
        if f0.signum() != f1.signum() {
            if let Ok(root) = find_root(skew, t0, t1, 1e-15) {
                if trace(root.x) < 0.0 && root.x < closure {
                    return Some(root.x);
                }
            }
        }
        if t1 >= limit {
            break;
        }
        t0 = t1;
        f0 = f1;
    }
    (closure <= t_max).then_some(closure)
}
