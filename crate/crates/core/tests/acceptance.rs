//! Acceptance criteria. Runs every criterion at its stated tolerance, prints
//! one PASS/FAIL line each and exits nonzero if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sl2_geodesics::algebra::{conjugate_by_rotation, m_invariant, sim_plus, GroupElement};
use sl2_geodesics::cut_locus::{
    conjugate_points, cut_point, cut_time, regime_interval, ConjugateKind, CutRegime, BETA_LOCAL_MAX,
    BETA_LOCAL_MIN,
};
use sl2_geodesics::geodesic::{geodesic_point, geodesic_point_product, orbit_flow, GeodesicParams};
use sl2_geodesics::log_map::{sr_distance, sr_log, Multiplicity};
use sl2_geodesics::oracle::{brute_force_distance, integrate_geodesic_ode};
use sl2_geodesics::verify::exp_jacobian_det;

const SEED: u64 = 20_240_611;

struct Outcome {
    ok: bool,
    detail: String,
}

fn rng(k: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED.wrapping_add(k))
}

fn signed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let v = rng.gen_range(lo..hi);
    if rng.gen::<bool>() {
        v
    } else {
        -v
    }
}

fn angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-PI..PI)
}

fn within(elapsed: Duration, secs: f64) -> bool {
    elapsed.as_secs_f64() < secs
}

fn closed_form_consistency() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(1);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let p = GeodesicParams::new(rng.gen_range(-5.0..=5.0), angle(&mut rng), rng.gen_range(-10.0..=10.0));
        worst = worst.max(geodesic_point(&p).sup_dist(&geodesic_point_product(&p)));
    }
    let el = start.elapsed();
    Outcome {
        ok: worst <= 1e-11 && within(el, 1.0),
        detail: format!("10000 samples, worst {worst:.3e} (≤ 1e-11), {:.3}s (< 1s)", el.as_secs_f64()),
    }
}

fn ode_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(2);
    let (mut worst, mut drift, mut errors) = (0.0f64, 0.0f64, 0);
    for _ in 0..100 {
        let (beta, phi, t) = (rng.gen_range(-5.0..=5.0), angle(&mut rng), rng.gen_range(0.0..=5.0));
        match integrate_geodesic_ode(beta, phi, t, 1e-4) {
            Ok((_, rep)) => {
                worst = worst.max(rep.max_error);
                drift = drift.max(rep.det_drift);
            }
            Err(_) => errors += 1,
        }
    }
    let el = start.elapsed();
    Outcome {
        ok: errors == 0 && worst <= 1e-7 && drift <= 1e-9 && within(el, 30.0),
        detail: format!(
            "100 runs at step 1e-4, max error {worst:.3e} (≤ 1e-7), det drift {drift:.3e} (≤ 1e-9), {:.2}s (< 30s)",
            el.as_secs_f64()
        ),
    }
}

fn cut_time_anchors() -> Outcome {
    let r4 = (cut_time(BETA_LOCAL_MIN).t - 2.0 * 2f64.sqrt() * PI).abs();
    let r1 = (cut_time(BETA_LOCAL_MAX).t - 2.0 * 3f64.sqrt() * PI).abs();
    let decimals = (cut_time(BETA_LOCAL_MIN).t - 8.885_765_876_3).abs().max((cut_time(BETA_LOCAL_MAX).t - 10.882_796_185_4).abs());
    let mut rng = rng(3);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let beta = signed(&mut rng, BETA_LOCAL_MAX, 50.0);
        worst = worst.max((cut_time(beta).t - 2.0 * PI / (beta * beta - 1.0).sqrt()).abs());
    }
    Outcome {
        ok: r4 <= 1e-10 && r1 <= 1e-10 && worst <= 1e-12 && decimals <= 1e-10,
        detail: format!(
            "T(3/(2√2)) err {r4:.1e}, T(2/√3) err {r1:.1e} (≤ 1e-10; vs 10-decimal values {decimals:.1e}), R1 formula worst {worst:.1e} over 50 (≤ 1e-12)"
        ),
    }
}

fn cut_time_brackets_and_monotonicity() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(4);
    let mut notes = Vec::new();
    let mut ok = true;

    let regimes: [(CutRegime, f64, f64); 4] = [
        (CutRegime::R2, 1.0, 1.0),
        (CutRegime::R3, 1e-3, 1.0 - 1e-9),
        (CutRegime::R5, BETA_LOCAL_MIN + 1e-9, BETA_LOCAL_MAX - 1e-9),
        (CutRegime::R6, 1.0 + 1e-9, BETA_LOCAL_MIN - 1e-9),
    ];
    for (regime, lo, hi) in regimes {
        let mut inside = 0;
        for _ in 0..500 {
            let b = if lo == hi { lo } else { rng.gen_range(lo..hi) };
            let beta = if rng.gen::<bool>() { b } else { -b };
            let r = cut_time(beta);
            if let Some((a, z)) = regime_interval(beta) {
                if r.regime == regime && r.t > a && r.t < z {
                    inside += 1;
                }
            }
        }
        ok &= inside == 500;
        notes.push(format!("{} {inside}/500", regime.label()));
    }

    let segments: [(&str, f64, f64, f64); 3] = [
        ("(0.05, 3/(2√2)]", 0.05, BETA_LOCAL_MIN, -1.0),
        ("[3/(2√2), 2/√3]", BETA_LOCAL_MIN, BETA_LOCAL_MAX, 1.0),
        ("[2/√3, 20]", BETA_LOCAL_MAX, 20.0, -1.0),
    ];
    for (name, lo, hi, dir) in segments {
        let ts: Vec<f64> = (0..2000).map(|j| cut_time(lo + (hi - lo) * j as f64 / 1999.0).t).collect();
        let strict = ts.windows(2).filter(|w| dir * (w[1] - w[0]) > 0.0).count();
        ok &= strict == 1999;
        notes.push(format!("{name} {strict}/1999 strict"));
    }

    for (name, b0) in [("1", 1.0), ("3/(2√2)", BETA_LOCAL_MIN), ("2/√3", BETA_LOCAL_MAX)] {
        let t0 = cut_time(b0).t;
        let jump = (cut_time(b0 - 1e-6).t - t0).abs().max((cut_time(b0 + 1e-6).t - t0).abs());
        let pass = jump <= 1e-3;
        ok &= pass;
        notes.push(format!("jump at {name} {jump:.2e}{}", if pass { "" } else { " (> 1e-3)" }));
    }
    let el = start.elapsed();
    ok &= within(el, 10.0);
    notes.push(format!("{:.2}s (< 10s)", el.as_secs_f64()));
    Outcome { ok, detail: notes.join(", ") }
}

fn cut_locus_landing() -> Outcome {
    let mut rng = rng(5);
    let mut landed = 0;
    for _ in 0..200 {
        let beta = signed(&mut rng, 0.05, 5.0);
        let Ok(g) = cut_point(beta, angle(&mut rng)) else { continue };
        let scale = g.sup_norm().max(1.0);
        let in_k = g.is_symmetric_within(1e-7) && g.trace() <= -2.0 + 1e-7 * scale;
        let in_s1 = m_invariant(&g) <= 1e-7 && g.sup_dist(&GroupElement::identity()) > 1e-7;
        if in_k || in_s1 {
            landed += 1;
        }
    }
    let mut worst: f64 = 0.0;
    for beta in [BETA_LOCAL_MAX, -BETA_LOCAL_MAX] {
        for _ in 0..20 {
            let g = cut_point(beta, angle(&mut rng)).expect("β ≠ 0");
            worst = worst.max(g.sup_dist(&GroupElement::identity().neg()));
        }
    }
    Outcome {
        ok: landed == 200 && worst <= 1e-10,
        detail: format!("{landed}/200 endpoints in the cut locus (1e-7), β = ±2/√3 to −e worst {worst:.1e} (≤ 1e-10)"),
    }
}

fn log_round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(6);
    let (mut worst, mut failures) = (0.0f64, 0);
    for _ in 0..1000 {
        let beta = signed(&mut rng, 0.1, 5.0);
        let t = rng.gen_range(0.02..=0.99 * cut_time(beta).t);
        let g = geodesic_point(&GeodesicParams::new(beta, angle(&mut rng), t));
        match sr_distance(&g) {
            Ok(d) => worst = worst.max((d - t).abs()),
            Err(_) => failures += 1,
        }
    }
    let (grid_beta, grid_t, t_max) = (401, 400, 20.0);
    let resolution = t_max / grid_t as f64;
    let mut brute_worst: f64 = 0.0;
    for _ in 0..50 {
        let beta = signed(&mut rng, 0.5, 5.0);
        let t = rng.gen_range(0.1..(0.99 * cut_time(beta).t).min(t_max));
        let g = geodesic_point(&GeodesicParams::new(beta, angle(&mut rng), t));
        let exact = sr_distance(&g).unwrap_or(f64::NAN);
        let d = brute_force_distance(&g, grid_beta, grid_t, t_max);
        brute_worst = brute_worst.max(if (d - exact).abs() <= resolution { (d - exact).abs() } else { f64::INFINITY });
    }
    let el = start.elapsed();
    Outcome {
        ok: failures == 0 && worst <= 1e-6 && brute_worst <= resolution && within(el, 120.0),
        detail: format!(
            "1000 round trips worst {worst:.2e} (≤ 1e-6, {failures} failures), brute force on 50 worst {brute_worst:.2e} (grid resolution {resolution}), {:.2}s (< 120s)",
            el.as_secs_f64()
        ),
    }
}

fn cut_multiplicity() -> Outcome {
    let mut rng = rng(7);
    let regimes: [(&str, f64, f64); 5] = [
        ("R2", 1.0, 1.0),
        ("R3", 0.05, 0.999),
        ("R4", BETA_LOCAL_MIN, BETA_LOCAL_MIN),
        ("R5", BETA_LOCAL_MIN + 1e-4, BETA_LOCAL_MAX - 1e-4),
        ("R6", 1.0 + 1e-4, BETA_LOCAL_MIN - 1e-4),
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for (label, lo, hi) in regimes {
        let mut good = 0;
        for _ in 0..40 {
            let b = if lo == hi { lo } else { rng.gen_range(lo..hi) };
            let beta = if rng.gen::<bool>() { b } else { -b };
            let g = cut_point(beta, angle(&mut rng)).expect("β ≠ 0");
            if let Ok(r) = sr_log(&g) {
                let distinct = r.solutions.len() >= 2;
                let reach = r.solutions.iter().all(|s| geodesic_point(s).sup_dist(&g) <= 1e-8 * g.sup_norm().max(1.0));
                if distinct && reach {
                    good += 1;
                }
            }
        }
        ok &= good == 40;
        notes.push(format!("{label} {good}/40"));
    }
    let mut worst: f64 = 0.0;
    let mut tagged = 0;
    for _ in 0..50 {
        let g = GroupElement::rotation(2.0 * angle(&mut rng));
        let Ok(r) = sr_log(&g) else { continue };
        if r.multiplicity == Multiplicity::S1Circle {
            tagged += 1;
        }
        for s in &r.solutions {
            for _ in 0..10 {
                let q = GeodesicParams { phi: angle(&mut rng), ..*s };
                worst = worst.max(geodesic_point(&q).sup_dist(&g));
            }
        }
    }
    ok &= tagged == 50 && worst <= 1e-10;
    notes.push(format!("SO(2) targets {tagged}/50 circle, φ-spread {worst:.1e}"));
    Outcome { ok, detail: notes.join(", ") }
}

fn symmetry_suite() -> Outcome {
    let mut rng = rng(8);
    let (mut conj, mut orbit, mut flip, mut tm) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let p = GeodesicParams::new(rng.gen_range(-3.0..3.0), angle(&mut rng), rng.gen_range(-5.0..5.0));
        let g = geodesic_point(&p);
        let psi = angle(&mut rng);
        conj = conj.max(conjugate_by_rotation(&g, psi).sup_dist(&geodesic_point(&GeodesicParams { phi: p.phi + psi, ..p })));
        let s = rng.gen_range(-2.0..2.0);
        orbit = orbit.max(orbit_flow(&p, s, &g).sup_dist(&geodesic_point(&p.at(p.t + s))));
        flip = flip.max(geodesic_point(&GeodesicParams::new(-p.beta, p.phi + PI, -p.t)).sup_dist(&g));
        let mut c = sim_plus(rng.gen_range(0.0..3.0), rng.gen_range(0.0..PI));
        if rng.gen::<bool>() {
            c = c.neg();
        }
        let half = 0.5 * c.trace();
        let m = m_invariant(&c);
        tm = tm.max((half * half - 1.0 - m * m).abs() / (1.0 + m * m));
    }
    Outcome {
        ok: conj <= 1e-11 && orbit <= 1e-11 && flip <= 1e-11 && tm <= 1e-11,
        detail: format!(
            "1000 each: conjugation {conj:.1e}, orbit {orbit:.1e}, sign flip {flip:.1e}, trace/m identity {tm:.1e} (≤ 1e-11)"
        ),
    }
}

fn conjugate_condition() -> Outcome {
    let mut rng = rng(9);
    let (mut det_worst, mut tan_worst, mut count, mut tangent) = (0.0f64, 0.0f64, 0, 0);
    for _ in 0..100 {
        let beta = signed(&mut rng, 1.01, 5.0);
        let s = (beta * beta - 1.0).sqrt();
        let Ok(points) = conjugate_points(beta, 2.0 * 24.0 / s) else {
            det_worst = f64::INFINITY;
            continue;
        };
        for c in points {
            count += 1;
            let (det, scale) = exp_jacobian_det(&GeodesicParams::new(beta, angle(&mut rng), c.t));
            det_worst = det_worst.max(det.abs() / scale.max(1.0));
            if let ConjugateKind::Tangent { x } = c.kind {
                tangent += 1;
                tan_worst = tan_worst.max((x.tan() - x).abs());
            }
        }
    }
    Outcome {
        ok: count > 0 && det_worst <= 1e-5 && tan_worst <= 1e-12,
        detail: format!(
            "{count} conjugate times ({tangent} tangent, x ≤ 24): |det J|/scale worst {det_worst:.1e} (≤ 1e-5), |tan x − x| worst {tan_worst:.1e} (≤ 1e-12)"
        ),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("closed-form consistency", closed_form_consistency),
        ("ODE oracle", ode_oracle),
        ("cut-time anchors", cut_time_anchors),
        ("cut-time brackets, monotonicity, continuity", cut_time_brackets_and_monotonicity),
        ("cut-locus landing", cut_locus_landing),
        ("log/distance round trip", log_round_trip),
        ("multiplicity at the cut locus", cut_multiplicity),
        ("symmetry suite", symmetry_suite),
        ("conjugate-set condition", conjugate_condition),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let out = check();
        if !out.ok {
            failed += 1;
        }
        println!("criterion {} {name}: {}: {}", i + 1, if out.ok { "PASS" } else { "FAIL" }, out.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
