//! End-to-end acceptance: one pass/fail line per criterion.

use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use qcd::metrics::{gehring_h, hyperbolic_distance, kra_distance, DiscAutomorphism};
use qcd::modulus::phi;
use qcd::shift::{
    beltrami_of_shift, build_shift, build_slit_annulus_map, displacement_bound, evaluate_shift,
    extremal_dilatation, extremal_dilatation_minus_one,
};
use qcd::verify::{
    competitor_dilatation_sweep, discrete_min_dilatation, laplace_ring_module, Competitor, RingDomain,
    DEFAULT_MESH_REFINEMENT,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn disc_point(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.random_range(0.0_f64..1.0).sqrt(), rng.random_range(0.0..2.0 * PI))
}

fn grotzsch_bounds() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut ok = true;
    for i in 1..=1000 {
        let r = 10f64.powf(3.0 * i as f64 / 1000.0);
        let p = phi(r).unwrap();
        ok &= r < p && p < 4.0 * r;
        worst = worst.min((p - r).min(4.0 * r - p));
    }
    outcome(ok, format!("smallest gap to R or 4R: {worst:.3e}"))
}

fn asymptote() -> Outcome {
    let d: Vec<f64> = [10.0, 100.0, 1000.0].iter().map(|&r| 4.0 * r - phi(r).unwrap()).collect();
    let ok = d[2].abs() < 0.01 && d[0] > d[1] && d[1] > d[2];
    outcome(ok, format!("4R − Φ(R) at 10, 100, 1000: {:.3e}, {:.3e}, {:.3e} (< 0.01)", d[0], d[1], d[2]))
}

fn functional_equation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a: f64 = rng.random_range(1e-3..1.0 - 1e-3);
        let lhs = phi(0.5 * (a + 1.0 / a)).unwrap();
        let rhs = phi(1.0 / (a * a)).unwrap().sqrt();
        worst = worst.max((lhs / rhs - 1.0).abs());
    }
    outcome(worst < 1e-10, format!("max relative residual {worst:.3e} (< 1e-10)"))
}

fn radius_cross_check() -> Outcome {
    let mut worst: f64 = 0.0;
    for x in [0.1_f64, 0.25, 0.5] {
        let map = build_slit_annulus_map(x.sqrt(), 1e-9).unwrap();
        worst = worst.max((map.outer_radius() - phi(1.0 / x).unwrap().sqrt()).abs());
    }
    outcome(worst < 1e-9, format!("explicit route, max |R − √Φ(1/x)| = {worst:.3e} (< 1e-9)"))
}

fn laplace_dilatation() -> Outcome {
    let x = 0.25;
    let module = laplace_ring_module(RingDomain::GrotzschRing { r: x }, 512).unwrap();
    let grid = (2.0 * PI * module).exp();
    let exact = phi(1.0 / x).unwrap();
    let rel = (grid / exact - 1.0).abs();
    let k_grid = ((grid + 1.0) / (grid - 1.0)).powi(2);
    outcome(
        rel < 5e-3,
        format!("Φ grid {grid:.6} vs AGM {exact:.6}, rel {rel:.3e} (< 5e-3); K grid {k_grid:.6}"),
    )
}

fn asymptotics() -> Outcome {
    let r: Vec<f64> = [1e-1, 1e-2, 1e-3]
        .iter()
        .map(|&x| (extremal_dilatation_minus_one(x).unwrap() - x) / x)
        .collect();
    let ok = r[2] <= 5e-3 && r[0] > r[1] && r[1] > r[2];
    outcome(ok, format!("(K − 1 − x)/x: {:.3e}, {:.3e}, {:.3e} (last ≤ 5e-3)", r[0], r[1], r[2]))
}

fn displacement_bound_holds() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut ok = true;
    for _ in 0..100 {
        let x: f64 = rng.random_range(1e-4..0.999);
        let k = 1.0 + extremal_dilatation_minus_one(x).unwrap();
        ok &= x < displacement_bound(k).unwrap();
    }
    let x = 1e-3;
    let ratio = displacement_bound(1.0 + extremal_dilatation_minus_one(x).unwrap()).unwrap() / x;
    ok &= (ratio - 1.0).abs() < 0.02;
    outcome(ok, format!("strict on 100 samples; 2(√K − 1)/x at 1e-3 = {ratio:.6} (within 2% of 1)"))
}

fn map_contract() -> Outcome {
    let x = 0.25;
    let f = build_shift(x, 1e-9).unwrap();
    let origin = (evaluate_shift(&f, Complex64::new(0.0, 0.0)).unwrap() + x).norm();
    let boundary = (0..360)
        .map(|j| {
            let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 360.0);
            (evaluate_shift(&f, z).unwrap() - z).norm()
        })
        .fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let (mut sym, mut branch): (f64, f64) = (0.0, 0.0);
    for _ in 0..500 {
        let z = disc_point(&mut rng, 1.0);
        sym = sym.max((evaluate_shift(&f, z.conj()).unwrap() - evaluate_shift(&f, z).unwrap().conj()).norm());
        let root = z.sqrt();
        branch = branch.max((f.evaluate_on_branch(root).unwrap() - f.evaluate_on_branch(-root).unwrap()).norm());
    }
    let ok = origin < 1e-8 && boundary < 1e-6 && sym < 1e-6 && branch < 1e-10;
    outcome(
        ok,
        format!("|f(0) + x| {origin:.1e}, boundary {boundary:.1e}, symmetry {sym:.1e}, branches {branch:.1e}"),
    )
}

fn teichmuller_form() -> Outcome {
    let f = build_shift(0.25, 1e-9).unwrap();
    let k = f.dilatation();
    let expected = (k - 1.0) / (k + 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let (mut lo, mut hi, mut phase) = (f64::INFINITY, 0.0_f64, 0.0_f64);
    let mut n = 0;
    while n < 50 {
        let z = disc_point(&mut rng, 0.95);
        let Ok(s) = beltrami_of_shift(&f, z, 1e-5) else { continue };
        lo = lo.min(s.mu.norm());
        hi = hi.max(s.mu.norm());
        phase = phase.max((s.teichmuller_phase() - expected).norm());
        n += 1;
    }
    let ok = hi - lo < 1e-3 && phase < 1e-3;
    outcome(ok, format!("|μ| spread {:.2e}, max |μq/|q| − (K−1)/(K+1)| {phase:.2e} (< 1e-3)", hi - lo))
}

fn log_identity() -> Outcome {
    let zero = Complex64::new(0.0, 0.0);
    let worst = [0.1, 0.25, 0.5]
        .iter()
        .map(|&x| {
            let lhs = extremal_dilatation(x).unwrap().ln();
            let rhs = 2.0 * hyperbolic_distance(zero, Complex64::new(1.0 / phi(1.0 / x).unwrap(), 0.0)).unwrap();
            (lhs - rhs).abs()
        })
        .fold(0.0, f64::max);
    outcome(worst < 1e-10, format!("max |log K − 2 d(0, 1/Φ(1/x))| = {worst:.3e} (< 1e-10)"))
}

fn kra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut symmetric = true;
    let mut invariance: f64 = 0.0;
    for _ in 0..200 {
        let (a, b) = (disc_point(&mut rng, 0.95), disc_point(&mut rng, 0.95));
        let d = kra_distance(a, b).unwrap();
        symmetric &= d == kra_distance(b, a).unwrap();
        let m = DiscAutomorphism::new(rng.random_range(0.0..2.0 * PI), disc_point(&mut rng, 0.9)).unwrap();
        invariance = invariance.max((kra_distance(m.apply(a), m.apply(b)).unwrap() - d).abs());
    }
    let mut violations = 0;
    for _ in 0..1000 {
        let (a, b, c) = (disc_point(&mut rng, 0.95), disc_point(&mut rng, 0.95), disc_point(&mut rng, 0.95));
        let slack = kra_distance(a, b).unwrap() + kra_distance(b, c).unwrap() - kra_distance(a, c).unwrap();
        if slack < -1e-12 {
            violations += 1;
        }
    }
    let ok = symmetric && invariance < 1e-12 && violations == 0;
    outcome(ok, format!("symmetric {symmetric}, invariance {invariance:.1e} (< 1e-12), triangle violations {violations}/1000"))
}

fn gehring_round_trip() -> Outcome {
    let zero = Complex64::new(0.0, 0.0);
    let worst = (1..40)
        .map(|i| {
            let x = i as f64 / 40.0;
            let h = gehring_h(extremal_dilatation(x).unwrap(), 1e-9).unwrap();
            (h - hyperbolic_distance(zero, Complex64::new(x, 0.0)).unwrap()).abs()
        })
        .fold(0.0, f64::max);
    outcome(worst < 1e-8, format!("max |h(K(x)) − d(0, x)| over 39 x = {worst:.3e} (< 1e-8)"))
}

fn desk_extremality() -> Outcome {
    let x = 0.25;
    let k = extremal_dilatation(x).unwrap();
    let discrete = discrete_min_dilatation(x, DEFAULT_MESH_REFINEMENT).unwrap();
    let d = discrete.dilatation;
    let f = build_shift(x, 1e-9).unwrap();
    let mut family: Vec<Competitor> = [0.4, 0.6, 0.9, 1.0].into_iter().map(Competitor::RadialBump).collect();
    family.extend([1.0, 0.6, 0.4, 0.3].into_iter().map(Competitor::MobiusPatch));
    family.push(Competitor::Extremal);
    let sweep = competitor_dilatation_sweep(x, Some(&f), &family, 1e-5).unwrap();
    let least = sweep.iter().copied().fold(f64::INFINITY, f64::min);
    let ok = (d / k - 1.0).abs() < 0.10 && d >= 0.9 * k && least >= k - 1e-3;
    outcome(
        ok,
        format!(
            "discrete {d:.6} vs K {k:.6} ({:+.2}%, converged {}), smallest competitor {least:.6}",
            100.0 * (d / k - 1.0),
            discrete.converged
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let secs = Duration::from_secs;
    let criteria: Vec<(u32, &str, fn() -> Outcome, Option<Duration>)> = vec![
        (1, "Grötzsch bounds R < Φ(R) < 4R", grotzsch_bounds, Some(secs(1))),
        (2, "Φ(R) − 4R → 0", asymptote, Some(secs(1))),
        (3, "functional equation", functional_equation, Some(secs(1))),
        (4, "annulus radius R = √Φ(1/x)", radius_cross_check, Some(secs(60))),
        (5, "Laplace oracle vs AGM", laplace_dilatation, Some(secs(60))),
        (6, "K(x) = 1 + x + o(x)", asymptotics, None),
        (7, "x ≤ 2(√K − 1)", displacement_bound_holds, None),
        (8, "map contract", map_contract, None),
        (9, "Teichmüller form", teichmuller_form, None),
        (10, "log K = 2 d(0, 1/Φ(1/x))", log_identity, None),
        (11, "Kra distance", kra, None),
        (12, "Gehring round trip", gehring_round_trip, None),
        (13, "extremality at desk scale", desk_extremality, Some(secs(300))),
    ];
    let mut failed = Vec::new();
    for (id, name, check, budget) in criteria {
        let start = Instant::now();
        let o = check();
        let took = start.elapsed();
        let in_time = budget.is_none_or(|b| took < b);
        let pass = o.passed && in_time;
        // Written to the handle directly so the lines survive test output capture.
        writeln!(
            std::io::stdout().lock(),
            "criterion {id:>2} [{}] {name}: {} ({:.2?})",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            took
        )
        .unwrap();
        if !pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
