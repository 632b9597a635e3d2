//! Cross-checks of the closed-form machinery against the grid oracles.

use std::f64::consts::PI;

use num_complex::Complex64;
use qcd::modulus::grotzsch_mu;
use qcd::shift::{build_shift, build_slit_annulus_map, evaluate_shift};
use qcd::verify::{laplace_ring_module, measured_dilatation, slit_map_oracle, RingDomain};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn laplace_examples_at_512() {
    let m = laplace_ring_module(RingDomain::Annulus { r_in: 1.0, r_out: (2.0 * PI).exp() }, 512).unwrap();
    assert!((m - 1.0).abs() < 1e-3, "annulus {m}");

    let exact = grotzsch_mu(0.5).unwrap() / (2.0 * PI);
    assert!((exact - 0.3198).abs() < 1e-4);
    let m = laplace_ring_module(RingDomain::GrotzschRing { r: 0.5 }, 512).unwrap();
    assert!(((m - exact) / exact).abs() < 5e-3, "grotzsch {m} vs {exact}");

    let phi = build_slit_annulus_map(0.5, 1e-9).unwrap();
    let exact = phi.outer_radius().ln() / (2.0 * PI);
    let m = laplace_ring_module(RingDomain::SlitDisc { s: 0.5 }, 512).unwrap();
    assert!(((m - exact) / exact).abs() < 5e-3, "slit {m} vs {exact}");
}

#[test]
fn laplace_error_halves_with_the_grid() {
    let exact = grotzsch_mu(0.5).unwrap() / (2.0 * PI);
    let err: Vec<f64> = [128, 256, 512]
        .iter()
        .map(|&n| (laplace_ring_module(RingDomain::GrotzschRing { r: 0.5 }, n).unwrap() - exact).abs())
        .collect();
    for w in err.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 0.9, "observed order {order} from {err:?}");
    }
}

#[test]
fn grid_conformal_map_matches_the_explicit_map() {
    let s = 0.5;
    let exact = build_slit_annulus_map(s, 1e-9).unwrap();
    let coarse = slit_map_oracle(s, 256).unwrap();
    let fine = slit_map_oracle(s, 512).unwrap();
    let log_r = 2.0 * fine.log_outer_radius() - coarse.log_outer_radius();
    assert!((log_r - exact.outer_radius().ln()).abs() < 5e-4);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut points = vec![Complex64::new(0.9, 0.0), Complex64::new(0.0, 0.8)];
    for _ in 0..20 {
        points.push(Complex64::from_polar(rng.random_range(0.4..0.98), rng.random_range(0.0..2.0 * PI)));
    }
    for z in points {
        let w = exact.eval(z).unwrap();
        let (a, b) = (coarse.eval(z).unwrap(), fine.eval(z).unwrap());
        // First-order convergence: Richardson extrapolation removes the leading term.
        let extrapolated = 2.0 * b - a;
        assert!((b - w).norm() < 6e-3, "z = {z}: {}", (b - w).norm());
        assert!((extrapolated - w).norm() < 5e-4, "z = {z}: {}", (extrapolated - w).norm());
    }
}

#[test]
fn shift_has_constant_measured_dilatation() {
    let x = 0.25;
    let f = build_shift(x, 1e-9).unwrap();
    let k = f.dilatation();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut n = 0;
    while n < 200 {
        let z = Complex64::from_polar(rng.random_range(0.0_f64..0.95).sqrt(), rng.random_range(0.0..2.0 * PI));
        // Stay clear of the segment [−x, 0], across which the map is only continuous.
        if z.re > -x - 0.01 && z.re < 0.01 && z.im.abs() < 0.01 || z.norm() < 0.01 {
            continue;
        }
        let kz = measured_dilatation(|p| evaluate_shift(&f, p), z, 1e-5).unwrap();
        assert!((kz / k - 1.0).abs() < 1e-3, "z = {z}: {kz} vs {k}");
        n += 1;
    }
}
