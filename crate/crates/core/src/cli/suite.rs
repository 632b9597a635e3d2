use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::metrics::{gehring_h, hyperbolic_distance, kra_distance, DiscAutomorphism};
use crate::modulus::phi;
use crate::shift::{
    beltrami_of_shift, build_shift, displacement_bound, evaluate_shift, extremal_dilatation,
    extremal_dilatation_minus_one,
};
use crate::verify::{laplace_ring_module, measured_dilatation, RingDomain};

use super::RunConfig;

/// Seed of every randomized sample in the suites.
pub const SUITE_SEED: u64 = 0x51f7_2024;

/// Outcome of one check: the worst observed quantity against its bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn below(name: &'static str, value: f64, tolerance: f64) -> Self {
        Self {
            name,
            value,
            tolerance,
            passed: value < tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    All,
    Modulus,
    Shift,
    Metrics,
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::All | Suite::Modulus) {
        out.extend(modulus_checks()?);
    }
    if matches!(suite, Suite::All | Suite::Shift) {
        out.extend(shift_checks(cfg)?);
    }
    if matches!(suite, Suite::All | Suite::Metrics) {
        out.extend(metrics_checks(cfg)?);
    }
    Ok(out)
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SUITE_SEED)
}

fn modulus_checks() -> Result<Vec<Check>> {
    // Smallest relative gap to either bound of R < Φ(R) < 4R.
    let mut gap = f64::INFINITY;
    for i in 1..=1000 {
        let r = 10f64.powf(3.0 * i as f64 / 1000.0);
        let p = phi(r)?;
        gap = gap.min((p - r).min(4.0 * r - p) / r);
    }
    let bounds = Check {
        name: "grotzsch_bounds",
        value: gap,
        tolerance: 0.0,
        passed: gap > 0.0,
    };

    let deficits: Vec<f64> = [10.0, 100.0, 1000.0].iter().map(|&r| phi(r).map(|p| 4.0 * r - p)).collect::<Result<_>>()?;
    let monotone = deficits.windows(2).all(|w| w[1] < w[0]);
    let mut asymptote = Check::below("asymptote_4r", deficits[2].abs(), 0.01);
    asymptote.passed &= monotone;

    let mut rng = rng();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a: f64 = rng.random_range(1e-3..1.0 - 1e-3);
        let lhs = phi(0.5 * (a + 1.0 / a))?;
        let rhs = phi(1.0 / (a * a))?.sqrt();
        worst = worst.max((lhs - rhs).abs() / rhs);
    }
    Ok(vec![bounds, asymptote, Check::below("functional_equation", worst, 1e-10)])
}

fn shift_checks(cfg: &RunConfig) -> Result<Vec<Check>> {
    let tol = cfg.tolerance;
    let mut radius: f64 = 0.0;
    for x in [0.1, 0.25, 0.5] {
        let f = build_shift(x, tol)?;
        radius = radius.max((f.outer_radius() - phi(1.0 / x)?.sqrt()).abs());
    }

    let x = 0.25;
    let module = laplace_ring_module(RingDomain::GrotzschRing { r: x }, cfg.grid_n)?;
    let phi_grid = (2.0 * PI * module).exp();
    let phi_exact = phi(1.0 / x)?;
    let laplace = Check::below("laplace_phi", (phi_grid / phi_exact - 1.0).abs(), 5e-3);

    let ratios: Vec<f64> = [1e-1, 1e-2, 1e-3]
        .iter()
        .map(|&x| extremal_dilatation_minus_one(x).map(|km1| (km1 - x) / x))
        .collect::<Result<_>>()?;
    let mut asymptotics = Check::below("dilatation_asymptotics", ratios[2], 5e-3);
    asymptotics.passed &= ratios.windows(2).all(|w| w[1] < w[0]);

    let mut slack = f64::INFINITY;
    for i in 1..=100 {
        let x = i as f64 / 101.0;
        let k = 1.0 + extremal_dilatation_minus_one(x)?;
        slack = slack.min(displacement_bound(k)? - x);
    }
    let x_small = 1e-3;
    let tight = displacement_bound(1.0 + extremal_dilatation_minus_one(x_small)?)? / x_small;
    let bound = Check {
        name: "displacement_bound",
        value: slack,
        tolerance: 0.0,
        passed: slack > 0.0 && (tight - 1.0).abs() < 0.02,
    };

    let f = build_shift(0.25, tol)?;
    let k = f.dilatation();
    let mut contract = (evaluate_shift(&f, Complex64::new(0.0, 0.0))? + 0.25).norm();
    for j in 0..360 {
        let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 360.0);
        contract = contract.max((evaluate_shift(&f, z)? - z).norm());
    }
    let mut rng = rng();
    let mut symmetry: f64 = 0.0;
    let mut branch: f64 = 0.0;
    for _ in 0..200 {
        let z = Complex64::from_polar(rng.random_range(0.0_f64..1.0).sqrt(), rng.random_range(0.0..2.0 * PI));
        symmetry = symmetry.max((evaluate_shift(&f, z.conj())? - evaluate_shift(&f, z)?.conj()).norm());
        let root = z.sqrt();
        branch = branch.max((f.evaluate_on_branch(root)? - f.evaluate_on_branch(-root)?).norm());
    }

    let expected = (k - 1.0) / (k + 1.0);
    let (mut modulus_spread, mut phase): (f64, f64) = (0.0, 0.0);
    let mut n = 0;
    while n < 50 {
        let z = Complex64::from_polar(rng.random_range(0.05_f64..0.9), rng.random_range(0.0..2.0 * PI));
        let Ok(s) = beltrami_of_shift(&f, z, cfg.fd_step) else {
            continue;
        };
        modulus_spread = modulus_spread.max((s.mu.norm() - expected).abs());
        phase = phase.max((s.teichmuller_phase() - expected).norm());
        n += 1;
    }

    let mut measured: f64 = 0.0;
    let mut n = 0;
    while n < 200 {
        let z = Complex64::from_polar(rng.random_range(0.0_f64..0.95).sqrt(), rng.random_range(0.0..2.0 * PI));
        if (z.re > -0.26 && z.re < 0.01 && z.im.abs() < 0.01) || z.norm() < 0.01 {
            continue;
        }
        let kz = measured_dilatation(|p| evaluate_shift(&f, p), z, cfg.fd_step)?;
        measured = measured.max((kz / k - 1.0).abs());
        n += 1;
    }

    Ok(vec![
        Check::below("radius_cross_check", radius, 1e-9),
        laplace,
        asymptotics,
        bound,
        Check::below("fixes_boundary", contract, 1e-6),
        Check::below("conjugation_symmetry", symmetry, 1e-6),
        Check::below("branch_independence", branch, 1e-10),
        Check::below("beltrami_modulus", modulus_spread, 1e-3),
        Check::below("teichmuller_phase", phase, 1e-3),
        Check::below("measured_dilatation", measured, 1e-3),
    ])
}

fn metrics_checks(cfg: &RunConfig) -> Result<Vec<Check>> {
    let zero = Complex64::new(0.0, 0.0);
    let mut identity: f64 = 0.0;
    for x in [0.1, 0.25, 0.5] {
        let lhs = extremal_dilatation(x)?.ln();
        let rhs = 2.0 * hyperbolic_distance(zero, Complex64::new(1.0 / phi(1.0 / x)?, 0.0))?;
        identity = identity.max((lhs - rhs).abs());
    }

    let mut rng = rng();
    let point = |rng: &mut ChaCha8Rng| {
        Complex64::from_polar(rng.random_range(0.0_f64..0.9).sqrt(), rng.random_range(0.0..2.0 * PI))
    };
    let (mut asym, mut invariance): (f64, f64) = (0.0, 0.0);
    for _ in 0..50 {
        let (a, b) = (point(&mut rng), point(&mut rng));
        let d = kra_distance(a, b)?;
        asym = asym.max((d - kra_distance(b, a)?).abs());
        let m = DiscAutomorphism::new(rng.random_range(0.0..2.0 * PI), point(&mut rng))?;
        invariance = invariance.max((kra_distance(m.apply(a), m.apply(b))? - d).abs());
    }
    let mut triangle: f64 = f64::INFINITY;
    for _ in 0..1000 {
        let (a, b, c) = (point(&mut rng), point(&mut rng), point(&mut rng));
        let slack = kra_distance(a, b)? + kra_distance(b, c)? - kra_distance(a, c)?;
        triangle = triangle.min(slack);
    }

    let mut gehring: f64 = 0.0;
    for i in 1..20 {
        let x = i as f64 / 20.0;
        let h = gehring_h(extremal_dilatation(x)?, cfg.tolerance)?;
        gehring = gehring.max((h - hyperbolic_distance(zero, Complex64::new(x, 0.0))?).abs());
    }

    Ok(vec![
        Check::below("log_dilatation_identity", identity, 1e-10),
        Check {
            name: "kra_symmetry",
            value: asym,
            tolerance: 0.0,
            passed: asym == 0.0,
        },
        Check::below("kra_invariance", invariance, 1e-12),
        Check {
            name: "kra_triangle_inequality",
            value: triangle,
            tolerance: -1e-12,
            passed: triangle >= -1e-12,
        },
        Check::below("gehring_round_trip", gehring, 1e-8),
    ])
}
