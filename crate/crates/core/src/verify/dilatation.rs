use num_complex::Complex64;

use crate::affine::{AffineMap, Ellipse};
use crate::error::{QcdError, Result};
use crate::shift::{evaluate_shift, ShiftMap};

/// Wirtinger derivatives `(∂_z f, ∂_z̄ f)` by central differences.
pub fn wirtinger<F>(map: F, z: Complex64, h: f64) -> Result<(Complex64, Complex64)>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if !(h > 0.0) || !h.is_finite() {
        return Err(QcdError::domain(format!("step must be positive, got {h}")));
    }
    let ih = Complex64::new(0.0, h);
    let dx = (map(z + h)? - map(z - h)?) / (2.0 * h);
    let dy = (map(z + ih)? - map(z - ih)?) / (2.0 * h);
    let i = Complex64::i();
    Ok((0.5 * (dx - i * dy), 0.5 * (dx + i * dy)))
}

/// Pointwise dilatation `(|f_z| + |f_z̄|)/(|f_z| − |f_z̄|)` by central
/// differences at step `h`.
pub fn measured_dilatation<F>(map: F, z: Complex64, h: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let (fz, fzb) = wirtinger(map, z, h)?;
    let (a, b) = (fz.norm(), fzb.norm());
    let jac = (a - b) * (a + b);
    if !(jac > 0.0) {
        return Err(QcdError::numeric(format!(
            "Jacobian estimate {jac} at z = {z} is not positive"
        )));
    }
    Ok((a + b) / (a - b))
}

/// Hand-built boundary-fixing self-maps of the disc with `f(0) = −x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Competitor {
    /// `z ↦ z − x·(1 − |z|²/ρ²)²` on `|z| < ρ`, the identity elsewhere.
    /// Sense-preserving for `ρ > 8x/(3√3)`.
    RadialBump(f64),
    /// `z ↦ z − x·(1 − |z|/σ)` on `|z| < σ`, the identity elsewhere: a
    /// cone-shaped patch with maximal dilatation `1/(1 − x/σ)`, `σ > x`.
    MobiusPatch(f64),
    /// The extremal map itself.
    Extremal,
}

impl Competitor {
    fn check(&self, x: f64) -> Result<()> {
        match *self {
            Competitor::RadialBump(rho) if !(rho > 8.0 * x / (3.0 * 3f64.sqrt()) && rho <= 1.0) => Err(
                QcdError::domain(format!("radial bump of radius {rho} is not a homeomorphism at x = {x}")),
            ),
            Competitor::MobiusPatch(sigma) if !(sigma > x && sigma <= 1.0) => Err(QcdError::domain(format!(
                "patch of radius {sigma} is not a homeomorphism at x = {x}"
            ))),
            _ => Ok(()),
        }
    }

    /// Radius of the region where the map differs from the identity.
    pub fn support_radius(&self) -> f64 {
        match *self {
            Competitor::RadialBump(r) | Competitor::MobiusPatch(r) => r,
            Competitor::Extremal => 1.0,
        }
    }

    pub fn eval(&self, x: f64, f: Option<&ShiftMap>, z: Complex64) -> Result<Complex64> {
        let r = z.norm();
        match *self {
            Competitor::RadialBump(rho) => {
                let t = 1.0 - (r / rho).powi(2);
                Ok(if r < rho { z - x * t * t } else { z })
            }
            Competitor::MobiusPatch(sigma) => Ok(if r < sigma { z - x * (1.0 - r / sigma) } else { z }),
            Competitor::Extremal => match f {
                Some(f) => evaluate_shift(f, z),
                None => Err(QcdError::domain("the extremal competitor needs a shift map")),
            },
        }
    }
}

/// Deterministic polar sample points in `0 < |z| < radius`, avoiding the
/// origin and the circle `|z| = radius` where the patches are not smooth.
fn polar_samples(radius: f64, rings: usize, spokes: usize) -> impl Iterator<Item = Complex64> {
    (1..=rings).flat_map(move |i| {
        let r = radius * (i as f64 - 0.5) / rings as f64;
        (0..spokes).map(move |j| Complex64::from_polar(r, std::f64::consts::TAU * (j as f64 + 0.25) / spokes as f64))
    })
}

/// Largest measured dilatation of each competitor moving 0 to `−x`.
/// The extremal competitor is measured away from the segment `[−x, 0]`,
/// where its derivative is discontinuous.
pub fn competitor_dilatation_sweep(
    x: f64,
    f: Option<&ShiftMap>,
    family: &[Competitor],
    h: f64,
) -> Result<Vec<f64>> {
    if !(x > 0.0 && x < 1.0) {
        return Err(QcdError::domain(format!("displacement must lie in (0, 1), got {x}")));
    }
    family
        .iter()
        .map(|c| {
            c.check(x)?;
            let mut worst: f64 = 1.0;
            for z in polar_samples(c.support_radius(), 24, 72) {
                if matches!(c, Competitor::Extremal) {
                    let seg = if z.re > 0.0 { z.norm() } else if z.re < -x { (z + x).norm() } else { z.im.abs() };
                    if seg < 1e-3 || z.norm() > 0.99 {
                        continue;
                    }
                }
                let k = measured_dilatation(|p| c.eval(x, f, p), z, h)?;
                worst = worst.max(k);
            }
            Ok(worst)
        })
        .collect()
}

/// Smooth bump `(1 − |z − c|²/r²)³` supported in the disc `|z − c| < r`.
fn bump(z: Complex64, c: Complex64, r: f64) -> f64 {
    let t = 1.0 - (z - c).norm_sqr() / (r * r);
    if t > 0.0 {
        t * t * t
    } else {
        0.0
    }
}

/// Largest measured dilatation of `h₀ ∘ (id + ε·b)` over the ellipse, for
/// each amplitude `ε`, where `h₀` is the extremal affine map of `e` and `b`
/// a smooth bump (directed along `1 + i`) supported inside the ellipse.
/// All such maps agree with `h₀` on the boundary.
pub fn ellipse_competitor_sweep(e: &Ellipse, h0: &AffineMap, amplitudes: &[f64], h: f64) -> Result<Vec<f64>> {
    let r = 0.5 * e.alpha.min(e.beta);
    let c = Complex64::new(0.0, 0.0);
    let dir = Complex64::new(1.0, 1.0) / 2f64.sqrt();
    amplitudes
        .iter()
        .map(|&eps| {
            let map = |z: Complex64| Ok(h0.apply(z + eps * bump(z, c, r) * dir));
            let mut worst: f64 = 0.0;
            for z in polar_samples(r, 16, 48) {
                worst = worst.max(measured_dilatation(map, z, h)?);
            }
            Ok(worst)
        })
        .collect()
}
