//! Hyperbolic and Kra distances on the unit disc, the Teichmüller shift
//! between two arbitrary points, and the Gehring displacement function.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{QcdError, Result};
use crate::modulus::grotzsch_mu_inverse;
use crate::shift::{build_shift, evaluate_shift, extremal_dilatation, extremal_dilatation_minus_one, ShiftMap};

fn check_open_disc(z: Complex64, name: &str) -> Result<()> {
    if !z.is_finite() || z.norm() >= 1.0 {
        return Err(QcdError::domain(format!("{name} = {z} must lie in the open unit disc")));
    }
    Ok(())
}

/// `1 − |z|²` without cancellation near the circle.
fn one_minus_norm_sqr(z: Complex64) -> f64 {
    let n = z.norm();
    (1.0 - n) * (1.0 + n)
}

/// Two points of the open disc with their pseudo-hyperbolic distance
/// `ρ = |(z₁ − z₂)/(1 − z̄₁z₂)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPointPair {
    pub z1: Complex64,
    pub z2: Complex64,
    pub rho: f64,
}

impl DiscPointPair {
    pub fn new(z1: Complex64, z2: Complex64) -> Result<Self> {
        check_open_disc(z1, "z1")?;
        check_open_disc(z2, "z2")?;
        // Ratio of norms keeps ρ exactly symmetric in (z1, z2).
        let rho = ((z1 - z2).norm() / (1.0 - z1.conj() * z2).norm()).min(1.0 - f64::EPSILON / 2.0);
        Ok(Self { z1, z2, rho })
    }

    /// `1 − ρ²`, computed from the factored identity
    /// `(1 − |z₁|²)(1 − |z₂|²)/|1 − z̄₁z₂|²`.
    pub fn one_minus_rho_sqr(&self) -> f64 {
        one_minus_norm_sqr(self.z1) * one_minus_norm_sqr(self.z2) / (1.0 - self.z1.conj() * self.z2).norm_sqr()
    }

    /// Hyperbolic distance in the curvature −1 metric `2|dz|/(1 − |z|²)`.
    pub fn hyperbolic(&self) -> f64 {
        let rho = self.rho;
        if rho <= 0.5 {
            2.0 * rho.atanh()
        } else {
            2.0 * rho.ln_1p() - self.one_minus_rho_sqr().ln()
        }
    }
}

/// A conformal automorphism `z ↦ λ(z − c)/(1 − c̄z)` of the disc (`|λ| = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscAutomorphism {
    pub rotation: Complex64,
    pub center: Complex64,
}

impl DiscAutomorphism {
    pub fn new(rotation_angle: f64, center: Complex64) -> Result<Self> {
        check_open_disc(center, "center")?;
        Ok(Self {
            rotation: Complex64::from_polar(1.0, rotation_angle),
            center,
        })
    }

    /// The automorphism sending `z1` to 0 and `z2` onto the negative real
    /// axis. Requires `z1 ≠ z2`.
    pub fn normalizing(pair: &DiscPointPair) -> Result<Self> {
        let v = (pair.z2 - pair.z1) / (1.0 - pair.z1.conj() * pair.z2);
        if v.norm() == 0.0 {
            return Err(QcdError::domain("degenerate pair: z1 = z2"));
        }
        Ok(Self {
            rotation: -v.conj() / v.norm(),
            center: pair.z1,
        })
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.rotation * (z - self.center) / (1.0 - self.center.conj() * z)
    }

    pub fn inverse(&self, w: Complex64) -> Complex64 {
        let v = self.rotation.conj() * w;
        (v + self.center) / (1.0 + self.center.conj() * v)
    }
}

/// Hyperbolic distance `log((1 + ρ)/(1 − ρ))`.
pub fn hyperbolic_distance(z1: Complex64, z2: Complex64) -> Result<f64> {
    Ok(DiscPointPair::new(z1, z2)?.hyperbolic())
}

/// Kra distance `½·log K(ρ(z₁, z₂))`.
pub fn kra_distance(z1: Complex64, z2: Complex64) -> Result<f64> {
    let pair = DiscPointPair::new(z1, z2)?;
    if pair.rho == 0.0 {
        return Ok(0.0);
    }
    Ok(0.5 * extremal_dilatation_minus_one(pair.rho)?.ln_1p())
}

type ShiftKey = (u64, u64);

fn shift_cache() -> &'static Mutex<HashMap<ShiftKey, Arc<ShiftMap>>> {
    static CACHE: OnceLock<Mutex<HashMap<ShiftKey, Arc<ShiftMap>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The shift map for displacement `x`, shared across calls.
pub fn cached_shift(x: f64, tol: f64) -> Result<Arc<ShiftMap>> {
    let key = (x.to_bits(), tol.to_bits());
    if let Some(f) = shift_cache().lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(Arc::clone(f));
    }
    // Built outside the lock; a concurrent duplicate build is harmless.
    let f = Arc::new(build_shift(x, tol)?);
    let mut cache = shift_cache().lock().unwrap_or_else(|e| e.into_inner());
    Ok(Arc::clone(cache.entry(key).or_insert(f)))
}

/// The Teichmüller shift `f₍z₁,z₂₎ = M⁻¹ ∘ f₍₀,ρ₎ ∘ M` evaluated at `z`,
/// where `M` sends `z₁` to 0 and `z₂` to `−ρ`.
pub fn shift_between(z1: Complex64, z2: Complex64, z: Complex64, tol: f64) -> Result<Complex64> {
    let pair = DiscPointPair::new(z1, z2)?;
    if !z.is_finite() || z.norm() > 1.0 + 1e-12 {
        return Err(QcdError::domain(format!("z = {z} must lie in the closed unit disc")));
    }
    let m = DiscAutomorphism::normalizing(&pair)?;
    let f = cached_shift(pair.rho, tol)?;
    let w = evaluate_shift(&f, m.apply(z))?;
    Ok(m.inverse(w))
}

/// Gehring's `h(K)`: the largest hyperbolic distance a `K`-quasiconformal
/// self-map of the disc fixing the boundary can move a point, attained by
/// the Teichmüller shift with `K(x*) = K`.
pub fn gehring_h(k: f64, tol: f64) -> Result<f64> {
    if !(k > 1.0) || !k.is_finite() {
        return Err(QcdError::domain(format!("K must exceed 1, got {k}")));
    }
    if !(tol > 0.0) {
        return Err(QcdError::domain(format!("tolerance must be positive, got {tol}")));
    }
    // K(x) = ((Φ + 1)/(Φ − 1))² with Φ = Φ(1/x) = exp μ(x), so x solves
    // μ(x) = log((√K + 1)/(√K − 1)). √K − 1 = (K − 1)/(√K + 1) near 1.
    let sk = k.sqrt();
    let p = (sk + 1.0) * (sk + 1.0) / (k - 1.0);
    let x = grotzsch_mu_inverse(p.ln()).map_err(|e| match e {
        QcdError::Convergence { residual, .. } => QcdError::numeric(format!(
            "root of K(x) = {k} not found (residual {residual})"
        )),
        other => other,
    })?;
    let residual = if x < 1e-3 {
        (extremal_dilatation_minus_one(x)? - (k - 1.0)).abs()
    } else {
        (extremal_dilatation(x)? - k).abs()
    };
    if !(residual <= tol * (k - 1.0).max(f64::MIN_POSITIVE)) && residual > 8.0 * f64::EPSILON * k {
        return Err(QcdError::numeric(format!(
            "root of K(x) = {k} misses by {residual}, tolerance {tol}"
        )));
    }
    hyperbolic_distance(Complex64::new(0.0, 0.0), Complex64::new(x, 0.0))
}
