//! Conformal modules of ring domains and quadrilaterals, and the Grötzsch
//! modulus function `Φ`.
//!
//! Ring modules use the normalization `(1/2π)·log(R)` of the equivalent round
//! annulus `1 < |w| < R`. Quadrilateral modules are plain side ratios of the
//! equivalent rectangle whose vertical side has length 1.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{QcdError, Result};
use crate::specfun::{agm, EllipticModulus};

/// Module of a doubly-connected domain, `(1/2π)·log(R)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RingModule(f64);

impl RingModule {
    pub fn new(value: f64) -> Result<Self> {
        if !(value >= 0.0) || value.is_infinite() {
            return Err(QcdError::domain(format!("ring module must be finite and ≥ 0, got {value}")));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Outer radius of the equivalent annulus with inner radius 1.
    pub fn outer_radius(self) -> f64 {
        (2.0 * PI * self.0).exp()
    }
}

/// Module of a quadrilateral: horizontal side of the equivalent rectangle
/// with unit vertical side.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct QuadModule(f64);

impl QuadModule {
    pub fn new(m: f64) -> Result<Self> {
        if !(m > 0.0) || m.is_infinite() {
            return Err(QcdError::domain(format!("quadrilateral module must be finite and > 0, got {m}")));
        }
        Ok(Self(m))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `μ(r) = (π/2)·K(r')/K(r)` evaluated from a modulus that already carries
/// both `r` and `r'`.
pub(crate) fn mu_of(m: &EllipticModulus) -> Result<f64> {
    Ok(FRAC_PI_2 * agm(1.0, m.k_prime())? / agm(1.0, m.k())?)
}

/// Module (as `log` of the radius ratio) of the Grötzsch ring `D \ [0, r]`:
/// `μ(r) = (π/2)·K(√(1−r²))/K(r)`.
pub fn grotzsch_mu(r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(QcdError::domain(format!("grotzsch_mu needs r in (0, 1), got {r}")));
    }
    mu_of(&EllipticModulus::new(r)?)
}

/// `dμ/dr = −π² / (4·r·r'²·K(r)²)`.
pub fn grotzsch_mu_derivative(r: f64) -> Result<f64> {
    let m = EllipticModulus::new(r)?;
    if r == 0.0 {
        return Err(QcdError::domain("dμ/dr is unbounded at r = 0"));
    }
    let big_k = m.quarter_period()?;
    Ok(-PI * PI / (4.0 * r * m.k_prime() * m.k_prime() * big_k * big_k))
}

/// Solve `μ(r) = value` for `r ∈ (0, 1)`, to full double precision.
pub fn grotzsch_mu_inverse(value: f64) -> Result<f64> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(QcdError::domain(format!("μ takes values in (0, ∞), got {value}")));
    }
    // μ(r) ≈ log(4/r) for small r and μ(r) ≈ π²/(4·log(4/r')) near 1.
    let mut r = if value > 1.0 {
        (4.0 * (-value).exp()).min(0.999)
    } else {
        let rp = 4.0 * (-PI * PI / (4.0 * value)).exp();
        ((1.0 - rp) * (1.0 + rp)).max(0.0).sqrt().clamp(1e-300, 1.0 - 1e-16)
    };
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let f = grotzsch_mu(r)? - value;
        if f > 0.0 {
            lo = r;
        } else {
            hi = r;
        }
        if f == 0.0 {
            return Ok(r);
        }
        let mut next = r - f / grotzsch_mu_derivative(r)?;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - r).abs() <= 2.0 * f64::EPSILON * r {
            return Ok(next);
        }
        r = next;
    }
    Err(QcdError::Convergence {
        what: "inverse of the Grötzsch modulus",
        residual: (grotzsch_mu(r)? - value).abs(),
        tolerance: f64::EPSILON,
    })
}

/// The Grötzsch modulus function: `(1/2π)·log Φ(R)` is the module of
/// `ℂ \ (D̄ ∪ [R, ∞))`. Evaluated as `exp(μ(1/R))`.
pub fn phi(big_r: f64) -> Result<f64> {
    if !(big_r > 1.0) || big_r.is_infinite() {
        return Err(QcdError::domain(format!("phi needs R > 1, got {big_r}")));
    }
    // r' = √(1 − 1/R²) = √((R−1)(R+1))/R keeps precision as R → 1.
    let rp = (((big_r - 1.0) * (big_r + 1.0)).sqrt() / big_r).min(1.0);
    let m = EllipticModulus::from_pair(1.0 / big_r, rp)?;
    Ok(mu_of(&m)?.exp())
}

/// Module of the round annulus `r_in < |z| < r_out`.
pub fn annulus_module(r_in: f64, r_out: f64) -> Result<RingModule> {
    if !(r_in > 0.0 && r_in < r_out) || !r_out.is_finite() {
        return Err(QcdError::domain(format!(
            "annulus needs 0 < r_in < r_out < ∞, got ({r_in}, {r_out})"
        )));
    }
    RingModule::new((r_out / r_in).ln() / (2.0 * PI))
}

/// Module of the upper half-plane with marked boundary points `0, 1, λ, ∞`:
/// the rectangle image of `[0, 1]` is the unit vertical side and `[1, λ]`
/// the horizontal side, so `m(λ) = K(k')/K(k) = (2/π)·μ(k)` with `k = 1/√λ`.
pub fn quad_module_from_crossratio(lambda: f64) -> Result<QuadModule> {
    if !(lambda > 1.0) || lambda.is_infinite() {
        return Err(QcdError::domain(format!(
            "cross-ratio must exceed 1 (distinct vertices), got {lambda}"
        )));
    }
    // k = 1/√λ, k' = √(1 − 1/λ) = √((λ−1)/λ).
    let kp = ((lambda - 1.0) / lambda).sqrt();
    let m = EllipticModulus::from_pair(lambda.sqrt().recip(), kp)?;
    QuadModule::new(2.0 / PI * mu_of(&m)?)
}
