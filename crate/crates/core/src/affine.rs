//! Real-affine maps `z ↦ a·z + b·z̄` and the extremal maps between
//! rectangles and between ellipses.

use num_complex::Complex64;

use crate::error::{QcdError, Result};

/// The sense-preserving real-linear map `z ↦ a·z + b·z̄` (`|b| < |a|`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    a: Complex64,
    b: Complex64,
}

impl AffineMap {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(QcdError::domain("affine coefficients must be finite"));
        }
        if !(b.norm() < a.norm()) {
            return Err(QcdError::domain(format!(
                "affine map is not sense-preserving: |b| = {} ≥ |a| = {}",
                b.norm(),
                a.norm()
            )));
        }
        Ok(Self { a, b })
    }

    /// Map scaling the real axis by `p` and the imaginary axis by `q`.
    pub fn axis_scaling(p: f64, q: f64) -> Result<Self> {
        if !(p > 0.0 && q > 0.0) {
            return Err(QcdError::domain(format!("axis scalings must be positive, got ({p}, {q})")));
        }
        Self::new(Complex64::new(0.5 * (p + q), 0.0), Complex64::new(0.5 * (p - q), 0.0))
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.a * z + self.b * z.conj()
    }

    /// `b/a`, constant over the plane.
    pub fn beltrami(&self) -> Complex64 {
        self.b / self.a
    }

    /// `(|a| + |b|)/(|a| − |b|)`.
    pub fn dilatation(&self) -> f64 {
        let (a, b) = (self.a.norm(), self.b.norm());
        (a + b) / (a - b)
    }

    pub fn jacobian(&self) -> f64 {
        self.a.norm_sqr() - self.b.norm_sqr()
    }

    pub fn inverse(&self) -> AffineMap {
        // (a z + b z̄)⁻¹ = (ā w − b w̄)/(|a|² − |b|²)
        let j = self.jacobian();
        AffineMap {
            a: self.a.conj() / j,
            b: -self.b / j,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            a: self.a * other.a + self.b * other.b.conj(),
            b: self.a * other.b + self.b * other.a.conj(),
        }
    }
}

/// Maximal dilatation `(|a| + |b|)/(|a| − |b|)` of `z ↦ a·z + b·z̄`.
pub fn affine_dilatation(a: Complex64, b: Complex64) -> Result<f64> {
    Ok(AffineMap::new(a, b)?.dilatation())
}

/// Two rectangles `[0, a₁] × [0, 1]` and `[0, a₂] × [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectanglePair {
    pub a1: f64,
    pub a2: f64,
}

impl RectanglePair {
    pub fn new(a1: f64, a2: f64) -> Result<Self> {
        if !(a1 > 0.0 && a2 > 0.0 && a1.is_finite() && a2.is_finite()) {
            return Err(QcdError::domain(format!("rectangle sides must be positive, got ({a1}, {a2})")));
        }
        Ok(Self { a1, a2 })
    }

    /// Least dilatation among vertex-preserving maps, `max(a₂/a₁, a₁/a₂)`.
    pub fn extremal_dilatation(&self) -> f64 {
        (self.a2 / self.a1).max(self.a1 / self.a2)
    }
}

/// The stretch `x + iy ↦ (a₂/a₁)·x + iy`, extremal among quasiconformal maps
/// sending vertices to vertices.
pub fn rect_extremal_map(pair: &RectanglePair) -> Result<AffineMap> {
    AffineMap::axis_scaling(pair.a2 / pair.a1, 1.0)
}

/// The ellipse `x²/α² + y²/β² ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    pub alpha: f64,
    pub beta: f64,
}

impl Ellipse {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
            return Err(QcdError::domain(format!("semi-axes must be positive, got ({alpha}, {beta})")));
        }
        Ok(Self { alpha, beta })
    }

    /// `x²/α² + y²/β²`; below 1 inside, 1 on the boundary.
    pub fn level(&self, z: Complex64) -> f64 {
        (z.re / self.alpha).powi(2) + (z.im / self.beta).powi(2)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.level(z) <= 1.0
    }

    pub fn boundary_point(&self, theta: f64) -> Complex64 {
        Complex64::new(self.alpha * theta.cos(), self.beta * theta.sin())
    }

    /// The ellipse with the axes exchanged.
    pub fn swapped(&self) -> Ellipse {
        Ellipse {
            alpha: self.beta,
            beta: self.alpha,
        }
    }
}

/// `x + iy ↦ (β/α)·x + i(α/β)·y`, mapping `E(α, β)` onto `E(β, α)` with
/// dilatation `max(β/α, α/β)²`.
pub fn ellipse_extremal_map(e: &Ellipse) -> Result<AffineMap> {
    AffineMap::axis_scaling(e.beta / e.alpha, e.alpha / e.beta)
}
