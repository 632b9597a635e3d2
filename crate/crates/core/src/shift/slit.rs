use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{QcdError, Result};
use crate::modulus;
use crate::specfun::{inverse_sn_upper_factored, jacobi, jacobi_parts, EllipticModulus};

/// Conformal equivalence `φ` between the vertically slit disc
/// `D \ i[−s, s]` and the annulus `1 < |w| < R`.
///
/// Normalized so that `φ` commutes with `z ↦ z̄` and `z ↦ −z` and is real
/// positive on `(0, 1)`. The slit maps onto the inner circle, its two prime
/// ends at the origin onto `w = ±1`, and the tips `±is` onto `±i`.
///
/// Evaluation goes through the squared picture: `φ(z)² = ψ(z²)` where `ψ`
/// maps `D \ [−x, 0]` (`x = s²`) onto `1 < |w| < R²`. On the upper half-disc
/// `ψ` is the chain
///
/// ```text
/// t ↦ J = −(t + 1/t)/2 ↦ τ = (J − x)/(1 − xJ) ↦ u = sn⁻¹(τ | x)
///   ↦ ζ = (π/2K)·(i(u + K) + K') ↦ exp ζ
/// ```
///
/// whose Jacobi modulus is exactly `x`, so `log R² = πK'(x)/(2K(x)) = μ(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlitAnnulusMap {
    s: f64,
    x: f64,
    modulus: EllipticModulus,
    quarter: f64,
    quarter_c: f64,
    outer_radius: f64,
}

/// Slack allowed on the disc and annulus radii before an argument is
/// reported as out of domain.
const RADIUS_SLACK: f64 = 1e-9;

impl SlitAnnulusMap {
    /// Build the map without the self-consistency checks of
    /// [`build_slit_annulus_map`].
    pub fn new(s: f64) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(QcdError::domain(format!("slit half-length must lie in (0, 1), got {s}")));
        }
        let x = s * s;
        let modulus = EllipticModulus::new(x)?;
        let quarter = modulus.quarter_period()?;
        let quarter_c = modulus.complementary_quarter_period()?;
        let log_r2 = PI * quarter_c / (2.0 * quarter);
        Ok(Self {
            s,
            x,
            modulus,
            quarter,
            quarter_c,
            outer_radius: (0.5 * log_r2).exp(),
        })
    }

    /// Half-length `s` of the slit `i[−s, s]`.
    pub fn slit_half_length(&self) -> f64 {
        self.s
    }

    /// `R`, the outer radius of the image annulus.
    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    /// `φ(z)` for `|z| ≤ 1`. Points on the slit take the boundary value seen
    /// from the right half-plane (`Re z = +0`); `φ(0) = 1`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        check_finite(z)?;
        if z.norm() > 1.0 + RADIUS_SLACK {
            return Err(QcdError::domain(format!("φ is defined on the closed unit disc, got {z}")));
        }
        if z.re == 0.0 && z.im == 0.0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let (zq, signs) = to_first_quadrant(z);
        let t = square_first_quadrant(zq);
        let w2 = self.ring_upper(t)?;
        let w = upper_sqrt(w2);
        Ok(signs.restore(w))
    }

    /// `φ⁻¹(w)` for `1 ≤ |w| ≤ R`.
    pub fn inverse(&self, w: Complex64) -> Result<Complex64> {
        check_finite(w)?;
        let r = w.norm();
        if r < 1.0 - RADIUS_SLACK || r > self.outer_radius * (1.0 + RADIUS_SLACK) {
            return Err(QcdError::domain(format!(
                "φ⁻¹ is defined on 1 ≤ |w| ≤ {}, got {w}",
                self.outer_radius
            )));
        }
        let (wq, signs) = to_first_quadrant(w);
        let w2 = square_first_quadrant(wq);
        let t = self.ring_upper_inverse(w2)?;
        let z = upper_sqrt(t);
        Ok(signs.restore(z))
    }

    /// Complex derivative `φ'(z)`.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        check_finite(z)?;
        if z.norm() >= 1.0 + RADIUS_SLACK {
            return Err(QcdError::domain(format!("φ' is defined on the closed unit disc, got {z}")));
        }
        let (zq, signs) = to_first_quadrant(z);
        let t = square_first_quadrant(zq);
        let w = upper_sqrt(self.ring_upper(t)?);
        let x = self.x;
        let den = x * t * t + 2.0 * t + x;
        let dtau_dt = -2.0 * (1.0 - x * x) * (t * t - 1.0) / (den * den);
        let u = self.sn_inverse_of_t(t)?;
        let jt = jacobi(u, x)?;
        let cd = jt.cn * jt.dn;
        let d = if cd.norm() > 1e-7 && den.norm() > 1e-300 {
            zq * w * Complex64::new(0.0, PI / (2.0 * self.quarter)) * dtau_dt / cd
        } else {
            // cn·dn vanishes where τ = ±1 or ±1/x; fall back to a central
            // difference along the direction pointing into the disc.
            let h = 1e-6;
            let dir = if zq.norm() > 0.5 { -zq / zq.norm() } else { Complex64::new(1.0, 0.0) };
            let fp = self.eval(zq + dir * h)?;
            let fm = self.eval(zq + dir * (2.0 * h))?;
            (4.0 * fp - fm - 3.0 * w) / (2.0 * h * dir)
        };
        Ok(if signs.conjugated() { d.conj() } else { d })
    }

    fn sn_inverse_of_t(&self, t: Complex64) -> Result<Complex64> {
        let x = self.x;
        // τ = (J − x)/(1 − xJ) with J = −(t + 1/t)/2, cleared of 1/t:
        // τ = −P/Q, P = t² + 2xt + 1, Q = xt² + 2t + x. Then
        // 1 − τ² = −(1 − x²)(t² − 1)²/Q² and 1 − x²τ² = 4t(1 − x²)(xt + 1)(t + x)/Q²
        // stay accurate where τ reaches the branch points ±1 and ±1/x.
        let q = x * t * t + 2.0 * t + x;
        let tau = -(t * t + 2.0 * x * t + 1.0) / q;
        let c = (1.0 - x) * (1.0 + x);
        let q2 = q * q;
        let t2m1 = (t - 1.0) * (t + 1.0);
        let a = -c * t2m1 * t2m1 / q2;
        let b = 4.0 * c * t * (x * t + 1.0) * (t + x) / q2;
        inverse_sn_upper_factored(tau, a, b, &self.modulus)
    }

    /// `ψ` on the closed upper half of `D \ [−x, 0]`, landing in the closed
    /// upper half of `1 ≤ |w| ≤ R²`.
    fn ring_upper(&self, t: Complex64) -> Result<Complex64> {
        let u = self.sn_inverse_of_t(t)?;
        let scale = PI / (2.0 * self.quarter);
        let zeta = Complex64::new(scale * (self.quarter_c - u.im), scale * (u.re + self.quarter));
        Ok(zeta.exp())
    }

    /// Inverse of [`Self::ring_upper`].
    fn ring_upper_inverse(&self, w2: Complex64) -> Result<Complex64> {
        let w2 = if w2.im > 0.0 { w2 } else { Complex64::new(w2.re, 0.0) };
        let zeta = w2.ln();
        let scale = 2.0 * self.quarter / PI;
        let u = Complex64::new(scale * zeta.im - self.quarter, self.quarter_c - scale * zeta.re);
        let x = self.x;
        // J = jn/jd; near the pole of sn at iK' use sn(u) = 1/(k·sn(u − iK')).
        // disc = jn² − jd² is kept in factored form to avoid cancellation at
        // the double roots t = ±1.
        let (jn, jd, disc) = if u.im <= 0.5 * self.quarter_c {
            let ([sn, cn, _], den) = jacobi_parts(u, &self.modulus);
            let den = Complex64::new(den, 0.0);
            // den ∓ sn via den² − sn² = cn² (numerators), picking the sum
            // that does not cancel.
            let (minus, plus) = if sn.re >= 0.0 {
                let plus = den + sn;
                (cn * cn / plus, plus)
            } else {
                let minus = den - sn;
                (minus, cn * cn / minus)
            };
            (sn + x * den, den + x * sn, -(1.0 - x) * (1.0 + x) * minus * plus)
        } else {
            let shifted = u - Complex64::new(0.0, self.quarter_c);
            let ([sn, _, _], den) = jacobi_parts(shifted, &self.modulus);
            let den = Complex64::new(den, 0.0);
            let jn = den + x * x * sn;
            let jd = x * (sn + den);
            (jn, jd, jn * jn - jd * jd)
        };
        if !(jn.is_finite() && jd.is_finite() && disc.is_finite()) {
            return Err(QcdError::numeric(format!("Jacobi evaluation overflowed at u = {u}")));
        }
        if jd.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        // Small root of jd·t² + 2·jn·t + jd = 0.
        let disc = disc.sqrt();
        let big = if (jn + disc).norm() >= (jn - disc).norm() { jn + disc } else { jn - disc };
        if big.norm() == 0.0 {
            return Err(QcdError::numeric(format!("degenerate preimage at w² = {w2}")));
        }
        let t = -jd / big;
        Ok(Complex64::new(t.re, t.im.abs()))
    }
}

/// Build `φ` for the slit half-length `s` and check it against the Grötzsch
/// modulus and a round trip to within `tol`.
pub fn build_slit_annulus_map(s: f64, tol: f64) -> Result<SlitAnnulusMap> {
    if !(tol > 0.0) {
        return Err(QcdError::domain(format!("tolerance must be positive, got {tol}")));
    }
    let map = SlitAnnulusMap::new(s)?;
    let from_modulus = modulus::phi(1.0 / map.x)?.sqrt();
    let mut residual = (map.outer_radius - from_modulus).abs() / from_modulus;
    for probe in [
        Complex64::new(0.5 * (1.0 + s), 0.0),
        Complex64::new(0.3, 0.4),
        Complex64::from_polar(1.0, 0.7),
    ] {
        let back = map.inverse(map.eval(probe)?)?;
        residual = residual.max((back - probe).norm());
    }
    let edge = map.eval(Complex64::new(1.0, 0.0))?.norm();
    residual = residual.max((edge - map.outer_radius).abs() / map.outer_radius);
    if !(residual <= tol) {
        return Err(QcdError::Convergence {
            what: "slit-disc to annulus map",
            residual,
            tolerance: tol,
        });
    }
    Ok(map)
}

fn check_finite(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(QcdError::domain(format!("argument must be finite, got {z}")))
    }
}

/// Which reflections took a point into the closed first quadrant.
#[derive(Debug, Clone, Copy)]
struct QuadrantSigns {
    neg_re: bool,
    neg_im: bool,
}

impl QuadrantSigns {
    fn conjugated(self) -> bool {
        self.neg_re != self.neg_im
    }

    /// Undo the reduction for a map commuting with conjugation and negation.
    fn restore(self, w: Complex64) -> Complex64 {
        let w = if self.conjugated() { w.conj() } else { w };
        if self.neg_re {
            -w
        } else {
            w
        }
    }
}

fn to_first_quadrant(z: Complex64) -> (Complex64, QuadrantSigns) {
    (
        Complex64::new(z.re.abs(), z.im.abs()),
        QuadrantSigns {
            neg_re: z.re < 0.0,
            neg_im: z.im < 0.0,
        },
    )
}

/// Square of a first-quadrant point with a `+0` imaginary part on the axes.
fn square_first_quadrant(z: Complex64) -> Complex64 {
    Complex64::new((z.re - z.im) * (z.re + z.im), 2.0 * z.re * z.im)
}

/// Principal square root of a point of the closed upper half-plane, with the
/// negative real axis read as approached from above.
fn upper_sqrt(w: Complex64) -> Complex64 {
    let w = if w.im > 0.0 { w } else { Complex64::new(w.re, 0.0) };
    w.sqrt()
}
