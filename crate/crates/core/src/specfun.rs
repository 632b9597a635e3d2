//! Arithmetic-geometric mean, complete elliptic integrals and Jacobi
//! elliptic functions.
//!
//! The modulus convention is `k` (not the parameter `m = k²`). Everything
//! here is a pure function of its inputs except the AGM stopping threshold,
//! which is process-wide and defaults to [`DEFAULT_AGM_TOLERANCE`].

use std::f64::consts::FRAC_PI_2;
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

use crate::error::{QcdError, Result};

/// Relative stopping threshold of the AGM iteration.
pub const DEFAULT_AGM_TOLERANCE: f64 = 1e-15;

static AGM_TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3CD2_03AF_9EE7_5616); // 1e-15

const AGM_MAX_ITERATIONS: usize = 64;

/// Current relative AGM stopping threshold.
pub fn agm_tolerance() -> f64 {
    f64::from_bits(AGM_TOLERANCE_BITS.load(Ordering::Relaxed))
}

/// Replace the relative AGM stopping threshold. Values are clamped to
/// `[f64::EPSILON, 1e-3]`.
pub fn set_agm_tolerance(tol: f64) {
    let tol = if tol.is_finite() {
        tol.clamp(f64::EPSILON, 1e-3)
    } else {
        DEFAULT_AGM_TOLERANCE
    };
    AGM_TOLERANCE_BITS.store(tol.to_bits(), Ordering::Relaxed);
}

/// Arithmetic-geometric mean of `a > 0` and `b ≥ 0`.
pub fn agm(a: f64, b: f64) -> Result<f64> {
    agm_with_tolerance(a, b, agm_tolerance())
}

/// [`agm`] with an explicit relative stopping threshold.
pub fn agm_with_tolerance(a: f64, b: f64, tol: f64) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return Err(QcdError::domain(format!("agm arguments must be finite, got ({a}, {b})")));
    }
    if a < 0.0 || b < 0.0 || (a == 0.0 && b == 0.0) {
        return Err(QcdError::domain(format!(
            "agm needs nonnegative arguments, not both zero, got ({a}, {b})"
        )));
    }
    if a == 0.0 || b == 0.0 {
        return Ok(0.0);
    }
    let (mut a, mut b) = (a, b);
    for _ in 0..AGM_MAX_ITERATIONS {
        if (a - b).abs() <= tol * a.max(b) {
            return Ok(0.5 * (a + b));
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Err(QcdError::Convergence {
        what: "arithmetic-geometric mean",
        residual: (a - b).abs() / a.max(b),
        tolerance: tol,
    })
}

/// An elliptic modulus stored together with its complement so that both
/// `k` and `k'` keep full relative precision at either end of `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticModulus {
    k: f64,
    k_prime: f64,
}

impl EllipticModulus {
    /// Modulus from `k ∈ [0, 1)`.
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&k) {
            return Err(QcdError::domain(format!("elliptic modulus must lie in [0, 1), got {k}")));
        }
        Ok(Self {
            k,
            k_prime: ((1.0 - k) * (1.0 + k)).sqrt(),
        })
    }

    /// Modulus from the complementary modulus `k' ∈ (0, 1]`.
    pub fn from_complement(k_prime: f64) -> Result<Self> {
        if !(k_prime > 0.0 && k_prime <= 1.0) {
            return Err(QcdError::domain(format!(
                "complementary modulus must lie in (0, 1], got {k_prime}"
            )));
        }
        Ok(Self {
            k: ((1.0 - k_prime) * (1.0 + k_prime)).sqrt(),
            k_prime,
        })
    }

    /// Both values computed independently by the caller; only checked for
    /// consistency to a few ulps.
    pub(crate) fn from_pair(k: f64, k_prime: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&k) || !(k_prime > 0.0 && k_prime <= 1.0) {
            return Err(QcdError::domain(format!("invalid modulus pair ({k}, {k_prime})")));
        }
        debug_assert!((k * k + k_prime * k_prime - 1.0).abs() < 1e-14);
        Ok(Self { k, k_prime })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn k_prime(&self) -> f64 {
        self.k_prime
    }

    /// The complementary modulus as an `EllipticModulus` (roles swapped).
    /// Fails only for `k = 0`, whose complement `1` is not a valid modulus.
    pub fn complement(&self) -> Result<Self> {
        if self.k == 0.0 {
            return Err(QcdError::domain("the complement of k = 0 is the degenerate modulus 1"));
        }
        Ok(Self {
            k: self.k_prime,
            k_prime: self.k,
        })
    }

    /// `K(k)`.
    pub fn quarter_period(&self) -> Result<f64> {
        Ok(FRAC_PI_2 / agm(1.0, self.k_prime)?)
    }

    /// `K'(k) = K(k')`; infinite for `k = 0`.
    pub fn complementary_quarter_period(&self) -> Result<f64> {
        if self.k == 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok(FRAC_PI_2 / agm(1.0, self.k)?)
    }
}

/// Complete elliptic integral of the first kind,
/// `K(k) = ∫₀^{π/2} dθ / √(1 − k² sin²θ)`.
pub fn complete_elliptic_k(k: f64) -> Result<f64> {
    if k.is_nan() || k >= 1.0 {
        return Err(QcdError::domain(format!(
            "K(k) diverges for k ≥ 1 (got {k})"
        )));
    }
    EllipticModulus::new(k.abs())?.quarter_period()
}

/// Real Jacobi functions `(sn, cn, dn)(u | k)` by descending Landen
/// transformation. `k_prime_sq = 1 − k²` is passed directly to keep
/// precision when `k` is close to 1.
pub fn jacobi_real(u: f64, k_prime_sq: f64) -> (f64, f64, f64) {
    const CA: f64 = 1e-9;
    if k_prime_sq == 0.0 {
        let cn = 1.0 / u.cosh();
        return (u.tanh(), cn, cn);
    }
    let mut em = [0.0_f64; 16];
    let mut en = [0.0_f64; 16];
    let mut a = 1.0_f64;
    let mut emc = k_prime_sq;
    let mut c = 1.0_f64;
    let mut levels = 0;
    for i in 0..16 {
        levels = i + 1;
        em[i] = a;
        emc = emc.sqrt();
        en[i] = emc;
        c = 0.5 * (a + emc);
        if (a - emc).abs() <= CA * a {
            break;
        }
        emc *= a;
        a = c;
    }
    let u = u * c;
    let mut sn = u.sin();
    let mut cn = u.cos();
    let mut dn = 1.0;
    if sn != 0.0 {
        let mut a = cn / sn;
        c *= a;
        for ii in (0..levels).rev() {
            let b = em[ii];
            a *= c;
            c *= dn;
            dn = (en[ii] + a) / (b + a);
            a = c / b;
        }
        let a = 1.0 / (c * c + 1.0).sqrt();
        sn = if sn >= 0.0 { a } else { -a };
        cn = c * sn;
    }
    (sn, cn, dn)
}

/// Complex Jacobi elliptic functions at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiTriple {
    pub sn: Complex64,
    pub cn: Complex64,
    pub dn: Complex64,
}

/// Numerators and common real denominator of `(sn, cn, dn)(u | k)` from the
/// addition theorem. The denominator vanishes at the poles `u ≡ iK'`.
pub(crate) fn jacobi_parts(u: Complex64, m: &EllipticModulus) -> ([Complex64; 3], f64) {
    let k2 = m.k() * m.k();
    let kp2 = m.k_prime() * m.k_prime();
    let (s, c, d) = jacobi_real(u.re, kp2);
    let (s1, c1, d1) = jacobi_real(u.im, k2);
    let den = c1 * c1 + k2 * s * s * s1 * s1;
    let sn = Complex64::new(s * d1, c * d * s1 * c1);
    let cn = Complex64::new(c * c1, -s * d * s1 * d1);
    let dn = Complex64::new(d * c1 * d1, -k2 * s * c * s1);
    ([sn, cn, dn], den)
}

/// `(sn, cn, dn)(u | k)` for complex `u`.
pub fn jacobi(u: Complex64, k: f64) -> Result<JacobiTriple> {
    if !(u.re.is_finite() && u.im.is_finite()) {
        return Err(QcdError::domain(format!("jacobi argument must be finite, got {u}")));
    }
    if !(0.0..1.0).contains(&k) {
        return Err(QcdError::domain(format!("jacobi modulus must lie in [0, 1), got {k}")));
    }
    let m = EllipticModulus::new(k)?;
    let ([sn, cn, dn], den) = jacobi_parts(u, &m);
    // At a pole the computed denominator is a rounding residue of order ε².
    if den.abs() < 1e-28 {
        return Err(QcdError::numeric(format!("u = {u} is a pole of the Jacobi functions")));
    }
    let t = JacobiTriple {
        sn: sn / den,
        cn: cn / den,
        dn: dn / den,
    };
    if !(t.sn.is_finite() && t.cn.is_finite() && t.dn.is_finite()) {
        return Err(QcdError::numeric(format!("Jacobi functions overflow near the pole at {u}")));
    }
    Ok(t)
}

/// `sn(u | k)` for complex `u` and `k ∈ (0, 1)`.
pub fn jacobi_sn(u: Complex64, k: f64) -> Result<Complex64> {
    if !(k > 0.0 && k < 1.0) {
        return Err(QcdError::domain(format!("jacobi_sn needs k in (0, 1), got {k}")));
    }
    Ok(jacobi(u, k)?.sn)
}

/// Carlson's symmetric integral `R_F(x, y, z)` for complex arguments off the
/// closed negative real axis (signed zeros select the side of the cut).
pub fn carlson_rf(x: Complex64, y: Complex64, z: Complex64) -> Result<Complex64> {
    const STOP: f64 = 1.5e-3;
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..200 {
        let a = (x + y + z) / 3.0;
        let dx = 1.0 - x / a;
        let dy = 1.0 - y / a;
        let dz = 1.0 - z / a;
        if dx.norm().max(dy.norm()).max(dz.norm()) < STOP {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            let series = 1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0;
            return Ok(series / a.sqrt());
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = (x + lambda) * 0.25;
        y = (y + lambda) * 0.25;
        z = (z + lambda) * 0.25;
    }
    Err(QcdError::Convergence {
        what: "Carlson R_F duplication",
        residual: f64::NAN,
        tolerance: STOP,
    })
}

/// Inverse of `sn(· | k)` on the closed upper half-plane: returns the unique
/// `u` in the rectangle `[−K, K] × [0, K']` with `sn(u) = t`.
///
/// Points with a negative imaginary part are treated as lying on the real
/// axis approached from above.
pub fn inverse_sn_upper(t: Complex64, m: &EllipticModulus) -> Result<Complex64> {
    let t = if t.im > 0.0 { t } else { Complex64::new(t.re, 0.0) };
    let k2 = m.k() * m.k();
    let a = Complex64::new((1.0 - t.re) * (1.0 + t.re) + t.im * t.im, -2.0 * t.re * t.im);
    let b = Complex64::new(
        (1.0 - m.k() * t.re) * (1.0 + m.k() * t.re) + k2 * t.im * t.im,
        -2.0 * k2 * t.re * t.im,
    );
    inverse_sn_upper_factored(t, a, b, m)
}

/// [`inverse_sn_upper`] with `1 − t²` and `1 − k²t²` supplied by the caller,
/// who can often form them without cancellation near the branch points.
pub(crate) fn inverse_sn_upper_factored(
    t: Complex64,
    one_minus_t2: Complex64,
    one_minus_k2t2: Complex64,
    m: &EllipticModulus,
) -> Result<Complex64> {
    let t = if t.im > 0.0 { t } else { Complex64::new(t.re, 0.0) };
    let (mut a, mut b) = (one_minus_t2, one_minus_k2t2);
    if t.im == 0.0 {
        // Real t: the zero imaginary parts carry the sign of the limit from
        // the upper half-plane, which selects the side of the cut.
        let k2 = m.k() * m.k();
        a.im = -2.0 * t.re * t.im;
        b.im = -2.0 * k2 * t.re * t.im;
    }
    Ok(t * carlson_rf(a, b, Complex64::new(1.0, 0.0))?)
}
