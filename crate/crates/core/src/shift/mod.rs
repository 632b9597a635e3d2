//! The extremal displacement map `f₍₀,ₓ₎` of the unit disc: boundary fixed
//! pointwise, `0 ↦ −x`, least maximal dilatation.
//!
//! Construction: let `φ` be the slit-disc to annulus map of
//! [`SlitAnnulusMap`] with slit `i[−√x, √x]`. The coverings
//! `p₁ = (φ⁻¹∘f₁⁻¹)²` and `p₂ = (φ⁻¹∘f₂⁻¹)²`, with `f₁(w) = w − 1/w` and
//! `f₂(w) = w + 1/w`, are two-sheeted and ramified over `0` and `−x`
//! respectively. The affine stretch between the two Joukowski ellipses
//! descends to `f = p₂ ∘ f̃₀ ∘ p₁⁻¹`.

mod slit;


use num_complex::Complex64;

use crate::affine::{AffineMap, Ellipse};
use crate::error::{QcdError, Result};
use crate::modulus;

pub use slit::{build_slit_annulus_map, SlitAnnulusMap};

/// Which Joukowski map: `w − 1/w` or `w + 1/w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JoukowskiSign {
    Minus,
    Plus,
}

impl JoukowskiSign {
    fn value(self) -> f64 {
        match self {
            JoukowskiSign::Minus => -1.0,
            JoukowskiSign::Plus => 1.0,
        }
    }
}

/// `w − 1/w` or `w + 1/w`.
pub fn joukowski(sign: JoukowskiSign, w: Complex64) -> Result<Complex64> {
    if w.norm() == 0.0 {
        return Err(QcdError::domain("the Joukowski map has a pole at w = 0"));
    }
    Ok(w + sign.value() / w)
}

/// The preimage of `v` under [`joukowski`] with modulus at least 1.
///
/// The two preimages have product `∓1`. When both lie on the unit circle
/// and differ (the open slit `i(−2, 2)` for `Minus`, `(−2, 2)` for `Plus`)
/// the branch is undetermined and both candidates are reported.
pub fn joukowski_inverse(sign: JoukowskiSign, v: Complex64) -> Result<Complex64> {
    if !v.is_finite() {
        return Err(QcdError::domain(format!("argument must be finite, got {v}")));
    }
    // w² − v·w + sign = 0
    let disc = (v * v - 4.0 * sign.value()).sqrt();
    let (r1, r2) = (0.5 * (v + disc), 0.5 * (v - disc));
    let (big, small) = if r1.norm() >= r2.norm() { (r1, r2) } else { (r2, r1) };
    let on_circle = (big.norm() - 1.0).abs() <= 1e-14 && (small.norm() - 1.0).abs() <= 1e-14;
    if on_circle && (big - small).norm() > 1e-7 {
        return Err(QcdError::BranchAmbiguity {
            first: big,
            second: small,
        });
    }
    Ok(big)
}

/// First or second covering of the disc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoveringIndex {
    First,
    Second,
}

/// `E₁ = f₁(annulus)`, semi-axes `(R − 1/R, R + 1/R)`.
fn first_ellipse(r: f64) -> Ellipse {
    Ellipse {
        alpha: r - 1.0 / r,
        beta: r + 1.0 / r,
    }
}

/// `p₁(ζ) = (φ⁻¹(f₁⁻¹(ζ)))²` on `E₁`, or `p₂` on `E₂ = f₂(annulus)`.
pub fn covering_p(index: CoveringIndex, map: &SlitAnnulusMap, zeta: Complex64) -> Result<Complex64> {
    let r = map.outer_radius();
    let (ellipse, sign) = match index {
        CoveringIndex::First => (first_ellipse(r), JoukowskiSign::Minus),
        CoveringIndex::Second => (first_ellipse(r).swapped(), JoukowskiSign::Plus),
    };
    if !zeta.is_finite() || ellipse.level(zeta) > 1.0 + 1e-12 {
        return Err(QcdError::domain(format!(
            "ζ = {zeta} lies outside the ellipse with semi-axes ({}, {})",
            ellipse.alpha, ellipse.beta
        )));
    }
    let w = match joukowski_inverse(sign, zeta) {
        Ok(w) => w,
        // The two candidates are conjugate (Plus) or reflected (Minus)
        // points of the unit circle; their images under (φ⁻¹)² coincide.
        Err(QcdError::BranchAmbiguity { first, .. }) => first,
        Err(e) => return Err(e),
    };
    let w = clamp_to_annulus(w, r);
    let y = map.inverse(w)?;
    Ok(y * y)
}

fn clamp_to_annulus(w: Complex64, r: f64) -> Complex64 {
    let n = w.norm();
    if n < 1.0 {
        w / n
    } else if n > r {
        w * (r / n)
    } else {
        w
    }
}

/// Stretch factor `(R + 1/R)/(R − 1/R) = (R² + 1)/(R² − 1)` of [`lifted_affine`].
fn stretch(r: f64) -> f64 {
    let r2 = r * r;
    (r2 + 1.0) / ((r - 1.0) * (r + 1.0))
}

/// The affine map `ξ + iη ↦ A·ξ + i·η/A` with `A = (R + 1/R)/(R − 1/R)`,
/// carrying `E₁` onto `E₂` compatibly with the boundary parametrizations.
pub fn lifted_affine(r: f64, zeta: Complex64) -> Result<Complex64> {
    Ok(lifted_affine_map(r)?.apply(zeta))
}

/// [`lifted_affine`] as an [`AffineMap`].
pub fn lifted_affine_map(r: f64) -> Result<AffineMap> {
    if !(r > 1.0) || !r.is_finite() {
        return Err(QcdError::domain(format!("outer radius must exceed 1, got {r}")));
    }
    let a = stretch(r);
    AffineMap::axis_scaling(a, 1.0 / a)
}

/// `K(x) = ((Φ(1/x) + 1)/(Φ(1/x) − 1))²`, the least maximal dilatation of
/// a boundary-fixing self-map of the disc sending 0 to a point at distance `x`.
pub fn extremal_dilatation(x: f64) -> Result<f64> {
    let p = phi_of_inverse(x)?;
    let a = (p + 1.0) / (p - 1.0);
    Ok(a * a)
}

/// `K(x) − 1 = 4Φ/(Φ − 1)²`, accurate when `K` is close to 1.
pub fn extremal_dilatation_minus_one(x: f64) -> Result<f64> {
    let p = phi_of_inverse(x)?;
    Ok(4.0 * p / ((p - 1.0) * (p - 1.0)))
}

fn phi_of_inverse(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(QcdError::domain(format!("displacement must lie in (0, 1), got {x}")));
    }
    modulus::phi(1.0 / x)
}

/// `2(√K − 1)`: no `K`-quasiconformal self-map of the disc fixing the
/// boundary moves 0 farther than this.
pub fn displacement_bound(k: f64) -> Result<f64> {
    if !(k >= 1.0) || !k.is_finite() {
        return Err(QcdError::domain(format!("dilatation must be finite and ≥ 1, got {k}")));
    }
    // √K − 1 = (K − 1)/(√K + 1) avoids cancellation near K = 1.
    Ok(2.0 * (k - 1.0) / (k.sqrt() + 1.0))
}

/// The extremal displacement map `f₍₀,ₓ₎`.
#[derive(Debug, Clone)]
pub struct ShiftMap {
    x: f64,
    outer_radius: f64,
    phi_inv_x: f64,
    dilatation: f64,
    phi_map: SlitAnnulusMap,
    affine: AffineMap,
}

/// Construct `f₍₀,ₓ₎`; the slit map is checked to within `tol`.
pub fn build_shift(x: f64, tol: f64) -> Result<ShiftMap> {
    if !(x > 0.0 && x < 1.0) {
        return Err(QcdError::domain(format!("displacement must lie in (0, 1), got {x}")));
    }
    let phi_map = build_slit_annulus_map(x.sqrt(), tol)?;
    let outer_radius = phi_map.outer_radius();
    let phi_inv_x = modulus::phi(1.0 / x)?;
    Ok(ShiftMap {
        x,
        outer_radius,
        phi_inv_x,
        dilatation: extremal_dilatation(x)?,
        affine: lifted_affine_map(outer_radius)?,
        phi_map,
    })
}

impl ShiftMap {
    /// The displacement: `f(0) = −x`.
    pub fn x(&self) -> f64 {
        self.x
    }

    /// `R = √Φ(1/x)`.
    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    /// `Φ(1/x)`.
    pub fn phi_inv_x(&self) -> f64 {
        self.phi_inv_x
    }

    /// Maximal dilatation `K(x)`.
    pub fn dilatation(&self) -> f64 {
        self.dilatation
    }

    /// `k = (K − 1)/(K + 1)`, the constant modulus of the Beltrami coefficient.
    pub fn beltrami_norm(&self) -> f64 {
        let p = self.phi_inv_x;
        // (K − 1)/(K + 1) with K = ((Φ+1)/(Φ−1))² simplifies to 2Φ/(Φ² + 1).
        2.0 * p / (p * p + 1.0)
    }

    pub fn phi_map(&self) -> &SlitAnnulusMap {
        &self.phi_map
    }

    /// `p₁⁻¹(z) = f₁(φ(√z))` on the principal square-root branch.
    pub fn lift(&self, z: Complex64) -> Result<Complex64> {
        self.lift_via(z.sqrt())
    }

    fn lift_via(&self, root: Complex64) -> Result<Complex64> {
        if root.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        joukowski(JoukowskiSign::Minus, self.phi_map.eval(root)?)
    }

    /// `p₂(f̃₀(ζ))`, the descent of one lifted point.
    fn descend(&self, zeta1: Complex64) -> Result<Complex64> {
        let zeta2 = self.affine.apply(zeta1);
        covering_p(CoveringIndex::Second, &self.phi_map, clamp_to_ellipse(zeta2, self.outer_radius))
    }

    /// `f` evaluated with the given square root of `z`.
    pub fn evaluate_on_branch(&self, root: Complex64) -> Result<Complex64> {
        if root.norm() > 1.0 + 1e-12 {
            return Err(QcdError::domain(format!("|z| must be at most 1, got |√z| = {}", root.norm())));
        }
        if root.norm() == 0.0 {
            return Ok(Complex64::new(-self.x, 0.0));
        }
        self.descend(self.lift_via(root)?)
    }
}

/// Pull a point that rounding pushed just outside `E₂` back onto it.
fn clamp_to_ellipse(zeta: Complex64, r: f64) -> Complex64 {
    let level = first_ellipse(r).swapped().level(zeta);
    if level > 1.0 {
        zeta / level.sqrt()
    } else {
        zeta
    }
}

/// `f₍₀,ₓ₎(z)` for `|z| ≤ 1`.
pub fn evaluate_shift(f: &ShiftMap, z: Complex64) -> Result<Complex64> {
    if !z.is_finite() {
        return Err(QcdError::domain(format!("argument must be finite, got {z}")));
    }
    let n = z.norm();
    if n > 1.0 + 1e-12 {
        return Err(QcdError::domain(format!("shift map is defined on the closed unit disc, got {z}")));
    }
    let z = if n > 1.0 { z / n } else { z };
    let w = f.evaluate_on_branch(z.sqrt())?;
    if !w.is_finite() {
        return Err(QcdError::Convergence {
            what: "shift map evaluation",
            residual: f64::INFINITY,
            tolerance: 0.0,
        });
    }
    Ok(w)
}

/// The Beltrami coefficient of the shift map and the quadratic
/// differential `q = ((p₁⁻¹)')²` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeltramiSample {
    pub z: Complex64,
    pub mu: Complex64,
    pub q: Complex64,
}

impl BeltramiSample {
    /// `μ·q/|q|`; real and equal to `(K − 1)/(K + 1)` for a Teichmüller map.
    pub fn teichmuller_phase(&self) -> Complex64 {
        self.mu * self.q / self.q.norm()
    }

    /// Pointwise dilatation `(1 + |μ|)/(1 − |μ|)`.
    pub fn dilatation(&self) -> f64 {
        let m = self.mu.norm();
        (1.0 + m) / (1.0 - m)
    }
}

/// Central finite differences of `f` at step `h`.
pub fn beltrami_of_shift(f: &ShiftMap, z: Complex64, h: f64) -> Result<BeltramiSample> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(QcdError::domain(format!("step must be positive, got {h}")));
    }
    let margin = 10.0 * h;
    let seg_dist = if z.re > 0.0 {
        z.norm()
    } else if z.re < -f.x {
        (z + f.x).norm()
    } else {
        z.im.abs()
    };
    if z.norm() > 1.0 - margin || seg_dist < margin {
        return Err(QcdError::domain(format!(
            "z = {z} must be interior and at least {margin} away from 0 and [−x, 0]"
        )));
    }
    let ev = |p: Complex64| evaluate_shift(f, p);
    let dx = (ev(z + h)? - ev(z - h)?) / (2.0 * h);
    let ih = Complex64::new(0.0, h);
    let dy = (ev(z + ih)? - ev(z - ih)?) / (2.0 * h);
    let fz = 0.5 * (dx - Complex64::i() * dy);
    let fzb = 0.5 * (dx + Complex64::i() * dy);
    let jac = fz.norm_sqr() - fzb.norm_sqr();
    if !(jac > 0.0) {
        return Err(QcdError::numeric(format!(
            "Jacobian estimate {jac} at z = {z} is not positive; step {h} too large"
        )));
    }
    // (p₁⁻¹)' is defined up to the sign of √z, so its square is single-valued.
    let root = z.sqrt();
    let lifted = |p: Complex64| f.lift_via(nearest_root(p, root));
    let g = (lifted(z + h)? - lifted(z - h)?) / (2.0 * h);
    Ok(BeltramiSample {
        z,
        mu: fzb / fz,
        q: g * g,
    })
}

/// The square root of `z` closest to `reference`.
fn nearest_root(z: Complex64, reference: Complex64) -> Complex64 {
    let r = z.sqrt();
    if (r - reference).norm() <= (r + reference).norm() {
        r
    } else {
        -r
    }
}

/// Angle samples `2πj/n`, `j = 0..n`.
#[cfg(test)]
pub(crate) fn angles(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |j| std::f64::consts::TAU * j as f64 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn shift(x: f64) -> ShiftMap {
        build_shift(x, 1e-9).unwrap()
    }

    #[test]
    fn joukowski_examples() {
        let i = Complex64::i();
        assert_eq!(joukowski(JoukowskiSign::Minus, i).unwrap(), 2.0 * i);
        assert_eq!(joukowski(JoukowskiSign::Plus, c(1.0, 0.0)).unwrap(), c(2.0, 0.0));
        assert!(joukowski(JoukowskiSign::Plus, c(0.0, 0.0)).is_err());
        let e = first_ellipse(2.0);
        for th in angles(64) {
            let v = joukowski(JoukowskiSign::Minus, Complex64::from_polar(2.0, th)).unwrap();
            assert!((e.level(v) - 1.0).abs() < 1e-14);
            assert!((v.re / 1.5).powi(2) + (v.im / 2.5).powi(2) - 1.0 < 1e-14);
        }
    }

    #[test]
    fn joukowski_inverse_examples() {
        assert!((joukowski_inverse(JoukowskiSign::Plus, c(2.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        let w = joukowski_inverse(JoukowskiSign::Minus, c(0.0, 2.0)).unwrap();
        assert!((w - Complex64::i()).norm() < 1e-7);
        match joukowski_inverse(JoukowskiSign::Plus, c(0.5, 0.0)) {
            Err(QcdError::BranchAmbiguity { first, second }) => {
                assert!((first - second.conj()).norm() < 1e-15);
                assert!((first.norm() - 1.0).abs() < 1e-15);
            }
            other => panic!("expected ambiguity, got {other:?}"),
        }
        assert!(matches!(
            joukowski_inverse(JoukowskiSign::Minus, c(0.0, 1.0)),
            Err(QcdError::BranchAmbiguity { .. })
        ));
    }

    #[test]
    fn joukowski_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut worst: f64 = 0.0;
        for _ in 0..500 {
            let w = Complex64::from_polar(rng.random_range(1.0 + 1e-6..2.0), rng.random_range(0.0..2.0 * PI));
            for sign in [JoukowskiSign::Minus, JoukowskiSign::Plus] {
                let v = joukowski(sign, w).unwrap();
                let back = joukowski_inverse(sign, v).unwrap();
                worst = worst.max((joukowski(sign, back).unwrap() - v).norm());
                assert!((back - w).norm() < 1e-6, "{w} → {back}");
            }
        }
        assert!(worst < 1e-12, "{worst}");
    }

    #[test]
    fn covering_examples() {
        let m = build_slit_annulus_map(0.5, 1e-9).unwrap();
        assert!(covering_p(CoveringIndex::First, &m, c(0.0, 0.0)).unwrap().norm() < 1e-12);
        assert!((covering_p(CoveringIndex::Second, &m, c(0.0, 0.0)).unwrap() + 0.25).norm() < 1e-12);
        let r = m.outer_radius();
        assert!(covering_p(CoveringIndex::First, &m, c(r, 0.0)).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let w = Complex64::from_polar(rng.random_range(1.0..r), rng.random_range(0.0..2.0 * PI));
            for (idx, sign) in [(CoveringIndex::First, JoukowskiSign::Minus), (CoveringIndex::Second, JoukowskiSign::Plus)] {
                let z = joukowski(sign, w).unwrap();
                let a = covering_p(idx, &m, z).unwrap();
                let b = covering_p(idx, &m, -z).unwrap();
                assert!((a - b).norm() < 1e-12);
                assert!(a.norm() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn covering_round_trips() {
        let f = shift(0.25);
        let m = f.phi_map();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let z = Complex64::from_polar(rng.random_range(0.0_f64..1.0).sqrt(), rng.random_range(0.0..2.0 * PI));
            let zeta = f.lift(z).unwrap();
            let back = covering_p(CoveringIndex::First, m, zeta).unwrap();
            assert!((back - z).norm() < 1e-9, "p₁: {z} → {back}");
            let zeta2 = joukowski(JoukowskiSign::Plus, m.eval(z.sqrt()).unwrap()).unwrap();
            let back2 = covering_p(CoveringIndex::Second, m, zeta2).unwrap();
            let expect = z.sqrt();
            assert!((back2 - expect * expect).norm() < 1e-9, "p₂: {z} → {back2}");
        }
    }

    #[test]
    fn lifted_affine_examples() {
        let r = 2.0_f64;
        let w = Complex64::from_polar(r, PI / 4.0);
        let lhs = lifted_affine(r, joukowski(JoukowskiSign::Minus, w).unwrap()).unwrap();
        let rhs = joukowski(JoukowskiSign::Plus, w).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
        assert_eq!(lifted_affine(r, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!((lifted_affine_map(r).unwrap().dilatation() - 25.0 / 9.0).abs() < 1e-14);
        assert!(lifted_affine(1.0, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn dilatation_examples() {
        let f = shift(0.25);
        assert!((f.dilatation() - 1.289_666_899_330_964).abs() < 1e-12);
        assert!((f.outer_radius() - 3.968_054_227_116_728).abs() < 1e-12);
        assert!((f.outer_radius().powi(2) - f.phi_inv_x()).abs() < 1e-9);
        assert!((shift(0.01).dilatation() - 1.01).abs() < 5e-4);
        for &x in &[0.1, 0.5, 0.9] {
            assert!(shift(x).dilatation() > (1.0 + x / 2.0).powi(2));
        }
        let k = f.dilatation();
        assert!((f.beltrami_norm() - (k - 1.0) / (k + 1.0)).abs() < 1e-15);
        assert!(build_shift(0.0, 1e-9).is_err());
        assert!(build_shift(1.0, 1e-9).is_err());
    }

    #[test]
    fn dilatation_monotone_and_asymptotic() {
        let mut last = 1.0;
        for i in 1..100 {
            let k = extremal_dilatation(i as f64 / 100.0).unwrap();
            assert!(k > last);
            last = k;
        }
        assert!(extremal_dilatation(1.0 - 1e-12).unwrap() > 50.0);
        let ratios: Vec<f64> = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&x| (extremal_dilatation_minus_one(x).unwrap() - x) / x)
            .collect();
        assert!(ratios[0] > ratios[1] && ratios[1] > ratios[2] && ratios[2] > 0.0);
        assert!(ratios[2] < 5e-3);
        assert!((ratios[1] - 0.005_044).abs() < 1e-5);
    }

    #[test]
    fn displacement_bound_examples() {
        assert_eq!(displacement_bound(1.0).unwrap(), 0.0);
        assert!((displacement_bound(4.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(displacement_bound(0.5).is_err());
        let b = displacement_bound(extremal_dilatation(0.25).unwrap()).unwrap();
        assert!((b - 0.271_270_040_599_279_8).abs() < 1e-12);
        for i in 1..50 {
            let x = i as f64 / 50.0;
            assert!(x < displacement_bound(extremal_dilatation(x).unwrap()).unwrap());
        }
    }

    #[test]
    fn shift_fixes_boundary_and_moves_origin() {
        let f = shift(0.25);
        assert!((evaluate_shift(&f, c(0.0, 0.0)).unwrap() + 0.25).norm() < 1e-8);
        assert!((evaluate_shift(&f, c(1e-12, 1e-12)).unwrap() + 0.25).norm() < 1e-5);
        let worst = angles(360)
            .map(|th| {
                let z = Complex64::from_polar(1.0, th);
                (evaluate_shift(&f, z).unwrap() - z).norm()
            })
            .fold(0.0, f64::max);
        assert!(worst < 1e-6, "{worst}");
        assert!(evaluate_shift(&f, c(1.5, 0.0)).is_err());
    }

    #[test]
    fn shift_branch_independence_and_symmetry() {
        let f = shift(0.25);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let z = Complex64::from_polar(rng.random_range(0.0_f64..1.0).sqrt(), rng.random_range(0.0..2.0 * PI));
            let a = f.evaluate_on_branch(z.sqrt()).unwrap();
            let b = f.evaluate_on_branch(-z.sqrt()).unwrap();
            assert!((a - b).norm() < 1e-10, "z = {z}: {a} vs {b}");
            let cz = evaluate_shift(&f, z.conj()).unwrap();
            assert!((cz - a.conj()).norm() < 1e-10);
            assert!(a.norm() < 1.0 + 1e-12);
        }
    }

    #[test]
    fn beltrami_is_teichmuller() {
        let f = shift(0.25);
        let k = f.beltrami_norm();
        assert!((k - 0.126_510_497_843_858_3).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut n = 0;
        while n < 50 {
            let z = Complex64::from_polar(rng.random_range(0.05_f64..0.9), rng.random_range(0.0..2.0 * PI));
            let Ok(s) = beltrami_of_shift(&f, z, 1e-5) else { continue };
            n += 1;
            assert!((s.mu.norm() - k).abs() < 1e-3, "z = {z}: |μ| = {}", s.mu.norm());
            let ph = s.teichmuller_phase();
            assert!((ph - k).norm() < 1e-3, "z = {z}: {ph}");
            let sc = beltrami_of_shift(&f, z.conj(), 1e-5).unwrap();
            assert!((sc.mu - s.mu.conj()).norm() < 1e-6);
        }
        assert!(beltrami_of_shift(&f, c(-0.1, 0.0), 1e-5).is_err());
        assert!(beltrami_of_shift(&f, c(0.5, 0.0), 0.0).is_err());
    }

    proptest! {
        #[test]
        fn shift_stays_in_disc(r in 0.0..1.0f64, th in 0.0..6.283f64, x in 0.02..0.9f64) {
            let f = build_shift(x, 1e-8).unwrap();
            let z = Complex64::from_polar(r, th);
            let w = evaluate_shift(&f, z).unwrap();
            prop_assert!(w.norm() <= 1.0 + 1e-9);
            prop_assert!((evaluate_shift(&f, z.conj()).unwrap() - w.conj()).norm() < 1e-9);
        }
    }
}
