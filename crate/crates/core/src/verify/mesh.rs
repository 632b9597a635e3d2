use std::collections::VecDeque;
use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{QcdError, Result};

/// A piecewise-affine self-map of a triangulated disc: boundary vertices lie
/// on the unit circle and stay fixed, vertex 0 sits at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangulatedDiscMap {
    pub vertices: Vec<Complex64>,
    pub images: Vec<Complex64>,
    pub triangles: Vec<[usize; 3]>,
    boundary: Vec<bool>,
}

/// Default number of vertex rings of [`discrete_min_dilatation`].
pub const DEFAULT_MESH_REFINEMENT: usize = 10;

fn signed_area2(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    let (u, v) = (b - a, c - a);
    u.re * v.im - u.im * v.re
}

/// `Q = ‖J‖²/det J = K + 1/K` of the affine map taking the source triangle
/// onto the image triangle; `None` if the image is degenerate or reversed.
fn triangle_q(src: [Complex64; 3], img: [Complex64; 3]) -> Option<f64> {
    let (j, det) = jacobian(src, img);
    if !(det > 0.0) {
        return None;
    }
    Some((j[0][0].powi(2) + j[0][1].powi(2) + j[1][0].powi(2) + j[1][1].powi(2)) / det)
}

fn q_to_k(q: f64) -> f64 {
    let d = (q - 2.0).max(0.0) * (q + 2.0);
    0.5 * (q + d.sqrt())
}

/// Source edge matrix inverse `B` with `J = D·B`, `D` the image edge matrix.
fn edge_inverse(src: [Complex64; 3]) -> [[f64; 2]; 2] {
    let (e1, e2) = (src[1] - src[0], src[2] - src[0]);
    let det = e1.re * e2.im - e2.re * e1.im;
    [[e2.im / det, -e2.re / det], [-e1.im / det, e1.re / det]]
}

fn jacobian(src: [Complex64; 3], img: [Complex64; 3]) -> ([[f64; 2]; 2], f64) {
    let b = edge_inverse(src);
    let (d1, d2) = (img[1] - img[0], img[2] - img[0]);
    let d = [[d1.re, d2.re], [d1.im, d2.im]];
    let j = [
        [d[0][0] * b[0][0] + d[0][1] * b[1][0], d[0][0] * b[0][1] + d[0][1] * b[1][1]],
        [d[1][0] * b[0][0] + d[1][1] * b[1][0], d[1][0] * b[0][1] + d[1][1] * b[1][1]],
    ];
    (j, j[0][0] * j[1][1] - j[0][1] * j[1][0])
}

/// `Q` and its gradient with respect to the three image vertices.
fn triangle_q_grad(b: &[[f64; 2]; 2], img: [Complex64; 3]) -> Option<(f64, [Complex64; 3])> {
    let (d1, d2) = (img[1] - img[0], img[2] - img[0]);
    let d = [[d1.re, d2.re], [d1.im, d2.im]];
    let j = [
        [d[0][0] * b[0][0] + d[0][1] * b[1][0], d[0][0] * b[0][1] + d[0][1] * b[1][1]],
        [d[1][0] * b[0][0] + d[1][1] * b[1][0], d[1][0] * b[0][1] + d[1][1] * b[1][1]],
    ];
    let det_j = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if !(det_j > 0.0) {
        return None;
    }
    let fro = j[0][0].powi(2) + j[0][1].powi(2) + j[1][0].powi(2) + j[1][1].powi(2);
    let q = fro / det_j;
    // ∂‖J‖²/∂D = 2·J·Bᵀ, ∂det J/∂D = det J · D⁻ᵀ.
    let det_d = d[0][0] * d[1][1] - d[0][1] * d[1][0];
    let dinv_t = [[d[1][1] / det_d, -d[1][0] / det_d], [-d[0][1] / det_d, d[0][0] / det_d]];
    let mut g = [[0.0; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            let jbt = j[r][0] * b[c][0] + j[r][1] * b[c][1];
            g[r][c] = (2.0 * jbt - q * det_j * dinv_t[r][c]) / det_j;
        }
    }
    let g1 = Complex64::new(g[0][0], g[1][0]);
    let g2 = Complex64::new(g[0][1], g[1][1]);
    Some((q, [-(g1 + g2), g1, g2]))
}

impl TriangulatedDiscMap {
    /// Identity map on a disc triangulated by `rings` concentric rings, ring
    /// `j` holding `6j` equally spaced vertices at radius `j/rings`.
    pub fn polar(rings: usize) -> Result<Self> {
        if !(1..=64).contains(&rings) {
            return Err(QcdError::domain(format!("mesh refinement must lie in 1..=64, got {rings}")));
        }
        let mut vertices = vec![Complex64::new(0.0, 0.0)];
        let mut start = vec![0usize];
        for j in 1..=rings {
            start.push(vertices.len());
            let r = j as f64 / rings as f64;
            for k in 0..6 * j {
                vertices.push(Complex64::from_polar(r, TAU * k as f64 / (6 * j) as f64));
            }
        }
        let ring_len = |j: usize| if j == 0 { 1 } else { 6 * j };
        let at = |j: usize, k: usize| start[j] + k % ring_len(j);
        let mut triangles = Vec::new();
        for j in 1..=rings {
            for sector in 0..6 {
                for t in 0..j {
                    let inner = if j == 1 { at(0, 0) } else { at(j - 1, sector * (j - 1) + t) };
                    triangles.push([inner, at(j, sector * j + t), at(j, sector * j + t + 1)]);
                    if t + 1 < j {
                        triangles.push([inner, at(j, sector * j + t + 1), at(j - 1, sector * (j - 1) + t + 1)]);
                    }
                }
            }
        }
        for tri in &mut triangles {
            if signed_area2(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]) < 0.0 {
                tri.swap(1, 2);
            }
        }
        let boundary = (0..vertices.len()).map(|p| p >= start[rings]).collect();
        Ok(Self {
            images: vertices.clone(),
            vertices,
            triangles,
            boundary,
        })
    }

    pub fn is_boundary(&self, p: usize) -> bool {
        self.boundary[p]
    }

    fn corners(&self, t: &[usize; 3], pts: &[Complex64]) -> [Complex64; 3] {
        [pts[t[0]], pts[t[1]], pts[t[2]]]
    }

    /// Affine dilatation of every triangle; `None` if some image triangle
    /// is degenerate or reversed.
    pub fn triangle_dilatations(&self) -> Option<Vec<f64>> {
        self.triangles
            .iter()
            .map(|t| triangle_q(self.corners(t, &self.vertices), self.corners(t, &self.images)).map(q_to_k))
            .collect()
    }

    pub fn max_dilatation(&self) -> Option<f64> {
        self.triangle_dilatations().map(|v| v.into_iter().fold(1.0, f64::max))
    }

    pub fn is_orientation_preserving(&self) -> bool {
        self.triangles.iter().all(|t| {
            signed_area2(self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]) > 0.0
                && signed_area2(self.images[t[0]], self.images[t[1]], self.images[t[2]]) > 0.0
        })
    }
}

/// Outcome of [`discrete_min_dilatation`].
#[derive(Debug, Clone)]
pub struct DiscreteMinimum {
    /// Largest per-triangle dilatation of the best map found.
    pub dilatation: f64,
    /// Whether the last two temperature stages agreed to a relative `1e-5`.
    pub converged: bool,
    pub map: TriangulatedDiscMap,
}

struct Objective<'a> {
    mesh: &'a TriangulatedDiscMap,
    free: Vec<usize>,
    inverses: Vec<[[f64; 2]; 2]>,
}

impl Objective<'_> {
    fn images(&self, x: &[f64]) -> Vec<Complex64> {
        let mut img = self.mesh.images.clone();
        for (k, &p) in self.free.iter().enumerate() {
            img[p] = Complex64::new(x[2 * k], x[2 * k + 1]);
        }
        img
    }

    /// Soft maximum `T·log Σ exp(Q_t/T)` of the triangle `Q`s and its
    /// gradient; `None` if a triangle folds.
    fn eval(&self, x: &[f64], temp: f64) -> Option<(f64, Vec<f64>)> {
        let img = self.images(x);
        let mut qs = Vec::with_capacity(self.mesh.triangles.len());
        for (t, b) in self.mesh.triangles.iter().zip(&self.inverses) {
            qs.push(triangle_q_grad(b, self.mesh.corners(t, &img))?);
        }
        let qmax = qs.iter().map(|(q, _)| *q).fold(f64::MIN, f64::max);
        let weights: Vec<f64> = qs.iter().map(|(q, _)| ((q - qmax) / temp).exp()).collect();
        let total: f64 = weights.iter().sum();
        let value = qmax + temp * total.ln();
        let mut grad_v = vec![Complex64::new(0.0, 0.0); img.len()];
        for ((t, (_, g)), w) in self.mesh.triangles.iter().zip(&qs).zip(&weights) {
            let w = w / total;
            for c in 0..3 {
                grad_v[t[c]] += w * g[c];
            }
        }
        let mut grad = vec![0.0; x.len()];
        for (k, &p) in self.free.iter().enumerate() {
            grad[2 * k] = grad_v[p].re;
            grad[2 * k + 1] = grad_v[p].im;
        }
        Some((value, grad))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// L-BFGS with backtracking; steps that fold a triangle are shrunk.
fn lbfgs(obj: &Objective<'_>, x: &mut Vec<f64>, temp: f64, max_iter: usize) {
    const MEMORY: usize = 8;
    let Some((mut fx, mut g)) = obj.eval(x, temp) else {
        return;
    };
    let mut hist: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    for _ in 0..max_iter {
        let gnorm = dot(&g, &g).sqrt();
        if gnorm <= 1e-9 * (1.0 + fx.abs()) {
            return;
        }
        // Two-loop recursion.
        let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
        let mut alphas = Vec::with_capacity(hist.len());
        for (s, y, rho) in hist.iter().rev() {
            let a = rho * dot(s, &d);
            d.iter_mut().zip(y).for_each(|(di, yi)| *di -= a * yi);
            alphas.push(a);
        }
        if let Some((s, y, _)) = hist.back() {
            let gamma = dot(s, y) / dot(y, y);
            d.iter_mut().for_each(|v| *v *= gamma);
        } else {
            let scale = 1e-2 / gnorm.max(1e-300);
            d.iter_mut().for_each(|v| *v *= scale);
        }
        for ((s, y, rho), a) in hist.iter().zip(alphas.iter().rev()) {
            let b = rho * dot(y, &d);
            d.iter_mut().zip(s).for_each(|(di, si)| *di += (a - b) * si);
        }
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            hist.clear();
            d = g.iter().map(|v| -1e-2 * v / gnorm).collect();
            slope = dot(&g, &d);
        }
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + step * di).collect();
            if let Some((ft, gt)) = obj.eval(&trial, temp) {
                if ft <= fx + 1e-4 * step * slope {
                    accepted = Some((trial, ft, gt));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((xn, fnew, gn)) = accepted else {
            return;
        };
        let s: Vec<f64> = xn.iter().zip(x.iter()).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-16 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if hist.len() == MEMORY {
                hist.pop_front();
            }
            hist.push_back((s, y, 1.0 / sy));
        }
        let progress = fx - fnew;
        *x = xn;
        fx = fnew;
        g = gn;
        if progress.abs() <= 1e-15 * fx.abs() {
            return;
        }
    }
}

/// Minimize the largest per-triangle dilatation of a piecewise-affine
/// self-map of the triangulated disc with the boundary fixed and the centre
/// vertex sent to `−x`.
///
/// The max is replaced by a soft maximum of `Q = K + 1/K` whose temperature
/// is lowered in stages; the reported value is the true maximum of the best
/// map found. Deterministic.
pub fn discrete_min_dilatation(x: f64, mesh_refinement: usize) -> Result<DiscreteMinimum> {
    if !(0.0..1.0).contains(&x) {
        return Err(QcdError::domain(format!("displacement must lie in [0, 1), got {x}")));
    }
    let mut mesh = TriangulatedDiscMap::polar(mesh_refinement)?;
    // Start from the cone map z ↦ z − x(1 − |z|), orientation preserving for x < 1.
    for (img, v) in mesh.images.iter_mut().zip(&mesh.vertices) {
        *img = v - x * (1.0 - v.norm()).max(0.0);
    }
    for (p, img) in mesh.images.iter_mut().enumerate() {
        if mesh.boundary[p] {
            *img = mesh.vertices[p];
        }
    }
    mesh.images[0] = Complex64::new(-x, 0.0);
    if x == 0.0 {
        return Ok(DiscreteMinimum {
            dilatation: 1.0,
            converged: true,
            map: mesh,
        });
    }
    let free: Vec<usize> = (1..mesh.vertices.len()).filter(|&p| !mesh.boundary[p]).collect();
    let inverses = mesh
        .triangles
        .iter()
        .map(|t| edge_inverse(mesh.corners(t, &mesh.vertices)))
        .collect();
    let mut xs: Vec<f64> = free.iter().flat_map(|&p| [mesh.images[p].re, mesh.images[p].im]).collect();
    let obj = Objective {
        mesh: &mesh,
        free: free.clone(),
        inverses,
    };
    let mut best_x = xs.clone();
    let mut best_k = q_to_k_max(&obj, &xs).unwrap_or(f64::INFINITY);
    let mut stage_k = best_k;
    let mut converged = false;
    for &temp in &[3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5, 3e-6, 1e-6, 3e-7, 1e-7] {
        lbfgs(&obj, &mut xs, temp, 2000);
        if let Some(k) = q_to_k_max(&obj, &xs) {
            converged = (stage_k - k).abs() <= 1e-5 * k;
            stage_k = k;
            if k < best_k {
                best_k = k;
                best_x = xs.clone();
            }
        }
    }
    let images = obj.images(&best_x);
    drop(obj);
    mesh.images = images;
    if !mesh.is_orientation_preserving() {
        return Err(QcdError::numeric("minimizer lost orientation"));
    }
    Ok(DiscreteMinimum {
        dilatation: best_k,
        converged,
        map: mesh,
    })
}

fn q_to_k_max(obj: &Objective<'_>, x: &[f64]) -> Option<f64> {
    let img = obj.images(x);
    let mut worst: f64 = 1.0;
    for t in &obj.mesh.triangles {
        let q = triangle_q(obj.mesh.corners(t, &obj.mesh.vertices), obj.mesh.corners(t, &img))?;
        worst = worst.max(q_to_k(q));
    }
    Some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polar_mesh_is_valid() {
        for rings in [1, 2, 5] {
            let m = TriangulatedDiscMap::polar(rings).unwrap();
            assert_eq!(m.triangles.len(), 6 * rings * rings);
            assert_eq!(m.vertices.len(), 1 + 3 * rings * (rings + 1));
            assert!(m.is_orientation_preserving());
            assert_eq!(m.max_dilatation(), Some(1.0));
            let area: f64 = m
                .triangles
                .iter()
                .map(|t| 0.5 * signed_area2(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]))
                .sum();
            // inscribed polygon with 6·rings sides
            let n = 6.0 * rings as f64;
            assert!((area - 0.5 * n * (TAU / n).sin()).abs() < 1e-12);
        }
        assert!(TriangulatedDiscMap::polar(0).is_err());
    }

    #[test]
    fn gradient_matches_difference_quotient() {
        let src = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.1), Complex64::new(0.2, 0.9)];
        let img = [Complex64::new(0.1, 0.0), Complex64::new(1.3, 0.2), Complex64::new(0.1, 0.7)];
        let b = edge_inverse(src);
        let (q, g) = triangle_q_grad(&b, img).unwrap();
        assert!((q - triangle_q(src, img).unwrap()).abs() < 1e-14);
        let h = 1e-6;
        for c in 0..3 {
            for dir in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
                let mut p = img;
                let mut m = img;
                p[c] += h * dir;
                m[c] -= h * dir;
                let fd = (triangle_q(src, p).unwrap() - triangle_q(src, m).unwrap()) / (2.0 * h);
                let an = g[c].re * dir.re + g[c].im * dir.im;
                assert!((fd - an).abs() < 1e-7, "corner {c}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn approaches_the_extremal_dilatation_from_above() {
        let mut prev = 1.0;
        for x in [0.1, 0.25, 0.4] {
            let r = discrete_min_dilatation(x, 8).unwrap();
            let k = crate::shift::extremal_dilatation(x).unwrap();
            assert!(r.dilatation >= k && r.dilatation < 1.03 * k, "x = {x}: {} vs {k}", r.dilatation);
            assert!(r.dilatation > prev);
            assert!(r.map.is_orientation_preserving());
            assert!((r.map.images[0] + x).norm() == 0.0);
            assert!((r.map.max_dilatation().unwrap() - r.dilatation).abs() < 1e-12);
            prev = r.dilatation;
        }
    }

    #[test]
    fn zero_displacement_is_identity() {
        assert!(discrete_min_dilatation(0.25, 6).unwrap().converged);
        let r = discrete_min_dilatation(0.0, 4).unwrap();
        assert_eq!(r.dilatation, 1.0);
        let r = discrete_min_dilatation(1e-6, 4).unwrap();
        assert!(r.dilatation < 1.0 + 1e-4);
        assert!(discrete_min_dilatation(1.0, 4).is_err());
    }
}
