//! Finite-difference oracle for ring modules.
//!
//! The potential of a ring domain is computed in logarithmic coordinates
//! `ζ = log z = s + iθ`. Dirichlet energy is conformally invariant, so the
//! module follows from the energy of the discrete solution on the
//! `(s, θ)` rectangle, where circles and radial slits are grid lines and no
//! boundary needs to be cut out of the lattice. The discretization is the
//! 5-point stencil written as an edge energy (equivalently piecewise-linear
//! elements on a right-triangle mesh), so mirror lines get half weights and
//! the discrete energy bounds the continuous one from above.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{QcdError, Result};
use crate::verify::grid::GridField;

/// Ring domains with a closed-form or independently known module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RingDomain {
    /// `r_in < |z| < r_out`.
    Annulus { r_in: f64, r_out: f64 },
    /// The unit disc minus the radial segment `[0, r]`.
    GrotzschRing { r: f64 },
    /// The unit disc minus the vertical slit `i[−s, s]`.
    SlitDisc { s: f64 },
}

/// Extent of the uniform band below a slit tip, in units of `s`.
const TIP_BAND: f64 = 0.5;
/// Depth of the truncated region below a slit tip.
const TAIL_DEPTH: f64 = 16.0;
/// Growth ratio of the `s` spacing in the tail.
const TAIL_GROWTH: f64 = 1.05;
const CG_RELATIVE_TOLERANCE: f64 = 1e-8;

/// Discrete harmonic potential: 0 on the inner boundary component, 1 on the
/// outer one, over the symmetric piece of the domain in `(s, θ)`.
#[derive(Debug, Clone)]
pub struct RingPotential {
    s_nodes: Vec<f64>,
    ncols: usize,
    h_theta: f64,
    periodic: bool,
    values: Vec<f64>,
    energy: f64,
    symmetry: f64,
    /// Index of the lowest row of the uniform part of the `s` grid.
    uniform_from: usize,
    iterations: usize,
}

impl RingPotential {
    /// Module `(1/2π)·log R` from the discrete energy.
    pub fn module(&self) -> f64 {
        1.0 / (self.symmetry * self.energy)
    }

    /// Dirichlet energy of the whole domain.
    pub fn energy(&self) -> f64 {
        self.symmetry * self.energy
    }

    pub fn cg_iterations(&self) -> usize {
        self.iterations
    }

    /// The potential on the uniform part of the lattice, with `x = θ`
    /// and `y = s`.
    pub fn field(&self) -> Result<GridField<f64>> {
        let rows = self.s_nodes.len() - self.uniform_from;
        let hs = if rows > 1 {
            self.s_nodes[self.uniform_from + 1] - self.s_nodes[self.uniform_from]
        } else {
            1.0
        };
        GridField::new(
            self.ncols,
            rows,
            (0.0, self.s_nodes[self.uniform_from]),
            (self.h_theta, hs),
            self.values[self.uniform_from * self.ncols..].to_vec(),
        )
    }
}

struct Lattice {
    s_nodes: Vec<f64>,
    ncols: usize,
    h_theta: f64,
    periodic: bool,
    fixed: Vec<bool>,
    values: Vec<f64>,
    uniform_from: usize,
    symmetry: f64,
}

impl Lattice {
    fn build(domain: RingDomain, n: usize) -> Result<Self> {
        match domain {
            RingDomain::Annulus { r_in, r_out } => {
                if !(r_in > 0.0 && r_out > r_in && r_out.is_finite()) {
                    return Err(QcdError::domain(format!("annulus needs 0 < r_in < r_out, got ({r_in}, {r_out})")));
                }
                let h_theta = 2.0 * PI / n as f64;
                let (s0, s1) = (r_in.ln(), r_out.ln());
                let rows = ((s1 - s0) / h_theta).ceil().max(4.0) as usize;
                let s_nodes = (0..=rows).map(|i| s0 + (s1 - s0) * i as f64 / rows as f64).collect();
                Ok(Self::with_rows(s_nodes, n, h_theta, true, 0, 1.0))
            }
            RingDomain::GrotzschRing { r } => {
                if !(r > 0.0 && r < 1.0) {
                    return Err(QcdError::domain(format!("Grötzsch ring needs r in (0, 1), got {r}")));
                }
                Self::slit(r.ln(), PI, n, 0, 2.0)
            }
            RingDomain::SlitDisc { s } => {
                if !(s > 0.0 && s < 1.0) {
                    return Err(QcdError::domain(format!("slit disc needs s in (0, 1), got {s}")));
                }
                Self::slit(s.ln(), 0.5 * PI, n, n, 4.0)
            }
        }
    }

    /// Lattice over `θ ∈ [0, range]` with the slit on column `slit_col` for
    /// `s ≤ tip`.
    fn slit(tip: f64, range: f64, n: usize, slit_col: usize, symmetry: f64) -> Result<Self> {
        let h_theta = range / n as f64;
        let above = ((-tip) / h_theta).round().max(2.0) as usize;
        let hs = -tip / above as f64;
        let band = (TIP_BAND / hs).ceil() as usize;
        // Built top-down, then reversed.
        let mut desc: Vec<f64> = (0..=above + band).map(|i| -(i as f64) * hs).collect();
        let bottom = tip - TAIL_DEPTH;
        let mut h = hs;
        while *desc.last().unwrap() > bottom {
            h *= TAIL_GROWTH;
            let next = desc.last().unwrap() - h;
            desc.push(next.max(bottom));
        }
        let tail = desc.len() - (above + band + 1);
        desc.reverse();
        let mut lat = Self::with_rows(desc, n + 1, h_theta, false, tail, symmetry);
        for (i, &s) in lat.s_nodes.iter().enumerate() {
            if s <= tip + 1e-12 * hs {
                let p = i * lat.ncols + slit_col;
                lat.fixed[p] = true;
                lat.values[p] = 0.0;
            }
        }
        Ok(lat)
    }

    fn with_rows(
        s_nodes: Vec<f64>,
        ncols: usize,
        h_theta: f64,
        periodic: bool,
        uniform_from: usize,
        symmetry: f64,
    ) -> Self {
        let rows = s_nodes.len();
        let (s0, s1) = (s_nodes[0], s_nodes[rows - 1]);
        let mut fixed = vec![false; rows * ncols];
        let mut values = vec![0.0; rows * ncols];
        for (i, &s) in s_nodes.iter().enumerate() {
            for j in 0..ncols {
                let p = i * ncols + j;
                values[p] = (s - s0) / (s1 - s0);
                if i == 0 || i == rows - 1 {
                    fixed[p] = true;
                }
            }
        }
        Self {
            s_nodes,
            ncols,
            h_theta,
            periodic,
            fixed,
            values,
            uniform_from,
            symmetry,
        }
    }
}

/// Edge weights of the energy `Σ w·(u_p − u_q)²`.
struct Stencil {
    rows: usize,
    ncols: usize,
    periodic: bool,
    /// Between rows `i` and `i + 1`, column `j`: `vert[i]·col_factor[j]`.
    vert: Vec<f64>,
    col_factor: Vec<f64>,
    /// Between columns `j` and `j + 1` in row `i`.
    horiz: Vec<f64>,
}

impl Stencil {
    fn new(lat: &Lattice) -> Self {
        let rows = lat.s_nodes.len();
        let hs: Vec<f64> = lat.s_nodes.windows(2).map(|w| w[1] - w[0]).collect();
        let vert = hs.iter().map(|h| lat.h_theta / h).collect();
        let horiz = (0..rows)
            .map(|i| {
                let below = if i > 0 { hs[i - 1] } else { 0.0 };
                let above = if i + 1 < rows { hs[i] } else { 0.0 };
                0.5 * (below + above) / lat.h_theta
            })
            .collect();
        let col_factor = (0..lat.ncols)
            .map(|j| if !lat.periodic && (j == 0 || j + 1 == lat.ncols) { 0.5 } else { 1.0 })
            .collect();
        Self {
            rows,
            ncols: lat.ncols,
            periodic: lat.periodic,
            vert,
            col_factor,
            horiz,
        }
    }

    fn for_each_edge(&self, mut f: impl FnMut(usize, usize, f64)) {
        let nc = self.ncols;
        for i in 0..self.rows {
            let wh = self.horiz[i];
            for j in 0..nc {
                let p = i * nc + j;
                if j + 1 < nc {
                    f(p, p + 1, wh);
                } else if self.periodic && nc > 1 {
                    f(p, i * nc, wh);
                }
                if i + 1 < self.rows {
                    f(p, p + nc, self.vert[i] * self.col_factor[j]);
                }
            }
        }
    }

    /// `out = L·x` with `(L·x)_p = Σ_q w_pq (x_p − x_q)`.
    fn apply(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        self.for_each_edge(|p, q, w| {
            let d = w * (x[p] - x[q]);
            out[p] += d;
            out[q] -= d;
        });
    }

    fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.rows * self.ncols];
        self.for_each_edge(|p, q, w| {
            d[p] += w;
            d[q] += w;
        });
        d
    }

    fn energy(&self, x: &[f64]) -> f64 {
        let mut e = 0.0;
        self.for_each_edge(|p, q, w| e += w * (x[p] - x[q]).powi(2));
        e
    }
}

/// Preconditioned conjugate gradients on the free nodes.
fn solve(lat: &mut Lattice, stencil: &Stencil) -> Result<usize> {
    let len = lat.values.len();
    let diag = stencil.diagonal();
    let mut r = vec![0.0; len];
    stencil.apply(&lat.values, &mut r);
    for p in 0..len {
        r[p] = if lat.fixed[p] { 0.0 } else { -r[p] };
    }
    let norm0 = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm0 == 0.0 {
        return Ok(0);
    }
    let mut z: Vec<f64> = (0..len).map(|p| r[p] / diag[p]).collect();
    let mut d = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut ad = vec![0.0; len];
    let max_iter = 50_000;
    for it in 1..=max_iter {
        stencil.apply(&d, &mut ad);
        let mut dad = 0.0;
        for p in 0..len {
            if lat.fixed[p] {
                ad[p] = 0.0;
            }
            dad += d[p] * ad[p];
        }
        let alpha = rz / dad;
        let mut rr = 0.0;
        for p in 0..len {
            lat.values[p] += alpha * d[p];
            r[p] -= alpha * ad[p];
            rr += r[p] * r[p];
        }
        if rr.sqrt() <= CG_RELATIVE_TOLERANCE * norm0 {
            return Ok(it);
        }
        let mut rz_new = 0.0;
        for p in 0..len {
            z[p] = r[p] / diag[p];
            rz_new += r[p] * z[p];
        }
        let beta = rz_new / rz;
        rz = rz_new;
        for p in 0..len {
            d[p] = if lat.fixed[p] { 0.0 } else { z[p] + beta * d[p] };
        }
    }
    Err(QcdError::numeric(format!(
        "Laplace solver did not converge in {max_iter} conjugate-gradient iterations"
    )))
}

/// Solve for the potential of `domain` with `n` angular cells over the
/// symmetric piece (`2π` for the annulus, `π` for the Grötzsch ring, `π/2`
/// for the slit disc).
pub fn ring_potential(domain: RingDomain, n: usize) -> Result<RingPotential> {
    if n < 32 {
        return Err(QcdError::domain(format!("grid size must be at least 32, got {n}")));
    }
    let mut lat = Lattice::build(domain, n)?;
    let stencil = Stencil::new(&lat);
    let iterations = solve(&mut lat, &stencil)?;
    let energy = stencil.energy(&lat.values);
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(QcdError::numeric(format!("degenerate discrete energy {energy}")));
    }
    Ok(RingPotential {
        s_nodes: lat.s_nodes,
        ncols: lat.ncols,
        h_theta: lat.h_theta,
        periodic: lat.periodic,
        values: lat.values,
        energy,
        symmetry: lat.symmetry,
        uniform_from: lat.uniform_from,
        iterations,
    })
}

/// Module of `domain` from the discrete Dirichlet energy.
pub fn laplace_ring_module(domain: RingDomain, n: usize) -> Result<f64> {
    Ok(ring_potential(domain, n)?.module())
}

/// Grid approximation of the slit-disc to annulus map, built from the
/// potential `u` and its harmonic conjugate: `φ = exp(log R·(u + i·v))`.
#[derive(Debug, Clone)]
pub struct SlitMapOracle {
    s: f64,
    log_r: f64,
    u: GridField<f64>,
    v: GridField<f64>,
}

/// Build the grid oracle for the slit half-length `s`.
pub fn slit_map_oracle(s: f64, n: usize) -> Result<SlitMapOracle> {
    let pot = ring_potential(RingDomain::SlitDisc { s }, n)?;
    let log_r = 2.0 * PI * pot.module();
    let u = pot.field()?;
    let (nc, rows) = (u.nx(), u.ny());
    let (h_theta, hs) = u.spacing();
    // v_θ = u_s along each row, v = 0 on θ = 0.
    let mut v = vec![0.0; nc * rows];
    for i in 0..rows {
        let us = |j: usize| {
            if i == 0 {
                (u.get(j, 1) - u.get(j, 0)) / hs
            } else if i + 1 == rows {
                (3.0 * u.get(j, i) - 4.0 * u.get(j, i - 1) + u.get(j, i - 2)) / (2.0 * hs)
            } else {
                (u.get(j, i + 1) - u.get(j, i - 1)) / (2.0 * hs)
            }
        };
        let mut acc = 0.0;
        let mut prev = us(0);
        for j in 1..nc {
            let cur = us(j);
            acc += 0.5 * h_theta * (prev + cur);
            v[i * nc + j] = acc;
            prev = cur;
        }
    }
    let v = GridField::new(nc, rows, u.origin(), u.spacing(), v)?;
    debug_assert!(!pot.periodic);
    Ok(SlitMapOracle { s, log_r, u, v })
}

impl SlitMapOracle {
    /// `log R` implied by the discrete module.
    pub fn log_outer_radius(&self) -> f64 {
        self.log_r
    }

    pub fn slit_half_length(&self) -> f64 {
        self.s
    }

    /// `φ(z)` for `s·e^{−1/2} ≤ |z| ≤ 1`, by bilinear interpolation.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let (a, b) = (z.re.abs(), z.im.abs());
        let s = z.norm().ln();
        let th = b.atan2(a);
        let (Some(u), Some(v)) = (self.u.interpolate(th, s.min(0.0)), self.v.interpolate(th, s.min(0.0))) else {
            return Err(QcdError::domain(format!("z = {z} lies outside the oracle's grid")));
        };
        let w = (self.log_r * Complex64::new(u, v)).exp();
        let w = if (z.re < 0.0) != (z.im < 0.0) { w.conj() } else { w };
        Ok(if z.re < 0.0 { -w } else { w })
    }
}
