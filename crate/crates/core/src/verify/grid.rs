use num_complex::Complex64;

use crate::error::{QcdError, Result};

/// Values sampled on the lattice `origin + (i·spacing.0, j·spacing.1)`,
/// `0 ≤ i < nx`, `0 ≤ j < ny`, stored row-major in `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField<T> {
    nx: usize,
    ny: usize,
    origin: (f64, f64),
    spacing: (f64, f64),
    values: Vec<T>,
}

pub type RealField = GridField<f64>;
pub type ComplexField = GridField<Complex64>;

/// Finite check shared by the scalar types a field may hold.
pub trait FieldValue: Copy {
    fn is_finite_value(&self) -> bool;
}

impl FieldValue for f64 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl FieldValue for Complex64 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl<T: FieldValue> GridField<T> {
    pub fn new(nx: usize, ny: usize, origin: (f64, f64), spacing: (f64, f64), values: Vec<T>) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(QcdError::domain("grid dimensions must be positive"));
        }
        if !(spacing.0 > 0.0 && spacing.1 > 0.0) {
            return Err(QcdError::domain(format!("grid spacing must be positive, got {spacing:?}")));
        }
        if values.len() != nx * ny {
            return Err(QcdError::domain(format!(
                "{} values do not fill a {nx}×{ny} grid",
                values.len()
            )));
        }
        if !values.iter().all(FieldValue::is_finite_value) {
            return Err(QcdError::numeric("grid values must be finite"));
        }
        Ok(Self {
            nx,
            ny,
            origin,
            spacing,
            values,
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn origin(&self) -> (f64, f64) {
        self.origin
    }

    pub fn spacing(&self) -> (f64, f64) {
        self.spacing
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[j * self.nx + i]
    }

    /// Coordinates of lattice node `(i, j)`.
    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.origin.0 + i as f64 * self.spacing.0,
            self.origin.1 + j as f64 * self.spacing.1,
        )
    }
}

impl GridField<f64> {
    /// Bilinear interpolation; `None` outside the lattice.
    pub fn interpolate(&self, x: f64, y: f64) -> Option<f64> {
        let fx = (x - self.origin.0) / self.spacing.0;
        let fy = (y - self.origin.1) / self.spacing.1;
        let eps = 1e-9;
        if !(fx >= -eps && fy >= -eps && fx <= (self.nx - 1) as f64 + eps && fy <= (self.ny - 1) as f64 + eps) {
            return None;
        }
        let i = (fx.max(0.0).floor() as usize).min(self.nx.saturating_sub(2));
        let j = (fy.max(0.0).floor() as usize).min(self.ny.saturating_sub(2));
        let (tx, ty) = (fx - i as f64, fy - j as f64);
        let at = |a: usize, b: usize| self.get(a.min(self.nx - 1), b.min(self.ny - 1));
        Some(
            (1.0 - tx) * (1.0 - ty) * at(i, j)
                + tx * (1.0 - ty) * at(i + 1, j)
                + (1.0 - tx) * ty * at(i, j + 1)
                + tx * ty * at(i + 1, j + 1),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bilinear_is_exact_on_bilinear_data() {
        let (nx, ny) = (5, 4);
        let f = |x: f64, y: f64| 1.0 + 2.0 * x - y + 0.5 * x * y;
        let mut v = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                v.push(f(-1.0 + 0.5 * i as f64, 0.25 * j as f64));
            }
        }
        let g = GridField::new(nx, ny, (-1.0, 0.0), (0.5, 0.25), v).unwrap();
        for &(x, y) in &[(-0.3, 0.1), (1.0, 0.75), (-1.0, 0.0), (0.77, 0.6)] {
            assert!((g.interpolate(x, y).unwrap() - f(x, y)).abs() < 1e-14);
        }
        assert!(g.interpolate(1.5, 0.0).is_none());
        assert_eq!(g.node(2, 1), (0.0, 0.25));
    }

    #[test]
    fn rejects_inconsistent_fields() {
        assert!(GridField::new(2, 2, (0.0, 0.0), (1.0, 1.0), vec![0.0; 3]).is_err());
        assert!(GridField::new(2, 2, (0.0, 0.0), (0.0, 1.0), vec![0.0; 4]).is_err());
        assert!(GridField::new(1, 1, (0.0, 0.0), (1.0, 1.0), vec![f64::NAN]).is_err());
        assert!(GridField::new(1, 1, (0.0, 0.0), (1.0, 1.0), vec![Complex64::new(1.0, 2.0)]).is_ok());
    }
}
