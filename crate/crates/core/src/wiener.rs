//! Elements `F = p + f̂` of the Wiener algebra, with `f` sampled on a uniform
//! grid. Each node carries mass `dx`, so the algebra product is exact on the
//! discrete level: `(F G)(z) = F(z) G(z)` and the norm is submultiplicative.

use crate::density::DensityDescriptor;
use crate::error::{QidError, Result};
use crate::numeric::pairwise_sum;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct WienerElement {
    pub p: Complex64,
    pub x0: f64,
    pub dx: f64,
    pub f: Vec<Complex64>,
}

impl WienerElement {
    pub fn constant(p: Complex64) -> Self {
        Self { p, x0: 0.0, dx: 1.0, f: vec![] }
    }

    /// `p + w f̂` with `f` sampled at `x0 + k dx`, `k in 0..n`.
    pub fn from_density(p: f64, w: f64, f: &DensityDescriptor, x0: f64, dx: f64, n: usize) -> Self {
        let f = (0..n).map(|k| Complex64::new(w * f.pdf(x0 + k as f64 * dx), 0.0)).collect();
        Self { p: Complex64::new(p, 0.0), x0, dx, f }
    }

    pub fn norm(&self) -> f64 {
        let abs: Vec<f64> = self.f.iter().map(|v| v.norm()).collect();
        self.p.norm() + self.dx * pairwise_sum(&abs)
    }

    pub fn eval(&self, z: f64) -> Complex64 {
        let terms: Vec<Complex64> = self
            .f
            .iter()
            .enumerate()
            .map(|(k, v)| v * Complex64::from_polar(self.dx, (self.x0 + k as f64 * self.dx) * z))
            .collect();
        self.p + pairwise_sum(&terms)
    }

    fn offset(&self, x: f64) -> Result<i64> {
        let k = ((x - self.x0) / self.dx).round();
        if (x - self.x0 - k * self.dx).abs() > 1e-9 * self.dx {
            return Err(QidError::InvalidParameter("Wiener elements live on incommensurate grids".into()));
        }
        Ok(k as i64)
    }

    /// Algebra product: `p q + (p g + q f + f * g)`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.f.is_empty() {
            return Ok(Self { p: self.p * other.p, x0: other.x0, dx: other.dx, f: other.f.iter().map(|v| v * self.p).collect() });
        }
        if other.f.is_empty() {
            return other.product(self);
        }
        if (self.dx - other.dx).abs() > 1e-12 * self.dx {
            return Err(QidError::InvalidParameter("Wiener elements need equal grid spacing".into()));
        }
        let dx = self.dx;
        let x_lo = self.x0.min(other.x0).min(self.x0 + other.x0);
        let base = Self { p: Complex64::new(0.0, 0.0), x0: x_lo, dx, f: vec![] };
        let off_a = base.offset(self.x0)?;
        let off_b = base.offset(other.x0)?;
        let off_c = base.offset(self.x0 + other.x0)?;
        let len_c = self.f.len() + other.f.len() - 1;
        let len = [off_a as usize + self.f.len(), off_b as usize + other.f.len(), off_c as usize + len_c]
            .into_iter()
            .max()
            .unwrap();
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        for (k, v) in self.f.iter().enumerate() {
            out[off_a as usize + k] += v * other.p;
        }
        for (k, v) in other.f.iter().enumerate() {
            out[off_b as usize + k] += v * self.p;
        }
        for (i, a) in self.f.iter().enumerate() {
            for (j, b) in other.f.iter().enumerate() {
                out[off_c as usize + i + j] += a * b * dx;
            }
        }
        Ok(Self { p: self.p * other.p, x0: x_lo, dx, f: out })
    }
}

/// `|p| + ||f||_1`.
pub fn wiener_norm(e: &WienerElement) -> f64 {
    e.norm()
}
