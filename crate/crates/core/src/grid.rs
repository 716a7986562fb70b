use crate::density::DensityDescriptor;
use crate::distribution::Distribution;
use crate::error::{QidError, Result};
use crate::numeric::is_power_of_two;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Samples of a characteristic function at `z_j = -z_max + j 2 z_max / (n - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharFunctionGrid {
    pub z_max: f64,
    pub values: Vec<Complex64>,
}

impl CharFunctionGrid {
    pub fn n_points(&self) -> usize {
        self.values.len()
    }

    pub fn dz(&self) -> f64 {
        2.0 * self.z_max / (self.values.len() - 1) as f64
    }

    pub fn z(&self, j: usize) -> f64 {
        -self.z_max + j as f64 * self.dz()
    }

    pub fn zs(&self) -> Vec<f64> {
        (0..self.values.len()).map(|j| self.z(j)).collect()
    }

    /// Samples an arbitrary function on the grid.
    pub fn from_fn<F: Fn(f64) -> Complex64>(z_max: f64, n: usize, f: F) -> Self {
        let dz = 2.0 * z_max / (n - 1) as f64;
        Self { z_max, values: (0..n).map(|j| f(-z_max + j as f64 * dz)).collect() }
    }

    /// Largest violation of Hermitian symmetry and of `|F| <= 1`.
    pub fn invariant_defects(&self) -> (f64, f64) {
        let n = self.values.len();
        let herm = (0..n / 2)
            .map(|j| (self.values[j] - self.values[n - 1 - j].conj()).norm())
            .fold(0.0, f64::max);
        let modulus = self.values.iter().map(|v| v.norm() - 1.0).fold(0.0, f64::max);
        (herm, modulus)
    }
}

fn check_tabulated(f: &DensityDescriptor, z_max: f64) -> Result<()> {
    match f {
        DensityDescriptor::Tabulated(t) => {
            if z_max > PI / t.dx {
                let estimate = t.kink_estimate(z_max);
                if estimate > 1e-6 {
                    return Err(QidError::CoarseGrid { z_max, estimate });
                }
            }
            Ok(())
        }
        DensityDescriptor::Mixture(cs) => cs.iter().try_for_each(|c| check_tabulated(&c.density, z_max)),
        DensityDescriptor::Convolution(a, b) => {
            check_tabulated(a, z_max)?;
            check_tabulated(b, z_max)
        }
        _ => Ok(()),
    }
}

/// Characteristic function of `dist` on a symmetric grid of `n_points`
/// (a power of two, at least 1024). Negative frequencies are filled by
/// conjugation, so the grid is exactly Hermitian.
pub fn charfn_eval(dist: &Distribution, z_max: f64, n_points: usize) -> Result<CharFunctionGrid> {
    if !is_power_of_two(n_points) || n_points < 1024 {
        return Err(QidError::InvalidParameter(format!("n_points must be a power of two >= 1024, got {n_points}")));
    }
    if !(z_max > 0.0) || !z_max.is_finite() {
        return Err(QidError::InvalidParameter(format!("z_max must be positive, got {z_max}")));
    }
    if let Some((_, f)) = dist.ac_part() {
        check_tabulated(f, z_max)?;
    }
    let dz = 2.0 * z_max / (n_points - 1) as f64;
    let half = n_points / 2;
    let upper = dist.charfn_grid(0.5 * dz, dz, half);
    let mut values = Vec::with_capacity(n_points);
    values.extend(upper.iter().rev().map(|v| v.conj()));
    values.extend(upper);
    Ok(CharFunctionGrid { z_max, values })
}
