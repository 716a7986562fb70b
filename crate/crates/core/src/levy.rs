//! Signed quasi-Lévy densities, characteristic triplets and reconstruction of
//! the characteristic function from a triplet.

use crate::density::DensityDescriptor;
use crate::numeric::{chirp_z, pairwise_sum};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Negative,
    Positive,
}

/// One summand of a signed Lévy density.
#[derive(Debug, Clone, PartialEq)]
pub enum LevyTerm {
    /// `coef * f(x)`.
    Density { coef: f64, density: DensityDescriptor },
    /// `coef * |x|^(j-1) e^(-|x|/s) / ((j-1)! s^j)` on one half-line; transform
    /// `coef (1 + i s z)^(-j)` on the negative side, `coef (1 - i s z)^(-j)` on the positive one.
    Kernel { coef: f64, order: u32, side: Side, scale: f64 },
    /// `m (e^(-|x|/s) - e^(-|x|)) sgn(x) / |x|`: what the canonical singular
    /// term turns into after rescaling the line by `s`.
    SingularCorrection { m: i64, scale: f64 },
    /// Samples at `x0 + k dx`, each carrying mass `dx`.
    Tabulated { x0: f64, dx: f64, values: Vec<f64> },
}

/// `S(z) = Log(1 + iz) - Log(1 - iz)`, so that
/// `∫ (e^{ixz} - 1) e^{-|x|} sgn(x) / |x| dx = S(z)`.
pub fn singular_exponent(z: f64) -> Complex64 {
    Complex64::new(0.0, 2.0 * z.atan())
}

fn ln_factorial(n: u32) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

impl LevyTerm {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Density { coef, density } => coef * density.pdf(x),
            Self::Kernel { coef, order, side, scale } => {
                let on_side = match side {
                    Side::Negative => x < 0.0,
                    Side::Positive => x > 0.0,
                };
                if !on_side {
                    return 0.0;
                }
                let u = x.abs() / scale;
                let j = *order;
                let log = (j as f64 - 1.0) * if u > 0.0 { u.ln() } else { f64::NEG_INFINITY } - u - ln_factorial(j - 1);
                let val = if j == 1 { (-u).exp() } else { log.exp() };
                coef * val / scale
            }
            Self::SingularCorrection { m, scale } => {
                if x == 0.0 {
                    return 0.0;
                }
                let a = x.abs();
                let diff = (-a / scale).exp() - (-a).exp();
                *m as f64 * diff / a * x.signum()
            }
            Self::Tabulated { x0, dx, values } => {
                let t = (x - x0) / dx;
                let last = (values.len() - 1) as f64;
                if !(t >= 0.0 && t <= last) {
                    return 0.0;
                }
                let k = (t.floor() as usize).min(values.len().saturating_sub(2));
                let s = t - k as f64;
                values[k] * (1.0 - s) + values.get(k + 1).copied().unwrap_or(0.0) * s
            }
        }
    }

    /// `∫ (e^{ixz} - 1) term(x) dx`.
    pub fn exponent(&self, z: f64) -> Complex64 {
        match self {
            Self::Density { coef, density } => *coef * (density.ft(z) - 1.0),
            Self::Kernel { coef, order, side, scale } => {
                let base = match side {
                    Side::Negative => Complex64::new(1.0, scale * z),
                    Side::Positive => Complex64::new(1.0, -scale * z),
                };
                *coef * (base.powi(-(*order as i32)) - 1.0)
            }
            Self::SingularCorrection { m, scale } => {
                *m as f64 * (singular_exponent(scale * z) - singular_exponent(z))
            }
            Self::Tabulated { x0, dx, values } => {
                let terms: Vec<Complex64> = values
                    .iter()
                    .enumerate()
                    .map(|(k, v)| v * (Complex64::from_polar(1.0, (x0 + k as f64 * dx) * z) - 1.0))
                    .collect();
                pairwise_sum(&terms) * *dx
            }
        }
    }

    /// `exponent` at `z0 + j dz`, `j in 0..m`.
    pub fn exponent_grid(&self, z0: f64, dz: f64, m: usize) -> Vec<Complex64> {
        match self {
            Self::Tabulated { x0, dx, values } => {
                let a: Vec<Complex64> = values.iter().map(|v| Complex64::new(*v, 0.0)).collect();
                let total = pairwise_sum(values) * dx;
                chirp_z(&a, *x0, *dx, z0, dz, m).into_iter().map(|s| s * *dx - total).collect()
            }
            Self::Density { coef, density } => density
                .ft_grid(z0, dz, m)
                .into_iter()
                .map(|v| *coef * (v - 1.0))
                .collect(),
            _ => (0..m).map(|j| self.exponent(z0 + j as f64 * dz)).collect(),
        }
    }

    fn window(&self) -> (f64, f64) {
        match self {
            Self::Density { density, .. } => density.support(1e-12),
            Self::Kernel { order, side, scale, .. } => {
                let reach = scale * (30.0 + 2.0 * *order as f64);
                match side {
                    Side::Negative => (-reach, 0.0),
                    Side::Positive => (0.0, reach),
                }
            }
            Self::SingularCorrection { scale, .. } => {
                let reach = 30.0 * scale.max(1.0);
                (-reach, reach)
            }
            Self::Tabulated { x0, dx, values } => (*x0, x0 + (values.len() - 1) as f64 * dx),
        }
    }

    pub fn scale(&self, t: f64) -> Self {
        match self {
            Self::Density { coef, density } => Self::Density { coef: *coef, density: density.scale(t) },
            Self::Kernel { coef, order, side, scale } => {
                Self::Kernel { coef: *coef, order: *order, side: *side, scale: scale * t }
            }
            Self::SingularCorrection { m, scale } => Self::SingularCorrection { m: *m, scale: scale * t },
            Self::Tabulated { x0, dx, values } => Self::Tabulated {
                x0: x0 * t,
                dx: dx * t,
                values: values.iter().map(|v| v / t).collect(),
            },
        }
    }
}

/// A signed density kept as a sum of exactly known terms and a tabulated remainder.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SignedLevyDensity {
    pub terms: Vec<LevyTerm>,
}

impl SignedLevyDensity {
    pub fn zero() -> Self {
        Self { terms: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    pub fn exponent(&self, z: f64) -> Complex64 {
        self.terms.iter().map(|t| t.exponent(z)).sum()
    }

    pub fn exponent_grid(&self, z0: f64, dz: f64, m: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); m];
        for t in &self.terms {
            for (o, v) in out.iter_mut().zip(t.exponent_grid(z0, dz, m)) {
                *o += v;
            }
        }
        out
    }

    /// Interval covering every term's essential support.
    pub fn window(&self) -> (f64, f64) {
        self.terms.iter().fold((0.0, 0.0), |(lo, hi), t| {
            let (a, b) = t.window();
            (lo.min(a), hi.max(b))
        })
    }

    /// The tabulated remainder's grid, if any.
    pub fn tabulation(&self) -> Option<(f64, f64, usize)> {
        self.terms.iter().find_map(|t| match t {
            LevyTerm::Tabulated { x0, dx, values } => Some((*x0, *dx, values.len())),
            _ => None,
        })
    }

    pub fn scale(&self, t: f64) -> Self {
        Self { terms: self.terms.iter().map(|k| k.scale(t)).collect() }
    }

    pub fn merged(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self { terms }
    }

    /// Samples on `n` equispaced points of `[lo, hi]`.
    pub fn sample(&self, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
        let step = (hi - lo) / (n - 1) as f64;
        (0..n).map(|k| lo + k as f64 * step).map(|x| (x, self.eval(x))).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiLevyTriplet {
    pub gaussian_variance: f64,
    pub drift: f64,
    pub density: SignedLevyDensity,
    /// Coefficient of `e^{-|x|} sgn(x) / |x|` in the quasi-Lévy density.
    pub index: i64,
    /// Point masses `(location, weight)` of the quasi-Lévy measure.
    pub lattice_atoms: Vec<(f64, f64)>,
    pub location_shift: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Variation {
    pub positive: f64,
    pub negative: f64,
    pub total: f64,
}

impl QuasiLevyTriplet {
    pub fn dirac(x: f64) -> Self {
        Self {
            gaussian_variance: 0.0,
            drift: x,
            density: SignedLevyDensity::zero(),
            index: 0,
            lattice_atoms: vec![],
            location_shift: x,
        }
    }

    pub fn gaussian(mean: f64, variance: f64) -> Self {
        Self { gaussian_variance: variance, ..Self::dirac(mean) }
    }

    /// `|ν|` is finite exactly when the singular term is absent.
    pub fn finite_variation(&self) -> bool {
        self.index == 0
    }

    /// Triplet of the convolution of the two laws.
    pub fn add(&self, other: &Self) -> Self {
        let mut atoms = self.lattice_atoms.clone();
        atoms.extend(other.lattice_atoms.iter().copied());
        let mut density = self.density.merged(&other.density);
        let index = self.index + other.index;
        // Singular terms add through their coefficients only.
        density.terms.retain(|t| !matches!(t, LevyTerm::SingularCorrection { m: 0, .. }));
        Self {
            gaussian_variance: self.gaussian_variance + other.gaussian_variance,
            drift: self.drift + other.drift,
            density,
            index,
            lattice_atoms: atoms,
            location_shift: self.location_shift + other.location_shift,
        }
    }

    /// Log of the characteristic function at `z`.
    pub fn exponent(&self, z: f64) -> Complex64 {
        let mut e = Complex64::new(-0.5 * self.gaussian_variance * z * z, self.drift * z);
        e += self.density.exponent(z);
        e += self.index as f64 * singular_exponent(z);
        for (x, b) in &self.lattice_atoms {
            e += *b * (Complex64::from_polar(1.0, x * z) - 1.0);
        }
        e
    }

    /// Variation parts of ν on `[lo, hi]`; infinite when the singular term is present.
    pub fn variation(&self, lo: f64, hi: f64, n: usize) -> Variation {
        let step = (hi - lo) / (n - 1) as f64;
        let (mut pos, mut neg) = (Vec::with_capacity(n), Vec::with_capacity(n));
        for k in 0..n {
            let v = self.density.eval(lo + k as f64 * step) * step;
            if v > 0.0 {
                pos.push(v)
            } else {
                neg.push(-v)
            }
        }
        let mut positive = pairwise_sum(&pos);
        let mut negative = pairwise_sum(&neg);
        for (_, b) in &self.lattice_atoms {
            if *b > 0.0 {
                positive += b
            } else {
                negative -= b
            }
        }
        if self.index != 0 {
            positive = f64::INFINITY;
            negative = f64::INFINITY;
        }
        Variation { positive, negative, total: positive + negative }
    }

    /// `∫ (1 ∧ |x|) |g(x)| dx + Σ (1 ∧ |x_k|) |b_k|` over `[lo, hi]`, excluding the singular term.
    pub fn truncated_variation(&self, lo: f64, hi: f64, n: usize) -> f64 {
        let step = (hi - lo) / (n - 1) as f64;
        let parts: Vec<f64> = (0..n)
            .map(|k| {
                let x = lo + k as f64 * step;
                x.abs().min(1.0) * self.density.eval(x).abs() * step
            })
            .collect();
        pairwise_sum(&parts) + self.lattice_atoms.iter().map(|(x, b)| x.abs().min(1.0) * b.abs()).sum::<f64>()
    }
}

/// `exp(-a z²/2 + i γ₀ z + ∫ (e^{ixz} - 1) ν(dx))` at `z`.
pub fn reconstruct_at(t: &QuasiLevyTriplet, z: f64) -> Complex64 {
    t.exponent(z).exp()
}

/// Reconstruction on the uniform grid `z0 + j dz`, `j in 0..m`.
pub fn reconstruct_charfn(t: &QuasiLevyTriplet, z0: f64, dz: f64, m: usize) -> Vec<Complex64> {
    let dens = t.density.exponent_grid(z0, dz, m);
    (0..m)
        .map(|j| {
            let z = z0 + j as f64 * dz;
            let mut e = Complex64::new(-0.5 * t.gaussian_variance * z * z, t.drift * z) + dens[j];
            e += t.index as f64 * singular_exponent(z);
            for (x, b) in &t.lattice_atoms {
                e += *b * (Complex64::from_polar(1.0, x * z) - 1.0);
            }
            e.exp()
        })
        .collect()
}

/// Quasi-Lévy density of `Q(0) Q(z)^{-1}` style factors: the inverse transform
/// of `((1 - iz)/(1 + iz))^m - (-1)^m`, as kernels on one half-line.
pub fn index_kernels(m: i64) -> Vec<LevyTerm> {
    let k = m.unsigned_abs();
    let side = if m > 0 { Side::Negative } else { Side::Positive };
    let mut out = Vec::new();
    let mut binom = 1.0;
    for j in 1..=k {
        binom = binom * (k - j + 1) as f64 / j as f64;
        let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
        out.push(LevyTerm::Kernel { coef: sign * binom * 2f64.powi(j as i32), order: j as u32, side, scale: 1.0 });
    }
    out
}

/// `sup |Im g|` over samples.
pub fn im_residual(values: &[Complex64]) -> f64 {
    values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::integrate_panels;
    use approx::assert_abs_diff_eq;

    #[test]
    fn kernel_transform_matches_quadrature() {
        for side in [Side::Negative, Side::Positive] {
            for order in 1..4 {
                let t = LevyTerm::Kernel { coef: 1.3, order, side, scale: 0.7 };
                for z in [0.4, 2.0] {
                    let re = integrate_panels(|x| t.eval(x) * ((x * z).cos() - 1.0), -60.0, 60.0, &[0.0], 0.05);
                    let im = integrate_panels(|x| t.eval(x) * (x * z).sin(), -60.0, 60.0, &[0.0], 0.05);
                    let e = t.exponent(z);
                    assert!((e.re - re).abs() < 1e-10 && (e.im - im).abs() < 1e-10, "{side:?} {order} {z}");
                }
            }
        }
    }

    #[test]
    fn index_kernels_invert_cayley_power() {
        for m in [-3i64, -2, -1, 1, 2, 3] {
            let ks = index_kernels(m);
            for z in [0.0, 0.3, -1.7, 12.0] {
                let sum: Complex64 = ks
                    .iter()
                    .map(|k| k.exponent(z))
                    .sum::<Complex64>()
                    + ks.iter().map(|k| match k {
                        LevyTerm::Kernel { coef, .. } => *coef,
                        _ => 0.0,
                    }).sum::<f64>();
                let base = Complex64::new(1.0, -z) / Complex64::new(1.0, z);
                let expect = base.powi(m as i32) - if m % 2 == 0 { 1.0 } else { -1.0 };
                assert!((sum - expect).norm() < 1e-12, "m={m} z={z}");
            }
        }
    }

    #[test]
    fn singular_exponent_is_exact() {
        // ∫ (e^{ixz}-1) e^{-|x|} sgn(x)/|x| dx = 2i atan z; only the sine part survives.
        for z in [0.5, 3.0] {
            let im = 2.0 * integrate_panels(|x: f64| (-x).exp() * (x * z).sin() / x, 1e-12, 60.0, &[], 0.02);
            assert_abs_diff_eq!(singular_exponent(z).im, im, epsilon = 1e-10);
        }
    }

    #[test]
    fn unit_index_triplet_is_the_cayley_factor() {
        let t = QuasiLevyTriplet { index: 1, ..QuasiLevyTriplet::dirac(0.0) };
        for z in [-50.0, -1.0, 0.0, 0.3, 7.0] {
            let v = reconstruct_at(&t, z);
            assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-14);
            let q = Complex64::new(1.0, z) / Complex64::new(1.0, -z);
            assert!((v - q).norm() < 1e-14);
        }
    }

    #[test]
    fn singular_correction_rescales_the_index_term() {
        let base = QuasiLevyTriplet { index: 2, ..QuasiLevyTriplet::dirac(0.0) };
        let t = 0.4;
        let scaled = QuasiLevyTriplet {
            density: SignedLevyDensity { terms: vec![LevyTerm::SingularCorrection { m: 2, scale: t }] },
            ..base.clone()
        };
        for z in [0.5, 3.0, -8.0] {
            assert!((reconstruct_at(&scaled, z) - reconstruct_at(&base, t * z)).norm() < 1e-14);
        }
    }

    #[test]
    fn tabulated_grid_matches_pointwise() {
        let term = LevyTerm::Tabulated { x0: -2.0, dx: 0.1, values: (0..41).map(|k| (k as f64 * 0.2).sin()).collect() };
        let g = term.exponent_grid(-3.0, 0.05, 121);
        for (j, v) in g.iter().enumerate() {
            assert!((v - term.exponent(-3.0 + j as f64 * 0.05)).norm() < 1e-11);
        }
    }

    #[test]
    fn im_residual_examples() {
        let v = vec![Complex64::new(1.0, 0.0), Complex64::new(-2.0, 0.0)];
        assert_eq!(im_residual(&v), 0.0);
        let w: Vec<Complex64> = v.iter().map(|x| x + Complex64::new(0.0, 0.01)).collect();
        assert_abs_diff_eq!(im_residual(&w), 0.01);
    }
}
