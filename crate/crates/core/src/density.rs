//! Absolutely continuous parts: analytic families, tabulated piecewise-linear
//! densities, finite mixtures and (lazy) convolutions of these.

use crate::error::{QidError, Result};
use crate::numeric::{chirp_z, integrate_panels, pairwise_sum};
use num_complex::Complex64;
use statrs::function::erf::erfc;
use std::f64::consts::{PI, SQRT_2};


/// Mass tolerance for density normalisation.
pub const DENSITY_MASS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub weight: f64,
    pub density: DensityDescriptor,
}

/// A density sampled on a uniform grid, linear between nodes and zero outside
/// `[x0, x0 + (n-1) dx]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedDensity {
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<f64>,
    cumulative: Vec<f64>,
}

impl TabulatedDensity {
    pub fn new(x0: f64, dx: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(QidError::Schema("tabulated density needs at least two nodes".into()));
        }
        if !(dx > 0.0) || !dx.is_finite() || !x0.is_finite() {
            return Err(QidError::Schema("tabulated grid must be finite and strictly increasing".into()));
        }
        for (k, v) in values.iter().enumerate() {
            if !v.is_finite() || *v < 0.0 {
                return Err(QidError::NegativeDensity { x: x0 + k as f64 * dx, value: *v });
            }
        }
        let mut cumulative = Vec::with_capacity(values.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in values.windows(2) {
            acc += 0.5 * dx * (w[0] + w[1]);
            cumulative.push(acc);
        }
        Ok(Self { x0, dx, values, cumulative })
    }

    /// Builds from explicit nodes, which must be uniformly spaced to 1e-9 relative.
    pub fn from_nodes(xs: &[f64], values: Vec<f64>) -> Result<Self> {
        if xs.len() != values.len() || xs.len() < 2 {
            return Err(QidError::Schema("x and density columns must have equal length >= 2".into()));
        }
        let n = xs.len();
        let dx = (xs[n - 1] - xs[0]) / (n - 1) as f64;
        for (k, x) in xs.iter().enumerate() {
            if k > 0 && !(x > &xs[k - 1]) {
                return Err(QidError::Schema("tabulated x grid must be strictly increasing".into()));
            }
            let expected = xs[0] + k as f64 * dx;
            if (x - expected).abs() > 1e-9 * dx.max(xs[0].abs()).max(1.0) {
                return Err(QidError::Schema(format!("tabulated x grid is not uniform at node {k}")));
            }
        }
        Self::new(xs[0], dx, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x_end(&self) -> f64 {
        self.x0 + (self.values.len() - 1) as f64 * self.dx
    }

    pub fn mass(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let t = (x - self.x0) / self.dx;
        let last = (self.values.len() - 1) as f64;
        if !(t >= 0.0 && t <= last) {
            return 0.0;
        }
        let k = (t.floor() as usize).min(self.values.len() - 2);
        let s = t - k as f64;
        self.values[k] * (1.0 - s) + self.values[k + 1] * s
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let t = (x - self.x0) / self.dx;
        let last = (self.values.len() - 1) as f64;
        if t <= 0.0 {
            return 0.0;
        }
        if t >= last {
            return self.mass();
        }
        let k = (t.floor() as usize).min(self.values.len() - 2);
        let s = t - k as f64;
        let (a, b) = (self.values[k], self.values[k + 1]);
        self.cumulative[k] + self.dx * (a * s + 0.5 * (b - a) * s * s)
    }

    /// Right half-hat transform `d (1 + iu - e^{iu}) / u^2`, u = z d.
    fn half_hat(&self, z: f64) -> Complex64 {
        let u = z * self.dx;
        if u.abs() < 1e-3 {
            let u2 = u * u;
            Complex64::new(0.5 - u2 / 24.0 + u2 * u2 / 720.0, u / 6.0 - u * u2 / 120.0) * self.dx
        } else {
            (Complex64::new(1.0, u) - Complex64::from_polar(1.0, u)) * (self.dx / (u * u))
        }
    }

    fn ft_from_sum(&self, z: f64, s: Complex64) -> Complex64 {
        let a = self.half_hat(z);
        let n = self.values.len() - 1;
        let right = s - self.values[n] * Complex64::from_polar(1.0, self.x_end() * z);
        let left = s - self.values[0] * Complex64::from_polar(1.0, self.x0 * z);
        a * right + a.conj() * left
    }

    pub fn ft(&self, z: f64) -> Complex64 {
        let terms: Vec<Complex64> = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| v * Complex64::from_polar(1.0, (self.x0 + k as f64 * self.dx) * z))
            .collect();
        self.ft_from_sum(z, pairwise_sum(&terms))
    }

    pub fn ft_grid(&self, z0: f64, dz: f64, m: usize) -> Vec<Complex64> {
        let a: Vec<Complex64> = self.values.iter().map(|v| Complex64::new(*v, 0.0)).collect();
        let sums = chirp_z(&a, self.x0, self.dx, z0, dz, m);
        sums.into_iter()
            .enumerate()
            .map(|(j, s)| self.ft_from_sum(z0 + j as f64 * dz, s))
            .collect()
    }

    pub fn total_variation(&self) -> f64 {
        let inner: Vec<f64> = self.values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        self.values[0] + pairwise_sum(&inner) + self.values[self.values.len() - 1]
    }

    /// Heuristic error of the piecewise-linear interpretation at frequency z:
    /// curvature mass over z^2.
    pub fn kink_estimate(&self, z: f64) -> f64 {
        let curv: Vec<f64> = self
            .values
            .windows(3)
            .map(|w| (w[2] - 2.0 * w[1] + w[0]).abs())
            .collect();
        pairwise_sum(&curv) / self.dx / (z * z)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DensityDescriptor {
    Normal { mean: f64, variance: f64 },
    /// Density `rate * exp(-rate (x - loc))` on `x > loc`.
    Exponential { rate: f64, loc: f64 },
    Uniform { left: f64, right: f64 },
    Mixture(Vec<Component>),
    Tabulated(TabulatedDensity),
    Convolution(Box<DensityDescriptor>, Box<DensityDescriptor>),
}

fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

impl DensityDescriptor {
    pub fn normal(mean: f64, variance: f64) -> Self {
        Self::Normal { mean, variance }
    }

    pub fn exponential(rate: f64) -> Self {
        Self::Exponential { rate, loc: 0.0 }
    }

    pub fn uniform(left: f64, right: f64) -> Self {
        Self::Uniform { left, right }
    }

    /// Mixture from (weight, density) pairs; flattens nested mixtures and drops
    /// zero weights. A single surviving component is returned bare.
    pub fn mixture(parts: Vec<(f64, DensityDescriptor)>) -> Self {
        let mut comps = Vec::new();
        for (w, d) in parts {
            if w == 0.0 {
                continue;
            }
            match d {
                Self::Mixture(inner) => {
                    for c in inner {
                        comps.push(Component { weight: w * c.weight, density: c.density });
                    }
                }
                other => comps.push(Component { weight: w, density: other }),
            }
        }
        if comps.len() == 1 {
            return comps.pop().unwrap().density;
        }
        Self::Mixture(comps)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Normal { mean, variance } => {
                if !mean.is_finite() || !(*variance > 0.0) || !variance.is_finite() {
                    return Err(QidError::Schema(format!("normal needs finite mean and variance > 0, got ({mean}, {variance})")));
                }
            }
            Self::Exponential { rate, loc } => {
                if !(*rate > 0.0) || !rate.is_finite() || !loc.is_finite() {
                    return Err(QidError::Schema(format!("exponential needs rate > 0, got {rate}")));
                }
            }
            Self::Uniform { left, right } => {
                if !left.is_finite() || !right.is_finite() || !(right > left) {
                    return Err(QidError::Schema(format!("uniform needs left < right, got [{left}, {right}]")));
                }
            }
            Self::Mixture(comps) => {
                if comps.is_empty() {
                    return Err(QidError::Schema("mixture needs at least one component".into()));
                }
                for c in comps {
                    if !(c.weight > 0.0) || !c.weight.is_finite() {
                        return Err(QidError::Schema(format!("mixture weight {} is not positive", c.weight)));
                    }
                    c.density.validate()?;
                }
                let total: f64 = pairwise_sum(&comps.iter().map(|c| c.weight).collect::<Vec<_>>());
                if (total - 1.0).abs() > 1e-12 {
                    return Err(QidError::MassSum { sum: total });
                }
            }
            Self::Tabulated(t) => {
                let mass = t.mass();
                if (mass - 1.0).abs() > DENSITY_MASS_TOL {
                    return Err(QidError::Schema(format!("tabulated density integrates to {mass}, expected 1")));
                }
            }
            Self::Convolution(a, b) => {
                a.validate()?;
                b.validate()?;
            }
        }
        Ok(())
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match self {
            Self::Normal { mean, variance } => {
                let d = x - mean;
                (-0.5 * d * d / variance).exp() / (2.0 * PI * variance).sqrt()
            }
            Self::Exponential { rate, loc } => {
                if x < *loc {
                    0.0
                } else {
                    rate * (-rate * (x - loc)).exp()
                }
            }
            Self::Uniform { left, right } => {
                if x >= *left && x <= *right {
                    1.0 / (right - left)
                } else {
                    0.0
                }
            }
            Self::Mixture(comps) => comps.iter().map(|c| c.weight * c.density.pdf(x)).sum(),
            Self::Tabulated(t) => t.pdf(x),
            Self::Convolution(a, b) => {
                let (lo, hi) = a.support(1e-15);
                let (blo, bhi) = b.support(1e-15);
                let lo = lo.max(x - bhi);
                let hi = hi.min(x - blo);
                let mut breaks = a.breakpoints();
                breaks.extend(b.breakpoints().into_iter().map(|t| x - t));
                let step = a.scale_hint().min(b.scale_hint()) / 4.0;
                integrate_panels(|y| a.pdf(y) * b.pdf(x - y), lo, hi, &breaks, step)
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Self::Normal { mean, variance } => std_normal_cdf((x - mean) / variance.sqrt()),
            Self::Exponential { rate, loc } => {
                if x <= *loc {
                    0.0
                } else {
                    -(-rate * (x - loc)).exp_m1()
                }
            }
            Self::Uniform { left, right } => ((x - left) / (right - left)).clamp(0.0, 1.0),
            Self::Mixture(comps) => comps.iter().map(|c| c.weight * c.density.cdf(x)).sum(),
            Self::Tabulated(t) => t.cdf(x),
            Self::Convolution(a, b) => {
                let (lo, hi) = a.support(1e-15);
                let (blo, bhi) = b.support(1e-15);
                // Below x - bhi the inner cdf is 1; above x - blo it is 0.
                let full = if x - bhi > lo { a.cdf(x - bhi) } else { 0.0 };
                let lo2 = lo.max(x - bhi);
                let hi2 = hi.min(x - blo);
                let mut breaks = a.breakpoints();
                breaks.extend(b.breakpoints().into_iter().map(|t| x - t));
                let step = a.scale_hint().min(b.scale_hint()) / 4.0;
                full + integrate_panels(|y| a.pdf(y) * b.cdf(x - y), lo2, hi2, &breaks, step)
            }
        }
    }

    /// Fourier transform `int e^{ixz} f(x) dx`.
    pub fn ft(&self, z: f64) -> Complex64 {
        match self {
            Self::Normal { mean, variance } => {
                Complex64::from_polar((-0.5 * variance * z * z).exp(), mean * z)
            }
            Self::Exponential { rate, loc } => {
                Complex64::from_polar(1.0, loc * z) * *rate / Complex64::new(*rate, -z)
            }
            Self::Uniform { left, right } => {
                let half = 0.5 * (right - left);
                let c = 0.5 * (right + left);
                let u = half * z;
                let sinc = if u.abs() < 1e-8 { 1.0 - u * u / 6.0 } else { u.sin() / u };
                Complex64::from_polar(sinc, c * z)
            }
            Self::Mixture(comps) => comps.iter().map(|c| c.weight * c.density.ft(z)).sum(),
            Self::Tabulated(t) => t.ft(z),
            Self::Convolution(a, b) => a.ft(z) * b.ft(z),
        }
    }

    /// Transform at `z0 + j dz` for `j in 0..m`.
    pub fn ft_grid(&self, z0: f64, dz: f64, m: usize) -> Vec<Complex64> {
        match self {
            Self::Tabulated(t) => t.ft_grid(z0, dz, m),
            Self::Mixture(comps) => {
                let mut out = vec![Complex64::new(0.0, 0.0); m];
                for c in comps {
                    for (o, v) in out.iter_mut().zip(c.density.ft_grid(z0, dz, m)) {
                        *o += c.weight * v;
                    }
                }
                out
            }
            Self::Convolution(a, b) => a
                .ft_grid(z0, dz, m)
                .into_iter()
                .zip(b.ft_grid(z0, dz, m))
                .map(|(x, y)| x * y)
                .collect(),
            _ => (0..m).map(|j| self.ft(z0 + j as f64 * dz)).collect(),
        }
    }

    /// Total variation including boundary jumps; `|ft(z)| <= TV / |z|`.
    pub fn total_variation(&self) -> f64 {
        match self {
            Self::Normal { variance, .. } => 2.0 / (2.0 * PI * variance).sqrt(),
            Self::Exponential { rate, .. } => 2.0 * rate,
            Self::Uniform { left, right } => 2.0 / (right - left),
            Self::Mixture(comps) => comps.iter().map(|c| c.weight * c.density.total_variation()).sum(),
            Self::Tabulated(t) => t.total_variation(),
            Self::Convolution(a, b) => a.total_variation().min(b.total_variation()),
        }
    }

    /// An upper bound for `|ft(z)|`, sharper than `TV/|z|` where a closed form exists.
    pub fn envelope(&self, z: f64) -> f64 {
        let z = z.abs();
        match self {
            Self::Normal { variance, .. } => (-0.5 * variance * z * z).exp(),
            Self::Exponential { rate, .. } => rate / rate.hypot(z),
            Self::Uniform { left, right } => {
                if z == 0.0 {
                    1.0
                } else {
                    (2.0 / ((right - left) * z)).min(1.0)
                }
            }
            Self::Mixture(comps) => comps.iter().map(|c| c.weight * c.density.envelope(z)).sum(),
            Self::Tabulated(t) => {
                if z == 0.0 {
                    1.0
                } else {
                    (t.total_variation() / z).min(1.0)
                }
            }
            Self::Convolution(a, b) => a.envelope(z) * b.envelope(z),
        }
    }

    /// Interval outside of which the density carries mass below `eps`.
    pub fn support(&self, eps: f64) -> (f64, f64) {
        let eps = eps.clamp(1e-300, 0.5);
        match self {
            Self::Normal { mean, variance } => {
                let k = (2.0 * (1.0 / eps).ln()).sqrt().max(1.0);
                let s = variance.sqrt();
                (mean - k * s, mean + k * s)
            }
            Self::Exponential { rate, loc } => (*loc, loc + (1.0 / eps).ln() / rate),
            Self::Uniform { left, right } => (*left, *right),
            Self::Mixture(comps) => comps.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |acc, c| {
                let (l, h) = c.density.support(eps);
                (acc.0.min(l), acc.1.max(h))
            }),
            Self::Tabulated(t) => (t.x0, t.x_end()),
            Self::Convolution(a, b) => {
                let (al, ah) = a.support(eps / 2.0);
                let (bl, bh) = b.support(eps / 2.0);
                (al + bl, ah + bh)
            }
        }
    }

    /// Points where the density has a jump or kink.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Self::Normal { .. } => vec![],
            Self::Exponential { loc, .. } => vec![*loc],
            Self::Uniform { left, right } => vec![*left, *right],
            Self::Mixture(comps) => comps.iter().flat_map(|c| c.density.breakpoints()).collect(),
            Self::Tabulated(t) => (0..t.len()).map(|k| t.x0 + k as f64 * t.dx).collect(),
            Self::Convolution(a, b) => {
                let mut out = Vec::new();
                for x in a.breakpoints() {
                    for y in b.breakpoints() {
                        out.push(x + y);
                    }
                }
                out
            }
        }
    }

    /// Length scale on which the density varies.
    pub fn scale_hint(&self) -> f64 {
        match self {
            Self::Normal { variance, .. } => variance.sqrt(),
            Self::Exponential { rate, .. } => 1.0 / rate,
            Self::Uniform { left, right } => right - left,
            Self::Mixture(comps) => comps
                .iter()
                .map(|c| c.density.scale_hint())
                .fold(f64::INFINITY, f64::min),
            Self::Tabulated(t) => 8.0 * t.dx,
            Self::Convolution(a, b) => a.scale_hint().max(b.scale_hint()),
        }
    }

    pub fn shift(&self, c: f64) -> Self {
        match self {
            Self::Normal { mean, variance } => Self::Normal { mean: mean + c, variance: *variance },
            Self::Exponential { rate, loc } => Self::Exponential { rate: *rate, loc: loc + c },
            Self::Uniform { left, right } => Self::Uniform { left: left + c, right: right + c },
            Self::Mixture(comps) => Self::Mixture(
                comps
                    .iter()
                    .map(|k| Component { weight: k.weight, density: k.density.shift(c) })
                    .collect(),
            ),
            Self::Tabulated(t) => Self::Tabulated(TabulatedDensity {
                x0: t.x0 + c,
                dx: t.dx,
                values: t.values.clone(),
                cumulative: t.cumulative.clone(),
            }),
            Self::Convolution(a, b) => Self::Convolution(Box::new(a.shift(c)), b.clone()),
        }
    }

    /// Law of `t X` for `t > 0`.
    pub fn scale(&self, t: f64) -> Self {
        debug_assert!(t > 0.0);
        match self {
            Self::Normal { mean, variance } => Self::Normal { mean: mean * t, variance: variance * t * t },
            Self::Exponential { rate, loc } => Self::Exponential { rate: rate / t, loc: loc * t },
            Self::Uniform { left, right } => Self::Uniform { left: left * t, right: right * t },
            Self::Mixture(comps) => Self::Mixture(
                comps
                    .iter()
                    .map(|k| Component { weight: k.weight, density: k.density.scale(t) })
                    .collect(),
            ),
            Self::Tabulated(tab) => Self::Tabulated(TabulatedDensity {
                x0: tab.x0 * t,
                dx: tab.dx * t,
                values: tab.values.iter().map(|v| v / t).collect(),
                cumulative: tab.cumulative.clone(),
            }),
            Self::Convolution(a, b) => Self::Convolution(Box::new(a.scale(t)), Box::new(b.scale(t))),
        }
    }

    /// `(weight, mean, variance)` if the density is a normal or a mixture of normals.
    pub fn normal_components(&self) -> Option<Vec<(f64, f64, f64)>> {
        match self {
            Self::Normal { mean, variance } => Some(vec![(1.0, *mean, *variance)]),
            Self::Mixture(comps) => {
                let mut out = Vec::new();
                for c in comps {
                    for (w, m, v) in c.density.normal_components()? {
                        out.push((c.weight * w, m, v));
                    }
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// Whether pointwise evaluation needs quadrature.
    pub fn is_expensive(&self) -> bool {
        match self {
            Self::Convolution(..) => true,
            Self::Mixture(comps) => comps.iter().any(|c| c.density.is_expensive()),
            _ => false,
        }
    }

    /// Components (with weights) whose pdf is cheap to evaluate; the rest is
    /// returned as a second list.
    pub fn split_cheap(&self) -> (Vec<(f64, DensityDescriptor)>, Vec<(f64, DensityDescriptor)>) {
        match self {
            Self::Mixture(comps) => {
                let (mut cheap, mut dear) = (Vec::new(), Vec::new());
                for c in comps {
                    let (a, b) = c.density.split_cheap();
                    cheap.extend(a.into_iter().map(|(w, d)| (w * c.weight, d)));
                    dear.extend(b.into_iter().map(|(w, d)| (w * c.weight, d)));
                }
                (cheap, dear)
            }
            Self::Convolution(..) => (vec![], vec![(1.0, self.clone())]),
            other => (vec![(1.0, other.clone())], vec![]),
        }
    }

    /// Convolution of two densities, closed form for normal mixtures.
    pub fn convolve(&self, other: &Self) -> Self {
        if let (Some(a), Some(b)) = (self.normal_components(), other.normal_components()) {
            let mut parts = Vec::new();
            for (wa, ma, va) in &a {
                for (wb, mb, vb) in &b {
                    parts.push((wa * wb, Self::normal(ma + mb, va + vb)));
                }
            }
            return Self::mixture(parts);
        }
        Self::Convolution(Box::new(self.clone()), Box::new(other.clone()))
    }
}
