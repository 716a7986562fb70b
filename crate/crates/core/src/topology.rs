//! Interpolation paths, the Lévy metric and non-QID sequences converging to a
//! given law.

use crate::analysis::zero_scan;
use crate::charfn::{ScanConfig, ZeroVerdict};
use crate::distribution::Distribution;
use crate::error::{QidError, Result};
use serde::Serialize;

/// `μ_t(dx) = μ₁(dx / t) * μ₂(dx / (1 − t))`; `μ_0 = μ₂`, `μ_1 = μ₁`.
pub fn interpolate(mu1: &Distribution, mu2: &Distribution, t: f64) -> Result<Distribution> {
    if !(0.0..=1.0).contains(&t) {
        return Err(QidError::InvalidParameter(format!("t must lie in [0, 1], got {t}")));
    }
    Ok(mu1.scale(t)?.convolve(&mu2.scale(1.0 - t)?))
}

/// The path with `p(0) = μ₁` and `p(1) = μ₂`.
pub fn path_point(mu1: &Distribution, mu2: &Distribution, s: f64) -> Result<Distribution> {
    interpolate(mu1, mu2, 1.0 - s)
}

pub const CDF_SPACING: f64 = 1e-3;
/// Step of the coarse grid the Hermite interpolant of an expensive CDF is built on.
const HERMITE_STEP: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevyDistance {
    pub value: f64,
    pub grid_spacing: f64,
}

/// CDF evaluation on a fine grid. The AC part of an expensive law is
/// interpolated (cubic Hermite, pdf as slope) from a coarse grid; atoms are exact.
pub struct CdfEvaluator<'a> {
    dist: &'a Distribution,
}

impl<'a> CdfEvaluator<'a> {
    pub fn new(dist: &'a Distribution) -> Self {
        Self { dist }
    }

    pub fn on_grid(&self, xs: &[f64]) -> Result<Vec<f64>> {
        let d = self.dist;
        let expensive = d.ac_part().is_some_and(|(_, f)| f.is_expensive());
        if !expensive {
            return d.cdf_grid(xs);
        }
        let (w, f) = d.ac_part().unwrap();
        let (lo, hi) = (xs[0], xs[xs.len() - 1]);
        let steps = ((hi - lo) / HERMITE_STEP).ceil().max(1.0) as usize;
        let h = (hi - lo) / steps as f64;
        let knots: Vec<(f64, f64)> = (0..=steps)
            .map(|k| {
                let x = lo + k as f64 * h;
                (f.cdf(x), f.pdf(x))
            })
            .collect();
        let tail = d.atoms.iter().filter(|a| a.x < lo || a.x > hi).map(|a| a.p).sum::<f64>()
            + w * (knots[0].0 + 1.0 - knots[steps].0);
        if tail >= 1e-6 {
            return Err(QidError::InsufficientCoverage { lo, hi, tail_mass: tail });
        }
        let mut out = Vec::with_capacity(xs.len());
        for &x in xs {
            let k = (((x - lo) / h).floor() as usize).min(steps - 1);
            let s = (x - (lo + k as f64 * h)) / h;
            let ((f0, d0), (f1, d1)) = (knots[k], knots[k + 1]);
            let s2 = s * s;
            let s3 = s2 * s;
            let ac = (2.0 * s3 - 3.0 * s2 + 1.0) * f0
                + (s3 - 2.0 * s2 + s) * h * d0
                + (-2.0 * s3 + 3.0 * s2) * f1
                + (s3 - s2) * h * d1;
            let atoms: f64 = d.atoms.iter().filter(|a| a.x <= x).map(|a| a.p).sum();
            out.push((atoms + w * ac).clamp(0.0, 1.0));
        }
        for k in 1..out.len() {
            if out[k] < out[k - 1] {
                out[k] = out[k - 1];
            }
        }
        Ok(out)
    }
}

/// Finest spacing the adaptive refinement goes down to.
pub const MIN_SPACING: f64 = 1e-5;

/// Lévy distance with `ε` restricted to multiples of the grid spacing, so the
/// shifted CDFs are read off the grid and the result is exactly symmetric.
/// Distances below ten grid steps are recomputed on a grid ten times finer.
pub fn levy_distance(mu: &Distribution, nu: &Distribution) -> Result<LevyDistance> {
    let mut delta = CDF_SPACING;
    loop {
        let d = levy_distance_with(mu, nu, delta)?;
        if d.value >= 10.0 * delta || delta / 10.0 < MIN_SPACING * 0.999 {
            return Ok(d);
        }
        delta /= 10.0;
    }
}

pub fn levy_distance_with(mu: &Distribution, nu: &Distribution, delta: f64) -> Result<LevyDistance> {
    let (a_lo, a_hi) = mu.support(1e-8);
    let (b_lo, b_hi) = nu.support(1e-8);
    let lo = a_lo.min(b_lo) - 1.0;
    let hi = a_hi.max(b_hi) + 1.0;
    let n = ((hi - lo) / delta).ceil() as usize + 1;
    let xs: Vec<f64> = (0..n).map(|k| lo + k as f64 * delta).collect();
    let f = CdfEvaluator::new(mu).on_grid(&xs)?;
    let g = CdfEvaluator::new(nu).on_grid(&xs)?;
    let at = |v: &[f64], j: i64| -> f64 {
        if j < 0 {
            0.0
        } else if j as usize >= v.len() {
            1.0
        } else {
            v[j as usize]
        }
    };
    let sandwich = |p: &[f64], q: &[f64], k: i64| -> bool {
        let eps = k as f64 * delta;
        (0..n as i64).all(|j| at(p, j - k) - eps <= at(q, j) && at(q, j) <= at(p, j + k) + eps)
    };
    let ok = |k: i64| sandwich(&f, &g, k) && sandwich(&g, &f, k);
    // The distance never exceeds 1.
    let (mut lo_k, mut hi_k) = (0i64, (1.0 / delta).ceil() as i64);
    if ok(0) {
        return Ok(LevyDistance { value: 0.0, grid_spacing: delta });
    }
    while hi_k - lo_k > 1 {
        let mid = (lo_k + hi_k) / 2;
        if ok(mid) {
            hi_k = mid;
        } else {
            lo_k = mid;
        }
    }
    Ok(LevyDistance { value: hi_k as f64 * delta, grid_spacing: delta })
}

#[derive(Debug, Clone)]
pub struct SequenceTerm {
    pub n: u32,
    pub distribution: Distribution,
    /// A real zero of `μ̂_n`.
    pub zero: f64,
}

/// `μ_n = μ * ν(n ·)`, whose transform `μ̂(z) ν̂(z/n)` vanishes at `n z*`.
pub fn nonqid_sequence(mu: &Distribution, nu: &Distribution, n: u32, scan: &ScanConfig) -> Result<SequenceTerm> {
    if n == 0 {
        return Err(QidError::InvalidParameter("n must be positive".into()));
    }
    let cert = zero_scan(nu, scan)?;
    let z = match (cert.verdict, cert.zero_location()) {
        (ZeroVerdict::ZeroFound, Some(z)) => z,
        _ => return Err(QidError::NoZeroDetected { z_max: cert.scanned_range }),
    };
    let distribution = mu.convolve(&nu.scale(1.0 / n as f64)?);
    Ok(SequenceTerm { n, distribution, zero: n as f64 * z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::DensityDescriptor;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn normal(m: f64, v: f64) -> Distribution {
        Distribution::absolutely_continuous(DensityDescriptor::normal(m, v))
    }

    #[test]
    fn interpolation_examples() {
        let d = Distribution::dirac(0.0);
        assert_eq!(interpolate(&d, &d, 0.3).unwrap(), d);
        let g = interpolate(&normal(0.0, 1.0), &normal(0.0, 1.0), 0.3).unwrap();
        assert_eq!(g.ac, Some(DensityDescriptor::normal(0.0, 0.09 + 0.49)));
        let h = interpolate(&normal(0.0, 1.0), &Distribution::dirac(2.0), 0.5).unwrap();
        for x in [-0.5, 1.0, 1.7] {
            assert_abs_diff_eq!(h.cdf(x), normal(1.0, 0.25).cdf(x), epsilon = 1e-14);
        }
        assert!(interpolate(&d, &d, 1.5).is_err());
    }

    #[test]
    fn endpoints() {
        let a = normal(0.0, 1.0);
        let b = Distribution::dirac(1.0);
        assert_eq!(path_point(&a, &b, 0.0).unwrap().charfn(0.7), a.charfn(0.7));
        assert_eq!(path_point(&a, &b, 1.0).unwrap().charfn(0.7), b.charfn(0.7));
    }

    #[test]
    fn dirac_distance() {
        let d = levy_distance(&Distribution::dirac(0.0), &Distribution::dirac(0.3)).unwrap();
        assert!((d.value - 0.3).abs() <= d.grid_spacing, "{}", d.value);
        let far = levy_distance(&Distribution::dirac(0.0), &Distribution::dirac(5.0)).unwrap();
        assert!((far.value - 1.0).abs() <= far.grid_spacing);
    }

    #[test]
    fn identical_laws_have_distance_zero() {
        let a = normal(0.0, 1.0);
        let d = levy_distance(&a, &a).unwrap();
        assert_eq!(d.value, 0.0);
        assert!(d.grid_spacing < 2.0 * MIN_SPACING);
    }

    #[test]
    fn normal_shift_distance_is_bounded_by_shift() {
        let a = normal(0.0, 1.0);
        let b = normal(0.1, 1.0);
        let d = levy_distance(&a, &b).unwrap();
        assert!(d.value > 0.0 && d.value <= 0.1 + d.grid_spacing);
        assert_eq!(d.value, levy_distance(&b, &a).unwrap().value);
    }

    #[test]
    fn hermite_cdf_matches_direct() {
        let f = DensityDescriptor::exponential(1.0).convolve(&DensityDescriptor::uniform(-0.5, 0.5));
        let d = Distribution::atom_plus(0.2, 0.3, f).unwrap();
        let xs: Vec<f64> = (0..=400).map(|k| -2.0 + k as f64 * 0.1).collect();
        let fast = CdfEvaluator::new(&d).on_grid(&xs).unwrap();
        for (x, v) in xs.iter().zip(&fast) {
            assert_abs_diff_eq!(*v, d.cdf(*x), epsilon = 1e-7);
        }
    }

    #[test]
    fn sequence_zero_scales() {
        let mu = normal(0.0, 1.0);
        let nu = Distribution::absolutely_continuous(DensityDescriptor::uniform(-1.0, 1.0));
        let s = nonqid_sequence(&mu, &nu, 5, &ScanConfig::default()).unwrap();
        assert_abs_diff_eq!(s.zero, 5.0 * PI, epsilon = 1e-9);
        assert!(s.distribution.charfn(s.zero).norm() < 1e-12);
        assert!(matches!(
            nonqid_sequence(&mu, &Distribution::absolutely_continuous(DensityDescriptor::exponential(1.0)), 2, &ScanConfig::default()),
            Err(QidError::NoZeroDetected { .. })
        ));
    }
}
