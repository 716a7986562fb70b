//! Triplet extraction for a single atom plus an AC part.
//!
//! With `F = μ̂` shifted so the atom sits at 0, `m` its winding index and
//! `B(z) = (z + i)/(z − i)`, the curve `H = (−1)^m B^m F` has index 0 and
//! `H(z) = exp(∫ (e^{ixz} − 1) g(x) dx)` for an integrable `g`. Then
//! `F = exp(m S(z)) H(z)` with `S(z) = Log(1 + iz) − Log(1 − iz)`.
//!
//! `ĝ = h − h(∞)` (`h` the distinguished log of `H`) decays like `1/z`. The
//! slow parts are known in closed form: `(−1)^m B^m − 1` inverts to gamma
//! kernels on a half-line and `F/p − 1` is the transform of `(w/p) f`. Only
//! the `O(1/z²)` remainder goes through the FFT.

use crate::charfn::{tail_cutoff, ScanConfig};
use crate::density::DensityDescriptor;
use crate::distribution::Distribution;
use crate::error::{QidError, Result};
use crate::levy::{index_kernels, reconstruct_charfn, LevyTerm, QuasiLevyTriplet, SignedLevyDensity};
use crate::numeric::{centred_inverse, is_power_of_two, pairwise_sum};
use crate::winding::{unwrap_from_origin, winding_from_log, LogConfig};
use num_complex::Complex64;
use std::f64::consts::PI;

/// An element `p + f̂` of the Wiener algebra with `p > 0`, Hermitian and equal
/// to 1 at the origin.
pub trait WienerCurve {
    fn limit(&self) -> f64;
    fn eval(&self, z: f64) -> Complex64;
    fn eval_grid(&self, z0: f64, dz: f64, m: usize) -> Vec<Complex64>;
    /// Exactly known parts of the density of `F/p − 1`.
    fn reference(&self) -> Vec<LevyTerm>;
    /// Beyond this frequency `|F/p − 1| < 1`.
    fn tail_cutoff(&self) -> f64;
    fn spread(&self) -> f64;
}

/// `p δ_0 + w f`.
pub struct AtomCurve {
    pub dist: Distribution,
    pub cutoff: f64,
}

impl AtomCurve {
    /// Shifts the single atom of `dist` to the origin.
    pub fn new(dist: &Distribution) -> Result<(Self, f64)> {
        if dist.atoms.len() != 1 {
            return Err(QidError::InvalidParameter("the atom route needs exactly one atom".into()));
        }
        let x0 = dist.atoms[0].x;
        let shifted = dist.shift(-x0);
        let cutoff = tail_cutoff(&shifted)?.z();
        Ok((Self { dist: shifted, cutoff }, x0))
    }
}

impl WienerCurve for AtomCurve {
    fn limit(&self) -> f64 {
        self.dist.atoms[0].p
    }

    fn eval(&self, z: f64) -> Complex64 {
        self.dist.charfn(z)
    }

    fn eval_grid(&self, z0: f64, dz: f64, m: usize) -> Vec<Complex64> {
        self.dist.charfn_grid(z0, dz, m)
    }

    fn reference(&self) -> Vec<LevyTerm> {
        let Some((w, f)) = self.dist.ac_part() else { return vec![] };
        let p = self.limit();
        f.split_cheap()
            .0
            .into_iter()
            .map(|(c, d)| LevyTerm::Density { coef: w / p * c, density: d })
            .collect()
    }

    fn tail_cutoff(&self) -> f64 {
        self.cutoff
    }

    fn spread(&self) -> f64 {
        self.dist.x_spread()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionConfig {
    pub n_points: usize,
    /// Explicit half-width of the frequency grid.
    pub z_max: Option<f64>,
    pub z_floor: f64,
    pub tail_factor: f64,
    pub log: LogConfig,
    pub scan: ScanConfig,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        Self {
            n_points: 1 << 16,
            z_max: None,
            z_floor: 128.0,
            tail_factor: 8.0,
            log: LogConfig::default(),
            scan: ScanConfig::default(),
        }
    }
}

pub const IM_RESIDUAL_LIMIT: f64 = 1e-4;
pub const TAIL_AGREEMENT: f64 = 1e-6;

/// Result of the extraction on a curve.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub index: i64,
    pub raw_index: f64,
    pub density: SignedLevyDensity,
    pub im_residual: f64,
    /// `h(∞) = lim Log H`, equal to `ln p` for a settled grid.
    pub q_est: Complex64,
    pub tail_difference: f64,
    /// `∫ |g_rem|` over the outer 5% of the dual grid at each end.
    pub edge_mass: f64,
    pub z_max: f64,
    pub n_points: usize,
    pub dx: f64,
}

/// `Q(0) Q(z)^{-1} = (−1)^m ((z + i)/(z − i))^m = exp(−m S(z))`.
pub fn q_correction(z: &[f64], m: i64) -> Vec<Complex64> {
    z.iter().map(|z| Complex64::new(0.0, -2.0 * m as f64 * z.atan()).exp()).collect()
}

fn tail_mean(v: &[Complex64]) -> Complex64 {
    pairwise_sum(v) / v.len() as f64
}

/// Extracts `g` (exact terms plus tabulated remainder) and the index of a curve.
pub fn extract_curve(curve: &dyn WienerCurve, cfg: &ExtractionConfig) -> Result<Extraction> {
    let n = cfg.n_points;
    if !is_power_of_two(n) || !(1 << 10..=1 << 20).contains(&n) {
        return Err(QidError::InvalidParameter(format!("n_points must be a power of two in [2^10, 2^20], got {n}")));
    }
    let cut = curve.tail_cutoff();
    let z_star = cfg.z_max.unwrap_or_else(|| cfg.z_floor.max(cfg.tail_factor * cut));
    let dz = 2.0 * z_star / n as f64;
    let tail_nodes = ((n as f64 * cfg.log.tail_fraction).round() as usize).max(1);
    let inner_edge = (n / 2 - tail_nodes) as f64 * dz;
    if inner_edge <= cut {
        return Err(QidError::GridTooShort { z_max: z_star, cutoff: cut });
    }
    let z0 = -(n as f64 / 2.0 - 0.5) * dz;
    let z: Vec<f64> = (0..n).map(|j| z0 + j as f64 * dz).collect();
    let f = curve.eval_grid(z0, dz, n);
    let p = curve.limit();

    let eval = |t: f64| curve.eval(t);
    let log_f = unwrap_from_origin(&z, &f, curve.eval(0.0), Some(&eval), &cfg.log)?;
    let winding = winding_from_log(&log_f, cfg.log.tail_fraction)?;
    let m = winding.index;

    // h = log((−1)^m B^m F), continuous with h(0) = 0.
    let h: Vec<Complex64> = log_f
        .iter()
        .zip(&z)
        .map(|(l, z)| l - Complex64::new(0.0, 2.0 * m as f64 * z.atan()))
        .collect();

    // Exact tail constant per end: h − m Log B − Log(F/p) is constant beyond the cutoff.
    let settle = |j: usize| -> Complex64 {
        let b = Complex64::new(z[j], 1.0) / Complex64::new(z[j], -1.0);
        h[j] - m as f64 * b.ln() - (f[j] / p).ln()
    };
    let lo: Vec<Complex64> = (0..tail_nodes).map(settle).collect();
    let hi: Vec<Complex64> = (n - tail_nodes..n).map(settle).collect();
    let (q_lo, q_hi) = (tail_mean(&lo), tail_mean(&hi));
    let tail_difference = (q_hi - q_lo).norm();
    if tail_difference > TAIL_AGREEMENT {
        return Err(QidError::UnsettledTail { difference: tail_difference });
    }
    let q_est = 0.5 * (q_lo + q_hi);

    // Remainder: ĝ − Σ kernel transforms − Σ reference transforms.
    let mut terms = index_kernels(m);
    terms.extend(curve.reference());
    let mut rem: Vec<Complex64> = h.iter().map(|v| v - q_est).collect();
    for t in &terms {
        let coef_at_zero = match t {
            LevyTerm::Density { coef, .. } | LevyTerm::Kernel { coef, .. } => *coef,
            _ => 0.0,
        };
        for (r, e) in rem.iter_mut().zip(t.exponent_grid(z0, dz, n)) {
            *r -= e + coef_at_zero;
        }
    }
    let g = centred_inverse(&rem, dz);
    let dx = PI / z_star;
    let im_residual = g.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    let edge: Vec<f64> = g[..tail_nodes].iter().chain(&g[n - tail_nodes..]).map(|v| v.norm() * dx).collect();
    terms.push(LevyTerm::Tabulated {
        x0: -(n as f64 / 2.0) * dx,
        dx,
        values: g.iter().map(|v| v.re).collect(),
    });
    Ok(Extraction {
        index: m,
        raw_index: winding.raw,
        density: SignedLevyDensity { terms },
        im_residual,
        q_est,
        tail_difference,
        edge_mass: pairwise_sum(&edge),
        z_max: z_star,
        n_points: n,
        dx,
    })
}

#[derive(Debug, Clone)]
pub struct KreinReport {
    pub triplet: QuasiLevyTriplet,
    pub im_residual: f64,
    pub recon_error: f64,
    pub q_est: Complex64,
    pub raw_index: f64,
    pub edge_mass: f64,
    pub tail_difference: f64,
    pub z_max: f64,
    pub n_points: usize,
    pub dx: f64,
}

/// Uniform check grid `[0, Z]`, with spacing at most `π / (64 spread)`.
pub fn check_grid(z_hi: f64, spread: f64) -> (f64, usize) {
    let spacing = PI / (64.0 * spread.max(1.0));
    let steps = (z_hi / spacing).ceil().max(1.0) as usize;
    (z_hi / steps as f64, steps + 1)
}

/// `sup |reconstruct(t) − target|` on `[0, z_hi]`.
pub fn reconstruction_error<F: Fn(f64, f64, usize) -> Vec<Complex64>>(
    t: &QuasiLevyTriplet,
    target: F,
    z_hi: f64,
    spread: f64,
) -> f64 {
    let (dz, m) = check_grid(z_hi, spread);
    let rec = reconstruct_charfn(t, 0.0, dz, m);
    let want = target(0.0, dz, m);
    rec.iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

/// Scan range for the reconstruction check: `max(cutoff, z_scan_min)`, inside the extraction band.
pub fn check_range(cut: f64, ex: &Extraction, cfg: &ExtractionConfig) -> f64 {
    cut.max(cfg.scan.z_scan_min).min(ex.z_max * (1.0 - 2.0 / ex.n_points as f64))
}

pub fn report_from(ex: Extraction, triplet: QuasiLevyTriplet, recon_error: f64) -> Result<KreinReport> {
    if ex.im_residual > IM_RESIDUAL_LIMIT {
        return Err(QidError::ImaginaryResidual { value: ex.im_residual, limit: IM_RESIDUAL_LIMIT });
    }
    Ok(KreinReport {
        triplet,
        im_residual: ex.im_residual,
        recon_error,
        q_est: ex.q_est,
        raw_index: ex.raw_index,
        edge_mass: ex.edge_mass,
        tail_difference: ex.tail_difference,
        z_max: ex.z_max,
        n_points: ex.n_points,
        dx: ex.dx,
    })
}

/// `g` and tail constant for a law with one atom; the atom is moved to 0.
pub fn extract_g(dist: &Distribution, cfg: &ExtractionConfig) -> Result<Extraction> {
    let (curve, _) = AtomCurve::new(dist)?;
    extract_curve(&curve, cfg)
}

/// Full triplet for `p δ_{x0} + w f`: `a = 0`, `γ₀ = x0`, density `Re g`, index `m`.
pub fn assemble_triplet(dist: &Distribution, cfg: &ExtractionConfig) -> Result<KreinReport> {
    let (curve, x0) = AtomCurve::new(dist)?;
    if dist.ac_part().is_none() {
        return Ok(KreinReport {
            triplet: QuasiLevyTriplet::dirac(x0),
            im_residual: 0.0,
            recon_error: 0.0,
            q_est: Complex64::new(0.0, 0.0),
            raw_index: 0.0,
            edge_mass: 0.0,
            tail_difference: 0.0,
            z_max: 0.0,
            n_points: 0,
            dx: 0.0,
        });
    }
    let ex = extract_curve(&curve, cfg)?;
    let triplet = QuasiLevyTriplet {
        gaussian_variance: 0.0,
        drift: x0,
        density: ex.density.clone(),
        index: ex.index,
        lattice_atoms: vec![],
        location_shift: x0,
    };
    let z_hi = check_range(curve.tail_cutoff(), &ex, cfg);
    let err = reconstruction_error(&triplet, |a, b, c| dist.charfn_grid(a, b, c), z_hi, dist.x_spread());
    report_from(ex, triplet, err)
}

/// Convenience: density of a term list as `(x, g)` pairs restricted to `[lo, hi]`.
pub fn tabulate(density: &SignedLevyDensity, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    density.sample(lo, hi, n)
}

/// `L¹` distance of two densities on the nodes `lo + k dx` in `[lo, hi]`.
pub fn l1_distance(a: &SignedLevyDensity, b: &SignedLevyDensity, lo: f64, hi: f64, dx: f64) -> f64 {
    let n = ((hi - lo) / dx).round() as usize + 1;
    let parts: Vec<f64> = (0..n)
        .map(|k| {
            let x = lo + k as f64 * dx;
            (a.eval(x) - b.eval(x)).abs() * dx
        })
        .collect();
    pairwise_sum(&parts)
}

/// Helper for closed-form references in tests and examples.
pub fn density_term(coef: f64, d: DensityDescriptor) -> LevyTerm {
    LevyTerm::Density { coef, density: d }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::integrate_panels;
    use approx::assert_abs_diff_eq;

    fn exp_atom() -> Distribution {
        Distribution::atom_plus(0.0, 0.5, DensityDescriptor::exponential(1.0)).unwrap()
    }

    fn oracle(x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            ((-x).exp() - (-2.0 * x).exp()) / x
        }
    }

    #[test]
    fn q_correction_examples() {
        let z = [-3.0, 0.0, 2.0];
        assert!(q_correction(&z, 0).iter().all(|v| (v - 1.0).norm() == 0.0));
        assert!((q_correction(&[0.0], 1)[0] - 1.0).norm() < 1e-15);
        assert!((q_correction(&[1e9], 2)[0] - 1.0).norm() < 1e-8);
        let i = Complex64::new(0.0, 1.0);
        for &zz in &z {
            let direct = -(zz + i) / (zz - i);
            assert!((q_correction(&[zz], 1)[0] - direct).norm() < 1e-14);
        }
    }

    #[test]
    fn exponential_atom_matches_closed_form() {
        let r = assemble_triplet(&exp_atom(), &ExtractionConfig::default()).unwrap();
        assert_eq!(r.triplet.index, 0);
        assert_eq!(r.triplet.drift, 0.0);
        assert_abs_diff_eq!(r.triplet.density.eval(1.0), 0.23254415793482963, epsilon = 1e-4);
        let err = integrate_panels(|x| (r.triplet.density.eval(x) - oracle(x)).abs(), 0.01, 20.0, &[], 0.01);
        let norm = integrate_panels(oracle, 0.01, 20.0, &[], 0.01);
        assert!(err / norm < 1e-3, "relative L1 error {}", err / norm);
        assert!(r.im_residual < 1e-6);
        assert!(r.recon_error < 1e-4, "recon {}", r.recon_error);
        assert_abs_diff_eq!(r.q_est.re, 0.5f64.ln(), epsilon = 1e-9);
    }

    #[test]
    fn dirac_has_null_triplet() {
        let r = assemble_triplet(&Distribution::dirac(3.5), &ExtractionConfig::default()).unwrap();
        assert_eq!(r.triplet, QuasiLevyTriplet::dirac(3.5));
    }

    #[test]
    fn shift_covariance() {
        let cfg = ExtractionConfig { n_points: 1 << 14, ..Default::default() };
        let a = assemble_triplet(&exp_atom(), &cfg).unwrap();
        let b = assemble_triplet(&exp_atom().shift(1.3), &cfg).unwrap();
        assert_abs_diff_eq!(b.triplet.drift - a.triplet.drift, 1.3, epsilon = 1e-15);
        for x in [-1.0, 0.2, 1.0, 5.0] {
            assert!((a.triplet.density.eval(x) - b.triplet.density.eval(x)).abs() < 1e-8);
        }
    }

    #[test]
    fn short_grid_is_rejected() {
        let d = Distribution::atom_plus(0.0, 0.01, DensityDescriptor::uniform(-1.0, 1.0)).unwrap();
        let cfg = ExtractionConfig { z_max: Some(10.0), ..Default::default() };
        assert!(matches!(extract_g(&d, &cfg), Err(QidError::GridTooShort { .. })));
    }
}
