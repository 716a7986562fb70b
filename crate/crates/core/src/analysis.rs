//! End-to-end QID decision: zero scan first, then the triplet route that fits
//! the law's shape.

use crate::charfn::{find_zeros, tail_cutoff, ScanConfig, ZeroCertificate, ZeroVerdict};
use crate::density::DensityDescriptor;
use crate::distribution::{Atom, Distribution};
use crate::error::{QidError, Result};
use crate::krein::{
    assemble_triplet, check_range, extract_curve, reconstruction_error, report_from, ExtractionConfig, KreinReport,
};
use crate::lattice::{
    lattice_of, lattice_triplet, mixed_decompose, CompanionCurve, InverseElement, LatticeSeries, LatticeTriplet,
    DEFAULT_FFT, DEFAULT_TRUNCATION,
};
use crate::levy::QuasiLevyTriplet;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig {
    pub extraction: ExtractionConfig,
    pub n_fft: usize,
    pub truncation_tol: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self { extraction: ExtractionConfig::default(), n_fft: DEFAULT_FFT, truncation_tol: DEFAULT_TRUNCATION }
    }
}

impl AnalysisConfig {
    pub fn with_points(n_points: usize) -> Self {
        let mut c = Self::default();
        c.extraction.n_points = n_points;
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Gaussian,
    Atom,
    Lattice,
    Mixed,
    Convolution,
}

/// Lattice-side numbers of the lattice and mixed routes.
#[derive(Debug, Clone)]
pub struct LatticeReport {
    pub discrete: LatticeSeries,
    pub triplet: LatticeTriplet,
    pub inverse: Option<InverseElement>,
    pub identity_error: f64,
}

#[derive(Debug, Clone)]
pub struct QidReport {
    pub route: Route,
    pub triplet: QuasiLevyTriplet,
    pub certificate: Option<ZeroCertificate>,
    /// Extraction details; `None` when no Krein step ran.
    pub krein: Option<KreinReport>,
    pub lattice: Option<LatticeReport>,
    pub recon_error: f64,
    pub im_residual: f64,
}

impl QidReport {
    pub fn raw_index(&self) -> f64 {
        self.krein.as_ref().map_or(self.triplet.index as f64, |k| k.raw_index)
    }
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Qid(Box<QidReport>),
    NotQid(ZeroCertificate),
}

impl Verdict {
    pub fn is_qid(&self) -> bool {
        matches!(self, Verdict::Qid(_))
    }

    pub fn report(&self) -> Option<&QidReport> {
        match self {
            Verdict::Qid(r) => Some(r),
            Verdict::NotQid(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&ZeroCertificate> {
        match self {
            Verdict::Qid(r) => r.certificate.as_ref(),
            Verdict::NotQid(c) => Some(c),
        }
    }
}

/// Scan settings for `dist`; a law without atoms gets the bound
/// `z_scan_min / min(1, spread)` unless one is given.
pub fn scan_config_for(dist: &Distribution, cfg: &ScanConfig) -> ScanConfig {
    let mut out = *cfg;
    if dist.atoms.is_empty() && out.z_bound.is_none() {
        out.z_bound = Some(cfg.z_scan_min / dist.x_spread().min(1.0));
    }
    out
}

pub fn zero_scan(dist: &Distribution, cfg: &ScanConfig) -> Result<ZeroCertificate> {
    find_zeros(dist, &scan_config_for(dist, cfg))
}

/// Decides QID for `dist` and, when it is, computes the triplet.
pub fn analyze(dist: &Distribution, cfg: &AnalysisConfig) -> Result<Verdict> {
    dist.validate()?;
    if dist.atoms.is_empty() {
        let Some((_, f)) = dist.ac_part() else {
            return Err(QidError::InvalidParameter("empty distribution".into()));
        };
        if let Some(comps) = f.normal_components() {
            return gaussian_route(dist, &comps, cfg);
        }
        if let DensityDescriptor::Convolution(a, b) = f {
            return convolution_route(dist, a, b, cfg);
        }
        let cert = zero_scan(dist, &cfg.extraction.scan)?;
        if cert.verdict == ZeroVerdict::ZeroFound {
            return Ok(Verdict::NotQid(cert));
        }
        return Err(QidError::Unsupported(
            "no zero found, but only atom, lattice and normal-mixture laws get a triplet".into(),
        ));
    }
    let cert = zero_scan(dist, &cfg.extraction.scan)?;
    if cert.verdict == ZeroVerdict::ZeroFound {
        return Ok(Verdict::NotQid(cert));
    }
    let mut report = if dist.atoms.len() == 1 {
        atom_route(dist, cfg)?
    } else if dist.ac_part().is_none() {
        lattice_route(dist, cfg)?
    } else {
        mixed_route(dist, cfg)?
    };
    report.certificate = Some(cert);
    Ok(Verdict::Qid(Box::new(report)))
}

/// Shorthand: `true` for QID.
pub fn qid_verdict(dist: &Distribution, cfg: &AnalysisConfig) -> Result<bool> {
    Ok(analyze(dist, cfg)?.is_qid())
}

fn atom_route(dist: &Distribution, cfg: &AnalysisConfig) -> Result<QidReport> {
    let k = assemble_triplet(dist, &cfg.extraction)?;
    Ok(QidReport {
        route: Route::Atom,
        triplet: k.triplet.clone(),
        certificate: None,
        recon_error: k.recon_error,
        im_residual: k.im_residual,
        krein: Some(k),
        lattice: None,
    })
}

fn lattice_route(dist: &Distribution, cfg: &AnalysisConfig) -> Result<QidReport> {
    let lat = lattice_of(dist)?;
    let discrete = LatticeSeries::from_atoms(&dist.atoms, lat)?;
    let lt = lattice_triplet(&discrete, cfg.n_fft, cfg.truncation_tol)?;
    let triplet = lattice_part(&lt);
    let z_hi = (2.0 * PI / lat.h).max(cfg.extraction.scan.z_scan_min);
    let recon_error = reconstruction_error(&triplet, |a, b, c| dist.charfn_grid(a, b, c), z_hi, dist.x_spread());
    Ok(QidReport {
        route: Route::Lattice,
        triplet,
        certificate: None,
        krein: None,
        recon_error,
        im_residual: lt.im_max,
        lattice: Some(LatticeReport { discrete, identity_error: lt.reconstruction_error, triplet: lt, inverse: None }),
    })
}

fn lattice_part(lt: &LatticeTriplet) -> QuasiLevyTriplet {
    QuasiLevyTriplet { lattice_atoms: lt.atoms(), ..QuasiLevyTriplet::dirac(lt.drift()) }
}

/// `μ = π * P(δ_0 + ϱ * μ_ac)`: lattice triplet of `π` plus the Krein
/// triplet of the companion.
pub fn mixed_route(dist: &Distribution, cfg: &AnalysisConfig) -> Result<QidReport> {
    let dec = mixed_decompose(dist, cfg.n_fft, cfg.truncation_tol)?;
    let lt = lattice_triplet(&dec.discrete, cfg.n_fft, cfg.truncation_tol)?;
    let cutoff = tail_cutoff(dist)?.z();
    let curve = CompanionCurve { dist, decomposition: &dec, cutoff };
    let ex = extract_curve(&curve, &cfg.extraction)?;
    let companion = QuasiLevyTriplet { density: ex.density.clone(), index: ex.index, ..QuasiLevyTriplet::dirac(0.0) };
    let triplet = lattice_part(&lt).add(&companion);
    let z_hi = check_range(cutoff, &ex, &cfg.extraction);
    let recon_error = reconstruction_error(&triplet, |a, b, c| dist.charfn_grid(a, b, c), z_hi, dist.x_spread());
    let k = report_from(ex, triplet.clone(), recon_error)?;
    Ok(QidReport {
        route: Route::Mixed,
        triplet,
        certificate: None,
        recon_error,
        im_residual: k.im_residual.max(lt.im_max),
        krein: Some(k),
        lattice: Some(LatticeReport {
            identity_error: dec.identity_error,
            discrete: dec.discrete.clone(),
            triplet: lt,
            inverse: Some(dec.inverse.clone()),
        }),
    })
}

/// Same as [`analyze`] for a law with a lattice part, named for the lattice use case.
pub fn mixed_qid_verdict(dist: &Distribution, cfg: &AnalysisConfig) -> Result<Verdict> {
    if dist.atoms.len() < 2 {
        return Err(QidError::InvalidParameter("a lattice part needs at least two atoms".into()));
    }
    analyze(dist, cfg)
}

/// Splits `Σ p_i N(b_i, a_i)` as `N(0, a_min) * cofactor`; the cofactor has
/// an atom at every `b_i` of minimal variance.
pub fn gaussian_cofactor(comps: &[(f64, f64, f64)]) -> Result<(f64, Distribution)> {
    let a_min = comps.iter().map(|c| c.2).fold(f64::INFINITY, f64::min);
    let tol = 1e-12 * a_min.max(1.0);
    let mut atoms = Vec::new();
    let mut rest = Vec::new();
    for &(w, b, a) in comps {
        if a - a_min <= tol {
            atoms.push(Atom { x: b, p: w });
        } else {
            rest.push((w, DensityDescriptor::normal(b, a - a_min)));
        }
    }
    let atoms = crate::distribution::merge_atoms(atoms);
    let rest_weight: f64 = rest.iter().map(|(w, _)| w).sum();
    let ac = (!rest.is_empty())
        .then(|| DensityDescriptor::mixture(rest.into_iter().map(|(w, d)| (w / rest_weight, d)).collect()));
    let cof = Distribution::new(atoms, None, if ac.is_some() { rest_weight } else { 0.0 }, ac)?;
    Ok((a_min, cof))
}

fn gaussian_route(dist: &Distribution, comps: &[(f64, f64, f64)], cfg: &AnalysisConfig) -> Result<Verdict> {
    let (a_min, cof) = gaussian_cofactor(comps)?;
    // The Gaussian factor never vanishes: zeros of μ̂ are those of the cofactor.
    let cert = zero_scan(&cof, &cfg.extraction.scan)?;
    if cert.verdict == ZeroVerdict::ZeroFound {
        return Ok(Verdict::NotQid(cert));
    }
    let inner = if cof.atoms.len() == 1 {
        atom_route(&cof, cfg)?
    } else if cof.ac_part().is_none() {
        lattice_route(&cof, cfg)?
    } else {
        mixed_route(&cof, cfg)?
    };
    let triplet = QuasiLevyTriplet::gaussian(0.0, a_min).add(&inner.triplet);
    let z_hi = match &inner.krein {
        Some(k) if k.z_max > 0.0 => cfg.extraction.scan.z_scan_min.min(k.z_max),
        _ => cfg.extraction.scan.z_scan_min,
    };
    let recon_error = reconstruction_error(&triplet, |a, b, c| dist.charfn_grid(a, b, c), z_hi, dist.x_spread());
    Ok(Verdict::Qid(Box::new(QidReport {
        route: Route::Gaussian,
        triplet,
        certificate: Some(cert),
        recon_error,
        ..inner
    })))
}

/// A convolution is QID when every factor is; a zero of any factor is a zero of the law.
fn convolution_route(
    dist: &Distribution,
    a: &DensityDescriptor,
    b: &DensityDescriptor,
    cfg: &AnalysisConfig,
) -> Result<Verdict> {
    let mut parts = Vec::new();
    for f in [a, b] {
        match analyze(&Distribution::absolutely_continuous(f.clone()), cfg)? {
            Verdict::NotQid(c) => return Ok(Verdict::NotQid(c)),
            Verdict::Qid(r) => parts.push(*r),
        }
    }
    let triplet = parts[0].triplet.add(&parts[1].triplet);
    let z_hi = cfg.extraction.scan.z_scan_min;
    let recon_error = reconstruction_error(&triplet, |a, b, c| dist.charfn_grid(a, b, c), z_hi, dist.x_spread());
    let im_residual = parts[0].im_residual.max(parts[1].im_residual);
    let first = parts.swap_remove(0);
    Ok(Verdict::Qid(Box::new(QidReport {
        route: Route::Convolution,
        triplet,
        certificate: None,
        recon_error,
        im_residual,
        ..first
    })))
}

/// `sup |μ̂ − reconstructed|` on `[0, z_hi]` for an arbitrary triplet.
pub fn reconstruction_check(dist: &Distribution, t: &QuasiLevyTriplet, z_hi: f64) -> f64 {
    reconstruction_error(t, |a, b, c| dist.charfn_grid(a, b, c), z_hi, dist.x_spread())
}

/// `μ̂` sampled on `[0, z_hi]` next to its reconstruction.
pub fn recon_table(dist: &Distribution, t: &QuasiLevyTriplet, z_hi: f64, n: usize) -> Vec<(f64, Complex64, Complex64)> {
    let dz = z_hi / (n - 1) as f64;
    let want = dist.charfn_grid(0.0, dz, n);
    let got = crate::levy::reconstruct_charfn(t, 0.0, dz, n);
    (0..n).map(|j| (j as f64 * dz, want[j], got[j])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::LevyTerm;
    use approx::assert_abs_diff_eq;

    fn small() -> AnalysisConfig {
        AnalysisConfig::with_points(1 << 14)
    }

    #[test]
    fn single_gaussian_is_its_own_triplet() {
        let d = Distribution::absolutely_continuous(DensityDescriptor::normal(0.5, 2.0));
        let v = analyze(&d, &small()).unwrap();
        let r = v.report().unwrap();
        assert_eq!(r.triplet.gaussian_variance, 2.0);
        assert_eq!(r.triplet.drift, 0.5);
        assert!(r.triplet.density.is_zero());
        assert!(r.recon_error < 1e-12);
    }

    #[test]
    fn cofactor_of_paper_mixture() {
        let comps = [(0.001, 0.0, 1.0), (0.999, 1.0, 2.0)];
        let (a, cof) = gaussian_cofactor(&comps).unwrap();
        assert_eq!(a, 1.0);
        assert_eq!(cof.atoms, vec![Atom { x: 0.0, p: 0.001 }]);
        assert_eq!(cof.ac, Some(DensityDescriptor::normal(1.0, 1.0)));
    }

    #[test]
    fn symmetric_gaussian_pair_is_qid() {
        let f = DensityDescriptor::mixture(vec![
            (0.5, DensityDescriptor::normal(0.0, 1.0)),
            (0.5, DensityDescriptor::normal(0.0, 2.0)),
        ]);
        let v = analyze(&Distribution::absolutely_continuous(f), &small()).unwrap();
        let r = v.report().unwrap();
        assert_eq!(r.route, Route::Gaussian);
        assert_eq!(r.triplet.index, 0);
        assert!(r.recon_error < 1e-4, "{}", r.recon_error);
    }

    #[test]
    fn uniform_factor_zero_decides_convolution() {
        let f = DensityDescriptor::normal(0.0, 1.0).convolve(&DensityDescriptor::uniform(-0.2, 0.2));
        let v = analyze(&Distribution::absolutely_continuous(f), &small()).unwrap();
        let c = v.certificate().unwrap();
        assert!(!v.is_qid());
        assert_abs_diff_eq!(c.zero_location().unwrap(), 5.0 * PI, epsilon = 1e-8);
    }

    #[test]
    fn two_point_lattice_triplet() {
        let d = Distribution::new(vec![Atom { x: 0.0, p: 0.7 }, Atom { x: 1.0, p: 0.3 }], None, 0.0, None).unwrap();
        let v = analyze(&d, &small()).unwrap();
        let r = v.report().unwrap();
        assert_eq!(r.route, Route::Lattice);
        // log(1 + q e^{iθ}) with q = 3/7.
        let b1 = r.triplet.lattice_atoms.iter().find(|a| a.0 == 1.0).unwrap().1;
        assert_abs_diff_eq!(b1, 3.0 / 7.0, epsilon = 1e-12);
        assert!(r.recon_error < 1e-10);
    }

    #[test]
    fn half_half_lattice_is_not_qid() {
        let d = Distribution::new(vec![Atom { x: 0.0, p: 0.5 }, Atom { x: 1.0, p: 0.5 }], None, 0.0, None).unwrap();
        let v = analyze(&d, &small()).unwrap();
        assert_abs_diff_eq!(v.certificate().unwrap().zero_location().unwrap(), PI, epsilon = 1e-9);
    }

    #[test]
    fn lattice_plus_gaussian_reconstructs() {
        let d = Distribution::new(
            vec![Atom { x: 0.0, p: 0.4 }, Atom { x: 1.0, p: 0.1 }],
            None,
            0.5,
            Some(DensityDescriptor::normal(0.0, 1.0)),
        )
        .unwrap();
        let v = analyze(&d, &small()).unwrap();
        let r = v.report().unwrap();
        assert_eq!(r.route, Route::Mixed);
        assert!(r.recon_error < 1e-4, "{}", r.recon_error);
        assert!(r.im_residual < 1e-6);
        assert!(r.triplet.density.terms.iter().any(|t| matches!(t, LevyTerm::Tabulated { .. })));
    }
}
