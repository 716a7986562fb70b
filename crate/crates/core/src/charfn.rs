//! Tail bounds and real-zero detection for characteristic functions.

use crate::density::DensityDescriptor;
use crate::distribution::Distribution;
use crate::error::{QidError, Result};
use crate::lattice;
use crate::numeric::golden_section_min;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `|f̂(z)| <= bound_constant / |z|`; beyond `z_threshold` the AC part can no
/// longer cancel the discrete part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub z_threshold: f64,
    pub bound_constant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailCutoff {
    pub bound: TailBound,
    /// Lower bound for the modulus of the discrete part at every z.
    pub floor: f64,
    /// Point beyond which the analytic envelope of the AC part stays below the floor.
    pub z_envelope: f64,
}

impl TailCutoff {
    /// The sharper of the two cutoffs; `|μ̂| > 0` for all `|z|` beyond it.
    pub fn z(&self) -> f64 {
        self.bound.z_threshold.min(self.z_envelope)
    }
}

/// `TV(f) / |z|`.
pub fn riemann_lebesgue_bound(f: &DensityDescriptor, z: f64) -> Result<f64> {
    if z == 0.0 || !z.is_finite() {
        return Err(QidError::InvalidParameter("Riemann-Lebesgue bound needs z != 0".into()));
    }
    Ok(f.total_variation() / z.abs())
}

/// Smallest `z` with `weight * envelope(z) <= floor`, searched up to `cap`.
fn envelope_cutoff(f: &DensityDescriptor, weight: f64, floor: f64, cap: f64) -> f64 {
    let below = |z: f64| weight * f.envelope(z) <= floor;
    if below(0.0) {
        return 0.0;
    }
    if !below(cap) {
        return cap;
    }
    let (mut lo, mut hi) = (0.0, cap);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if below(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-12 * hi.max(1.0) {
            break;
        }
    }
    hi
}

/// Lower bound on `|μ̂_d|` for the atom part: the atom mass for one atom,
/// the period minimum (less a derivative margin) for several.
pub fn discrete_floor(dist: &Distribution) -> Result<f64> {
    match dist.atoms.len() {
        0 => Err(QidError::NoTailControl),
        1 => Ok(dist.atoms[0].p),
        _ => {
            let lat = match dist.lattice {
                Some(l) => l,
                None => lattice::infer_lattice(&dist.atoms).ok_or_else(|| {
                    QidError::Unsupported("atoms do not lie on a common lattice".into())
                })?,
            };
            let series = lattice::LatticeSeries::from_atoms(&dist.atoms, lat)?;
            let (min, theta) = series.period_min_modulus(1 << 12);
            let margin = 0.5 * (2.0 * PI / 4096.0) * series.first_moment();
            if min - margin <= 0.0 {
                return Err(QidError::LatticeVanishes { theta, modulus: min });
            }
            Ok(min - margin)
        }
    }
}

/// Cutoff `Z` beyond which the AC part provably cannot cancel the atoms.
pub fn tail_cutoff(dist: &Distribution) -> Result<TailCutoff> {
    let floor = discrete_floor(dist)?;
    let Some((w, f)) = dist.ac_part() else {
        return Ok(TailCutoff {
            bound: TailBound { z_threshold: 0.0, bound_constant: 0.0 },
            floor,
            z_envelope: 0.0,
        });
    };
    let constant = w * f.total_variation();
    let z_tv = constant / floor;
    Ok(TailCutoff {
        bound: TailBound { z_threshold: z_tv, bound_constant: constant },
        floor,
        z_envelope: envelope_cutoff(f, w, floor, z_tv),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub z_scan_min: f64,
    pub refine_tol: f64,
    /// Explicit scan bound; required when the law has no atoms.
    #[serde(default)]
    pub z_bound: Option<f64>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self { z_scan_min: 64.0, refine_tol: 1e-12, z_bound: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroVerdict {
    NoZeros,
    ZeroFound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroCertificate {
    pub verdict: ZeroVerdict,
    pub interval: Option<(f64, f64)>,
    pub refined_location: Option<f64>,
    pub refined_modulus: Option<f64>,
    pub scanned_range: f64,
    pub tail_bound_used: Option<f64>,
    pub min_modulus_observed: f64,
    pub grid_spacing: f64,
    pub refine_tol: f64,
}

impl ZeroCertificate {
    pub fn zero_location(&self) -> Option<f64> {
        match self.verdict {
            ZeroVerdict::ZeroFound => self.refined_location,
            ZeroVerdict::NoZeros => None,
        }
    }
}

pub const ZERO_THRESHOLD: f64 = 1e-10;
pub const INDETERMINATE_CEILING: f64 = 1e-6;
const REFINE_BELOW: f64 = 0.1;

/// Scans `|μ̂|` on `[0, z_hi]` and refines every dip below 0.1.
pub fn scan_modulus<F: Fn(f64) -> f64>(
    modulus_grid: &[f64],
    spacing: f64,
    modulus: F,
    refine_tol: f64,
) -> Result<(Option<(f64, f64, f64, f64)>, f64)> {
    let n = modulus_grid.len();
    let mut min_seen = modulus_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let mut grazing: Option<(f64, f64)> = None;
    for j in 1..n {
        let here = modulus_grid[j];
        let left = modulus_grid[j - 1];
        let right = if j + 1 < n { modulus_grid[j + 1] } else { f64::INFINITY };
        if !(here <= left && here <= right && here < REFINE_BELOW) {
            continue;
        }
        let lo = (j - 1) as f64 * spacing;
        let hi = (j + 1).min(n - 1) as f64 * spacing;
        let (z, m) = golden_section_min(&modulus, lo, hi, refine_tol);
        min_seen = min_seen.min(m);
        if m < ZERO_THRESHOLD {
            return Ok((Some((lo, hi, z, m)), min_seen));
        }
        if m <= INDETERMINATE_CEILING && grazing.is_none() {
            grazing = Some((z, m));
        }
    }
    if let Some((z, modulus)) = grazing {
        return Err(QidError::Indeterminate { z, modulus });
    }
    Ok((None, min_seen))
}

/// Decides whether `μ̂` vanishes somewhere on the real line.
pub fn find_zeros(dist: &Distribution, cfg: &ScanConfig) -> Result<ZeroCertificate> {
    let mut vanishing_period: Option<QidError> = None;
    let (z_hi, tail) = if dist.atoms.is_empty() {
        (cfg.z_bound.ok_or(QidError::NoTailControl)?, None)
    } else {
        match tail_cutoff(dist) {
            Ok(tc) => {
                let z = tc.z().max(cfg.z_scan_min).max(cfg.z_bound.unwrap_or(0.0));
                (z, Some(tc.z()))
            }
            Err(e @ QidError::LatticeVanishes { .. }) => {
                let lat = dist.lattice.or_else(|| lattice::infer_lattice(&dist.atoms)).unwrap();
                let z = if dist.ac_part().is_none() {
                    2.0 * PI / lat.h
                } else {
                    cfg.z_bound.unwrap_or(cfg.z_scan_min)
                };
                vanishing_period = Some(e);
                (z, None)
            }
            Err(e) => return Err(e),
        }
    };
    let spacing = PI / (64.0 * dist.x_spread().max(1.0));
    let steps = (z_hi / spacing).ceil().max(2.0) as usize;
    let spacing = z_hi / steps as f64;
    let grid: Vec<f64> = dist.charfn_grid(0.0, spacing, steps + 1).iter().map(|v| v.norm()).collect();
    let (hit, min_seen) = scan_modulus(&grid, spacing, |z| dist.charfn(z).norm(), cfg.refine_tol)?;
    match hit {
        Some((lo, hi, z, m)) => Ok(ZeroCertificate {
            verdict: ZeroVerdict::ZeroFound,
            interval: Some((lo, hi)),
            refined_location: Some(z),
            refined_modulus: Some(m),
            scanned_range: z_hi,
            tail_bound_used: tail,
            min_modulus_observed: min_seen,
            grid_spacing: spacing,
            refine_tol: cfg.refine_tol,
        }),
        None => {
            if let Some(e) = vanishing_period {
                return Err(e);
            }
            Ok(ZeroCertificate {
                verdict: ZeroVerdict::NoZeros,
                interval: None,
                refined_location: None,
                refined_modulus: None,
                scanned_range: z_hi,
                tail_bound_used: tail,
                min_modulus_observed: min_seen,
                grid_spacing: spacing,
                refine_tol: cfg.refine_tol,
            })
        }
    }
}
