//! Normal mixtures, Brownian variance mixtures and triplet rescaling.

use crate::density::DensityDescriptor;
use crate::distribution::{Atom, Distribution};
use crate::error::{QidError, Result};
use crate::levy::{LevyTerm, QuasiLevyTriplet};
use crate::numeric::gauss_legendre;

/// Mixing law `ϱ` on `(0, ∞)` with an atom at its lower endpoint `t₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingDistribution {
    /// `(t_i, p_i)`.
    pub atoms: Vec<(f64, f64)>,
    pub ac_weight: f64,
    pub ac: Option<DensityDescriptor>,
}

impl MixingDistribution {
    pub fn new(atoms: Vec<(f64, f64)>, ac_weight: f64, ac: Option<DensityDescriptor>) -> Result<Self> {
        let m = Self { atoms, ac_weight, ac };
        m.validate()?;
        Ok(m)
    }

    pub fn point(t: f64) -> Result<Self> {
        Self::new(vec![(t, 1.0)], 0.0, None)
    }

    /// Lower endpoint `t₁` and `ϱ({t₁})`.
    pub fn lower_endpoint(&self) -> (f64, f64) {
        self.atoms
            .iter()
            .copied()
            .fold((f64::INFINITY, 0.0), |acc, a| if a.0 < acc.0 { a } else { acc })
    }

    pub fn validate(&self) -> Result<()> {
        let mut total = self.ac_weight;
        for &(t, p) in &self.atoms {
            if !(t > 0.0) || !(p > 0.0) {
                return Err(QidError::InvalidParameter(format!("mixing atom ({t}, {p}) must have t > 0, p > 0")));
            }
            total += p;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(QidError::MassSum { sum: total });
        }
        let (t1, p1) = self.lower_endpoint();
        if !(p1 > 0.0) {
            return Err(QidError::InvalidParameter("mixing law needs an atom at its lower endpoint".into()));
        }
        if self.ac_weight > 0.0 {
            let f = self.ac.as_ref().ok_or_else(|| QidError::Schema("ac weight without density".into()))?;
            f.validate()?;
            if f.support(1e-15).0 < t1 - 1e-12 {
                return Err(QidError::InvalidParameter(format!("mixing density reaches below t1 = {t1}")));
            }
        }
        Ok(())
    }

    /// Atoms plus quadrature nodes for the AC part, weights summing to 1.
    pub fn discretize(&self, panels: usize) -> Vec<(f64, f64)> {
        let mut out = self.atoms.clone();
        if let (Some(f), true) = (&self.ac, self.ac_weight > 0.0) {
            let (lo, hi) = f.support(1e-14);
            let lo = lo.max(self.lower_endpoint().0);
            let (x, w) = gauss_legendre(10);
            let step = (hi - lo) / panels as f64;
            let mut nodes = Vec::new();
            for k in 0..panels {
                let mid = lo + (k as f64 + 0.5) * step;
                for (t, wt) in x.iter().zip(&w) {
                    let s = mid + 0.5 * step * t;
                    nodes.push((s, wt * 0.5 * step * f.pdf(s)));
                }
            }
            // Quadrature mass error goes into the weights, not the total.
            let q: f64 = nodes.iter().map(|n| n.1).sum();
            out.extend(nodes.into_iter().filter(|n| n.1 > 0.0).map(|(t, v)| (t, self.ac_weight * v / q)));
        }
        out
    }
}

/// `Σ p_i N(b_i, a_i)`.
pub fn normal_mixture(weights: &[f64], means: &[f64], variances: &[f64]) -> Result<Distribution> {
    if weights.len() != means.len() || weights.len() != variances.len() || weights.is_empty() {
        return Err(QidError::InvalidParameter("weights, means and variances must have equal nonzero length".into()));
    }
    if weights.iter().any(|p| !(*p > 0.0)) || variances.iter().any(|a| !(*a > 0.0)) {
        return Err(QidError::InvalidParameter("weights and variances must be positive".into()));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(QidError::MassSum { sum });
    }
    let parts = (0..weights.len()).map(|i| (weights[i], DensityDescriptor::normal(means[i], variances[i]))).collect();
    let d = Distribution::absolutely_continuous(DensityDescriptor::mixture(parts));
    d.validate()?;
    Ok(d)
}

#[derive(Debug, Clone)]
pub struct VarianceMixture {
    pub distribution: Distribution,
    pub t1: f64,
    /// `ϱ({t₁}) δ_0 + ∫_{(t₁,∞)} N(0, t − t₁) ϱ(dt)`, so that the law is `N(0, t₁) * cofactor`.
    pub cofactor: Distribution,
}

pub const MIXTURE_PANELS: usize = 16;

/// `∫ N(0, t) ϱ(dt)`, AC mixing parts by composite Gauss–Legendre.
pub fn variance_mixture(rho: &MixingDistribution) -> Result<VarianceMixture> {
    rho.validate()?;
    let (t1, _) = rho.lower_endpoint();
    let nodes = rho.discretize(MIXTURE_PANELS);
    let distribution = Distribution::absolutely_continuous(DensityDescriptor::mixture(
        nodes.iter().map(|&(t, w)| (w, DensityDescriptor::normal(0.0, t))).collect(),
    ));
    let rest: Vec<(f64, f64)> = nodes.iter().copied().filter(|&(t, _)| t > t1).collect();
    let atom_p: f64 = nodes.iter().filter(|n| n.0 == t1).map(|n| n.1).sum();
    let rest_w: f64 = rest.iter().map(|r| r.1).sum();
    let cofactor = if rest.is_empty() {
        Distribution::dirac(0.0)
    } else {
        let f = DensityDescriptor::mixture(
            rest.iter().map(|&(t, w)| (w / rest_w, DensityDescriptor::normal(0.0, t - t1))).collect(),
        );
        Distribution::new(vec![Atom { x: 0.0, p: atom_p }], None, 1.0 - atom_p, Some(f))?
    };
    Ok(VarianceMixture { distribution, t1, cofactor })
}

/// Triplet of `μ(dx / t)` from the triplet of `μ`.
///
/// The canonical singular term `m e^{-|x|} sgn(x)/|x|` rescales to
/// `m e^{-|x|/t} sgn(x)/|x|`; the difference is carried by a correction term
/// so the index stays `m`.
pub fn scale_triplet(tr: &QuasiLevyTriplet, t: f64) -> Result<QuasiLevyTriplet> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(QidError::InvalidParameter(format!("scale must be positive, got {t}")));
    }
    if t == 1.0 {
        return Ok(tr.clone());
    }
    let mut density = tr.density.scale(t);
    // Scaled corrections are measured against e^{-|x|}; the remaining
    // coefficient moves the canonical term to e^{-|x|/t}.
    let carried: i64 = tr
        .density
        .terms
        .iter()
        .map(|k| match k {
            LevyTerm::SingularCorrection { m, .. } => *m,
            _ => 0,
        })
        .sum();
    if tr.index - carried != 0 {
        density.terms.push(LevyTerm::SingularCorrection { m: tr.index - carried, scale: t });
    }
    Ok(QuasiLevyTriplet {
        gaussian_variance: tr.gaussian_variance * t * t,
        drift: tr.drift * t,
        density,
        index: tr.index,
        lattice_atoms: tr.lattice_atoms.iter().map(|(x, b)| (x * t, *b)).collect(),
        location_shift: tr.location_shift * t,
    })
}
