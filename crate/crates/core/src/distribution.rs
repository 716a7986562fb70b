//! One-dimensional laws made of finitely many atoms (optionally on a declared
//! lattice `r + hZ`) plus a weighted absolutely continuous part.

use crate::density::DensityDescriptor;
use crate::error::{QidError, Result};
use crate::numeric::pairwise_sum;
use num_complex::Complex64;

pub const MASS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub x: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub r: f64,
    pub h: f64,
}

impl Lattice {
    pub fn tolerance(&self) -> f64 {
        1e-12 * 1f64.max(self.r.abs()).max(self.h)
    }

    /// Integer coordinate of `x`, if it lies on the lattice.
    pub fn index_of(&self, x: f64) -> Option<i64> {
        let k = ((x - self.r) / self.h).round();
        ((x - (self.r + k * self.h)).abs() <= self.tolerance().max(1e-12 * x.abs())).then_some(k as i64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub atoms: Vec<Atom>,
    pub lattice: Option<Lattice>,
    pub ac_weight: f64,
    pub ac: Option<DensityDescriptor>,
}

impl Distribution {
    /// Validating constructor. Masses are checked, never renormalised.
    pub fn new(
        atoms: Vec<Atom>,
        lattice: Option<Lattice>,
        ac_weight: f64,
        ac: Option<DensityDescriptor>,
    ) -> Result<Self> {
        let d = Self { atoms, lattice, ac_weight, ac };
        d.validate()?;
        Ok(d)
    }

    pub fn dirac(x: f64) -> Self {
        Self { atoms: vec![Atom { x, p: 1.0 }], lattice: None, ac_weight: 0.0, ac: None }
    }

    pub fn absolutely_continuous(f: DensityDescriptor) -> Self {
        Self { atoms: vec![], lattice: None, ac_weight: 1.0, ac: Some(f) }
    }

    /// `p δ_x + (1 - p) f`.
    pub fn atom_plus(x: f64, p: f64, f: DensityDescriptor) -> Result<Self> {
        Self::new(vec![Atom { x, p }], None, 1.0 - p, Some(f))
    }

    pub fn validate(&self) -> Result<()> {
        for a in &self.atoms {
            if !a.x.is_finite() {
                return Err(QidError::Schema(format!("atom location {} is not finite", a.x)));
            }
            if !(a.p > 0.0 && a.p <= 1.0 + MASS_TOL) {
                return Err(QidError::Schema(format!("atom mass {} outside (0, 1]", a.p)));
            }
        }
        if !(0.0..=1.0 + MASS_TOL).contains(&self.ac_weight) {
            return Err(QidError::Schema(format!("ac weight {} outside [0, 1]", self.ac_weight)));
        }
        let mut masses: Vec<f64> = self.atoms.iter().map(|a| a.p).collect();
        masses.push(self.ac_weight);
        let sum = pairwise_sum(&masses);
        if (sum - 1.0).abs() > MASS_TOL {
            return Err(QidError::MassSum { sum });
        }
        if let Some(l) = &self.lattice {
            if !(l.h > 0.0) || !l.h.is_finite() || !l.r.is_finite() {
                return Err(QidError::Schema(format!("lattice step must be positive, got {}", l.h)));
            }
            for a in &self.atoms {
                if l.index_of(a.x).is_none() {
                    return Err(QidError::NonLatticeAtom { x: a.x, r: l.r, h: l.h });
                }
            }
        }
        match (&self.ac, self.ac_weight > 0.0) {
            (Some(f), true) => f.validate()?,
            (None, true) => return Err(QidError::Schema("ac weight given without a density".into())),
            _ => {}
        }
        Ok(())
    }

    pub fn atom_mass(&self) -> f64 {
        pairwise_sum(&self.atoms.iter().map(|a| a.p).collect::<Vec<_>>())
    }

    /// The AC part, if it carries positive weight.
    pub fn ac_part(&self) -> Option<(f64, &DensityDescriptor)> {
        match &self.ac {
            Some(f) if self.ac_weight > 0.0 => Some((self.ac_weight, f)),
            _ => None,
        }
    }

    pub fn atoms_charfn(&self, z: f64) -> Complex64 {
        let terms: Vec<Complex64> = self
            .atoms
            .iter()
            .map(|a| Complex64::from_polar(a.p, a.x * z))
            .collect();
        pairwise_sum(&terms)
    }

    /// `∫ e^{ixz} μ(dx)`.
    pub fn charfn(&self, z: f64) -> Complex64 {
        let mut v = self.atoms_charfn(z);
        if let Some((w, f)) = self.ac_part() {
            v += w * f.ft(z);
        }
        v
    }

    /// Characteristic function at `z0 + j dz`, `j in 0..m`.
    pub fn charfn_grid(&self, z0: f64, dz: f64, m: usize) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = (0..m).map(|j| self.atoms_charfn(z0 + j as f64 * dz)).collect();
        if let Some((w, f)) = self.ac_part() {
            for (o, v) in out.iter_mut().zip(f.ft_grid(z0, dz, m)) {
                *o += w * v;
            }
        }
        out
    }

    /// Right-continuous distribution function.
    pub fn cdf(&self, x: f64) -> f64 {
        let atoms: Vec<f64> = self.atoms.iter().filter(|a| a.x <= x).map(|a| a.p).collect();
        let mut v = pairwise_sum(&atoms);
        if let Some((w, f)) = self.ac_part() {
            v += w * f.cdf(x);
        }
        v.clamp(0.0, 1.0)
    }

    /// Distribution function on `xs`, which must leave less than 1e-6 of mass outside.
    pub fn cdf_grid(&self, xs: &[f64]) -> Result<Vec<f64>> {
        if xs.is_empty() {
            return Err(QidError::InvalidParameter("empty x grid".into()));
        }
        let lo = xs[0];
        let hi = xs[xs.len() - 1];
        let left = self.cdf(lo) - self.atoms.iter().filter(|a| a.x == lo).map(|a| a.p).sum::<f64>();
        let tail = left.max(0.0) + (1.0 - self.cdf(hi)).max(0.0);
        if tail >= 1e-6 {
            return Err(QidError::InsufficientCoverage { lo, hi, tail_mass: tail });
        }
        let mut out: Vec<f64> = xs.iter().map(|&x| self.cdf(x)).collect();
        for k in 1..out.len() {
            if out[k] < out[k - 1] {
                out[k] = out[k - 1];
            }
        }
        Ok(out)
    }

    /// Interval holding all atoms and all but `eps` of the AC mass.
    pub fn support(&self, eps: f64) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for a in &self.atoms {
            lo = lo.min(a.x);
            hi = hi.max(a.x);
        }
        if let Some((_, f)) = self.ac_part() {
            let (l, h) = f.support(eps);
            lo = lo.min(l);
            hi = hi.max(h);
        }
        (lo, hi)
    }

    /// Width of the essential support (mass outside below 1e-6).
    pub fn x_spread(&self) -> f64 {
        let (lo, hi) = self.support(1e-6);
        hi - lo
    }

    pub fn shift(&self, c: f64) -> Self {
        Self {
            atoms: self.atoms.iter().map(|a| Atom { x: a.x + c, p: a.p }).collect(),
            lattice: self.lattice.map(|l| Lattice { r: l.r + c, h: l.h }),
            ac_weight: self.ac_weight,
            ac: self.ac.as_ref().map(|f| f.shift(c)),
        }
    }

    /// Law of `t X`; `t = 0` gives `δ_0`.
    pub fn scale(&self, t: f64) -> Result<Self> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(QidError::InvalidParameter(format!("scale factor must be >= 0, got {t}")));
        }
        if t == 0.0 {
            return Ok(Self::dirac(0.0));
        }
        Ok(Self {
            atoms: self.atoms.iter().map(|a| Atom { x: a.x * t, p: a.p }).collect(),
            lattice: self.lattice.map(|l| Lattice { r: l.r * t, h: l.h * t }),
            ac_weight: self.ac_weight,
            ac: self.ac.as_ref().map(|f| f.scale(t)),
        })
    }

    pub fn convolve(&self, other: &Self) -> Self {
        let mut atoms: Vec<Atom> = Vec::new();
        for a in &self.atoms {
            for b in &other.atoms {
                atoms.push(Atom { x: a.x + b.x, p: a.p * b.p });
            }
        }
        let atoms = merge_atoms(atoms);

        let mut parts: Vec<(f64, DensityDescriptor)> = Vec::new();
        if let Some((w2, f2)) = other.ac_part() {
            for a in &self.atoms {
                parts.push((a.p * w2, f2.shift(a.x)));
            }
        }
        if let Some((w1, f1)) = self.ac_part() {
            for b in &other.atoms {
                parts.push((b.p * w1, f1.shift(b.x)));
            }
            if let Some((w2, f2)) = other.ac_part() {
                parts.push((w1 * w2, f1.convolve(f2)));
            }
        }
        let ac_weight = pairwise_sum(&parts.iter().map(|(w, _)| *w).collect::<Vec<_>>());
        let ac = if parts.is_empty() {
            None
        } else {
            let merged = merge_normals(parts.into_iter().map(|(w, d)| (w / ac_weight, d)).collect());
            Some(DensityDescriptor::mixture(merged))
        };

        let lattice = match (self.lattice, other.lattice, self.atoms.len(), other.atoms.len()) {
            (Some(l1), Some(l2), _, _) if (l1.h - l2.h).abs() <= 1e-12 * l1.h => {
                Some(Lattice { r: l1.r + l2.r, h: l1.h })
            }
            (Some(l), _, _, 1) => Some(Lattice { r: l.r + other.atoms[0].x, h: l.h }),
            (_, Some(l), 1, _) => Some(Lattice { r: l.r + self.atoms[0].x, h: l.h }),
            _ => None,
        };
        let lattice = if atoms.is_empty() { None } else { lattice };
        Self { atoms, lattice, ac_weight: if ac.is_some() { ac_weight } else { 0.0 }, ac }
    }
}

/// Sorts atoms by location and merges coincident ones.
pub fn merge_atoms(mut atoms: Vec<Atom>) -> Vec<Atom> {
    atoms.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());
    let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match out.last_mut() {
            Some(last) if (last.x - a.x).abs() <= 1e-12 * 1f64.max(a.x.abs()) => last.p += a.p,
            _ => out.push(a),
        }
    }
    out
}

fn merge_normals(parts: Vec<(f64, DensityDescriptor)>) -> Vec<(f64, DensityDescriptor)> {
    let mut out: Vec<(f64, DensityDescriptor)> = Vec::new();
    for (w, d) in parts {
        match out.iter_mut().find(|(_, e)| *e == d) {
            Some(slot) => slot.0 += w,
            None => out.push((w, d)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn paper_example_validates() {
        let d = Distribution::atom_plus(0.0, 0.001, DensityDescriptor::normal(1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(d.charfn(std::f64::consts::PI).re, -0.006184691472470542, epsilon = 1e-15);
    }

    #[test]
    fn mass_violation_rejected() {
        let r = Distribution::new(vec![Atom { x: 0.0, p: 0.6 }], None, 0.5, Some(DensityDescriptor::normal(0.0, 1.0)));
        match r {
            Err(QidError::MassSum { sum }) => assert_abs_diff_eq!(sum, 1.1, epsilon = 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_lattice_atom_rejected() {
        let r = Distribution::new(
            vec![Atom { x: 0.0, p: 0.5 }, Atom { x: 0.5, p: 0.5 }],
            Some(Lattice { r: 0.0, h: 1.0 }),
            0.0,
            None,
        );
        assert!(matches!(r, Err(QidError::NonLatticeAtom { .. })));
    }

    #[test]
    fn cdf_values() {
        let d = Distribution::dirac(0.0);
        assert_eq!(d.cdf_grid(&[-1.0, 0.0, 1.0]).unwrap(), vec![0.0, 1.0, 1.0]);
        let u = Distribution::absolutely_continuous(DensityDescriptor::uniform(-1.0, 1.0));
        assert_abs_diff_eq!(u.cdf(0.0), 0.5);
        let m = Distribution::atom_plus(0.0, 0.5, DensityDescriptor::normal(0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(m.cdf(0.0), 0.75, epsilon = 1e-15);
    }

    #[test]
    fn coverage_is_enforced() {
        let n = Distribution::absolutely_continuous(DensityDescriptor::normal(0.0, 1.0));
        assert!(matches!(n.cdf_grid(&[-2.0, 0.0, 2.0]), Err(QidError::InsufficientCoverage { .. })));
        assert!(n.cdf_grid(&[-6.0, 0.0, 6.0]).is_ok());
    }

    #[test]
    fn convolution_charfn_is_product() {
        let a = Distribution::atom_plus(0.3, 0.4, DensityDescriptor::exponential(1.0)).unwrap();
        let b = Distribution::new(
            vec![Atom { x: -1.0, p: 0.2 }, Atom { x: 1.0, p: 0.3 }],
            None,
            0.5,
            Some(DensityDescriptor::uniform(0.0, 2.0)),
        )
        .unwrap();
        let c = a.convolve(&b);
        c.validate().unwrap();
        for z in [0.0, 0.7, 3.0, -5.5] {
            assert!((c.charfn(z) - a.charfn(z) * b.charfn(z)).norm() < 1e-14);
        }
    }

    #[test]
    fn shift_equivariance() {
        let a = Distribution::atom_plus(0.0, 0.3, DensityDescriptor::uniform(-1.0, 1.0)).unwrap();
        let s = a.shift(1.7);
        for z in [0.2, 2.0, 9.0] {
            let expect = Complex64::from_polar(1.0, 1.7 * z) * a.charfn(z);
            assert!((s.charfn(z) - expect).norm() < 1e-12);
        }
    }
}
