//! Discrete parts on a lattice `r + hZ`: Fourier series, Wiener inversion,
//! lattice triplets and the decomposition `μ = μ_d * (δ_0 + ϱ * μ_ac)`.

use crate::density::DensityDescriptor;
use crate::distribution::{Atom, Distribution, Lattice};
use crate::error::{QidError, Result};
use crate::krein::WienerCurve;
use crate::levy::LevyTerm;
use crate::numeric::pairwise_sum;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;

pub const DEFAULT_TRUNCATION: f64 = 1e-14;
pub const RESIDUAL_LIMIT: f64 = 1e-8;
pub const DEFAULT_FFT: usize = 1 << 12;

/// Coefficients `a_k` of `Σ a_k δ_{r + hk}`, for `k = kmin, kmin + 1, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSeries {
    pub r: f64,
    pub h: f64,
    pub kmin: i64,
    pub coeffs: Vec<Complex64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesHeader {
    pub r: f64,
    pub h: f64,
    pub l1_norm: f64,
    pub truncation_tol: f64,
}

impl LatticeSeries {
    pub fn from_real(r: f64, h: f64, kmin: i64, coeffs: &[f64]) -> Self {
        Self { r, h, kmin, coeffs: coeffs.iter().map(|c| Complex64::new(*c, 0.0)).collect() }
    }

    pub fn from_atoms(atoms: &[Atom], lat: Lattice) -> Result<Self> {
        let mut ks = Vec::with_capacity(atoms.len());
        for a in atoms {
            let k = lat.index_of(a.x).ok_or(QidError::NonLatticeAtom { x: a.x, r: lat.r, h: lat.h })?;
            ks.push((k, a.p));
        }
        let kmin = ks.iter().map(|k| k.0).min().unwrap_or(0);
        let kmax = ks.iter().map(|k| k.0).max().unwrap_or(0);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (kmax - kmin + 1) as usize];
        for (k, p) in ks {
            coeffs[(k - kmin) as usize] += p;
        }
        Ok(Self { r: lat.r, h: lat.h, kmin, coeffs })
    }

    pub fn kmax(&self) -> i64 {
        self.kmin + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        if k < self.kmin || k > self.kmax() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k - self.kmin) as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.kmin + i as i64, *c))
    }

    pub fn l1_norm(&self) -> f64 {
        pairwise_sum(&self.coeffs.iter().map(|c| c.norm()).collect::<Vec<_>>())
    }

    pub fn total(&self) -> Complex64 {
        pairwise_sum(&self.coeffs)
    }

    /// `Σ a_k e^{ikθ}` (the series on the normalised lattice Z).
    pub fn eval_theta(&self, theta: f64) -> Complex64 {
        let terms: Vec<Complex64> = self.iter().map(|(k, c)| c * Complex64::from_polar(1.0, k as f64 * theta)).collect();
        pairwise_sum(&terms)
    }

    /// `Σ a_k e^{i (r + hk) z}`.
    pub fn eval(&self, z: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.r * z) * self.eval_theta(self.h * z)
    }

    /// Minimum of `|Σ a_k e^{ikθ}|` over `n` equispaced θ in one period, and its location.
    pub fn period_min_modulus(&self, n: usize) -> (f64, f64) {
        let v = self.period_samples(n);
        v.iter()
            .enumerate()
            .map(|(j, x)| (x.norm(), 2.0 * PI * j as f64 / n as f64))
            .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a })
    }

    /// Samples `Σ a_k e^{ikθ_j}`, `θ_j = 2πj/n`, by FFT.
    pub fn period_samples(&self, n: usize) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (k, c) in self.iter() {
            buf[k.rem_euclid(n as i64) as usize] += c;
        }
        FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
        buf
    }

    /// `min_{k0} Σ |a_k| |k - k0|`, a bound on `|d/dθ|` of the series modulus.
    pub fn first_moment(&self) -> f64 {
        (self.kmin..=self.kmax())
            .map(|k0| self.iter().map(|(k, c)| c.norm() * (k - k0).abs() as f64).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }

    /// Drops coefficients below `tol` times the ℓ¹ norm and trims the ends.
    pub fn truncated(&self, tol: f64) -> Self {
        let cut = tol * self.l1_norm();
        let keep: Vec<usize> = (0..self.coeffs.len()).filter(|&i| self.coeffs[i].norm() >= cut).collect();
        let (Some(&first), Some(&last)) = (keep.first(), keep.last()) else {
            return Self { r: self.r, h: self.h, kmin: 0, coeffs: vec![] };
        };
        let coeffs = self.coeffs[first..=last]
            .iter()
            .map(|c| if c.norm() >= cut { *c } else { Complex64::new(0.0, 0.0) })
            .collect();
        Self { r: self.r, h: self.h, kmin: self.kmin + first as i64, coeffs }
    }

    pub fn header(&self, truncation_tol: f64) -> SeriesHeader {
        SeriesHeader { r: self.r, h: self.h, l1_norm: self.l1_norm(), truncation_tol }
    }

    /// CSV `k,re,im`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "k,re,im")?;
        for (k, c) in self.iter() {
            if c.norm() != 0.0 {
                writeln!(out, "{},{:?},{:?}", k, c.re, c.im)?;
            }
        }
        Ok(())
    }
}

/// `‖a * c − δ_0‖_1` on the integer lattice.
pub fn convolution_residual(a: &LatticeSeries, c: &LatticeSeries) -> f64 {
    let len = a.coeffs.len() + c.coeffs.len() - 1;
    let mut prod = vec![Complex64::new(0.0, 0.0); len];
    for (i, x) in a.coeffs.iter().enumerate() {
        for (j, y) in c.coeffs.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    let k0 = a.kmin + c.kmin;
    let parts: Vec<f64> = prod
        .iter()
        .enumerate()
        .map(|(i, v)| if k0 + i as i64 == 0 { (v - 1.0).norm() } else { v.norm() })
        .collect();
    let mut res = pairwise_sum(&parts);
    if k0 > 0 || k0 + (len as i64) <= 0 {
        res += 1.0;
    }
    res
}

/// The inverse element `ϱ = Σ c_k δ_{-r + hk}` with `μ_d * ϱ = δ_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseElement {
    pub series: LatticeSeries,
    pub residual: f64,
    pub n_fft: usize,
    pub truncation_tol: f64,
}

fn check_fft_size(n_fft: usize) -> Result<()> {
    if !crate::numeric::is_power_of_two(n_fft) || n_fft < DEFAULT_FFT {
        return Err(QidError::InvalidParameter(format!("n_fft must be a power of two >= 4096, got {n_fft}")));
    }
    Ok(())
}

fn vanishing_check(samples: &[Complex64]) -> Result<()> {
    let n = samples.len();
    let (j, m) = samples
        .iter()
        .enumerate()
        .map(|(j, v)| (j, v.norm()))
        .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    if m < 1e-10 {
        return Err(QidError::LatticeVanishes { theta: 2.0 * PI * j as f64 / n as f64, modulus: m });
    }
    Ok(())
}

/// Coefficients `c_k` of `1 / Σ a_k e^{ikθ}`, with FFT size doubling (at most
/// twice) until `‖a * c − δ_0‖_1 < 1e-8`.
pub fn wiener_invert(s: &LatticeSeries, n_fft: usize, tol: f64) -> Result<InverseElement> {
    check_fft_size(n_fft)?;
    let mut n = n_fft.max((4 * s.coeffs.len()).next_power_of_two());
    let mut last = f64::INFINITY;
    for _ in 0..3 {
        let samples = s.period_samples(n);
        vanishing_check(&samples)?;
        let mut buf: Vec<Complex64> = samples.iter().map(|v| 1.0 / v).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let half = (n / 2) as i64;
        let coeffs: Vec<Complex64> = (-half..half)
            .map(|k| buf[k.rem_euclid(n as i64) as usize] / n as f64)
            .collect();
        let full = LatticeSeries { r: -s.r, h: s.h, kmin: -half, coeffs };
        let series = full.truncated(tol);
        let residual = convolution_residual(s, &series);
        if residual < RESIDUAL_LIMIT {
            return Ok(InverseElement { series, residual, n_fft: n, truncation_tol: tol });
        }
        last = residual;
        n *= 2;
    }
    Err(QidError::InversionResidual { residual: last, limit: RESIDUAL_LIMIT })
}

/// Triplet of the normalised lattice law `π = μ_d / μ_d(R)`:
/// `π̂(z) = e^{irz} exp(i n h z + Σ b_k (e^{ikhz} − 1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeTriplet {
    pub r: f64,
    pub h: f64,
    pub winding: i64,
    /// `b_k` at lattice points `hk`, `k != 0`.
    pub b: LatticeSeries,
    pub reconstruction_error: f64,
    pub im_max: f64,
    pub n_fft: usize,
}

impl LatticeTriplet {
    pub fn drift(&self) -> f64 {
        self.r + self.winding as f64 * self.h
    }

    pub fn atoms(&self) -> Vec<(f64, f64)> {
        self.b
            .iter()
            .filter(|(k, c)| *k != 0 && c.re != 0.0)
            .map(|(k, c)| (k as f64 * self.h, c.re))
            .collect()
    }

    /// `exp(inθ + Σ b_k (e^{ikθ} − 1))`.
    pub fn eval_theta(&self, theta: f64) -> Complex64 {
        let mut e = Complex64::new(0.0, self.winding as f64 * theta);
        for (k, b) in self.b.iter() {
            if k != 0 {
                e += b * (Complex64::from_polar(1.0, k as f64 * theta) - 1.0);
            }
        }
        e.exp()
    }
}

/// Lattice triplet with winding, log-series coefficients and a reconstruction
/// check on an offset θ grid.
pub fn lattice_triplet(s: &LatticeSeries, n_fft: usize, tol: f64) -> Result<LatticeTriplet> {
    check_fft_size(n_fft)?;
    let total = s.total();
    let norm = LatticeSeries { r: s.r, h: s.h, kmin: s.kmin, coeffs: s.coeffs.iter().map(|c| c / total).collect() };
    let mut n = n_fft.max((4 * s.coeffs.len()).next_power_of_two());
    let mut last = (f64::INFINITY, 0.0);
    for _ in 0..3 {
        let samples = norm.period_samples(n);
        vanishing_check(&samples)?;
        // Continuous log from θ = 0 around the full period.
        let mut logs = Vec::with_capacity(n + 1);
        let mut phase = samples[0].arg();
        logs.push(Complex64::new(samples[0].norm().ln(), phase));
        for j in 1..=n {
            let cur = samples[j % n];
            phase += (cur / samples[j - 1]).arg();
            logs.push(Complex64::new(cur.norm().ln(), phase));
        }
        let winding = ((logs[n].im - logs[0].im) / (2.0 * PI)).round() as i64;
        let mut buf: Vec<Complex64> = (0..n)
            .map(|j| logs[j] - Complex64::new(0.0, winding as f64 * 2.0 * PI * j as f64 / n as f64))
            .collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let half = (n / 2) as i64;
        let coeffs: Vec<Complex64> = (-half..half)
            .map(|k| buf[k.rem_euclid(n as i64) as usize] / n as f64)
            .collect();
        let b_full = LatticeSeries { r: 0.0, h: s.h, kmin: -half, coeffs };
        let mut b = b_full.truncated(tol);
        let im_max = b.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        for c in b.coeffs.iter_mut() {
            c.im = 0.0;
        }
        let trip = LatticeTriplet { r: s.r, h: s.h, winding, b, reconstruction_error: 0.0, im_max, n_fft: n };
        let probe = 2048;
        let err = (0..probe)
            .map(|j| {
                let theta = 2.0 * PI * (j as f64 + 0.5) / probe as f64;
                (trip.eval_theta(theta) - norm.eval_theta(theta)).norm()
            })
            .fold(0.0, f64::max);
        if err < RESIDUAL_LIMIT {
            return Ok(LatticeTriplet { reconstruction_error: err, ..trip });
        }
        last = (err, im_max);
        n *= 2;
    }
    Err(QidError::InversionResidual { residual: last.0, limit: RESIDUAL_LIMIT })
}

/// Finds `h` (a divisor of the smallest gap, down to 1/64 of it) such that all
/// atoms lie on `x_0 + hZ`.
pub fn infer_lattice(atoms: &[Atom]) -> Option<Lattice> {
    if atoms.is_empty() {
        return None;
    }
    let mut xs: Vec<f64> = atoms.iter().map(|a| a.x).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let r = xs[0];
    if xs.len() == 1 {
        return Some(Lattice { r, h: 1.0 });
    }
    let scale = xs.iter().fold(1f64, |m, x| m.max(x.abs()));
    let gap = xs
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| *d > 1e-12 * scale)
        .fold(f64::INFINITY, f64::min);
    if !gap.is_finite() {
        return Some(Lattice { r, h: 1.0 });
    }
    (1..=64).map(|q| gap / q as f64).find_map(|h| {
        let ok = xs.iter().all(|x| {
            let t = (x - r) / h;
            (t - t.round()).abs() * h <= 1e-9 * scale
        });
        ok.then_some(Lattice { r, h })
    })
}

/// The lattice used for a law's atoms: declared, or inferred.
pub fn lattice_of(dist: &Distribution) -> Result<Lattice> {
    dist.lattice
        .or_else(|| infer_lattice(&dist.atoms))
        .ok_or_else(|| QidError::Unsupported("atoms do not lie on a common lattice".into()))
}

/// `μ = μ_d * (δ_0 + ϱ * μ_ac)` with `ϱ` the inverse of the (unnormalised) discrete part.
#[derive(Debug, Clone)]
pub struct MixedDecomposition {
    pub discrete: LatticeSeries,
    pub inverse: InverseElement,
    pub ac_weight: f64,
    pub ac: Option<DensityDescriptor>,
    /// `sup |μ̂ − μ̂_d (1 + (ϱ * μ_ac)^)|` on the check grid.
    pub identity_error: f64,
}

impl MixedDecomposition {
    /// Density of `ϱ * μ_ac`: `w Σ c_k f(x − y_k)`, `y_k = −r + hk`.
    pub fn companion_density(&self, x: f64) -> f64 {
        let Some(f) = &self.ac else { return 0.0 };
        let s = &self.inverse.series;
        let terms: Vec<f64> = s
            .iter()
            .map(|(k, c)| c.re * f.pdf(x - (s.r + s.h * k as f64)))
            .collect();
        self.ac_weight * pairwise_sum(&terms)
    }

    /// `1 + (ϱ * μ_ac)^(z)`.
    pub fn companion_charfn(&self, z: f64) -> Complex64 {
        match &self.ac {
            Some(f) => 1.0 + self.ac_weight * self.inverse.series.eval(z) * f.ft(z),
            None => Complex64::new(1.0, 0.0),
        }
    }

    pub fn mass(&self) -> f64 {
        self.discrete.total().re
    }
}

pub fn mixed_decompose(dist: &Distribution, n_fft: usize, tol: f64) -> Result<MixedDecomposition> {
    if dist.atoms.is_empty() {
        return Err(QidError::InvalidParameter("no lattice part to decompose".into()));
    }
    let lat = lattice_of(dist)?;
    let discrete = LatticeSeries::from_atoms(&dist.atoms, lat)?;
    let inverse = wiener_invert(&discrete, n_fft, tol)?;
    let (ac_weight, ac) = match dist.ac_part() {
        Some((w, f)) => (w, Some(f.clone())),
        None => (0.0, None),
    };
    let mut d = MixedDecomposition { discrete, inverse, ac_weight, ac, identity_error: 0.0 };
    let spacing = PI / (64.0 * dist.x_spread().max(1.0));
    let steps = (64.0 / spacing).ceil() as usize;
    d.identity_error = (0..=steps)
        .map(|j| {
            let z = j as f64 * spacing;
            (dist.charfn(z) - d.discrete.eval(z) * d.companion_charfn(z)).norm()
        })
        .fold(0.0, f64::max);
    if d.identity_error > RESIDUAL_LIMIT {
        return Err(QidError::InversionResidual { residual: d.identity_error, limit: RESIDUAL_LIMIT });
    }
    Ok(d)
}

/// The companion `P (δ_0 + ϱ * μ_ac)` seen as a Wiener-algebra curve with
/// constant `P = μ_d(R)`; evaluated exactly as `P μ̂ / μ̂_d`.
pub struct CompanionCurve<'a> {
    pub dist: &'a Distribution,
    pub decomposition: &'a MixedDecomposition,
    pub cutoff: f64,
}

impl WienerCurve for CompanionCurve<'_> {
    fn limit(&self) -> f64 {
        self.decomposition.mass()
    }

    fn eval(&self, z: f64) -> Complex64 {
        self.limit() * self.dist.charfn(z) / self.decomposition.discrete.eval(z)
    }

    fn eval_grid(&self, z0: f64, dz: f64, m: usize) -> Vec<Complex64> {
        let p = self.limit();
        self.dist
            .charfn_grid(z0, dz, m)
            .into_iter()
            .enumerate()
            .map(|(j, v)| p * v / self.decomposition.discrete.eval(z0 + j as f64 * dz))
            .collect()
    }

    fn reference(&self) -> Vec<LevyTerm> {
        let d = self.decomposition;
        let Some(f) = &d.ac else { return vec![] };
        let (cheap, _) = f.split_cheap();
        let s = &d.inverse.series;
        let mut out = Vec::new();
        for (k, c) in s.iter() {
            if c.re == 0.0 {
                continue;
            }
            let y = s.r + s.h * k as f64;
            for (w, comp) in &cheap {
                out.push(LevyTerm::Density { coef: d.ac_weight * c.re * w, density: comp.shift(y) });
            }
        }
        out
    }

    fn tail_cutoff(&self) -> f64 {
        self.cutoff
    }

    fn spread(&self) -> f64 {
        self.dist.x_spread()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn two_point(p0: f64, p1: f64) -> LatticeSeries {
        LatticeSeries::from_real(0.0, 1.0, 0, &[p0, p1])
    }

    #[test]
    fn charfn_examples() {
        assert_abs_diff_eq!(LatticeSeries::from_real(0.0, 1.0, 0, &[1.0]).eval(2.3).re, 1.0);
        assert_abs_diff_eq!(two_point(0.7, 0.3).eval(PI).re, 0.4, epsilon = 1e-15);
        assert!(two_point(0.5, 0.5).eval(PI).norm() < 1e-15);
    }

    #[test]
    fn geometric_inverse() {
        let inv = wiener_invert(&two_point(0.7, 0.3), DEFAULT_FFT, DEFAULT_TRUNCATION).unwrap();
        assert_abs_diff_eq!(inv.series.coeff(0).re, 10.0 / 7.0, epsilon = 1e-12);
        assert_abs_diff_eq!(inv.series.coeff(1).re, -30.0 / 49.0, epsilon = 1e-12);
        assert!(inv.residual < 1e-8);
        let unit = wiener_invert(&LatticeSeries::from_real(0.0, 1.0, 0, &[1.0]), DEFAULT_FFT, DEFAULT_TRUNCATION).unwrap();
        assert_eq!(unit.series.coeffs.len(), 1);
        assert!(matches!(
            wiener_invert(&two_point(0.5, 0.5), DEFAULT_FFT, DEFAULT_TRUNCATION),
            Err(QidError::LatticeVanishes { .. })
        ));
    }

    #[test]
    fn log_series_triplet() {
        let t = lattice_triplet(&two_point(0.7, 0.3), DEFAULT_FFT, DEFAULT_TRUNCATION).unwrap();
        assert_eq!(t.winding, 0);
        let q: f64 = 3.0 / 7.0;
        for k in 1..=5 {
            let expect = if k % 2 == 1 { 1.0 } else { -1.0 } * q.powi(k) / k as f64;
            assert_abs_diff_eq!(t.b.coeff(k as i64).re, expect, epsilon = 1e-12);
        }
        assert!(t.reconstruction_error < 1e-8);
        let t = lattice_triplet(&two_point(0.3, 0.7), DEFAULT_FFT, DEFAULT_TRUNCATION).unwrap();
        assert_eq!(t.winding, 1);
        assert_abs_diff_eq!(t.b.coeff(-1).re, q, epsilon = 1e-12);
        assert_abs_diff_eq!(t.b.coeff(-2).re, -q * q / 2.0, epsilon = 1e-12);
        let unit = lattice_triplet(&LatticeSeries::from_real(0.0, 1.0, 0, &[1.0]), DEFAULT_FFT, DEFAULT_TRUNCATION).unwrap();
        assert_eq!(unit.winding, 0);
        assert!(unit.atoms().is_empty());
    }

    #[test]
    fn lattice_inference() {
        let atoms = [Atom { x: 0.5, p: 0.2 }, Atom { x: 1.25, p: 0.3 }, Atom { x: 2.0, p: 0.5 }];
        let l = infer_lattice(&atoms).unwrap();
        assert_abs_diff_eq!(l.h, 0.75);
        let atoms = [Atom { x: 0.0, p: 0.5 }, Atom { x: 0.4, p: 0.25 }, Atom { x: 1.0, p: 0.25 }];
        assert_abs_diff_eq!(infer_lattice(&atoms).unwrap().h, 0.2, epsilon = 1e-15);
        let atoms = [Atom { x: 0.0, p: 0.5 }, Atom { x: 1.0, p: 0.25 }, Atom { x: 2f64.sqrt(), p: 0.25 }];
        assert!(infer_lattice(&atoms).is_none());
    }

    #[test]
    fn decomposition_matches_direct_convolution() {
        let f = DensityDescriptor::normal(0.0, 1.0);
        let d = Distribution::new(
            vec![Atom { x: 0.0, p: 0.35 }, Atom { x: 1.0, p: 0.15 }],
            Some(Lattice { r: 0.0, h: 1.0 }),
            0.5,
            Some(f.clone()),
        )
        .unwrap();
        let dec = mixed_decompose(&d, DEFAULT_FFT, DEFAULT_TRUNCATION).unwrap();
        assert!(dec.identity_error < 1e-8);
        // c_k of 0.35 + 0.15 w: (1/0.35)(-3/7)^k.
        for x in [-2.0, -0.5, 0.0, 0.3, 1.0, 2.5, 4.0, 7.0, -6.0, 10.0] {
            let direct: f64 = (0..80)
                .map(|k| (1.0 / 0.35) * (-3.0f64 / 7.0).powi(k) * 0.5 * f.pdf(x - k as f64))
                .sum();
            assert_abs_diff_eq!(dec.companion_density(x), direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn unit_discrete_part_leaves_companion() {
        let f = DensityDescriptor::exponential(2.0);
        let d = Distribution::atom_plus(0.0, 0.4, f.clone()).unwrap();
        let dec = mixed_decompose(&d, DEFAULT_FFT, DEFAULT_TRUNCATION).unwrap();
        for x in [0.1, 1.0, 3.0] {
            assert_abs_diff_eq!(dec.companion_density(x), 0.6 / 0.4 * f.pdf(x), epsilon = 1e-14);
        }
    }

    #[test]
    fn residual_is_exact_for_known_inverse() {
        let a = two_point(0.7, 0.3);
        let c = LatticeSeries::from_real(0.0, 1.0, 0, &(0..60).map(|k| (1.0 / 0.7) * (-3.0f64 / 7.0).powi(k)).collect::<Vec<_>>());
        // Exact residual is (3/7)^60; the rest is rounding.
        assert!(convolution_residual(&a, &c) < 1e-14);
    }
}
