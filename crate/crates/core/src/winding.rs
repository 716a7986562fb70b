//! Distinguished logarithm and winding index of non-vanishing curves.

use crate::error::{QidError, Result};
use crate::grid::CharFunctionGrid;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogConfig {
    /// Bisect a step when `|F_b / F_a - 1|` exceeds this.
    pub ratio_limit: f64,
    pub max_depth: u32,
    /// Smallest admissible `|F|` on the grid.
    pub min_modulus: f64,
    /// Fraction of nodes at each end used for tail averages.
    pub tail_fraction: f64,
}

impl Default for LogConfig {
    fn default() -> Self {
        Self { ratio_limit: 0.5, max_depth: 20, min_modulus: 1e-8, tail_fraction: 0.05 }
    }
}

/// Continuous logarithm `L` of a curve sampled at `z`, with `exp(L) = F`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogGrid {
    pub z: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl LogGrid {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "z,re,im")?;
        for (z, v) in self.z.iter().zip(&self.values) {
            writeln!(out, "{:?},{:?},{:?}", z, v.re, v.im)?;
        }
        Ok(())
    }
}

/// Phase increment of `F` from `a` to `b`, bisecting through `eval` while the
/// step ratio is far from 1.
fn phase_step(
    a: f64,
    fa: Complex64,
    b: f64,
    fb: Complex64,
    eval: Option<&dyn Fn(f64) -> Complex64>,
    cfg: &LogConfig,
    depth: u32,
) -> Result<f64> {
    let r = fb / fa;
    let Some(f) = eval else { return Ok(r.arg()) };
    if (r - 1.0).norm() <= cfg.ratio_limit {
        return Ok(r.arg());
    }
    if depth >= cfg.max_depth {
        return Err(QidError::RefinementExhausted { z_lo: a.min(b), z_hi: a.max(b) });
    }
    let mid = 0.5 * (a + b);
    let fm = f(mid);
    if fm.norm() < cfg.min_modulus {
        return Err(QidError::NearZero { z: mid, modulus: fm.norm() });
    }
    Ok(phase_step(a, fa, mid, fm, eval, cfg, depth + 1)? + phase_step(mid, fm, b, fb, eval, cfg, depth + 1)?)
}

/// Unwraps `values` sampled at increasing `z`, starting from the origin where
/// the curve equals `f0`. Both directions are tracked independently from the
/// origin; `L(0) = Log f0`.
pub fn unwrap_from_origin(
    z: &[f64],
    values: &[Complex64],
    f0: Complex64,
    eval: Option<&dyn Fn(f64) -> Complex64>,
    cfg: &LogConfig,
) -> Result<Vec<Complex64>> {
    for (zj, v) in z.iter().zip(values) {
        if !(v.norm() >= cfg.min_modulus) {
            return Err(QidError::NearZero { z: *zj, modulus: v.norm() });
        }
    }
    let n = z.len();
    let start = z.partition_point(|&x| x < 0.0);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let l0 = f0.ln();
    let mut phase = l0.im;
    let (mut za, mut fa) = (0.0, f0);
    for j in start..n {
        phase += phase_step(za, fa, z[j], values[j], eval, cfg, 0)?;
        out[j] = Complex64::new(values[j].norm().ln(), phase);
        za = z[j];
        fa = values[j];
    }
    let mut phase = l0.im;
    let (mut za, mut fa) = (0.0, f0);
    for j in (0..start).rev() {
        phase += phase_step(za, fa, z[j], values[j], eval, cfg, 0)?;
        out[j] = Complex64::new(values[j].norm().ln(), phase);
        za = z[j];
        fa = values[j];
    }
    Ok(out)
}

/// Distinguished logarithm of a grid; `eval`, when given, is used to refine
/// steps where the curve turns quickly.
pub fn distinguished_log(
    grid: &CharFunctionGrid,
    eval: Option<&dyn Fn(f64) -> Complex64>,
    cfg: &LogConfig,
) -> Result<LogGrid> {
    let z = grid.zs();
    let f0 = match eval {
        Some(f) => f(0.0),
        None => Complex64::new(1.0, 0.0),
    };
    let values = unwrap_from_origin(&z, &grid.values, f0, eval, cfg)?;
    Ok(LogGrid { z, values })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingEstimate {
    pub index: i64,
    /// Value before rounding.
    pub raw: f64,
}

/// Winding from tail averages of `Im L` over the outer `fraction` of nodes.
pub fn winding_from_log(log: &[Complex64], fraction: f64) -> Result<WindingEstimate> {
    let n = log.len();
    let k = ((n as f64 * fraction).round() as usize).clamp(1, n / 2);
    let head: f64 = log[..k].iter().map(|v| v.im).sum::<f64>() / k as f64;
    let tail: f64 = log[n - k..].iter().map(|v| v.im).sum::<f64>() / k as f64;
    let raw = (tail - head) / (2.0 * PI);
    let index = raw.round();
    if (raw - index).abs() >= 0.05 {
        return Err(QidError::NonIntegerWinding { value: raw });
    }
    Ok(WindingEstimate { index: index as i64, raw })
}

pub fn winding_index(
    grid: &CharFunctionGrid,
    eval: Option<&dyn Fn(f64) -> Complex64>,
    cfg: &LogConfig,
) -> Result<WindingEstimate> {
    let log = distinguished_log(grid, eval, cfg)?;
    winding_from_log(&log.values, cfg.tail_fraction)
}
