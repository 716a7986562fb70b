//! JSON reports and plot-ready CSV files. Floats are written in shortest
//! round-trip form so identical runs give identical bytes.

use crate::analysis::{recon_table, AnalysisConfig, QidReport, Verdict};
use crate::charfn::ZeroCertificate;
use crate::distribution::Distribution;
use crate::error::QidError;
use crate::lattice::LatticeSeries;
use crate::levy::QuasiLevyTriplet;
use serde_json::{json, Value};
use std::fs;
use std::io::{self, Write};
use std::path::Path;

/// Half-width of the window `g.csv` covers.
pub const G_WINDOW: f64 = 20.0;

pub fn verdict_label(v: &Verdict) -> &'static str {
    match v {
        Verdict::Qid(_) => "QID",
        Verdict::NotQid(_) => "NotQID",
    }
}

pub fn certificate_json(c: &ZeroCertificate) -> Value {
    serde_json::to_value(c).unwrap_or(Value::Null)
}

pub fn triplet_header(r: &QidReport) -> Value {
    let t = &r.triplet;
    json!({
        "a": t.gaussian_variance,
        "gamma0": t.drift,
        "index": t.index,
        "x0": t.location_shift,
        "im_residual": r.im_residual,
        "recon_error": r.recon_error,
        "finite_variation": t.finite_variation(),
    })
}

pub fn config_json(cfg: &AnalysisConfig) -> Value {
    let e = &cfg.extraction;
    json!({
        "n_points": e.n_points,
        "z_max": e.z_max,
        "z_floor": e.z_floor,
        "tail_factor": e.tail_factor,
        "z_scan_min": e.scan.z_scan_min,
        "refine_tol": e.scan.refine_tol,
        "z_bound": e.scan.z_bound,
        "ratio_limit": e.log.ratio_limit,
        "min_modulus": e.log.min_modulus,
        "tail_fraction": e.log.tail_fraction,
        "n_fft": cfg.n_fft,
        "truncation_tol": cfg.truncation_tol,
    })
}

pub fn report_json(v: &Verdict, cfg: &AnalysisConfig) -> Value {
    let mut out = json!({
        "verdict": verdict_label(v),
        "certificate": v.certificate().map(certificate_json),
        "config": config_json(cfg),
    });
    if let Verdict::Qid(r) = v {
        out["route"] = serde_json::to_value(r.route).unwrap_or(Value::Null);
        out["triplet"] = triplet_header(r);
        out["raw_index"] = json!(r.raw_index());
        out["lattice_atom_count"] = json!(r.triplet.lattice_atoms.len());
        if let Some(k) = &r.krein {
            out["extraction"] = json!({
                "q_est": [k.q_est.re, k.q_est.im],
                "edge_mass": k.edge_mass,
                "tail_difference": k.tail_difference,
                "z_max": k.z_max,
                "n_points": k.n_points,
                "dx": k.dx,
            });
        }
        if let Some(l) = &r.lattice {
            out["lattice"] = json!({
                "r": l.triplet.r,
                "h": l.triplet.h,
                "winding": l.triplet.winding,
                "drift": l.triplet.drift(),
                "reconstruction_error": l.triplet.reconstruction_error,
                "im_max": l.triplet.im_max,
                "n_fft": l.triplet.n_fft,
                "identity_error": l.identity_error,
                "inverse_residual": l.inverse.as_ref().map(|c| c.residual),
            });
        }
    }
    out
}

pub fn error_json(e: &QidError) -> Value {
    json!({ "verdict": "indeterminate", "error": e.to_string() })
}

pub fn write_json(path: &Path, v: &Value) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(v).map_err(io::Error::other)?;
    text.push('\n');
    fs::write(path, text)
}

/// Nodes `g.csv` is written on: the tabulation grid inside the window, or a
/// 0.01 grid when nothing is tabulated.
pub fn g_nodes(t: &QuasiLevyTriplet) -> Vec<f64> {
    match t.density.tabulation() {
        Some((x0, dx, n)) => (0..n).map(|k| x0 + k as f64 * dx).filter(|x| x.abs() <= G_WINDOW).collect(),
        None if t.density.is_zero() => vec![],
        None => (0..=4000).map(|k| -G_WINDOW + k as f64 * 0.01).collect(),
    }
}

pub fn write_g_csv<W: Write>(t: &QuasiLevyTriplet, mut out: W) -> io::Result<()> {
    writeln!(out, "x,g")?;
    for x in g_nodes(t) {
        writeln!(out, "{:?},{:?}", x, t.density.eval(x))?;
    }
    Ok(())
}

pub fn write_charfn_csv<W: Write>(rows: &[(f64, num_complex::Complex64)], mut out: W) -> io::Result<()> {
    writeln!(out, "z,re,im")?;
    for (z, v) in rows {
        writeln!(out, "{:?},{:?},{:?}", z, v.re, v.im)?;
    }
    Ok(())
}

/// `b_k` of the lattice atoms, `k = x / h`.
pub fn write_b_csv<W: Write>(b: &LatticeSeries, mut out: W) -> io::Result<()> {
    writeln!(out, "k,b_k")?;
    for (k, c) in b.iter() {
        if k != 0 {
            writeln!(out, "{},{:?}", k, c.re)?;
        }
    }
    Ok(())
}

/// Writes `report.json` and, unless `json_only`, `g.csv`, `charfn.csv`, `recon.csv`.
pub fn write_analysis(
    dir: &Path,
    dist: &Distribution,
    v: &Verdict,
    cfg: &AnalysisConfig,
    json_only: bool,
) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    write_json(&dir.join("report.json"), &report_json(v, cfg))?;
    if json_only {
        return Ok(());
    }
    let z_hi = cfg.extraction.scan.z_scan_min;
    let n = 2049;
    match v {
        Verdict::Qid(r) => {
            write_g_csv(&r.triplet, io::BufWriter::new(fs::File::create(dir.join("g.csv"))?))?;
            let rows = recon_table(dist, &r.triplet, z_hi, n);
            let want: Vec<_> = rows.iter().map(|(z, a, _)| (*z, *a)).collect();
            let got: Vec<_> = rows.iter().map(|(z, _, b)| (*z, *b)).collect();
            write_charfn_csv(&want, io::BufWriter::new(fs::File::create(dir.join("charfn.csv"))?))?;
            write_charfn_csv(&got, io::BufWriter::new(fs::File::create(dir.join("recon.csv"))?))?;
            if let Some(l) = &r.lattice {
                write_b_csv(&l.triplet.b, io::BufWriter::new(fs::File::create(dir.join("b.csv"))?))?;
            }
        }
        Verdict::NotQid(_) => {
            let dz = z_hi / (n - 1) as f64;
            let vals = dist.charfn_grid(0.0, dz, n);
            let rows: Vec<_> = vals.into_iter().enumerate().map(|(j, v)| (j as f64 * dz, v)).collect();
            write_charfn_csv(&rows, io::BufWriter::new(fs::File::create(dir.join("charfn.csv"))?))?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathRow {
    pub t: f64,
    pub levy_to_mu1: f64,
    pub levy_to_mu2: f64,
    pub qid_verdict: String,
}

pub fn write_path_csv<W: Write>(rows: &[PathRow], mut out: W) -> io::Result<()> {
    writeln!(out, "t,levy_to_mu1,levy_to_mu2,qid_verdict")?;
    for r in rows {
        writeln!(out, "{:?},{:?},{:?},{}", r.t, r.levy_to_mu1, r.levy_to_mu2, r.qid_verdict)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceRow {
    pub n: u32,
    pub zero_location: f64,
    pub levy_to_limit: f64,
}

pub fn write_sequence_csv<W: Write>(rows: &[SequenceRow], mut out: W) -> io::Result<()> {
    writeln!(out, "n,zero_location,levy_to_limit")?;
    for r in rows {
        writeln!(out, "{},{:?},{:?}", r.n, r.zero_location, r.levy_to_limit)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::analyze;
    use crate::density::DensityDescriptor;

    #[test]
    fn csv_floats_round_trip() {
        let rows = [SequenceRow { n: 2, zero_location: 0.1 + 0.2, levy_to_limit: 1e-20 }];
        let mut buf = Vec::new();
        write_sequence_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let line = text.lines().nth(1).unwrap();
        let parts: Vec<&str> = line.split(',').collect();
        assert_eq!(parts[1].parse::<f64>().unwrap(), 0.1 + 0.2);
        assert_eq!(parts[2].parse::<f64>().unwrap(), 1e-20);
    }

    #[test]
    fn gaussian_report_header() {
        let d = Distribution::absolutely_continuous(DensityDescriptor::normal(0.0, 1.0));
        let cfg = AnalysisConfig::with_points(1 << 12);
        let v = analyze(&d, &cfg).unwrap();
        let j = report_json(&v, &cfg);
        assert_eq!(j["verdict"], "QID");
        assert_eq!(j["triplet"]["a"], 1.0);
        assert_eq!(j["triplet"]["finite_variation"], true);
    }

    #[test]
    fn reports_are_byte_identical() {
        let d = Distribution::atom_plus(0.0, 0.5, DensityDescriptor::exponential(1.0)).unwrap();
        let cfg = AnalysisConfig::with_points(1 << 12);
        let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
        for dir in &dirs {
            let v = analyze(&d, &cfg).unwrap();
            write_analysis(dir.path(), &d, &v, &cfg, false).unwrap();
        }
        for f in ["report.json", "g.csv", "charfn.csv", "recon.csv"] {
            let a = fs::read(dirs[0].path().join(f)).unwrap();
            let b = fs::read(dirs[1].path().join(f)).unwrap();
            assert_eq!(a, b, "{f}");
        }
    }
}
