//! Command-line front end. Exit codes: 0 QID (or success), 3 NotQID,
//! 2 indeterminate, 1 input error.

use crate::analysis::{analyze, zero_scan, AnalysisConfig, Verdict};
use crate::charfn::ZeroVerdict;
use crate::distribution::Distribution;
use crate::error::{QidError, Result};
use crate::grid::charfn_eval;
use crate::krein::AtomCurve;
use crate::krein::WienerCurve;
use crate::lattice::{lattice_of, lattice_triplet, mixed_decompose, LatticeSeries};
use crate::report::{
    certificate_json, config_json, error_json, report_json, verdict_label, write_analysis, write_b_csv, write_g_csv,
    write_json, write_path_csv, write_sequence_csv, PathRow, SequenceRow,
};
use crate::spec::load_spec;
use crate::topology::{levy_distance, nonqid_sequence, path_point};
use crate::winding::{distinguished_log, winding_from_log};
use clap::{Parser, Subcommand};
use serde_json::json;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;

pub const EXIT_QID: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INDETERMINATE: i32 = 2;
pub const EXIT_NOT_QID: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "qid", version, about = "Quasi-infinite divisibility of atom/lattice plus AC laws")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Distribution spec (JSON).
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
    /// Second spec: path endpoint or the law with zeros for `sequence`.
    #[arg(long, global = true)]
    pub spec2: Option<PathBuf>,
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Half-width of the extraction grid.
    #[arg(long, global = true)]
    pub zmax: Option<f64>,
    /// Extraction grid size, a power of two in [2^10, 2^20].
    #[arg(long = "n", global = true)]
    pub n_points: Option<usize>,
    #[arg(long = "t-grid", global = true, default_value = "0:1:0.1")]
    pub t_grid: String,
    #[arg(long = "n-ladder", global = true, default_value = "1,2,5,10,50")]
    pub n_ladder: String,
    #[arg(long = "json-only", global = true)]
    pub json_only: bool,
    /// Recorded in reports; no command draws random numbers.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Full pipeline: zero scan, triplet, reconstruction check.
    Analyze,
    /// Zero certificate only.
    Zeros,
    /// Winding index of the (shifted) characteristic function.
    Index,
    /// Triplet header and g.csv.
    Triplet,
    /// Characteristic function next to its reconstruction.
    Reconstruct,
    /// Lattice inversion, log-series triplet and decomposition.
    Lattice,
    /// Interpolation path between --spec and --spec2.
    Interpolate,
    /// Non-QID sequence converging to --spec, built from --spec2.
    Sequence,
}

/// `a:b:step`, inclusive of `b` up to rounding.
pub fn parse_t_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || QidError::InvalidParameter(format!("t-grid must look like a:b:step, got {s:?}"));
    let parts: Vec<f64> = s.split(':').map(|p| p.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
    let [a, b, step] = parts[..] else { return Err(bad()) };
    if !(step > 0.0) || !(b >= a) || a < 0.0 || b > 1.0 {
        return Err(bad());
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| a + k as f64 * step).map(|t| (t * 1e12).round() / 1e12).collect())
}

pub fn parse_ladder(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|p| p.trim().parse::<u32>().ok().filter(|n| *n > 0))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| QidError::InvalidParameter(format!("n-ladder must be positive integers, got {s:?}")))
}

pub fn exit_code(e: &QidError) -> i32 {
    match e {
        QidError::Schema(_)
        | QidError::MassSum { .. }
        | QidError::NegativeDensity { .. }
        | QidError::NonLatticeAtom { .. }
        | QidError::InvalidParameter(_)
        | QidError::Unsupported(_)
        | QidError::Io(_) => EXIT_INPUT,
        _ => EXIT_INDETERMINATE,
    }
}

impl Cli {
    pub fn config(&self) -> Result<AnalysisConfig> {
        let mut cfg = AnalysisConfig::default();
        if let Some(n) = self.n_points {
            if !n.is_power_of_two() || !(1 << 10..=1 << 20).contains(&n) {
                return Err(QidError::InvalidParameter(format!("--n must be a power of two in [2^10, 2^20], got {n}")));
            }
            cfg.extraction.n_points = n;
        }
        if let Some(z) = self.zmax {
            if !(z > 0.0) {
                return Err(QidError::InvalidParameter(format!("--zmax must be positive, got {z}")));
            }
            cfg.extraction.z_max = Some(z);
        }
        Ok(cfg)
    }

    fn load(&self, which: Option<&PathBuf>, flag: &str) -> Result<Distribution> {
        let p = which.ok_or_else(|| QidError::InvalidParameter(format!("missing --{flag}")))?;
        load_spec(p)
    }
}

/// Runs the command and returns the process exit code. Errors go to stderr
/// and, when the output directory is usable, to `report.json`.
pub fn run(cli: &Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = exit_code(&e);
            if code == EXIT_INDETERMINATE && fs::create_dir_all(&cli.out).is_ok() {
                let _ = write_json(&cli.out.join("report.json"), &error_json(&e));
            }
            code
        }
    }
}

fn verdict_code(v: &Verdict) -> i32 {
    if v.is_qid() {
        EXIT_QID
    } else {
        EXIT_NOT_QID
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let cfg = cli.config()?;
    let out = cli.out.as_path();
    match cli.command {
        Command::Analyze | Command::Reconstruct => {
            let dist = cli.load(cli.spec.as_ref(), "spec")?;
            let v = analyze(&dist, &cfg)?;
            write_analysis(out, &dist, &v, &cfg, cli.json_only)?;
            Ok(verdict_code(&v))
        }
        Command::Triplet => {
            let dist = cli.load(cli.spec.as_ref(), "spec")?;
            let v = analyze(&dist, &cfg)?;
            fs::create_dir_all(out)?;
            write_json(&out.join("triplet.json"), &report_json(&v, &cfg))?;
            if let (Verdict::Qid(r), false) = (&v, cli.json_only) {
                write_g_csv(&r.triplet, BufWriter::new(File::create(out.join("g.csv"))?))?;
            }
            Ok(verdict_code(&v))
        }
        Command::Zeros => {
            let dist = cli.load(cli.spec.as_ref(), "spec")?;
            let cert = zero_scan(&dist, &cfg.extraction.scan)?;
            fs::create_dir_all(out)?;
            let found = cert.verdict == ZeroVerdict::ZeroFound;
            write_json(
                &out.join("zeros.json"),
                &json!({ "verdict": if found { "NotQID" } else { "no_zeros" }, "certificate": certificate_json(&cert) }),
            )?;
            Ok(if found { EXIT_NOT_QID } else { EXIT_QID })
        }
        Command::Index => cmd_index(cli, &cfg),
        Command::Lattice => cmd_lattice(cli, &cfg),
        Command::Interpolate => cmd_interpolate(cli, &cfg),
        Command::Sequence => cmd_sequence(cli, &cfg),
    }
}

fn cmd_index(cli: &Cli, cfg: &AnalysisConfig) -> Result<i32> {
    let dist = cli.load(cli.spec.as_ref(), "spec")?;
    let out = cli.out.as_path();
    fs::create_dir_all(out)?;
    if dist.atoms.len() > 1 {
        let s = LatticeSeries::from_atoms(&dist.atoms, lattice_of(&dist)?)?;
        let lt = lattice_triplet(&s, cfg.n_fft, cfg.truncation_tol)?;
        write_json(&out.join("index.json"), &json!({ "index": lt.winding, "raw": lt.winding as f64, "period": true }))?;
        return Ok(EXIT_QID);
    }
    let (curve, x0) = AtomCurve::new(&dist)?;
    let e = &cfg.extraction;
    let z_max = e.z_max.unwrap_or_else(|| e.z_floor.max(e.tail_factor * curve.tail_cutoff()));
    let grid = charfn_eval(&curve.dist, z_max, e.n_points)?;
    let eval = |z: f64| curve.eval(z);
    let log = distinguished_log(&grid, Some(&eval), &e.log)?;
    let w = winding_from_log(&log.values, e.log.tail_fraction)?;
    write_json(
        &out.join("index.json"),
        &json!({ "index": w.index, "raw": w.raw, "x0": x0, "z_max": z_max, "n_points": e.n_points }),
    )?;
    if !cli.json_only {
        log.write_csv(BufWriter::new(File::create(out.join("log.csv"))?))?;
    }
    Ok(EXIT_QID)
}

fn cmd_lattice(cli: &Cli, cfg: &AnalysisConfig) -> Result<i32> {
    let dist = cli.load(cli.spec.as_ref(), "spec")?;
    if dist.atoms.len() < 2 {
        return Err(QidError::InvalidParameter("lattice needs at least two atoms".into()));
    }
    let out = cli.out.as_path();
    fs::create_dir_all(out)?;
    let v = analyze(&dist, cfg)?;
    let mut report = report_json(&v, cfg);
    let r = match &v {
        Verdict::NotQid(_) => {
            write_json(&out.join("lattice.json"), &report)?;
            return Ok(EXIT_NOT_QID);
        }
        Verdict::Qid(r) => r,
    };
    let l = r.lattice.as_ref().ok_or_else(|| QidError::Unsupported("no lattice part".into()))?;
    let inverse = match &l.inverse {
        Some(c) => c.clone(),
        None => crate::lattice::wiener_invert(&l.discrete, cfg.n_fft, cfg.truncation_tol)?,
    };
    report["inverse"] = json!({
        "residual": inverse.residual,
        "n_fft": inverse.n_fft,
        "truncation_tol": inverse.truncation_tol,
        "header": inverse.series.header(inverse.truncation_tol),
    });
    write_json(&out.join("lattice.json"), &report)?;
    if !cli.json_only {
        inverse.series.write_csv(BufWriter::new(File::create(out.join("c.csv"))?))?;
        write_b_csv(&l.triplet.b, BufWriter::new(File::create(out.join("b.csv"))?))?;
        l.discrete.write_csv(BufWriter::new(File::create(out.join("discrete.csv"))?))?;
        if dist.ac_part().is_some() {
            let dec = mixed_decompose(&dist, cfg.n_fft, cfg.truncation_tol)?;
            let mut w = BufWriter::new(File::create(out.join("companion.csv"))?);
            writeln!(w, "x,density")?;
            let (lo, hi) = dist.support(1e-8);
            let n = 2001;
            for k in 0..n {
                let x = lo + (hi - lo) * k as f64 / (n - 1) as f64;
                writeln!(w, "{:?},{:?}", x, dec.companion_density(x))?;
            }
            write_g_csv(&r.triplet, BufWriter::new(File::create(out.join("g.csv"))?))?;
        }
    }
    Ok(EXIT_QID)
}

fn verdict_word(dist: &Distribution, cfg: &AnalysisConfig) -> String {
    match analyze(dist, cfg) {
        Ok(v) => verdict_label(&v).to_string(),
        Err(_) => "indeterminate".to_string(),
    }
}

fn cmd_interpolate(cli: &Cli, cfg: &AnalysisConfig) -> Result<i32> {
    let mu1 = cli.load(cli.spec.as_ref(), "spec")?;
    let mu2 = cli.load(cli.spec2.as_ref(), "spec2")?;
    let ts = parse_t_grid(&cli.t_grid)?;
    let mut rows = Vec::new();
    for t in ts {
        let p = path_point(&mu1, &mu2, t)?;
        rows.push(PathRow {
            t,
            levy_to_mu1: levy_distance(&p, &mu1)?.value,
            levy_to_mu2: levy_distance(&p, &mu2)?.value,
            qid_verdict: verdict_word(&p, cfg),
        });
    }
    fs::create_dir_all(&cli.out)?;
    write_path_csv(&rows, BufWriter::new(File::create(cli.out.join("path.csv"))?))?;
    write_json(
        &cli.out.join("path.json"),
        &json!({ "metric": "levy", "t_grid": cli.t_grid, "seed": cli.seed, "config": config_json(cfg) }),
    )?;
    Ok(EXIT_QID)
}

fn cmd_sequence(cli: &Cli, cfg: &AnalysisConfig) -> Result<i32> {
    let mu = cli.load(cli.spec.as_ref(), "spec")?;
    let nu = cli.load(cli.spec2.as_ref(), "spec2")?;
    let ladder = parse_ladder(&cli.n_ladder)?;
    let mut rows = Vec::new();
    let mut verdicts = Vec::new();
    for n in ladder {
        let s = nonqid_sequence(&mu, &nu, n, &cfg.extraction.scan)?;
        verdicts.push(verdict_word(&s.distribution, cfg));
        rows.push(SequenceRow { n, zero_location: s.zero, levy_to_limit: levy_distance(&s.distribution, &mu)?.value });
    }
    fs::create_dir_all(&cli.out)?;
    write_sequence_csv(&rows, BufWriter::new(File::create(cli.out.join("sequence.csv"))?))?;
    write_json(
        &cli.out.join("sequence.json"),
        &json!({ "metric": "levy", "verdicts": verdicts, "n_ladder": cli.n_ladder, "config": config_json(cfg) }),
    )?;
    Ok(EXIT_QID)
}

/// Parses `args` and runs; for tests and the binary.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_QID
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_grid_parsing() {
        let g = parse_t_grid("0:1:0.1").unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[3], 0.3);
        assert_eq!(g[10], 1.0);
        assert!(parse_t_grid("0:1").is_err());
        assert!(parse_t_grid("0:2:0.5").is_err());
    }

    #[test]
    fn ladder_parsing() {
        assert_eq!(parse_ladder("1, 2,5").unwrap(), vec![1, 2, 5]);
        assert!(parse_ladder("1,0").is_err());
        assert!(parse_ladder("x").is_err());
    }

    #[test]
    fn n_override_is_checked() {
        let cli = Cli::try_parse_from(["qid", "analyze", "--n", "1000"]).unwrap();
        assert!(cli.config().is_err());
        let cli = Cli::try_parse_from(["qid", "analyze", "--n", "16384"]).unwrap();
        assert_eq!(cli.config().unwrap().extraction.n_points, 16384);
    }

    #[test]
    fn missing_spec_is_input_error() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        assert_eq!(main_with(["qid", "analyze", "--out", out]), EXIT_INPUT);
    }
}
