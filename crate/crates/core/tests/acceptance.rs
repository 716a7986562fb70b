//! Acceptance criteria 1 to 10, one line each.

use qid::analysis::{analyze, AnalysisConfig, QidReport, Route, Verdict};
use qid::charfn::ZeroVerdict;
use qid::charfn::ScanConfig;
use qid::corpus;
use qid::density::DensityDescriptor;
use qid::distribution::Distribution;
use qid::krein::l1_distance;
use qid::lattice::{lattice_triplet, wiener_invert, LatticeSeries, DEFAULT_FFT, DEFAULT_TRUNCATION};
use qid::levy::SignedLevyDensity;
use qid::topology::{levy_distance, nonqid_sequence, path_point};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg)
    }
}

fn qid_report(v: Verdict, what: &str) -> Result<QidReport, String> {
    match v {
        Verdict::Qid(r) => Ok(*r),
        Verdict::NotQid(c) => Err(format!("{what}: NotQID, zero at {:?}", c.zero_location())),
    }
}

fn run(d: &Distribution, cfg: &AnalysisConfig, what: &str) -> Result<QidReport, String> {
    let v = analyze(d, cfg).map_err(|e| format!("{what}: {e}"))?;
    qid_report(v, what)
}

fn criterion_1() -> Outcome {
    let r = run(&corpus::paper_example(), &AnalysisConfig::default(), "paper example")?;
    check(r.triplet.index == 2, format!("index {}", r.triplet.index))?;
    check((r.raw_index() - 2.0).abs() < 0.05, format!("raw index {}", r.raw_index()))?;
    check(!r.triplet.finite_variation(), "finite variation flag set".into())?;
    let v = r.triplet.variation(-20.0, 20.0, 4001);
    check(v.positive.is_infinite() && v.negative.is_infinite(), "variation parts finite".into())?;
    Ok(format!("index 2, raw {:.6}, |ν| infinite", r.raw_index()))
}

/// `(e^{-x} − e^{-2x}) / x` for `x > 0`.
fn exp_atom_g(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        ((-x).exp() - (-2.0 * x).exp()) / x
    }
}

fn criterion_2() -> Outcome {
    let r = run(&corpus::exponential_atom(), &AnalysisConfig::default(), "exponential atom")?;
    let dx: f64 = 1e-4;
    let n = ((20.0 - 0.01) / dx).round() as usize;
    let (mut err, mut norm) = (0.0, 0.0);
    for k in 0..=n {
        let x = 0.01 + k as f64 * dx;
        let w = if k == 0 || k == n { 0.5 * dx } else { dx };
        err += w * (r.triplet.density.eval(x) - exp_atom_g(x)).abs();
        norm += w * exp_atom_g(x).abs();
    }
    let rel = err / norm;
    check(rel < 1e-3, format!("relative L1 error {rel:e}"))?;
    check(r.triplet.index == 0, format!("index {}", r.triplet.index))?;
    check(r.triplet.drift == 0.0, format!("drift {}", r.triplet.drift))?;
    Ok(format!("relative L1 error {rel:.3e}, index 0, drift 0"))
}

fn criterion_3() -> Outcome {
    let cfg = AnalysisConfig::default();
    let mut worst: (f64, &str) = (0.0, "");
    for (name, d) in corpus::qid_laws() {
        let r = run(&d, &cfg, name)?;
        check(r.recon_error < 1e-4, format!("{name}: reconstruction error {:e}", r.recon_error))?;
        if r.recon_error >= worst.0 {
            worst = (r.recon_error, name);
        }
    }
    Ok(format!("worst reconstruction error {:.3e} ({})", worst.0, worst.1))
}

fn criterion_4() -> Outcome {
    let cfg = AnalysisConfig::default();
    let (mut g_im, mut b_im) = (0.0f64, 0.0f64);
    let mut laws = corpus::qid_laws();
    laws.push(("two_point", corpus::two_point(0.7)));
    for (name, d) in laws {
        let r = run(&d, &cfg, name)?;
        if let Some(k) = &r.krein {
            check(k.im_residual < 1e-6, format!("{name}: sup|Im g| = {:e}", k.im_residual))?;
            g_im = g_im.max(k.im_residual);
        }
        if let Some(l) = &r.lattice {
            check(l.triplet.im_max < 1e-10, format!("{name}: max|Im b_k| = {:e}", l.triplet.im_max))?;
            b_im = b_im.max(l.triplet.im_max);
        }
    }
    Ok(format!("sup|Im g| {g_im:.3e}, max|Im b_k| {b_im:.3e}"))
}

/// Root of `0.1 + 0.9 sin(z)/z` by plain bisection on `[lo, hi]`.
fn sinc_root(lo: f64, hi: f64) -> f64 {
    let f = |z: f64| 0.1 + 0.9 * z.sin() / z;
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if f(a) * f(m) <= 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

fn criterion_5() -> Outcome {
    let cfg = AnalysisConfig::default();
    let v = analyze(&corpus::atom_uniform(0.1), &cfg).map_err(|e| e.to_string())?;
    let Verdict::NotQid(c) = v else { return Err("0.1/0.9 uniform law reported QID".into()) };
    let z = c.zero_location().ok_or("no refined zero")?;
    // The root next to the minimiser 4.49341 of sin(z)/z on its left.
    let oracle = sinc_root(std::f64::consts::PI, 4.493409457909064);
    check((z - oracle).abs() < 1e-6, format!("zero {z} vs oracle {oracle}"))?;
    let v = analyze(&corpus::atom_uniform(0.5), &cfg).map_err(|e| e.to_string())?;
    check(v.is_qid(), "0.5/0.5 uniform law not QID".into())?;
    Ok(format!("zero at {z:.10} (oracle {oracle:.10}); 0.5 case QID"))
}

fn criterion_6() -> Outcome {
    let s = LatticeSeries::from_real(0.0, 1.0, 0, &[0.7, 0.3]);
    let inv = wiener_invert(&s, DEFAULT_FFT, DEFAULT_TRUNCATION).map_err(|e| e.to_string())?;
    check(inv.residual < 1e-8, format!("residual {:e}", inv.residual))?;
    let (c0, c1) = (inv.series.coeff(0).re, inv.series.coeff(1).re);
    check((c0 - 10.0 / 7.0).abs() < 1e-10, format!("c0 {c0}"))?;
    check((c1 + 30.0 / 49.0).abs() < 1e-10, format!("c1 {c1}"))?;
    let t = lattice_triplet(&s, DEFAULT_FFT, DEFAULT_TRUNCATION).map_err(|e| e.to_string())?;
    // log(1 + q e^{iθ}) = Σ −(−q)^k / k e^{ikθ}, q = 3/7.
    let q: f64 = 3.0 / 7.0;
    for k in 1..=3 {
        let want = -(-q).powi(k) / k as f64;
        let got = t.b.coeff(k as i64).re;
        check((got - want).abs() < 1e-10, format!("b_{k} {got} vs {want}"))?;
    }
    Ok(format!(
        "residual {:.2e}, c0 {c0:.12}, c1 {c1:.12}, b1..b3 {:.7} {:.7} {:.7}",
        inv.residual,
        t.b.coeff(1).re,
        t.b.coeff(2).re,
        t.b.coeff(3).re
    ))
}

fn random_density(rng: &mut ChaCha8Rng) -> DensityDescriptor {
    match rng.random_range(0..3) {
        0 => DensityDescriptor::normal(rng.random_range(-3.0..3.0), rng.random_range(0.2..3.0)),
        1 => DensityDescriptor::Exponential { rate: rng.random_range(0.5..3.0), loc: rng.random_range(-2.0..2.0) },
        _ => {
            let left = rng.random_range(-3.0..1.0);
            DensityDescriptor::uniform(left, left + rng.random_range(0.5..3.0))
        }
    }
}

/// A single atom of mass in (0.5, 1) plus a random mixture of one to three components.
pub fn cuppens_law(rng: &mut ChaCha8Rng) -> Distribution {
    let p = rng.random_range(0.5..1.0);
    let k = rng.random_range(1..=3);
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let f = DensityDescriptor::mixture(raw.iter().map(|w| (w / total, random_density(rng))).collect());
    Distribution::atom_plus(rng.random_range(-2.0..2.0), p, f).unwrap()
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = AnalysisConfig::default();
    for i in 0..50 {
        let d = cuppens_law(&mut rng);
        let r = run(&d, &cfg, &format!("law {i}"))?;
        check(r.route == Route::Atom, format!("law {i}: route {:?}", r.route))?;
    }
    Ok("50/50 QID".into())
}

fn criterion_8() -> Outcome {
    let cfg = AnalysisConfig::default();
    let mu1 = Distribution::absolutely_continuous(DensityDescriptor::normal(0.0, 1.0));
    let mu2 = Distribution::absolutely_continuous(DensityDescriptor::normal(2.0, 0.5));
    let point = |t: f64| path_point(&mu1, &mu2, t).map_err(|e| e.to_string());
    let mut worst = 0.0f64;
    for t0 in [0.25, 0.5, 0.75] {
        for dt in [-0.009, 0.009] {
            let d = levy_distance(&point(t0)?, &point(t0 + dt)?).map_err(|e| e.to_string())?.value;
            check(d < 0.05, format!("distance {d} at t0 {t0}, dt {dt}"))?;
            worst = worst.max(d);
        }
    }
    for k in 1..=9 {
        let t = k as f64 / 10.0;
        check(analyze(&point(t)?, &cfg).map_err(|e| e.to_string())?.is_qid(), format!("t = {t} not QID"))?;
    }
    let nu = Distribution::absolutely_continuous(DensityDescriptor::uniform(-1.0, 1.0));
    let mut dists = Vec::new();
    for n in [1, 2, 5, 10, 50] {
        let s = nonqid_sequence(&mu1, &nu, n, &ScanConfig::default()).map_err(|e| e.to_string())?;
        let v = analyze(&s.distribution, &cfg).map_err(|e| e.to_string())?;
        let c = v.certificate().ok_or("no certificate")?;
        check(!v.is_qid() && c.verdict == ZeroVerdict::ZeroFound, format!("n = {n} not NotQID"))?;
        check((c.zero_location().unwrap() - s.zero).abs() < 1e-6, format!("n = {n}: zero {:?}", c.zero_location()))?;
        dists.push(levy_distance(&s.distribution, &mu1).map_err(|e| e.to_string())?.value);
    }
    check(dists.windows(2).all(|w| w[1] < w[0]), format!("distances not decreasing: {dists:?}"))?;
    check(dists[4] < 0.02, format!("distance at n = 50 is {}", dists[4]))?;
    let dists: Vec<String> = dists.iter().map(|d| format!("{d:.2e}")).collect();
    Ok(format!("continuity max {worst:.4}, 9/9 QID, sequence distances [{}]", dists.join(", ")))
}

fn random_law(rng: &mut ChaCha8Rng) -> Distribution {
    match rng.random_range(0..3) {
        0 => Distribution::absolutely_continuous(DensityDescriptor::normal(
            rng.random_range(-1.0..1.0),
            rng.random_range(0.1..2.0),
        )),
        1 => Distribution::dirac(rng.random_range(-1.0..1.0)),
        _ => Distribution::atom_plus(
            rng.random_range(-1.0..1.0),
            rng.random_range(0.1..0.9),
            DensityDescriptor::uniform(-1.0, rng.random_range(-0.5..1.5)),
        )
        .unwrap(),
    }
}

fn criterion_9() -> Outcome {
    let d = levy_distance(&Distribution::dirac(0.0), &Distribution::dirac(0.3)).map_err(|e| e.to_string())?;
    check((d.value - 0.3).abs() <= d.grid_spacing, format!("δ0 vs δ0.3: {}", d.value))?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut slack = f64::INFINITY;
    for i in 0..20 {
        let (a, b, c) = (random_law(&mut rng), random_law(&mut rng), random_law(&mut rng));
        let ab = levy_distance(&a, &b).map_err(|e| e.to_string())?;
        let ba = levy_distance(&b, &a).map_err(|e| e.to_string())?;
        let bc = levy_distance(&b, &c).map_err(|e| e.to_string())?;
        let ac = levy_distance(&a, &c).map_err(|e| e.to_string())?;
        check(ab.value == ba.value, format!("triple {i}: asymmetric {} vs {}", ab.value, ba.value))?;
        let spacing = ab.grid_spacing.max(bc.grid_spacing).max(ac.grid_spacing);
        let gap = ab.value + bc.value + 2.0 * spacing - ac.value;
        check(gap >= 0.0, format!("triple {i}: triangle fails by {}", -gap))?;
        slack = slack.min(gap);
    }
    Ok(format!("δ0 vs δ0.3 = {} (spacing {}), 20 triples symmetric, min triangle slack {slack:.4}", d.value, d.grid_spacing))
}

fn window_l1(a: &SignedLevyDensity, b: &SignedLevyDensity) -> f64 {
    l1_distance(a, b, -20.0, 20.0, 1e-3)
}

fn criterion_10() -> Outcome {
    let (c14, c15) = (AnalysisConfig::with_points(1 << 14), AnalysisConfig::with_points(1 << 15));
    let mut laws = corpus::qid_laws();
    laws.push(("two_point", corpus::two_point(0.7)));
    laws.push(("gaussian_pair", corpus::gaussian_pair()));
    laws.push(("atom_uniform_0.1", corpus::atom_uniform(0.1)));
    laws.push(("atom_uniform_0.5", corpus::atom_uniform(0.5)));
    let mut worst = 0.0f64;
    for (name, d) in laws {
        let a = analyze(&d, &c14).map_err(|e| format!("{name}: {e}"))?;
        let b = analyze(&d, &c15).map_err(|e| format!("{name}: {e}"))?;
        check(a.is_qid() == b.is_qid(), format!("{name}: verdict changed"))?;
        if let (Some(x), Some(y)) = (a.report(), b.report()) {
            check(x.triplet.index == y.triplet.index, format!("{name}: index changed"))?;
            let diff = window_l1(&x.triplet.density, &y.triplet.density);
            check(diff < 1e-5, format!("{name}: g changed by {diff:e}"))?;
            worst = worst.max(diff);
        }
    }
    Ok(format!("verdicts and indices unchanged, max g L1 change {worst:.3e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("paper example has index 2", criterion_1),
        ("closed-form quasi-Lévy density", criterion_2),
        ("reconstruction", criterion_3),
        ("imaginary residuals", criterion_4),
        ("zero detection", criterion_5),
        ("Wiener inversion", criterion_6),
        ("Cuppens suite", criterion_7),
        ("topology suite", criterion_8),
        ("metric sanity", criterion_9),
        ("stability under grid doubling", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.1}s]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
