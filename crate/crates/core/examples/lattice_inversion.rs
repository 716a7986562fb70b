//! Wiener inversion of 0.7 δ_0 + 0.3 δ_1. The inverse is
//! (1/0.7) Σ (-3/7)^k δ_k and the Lévy weights are b_k = -(-3/7)^k / k.

use qid::analysis::{analyze, AnalysisConfig};
use qid::corpus::two_point;
use qid::lattice::wiener_invert;

fn main() -> qid::Result<()> {
    let cfg = AnalysisConfig::default();
    let v = analyze(&two_point(0.7), &cfg)?;
    let l = v.report().and_then(|r| r.lattice.as_ref()).expect("lattice law");
    let inv = wiener_invert(&l.discrete, cfg.n_fft, cfg.truncation_tol)?;
    println!("winding {}  residual {:.2e}", l.triplet.winding, inv.residual);
    println!("{:>3} {:>14} {:>14}", "k", "c_k", "b_k");
    for k in 0..8i64 {
        println!("{k:>3} {:>14.10} {:>14.10}", inv.series.coeff(k).re, l.triplet.b.coeff(k).re);
    }
    let half = analyze(&two_point(0.5), &cfg)?;
    println!("0.5/0.5: {}", if half.is_qid() { "QID" } else { "NotQID" });
    Ok(())
}
