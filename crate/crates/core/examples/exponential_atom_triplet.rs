//! 0.5 δ_0 + 0.5 Exp(1) against its closed-form quasi-Lévy density
//! g(x) = (e^{-x} - e^{-2x}) / x on x > 0.

use qid::analysis::{analyze, AnalysisConfig};
use qid::corpus::exponential_atom;

fn main() -> qid::Result<()> {
    let v = analyze(&exponential_atom(), &AnalysisConfig::default())?;
    let t = &v.report().expect("QID").triplet;
    println!("index {}  drift {:.6}", t.index, t.drift);
    println!("{:>6} {:>12} {:>12}", "x", "g", "closed form");
    for x in [0.1f64, 0.5, 1.0, 2.0, 4.0] {
        let want = ((-x).exp() - (-2.0 * x).exp()) / x;
        println!("{x:>6} {:>12.8} {:>12.8}", t.density.eval(x), want);
    }
    println!("g(-1) = {:.2e}", t.density.eval(-1.0));
    Ok(())
}
