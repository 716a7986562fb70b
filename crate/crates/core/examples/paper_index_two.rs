//! 0.001 δ_0 + 0.999 N(1, 1): the atom is smaller than the continuous mass,
//! the winding number is 2 and the quasi-Lévy measure has infinite variation.

use qid::analysis::{analyze, AnalysisConfig};
use qid::corpus::paper_example;

fn main() -> qid::Result<()> {
    let mu = paper_example();
    let v = analyze(&mu, &AnalysisConfig::default())?;
    let r = v.report().expect("law is QID");
    let t = &r.triplet;
    println!("route        {:?}", r.route);
    println!("raw index    {:.6}", r.raw_index());
    println!("index        {}", t.index);
    println!("a            {:.3e}", t.gaussian_variance);
    println!("gamma0       {:.6}", t.drift);
    println!("finite var.  {}", t.finite_variation());
    println!("recon error  {:.2e}", r.recon_error);
    for x in [-2.0, -0.5, 0.5, 2.0] {
        println!("g({x:>4}) = {:.6}", t.density.eval(x));
    }
    Ok(())
}
