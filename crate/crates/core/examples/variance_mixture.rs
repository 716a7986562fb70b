//! Normal variance mixtures ∫ N(0, t) ϱ(dt) and their Gaussian cofactor.

use qid::analysis::{analyze, AnalysisConfig};
use qid::constructions::{variance_mixture, MixingDistribution};
use qid::density::DensityDescriptor;

fn main() -> qid::Result<()> {
    let cfg = AnalysisConfig::default();
    let rhos = [
        ("0.5 δ_1 + 0.5 δ_2", MixingDistribution::new(vec![(1.0, 0.5), (2.0, 0.5)], 0.0, None)?),
        ("0.25 δ_1 + 0.75 U(1,2)", MixingDistribution::new(vec![(1.0, 0.25)], 0.75, Some(DensityDescriptor::uniform(1.0, 2.0)))?),
        ("0.3 δ_1 + 0.7 δ_3", MixingDistribution::new(vec![(1.0, 0.3), (3.0, 0.7)], 0.0, None)?),
    ];
    for (name, rho) in rhos {
        let m = variance_mixture(&rho)?;
        let v = analyze(&m.distribution, &cfg)?;
        let verdict = if v.is_qid() { "QID" } else { "NotQID" };
        let a = v.report().map_or(f64::NAN, |r| r.triplet.gaussian_variance);
        println!("{name:<24} t1 = {:.1}  a = {a:.4}  {verdict}", m.t1);
    }
    Ok(())
}
