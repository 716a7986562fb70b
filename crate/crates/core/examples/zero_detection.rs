//! p δ_0 + (1 - p) U[-1, 1] has the characteristic function p + (1 - p) sin z / z.
//! The minimum of sin z / z is about -0.2172, so there is a real zero exactly
//! when p < 0.1785. Above that the law is QID.

use qid::analysis::{analyze, AnalysisConfig};
use qid::corpus::atom_uniform;

fn main() -> qid::Result<()> {
    let cfg = AnalysisConfig::default();
    for p in [0.1, 0.17, 0.18, 0.3, 0.7] {
        let v = analyze(&atom_uniform(p), &cfg)?;
        match v.certificate().and_then(|c| c.refined_location) {
            Some(z) if !v.is_qid() => println!("p = {p:<5} NotQID, zero at z = {z:.10}"),
            _ => println!("p = {p:<5} QID, index {}", v.report().map_or(0, |r| r.triplet.index)),
        }
    }
    Ok(())
}
