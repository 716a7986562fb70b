//! Path from the exponential-atom law to the index-2 law through scaled
//! convolutions, with the Lévy distance to each endpoint and the verdict.

use qid::analysis::{analyze, AnalysisConfig};
use qid::corpus::{exponential_atom, paper_example};
use qid::topology::{levy_distance, path_point};

fn main() -> qid::Result<()> {
    let (mu1, mu2) = (exponential_atom(), paper_example());
    let cfg = AnalysisConfig::with_points(1 << 13);
    println!("{:>4} {:>10} {:>10} verdict", "s", "to mu1", "to mu2");
    for k in 0..=10 {
        let s = k as f64 / 10.0;
        let m = path_point(&mu1, &mu2, s)?;
        let d1 = levy_distance(&m, &mu1)?.value;
        let d2 = levy_distance(&m, &mu2)?.value;
        let verdict = match analyze(&m, &cfg) {
            Ok(v) if v.is_qid() => "QID",
            Ok(_) => "NotQID",
            Err(_) => "indeterminate",
        };
        println!("{s:>4.1} {d1:>10.5} {d2:>10.5} {verdict}");
    }
    Ok(())
}
