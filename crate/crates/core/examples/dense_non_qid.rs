//! N(0, 1) is the Lévy limit of N(0, 1) * U[-1/n, 1/n], none of which is QID.

use qid::charfn::ScanConfig;
use qid::density::DensityDescriptor;
use qid::distribution::Distribution;
use qid::topology::nonqid_sequence;

fn main() -> qid::Result<()> {
    let mu = Distribution::absolutely_continuous(DensityDescriptor::normal(0.0, 1.0));
    let nu = Distribution::absolutely_continuous(DensityDescriptor::uniform(-1.0, 1.0));
    println!("{:>4} {:>14} {:>12}", "n", "zero", "levy");
    for n in [1, 2, 5, 10, 50] {
        let s = nonqid_sequence(&mu, &nu, n, &ScanConfig::default())?;
        println!("{n:>4} {:>14.8} {:>12.3e}", s.zero, qid::topology::levy_distance(&s.distribution, &mu)?.value);
    }
    Ok(())
}
