//! Lévy distances between a few simple laws.

use qid::density::DensityDescriptor;
use qid::distribution::Distribution;
use qid::topology::levy_distance;

fn main() -> qid::Result<()> {
    let laws = [
        ("δ_0", Distribution::dirac(0.0)),
        ("δ_0.3", Distribution::dirac(0.3)),
        ("N(0,1)", Distribution::absolutely_continuous(DensityDescriptor::normal(0.0, 1.0))),
        ("N(0.5,1)", Distribution::absolutely_continuous(DensityDescriptor::normal(0.5, 1.0))),
        ("U[-1,1]", Distribution::absolutely_continuous(DensityDescriptor::uniform(-1.0, 1.0))),
    ];
    print!("{:>9}", "");
    for (n, _) in &laws {
        print!("{n:>9}");
    }
    println!();
    for (a, x) in &laws {
        print!("{a:>9}");
        for (_, y) in &laws {
            print!("{:>9.4}", levy_distance(x, y)?.value);
        }
        println!();
    }
    Ok(())
}
