// Histogram of fiber sizes |Z_b| over random parameters.

use klstrata::strata::{stratum_scan, Sampler};
use klstrata::PrimeField;

pub fn run_example() -> klstrata::Result<()> {
    let f = PrimeField::new(1009)?;
    for (k, l) in [(2, 2), (3, 2), (2, 3)] {
        let s = stratum_scan(&f, k, l, Sampler::Random { samples: 300, seed: 1 })?;
        println!(
            "k={k} l={l}: histogram {:?}, generic {:?} ({:.1}%), degenerate {}",
            s.histogram,
            s.generic,
            100.0 * s.generic_fraction,
            s.degenerate
        );
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
