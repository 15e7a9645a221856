// max |Σ_I|/q and max |Σ_II|/q^{3/2} along a short ladder of primes.

use klstrata::ladder::{run_ladder, LadderConfig};

pub fn run_example() -> klstrata::Result<()> {
    let cfg = LadderConfig {
        primes: vec![61, 101, 151],
        samples: 20,
        subgeneric_samples: 5,
        ..LadderConfig::default()
    };
    let rep = run_ladder(&cfg)?;
    for r in &rep.rungs {
        println!(
            "q = {:>3}: R_I {:.4}  R_II {:.4}  subgeneric |Σ_II|/q² {:.4}",
            r.q, r.r_i, r.r_ii, r.sub_ii_over_q2
        );
    }
    println!("growth R_I {:.3}, R_II {:.3}, allowed {:.3}", rep.growth_i, rep.growth_ii, rep.threshold);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
