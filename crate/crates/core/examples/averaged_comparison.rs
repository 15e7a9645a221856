// Σ_b Σ_r |Σ_s 𝐊|² against Σ_b Σ_r Σ_s |𝐊|² on two families of b.

use std::sync::Arc;

use klstrata::bilinear::{averaged_comparison, Family};
use klstrata::{kl_table_fast, CharTuple, PrimeField};

pub fn run_example() -> klstrata::Result<()> {
    let f = Arc::new(PrimeField::new(23)?);
    let table = kl_table_fast(&f, &CharTuple::trivial(&f, 2), 1)?;
    for family in [Family::FullSample { samples: 20, seed: 3 }, Family::PowerSum { n: 4, m: 1 }] {
        let r = averaged_comparison(&table, 2, family)?;
        println!(
            "{family:?}: |family| = {}, lhs {:.1}, rhs {:.1}, normalized gap {:.4}",
            r.family_size, r.lhs, r.rhs, r.normalized_gap
        );
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
