// A hyper-Kloosterman table by FFT, checked against the definition and the
// Fourier identity.

use std::sync::Arc;

use klstrata::kloosterman::{fourier_identity_check, max_relative_gap};
use klstrata::{kl_naive_table, kl_table_fast, CharTuple, PrimeField};

pub fn run_example() -> klstrata::Result<()> {
    let f = Arc::new(PrimeField::new(101)?);
    let t = CharTuple::from_indices(&f, &[0, 0, 50])?;
    let fast = kl_table_fast(&f, &t, 1)?;
    let naive = kl_naive_table(&f, &t, 1)?;
    println!("max |K| = {:.6} (Deligne bound 3)", fast.sup_norm());
    println!("fast vs naive: {:.3e}", max_relative_gap(&fast, &naive));
    for x in 1..=5 {
        println!("K({x}) = {:.6}", fast.get(x));
    }
    let c = fourier_identity_check(&fast, &f.char(7))?;
    println!("Fourier identity at λ = χ_7: diff {:.3e}", c.diff);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
