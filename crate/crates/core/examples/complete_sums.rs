// Σ_I and Σ_II for a generic and a paired parameter tuple.

use std::sync::Arc;

use klstrata::{kl_table_fast, sigma_ii, z_fiber_count, CharTuple, ParamTuple, PrimeField};

pub fn run_example() -> klstrata::Result<()> {
    let f = Arc::new(PrimeField::new(61)?);
    let table = kl_table_fast(&f, &CharTuple::trivial(&f, 2), 1)?;
    for b in [vec![3, 17, 22, 40], vec![3, 17, 3, 17], vec![3, 3, 22, 40]] {
        let pt = ParamTuple::new(b.clone())?;
        let rep = sigma_ii(&table, &pt, true)?;
        let z = z_fiber_count(&f, 2, &pt).map(|r| r.z_count).ok();
        println!(
            "b = {b:?}: |Σ_I|/q = {:.4}, Σ_II/q^1.5 = {:.4}, |Z_b| = {z:?}",
            rep.ratio_i,
            rep.sigma_ii / 61f64.powf(1.5)
        );
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
