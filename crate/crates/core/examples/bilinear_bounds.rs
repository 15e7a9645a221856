// A type II bilinear form against the trivial and theorem bounds, and the
// +ab-shift trace for a small configuration.

use std::sync::Arc;

use klstrata::bilinear::{bilinear_bench, shift_reduction_trace, CoeffSeq, ShiftParams, SumType};
use klstrata::{kl_table_fast, CharTuple, PrimeField};

pub fn run_example() -> klstrata::Result<()> {
    let f = Arc::new(PrimeField::new(199)?);
    let table = kl_table_fast(&f, &CharTuple::trivial(&f, 2), 1)?;
    let b = bilinear_bench(&table, 40, 30, 2, SumType::II, 5)?;
    println!(
        "|B| = {:.3}, trivial {:.3}, theorem {:.3}, in range: {}",
        b.abs, b.bound.trivial, b.bound.theorem, b.bound.in_range
    );
    let alpha = CoeffSeq::random_phases(4, 5);
    let tr = shift_reduction_trace(&table, &alpha, ShiftParams { n: 8, a: 2, b: 2, l: 2 })?;
    println!(
        "S≠ shift gap {:.2e}, Σν {:.1} (expected {:.1}), Σν²/(AN‖α‖⁴) {:.3}",
        tr.shift_gap, tr.nu_first, tr.nu_first_expected, tr.nu_second_ratio
    );
    println!(
        "Σ_b |Σ_II| = {:.1}, shape {:.1}, |B^V| = {}, |B^W| = {}",
        tr.sum_abs_sigma_ii, tr.shape, tr.box_diagonal, tr.box_subgeneric
    );
    Ok(())
}

fn main() {
    run_example().unwrap();
}
