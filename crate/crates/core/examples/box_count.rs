// Points of the diagonal variety in a box.

use klstrata::strata::{box_count_variety, BoxShape, Variety};
use klstrata::PrimeField;

pub fn run_example() -> klstrata::Result<()> {
    let f = PrimeField::new(997)?;
    for big_b in [10, 20, 40] {
        let closed = box_count_variety(&f, &Variety::Diagonal, big_b, 2, BoxShape::Closed)?;
        let half = box_count_variety(&f, &Variety::Diagonal, big_b, 2, BoxShape::HalfOpen)?;
        let b2 = (big_b * big_b) as f64;
        println!(
            "B = {big_b}: [B,2B]^4 {closed} ({:.3} B²), [B,2B)^4 {half} ({:.3} B²)",
            closed as f64 / b2,
            half as f64 / b2
        );
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
