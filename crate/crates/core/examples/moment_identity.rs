// The cubic Gauss-sum moment against Kl_3 at ±n.

use klstrata::bilinear::moment_identity_check;
use klstrata::PrimeField;

pub fn run_example() -> klstrata::Result<()> {
    for q in [13, 17, 29] {
        let f = PrimeField::new(q)?;
        let mut worst: f64 = 0.0;
        for xi in f.characters().filter(|c| c.is_even()) {
            for n in 1..=3 {
                worst = worst.max(moment_identity_check(&f, &xi, n)?.diff);
            }
        }
        println!("q = {q}: max diff {worst:.2e}");
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
