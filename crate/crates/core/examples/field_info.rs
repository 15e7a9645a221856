// Primitive root, discrete logs and Gauss sums of a small prime field.

use klstrata::PrimeField;

pub fn run_example() -> klstrata::Result<()> {
    let f = PrimeField::new(13)?;
    println!("q = {}, generator = {}", f.q(), f.generator());
    for x in 1..f.q() {
        print!("{x}:{} ", f.dlog(x));
    }
    println!();
    for chi in f.characters() {
        let tau = f.gauss_sum(&chi);
        println!("χ_{:<2} order {:<2} |τ|² = {:.6}", chi.index(), chi.order(), tau.norm_sqr());
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
