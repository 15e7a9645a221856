// Kummer induction, duality and the NIO/CGM predicates for a few tuples.

use klstrata::{classify_tuple, twist_to_cgm, CharTuple, PrimeField};

pub fn run_example() -> klstrata::Result<()> {
    let f = PrimeField::new(13)?;
    for idx in [vec![0, 0], vec![0, 6], vec![0, 2], vec![0, 1], vec![0, 0, 0], vec![0, 4, 8]] {
        let t = CharTuple::from_indices(&f, &idx)?;
        let r = classify_tuple(&t);
        println!(
            "{idx:?}: kummer={} self_dual={} nio={} cgm={}",
            r.kummer_induced,
            r.self_dual(),
            r.nio,
            r.cgm
        );
        println!("    twist: {}", serde_json::to_string(&twist_to_cgm(&t)).unwrap());
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
