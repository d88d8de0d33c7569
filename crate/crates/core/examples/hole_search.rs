//! Largest hole by brute force and by the planar dynamic program.
use holefree::geom::PointSet;
use holefree::holes::{count_holes, is_hole_free, max_hole, Algo, Caps};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> holefree::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let coords: Vec<Vec<BigInt>> = (0..14)
        .map(|_| {
            vec![
                BigInt::from(rng.gen_range(0..1000)),
                BigInt::from(rng.gen_range(0..1000)),
            ]
        })
        .collect();
    let a = PointSet::from_integers(2, coords)?;
    println!("general position: {:?}", a.general_position());
    let caps = Caps::default();
    for algo in [Algo::Brute, Algo::Dp2d] {
        let r = max_hole(&a, 14, algo, &caps)?;
        println!(
            "{algo:?}: largest hole {} {:?} ({} predicate calls)",
            r.hole_size, r.witness_subset, r.predicate_calls
        );
    }
    for ell in 3..=6 {
        println!("{ell}-holes: {}", count_holes(&a, ell));
    }
    println!("7-hole-free: {:?}", is_hole_free(&a, 7, &caps));
    Ok(())
}
