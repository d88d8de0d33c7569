//! Runs the descent on a 9-point subset and prints each step.
use holefree::goodset::{find_interior_witness, to_binary_almost_net, TiePolicy};
use holefree::netgen::{sequence_to_net, vdc_points, AlmostNetParams};
use num_rational::BigRational;
use num_traits::Zero;

fn main() -> holefree::Result<()> {
    let net = sequence_to_net(&vdc_points(4), 0, 4)?;
    let params = AlmostNetParams::new(1, BigRational::zero(), 4)?;
    let y = to_binary_almost_net(&net, &params, 2)?;
    let keys = y.keys();
    let u: Vec<usize> = (0..16).step_by(2).chain([1]).collect();
    let (w, trace) = find_interior_witness(keys, 4, &u, TiePolicy::Zero)?;
    for s in &trace.steps {
        println!(
            "axis {}: b={} alpha={} c={} a={}  |U| {} -> {}",
            s.axis,
            s.b,
            s.alpha as u8,
            s.c,
            s.a,
            s.before.len(),
            s.after.len()
        );
    }
    println!("U_1 = {:?}", trace.z);
    println!(
        "witness key {w}: {:?}",
        keys[w]
            .components()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
    );
    Ok(())
}
