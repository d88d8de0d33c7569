//! Sobol' nets, their t-value, and a lifted van der Corput net.
use holefree::netgen::{minimal_t, sequence_to_net, sobol_points, vdc_points, verify_net};

fn main() -> holefree::Result<()> {
    for m in [4, 6, 8] {
        let pts = sobol_points(2, m)?;
        let v = verify_net(&pts, 0, m, 2)?;
        println!(
            "sobol s=2 m={m}: {} points, (0,m,2)-net: {}",
            pts.len(),
            v.is_pass()
        );
    }
    let pts = sobol_points(3, 6)?;
    println!("sobol s=3 m=6: minimal t = {:?}", minimal_t(&pts, 6, 3)?);

    let net = sequence_to_net(&vdc_points(4), 0, 4)?;
    for p in net.iter().take(4) {
        println!("  ({}, {})", p.coord(0), p.coord(1));
    }
    Ok(())
}
