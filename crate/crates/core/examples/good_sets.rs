//! Binary almost net from a planar net, q-goodness and the smallest q.
use holefree::goodset::{
    good_bound, minimal_good_q, to_binary_almost_net, verify_good, GoodCaps, GoodStrategy,
};
use holefree::netgen::{sequence_to_net, vdc_points, AlmostNetParams};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

fn main() -> holefree::Result<()> {
    let n = 4;
    let net = sequence_to_net(&vdc_points(n), 0, n)?;
    let params = AlmostNetParams::new(1, BigRational::zero(), n)?;
    let y = to_binary_almost_net(&net, &params, 2)?;
    println!("{} keys with {} bits per component", y.len(), y.m());

    let q = good_bound(&BigInt::from(1), &BigRational::zero(), 2);
    println!("good_bound(T=1, eps=0, d=2) = {q}");
    let caps = GoodCaps::default();
    for strategy in [GoodStrategy::Sweep, GoodStrategy::Subsets] {
        let v = verify_good(y.keys(), 4, strategy, &caps)?;
        println!("{strategy:?}: {v:?}");
    }
    println!("smallest q: {:?}", minimal_good_q(y.keys(), &caps)?);
    Ok(())
}
