#![allow(dead_code)]

use holefree::bits::PointKey;
use holefree::geom::PointSet;
use holefree::goodset::{to_binary_almost_net, BinaryAlmostNet};
use holefree::netgen::{verify_almost_net, AlmostNetParams};
use holefree::pipeline::candidate_nets;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

/// The binary almost net the pipeline builds for `T = 1`, `eps = 0`.
pub fn pipeline_y(d: usize, n: u32) -> BinaryAlmostNet {
    let params = AlmostNetParams::new(1, BigRational::zero(), n).unwrap();
    let net = candidate_nets(d, n, 1)
        .unwrap()
        .into_iter()
        .find(|c| verify_almost_net(&c.points, &params).unwrap().is_pass())
        .expect("a candidate net passes");
    to_binary_almost_net(&net.points, &params, d).unwrap()
}

pub fn keys_of(y: &BinaryAlmostNet) -> Vec<PointKey> {
    y.keys().to_vec()
}

/// Random integer points in `[0, range)^d`, redrawn until in general position.
pub fn random_general_position<R: Rng>(rng: &mut R, d: usize, n: usize, range: i64) -> PointSet {
    loop {
        let coords: Vec<Vec<BigInt>> = (0..n)
            .map(|_| {
                (0..d)
                    .map(|_| BigInt::from(rng.gen_range(0..range)))
                    .collect()
            })
            .collect();
        let a = PointSet::from_integers(d, coords).unwrap();
        if a.general_position().is_pass() {
            return a;
        }
    }
}
