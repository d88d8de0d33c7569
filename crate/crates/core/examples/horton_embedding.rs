//! Embeds a good set with both scale schedules and certifies it, then
//! shows the escalation loop on a set that needs a larger base.
use holefree::bits::PointKey;
use holefree::embed::{
    build_schedule, build_schedule_kind, certify_with_escalation, embed, ScheduleKind,
};
use holefree::goodset::to_binary_almost_net;
use holefree::holes::Caps;
use holefree::netgen::{sequence_to_net, vdc_points, AlmostNetParams};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

fn main() -> holefree::Result<()> {
    let net = sequence_to_net(&vdc_points(4), 0, 4)?;
    let params = AlmostNetParams::new(1, BigRational::zero(), 4)?;
    let y = to_binary_almost_net(&net, &params, 2)?;
    let caps = Caps::default();
    for kind in [ScheduleKind::Geometric, ScheduleKind::Triangular] {
        let sched = build_schedule_kind(kind, 2, y.m(), BigInt::from(4))?;
        let pts = embed(y.keys(), &sched)?;
        println!(
            "{kind:?} weights {:?}",
            sched
                .by_rank()
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
        );
        println!(
            "  first points {:?}",
            pts.iter()
                .take(3)
                .map(|p| p.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        );
        let (fin, rounds) = certify_with_escalation(y.keys(), 4, sched, &caps, 3)?;
        println!("  final B = {}, rounds = {}", fin.base(), rounds.len());
    }

    let keys: Vec<PointKey> = [
        "100:110", "001:100", "011:011", "000:111", "101:010", "111:001", "110:101",
    ]
    .iter()
    .map(|s| {
        let (x, y) = s.split_once(':').unwrap();
        PointKey::new(vec![x.parse().unwrap(), y.parse().unwrap()]).unwrap()
    })
    .collect();
    let sched = build_schedule(2, 3, BigInt::from(2))?;
    let (fin, rounds) = certify_with_escalation(&keys, 3, sched, &caps, 3)?;
    for (b, c) in &rounds {
        println!("B = {b}: {c:?}");
    }
    println!("certified at B = {}", fin.base());
    Ok(())
}
