//! Upper bounds on h(d) and the exponent check.
use holefree::bounds::{bound_table, exponent_check, hd_upper_from_almost_net, render_table_text};
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() {
    print!("{}", render_table_text(&bound_table(3..=10)));
    let checks = exponent_check(64);
    println!(
        "h(d) < 2^(7d) for 3 <= d <= 64: {}",
        checks.iter().all(|c| c.pass())
    );
    let third = BigRational::new(1.into(), 3.into());
    for d in [3u32, 8, 16] {
        let t = BigInt::from(900 * d);
        println!(
            "almost-net bound d={d}, T={t}, eps=1/3: {}",
            hd_upper_from_almost_net(&t, &third, d)
        );
    }
}
