//! dim V+_k(q1) cap V+_k(q2) equals dim V+_k(gcd(q1, q2)).

use chowla_milnor::spaces::{intersection_dim, VerifyConfig};

fn main() -> chowla_milnor::Result<()> {
    let cfg = VerifyConfig::default();
    for (k, q1, q2) in [
        (3, 5, 7),
        (2, 5, 7),
        (3, 12, 18),
        (2, 12, 18),
        (2, 9, 15),
        (3, 20, 30),
    ] {
        let r = intersection_dim(k, q1, q2, &cfg)?;
        println!(
            "k={k} ({q1},{q2}): dim {:?}, expected {} -> {}",
            r.computed, r.expected, r.verdict
        );
    }
    Ok(())
}
