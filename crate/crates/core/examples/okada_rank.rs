//! Generators of V+_k(q) and their rank over Q; the rank is phi(q)/2.

use chowla_milnor::exact::euler_phi;
use chowla_milnor::spaces::{span_rank_q, vplus_generators, VerifyConfig};

fn main() -> chowla_milnor::Result<()> {
    let cfg = VerifyConfig::default();
    let g = vplus_generators(3, 11)?;
    for (label, value) in g.items() {
        println!("{label} = {value}");
    }
    println!();
    println!("{:>3} {:>3} {:>6} {:>6}", "q", "k", "rank", "phi/2");
    for q in [5u64, 8, 12, 13, 21, 30] {
        for k in 1..=3 {
            let info = span_rank_q(&vplus_generators(k, q)?, &cfg)?;
            println!("{q:>3} {k:>3} {:>6} {:>6}", info.rank, euler_phi(q) / 2);
        }
    }
    Ok(())
}
