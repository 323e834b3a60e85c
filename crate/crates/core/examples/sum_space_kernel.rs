//! The sum V+_k(q_1) + ... + V+_k(q_l) for pairwise coprime moduli: its
//! dimension and the kernel of the sum map, whose vectors are constant on
//! each block.

use chowla_milnor::spaces::{kernel_of_sum_map, sum_space_rank, VerifyConfig};

fn main() -> chowla_milnor::Result<()> {
    let cfg = VerifyConfig::default();
    for k in 2..=5 {
        let r = sum_space_rank(k, &[3, 4, 5], &cfg)?;
        println!(
            "k={k} dim = {:?} (expected {}) {}",
            r.computed, r.expected, r.verdict
        );
    }
    let r = kernel_of_sum_map(2, &[3, 4, 5], &cfg)?;
    println!("\nkernel for k=2, q=(3,4,5): dimension {:?}", r.kernel_dim);
    let labels: Vec<String> = r.labels.iter().map(ToString::to_string).collect();
    println!("columns: {}", labels.join(", "));
    for v in &r.kernel {
        println!("  {v:?}");
    }
    let odd = kernel_of_sum_map(3, &[3, 4, 5], &cfg)?;
    println!("k=3: kernel dimension {:?}", odd.kernel_dim);
    Ok(())
}
