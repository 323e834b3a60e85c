//! Products of cotangent values across several moduli: the sum of product
//! spaces, the product of sum spaces, and pruned independent generator sets.

use chowla_milnor::spaces::{coha_generators, verify_theorem, Params, TheoremId, VerifyConfig};

fn main() -> chowla_milnor::Result<()> {
    let cfg = VerifyConfig::default();
    let grid = vec![vec![3, 4], vec![5, 7]];
    for ks in [vec![2, 2], vec![2, 3], vec![3, 3]] {
        let p = Params {
            ks: ks.clone(),
            grid: grid.clone(),
            ..Params::default()
        };
        for id in [TheoremId::Thm9, TheoremId::Coha, TheoremId::Propinterm] {
            let r = verify_theorem(id, &p, &cfg)?;
            println!(
                "{id:<10} ks={ks:?}: expected {} computed {:?} {}",
                r.expected, r.computed, r.verdict
            );
        }
    }
    let g = coha_generators(&[2, 2], &grid)?;
    let labels: Vec<String> = g.labels().map(ToString::to_string).collect();
    println!("\npruned generators for ks=(2,2): {}", labels.join(", "));

    let p = Params {
        ks: vec![3, 2],
        grid: vec![vec![3, 5], vec![4]],
        ..Params::default()
    };
    let r = verify_theorem(TheoremId::Thm10, &p, &cfg)?;
    println!(
        "thm10 ks=(3,2), rows (3,5),(4): {:?} {}",
        r.computed, r.verdict
    );
    Ok(())
}
