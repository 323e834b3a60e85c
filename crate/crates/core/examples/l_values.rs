//! Exact L-value coordinates Lambda(k, chi) and the high-precision values
//! they determine; L(2, chi_4) is Catalan's constant.

use chowla_milnor::characters::{all_characters, coordinate_field, full_unit_sum, l_coordinates};
use chowla_milnor::numerics::{catalan, dirichlet_l, l_value_from_coordinates};

fn main() -> chowla_milnor::Result<()> {
    let prec = 256;
    for (k, q) in [(2, 4), (3, 4), (2, 5), (1, 7)] {
        for chi in all_characters(q) {
            if chi.is_even() != (k % 2 == 0) {
                let zero = full_unit_sum(k, &chi)?;
                println!(
                    "k={k} {}: wrong parity, full unit sum = {zero}",
                    chi.label()
                );
                continue;
            }
            let lam = l_coordinates(k, &chi)?;
            let l = l_value_from_coordinates(k, &chi, prec)?;
            println!(
                "k={k} {} in Q(zeta_{}): Lambda = {lam}",
                chi.label(),
                coordinate_field(&chi)
            );
            println!("    L = {l}");
        }
    }
    let chi4 = all_characters(4)
        .into_iter()
        .find(|c| !c.is_even())
        .expect("odd character mod 4");
    println!(
        "L(2, chi_4) by Hurwitz sums: {}",
        dirichlet_l(2, &chi4, prec)?.re
    );
    println!("Catalan by CVZ acceleration: {}", catalan(prec));
    Ok(())
}
