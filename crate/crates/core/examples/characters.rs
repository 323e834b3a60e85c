//! Dirichlet characters mod q: the canonical enumeration, orthogonality and
//! the exactly certified inverse of the character matrix.

use chowla_milnor::characters::{all_characters, char_matrix, orthogonality_holds, unit_group};

fn main() -> chowla_milnor::Result<()> {
    let q = 15;
    let g = unit_group(q);
    println!(
        "(Z/{q})^x: order {} exponent {} generators {:?}",
        g.order(),
        g.exponent(),
        g.generators()
    );
    let chars = all_characters(q);
    for chi in &chars {
        println!(
            "{:<16} order {} parity {:+}",
            chi.label(),
            chi.order(),
            chi.parity()
        );
    }
    let ortho = chars
        .iter()
        .all(|c| chars.iter().all(|d| orthogonality_holds(c, d)));
    println!("orthogonality: {ortho}");
    let m = char_matrix(q)?;
    println!(
        "{}x{} matrix, inverse certified exactly: {}",
        m.dim(),
        m.dim(),
        m.certify_inverse()
    );
    Ok(())
}
