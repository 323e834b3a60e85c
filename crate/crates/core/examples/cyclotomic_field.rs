//! Arithmetic in Q(zeta_12): products, inverses, the Galois action, traces
//! and embeddings into a larger cyclotomic field.

use chowla_milnor::cyclotomic::{cyclotomic_poly, CycloElem};
use chowla_milnor::exact::rat;

fn main() -> chowla_milnor::Result<()> {
    let n = 12;
    println!("Phi_{n} = {:?}", cyclotomic_poly(n).coeffs());

    let z = CycloElem::zeta_pow(n, 1);
    let x = &z + &CycloElem::from_rational(n, rat(1, 2));
    let y = x.inv()?;
    println!("x       = {x}");
    println!("1/x     = {y}");
    println!("x * 1/x = {}", &x * &y);

    // sqrt(3) = zeta + zeta^{-1} in Q(zeta_12).
    let s = &z + &CycloElem::zeta_pow(n, -1);
    println!("(zeta + zeta^-1)^2 = {}", s.pow(2));
    println!("real? {}  trace = {}", s.is_real(), s.trace());
    for a in [1, 5, 7, 11] {
        println!("sigma_{a}(sqrt 3) = {}", s.galois(a)?);
    }

    let big = s.embed(24)?;
    println!("embedded in {}: {big}", big.field_label());
    println!("numerically: {}", s.numeric_eval(80));
    Ok(())
}
