//! High-precision Hurwitz zeta values and the residuals of the identities
//! tying them to the exact cotangent values.

use chowla_milnor::exact::rat;
use chowla_milnor::numerics::{bridge_residual, hurwitz_zeta, pi, zeta_even, BridgeKind};

fn main() -> chowla_milnor::Result<()> {
    let prec = 256;
    println!("pi        = {}", pi(prec));
    println!("zeta(2)   = {}", zeta_even(2, prec)?);
    let d = &hurwitz_zeta(3, &rat(1, 4), prec)? - &hurwitz_zeta(3, &rat(3, 4), prec)?;
    println!("zeta(3,1/4) - zeta(3,3/4) = {d}");
    for kind in [
        BridgeKind::Reflection { k: 3, a: 1, q: 4 },
        BridgeKind::Rep { k: 4, a: 2, q: 7 },
        BridgeKind::LValue { k: 2, q: 5, chi: 2 },
        BridgeKind::LValue { k: 3, q: 5, chi: 0 },
    ] {
        let r = bridge_residual(&kind, prec)?;
        let shown = if r.is_zero() {
            "exact zero".to_string()
        } else {
            format!("2^{:.1}", r.log2_abs())
        };
        println!("{:<32} residual {shown}", kind.label());
    }
    Ok(())
}
