//! Exact cotangent-derivative values C_k(a, q) = i^k cot^(k-1)(pi a / q),
//! computed by the derivative-polynomial route and the operator route,
//! plus the exact trace identity.

use chowla_milnor::cotangent::{
    cotan_norm, cotan_trace_sum, cotan_via_operator, derivative_poly, half_units,
};

fn main() -> chowla_milnor::Result<()> {
    for k in 1..=4 {
        println!("D_{k} coefficients: {:?}", derivative_poly(k).coeffs());
    }
    println!();
    for (k, q) in [(2, 3), (2, 4), (3, 4), (2, 5), (3, 7)] {
        for a in half_units(q) {
            let v = cotan_norm(k, a as i64, q)?;
            let w = cotan_via_operator(k, a as i64, q)?;
            println!(
                "C_{k}({a},{q}) = {}   routes agree: {}",
                v.value,
                v.value == w.value
            );
        }
    }
    println!();
    for (k, q) in [(2, 3), (2, 4), (4, 9), (6, 10)] {
        let t = cotan_trace_sum(k, q)?;
        println!(
            "k={k} q={q}: trace {} closed form {} holds {}",
            t.trace,
            t.closed_form,
            t.holds()
        );
    }
    Ok(())
}
