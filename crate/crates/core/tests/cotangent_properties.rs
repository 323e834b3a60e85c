use chowla_milnor::cotangent::{
    cotan_norm, cotan_trace_sum, cotan_unit_sum, cotan_via_operator, half_units,
};
use chowla_milnor::cyclotomic::{units, CycloElem};
use chowla_milnor::exact::rat;

#[test]
fn routes_agree_exactly() {
    for q in 3..=20u64 {
        for k in 1..=6 {
            for a in half_units(q) {
                let x = cotan_norm(k, a as i64, q).unwrap();
                let y = cotan_via_operator(k, a as i64, q).unwrap();
                assert_eq!(x.value, y.value, "k={k} a={a} q={q}");
            }
        }
    }
}

#[test]
fn galois_equivariance_parity_and_reality() {
    for q in [5u64, 7, 8, 9, 12, 15, 16] {
        for k in 1..=5 {
            let sign = rat(if k % 2 == 0 { 1 } else { -1 }, 1);
            for a in units(q) {
                let c = cotan_norm(k, a as i64, q).unwrap().value;
                for b in units(q) {
                    let ab = (a * b) % q;
                    assert_eq!(
                        c.galois(b as i64).unwrap(),
                        cotan_norm(k, ab as i64, q).unwrap().value
                    );
                }
                assert_eq!(
                    cotan_norm(k, (q - a) as i64, q).unwrap().value,
                    c.scalar_mul(&sign)
                );
                assert_eq!(c.conj(), c.scalar_mul(&sign));
                let d = &CycloElem::zeta_pow(q, 1) - &CycloElem::zeta_pow(q, -1);
                assert!((&d.pow(k) * &c).is_real());
            }
        }
    }
}

#[test]
fn odd_unit_sums_vanish() {
    for q in 3..=30u64 {
        for k in [1, 3, 5] {
            assert!(cotan_unit_sum(k, q).unwrap().is_zero(), "k={k} q={q}");
        }
    }
}

#[test]
fn trace_identity() {
    assert_eq!(cotan_trace_sum(2, 3).unwrap().trace, rat(8, 3));
    assert_eq!(cotan_trace_sum(2, 4).unwrap().trace, rat(4, 1));
    for q in 3..=30u64 {
        for k in [2, 4, 6, 8] {
            let t = cotan_trace_sum(k, q).unwrap();
            assert!(t.holds(), "k={k} q={q}");
            assert_eq!(cotan_unit_sum(k, q).unwrap().as_rational(), Some(t.trace));
        }
    }
}
