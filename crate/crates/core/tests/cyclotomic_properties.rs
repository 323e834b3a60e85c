use chowla_milnor::cyclotomic::{units, CycloElem};
use chowla_milnor::exact::{euler_phi, rat, to_f64};
use chowla_milnor::numerics::BigReal;
use proptest::prelude::*;

const FIELDS: [u64; 7] = [3, 4, 5, 7, 8, 9, 12];

fn elem(n: u64) -> impl Strategy<Value = CycloElem> {
    prop::collection::vec((-6i64..7, 1i64..5), euler_phi(n) as usize).prop_map(move |c| {
        CycloElem::from_coeffs(n, c.into_iter().map(|(a, b)| rat(a, b)).collect()).unwrap()
    })
}

fn field_and_triple() -> impl Strategy<Value = (CycloElem, CycloElem, CycloElem)> {
    prop::sample::select(FIELDS.to_vec()).prop_flat_map(|n| (elem(n), elem(n), elem(n)))
}

fn unit_of(n: u64) -> impl Strategy<Value = i64> {
    prop::sample::select(units(n).map(|a| a as i64).collect::<Vec<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn ring_axioms((x, y, z) in field_and_triple()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x + &y, &y + &x);
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inv().unwrap(), CycloElem::one(x.n()));
        }
    }
}

proptest! {
    #[test]
    fn galois_is_a_homomorphism(
        (x, y, a, b) in prop::sample::select(FIELDS.to_vec())
            .prop_flat_map(|n| (elem(n), elem(n), unit_of(n), unit_of(n)))
    ) {
        let n = x.n() as i64;
        prop_assert_eq!((&x * &y).galois(a).unwrap(), &x.galois(a).unwrap() * &y.galois(a).unwrap());
        prop_assert_eq!((&x + &y).galois(a).unwrap(), &x.galois(a).unwrap() + &y.galois(a).unwrap());
        prop_assert_eq!(x.galois(b).unwrap().galois(a).unwrap(), x.galois((a * b).rem_euclid(n)).unwrap());
    }

    #[test]
    fn embedding_is_an_injective_homomorphism(
        (x, y, mult) in prop::sample::select(FIELDS.to_vec())
            .prop_flat_map(|n| (elem(n), elem(n), 2u64..4))
    ) {
        let big = x.n() * mult;
        let (ex, ey) = (x.embed(big).unwrap(), y.embed(big).unwrap());
        prop_assert_eq!((&x * &y).embed(big).unwrap(), &ex * &ey);
        prop_assert_eq!((&x + &y).embed(big).unwrap(), &ex + &ey);
        prop_assert_eq!(ex == ey, x == y);
        // The image is fixed by Gal(Q(zeta_big)/Q(zeta_n)).
        prop_assert!(ex.lies_in_subfield(x.n()));
    }

    #[test]
    fn trace_is_the_sum_of_conjugates(x in prop::sample::select(FIELDS.to_vec()).prop_flat_map(elem)) {
        let n = x.n();
        let prec = 96;
        let sum = units(n)
            .map(|a| x.galois(a as i64).unwrap().numeric_eval(prec).re)
            .fold(BigReal::zero(prec), |acc, v| &acc + &v);
        let t = BigReal::from_rational(&x.trace(), prec);
        prop_assert!((&sum - &t).abs().abs_below_pow2(-60), "{} vs {}", sum, to_f64(&x.trace()));
    }
}

#[test]
fn elements_from_subfields_are_fixed() {
    for n in [12u64, 20, 24, 30] {
        for d in (1..=n).filter(|d| n % d == 0) {
            let x = &CycloElem::zeta_pow(d, 1) + &CycloElem::from_rational(d, rat(2, 3));
            let e = x.embed(n).unwrap();
            assert!(e.lies_in_subfield(d));
            // The orbit under the subgroup fixing Q(zeta_d) is a singleton.
            for a in units(n).filter(|a| a % d == 1 % d) {
                assert_eq!(e.galois(a as i64).unwrap(), e);
            }
            // zeta_n generates a strictly larger field unless phi(n) = phi(d).
            assert_eq!(
                CycloElem::zeta_pow(n, 1).lies_in_subfield(d),
                euler_phi(n) == euler_phi(d),
                "n={n} d={d}"
            );
        }
    }
}

#[test]
fn fields_are_never_promoted_silently() {
    let a = CycloElem::one(3);
    let b = CycloElem::one(4);
    assert!(a.checked_add(&b).is_err());
    assert!(a.embed(4).is_err());
}
