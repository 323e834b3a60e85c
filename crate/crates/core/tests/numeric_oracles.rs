//! Values frozen from an independent multiprecision library.

use chowla_milnor::characters::all_characters;
use chowla_milnor::exact::rat;
use chowla_milnor::numerics::{catalan, dirichlet_l, hurwitz_zeta, pi};

const CATALAN: &str = "0.91596559417721901505460351493238411077414937428167213426649811962176301977625476947935651292611510624857442262";
const HURWITZ_3_DIFF: &str = "62.012553360599640350952630134202790404450577131770215388289076207612789834931412075133402065205772386060243923";
const PI: &str = "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798214808651";

fn agree(got: &str, want: &str, digits: usize) {
    let n = want.find('.').unwrap() + 1 + digits;
    assert_eq!(&got[..n], &want[..n], "got {got}");
}

#[test]
fn catalan_and_l2_chi4() {
    let prec = 256;
    agree(&catalan(prec).to_string(), CATALAN, 65);
    let chi4 = all_characters(4)
        .into_iter()
        .find(|c| !c.is_even())
        .unwrap();
    let l = dirichlet_l(2, &chi4, prec).unwrap();
    agree(&l.re.to_string(), CATALAN, 65);
}

#[test]
fn hurwitz_difference() {
    let prec = 256;
    let d =
        &hurwitz_zeta(3, &rat(1, 4), prec).unwrap() - &hurwitz_zeta(3, &rat(3, 4), prec).unwrap();
    agree(&d.to_string(), HURWITZ_3_DIFF, 60);
}

#[test]
fn doubling_precision_doubles_digits() {
    for prec in [128u32, 256] {
        let lo = catalan(prec).guaranteed_digits();
        let hi = catalan(2 * prec).guaranteed_digits();
        assert!(hi >= 2 * lo, "{lo} -> {hi}");
    }
    agree(&pi(512).to_string(), PI, 100);
}
