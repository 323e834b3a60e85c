//! Dirichlet characters modulo `q`.
//!
//! `(Z/qZ)^x` is decomposed over prime powers: odd `p^e` and `4` use their
//! smallest primitive root, `2^e` with `e >= 3` uses `{-1, 5}`. A character is
//! an exponent vector on those generators; characters are enumerated in
//! lexicographic order of exponent vectors. Values are roots of unity kept as
//! exponents of `zeta_E` (`E` the group exponent) and materialized in the
//! smallest field `Q(zeta_order)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::cotangent::{cotan_norm, half_units};
use crate::cyclotomic::{cyclotomic_poly, units, CycloElem};
use crate::error::{Error, Result};
use crate::exact::{euler_phi, factorize, gcd, lcm, lcm_all, primitive_root};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitGroup {
    q: u64,
    generators: Vec<(u64, u64)>,
    exponent: u64,
    dlog: Vec<Option<Vec<u64>>>,
}

impl UnitGroup {
    pub fn q(&self) -> u64 {
        self.q
    }

    /// `(residue, order)` pairs whose direct product is `(Z/qZ)^x`.
    pub fn generators(&self) -> &[(u64, u64)] {
        &self.generators
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn order(&self) -> u64 {
        self.generators.iter().map(|&(_, o)| o).product()
    }

    /// Exponent vector of `a` on the generators, `None` off the units.
    pub fn dlog(&self, a: i64) -> Option<&[u64]> {
        let r = a.rem_euclid(self.q as i64) as usize;
        self.dlog[r].as_deref()
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    old_s.rem_euclid(m as i128) as u64
}

/// Lifts `g mod pe` to the residue mod `q` that is `1` on the other components.
fn crt_lift(g: u64, pe: u64, q: u64) -> u64 {
    if pe == q {
        return g % q;
    }
    let rest = q / pe;
    let t = (g + pe - 1) % pe * mod_inverse(rest % pe, pe) % pe;
    (1 + rest * t) % q
}

pub fn unit_group(q: u64) -> UnitGroup {
    assert!(q >= 1, "unit_group requires q >= 1");
    let mut generators = Vec::new();
    for (p, e) in factorize(q).0 {
        let pe = p.pow(e);
        match (p, e) {
            (2, 1) => {}
            (2, 2) => generators.push((crt_lift(3, 4, q), 2)),
            (2, _) => {
                generators.push((crt_lift(pe - 1, pe, q), 2));
                generators.push((crt_lift(5, pe, q), pe / 4));
            }
            _ => {
                let g = primitive_root(pe).expect("odd prime power is cyclic");
                generators.push((crt_lift(g, pe, q), euler_phi(pe)));
            }
        }
    }
    let exponent = lcm_all(generators.iter().map(|&(_, o)| o));
    let mut dlog: Vec<Option<Vec<u64>>> = vec![None; q as usize];
    let mut exps = vec![0u64; generators.len()];
    loop {
        let r = generators
            .iter()
            .zip(&exps)
            .fold(1 % q, |acc, (&(g, _), &e)| {
                acc * crate::exact::pow_mod(g, e, q) % q
            });
        debug_assert!(dlog[r as usize].is_none(), "generators are not independent");
        dlog[r as usize] = Some(exps.clone());
        if !odometer(&mut exps, generators.iter().map(|&(_, o)| o)) {
            break;
        }
    }
    debug_assert_eq!(
        dlog.iter().filter(|d| d.is_some()).count() as u64,
        euler_phi(q)
    );
    UnitGroup {
        q,
        generators,
        exponent,
        dlog,
    }
}

/// Advances a mixed-radix counter, last digit fastest; false once it wraps.
fn odometer(
    digits: &mut [u64],
    radices: impl DoubleEndedIterator<Item = u64> + ExactSizeIterator,
) -> bool {
    let radices: Vec<u64> = radices.collect();
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radices[i] {
            return true;
        }
        digits[i] = 0;
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletChar {
    group: Arc<UnitGroup>,
    exponents: Vec<u64>,
    order: u64,
    index: usize,
}

impl DirichletChar {
    pub fn q(&self) -> u64 {
        self.group.q
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Position in the canonical enumeration of [`all_characters`].
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn group(&self) -> &UnitGroup {
        &self.group
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// `chi(a) = zeta_E^s` with `E` the group exponent; `None` off the units.
    pub fn exponent_at(&self, a: i64) -> Option<u64> {
        let e = self.group.exponent;
        let logs = self.group.dlog(a)?;
        Some(
            self.group
                .generators
                .iter()
                .zip(&self.exponents)
                .zip(logs)
                .map(|((&(_, ord), &x), &l)| x * l % ord * (e / ord))
                .sum::<u64>()
                % e,
        )
    }

    /// `chi(a) = zeta_order^s`, as `(s, order)`.
    pub fn value_at(&self, a: i64) -> Option<(u64, u64)> {
        let s = self.exponent_at(a)?;
        let step = self.group.exponent / self.order;
        debug_assert_eq!(s % step, 0);
        Some((s / step, self.order))
    }

    /// `chi(-1)` as `+1` or `-1`.
    pub fn parity(&self) -> i8 {
        match self.value_at(-1) {
            Some((0, _)) => 1,
            Some((s, o)) if 2 * s == o => -1,
            other => unreachable!("chi(-1) must be +-1, got {other:?}"),
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == 1
    }

    pub fn label(&self) -> String {
        let e: Vec<String> = self.exponents.iter().map(u64::to_string).collect();
        format!("chi_{}[{}]", self.q(), e.join(","))
    }
}

impl fmt::Display for DirichletChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

pub fn all_characters(q: u64) -> Vec<DirichletChar> {
    let group = Arc::new(unit_group(q));
    let orders: Vec<u64> = group.generators.iter().map(|&(_, o)| o).collect();
    let mut out = Vec::with_capacity(euler_phi(q) as usize);
    let mut exps = vec![0u64; orders.len()];
    loop {
        let order = orders
            .iter()
            .zip(&exps)
            .map(|(&o, &x)| o / gcd(x, o))
            .fold(1, lcm);
        out.push(DirichletChar {
            group: Arc::clone(&group),
            exponents: exps.clone(),
            order,
            index: out.len(),
        });
        if !odometer(&mut exps, orders.iter().copied()) {
            break;
        }
    }
    out
}

/// `chi(a)` as an element of `Q(zeta_order)`; zero off the units.
pub fn char_eval(chi: &DirichletChar, a: i64) -> CycloElem {
    match chi.value_at(a) {
        Some((s, o)) => CycloElem::zeta_pow(o, s as i64),
        None => CycloElem::zero(chi.order),
    }
}

/// The matrix `(chi_b(a))` over units `a` (rows) and characters `b` (columns),
/// with entries stored as exponents of `zeta_E`.
#[derive(Debug, Clone)]
pub struct CharMatrix {
    pub q: u64,
    pub exponent: u64,
    pub units: Vec<u64>,
    pub chars: Vec<DirichletChar>,
    entries: Vec<Vec<u64>>,
}

impl CharMatrix {
    pub fn entry(&self, row: usize, col: usize) -> CycloElem {
        CycloElem::zeta_pow(self.exponent, self.entries[row][col] as i64)
    }

    pub fn dim(&self) -> usize {
        self.units.len()
    }

    /// `(1/phi) chi_b(a^{-1})` at position `(b, a)` of the claimed inverse.
    pub fn inverse_entry(&self, row: usize, col: usize) -> CycloElem {
        let e = self.exponent;
        let s = (e - self.entries[col][row]) % e;
        CycloElem::zeta_pow(e, s as i64).scalar_mul(&crate::exact::rat(1, self.dim() as i64))
    }

    /// `sum_j zeta_E^{s_j}` reduced in `Q(zeta_E)`, compared against `expected`.
    fn sum_equals(&self, exps: impl Iterator<Item = u64>, expected: i64) -> bool {
        let e = self.exponent as usize;
        let mut counts = vec![BigInt::from(0); e];
        for s in exps {
            counts[s as usize] += 1;
        }
        let phi = cyclotomic_poly(self.exponent);
        let d = phi.degree();
        // Reduce modulo Phi_E, leaving the power-basis coordinates.
        for i in (d..e).rev() {
            let c = std::mem::take(&mut counts[i]);
            for (j, &pj) in phi.coeffs()[..d].iter().enumerate() {
                counts[i - d + j] -= &c * pj;
            }
        }
        counts[0] == BigInt::from(expected) && counts[1..d].iter().all(|c| *c == BigInt::from(0))
    }

    /// Certifies `M * M^{-1} = I` and `M^{-1} * M = I` exactly.
    pub fn certify_inverse(&self) -> bool {
        let n = self.dim();
        let e = self.exponent;
        let phi = n as i64;
        let right = (0..n).all(|i| {
            (0..n).all(|i2| {
                let exps = (0..n).map(|b| (self.entries[i][b] + e - self.entries[i2][b]) % e);
                self.sum_equals(exps, if i == i2 { phi } else { 0 })
            })
        });
        let left = (0..n).all(|b| {
            (0..n).all(|b2| {
                let exps = (0..n).map(|a| (e - self.entries[a][b] + self.entries[a][b2]) % e);
                self.sum_equals(exps, if b == b2 { phi } else { 0 })
            })
        });
        right && left
    }
}

pub fn char_matrix(q: u64) -> Result<CharMatrix> {
    if q < 3 {
        return Err(Error::InvalidModulus {
            modulus: q,
            reason: "character matrix needs q >= 3",
        });
    }
    let chars = all_characters(q);
    let exponent = chars[0].group.exponent;
    let units: Vec<u64> = units(q).collect();
    let entries = units
        .iter()
        .map(|&a| {
            chars
                .iter()
                .map(|c| c.exponent_at(a as i64).expect("unit"))
                .collect()
        })
        .collect();
    Ok(CharMatrix {
        q,
        exponent,
        units,
        chars,
        entries,
    })
}

/// Exact orthogonality of a pair: `sum_a chi(a) psi(a^{-1}) = phi(q) [chi = psi]`.
pub fn orthogonality_holds(chi: &DirichletChar, psi: &DirichletChar) -> bool {
    let q = chi.q();
    let e = chi.group.exponent;
    let acc = units(q).fold(CycloElem::zero(e), |acc, a| {
        let s = (chi.exponent_at(a as i64).unwrap() + e - psi.exponent_at(a as i64).unwrap()) % e;
        &acc + &CycloElem::zeta_pow(e, s as i64)
    });
    let expected = if chi == psi { euler_phi(q) as i64 } else { 0 };
    acc.as_rational() == Some(crate::exact::int(expected))
}

/// Field holding both `C_k(., q)` and the values of `chi`.
pub fn coordinate_field(chi: &DirichletChar) -> u64 {
    lcm(chi.q(), chi.order)
}

/// `Lambda(k, chi) = sum_{a in T_q} chi(a) C_k(a, q)` in `Q(zeta_{lcm(q, order)})`.
pub fn l_coordinates(k: u32, chi: &DirichletChar) -> Result<CycloElem> {
    weighted_cotan_sum(k, chi, half_units(chi.q()).into_iter())
}

/// `sum_{a in (Z/q)^x} chi(a) C_k(a, q)`; zero exactly when `chi(-1) != (-1)^k`.
pub fn full_unit_sum(k: u32, chi: &DirichletChar) -> Result<CycloElem> {
    weighted_cotan_sum(k, chi, units(chi.q()))
}

fn weighted_cotan_sum(
    k: u32,
    chi: &DirichletChar,
    idx: impl Iterator<Item = u64>,
) -> Result<CycloElem> {
    let q = chi.q();
    if q <= 2 {
        return Err(Error::InvalidModulus {
            modulus: q,
            reason: "L-value coordinates need q > 2",
        });
    }
    let field = coordinate_field(chi);
    idx.map(|a| -> Result<CycloElem> {
        let c = cotan_norm(k, a as i64, q)?.value.embed(field)?;
        let v = char_eval(chi, a as i64).embed(field)?;
        Ok(&c * &v)
    })
    .try_fold(CycloElem::zero(field), |acc, t| Ok(&acc + &t?))
}

/// One row of the JSON character table.
#[derive(Debug, Clone, Serialize)]
pub struct CharRow {
    pub index: usize,
    pub label: String,
    pub exponents: Vec<u64>,
    pub order: u64,
    pub parity: i8,
    /// `chi(a)` as `[a, s, order]`, meaning `zeta_order^s`.
    pub values: Vec<[u64; 3]>,
}

pub fn char_table(q: u64) -> Vec<CharRow> {
    all_characters(q)
        .iter()
        .map(|c| CharRow {
            index: c.index,
            label: c.label(),
            exponents: c.exponents.clone(),
            order: c.order,
            parity: c.parity(),
            values: units(q)
                .map(|a| {
                    let (s, o) = c.value_at(a as i64).expect("unit");
                    [a, s, o]
                })
                .collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, mult_order};

    #[test]
    fn unit_group_examples() {
        assert_eq!(unit_group(8).generators(), &[(7, 2), (5, 2)]);
        assert_eq!(unit_group(5).generators(), &[(2, 4)]);
        let g1 = unit_group(1);
        assert!(g1.generators().is_empty());
        assert_eq!(g1.order(), 1);
    }

    #[test]
    fn unit_group_orders_multiply_to_phi() {
        for q in 1..=200u64 {
            let g = unit_group(q);
            assert_eq!(g.order(), euler_phi(q), "q = {q}");
            for &(r, o) in g.generators() {
                if q > 2 {
                    assert_eq!(mult_order(r, q), Some(o));
                }
            }
        }
    }

    #[test]
    fn character_examples() {
        let c4 = all_characters(4);
        assert_eq!(c4.len(), 2);
        assert!(c4[0].is_trivial() && c4[0].is_even());
        assert_eq!(char_eval(&c4[1], 3), CycloElem::from_rational(2, int(-1)));
        assert_eq!(c4[1].parity(), -1);

        let c5 = all_characters(5);
        let parities: Vec<i8> = c5.iter().map(DirichletChar::parity).collect();
        assert_eq!(parities, vec![1, -1, 1, -1]);
        // chi(2) = zeta_4 forces chi(4) = -1.
        let chi = &c5[1];
        assert_eq!(char_eval(chi, 2), CycloElem::zeta_pow(4, 1));
        assert_eq!(char_eval(chi, 4), CycloElem::from_rational(4, int(-1)));

        let c3 = all_characters(3);
        assert!(c3[0].is_even());
        assert_eq!(c3[1].parity(), -1);
        assert!(char_eval(&c3[1], 6).is_zero());
    }

    #[test]
    fn parity_census() {
        for q in 3..=60u64 {
            let chars = all_characters(q);
            assert_eq!(chars.len() as u64, euler_phi(q));
            let odd = chars.iter().filter(|c| c.parity() == -1).count() as u64;
            assert_eq!(2 * odd, euler_phi(q), "q = {q}");
        }
    }

    #[test]
    fn multiplicativity() {
        for q in [7u64, 15, 16, 24] {
            for chi in all_characters(q) {
                for a in units(q) {
                    for b in units(q) {
                        let lhs = char_eval(&chi, (a * b) as i64);
                        let rhs = &char_eval(&chi, a as i64) * &char_eval(&chi, b as i64);
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn char_matrix_small_cases() {
        let m = char_matrix(3).unwrap();
        let signs: Vec<Vec<CycloElem>> = (0..2)
            .map(|i| (0..2).map(|j| m.entry(i, j)).collect())
            .collect();
        let one = CycloElem::one(2);
        assert_eq!(
            signs,
            vec![vec![one.clone(), one.clone()], vec![one.clone(), -&one]]
        );
        assert!(m.certify_inverse());
        assert!(char_matrix(4).unwrap().certify_inverse());
        let m5 = char_matrix(5).unwrap();
        assert_eq!(m5.dim(), 4);
        assert!(m5.certify_inverse());
        assert!(char_matrix(2).is_err());
    }

    #[test]
    fn inverse_entries_multiply_to_identity_in_field() {
        let m = char_matrix(7).unwrap();
        let n = m.dim();
        for i in 0..n {
            for j in 0..n {
                let s = (0..n).fold(CycloElem::zero(m.exponent), |acc, b| {
                    &acc + &(&m.entry(i, b) * &m.inverse_entry(b, j))
                });
                assert_eq!(s.as_rational(), Some(int((i == j) as i64)));
            }
        }
    }

    #[test]
    fn l_coordinate_examples() {
        let odd4 = all_characters(4).pop().unwrap();
        assert_eq!(l_coordinates(1, &odd4).unwrap(), CycloElem::zeta_pow(4, 1));
        assert!(full_unit_sum(2, &odd4).unwrap().is_zero());

        let quad5 = all_characters(5)
            .into_iter()
            .find(|c| c.order() == 2)
            .unwrap();
        let c1 = cotan_norm(2, 1, 5).unwrap().value;
        let c2 = cotan_norm(2, 2, 5).unwrap().value;
        assert_eq!(
            l_coordinates(2, &quad5).unwrap(),
            (&c1 - &c2).embed(10).unwrap()
        );
        assert!(l_coordinates(2, &all_characters(2)[0]).is_err());
    }
}
