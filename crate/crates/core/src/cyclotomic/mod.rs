//! Exact arithmetic in `Q(zeta_n)`.
//!
//! Elements are stored in the power basis `1, z, ..., z^{phi(n)-1}` modulo the
//! `n`-th cyclotomic polynomial, so two elements of the same field are equal
//! exactly when their coefficient vectors are. The ambient conductor `n` is
//! part of the value and is never promoted implicitly: combine elements of
//! different fields by calling [`CycloElem::embed`] into a common `Q(zeta_N)`.

mod poly;
pub(crate) mod render;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use poly::{cyclotomic_poly, CycloPoly};
use poly::{from_int_form, poly_divrem, poly_mul, poly_sub, reduce_int, to_int_form, trim};

use crate::error::{Error, Result};
use crate::exact::{euler_phi, gcd, Rational};
use crate::numerics::BigComplex;

/// An element `c_0 + c_1 z + ... + c_{phi(n)-1} z^{phi(n)-1}` of `Q(zeta_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycloElem {
    n: u64,
    coeffs: Vec<Rational>,
}

impl CycloElem {
    pub fn zero(n: u64) -> Self {
        assert!(n >= 1, "conductor must be positive");
        CycloElem {
            n,
            coeffs: vec![Rational::zero(); euler_phi(n) as usize],
        }
    }

    pub fn one(n: u64) -> Self {
        Self::from_rational(n, Rational::one())
    }

    pub fn from_rational(n: u64, r: Rational) -> Self {
        let mut x = Self::zero(n);
        x.coeffs[0] = r;
        x
    }

    /// `zeta_n^j` for any integer `j`.
    pub fn zeta_pow(n: u64, j: i64) -> Self {
        let e = j.rem_euclid(n as i64) as usize;
        Self::from_sparse(n, std::iter::once((e, Rational::one())))
    }

    /// Builds an element from an arbitrary-degree polynomial in `zeta_n`.
    pub fn from_poly(n: u64, poly: &[Rational]) -> Self {
        Self::from_sparse(n, poly.iter().cloned().enumerate())
    }

    fn from_sparse<I>(n: u64, terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let terms: Vec<(usize, Rational)> =
            terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let phi = cyclotomic_poly(n);
        let len = terms
            .iter()
            .map(|(e, _)| e + 1)
            .max()
            .unwrap_or(0)
            .max(phi.degree());
        let mut dense = vec![Rational::zero(); len];
        for (e, c) in terms {
            dense[e] += c;
        }
        let (num, den) = to_int_form(&dense);
        let reduced = reduce_int(num, phi.coeffs());
        CycloElem {
            n,
            coeffs: from_int_form(reduced, &den),
        }
    }

    /// Coefficients of length exactly `phi(n)`.
    pub fn from_coeffs(n: u64, coeffs: Vec<Rational>) -> Result<Self> {
        let phi = euler_phi(n) as usize;
        if coeffs.len() != phi {
            return Err(Error::Domain(format!(
                "Q(zeta_{n}) needs {phi} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(CycloElem { n, coeffs })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    pub fn field_label(&self) -> String {
        format!("Q(zeta_{})", self.n)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.n,
                right: other.n,
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycloElem { n: self.n, coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycloElem { n: self.n, coeffs })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.n));
        }
        let (a, da) = to_int_form(&self.coeffs);
        let (b, db) = to_int_form(&other.coeffs);
        let mut prod = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let reduced = reduce_int(prod, cyclotomic_poly(self.n).coeffs());
        Ok(CycloElem {
            n: self.n,
            coeffs: from_int_form(reduced, &(da * db)),
        })
    }

    pub fn scalar_mul(&self, r: &Rational) -> Self {
        CycloElem {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(self.n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against `Phi_n`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero(self.n));
        }
        let modulus: Vec<Rational> = cyclotomic_poly(self.n)
            .coeffs()
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect();
        let mut x = self.coeffs.clone();
        trim(&mut x);
        // Invariant: r_i == s_i * x (mod Phi_n).
        let (mut r0, mut r1) = (modulus, x);
        let (mut s0, mut s1): (Vec<Rational>, Vec<Rational>) = (Vec::new(), vec![Rational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // Phi_n is irreducible, so the last nonzero remainder is a constant.
        let c = r1[0].clone();
        let scaled: Vec<Rational> = s1.iter().map(|s| s / &c).collect();
        Ok(Self::from_poly(self.n, &scaled))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self * &other.inv()?)
    }

    /// The same number in `Q(zeta_big)`, using `zeta_n = zeta_big^{big/n}`.
    pub fn embed(&self, big: u64) -> Result<Self> {
        if big == 0 || big % self.n != 0 {
            return Err(Error::NotDivisible {
                from: self.n,
                to: big,
            });
        }
        if big == self.n {
            return Ok(self.clone());
        }
        let step = (big / self.n) as usize;
        Ok(Self::from_sparse(
            big,
            self.coeffs
                .iter()
                .cloned()
                .enumerate()
                .map(|(j, c)| (j * step, c)),
        ))
    }

    /// The automorphism `sigma_a: zeta_n -> zeta_n^a`; `a = -1` is complex conjugation.
    pub fn galois(&self, a: i64) -> Result<Self> {
        let n = self.n as i64;
        let a = a.rem_euclid(n) as u64;
        if gcd(a, self.n) != 1 {
            return Err(Error::NotCoprime {
                value: a as i64,
                modulus: self.n,
            });
        }
        Ok(Self::from_sparse(
            self.n,
            self.coeffs
                .iter()
                .cloned()
                .enumerate()
                .map(|(j, c)| ((j as u64 * a % self.n) as usize, c)),
        ))
    }

    pub fn conj(&self) -> Self {
        self.galois(-1).expect("-1 is a unit")
    }

    /// `Tr_{Q(zeta_n)/Q}` as the sum of all Galois conjugates.
    pub fn trace(&self) -> Rational {
        let sum = units(self.n)
            .map(|a| self.galois(a as i64).expect("unit"))
            .fold(Self::zero(self.n), |acc, y| &acc + &y);
        sum.as_rational()
            .expect("sum of Galois conjugates must be rational")
    }

    /// Membership in the real subfield: fixed by complex conjugation.
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Whether the element lies in `Q(zeta_d)` for `d | n`: fixed by every
    /// `sigma_a` with `a = 1 (mod d)`.
    pub fn lies_in_subfield(&self, d: u64) -> bool {
        assert!(self.n % d == 0, "{d} must divide {}", self.n);
        units(self.n)
            .filter(|a| a % d == 1 % d)
            .all(|a| self.galois(a as i64).expect("unit") == *self)
    }

    /// Value at `zeta_n = e^{2 pi i / n}` with at least `bits` bits of precision.
    pub fn numeric_eval(&self, bits: u32) -> BigComplex {
        crate::numerics::eval_cyclo(self, bits)
    }
}

/// Residues `1 <= a <= n` coprime to `n` (just `1` for `n = 1`).
pub fn units(n: u64) -> impl Iterator<Item = u64> {
    (1..=n).filter(move |&a| gcd(a, n) == 1)
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render::write_terms(f, "z", self.coeffs.iter().cloned().enumerate())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a CycloElem> for &'a CycloElem {
            type Output = CycloElem;
            fn $method(self, rhs: &'a CycloElem) -> CycloElem {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait for CycloElem {
            type Output = CycloElem;
            fn $method(self, rhs: CycloElem) -> CycloElem {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        CycloElem {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn elem(n: u64, c: &[(i64, i64)]) -> CycloElem {
        CycloElem::from_poly(n, &c.iter().map(|&(p, q)| rat(p, q)).collect::<Vec<_>>())
    }

    #[test]
    fn multiplication_examples() {
        let z4 = CycloElem::zeta_pow(4, 1);
        let one = CycloElem::one(4);
        assert_eq!(
            &(&one + &z4) * &(&one - &z4),
            CycloElem::from_rational(4, int(2))
        );

        let x = elem(3, &[(1, 1), (2, 1)]);
        assert_eq!(&x * &x, CycloElem::from_rational(3, int(-3)));

        let p = &CycloElem::from_rational(1, int(3)) * &CycloElem::from_rational(1, int(5));
        assert_eq!(p, CycloElem::from_rational(1, int(15)));
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let a = CycloElem::one(3);
        let b = CycloElem::one(4);
        assert_eq!(
            a.checked_mul(&b),
            Err(Error::FieldMismatch { left: 3, right: 4 })
        );
        assert!(a.checked_add(&b).is_err());
    }

    #[test]
    fn inverse_examples() {
        let z4 = CycloElem::zeta_pow(4, 1);
        assert_eq!(z4.inv().unwrap(), -&z4);

        // (z - 1)(a z + b) = 1 mod z^2 + z + 1 gives a = -1/3, b = -2/3.
        let x = &CycloElem::zeta_pow(3, 1) - &CycloElem::one(3);
        assert_eq!(x.inv().unwrap(), elem(3, &[(-2, 3), (-1, 3)]));
        assert_eq!(CycloElem::zero(5).inv(), Err(Error::DivisionByZero(5)));
    }

    #[test]
    fn embed_examples() {
        assert_eq!(CycloElem::one(1).embed(12).unwrap(), CycloElem::one(12));
        // zeta_2 is the constant -1 in the one-dimensional basis of Q(zeta_2).
        let z2 = CycloElem::zeta_pow(2, 1);
        assert_eq!(z2, CycloElem::from_rational(2, int(-1)));
        assert_eq!(z2.embed(6).unwrap(), CycloElem::from_rational(6, int(-1)));
        // zeta_3 = zeta_6^2 = zeta_6 - 1.
        let z3 = CycloElem::zeta_pow(3, 1).embed(6).unwrap();
        assert_eq!(z3, elem(6, &[(-1, 1), (1, 1)]));
        assert_eq!(
            CycloElem::one(4).embed(6),
            Err(Error::NotDivisible { from: 4, to: 6 })
        );
    }

    #[test]
    fn galois_examples() {
        let z3 = CycloElem::zeta_pow(3, 1);
        assert_eq!(z3.galois(2).unwrap(), elem(3, &[(-1, 1), (-1, 1)]));
        let z4 = CycloElem::zeta_pow(4, 1);
        assert_eq!(z4.galois(-1).unwrap(), -&z4);
        let x = elem(4, &[(3, 7), (-5, 2)]);
        assert_eq!(x.galois(5).unwrap(), x);
        assert_eq!(
            z4.galois(2),
            Err(Error::NotCoprime {
                value: 2,
                modulus: 4
            })
        );
    }

    #[test]
    fn trace_examples() {
        assert_eq!(CycloElem::zeta_pow(3, 1).trace(), int(-1));
        assert_eq!(CycloElem::one(4).trace(), int(2));
        let x = &CycloElem::zeta_pow(5, 1) + &CycloElem::zeta_pow(5, 4);
        assert_eq!(x.trace(), int(-2));
    }

    #[test]
    fn reality_examples() {
        let x = &CycloElem::zeta_pow(5, 1) + &CycloElem::zeta_pow(5, -1);
        assert!(x.is_real());
        assert!(!CycloElem::zeta_pow(4, 1).is_real());
        assert!(CycloElem::from_rational(7, rat(-3, 11)).is_real());
    }

    #[test]
    fn subfield_membership_via_galois_fixing() {
        let x = elem(5, &[(1, 2), (3, 1), (0, 1), (-7, 3)])
            .embed(15)
            .unwrap();
        assert!(x.lies_in_subfield(5));
        assert!(!x.lies_in_subfield(3));
        assert!(!CycloElem::zeta_pow(15, 1).lies_in_subfield(5));
    }

    #[test]
    fn rendering() {
        let x = elem(3, &[(1, 3), (2, 3)]);
        assert_eq!(x.to_string(), "1/3 + 2/3*z");
        assert_eq!(x.field_label(), "Q(zeta_3)");
        assert_eq!(CycloElem::zeta_pow(4, 1).to_string(), "z");
        assert_eq!(
            elem(5, &[(0, 1), (-1, 1), (0, 1), (4, 1)]).to_string(),
            "-z + 4*z^3"
        );
        assert_eq!(CycloElem::zero(7).to_string(), "0");
    }

    #[test]
    fn from_coeffs_checks_length() {
        assert!(CycloElem::from_coeffs(5, vec![int(1); 4]).is_ok());
        assert!(CycloElem::from_coeffs(5, vec![int(1); 5]).is_err());
    }
}
