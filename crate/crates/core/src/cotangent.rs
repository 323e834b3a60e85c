//! Normalized cotangent-derivative values `C_k(a, q) = i^k cot^(k-1)(pi a / q)`.
//!
//! `C_k(a, q)` is an element of `Q(zeta_q)` lying in `i^k R`. It relates to
//! the even Hurwitz combinations by
//!
//! ```text
//! (i pi)^{-k} (zeta(k, a/q) + (-1)^k zeta(k, 1 - a/q)) = -C_k(a, q) / (k-1)!
//! ```
//!
//! so spans of `C_k` values and of the Hurwitz combinations have the same
//! rational dimension. Two independent constructions are provided:
//! [`cotan_norm`] substitutes `-i cot(pi a/q) = (zeta^a + 1)/(zeta^a - 1)` into
//! the derivative polynomial `D_k`, and [`cotan_via_operator`] applies the
//! operator `2X d/dX` to `(X + 1)/(X - 1)` and evaluates at `X = zeta_q^a`.

use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cyclotomic::{units, CycloElem};
use crate::error::{Error, Result};
use crate::exact::{factorial, factorize, gcd, zeta_norm, Rational};

/// `D_k` with `cot^(k-1)(z) = D_k(cot z)`, coefficients low degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivPoly {
    k: u32,
    coeffs: Arc<Vec<BigInt>>,
}

impl DerivPoly {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn eval(&self, c: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, d| {
            acc * c + Rational::from_integer(d.clone())
        })
    }
}

fn deriv_cache() -> &'static RwLock<Vec<Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<RwLock<Vec<Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(vec![Arc::new(vec![BigInt::zero(), BigInt::one()])]))
}

/// `D_1 = c`, `D_k = -(1 + c^2) D_{k-1}'`.
pub fn derivative_poly(k: u32) -> DerivPoly {
    assert!(k >= 1, "derivative_poly requires k >= 1");
    let idx = k as usize - 1;
    if let Some(c) = deriv_cache().read().expect("poisoned").get(idx) {
        return DerivPoly {
            k,
            coeffs: Arc::clone(c),
        };
    }
    let mut w = deriv_cache().write().expect("poisoned");
    while w.len() <= idx {
        let prev = w.last().expect("seeded").clone();
        let deriv: Vec<BigInt> = prev
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c * BigInt::from(j))
            .collect();
        let mut next = vec![BigInt::zero(); deriv.len() + 2];
        for (j, d) in deriv.iter().enumerate() {
            next[j] -= d;
            next[j + 2] -= d;
        }
        w.push(Arc::new(next));
    }
    DerivPoly {
        k,
        coeffs: Arc::clone(&w[idx]),
    }
}

/// An exact `C_k(a, q)` with `1 <= a < q`, `gcd(a, q) = 1`, `q > 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CotanValue {
    pub k: u32,
    pub a: u64,
    pub q: u64,
    pub value: CycloElem,
}

fn normalize(k: u32, a: i64, q: u64) -> Result<u64> {
    if q <= 2 {
        return Err(Error::InvalidModulus {
            modulus: q,
            reason: "cotangent values need q > 2",
        });
    }
    if k == 0 {
        return Err(Error::Domain(
            "derivative index k must be at least 1".into(),
        ));
    }
    let a = a.rem_euclid(q as i64) as u64;
    if gcd(a, q) != 1 {
        return Err(Error::NotCoprime {
            value: a as i64,
            modulus: q,
        });
    }
    Ok(a)
}

/// `C_k(a, q) = i^k D_k(i u)` with `u = (zeta_q^a + 1)/(zeta_q^a - 1)`.
pub fn cotan_norm(k: u32, a: i64, q: u64) -> Result<CotanValue> {
    let a = normalize(k, a, q)?;
    let w = CycloElem::zeta_pow(q, a as i64);
    let one = CycloElem::one(q);
    let u = (&w + &one).checked_div(&(&w - &one))?;
    let d = derivative_poly(k);
    let mut value = CycloElem::zero(q);
    let mut u_pow = CycloElem::one(q);
    for (j, c) in d.coeffs().iter().enumerate() {
        if !c.is_zero() {
            // D_k has the parity of k, so i^(k + j) is the real sign (-1)^((k + j)/2).
            debug_assert_eq!((k as usize + j) % 2, 0);
            let sign = if ((k as usize + j) / 2) % 2 == 0 {
                1
            } else {
                -1
            };
            let coeff = Rational::from_integer(c * BigInt::from(sign));
            value = &value + &u_pow.scalar_mul(&coeff);
        }
        u_pow = &u_pow * &u;
    }
    Ok(CotanValue { k, a, q, value })
}

/// Numerator `P_k` of `(2X d/dX)^{k-1} ((X + 1)/(X - 1)) = P_k(X) / (X - 1)^k`.
pub fn operator_numerator(k: u32) -> Vec<BigInt> {
    let mut p = vec![BigInt::one(), BigInt::one()];
    for m in 1..k {
        // d/dX [P / (X-1)^m] = (P' (X - 1) - m P) / (X-1)^{m+1}
        let dp: Vec<BigInt> = p
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c * BigInt::from(j))
            .collect();
        let mut inner = vec![BigInt::zero(); p.len() + 1];
        for (j, c) in dp.iter().enumerate() {
            inner[j + 1] += c;
            inner[j] -= c;
        }
        for (j, c) in p.iter().enumerate() {
            inner[j] -= c * BigInt::from(m);
        }
        let mut next = vec![BigInt::zero(); inner.len() + 1];
        for (j, c) in inner.into_iter().enumerate() {
            next[j + 1] = c * 2;
        }
        while next.last().is_some_and(Zero::is_zero) {
            next.pop();
        }
        p = next;
    }
    p
}

/// `C_k(a, q) = (-1)^k R_k(zeta_q^a)`, with `R_k` from the Euler operator.
pub fn cotan_via_operator(k: u32, a: i64, q: u64) -> Result<CotanValue> {
    let a = normalize(k, a, q)?;
    let w = CycloElem::zeta_pow(q, a as i64);
    let numerator = operator_numerator(k)
        .iter()
        .rev()
        .fold(CycloElem::zero(q), |acc, c| {
            &(&acc * &w) + &CycloElem::from_rational(q, Rational::from_integer(c.clone()))
        });
    let denom_inv = (&w - &CycloElem::one(q)).inv()?.pow(k);
    let mut value = &numerator * &denom_inv;
    if k % 2 == 1 {
        value = -value;
    }
    Ok(CotanValue { k, a, q, value })
}

/// The trace of `C_k(., q)` against its closed form
/// `-2 (k-1)! q^k prod_{p | q} (1 - p^{-k}) zeta_norm(k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceIdentity {
    pub k: u32,
    pub q: u64,
    pub trace: Rational,
    pub closed_form: Rational,
}

impl TraceIdentity {
    pub fn holds(&self) -> bool {
        self.trace == self.closed_form
    }
}

pub fn trace_closed_form(k: u32, q: u64) -> Result<Rational> {
    let euler = factorize(q).primes().fold(Rational::one(), |acc, p| {
        acc * (Rational::one() - Rational::new(BigInt::one(), BigInt::from(p).pow(k)))
    });
    Ok(
        Rational::from_integer(factorial(k as u64 - 1) * BigInt::from(q).pow(k) * -2)
            * euler
            * zeta_norm(k)?,
    )
}

/// `sum_{a in (Z/q)^x} C_k(a, q)`, taken as the trace of `C_k(1, q)`.
pub fn cotan_trace_sum(k: u32, q: u64) -> Result<TraceIdentity> {
    if k % 2 == 1 {
        return Err(Error::Domain(format!(
            "trace identity needs even k; for odd k = {k} the unit sum vanishes"
        )));
    }
    let c = cotan_norm(k, 1, q)?;
    Ok(TraceIdentity {
        k,
        q,
        trace: c.value.trace(),
        closed_form: trace_closed_form(k, q)?,
    })
}

/// Sum of `C_k(a, q)` over all units, computed value by value.
pub fn cotan_unit_sum(k: u32, q: u64) -> Result<CycloElem> {
    units(q).try_fold(CycloElem::zero(q), |acc, a| {
        Ok(&acc + &cotan_norm(k, a as i64, q)?.value)
    })
}

/// `T_q = {1 <= a < q/2 : gcd(a, q) = 1}`.
pub fn half_units(q: u64) -> Vec<u64> {
    (1..q).filter(|&a| 2 * a < q && gcd(a, q) == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn derivative_poly_examples() {
        assert_eq!(derivative_poly(1).coeffs(), ints(&[0, 1]).as_slice());
        assert_eq!(derivative_poly(2).coeffs(), ints(&[-1, 0, -1]).as_slice());
        assert_eq!(derivative_poly(3).coeffs(), ints(&[0, 2, 0, 2]).as_slice());
        assert_eq!(derivative_poly(3).eval(&int(1)), int(4));
    }

    #[test]
    fn derivative_poly_parity() {
        for k in 1..12u32 {
            let d = derivative_poly(k);
            assert_eq!(d.coeffs().len(), k as usize + 1);
            for (j, c) in d.coeffs().iter().enumerate() {
                if (j + k as usize) % 2 == 1 {
                    assert!(c.is_zero(), "D_{k} has a c^{j} term");
                }
            }
        }
    }

    #[test]
    fn cotan_norm_examples() {
        assert_eq!(
            cotan_norm(1, 1, 4).unwrap().value,
            CycloElem::zeta_pow(4, 1)
        );
        assert_eq!(
            cotan_norm(2, 1, 3).unwrap().value.as_rational(),
            Some(rat(4, 3))
        );
        let expected = CycloElem::from_poly(3, &[rat(1, 3), rat(2, 3)]);
        assert_eq!(cotan_norm(1, 1, 3).unwrap().value, expected);
    }

    #[test]
    fn operator_examples() {
        assert_eq!(operator_numerator(2), ints(&[0, -4]));
        assert_eq!(
            cotan_via_operator(1, 1, 4).unwrap().value,
            CycloElem::zeta_pow(4, 1)
        );
        assert_eq!(
            cotan_via_operator(2, 1, 4).unwrap().value.as_rational(),
            Some(int(2))
        );
        // i^3 cot''(pi/4) = -4i
        let minus_4i = CycloElem::zeta_pow(4, 1).scalar_mul(&int(-4));
        assert_eq!(cotan_via_operator(3, 1, 4).unwrap().value, minus_4i);
        assert_eq!(cotan_norm(3, 1, 4).unwrap().value, minus_4i);
    }

    #[test]
    fn argument_normalization_and_errors() {
        assert_eq!(cotan_norm(2, 5, 4).unwrap().a, 1);
        assert_eq!(cotan_norm(2, -1, 5).unwrap().a, 4);
        assert_eq!(
            cotan_norm(2, 2, 4),
            Err(Error::NotCoprime {
                value: 2,
                modulus: 4
            })
        );
        assert!(matches!(
            cotan_norm(2, 1, 2),
            Err(Error::InvalidModulus { .. })
        ));
        assert!(matches!(
            cotan_via_operator(2, 3, 6),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn trace_examples() {
        let t = cotan_trace_sum(2, 3).unwrap();
        assert_eq!(t.trace, rat(8, 3));
        assert!(t.holds());
        let t = cotan_trace_sum(2, 4).unwrap();
        assert_eq!(t.trace, int(4));
        assert!(t.holds());
        // Brute sum of the four exact values for q = 5.
        let brute = cotan_unit_sum(2, 5).unwrap();
        assert_eq!(brute.as_rational(), Some(int(8)));
        assert_eq!(cotan_trace_sum(2, 5).unwrap().closed_form, int(8));
        assert!(cotan_trace_sum(3, 5).is_err());
    }

    #[test]
    fn half_unit_sets() {
        assert_eq!(half_units(5), vec![1, 2]);
        assert_eq!(half_units(12), vec![1, 5]);
        assert_eq!(half_units(7), vec![1, 2, 3]);
    }
}
