//! Cyclotomic polynomials with a process-wide write-once cache, and the
//! dense polynomial helpers used for reduction and inversion.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::exact::{euler_phi, Rational};

/// The `n`-th cyclotomic polynomial, coefficients low degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloPoly {
    n: u64,
    coeffs: Arc<Vec<i64>>,
}

impl CycloPoly {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }
}

impl std::fmt::Display for CycloPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<(usize, Rational)> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| (j, Rational::from_integer(BigInt::from(c))))
            .collect();
        super::render::write_terms(f, "x", terms.into_iter().rev())
    }
}

fn cache() -> &'static RwLock<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d`, memoized.
pub fn cyclotomic_poly(n: u64) -> CycloPoly {
    assert!(n >= 1, "cyclotomic_poly requires n >= 1");
    if let Some(c) = cache().read().expect("poisoned").get(&n) {
        return CycloPoly {
            n,
            coeffs: Arc::clone(c),
        };
    }
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n % d == 0) {
        let div = cyclotomic_poly(d);
        num = exact_div_monic(&num, div.coeffs());
    }
    let coeffs: Vec<i64> = num
        .iter()
        .map(|c| c.to_i64().expect("cyclotomic coefficient overflows i64"))
        .collect();
    debug_assert_eq!(coeffs.len() as u64 - 1, euler_phi(n));
    let mut w = cache().write().expect("poisoned");
    let entry = w.entry(n).or_insert_with(|| Arc::new(coeffs));
    CycloPoly {
        n,
        coeffs: Arc::clone(entry),
    }
}

fn exact_div_monic(num: &[BigInt], den: &[i64]) -> Vec<BigInt> {
    let d = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - d];
    for i in (d..num.len()).rev() {
        let c = std::mem::take(&mut rem[i]);
        if c.is_zero() {
            continue;
        }
        for (j, &dj) in den[..d].iter().enumerate() {
            if dj != 0 {
                rem[i - d + j] -= &c * dj;
            }
        }
        quot[i - d] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// Reduces an integer polynomial modulo a monic `phi` in place and truncates.
pub(crate) fn reduce_int(mut poly: Vec<BigInt>, phi: &[i64]) -> Vec<BigInt> {
    let d = phi.len() - 1;
    if poly.len() > d {
        for i in (d..poly.len()).rev() {
            let c = std::mem::take(&mut poly[i]);
            if c.is_zero() {
                continue;
            }
            for (j, &pj) in phi[..d].iter().enumerate() {
                if pj != 0 {
                    poly[i - d + j] -= &c * pj;
                }
            }
        }
    }
    poly.resize(d, BigInt::zero());
    poly
}

/// Common-denominator form of a rational vector.
pub(crate) fn to_int_form(coeffs: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let den = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let num = coeffs
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    (num, den)
}

pub(crate) fn from_int_form(num: Vec<BigInt>, den: &BigInt) -> Vec<Rational> {
    num.into_iter()
        .map(|c| Rational::new(c, den.clone()))
        .collect()
}

// Dense rational polynomials for the extended Euclidean algorithm.

pub(crate) fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub(crate) fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero and trimmed.
pub(crate) fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut rem = a.to_vec();
    trim(&mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let c = &rem[i] / &lead;
        for (j, bj) in b.iter().enumerate() {
            rem[i - db + j] -= &c * bj;
        }
        quot[i - db] = c;
    }
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1).coeffs(), &[-1, 1]);
        assert_eq!(cyclotomic_poly(2).coeffs(), &[1, 1]);
        assert_eq!(cyclotomic_poly(4).coeffs(), &[1, 0, 1]);
        assert_eq!(cyclotomic_poly(6).coeffs(), &[1, -1, 1]);
        assert_eq!(cyclotomic_poly(6).to_string(), "x^2 - x + 1");
        assert_eq!(cyclotomic_poly(1).to_string(), "x - 1");
    }

    #[test]
    fn phi_105_has_a_minus_two() {
        assert!(cyclotomic_poly(105).coeffs().contains(&-2));
    }

    #[test]
    fn degree_is_totient_and_divides_x_n_minus_one() {
        for n in 1..=120u64 {
            let p = cyclotomic_poly(n);
            assert_eq!(p.degree() as u64, euler_phi(n));
            assert_eq!(*p.coeffs().last().unwrap(), 1);
            let mut xn = vec![BigInt::zero(); n as usize + 1];
            xn[0] = BigInt::from(-1);
            xn[n as usize] = BigInt::one();
            let rem = reduce_int(xn, p.coeffs());
            assert!(
                rem.iter().all(Zero::is_zero),
                "Phi_{n} does not divide x^n - 1"
            );
        }
    }

    #[test]
    fn concurrent_cache_fills_agree() {
        let handles: Vec<_> = (0..8)
            .map(|_| std::thread::spawn(|| cyclotomic_poly(360).coeffs().to_vec()))
            .collect();
        let results: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(results.windows(2).all(|w| w[0] == w[1]));
    }
}
