//! Integer and rational foundations: factorization, Euler's totient, the
//! Möbius function, Bernoulli numbers and the rational normalization of
//! `zeta(k)` at even `k`.

use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number in canonical form (reduced, positive denominator).
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Prime factorization as `(prime, exponent)` pairs, sorted by prime.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization(pub Vec<(u64, u32)>);

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&(p, _)| p)
    }

    pub fn prime_powers(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&(p, e)| p.pow(e))
    }

    pub fn value(&self) -> u64 {
        self.prime_powers().product()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve primes as bases certify every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Trial division; the cofactor left over is certified prime by Miller-Rabin.
pub fn factorize(mut n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        debug_assert!(is_prime(n));
        out.push((n, 1));
    }
    Factorization(out)
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .0
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

pub fn mobius(n: u64) -> i32 {
    let f = factorize(n);
    if f.0.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.0.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn lcm_all<I: IntoIterator<Item = u64>>(it: I) -> u64 {
    it.into_iter().fold(1, lcm)
}

pub fn pairwise_coprime(ns: &[u64]) -> bool {
    ns.iter()
        .enumerate()
        .all(|(i, &a)| ns[i + 1..].iter().all(|&b| gcd(a, b) == 1))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `B_0, ..., B_n` from `sum_{j=0}^{m} C(m+1, j) B_j = 0`, so `B_1 = -1/2`.
pub fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut table: Vec<Rational> = Vec::with_capacity(n + 1);
    table.push(Rational::one());
    for m in 1..=n {
        let acc = table
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (j, b)| {
                acc + b * Rational::from_integer(binomial(m as u64 + 1, j as u64))
            });
        table.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    table
}

/// Shared, growing copy of [`bernoulli_table`] covering at least `B_0..=B_n`.
pub fn bernoulli_numbers(n: usize) -> Arc<Vec<Rational>> {
    static CACHE: OnceLock<RwLock<Arc<Vec<Rational>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(Arc::new(bernoulli_table(0))));
    let cur = Arc::clone(&cache.read().unwrap_or_else(|e| e.into_inner()));
    if cur.len() > n {
        return cur;
    }
    let grown = Arc::new(bernoulli_table(n.max(2 * cur.len())));
    let mut w = cache.write().unwrap_or_else(|e| e.into_inner());
    if w.len() < grown.len() {
        *w = Arc::clone(&grown);
    }
    Arc::clone(&w)
}

pub fn bernoulli(n: usize) -> Rational {
    bernoulli_numbers(n)[n].clone()
}

/// `(i*pi)^{-k} * zeta(k) = -B_k 2^{k-1} / k!` for even `k >= 2`.
pub fn zeta_norm(k: u32) -> Result<Rational> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::OddZetaIndex(k));
    }
    let b = bernoulli(k as usize);
    let two_pow = BigInt::one() << (k - 1);
    Ok(-b * Rational::new(two_pow, factorial(k as u64)))
}

/// Multiplicative order of `a` modulo `m`, `None` when `gcd(a, m) != 1`.
pub fn mult_order(a: u64, m: u64) -> Option<u64> {
    if gcd(a % m, m) != 1 {
        return None;
    }
    let phi = euler_phi(m);
    let mut order = phi;
    for p in factorize(phi).primes() {
        while order % p == 0 && pow_mod(a, order / p, m) == 1 {
            order /= p;
        }
    }
    Some(order)
}

/// Smallest generator of `(Z/pe)^x` for `pe` in `{2, 4}` or an odd prime power.
pub fn primitive_root(pe: u64) -> Result<u64> {
    match pe {
        0 | 1 => {
            return Err(Error::InvalidModulus {
                modulus: pe,
                reason: "primitive roots need a modulus of at least 2",
            })
        }
        2 => return Ok(1),
        4 => return Ok(3),
        _ => {}
    }
    let f = factorize(pe);
    if f.0.len() != 1 {
        return Err(Error::NotCyclic(pe));
    }
    let (p, _) = f.0[0];
    if p == 2 {
        return Err(Error::NotCyclic(pe));
    }
    let phi = euler_phi(pe);
    (2..pe)
        .find(|&g| mult_order(g, pe) == Some(phi))
        .ok_or(Error::NotCyclic(pe))
}

/// Lossy `f64` view of a rational, for diagnostics only.
pub fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64()
        .unwrap_or(if x.is_negative() { f64::MIN } else { f64::MAX })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_is_prime(n: u64) -> bool {
        n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(12).0, vec![(2, 2), (3, 1)]);
        assert!(factorize(1).is_empty());
        assert!(trial_division_is_prime(97));
        assert_eq!(factorize(97).0, vec![(97, 1)]);
    }

    #[test]
    fn factorize_reconstructs_and_primes_are_prime() {
        for n in 1..3000u64 {
            let f = factorize(n);
            assert_eq!(f.value(), n);
            assert!(f.primes().all(trial_division_is_prime));
            assert!(f.0.windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), trial_division_is_prime(n), "n = {n}");
        }
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    #[test]
    fn phi_examples_and_brute_count() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        let brute = (1..=60u64).filter(|&a| gcd(a, 60) == 1).count() as u64;
        assert_eq!(brute, 16);
        assert_eq!(euler_phi(60), 16);
    }

    #[test]
    fn phi_product_formula_up_to_ten_thousand() {
        for n in 1..=10_000u64 {
            let f = factorize(n);
            let via_product = f.primes().fold(int(n as i64), |acc, p| {
                acc * (Rational::one() - rat(1, p as i64))
            });
            assert_eq!(via_product, int(euler_phi(n) as i64), "n = {n}");
        }
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(4), 0);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(30), -1);
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        let table = bernoulli_table(40);
        for n in (3..=40).step_by(2) {
            assert!(table[n].is_zero(), "B_{n} should vanish");
        }
    }

    #[test]
    fn zeta_norm_examples() {
        assert_eq!(zeta_norm(2).unwrap(), rat(-1, 6));
        assert_eq!(zeta_norm(4).unwrap(), rat(1, 90));
        assert_eq!(zeta_norm(6).unwrap(), rat(-1, 945));
        assert_eq!(zeta_norm(3), Err(Error::OddZetaIndex(3)));
        assert_eq!(zeta_norm(0), Err(Error::OddZetaIndex(0)));
    }

    #[test]
    fn primitive_root_examples() {
        // 2 has order 3 mod 7; 3 has order 6.
        assert_eq!(mult_order(2, 7), Some(3));
        assert_eq!(primitive_root(7).unwrap(), 3);
        assert_eq!(primitive_root(4).unwrap(), 3);
        assert_eq!(mult_order(2, 9), Some(6));
        assert_eq!(primitive_root(9).unwrap(), 2);
        assert_eq!(primitive_root(8), Err(Error::NotCyclic(8)));
        assert_eq!(primitive_root(15), Err(Error::NotCyclic(15)));
    }

    #[test]
    fn rational_arithmetic_is_exact() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let a = rat(rng.gen_range(-10_000..10_000), rng.gen_range(1..10_000));
            let c = rat(rng.gen_range(-10_000..10_000), rng.gen_range(1..10_000));
            assert_eq!((&a + &c) - &c, a);
            assert!(a.denom() > &BigInt::zero());
            assert!(a.numer().gcd(a.denom()).is_one());
        }
    }
}
