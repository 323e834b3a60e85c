//! Fixed-point big reals.
//!
//! A [`BigReal`] built at precision `p` stores `mant / 2^(p + GUARD_BITS)`.
//! Every primitive operation rounds to within one unit of the last place, so
//! a computation may spend up to `2^(2 * GUARD_BITS)` ulps of rounding before
//! the advertised bound `2^(-p + GUARD_BITS)` is at risk. Errors are tracked
//! by this budget, not by interval arithmetic.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::Rational;

pub const GUARD_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigReal {
    mant: BigInt,
    prec: u32,
}

impl BigReal {
    fn frac_bits(prec: u32) -> u32 {
        prec + GUARD_BITS
    }

    pub fn zero(prec: u32) -> Self {
        BigReal {
            mant: BigInt::zero(),
            prec,
        }
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        BigReal {
            mant: n.into() << Self::frac_bits(prec),
            prec,
        }
    }

    /// Nearest fixed-point value to `r` (error at most half an ulp).
    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        let scaled = r.numer() << Self::frac_bits(prec);
        BigReal {
            mant: div_round(&scaled, r.denom()),
            prec,
        }
    }

    pub(crate) fn from_mant(mant: BigInt, prec: u32) -> Self {
        BigReal { mant, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// The same value re-rounded to precision `prec`.
    pub fn to_prec(&self, prec: u32) -> Self {
        let mant = match prec.cmp(&self.prec) {
            Ordering::Equal => self.mant.clone(),
            Ordering::Greater => &self.mant << (prec - self.prec),
            Ordering::Less => div_round(&self.mant, &(BigInt::one() << (self.prec - prec))),
        };
        BigReal { mant, prec }
    }

    /// `log2` of the advertised absolute error bound.
    pub fn error_bound_log2(&self) -> i64 {
        -(self.prec as i64) + GUARD_BITS as i64
    }

    /// Decimal places guaranteed by [`Self::error_bound_log2`].
    pub fn guaranteed_digits(&self) -> u32 {
        let bits = (self.prec as i64 - GUARD_BITS as i64).max(0) as f64;
        (bits * std::f64::consts::LOG10_2).floor() as u32
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn abs(&self) -> Self {
        BigReal {
            mant: self.mant.abs(),
            prec: self.prec,
        }
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn mul_int(&self, n: impl Into<BigInt>) -> Self {
        BigReal {
            mant: &self.mant * n.into(),
            prec: self.prec,
        }
    }

    pub fn div_int(&self, n: impl Into<BigInt>) -> Self {
        BigReal {
            mant: div_round(&self.mant, &n.into()),
            prec: self.prec,
        }
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        BigReal {
            mant: div_round(&(&self.mant * r.numer()), r.denom()),
            prec: self.prec,
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "BigReal division by zero");
        let scaled = &self.mant << Self::frac_bits(self.prec);
        BigReal {
            mant: div_round(&scaled, &other.mant),
            prec: self.prec,
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn powi(&self, e: u32) -> Self {
        (0..e).fold(BigReal::from_int(1, self.prec), |acc, _| &acc * self)
    }

    pub fn to_f64(&self) -> f64 {
        let shift = Self::frac_bits(self.prec) as i32;
        let bits = self.mant.bits() as i32;
        if bits <= 1000 {
            self.mant.to_f64().unwrap_or(0.0) * 2f64.powi(-shift)
        } else {
            let drop = bits - 60;
            (&self.mant >> drop as u32).to_f64().unwrap_or(0.0) * 2f64.powi(drop - shift)
        }
    }

    /// Approximate `log2 |x|`; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.mant.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits() as i64;
        let top = if bits > 60 {
            &self.mant.abs() >> (bits - 60) as u32
        } else {
            self.mant.abs()
        };
        let shift = if bits > 60 { bits - 60 } else { 0 };
        top.to_f64().unwrap().log2() + shift as f64 - Self::frac_bits(self.prec) as f64
    }

    /// `|x| < 2^e`.
    pub fn abs_below_pow2(&self, e: i64) -> bool {
        let fb = Self::frac_bits(self.prec) as i64;
        let threshold = e + fb;
        if threshold <= 0 {
            return self.mant.is_zero();
        }
        self.mant.abs() < (BigInt::one() << threshold as u32)
    }

    /// Truncated decimal expansion with `digits` places after the point.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scaled = &self.mant.abs() * BigInt::from(10u32).pow(digits);
        let q = scaled >> Self::frac_bits(self.prec);
        let s = q.to_string();
        let s = format!("{:0>width$}", s, width = digits as usize + 1);
        let (int_part, frac_part) = s.split_at(s.len() - digits as usize);
        let sign = if self.mant.is_negative() { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (self.prec == other.prec).then(|| self.mant.cmp(&other.mant))
    }
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    if (&r << 1u32).abs() >= b.abs() {
        if b.is_negative() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

fn check(a: &BigReal, b: &BigReal) {
    assert_eq!(a.prec, b.prec, "BigReal precision mismatch");
}

impl<'a> Add<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn add(self, rhs: &BigReal) -> BigReal {
        check(self, rhs);
        BigReal {
            mant: &self.mant + &rhs.mant,
            prec: self.prec,
        }
    }
}

impl<'a> Sub<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn sub(self, rhs: &BigReal) -> BigReal {
        check(self, rhs);
        BigReal {
            mant: &self.mant - &rhs.mant,
            prec: self.prec,
        }
    }
}

impl<'a> Mul<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn mul(self, rhs: &BigReal) -> BigReal {
        check(self, rhs);
        let prod = &self.mant * &rhs.mant;
        let fb = BigReal::frac_bits(self.prec);
        BigReal {
            mant: div_round(&prod, &(BigInt::one() << fb)),
            prec: self.prec,
        }
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal {
            mant: -&self.mant,
            prec: self.prec,
        }
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(self.guaranteed_digits()))
    }
}

/// A pair of [`BigReal`]s at a common precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn to_prec(&self, prec: u32) -> Self {
        BigComplex {
            re: self.re.to_prec(prec),
            im: self.im.to_prec(prec),
        }
    }

    pub fn new(re: BigReal, im: BigReal) -> Self {
        check(&re, &im);
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex {
            re: BigReal::zero(prec),
            im: BigReal::zero(prec),
        }
    }

    pub fn from_real(re: BigReal) -> Self {
        let prec = re.prec();
        BigComplex {
            re,
            im: BigReal::zero(prec),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    /// Multiplication by `i^e`.
    pub fn mul_i_pow(&self, e: i64) -> Self {
        match e.rem_euclid(4) {
            0 => self.clone(),
            1 => BigComplex {
                re: -&self.im,
                im: self.re.clone(),
            },
            2 => BigComplex {
                re: -&self.re,
                im: -&self.im,
            },
            _ => BigComplex {
                re: self.im.clone(),
                im: -&self.re,
            },
        }
    }

    pub fn scale(&self, r: &BigReal) -> Self {
        BigComplex {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        BigComplex {
            re: self.re.mul_rational(r),
            im: self.im.mul_rational(r),
        }
    }

    /// Sup norm `max(|re|, |im|)`.
    pub fn sup_norm(&self) -> BigReal {
        let (a, b) = (self.re.abs(), self.im.abs());
        if a >= b {
            a
        } else {
            b
        }
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        BigComplex {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        BigComplex {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        BigComplex {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.re.guaranteed_digits();
        let im = self.im.to_decimal(d);
        if let Some(stripped) = im.strip_prefix('-') {
            write!(f, "{} - {}i", self.re.to_decimal(d), stripped)
        } else {
            write!(f, "{} + {}i", self.re.to_decimal(d), im)
        }
    }
}

/// `atan(1/n)` by its alternating Taylor series.
fn atan_inv(n: u64, prec: u32) -> BigReal {
    let fb = BigReal::frac_bits(prec);
    let n = BigInt::from(n);
    let n2 = &n * &n;
    let mut term = (BigInt::one() << fb) / &n;
    let mut sum = BigInt::zero();
    let mut j = 0u64;
    while !term.is_zero() {
        let t = &term / BigInt::from(2 * j + 1);
        if j % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
        term /= &n2;
        j += 1;
    }
    BigReal::from_mant(sum, prec)
}

/// `pi = 16 atan(1/5) - 4 atan(1/239)`, memoized per precision.
pub fn pi(prec: u32) -> BigReal {
    static CACHE: OnceLock<RwLock<HashMap<u32, BigReal>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.read().unwrap_or_else(|e| e.into_inner()).get(&prec) {
        return v.clone();
    }
    let a = atan_inv(5, prec).mul_int(16);
    let b = atan_inv(239, prec).mul_int(4);
    let v = &a - &b;
    cache
        .write()
        .unwrap_or_else(|e| e.into_inner())
        .entry(prec)
        .or_insert(v)
        .clone()
}

/// `(cos x, sin x)` for `0 <= x <= pi/4` by Taylor series.
fn cos_sin_small(x: &BigReal) -> (BigReal, BigReal) {
    let prec = x.prec();
    let x2 = x.square();
    let mut cos = BigReal::from_int(1, prec);
    let mut sin = x.clone();
    let mut term_c = BigReal::from_int(1, prec);
    let mut term_s = x.clone();
    let mut j = 1u64;
    loop {
        term_c = (&term_c * &x2).div_int(BigInt::from((2 * j - 1) * (2 * j)));
        term_s = (&term_s * &x2).div_int(BigInt::from((2 * j) * (2 * j + 1)));
        if term_c.is_zero() && term_s.is_zero() {
            break;
        }
        if j % 2 == 1 {
            cos = &cos - &term_c;
            sin = &sin - &term_s;
        } else {
            cos = &cos + &term_c;
            sin = &sin + &term_s;
        }
        j += 1;
    }
    (cos, sin)
}

/// `(cos 2 pi r, sin 2 pi r)` for rational `r`, reduced exactly to the first octant.
pub fn cos_sin_2pi(r: &Rational, prec: u32) -> (BigReal, BigReal) {
    let frac = r - r.floor();
    let quarter = Rational::new(BigInt::one(), BigInt::from(4));
    let eighth = Rational::new(BigInt::one(), BigInt::from(8));
    let quad = (&frac / &quarter).floor().to_integer().to_u8().unwrap_or(0) % 4;
    let s = &frac - &quarter * Rational::from_integer(BigInt::from(quad));
    let two_pi = pi(prec).mul_int(2);
    let (c, sn) = if s <= eighth {
        cos_sin_small(&two_pi.mul_rational(&s))
    } else {
        let (c, sn) = cos_sin_small(&two_pi.mul_rational(&(&quarter - &s)));
        (sn, c)
    };
    match quad {
        0 => (c, sn),
        1 => (-&sn, c),
        2 => (-&c, -&sn),
        _ => (sn, -&c),
    }
}

/// `e^{2 pi i r}`.
pub fn root_of_unity(r: &Rational, prec: u32) -> BigComplex {
    let (c, s) = cos_sin_2pi(r, prec);
    BigComplex::new(c, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    const PI_50: &str = "3.14159265358979323846264338327950288419716939937510";

    #[test]
    fn pi_digits() {
        assert_eq!(pi(256).to_decimal(50), PI_50);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(
            BigReal::from_rational(&rat(7, 2), 64).to_decimal(3),
            "3.500"
        );
        assert_eq!(
            BigReal::from_rational(&rat(-1, 8), 64).to_decimal(4),
            "-0.1250"
        );
        assert_eq!(BigReal::from_int(12, 64).to_decimal(0), "12");
    }

    #[test]
    fn trig_at_special_angles() {
        let prec = 200;
        let tol = -(prec as i64) + GUARD_BITS as i64;
        let (c, s) = cos_sin_2pi(&rat(1, 6), prec);
        assert!((&c - &BigReal::from_rational(&rat(1, 2), prec)).abs_below_pow2(tol));
        let s2 = &s * &s;
        assert!((&s2 - &BigReal::from_rational(&rat(3, 4), prec)).abs_below_pow2(tol));
        for r in [rat(3, 8), rat(5, 7), rat(-2, 9), rat(13, 4)] {
            let (c, s) = cos_sin_2pi(&r, prec);
            let one = &(&c * &c) + &(&s * &s);
            assert!(
                (&one - &BigReal::from_int(1, prec)).abs_below_pow2(tol),
                "r = {r}"
            );
            let f = (2.0 * std::f64::consts::PI * crate::exact::to_f64(&r)).cos();
            assert!((c.to_f64() - f).abs() < 1e-12);
        }
        let (c, s) = cos_sin_2pi(&rat(3, 4), prec);
        assert!(c.abs_below_pow2(tol));
        assert_eq!(s.to_decimal(10), "-1.0000000000");
    }

    #[test]
    fn bounds_and_digits() {
        let x = BigReal::from_rational(&rat(1, 1024), 128);
        assert!(x.abs_below_pow2(-9));
        assert!(!x.abs_below_pow2(-10));
        assert_eq!(BigReal::zero(256).guaranteed_digits(), 67);
        assert!((x.log2_abs() + 10.0).abs() < 1e-9);
    }
}
