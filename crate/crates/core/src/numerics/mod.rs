//! High-precision evaluation of the analytic side: Hurwitz zeta, Dirichlet
//! L-values, cotangent derivatives, and residuals of the identities linking
//! them to the exact cyclotomic values.
//!
//! Every routine takes its precision explicitly. Internally it works with a
//! few dozen extra bits and rounds the result back, so the advertised bound
//! `2^(-prec + GUARD_BITS)` of the returned value holds with room to spare.

mod real;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

pub use real::{cos_sin_2pi, pi, root_of_unity, BigComplex, BigReal, GUARD_BITS};

use crate::characters::{full_unit_sum, l_coordinates, DirichletChar};
use crate::cotangent::{cotan_norm, derivative_poly};
use crate::cyclotomic::CycloElem;
use crate::error::{Error, Result};
use crate::exact::{bernoulli_numbers, factorial, gcd, int, Rational};

/// Extra working bits used inside composite evaluations.
const WORK_BITS: u32 = 64;

fn log2_rat(r: &Rational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    let top = |x: &BigInt| {
        let b = x.bits() as i64;
        let shift = (b - 60).max(0);
        (x.abs() >> shift as u32).to_f64().unwrap().log2() + shift as f64
    };
    top(r.numer()) - top(r.denom())
}

/// `Q(zeta_n) -> C` at `zeta_n = e^{2 pi i / n}`.
pub fn eval_cyclo(x: &CycloElem, bits: u32) -> BigComplex {
    let n = x.n();
    let mass: f64 = x.coeffs().iter().map(|c| log2_rat(c).exp2()).sum();
    let extra = if mass > 1.0 {
        mass.log2().ceil() as u32
    } else {
        0
    } + 16;
    let w = bits + extra;
    let mut acc = BigComplex::zero(w);
    for (j, c) in x.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let z = root_of_unity(&Rational::new(BigInt::from(j), BigInt::from(n)), w);
        acc = &acc + &z.scale_rational(c);
    }
    acc.to_prec(bits)
}

/// Number of Bernoulli tail terms at a given precision (never fewer than `B_2..B_30`).
fn tail_terms(prec: u32) -> usize {
    15.max(prec as usize / 8)
}

/// `log2` of the first omitted Euler-Maclaurin term at cut-off `N`.
fn omitted_term_log2(k: u32, y: f64, j: usize, bern: &Rational, fact: &Rational) -> f64 {
    // |B_2j / (2j)!| * (k)_{2j-1} * y^{-k-2j+1}
    let rising: f64 = (0..2 * j - 1)
        .map(|i| ((k as usize + i) as f64).log2())
        .sum();
    log2_rat(bern) - log2_rat(fact) + rising - (k as f64 + 2.0 * j as f64 - 1.0) * y.log2()
}

/// `zeta(k, x) = sum_{n >= 0} (n + x)^{-k}` for `k >= 2`, `0 < x <= 1`.
///
/// Euler-Maclaurin: `N` direct terms, then the integral, the half term, and
/// `M` Bernoulli corrections. `N` starts near `0.7 * prec` and grows until
/// twice the first omitted correction is below `2^(-prec - GUARD_BITS)`;
/// every term is an exact rational rounded once.
pub fn hurwitz_zeta(k: u32, x: &Rational, prec: u32) -> Result<BigReal> {
    if k < 2 {
        return Err(Error::Domain(format!("hurwitz_zeta needs k >= 2, got {k}")));
    }
    if !x.is_positive() || *x > int(1) {
        return Err(Error::Domain(format!(
            "hurwitz_zeta needs 0 < x <= 1, got {x}"
        )));
    }
    let m = tail_terms(prec);
    let bern = bernoulli_numbers(2 * m + 2);
    let next_fact = Rational::from_integer(factorial(2 * m as u64 + 2));
    let target = -(prec as f64) - GUARD_BITS as f64 - 1.0;
    let xf = crate::exact::to_f64(x);
    let mut n = (0.7 * prec as f64).ceil() as u64;
    while omitted_term_log2(k, n as f64 + xf, m + 1, &bern[2 * m + 2], &next_fact) >= target {
        n += n / 2 + 1;
    }

    let w = prec + WORK_BITS;
    let mut sum = BigReal::zero(w);
    let kk = k as i32;
    for i in 0..n {
        let t = (x + int(i as i64)).pow(-kk);
        sum = &sum + &BigReal::from_rational(&t, w);
    }
    let y = x + int(n as i64);
    let y_inv = y.recip();
    let y_pow_k = y_inv.pow(kk);
    sum = &sum + &BigReal::from_rational(&(&y_pow_k * &y / int(k as i64 - 1)), w);
    sum = &sum + &BigReal::from_rational(&(&y_pow_k / int(2)), w);
    // Running factor (k)_{2j-1} y^{-k-2j+1} / (2j)!.
    let mut factor = &y_pow_k * &y_inv * int(k as i64) / int(2);
    let y_inv2 = &y_inv * &y_inv;
    for j in 1..=m {
        let term = &bern[2 * j] * &factor;
        sum = &sum + &BigReal::from_rational(&term, w);
        let kj = k as i64 + 2 * j as i64;
        factor = factor * &y_inv2 * int((kj - 1) * kj) / int(((2 * j + 1) * (2 * j + 2)) as i64);
    }
    Ok(sum.to_prec(prec))
}

/// `zeta(k)` from its exact normalization `zeta(k) = (i pi)^k zeta_norm(k)`, even `k`.
pub fn zeta_even(k: u32, prec: u32) -> Result<BigReal> {
    let norm = crate::exact::zeta_norm(k)?;
    let w = prec + WORK_BITS;
    let sign = if (k / 2) % 2 == 0 { int(1) } else { int(-1) };
    Ok(pi(w).powi(k).mul_rational(&(norm * sign)).to_prec(prec))
}

/// `L(k, chi) = q^{-k} sum_{a=1}^{q} chi(a) zeta(k, a/q)` for `k >= 2`.
pub fn dirichlet_l(k: u32, chi: &DirichletChar, prec: u32) -> Result<BigComplex> {
    let q = chi.q();
    let w = prec + WORK_BITS;
    let mut acc = BigComplex::zero(w);
    for a in 1..=q {
        let Some((s, o)) = chi.value_at(a as i64) else {
            continue;
        };
        let z = hurwitz_zeta(k, &Rational::new(BigInt::from(a), BigInt::from(q)), w)?;
        let v = root_of_unity(&Rational::new(BigInt::from(s), BigInt::from(o)), w);
        acc = &acc + &v.scale(&z);
    }
    let scale = Rational::new(BigInt::one(), BigInt::from(q).pow(k));
    Ok(acc.scale_rational(&scale).to_prec(prec))
}

/// `cot(pi a / q)` by `cos / sin`.
pub fn cot_pi(a: i64, q: u64, prec: u32) -> Result<BigReal> {
    let r = Rational::new(BigInt::from(a), BigInt::from(2 * q));
    if (Rational::new(BigInt::from(a), BigInt::from(q))).is_integer() {
        return Err(Error::Domain(format!("cot(pi {a}/{q}) is a pole")));
    }
    let w = prec + WORK_BITS;
    let (c, s) = cos_sin_2pi(&r, w);
    Ok(c.div(&s).to_prec(prec))
}

/// `cot^{(k-1)}(pi a / q) = D_k(cot(pi a / q))`.
pub fn cot_derivative_numeric(k: u32, a: i64, q: u64, prec: u32) -> Result<BigReal> {
    if k == 0 {
        return Err(Error::Domain(
            "derivative index k must be at least 1".into(),
        ));
    }
    if gcd(a.unsigned_abs() % q, q) != 1 {
        return Err(Error::NotCoprime {
            value: a,
            modulus: q,
        });
    }
    let d = derivative_poly(k);
    // Coefficients of D_k grow like (k-1)!, and |cot| <= q; budget for both.
    let w = prec + WORK_BITS + k * (64 - q.leading_zeros());
    let c = cot_pi(a, q, w)?;
    let v = d.coeffs().iter().rev().fold(BigReal::zero(w), |acc, coef| {
        &(&acc * &c) + &BigReal::from_int(coef.clone(), w)
    });
    Ok(v.to_prec(prec))
}

/// Catalan's constant `sum_n (-1)^n / (2n + 1)^2`, by the Cohen-Villegas-Zagier
/// acceleration of alternating series. Every weight is an exact rational:
/// `d_n = ((3 + sqrt 8)^n + (3 - sqrt 8)^n) / 2` obeys `d_n = 6 d_{n-1} - d_{n-2}`.
/// Independent of the Hurwitz route, so it serves as an oracle for `L(2, chi_4)`.
pub fn catalan(prec: u32) -> BigReal {
    let w = prec + WORK_BITS;
    // The error is below 2 / 5.828^n.
    let n = ((w + GUARD_BITS) as f64 / 5.828f64.log2()).ceil() as i64 + 1;
    let (mut d0, mut d1) = (BigInt::one(), BigInt::from(3));
    for _ in 1..n {
        let d2 = &d1 * 6 - &d0;
        d0 = std::mem::replace(&mut d1, d2);
    }
    let d = if n == 0 { d0 } else { d1 };
    let mut b = Rational::from_integer(BigInt::from(-1));
    let mut c = -Rational::from_integer(d.clone());
    let mut s = BigReal::zero(w);
    for k in 0..n {
        c = &b - &c;
        let a = Rational::new(BigInt::one(), BigInt::from((2 * k + 1) * (2 * k + 1)));
        s = &s + &BigReal::from_rational(&(&c * a), w);
        b = b * Rational::new(
            BigInt::from(2 * (k + n) * (k - n)),
            BigInt::from((2 * k + 1) * (k + 1)),
        );
    }
    s.div_int(d).to_prec(prec)
}

/// Which bridging identity a residual measures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BridgeKind {
    /// `zeta(k, a/q) + (-1)^k zeta(k, 1 - a/q)` against
    /// `pi^k (-1)^{k-1} / (k-1)! * cot^{(k-1)}(pi a / q)`.
    Reflection { k: u32, a: u64, q: u64 },
    /// `numeric_eval(C_k(a, q))` against `i^k cot^{(k-1)}(pi a / q)`.
    Rep { k: u32, a: u64, q: u64 },
    /// `L(k, chi)` against the finite cotangent sum; `chi` is the index in the
    /// canonical enumeration mod `q`. For mismatched parity this measures the
    /// (exactly vanishing) full-unit sum instead.
    LValue { k: u32, q: u64, chi: usize },
}

impl BridgeKind {
    pub fn label(&self) -> String {
        match self {
            BridgeKind::Reflection { k, a, q } => format!("reflection(k={k},a={a},q={q})"),
            BridgeKind::Rep { k, a, q } => format!("rep(k={k},a={a},q={q})"),
            BridgeKind::LValue { k, q, chi } => format!("l-value(k={k},q={q},chi={chi})"),
        }
    }
}

/// `pi^k (-1)^{k-1} / (k-1)!`.
fn reflection_factor(k: u32, w: u32) -> BigReal {
    let f = Rational::new(
        BigInt::from(if k % 2 == 1 { 1 } else { -1 }),
        factorial(k as u64 - 1),
    );
    pi(w).powi(k).mul_rational(&f)
}

/// `|left - right|` (sup norm for complex values) of one bridging identity.
/// Returned at the internal working precision so tiny residuals stay visible.
pub fn bridge_residual(kind: &BridgeKind, prec: u32) -> Result<BigReal> {
    let w = prec + WORK_BITS;
    let res = match *kind {
        BridgeKind::Reflection { k, a, q } => {
            let x = Rational::new(BigInt::from(a), BigInt::from(q));
            let z1 = hurwitz_zeta(k, &x, w)?;
            let z2 = hurwitz_zeta(k, &(int(1) - &x), w)?;
            let left = if k % 2 == 0 { &z1 + &z2 } else { &z1 - &z2 };
            let right = &reflection_factor(k, w) * &cot_derivative_numeric(k, a as i64, q, w)?;
            (&left - &right).abs()
        }
        BridgeKind::Rep { k, a, q } => {
            let exact = cotan_norm(k, a as i64, q)?.value.numeric_eval(w);
            let cot = cot_derivative_numeric(k, a as i64, q, w)?;
            let expected = BigComplex::from_real(cot).mul_i_pow(k as i64);
            (&exact - &expected).sup_norm()
        }
        BridgeKind::LValue { k, q, chi } => {
            let chars = crate::characters::all_characters(q);
            let chi = chars.get(chi).ok_or_else(|| {
                Error::Domain(format!("character index {chi} out of range for q = {q}"))
            })?;
            let parity_matches = chi.is_even() == (k % 2 == 0);
            if !parity_matches {
                full_unit_sum(k, chi)?.numeric_eval(w).sup_norm()
            } else {
                let left = dirichlet_l(k, chi, w)?;
                let right = l_value_from_coordinates(k, chi, w)?;
                (&left - &right).sup_norm()
            }
        }
    };
    Ok(res)
}

/// `pi^k (-1)^{k-1} / (q^k (k-1)!) * (-i)^k * Lambda(k, chi)`, for matching parity.
pub fn l_value_from_coordinates(k: u32, chi: &DirichletChar, prec: u32) -> Result<BigComplex> {
    let w = prec + WORK_BITS;
    let lam = l_coordinates(k, chi)?.numeric_eval(w);
    let scale = reflection_factor(k, w)
        .mul_rational(&Rational::new(BigInt::one(), BigInt::from(chi.q()).pow(k)));
    Ok(lam.mul_i_pow(-(k as i64)).scale(&scale).to_prec(prec))
}

/// Every residual of the bridge suite over `q <= max_q`, `k <= max_k`.
pub fn bridge_cases(max_q: u64, max_k: u32) -> Vec<BridgeKind> {
    let mut out = Vec::new();
    for q in 3..=max_q {
        for k in 1..=max_k {
            for a in 1..q {
                if gcd(a, q) != 1 {
                    continue;
                }
                out.push(BridgeKind::Rep { k, a, q });
                if k >= 2 {
                    out.push(BridgeKind::Reflection { k, a, q });
                }
            }
            if k >= 2 {
                let n = crate::exact::euler_phi(q) as usize;
                out.extend((0..n).map(|chi| BridgeKind::LValue { k, q, chi }));
            }
        }
    }
    out
}
