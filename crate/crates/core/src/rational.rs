//! Exact rationals, dense univariate polynomials over `Q`, truncated power
//! series, and the `[num, den]` JSON encoding used on every output surface.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(n.into())
}

fn big_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

/// `[num, den]`.
pub fn to_pair(x: &Rational) -> Value {
    json!([big_to_json(x.numer()), big_to_json(x.denom())])
}

/// Bare integer when integral, `[num, den]` otherwise.
pub fn to_compact(x: &Rational) -> Value {
    if x.is_integer() {
        big_to_json(x.numer())
    } else {
        to_pair(x)
    }
}

pub fn small_to_compact(x: &Ratio<i64>) -> Value {
    if x.is_integer() {
        json!(x.numer())
    } else {
        json!([x.numer(), x.denom()])
    }
}

pub fn int_to_json(x: &BigInt) -> Value {
    big_to_json(x)
}

fn big_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::InvalidLiteral(n.to_string())),
        Value::String(s) => s.parse().map_err(|_| Error::InvalidLiteral(s.clone())),
        other => Err(Error::InvalidLiteral(other.to_string())),
    }
}

/// Accepts `[num, den]`, a bare integer, or a string `"n"` / `"n/d"`.
pub fn from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::Array(items) if items.len() == 2 => {
            let n = big_from_json(&items[0])?;
            let d = big_from_json(&items[1])?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(n, d))
        }
        Value::String(s) => parse(s),
        Value::Number(_) => Ok(BigRational::from_integer(big_from_json(v)?)),
        other => Err(Error::InvalidLiteral(other.to_string())),
    }
}

pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidLiteral(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Converts an integral rational to `BigInt`.
pub fn to_integer(x: &Rational) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

// ---- Q[t] ------------------------------------------------------------------

pub fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
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
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut b = b.to_vec();
    trim(&mut b);
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut q = vec![Rational::zero(); r.len().saturating_sub(db).max(1)];
    while r.len() > db {
        let k = r.len() - 1;
        let c = &r[k] / &lead;
        for (i, bi) in b.iter().enumerate() {
            r[k - db + i] -= &c * bi;
        }
        q[k - db] = c;
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn poly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = r;
    }
    x
}

/// Rescales so that the constant term is 1. Requires a nonzero constant term.
pub fn normalize_constant(p: &[Rational]) -> Vec<Rational> {
    let c = p[0].clone();
    p.iter().map(|x| x / &c).collect()
}

// ---- truncated power series ------------------------------------------------

/// `1 / s mod t^len`; requires `s[0] != 0`.
pub fn series_inv(s: &[Rational], len: usize) -> Vec<Rational> {
    let c0_inv = s[0].recip();
    let mut out = vec![Rational::zero(); len];
    if len == 0 {
        return out;
    }
    out[0] = c0_inv.clone();
    for k in 1..len {
        let mut acc = Rational::zero();
        for j in 1..=k.min(s.len() - 1) {
            acc += &s[j] * &out[k - j];
        }
        out[k] = -acc * &c0_inv;
    }
    out
}

pub fn series_mul(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `exp(sum_{s>=1} a_s t^s / s) mod t^{len}`, where `a[s-1] = a_s`.
///
/// Uses `m z_m = sum_{k=1}^{m} a_k z_{m-k}`, obtained by differentiating.
pub fn exp_of_power_sums(a: &[Rational], len: usize) -> Vec<Rational> {
    let mut z = vec![Rational::zero(); len];
    if len == 0 {
        return z;
    }
    z[0] = Rational::one();
    for m in 1..len {
        let mut acc = Rational::zero();
        for k in 1..=m.min(a.len()) {
            acc += &a[k - 1] * &z[m - k];
        }
        z[m] = acc / int(m as i64);
    }
    z
}

/// Power sums `p(1..=count)` of the inverse roots of `P = prod (1 - a t)`
/// with `P(0) = 1`, via Newton's identities:
/// `p(s) = -s c_s - sum_{k=1}^{s-1} c_k p(s-k)`.
pub fn inverse_root_power_sums(p: &[Rational], count: usize) -> Vec<Rational> {
    let coeff = |k: usize| p.get(k).cloned().unwrap_or_else(Rational::zero);
    let mut out: Vec<Rational> = Vec::with_capacity(count);
    for s in 1..=count {
        let mut acc = -coeff(s) * int(s as i64);
        for k in 1..s {
            acc -= coeff(k) * &out[s - k - 1];
        }
        out.push(acc);
    }
    out
}

pub fn is_nonnegative_integer(x: &Rational) -> bool {
    x.is_integer() && !x.is_negative()
}
