//! Fixed-precision p-adic integers `Z/p^M`, exact valuations of rationals and
//! Teichmüller lifts.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Valuation of a truncated p-adic integer: exact, or only known to be `>= M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PadicValuation {
    Exact(u32),
    AtLeast(u32),
}

/// A residue modulo `p^precision`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicInt {
    p: u64,
    precision: u32,
    modulus: u64,
    value: u64,
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.value, self.p, self.precision)
    }
}

/// `p^precision`, refusing anything that does not fit in 63 bits.
pub fn modulus_for(p: u64, precision: u32) -> Result<u64> {
    (p as u128)
        .checked_pow(precision)
        .filter(|&m| m < (1u128 << 63))
        .map(|m| m as u64)
        .ok_or(Error::PrecisionTooLarge { p, precision })
}

fn mulmod(x: u64, y: u64, m: u64) -> u64 {
    ((x as u128 * y as u128) % m as u128) as u64
}

impl PadicInt {
    pub fn new(p: u64, precision: u32, value: i128) -> Result<PadicInt> {
        if !crate::ffield::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let modulus = modulus_for(p, precision)?;
        Ok(PadicInt {
            p,
            precision,
            modulus,
            value: value.rem_euclid(modulus as i128) as u64,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn valuation(&self) -> PadicValuation {
        if self.value == 0 {
            return PadicValuation::AtLeast(self.precision);
        }
        let mut v = 0;
        let mut x = self.value;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        PadicValuation::Exact(v)
    }

    fn with_value(&self, value: u64) -> PadicInt {
        PadicInt { value, ..*self }
    }

    fn compatible(&self, other: &PadicInt) -> Result<()> {
        if self.p == other.p && self.precision == other.precision {
            Ok(())
        } else {
            Err(Error::PrecisionMismatch)
        }
    }

    pub fn add(&self, other: &PadicInt) -> Result<PadicInt> {
        self.compatible(other)?;
        let s = (self.value as u128 + other.value as u128) % self.modulus as u128;
        Ok(self.with_value(s as u64))
    }

    pub fn sub(&self, other: &PadicInt) -> Result<PadicInt> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PadicInt {
        self.with_value((self.modulus - self.value) % self.modulus)
    }

    pub fn mul(&self, other: &PadicInt) -> Result<PadicInt> {
        self.compatible(other)?;
        Ok(self.with_value(mulmod(self.value, other.value, self.modulus)))
    }

    pub fn pow(&self, mut e: u128) -> PadicInt {
        let m = self.modulus;
        let mut acc = 1 % m;
        let mut b = self.value;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b, m);
            }
            b = mulmod(b, b, m);
            e >>= 1;
        }
        self.with_value(acc)
    }
}

/// Operation selector mirroring [`crate::ffield::ArithOp`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PadicOp {
    Add,
    Mul,
    Pow(u128),
}

pub fn padic_arith(op: PadicOp, x: &PadicInt, y: Option<&PadicInt>) -> Result<PadicInt> {
    match (op, y) {
        (PadicOp::Add, Some(y)) => x.add(y),
        (PadicOp::Mul, Some(y)) => x.mul(y),
        (PadicOp::Pow(e), _) => Ok(x.pow(e)),
        _ => Err(Error::InvalidLiteral("missing second operand".into())),
    }
}

/// `ord_p` of a nonzero integer.
pub fn valuation_int(x: &BigInt, p: u64) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let p = BigInt::from(p);
    let mut v = 0;
    let mut x = x.abs();
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Ok(v);
        }
        x = q;
        v += 1;
    }
}

/// `ord_p` of a nonzero rational; negative when `p` divides the denominator.
pub fn valuation(x: &BigRational, p: u64) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(valuation_int(x.numer(), p)? - valuation_int(x.denom(), p)?)
}

/// The Teichmüller representative of `residue` modulo `p^precision`: iterate
/// `x -> x^p` from the residue until the value is fixed.
pub fn teichmuller(p: u64, residue: u64, precision: u32) -> Result<PadicInt> {
    let mut x = PadicInt::new(p, precision, (residue % p) as i128)?;
    // each step gains at least one digit of agreement
    for _ in 0..=precision {
        let next = x.pow(p as u128);
        if next == x {
            return Ok(x);
        }
        x = next;
    }
    debug_assert_eq!(x.pow(p as u128), x);
    Ok(x)
}
