//! Finite fields `F_{p^a}` modelled as `F_p[u]/(m(u))`.
//!
//! Elements are dense coefficient vectors `[c0, c1, ..., c_{a-1}]` in the basis
//! `1, u, ..., u^{a-1}`. The modulus of [`FieldDesc::new`] is the smallest monic
//! irreducible polynomial of degree `a`, where polynomials and elements are
//! both ordered by the integer `c0 + c1 p + ... + c_{a-1} p^{a-1}`. That same
//! integer is the element's position in [`FieldDesc::enumerate`].

use std::fmt;
use std::sync::Arc;

use serde_json::Value;

use crate::error::{Error, Result};

/// Largest field cardinality that may be constructed or enumerated.
pub const ENUMERATION_BUDGET: u64 = 1 << 40;

/// Characteristics must stay below this bound so that products fit in `u64`.
pub const MAX_CHARACTERISTIC: u64 = 1 << 31;

// p >= 2 and p^a <= 2^40 force a <= 40.
const MAX_DEGREE: usize = 40;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

struct FieldData {
    p: u64,
    a: usize,
    q: u64,
    /// Monic, ascending coefficients, length `a + 1`.
    modulus: Vec<u64>,
}

/// Description of a finite field. Cheap to clone.
#[derive(Clone)]
pub struct FieldDesc(Arc<FieldData>);

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldDesc {}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)?;
        if self.0.a > 1 {
            write!(f, "[u]/({})", format_poly(&self.0.modulus, "u"))?;
        }
        Ok(())
    }
}

/// Deterministic construction of `F_{p^a}`.
pub fn make_field(p: u64, a: usize) -> Result<FieldDesc> {
    FieldDesc::new(p, a)
}

impl FieldDesc {
    pub fn new(p: u64, a: usize) -> Result<FieldDesc> {
        check_characteristic(p)?;
        let q = checked_cardinality(p, a)?;
        let modulus = if a == 1 { vec![0, 1] } else { smallest_irreducible(p, a) };
        Ok(FieldDesc(Arc::new(FieldData { p, a, q, modulus })))
    }

    /// Builds `F_p[u]/(modulus)` for a caller-chosen modulus (ascending, monic).
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<FieldDesc> {
        check_characteristic(p)?;
        let mut m: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        poly::trim(&mut m);
        if m.len() < 2 || *m.last().unwrap() != 1 {
            return Err(Error::InvalidLiteral("modulus must be monic of degree >= 1".into()));
        }
        let a = m.len() - 1;
        let q = checked_cardinality(p, a)?;
        if !poly::is_irreducible(&m, p) {
            return Err(Error::InvalidLiteral(format!(
                "{} is reducible over F_{p}",
                format_poly(&m, "u")
            )));
        }
        Ok(FieldDesc(Arc::new(FieldData { p, a, q, modulus: m })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    /// Extension degree `a` over the prime field.
    pub fn degree(&self) -> usize {
        self.0.a
    }

    pub fn cardinality(&self) -> u64 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.a == 1
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            coeffs: vec![0; self.0.a],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// Image of an integer under `Z -> F_p -> F`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = n.rem_euclid(self.0.p as i64) as u64;
        e
    }

    /// The class of `u`. For the prime field this is the residue 0 (root of `x`).
    pub fn generator(&self) -> FieldElement {
        let mut e = self.zero();
        if self.0.a > 1 {
            e.coeffs[1] = 1;
        }
        e
    }

    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() != self.0.a {
            return Err(Error::InvalidLiteral(format!(
                "expected {} coordinates, got {}",
                self.0.a,
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= self.0.p) {
            return Err(Error::InvalidLiteral(format!(
                "coordinate {c} is not a residue mod {}",
                self.0.p
            )));
        }
        Ok(FieldElement {
            field: self.clone(),
            coeffs: coeffs.to_vec(),
        })
    }

    /// Element at position `index` of [`FieldDesc::enumerate`].
    pub fn element_at(&self, index: u64) -> FieldElement {
        let mut e = self.zero();
        self.decode_into(index, &mut e.coeffs);
        e
    }

    pub fn index_of(&self, x: &FieldElement) -> u64 {
        x.coeffs.iter().rev().fold(0u64, |acc, &c| acc * self.0.p + c)
    }

    /// All `q` elements in coefficient-lexicographic order (constant coordinate
    /// varies fastest), starting with 0 and 1.
    pub fn enumerate(&self) -> Result<Vec<FieldElement>> {
        self.enumerate_within(ENUMERATION_BUDGET)
    }

    pub fn enumerate_within(&self, budget: u64) -> Result<Vec<FieldElement>> {
        if self.0.q > budget {
            return Err(Error::BudgetExceeded {
                what: "field enumeration",
                needed: self.0.q as u128,
                budget: budget as u128,
            });
        }
        Ok((0..self.0.q).map(|i| self.element_at(i)).collect())
    }

    /// `sum_{t in F} t^m`, computed by enumeration. For `m = 0` this is `q * 1 = 0`.
    pub fn power_sum(&self, m: u64) -> Result<FieldElement> {
        let mut acc = self.zero();
        for t in self.enumerate()? {
            acc = acc.add(&t.pow(m as u128))?;
        }
        Ok(acc)
    }

    /// Parses a field literal: `[c0,...,c_{a-1}]`, or a bare integer (reduced
    /// into the prime field).
    pub fn parse_literal(&self, s: &str) -> Result<FieldElement> {
        let v: Value = serde_json::from_str(s.trim()).map_err(|e| Error::InvalidLiteral(format!("{s}: {e}")))?;
        self.element_from_json(&v)
    }

    pub fn element_from_json(&self, v: &Value) -> Result<FieldElement> {
        match v {
            Value::Number(n) => n
                .as_i64()
                .map(|n| self.from_int(n))
                .ok_or_else(|| Error::InvalidLiteral(n.to_string())),
            Value::Array(items) => {
                let coeffs = items
                    .iter()
                    .map(|c| {
                        c.as_i64()
                            .map(|c| c.rem_euclid(self.0.p as i64) as u64)
                            .ok_or_else(|| Error::InvalidLiteral(c.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                self.element(&coeffs)
            }
            other => Err(Error::InvalidLiteral(other.to_string())),
        }
    }

    // ---- slice kernels used by the counting loops -------------------------

    pub(crate) fn decode_into(&self, mut index: u64, out: &mut [u64]) {
        for c in out.iter_mut() {
            *c = index % self.0.p;
            index /= self.0.p;
        }
    }

    pub(crate) fn add_into(&self, x: &[u64], y: &[u64], out: &mut [u64]) {
        let p = self.0.p;
        for ((o, &a), &b) in out.iter_mut().zip(x).zip(y) {
            let s = a + b;
            *o = if s >= p { s - p } else { s };
        }
    }

    pub(crate) fn mul_into(&self, x: &[u64], y: &[u64], out: &mut [u64]) {
        let p = self.0.p;
        let a = self.0.a;
        if a == 1 {
            out[0] = x[0] * y[0] % p;
            return;
        }
        let mut buf = [0u64; 2 * MAX_DEGREE];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                buf[i + j] = (buf[i + j] + xi * yj % p) % p;
            }
        }
        let m = &self.0.modulus;
        for k in (a..2 * a - 1).rev() {
            let c = buf[k];
            if c == 0 {
                continue;
            }
            buf[k] = 0;
            for i in 0..a {
                let t = c * m[i] % p;
                buf[k - a + i] = (buf[k - a + i] + p - t) % p;
            }
        }
        out.copy_from_slice(&buf[..a]);
    }
}

fn check_characteristic(p: u64) -> Result<()> {
    if p >= MAX_CHARACTERISTIC {
        return Err(Error::BudgetExceeded {
            what: "characteristic",
            needed: p as u128,
            budget: MAX_CHARACTERISTIC as u128,
        });
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

fn checked_cardinality(p: u64, a: usize) -> Result<u64> {
    if a == 0 {
        return Err(Error::InvalidLiteral("extension degree must be >= 1".into()));
    }
    let q = (p as u128).checked_pow(a as u32).unwrap_or(u128::MAX);
    if q > ENUMERATION_BUDGET as u128 {
        return Err(Error::BudgetExceeded {
            what: "field cardinality",
            needed: q,
            budget: ENUMERATION_BUDGET as u128,
        });
    }
    Ok(q as u64)
}

fn smallest_irreducible(p: u64, a: usize) -> Vec<u64> {
    let mut m = vec![0u64; a + 1];
    m[a] = 1;
    loop {
        if m[0] != 0 && poly::is_irreducible(&m, p) {
            return m;
        }
        // odometer over the lower coefficients, constant term fastest
        for c in m.iter_mut().take(a) {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
    }
}

fn format_poly(c: &[u64], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, &ci) in c.iter().enumerate().rev() {
        if ci == 0 {
            continue;
        }
        let mon = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(match (ci, i) {
            (_, 0) => ci.to_string(),
            (1, _) => mon,
            _ => format!("{ci}{mon}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// An element of a [`FieldDesc`].
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: FieldDesc,
    coeffs: Vec<u64>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_prime_field() {
            write!(f, "{}", self.coeffs[0])
        } else {
            let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Neg,
    Inv,
    Pow(u128),
}

/// Dispatches one field operation; `y` is required by the binary operations.
pub fn arith(op: ArithOp, x: &FieldElement, y: Option<&FieldElement>) -> Result<FieldElement> {
    let rhs = || y.ok_or_else(|| Error::InvalidLiteral("missing second operand".into()));
    match op {
        ArithOp::Add => x.add(rhs()?),
        ArithOp::Mul => x.mul(rhs()?),
        ArithOp::Neg => Ok(x.neg()),
        ArithOp::Inv => x.inv(),
        ArithOp::Pow(e) => Ok(x.pow(e)),
    }
}

impl FieldElement {
    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// `Some(c)` when the element lies in the prime field.
    pub fn as_prime_field(&self) -> Option<u64> {
        self.coeffs[1..].iter().all(|&c| c == 0).then_some(self.coeffs[0])
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        let mut out = self.field.zero();
        self.field.add_into(&self.coeffs, &other.coeffs, &mut out.coeffs);
        Ok(out)
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        let mut out = self.field.zero();
        self.field.mul_into(&self.coeffs, &other.coeffs, &mut out.coeffs);
        Ok(out)
    }

    pub fn neg(&self) -> FieldElement {
        let p = self.field.p();
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = (p - *c) % p;
        }
        out
    }

    /// Square-and-multiply. `x^0 = 1` for every `x`, including 0.
    pub fn pow(&self, mut e: u128) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field.one();
        let mut tmp = self.field.zero();
        while e > 0 {
            if e & 1 == 1 {
                self.field.mul_into(&acc.coeffs, &base.coeffs, &mut tmp.coeffs);
                std::mem::swap(&mut acc, &mut tmp);
            }
            e >>= 1;
            if e > 0 {
                self.field.mul_into(&base.coeffs, &base.coeffs, &mut tmp.coeffs);
                std::mem::swap(&mut base, &mut tmp);
            }
        }
        acc
    }

    /// Multiplicative inverse via `x^(q-2)`.
    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.field.cardinality() as u128 - 2))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.mul(&other.inv()?)
    }

    /// The absolute Frobenius `x -> x^p`.
    pub fn frobenius(&self) -> FieldElement {
        self.pow(self.field.p() as u128)
    }
}

/// An `F_p`-algebra map `F_{p^a} -> F_{p^{as}}` determined by the image of `u`.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    source: FieldDesc,
    target: FieldDesc,
    image_of_generator: FieldElement,
    // image_of_generator^i for i < source degree
    basis_images: Vec<FieldElement>,
}

/// The embedding sending `u` to the first root of the source modulus found in
/// enumeration order of the target.
pub fn embed(source: &FieldDesc, target: &FieldDesc) -> Result<FieldEmbedding> {
    if source.p() != target.p() || !target.degree().is_multiple_of(source.degree()) {
        return Err(Error::NoEmbedding {
            from: source.cardinality() as u128,
            to: target.cardinality() as u128,
        });
    }
    let image = if source.is_prime_field() {
        target.zero()
    } else {
        let m = source.modulus();
        let mut found = None;
        for i in 0..target.cardinality() {
            let x = target.element_at(i);
            let mut acc = target.zero();
            for &c in m.iter().rev() {
                acc = acc.mul(&x)?.add(&target.from_int(c as i64))?;
            }
            if acc.is_zero() {
                found = Some(x);
                break;
            }
        }
        found.ok_or_else(|| Error::IntegralityViolation("modulus has no root in the target field".into()))?
    };
    Ok(FieldEmbedding::from_image(source, target, image))
}

impl FieldEmbedding {
    fn from_image(source: &FieldDesc, target: &FieldDesc, image: FieldElement) -> Self {
        let mut basis_images = Vec::with_capacity(source.degree());
        let mut pw = target.one();
        for _ in 0..source.degree() {
            basis_images.push(pw.clone());
            pw = pw.mul(&image).expect("same field");
        }
        FieldEmbedding {
            source: source.clone(),
            target: target.clone(),
            image_of_generator: image,
            basis_images,
        }
    }

    /// The identity map of a field.
    pub fn identity(field: &FieldDesc) -> Self {
        Self::from_image(field, field, field.generator())
    }

    pub fn source(&self) -> &FieldDesc {
        &self.source
    }

    pub fn target(&self) -> &FieldDesc {
        &self.target
    }

    pub fn image_of_generator(&self) -> &FieldElement {
        &self.image_of_generator
    }

    pub fn apply(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.field() != &self.source {
            return Err(Error::FieldMismatch);
        }
        let mut acc = self.target.zero();
        for (&c, b) in x.coeffs().iter().zip(&self.basis_images) {
            if c != 0 {
                acc = acc.add(&b.mul(&self.target.from_int(c as i64))?)?;
            }
        }
        Ok(acc)
    }
}

/// Dense polynomials over `F_p`, ascending coefficient order.
pub(crate) mod poly {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn inv_mod(x: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        let mut b = x % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let k = r.len() - 1;
            let c = r[k] * lead_inv % p;
            for i in 0..=dm {
                let t = c * m[i] % p;
                r[k - dm + i] = (r[k - dm + i] + p - t) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y % p) % p;
            }
        }
        rem(&out, m, p)
    }

    pub fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Ben-Or: `m` of degree `a` is irreducible iff `gcd(x^{p^k} - x, m) = 1`
    /// for every `k <= a/2`.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let a = m.len() - 1;
        if a == 1 {
            return true;
        }
        let x = vec![0, 1];
        let mut h = x.clone();
        for _ in 0..a / 2 {
            h = powmod(&h, p, m, p);
            let mut diff = h.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            trim(&mut diff);
            if diff.is_empty() {
                return false;
            }
            if gcd(&diff, m, p).len() > 1 {
                return false;
            }
        }
        true
    }
}
