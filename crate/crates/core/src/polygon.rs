//! Newton and Hodge polygons, the Newton-above-Hodge comparison, and Hodge
//! numbers of smooth complete intersections.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::padic;
use crate::rational::small_to_compact;
use crate::Verdict;

pub type Slope = Ratio<i64>;

/// A p-adic valuation; `Infinite` marks a zero coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(Slope),
    Infinite,
}

impl Valuation {
    pub fn int(v: i64) -> Valuation {
        Valuation::Finite(Slope::from_integer(v))
    }
}

/// A convex polygon starting at the origin, stored as `(slope, multiplicity)`
/// segments with strictly increasing slopes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polygon {
    segments: Vec<(Slope, u64)>,
}

impl Polygon {
    /// Builds a polygon from slopes with multiplicities in any order; equal
    /// slopes are merged and zero multiplicities dropped.
    pub fn from_slopes<I: IntoIterator<Item = (Slope, u64)>>(slopes: I) -> Polygon {
        let mut all: Vec<(Slope, u64)> = slopes.into_iter().filter(|&(_, m)| m > 0).collect();
        all.sort();
        let mut segments: Vec<(Slope, u64)> = Vec::new();
        for (s, m) in all {
            match segments.last_mut() {
                Some((t, k)) if *t == s => *k += m,
                _ => segments.push((s, m)),
            }
        }
        Polygon { segments }
    }

    pub fn segments(&self) -> &[(Slope, u64)] {
        &self.segments
    }

    pub fn length(&self) -> u64 {
        self.segments.iter().map(|&(_, m)| m).sum()
    }

    /// The value at the right endpoint, `sum slope * multiplicity`.
    pub fn endpoint(&self) -> Slope {
        self.segments
            .iter()
            .fold(Slope::zero(), |acc, &(s, m)| acc + s * m as i64)
    }

    /// Breakpoint abscissae, including both endpoints.
    pub fn breakpoints(&self) -> Vec<u64> {
        let mut xs = vec![0];
        let mut x = 0;
        for &(_, m) in &self.segments {
            x += m;
            xs.push(x);
        }
        xs
    }

    pub fn to_json(&self) -> Value {
        let segs: Vec<Value> = self
            .segments
            .iter()
            .map(|(s, m)| json!([small_to_compact(s), m]))
            .collect();
        json!({ "segments": segs, "length": self.length() })
    }

    pub fn from_json(v: &Value) -> Result<Polygon> {
        let bad = || Error::InvalidLiteral(v.to_string());
        let segs = v.get("segments").and_then(Value::as_array).ok_or_else(bad)?;
        let mut out = Vec::with_capacity(segs.len());
        for seg in segs {
            let pair = seg.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
            let slope = crate::rational::from_json(&pair[0])?;
            let slope = Slope::new(
                slope.numer().to_i64().ok_or_else(bad)?,
                slope.denom().to_i64().ok_or_else(bad)?,
            );
            let m = pair[1].as_u64().ok_or_else(bad)?;
            out.push((slope, m));
        }
        let polygon = Polygon::from_slopes(out);
        if let Some(len) = v.get("length") {
            if len.as_u64() != Some(polygon.length()) {
                return Err(bad());
            }
        }
        Ok(polygon)
    }
}

fn cross(o: (i64, Slope), a: (i64, Slope), b: (i64, Slope)) -> Slope {
    (a.1 - o.1) * (b.0 - o.0) - (b.1 - o.1) * (a.0 - o.0)
}

/// Lower convex hull of the finite points `(i, v_i)`.
pub fn newton_from_valuations(points: &[(usize, Valuation)]) -> Result<Polygon> {
    let mut pts: Vec<(i64, Slope)> = Vec::new();
    let mut saw_origin = false;
    let mut top = 0usize;
    let mut top_finite = false;
    for &(i, v) in points {
        if i == 0 {
            if v != Valuation::int(0) {
                return Err(Error::Unnormalized);
            }
            saw_origin = true;
        }
        if i >= top {
            top = i;
            top_finite = matches!(v, Valuation::Finite(_));
        }
        if let Valuation::Finite(v) = v {
            pts.push((i as i64, v));
        }
    }
    if !saw_origin {
        return Err(Error::Unnormalized);
    }
    if !top_finite {
        return Err(Error::OutOfDomain(format!(
            "valuation at the top index {top} is infinite"
        )));
    }
    pts.sort();
    pts.dedup_by(|b, a| {
        // keep the lower of two points with the same abscissa
        if a.0 == b.0 {
            a.1 = a.1.min(b.1);
            true
        } else {
            false
        }
    });

    // the slope from x to y is below the slope from x to z iff the cross product is positive
    let mut hull: Vec<(i64, Slope)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) >= Slope::zero() {
            hull.pop();
        }
        hull.push(pt);
    }
    Ok(Polygon::from_slopes(hull.windows(2).map(|w| {
        let dx = w[1].0 - w[0].0;
        ((w[1].1 - w[0].1) / dx, dx as u64)
    })))
}

/// Newton polygon of `P = 1 + c_1 t + ...` from `ord_p(c_i)`.
pub fn newton_of_polynomial(coeffs: &[BigRational], p: u64) -> Result<Polygon> {
    let mut c = coeffs.to_vec();
    crate::rational::trim(&mut c);
    if c.first().is_none_or(|c0| !c0.is_one()) {
        return Err(Error::Unnormalized);
    }
    let pts = c
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let v = if x.is_zero() {
                Valuation::Infinite
            } else {
                Valuation::int(padic::valuation(x, p)?)
            };
            Ok((i, v))
        })
        .collect::<Result<Vec<_>>>()?;
    newton_from_valuations(&pts)
}

/// `h_i = dim H^{m-i}(Ω^i)` for the cohomology in degree `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeNumbers {
    pub m: u32,
    pub h: Vec<u64>,
}

impl HodgeNumbers {
    pub fn to_json(&self) -> Value {
        json!({ "m": self.m, "h": self.h })
    }
}

/// Slope `i` with multiplicity `h_i`.
pub fn hodge_polygon(h: &HodgeNumbers) -> Result<Polygon> {
    if h.h.iter().all(|&x| x == 0) {
        return Err(Error::EmptyHodge);
    }
    Ok(Polygon::from_slopes(
        h.h.iter().enumerate().map(|(i, &m)| (Slope::from_integer(i as i64), m)),
    ))
}

/// Exact value at `x in [0, length]`.
pub fn polygon_value(p: &Polygon, x: Slope) -> Result<Slope> {
    if x < Slope::zero() || x > Slope::from_integer(p.length() as i64) {
        return Err(Error::OutOfDomain(format!("{x} is outside [0, {}]", p.length())));
    }
    let mut acc = Slope::zero();
    let mut left = x;
    for &(s, m) in &p.segments {
        let step = left.min(Slope::from_integer(m as i64));
        acc += s * step;
        left -= step;
        if left.is_zero() {
            break;
        }
    }
    Ok(acc)
}

fn check_lengths(a: &Polygon, b: &Polygon) -> Result<()> {
    if a.length() == b.length() {
        Ok(())
    } else {
        Err(Error::LengthMismatch(a.length(), b.length()))
    }
}

fn merged_breakpoints(a: &Polygon, b: &Polygon) -> Vec<u64> {
    let mut xs = a.breakpoints();
    xs.extend(b.breakpoints());
    xs.sort_unstable();
    xs.dedup();
    xs
}

/// `A(x) >= B(x)` on `[0, n]`, checked at the breakpoints of both.
pub fn polygon_geq(a: &Polygon, b: &Polygon) -> Result<Verdict> {
    check_lengths(a, b)?;
    for x in merged_breakpoints(a, b) {
        let x = Slope::from_integer(x as i64);
        if polygon_value(a, x)? < polygon_value(b, x)? {
            return Ok(Verdict::Fail);
        }
    }
    Ok(Verdict::Pass)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MazurReport {
    pub verdict: Verdict,
    pub above: bool,
    pub endpoints_equal: bool,
    /// Newton lies strictly above Hodge at some breakpoint.
    pub strict: bool,
}

impl MazurReport {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict,
            "above": self.above,
            "endpoints_equal": self.endpoints_equal,
            "strict": self.strict,
        })
    }
}

/// Newton above Hodge; with `require_endpoints`, both must also end at the
/// same height.
pub fn check_mazur(newton: &Polygon, hodge: &Polygon, require_endpoints: bool) -> Result<MazurReport> {
    let above = polygon_geq(newton, hodge)?.passed();
    let endpoints_equal = newton.endpoint() == hodge.endpoint();
    let mut strict = false;
    for x in merged_breakpoints(newton, hodge) {
        let x = Slope::from_integer(x as i64);
        strict |= polygon_value(newton, x)? > polygon_value(hodge, x)?;
    }
    Ok(MazurReport {
        verdict: Verdict::from_bool(above && (endpoints_equal || !require_endpoints)),
        above,
        endpoints_equal,
        strict,
    })
}

// ---- complete intersections -------------------------------------------------

/// A polynomial in `y` with integer coefficients.
type YPoly = Vec<BigInt>;
/// A power series in `z` truncated at `z^len`, with coefficients in `Z[y]`.
type Series = Vec<YPoly>;

fn ypoly_add(a: &YPoly, b: &YPoly) -> YPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    out
}

fn ypoly_mul(a: &YPoly, b: &YPoly) -> YPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by `1 + y`.
fn ypoly_div_one_plus_y(a: &YPoly) -> Result<YPoly> {
    if a.is_empty() {
        return Ok(Vec::new());
    }
    let mut rem = a.clone();
    let mut q = vec![BigInt::zero(); a.len().saturating_sub(1)];
    for k in (1..rem.len()).rev() {
        let c = rem[k].clone();
        q[k - 1] = c.clone();
        rem[k - 1] -= &c;
        rem[k] = BigInt::zero();
    }
    if !rem[0].is_zero() {
        return Err(Error::Inconsistent(
            "generating function is not divisible by 1 + y".into(),
        ));
    }
    Ok(q)
}

fn series_mul(a: &Series, b: &Series, len: usize) -> Series {
    let mut out = vec![Vec::new(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] = ypoly_add(&out[i + j], &ypoly_mul(x, y));
        }
    }
    out
}

/// Inverse of a series whose constant term is `1`.
fn series_inv_unit(a: &Series, len: usize) -> Series {
    let mut out: Series = vec![Vec::new(); len];
    out[0] = vec![BigInt::one()];
    for k in 1..len {
        let mut acc: YPoly = Vec::new();
        for j in 1..=k.min(a.len() - 1) {
            acc = ypoly_add(&acc, &ypoly_mul(&a[j], &out[k - j]));
        }
        out[k] = acc.into_iter().map(|c| -c).collect();
    }
    out
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `chi_y` of a smooth complete intersection of the given degrees in
/// `P^{n-1}`, as the coefficient of `z^{n-1}` in
/// `1/((1+zy)(1-z)) * prod_j ((1+zy)^d - (1-z)^d) / ((1+zy)^d + y(1-z)^d)`.
fn chi_y(n: usize, degrees: &[u32]) -> Result<YPoly> {
    let len = n;
    // 1/(1+zy) and 1/(1-z)
    let mut acc: Series = (0..len)
        .map(|k| {
            let mut c = vec![BigInt::zero(); k + 1];
            c[k] = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            c
        })
        .collect();
    let geometric: Series = (0..len).map(|_| vec![BigInt::one()]).collect();
    acc = series_mul(&acc, &geometric, len);

    for &d in degrees {
        let d = d as u64;
        let mut num: Series = vec![Vec::new(); len];
        let mut den: Series = vec![Vec::new(); len];
        for k in 0..=(d as usize).min(len - 1) {
            let c = binomial(d, k as u64);
            let mut a = vec![BigInt::zero(); k + 1];
            a[k] = c.clone();
            let b = if k % 2 == 0 { c } else { -c };
            num[k] = ypoly_add(&a, &vec![-b.clone()]);
            den[k] = ypoly_add(&a, &vec![BigInt::zero(), b]);
        }
        let num = num.iter().map(ypoly_div_one_plus_y).collect::<Result<Series>>()?;
        let den = den.iter().map(ypoly_div_one_plus_y).collect::<Result<Series>>()?;
        debug_assert_eq!(trimmed(&den[0]), vec![BigInt::one()]);
        acc = series_mul(&acc, &series_mul(&num, &series_inv_unit(&den, len), len), len);
    }
    Ok(trimmed(&acc[len - 1]))
}

fn trimmed(p: &YPoly) -> YPoly {
    let mut p = p.clone();
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// Middle Hodge numbers of a smooth complete intersection, with the
/// smallest index where the primitive part is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteIntersectionHodge {
    pub hodge: HodgeNumbers,
    /// `h_i` minus the hyperplane class in `H^{i,i}` when `2i = d`.
    pub primitive: Vec<u64>,
    /// `min { i : primitive h_i != 0 }`, `None` when the primitive part vanishes.
    pub b: Option<u32>,
    /// `max(0, ceil((n - sum d_i) / max d_i))`.
    pub formula: u32,
}

impl CompleteIntersectionHodge {
    pub fn to_json(&self) -> Value {
        json!({
            "m": self.hodge.m,
            "h": self.hodge.h,
            "primitive": self.primitive,
            "b": self.b,
            "formula": self.formula,
        })
    }
}

/// Ax–Katz exponent for `n` variables and the given degrees.
pub fn ax_katz_exponent(n: usize, degrees: &[u32]) -> u32 {
    let sum: i64 = degrees.iter().map(|&d| d as i64).sum();
    let max = degrees.iter().copied().max().unwrap_or(1).max(1) as i64;
    let diff = n as i64 - sum;
    if diff <= 0 {
        0
    } else {
        Integer::div_ceil(&diff, &max) as u32
    }
}

/// Hodge numbers of the middle cohomology of a smooth complete intersection
/// of the given degrees in `P^{n-1}`, of dimension `d = n - 1 - r`.
///
/// Fails with `CorollaryViolation` when the first nonzero primitive index
/// disagrees with the Ax–Katz exponent.
pub fn ci_hodge_numbers(n: usize, degrees: &[u32]) -> Result<CompleteIntersectionHodge> {
    let r = degrees.len();
    if r == 0 || degrees.contains(&0) || n < r + 1 {
        return Err(Error::InvalidDimensions(format!(
            "n = {n}, degrees = {degrees:?}: need r >= 1, d_i >= 1 and n - 1 - r >= 0"
        )));
    }
    let d = n - 1 - r;
    let chi = chi_y(n, degrees)?;
    let coeff = |p: usize| chi.get(p).cloned().unwrap_or_default();
    let mut h = Vec::with_capacity(d + 1);
    for p in 0..=d {
        let diagonal = if 2 * p != d {
            if p % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            }
        } else {
            BigInt::zero()
        };
        let mut v = coeff(p) - diagonal;
        if (d - p) % 2 == 1 {
            v = -v;
        }
        if v.is_negative() {
            return Err(Error::Inconsistent(format!("negative Hodge number {v} at index {p}")));
        }
        h.push(v.to_u64().ok_or_else(|| Error::Overflow(v.to_string()))?);
    }
    let primitive: Vec<u64> = h
        .iter()
        .enumerate()
        .map(|(i, &x)| if 2 * i == d { x - 1 } else { x })
        .collect();
    let b = primitive.iter().position(|&x| x != 0).map(|i| i as u32);
    let formula = ax_katz_exponent(n, degrees);
    let consistent = match b {
        Some(b) => b == formula,
        None => 2 * formula as usize > d,
    };
    if !consistent {
        return Err(Error::CorollaryViolation { hodge: b, formula });
    }
    Ok(CompleteIntersectionHodge {
        hodge: HodgeNumbers { m: d as u32, h },
        primitive,
        b,
        formula,
    })
}
