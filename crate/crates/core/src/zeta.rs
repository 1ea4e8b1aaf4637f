//! Zeta functions from point counts: the exponential series, rational
//! reconstruction, curve numerators, Weil factorizations and the checks run
//! on them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::polygon::{newton_of_polynomial, Polygon, Slope};
use crate::rational::{
    self, exp_of_power_sums, int, inverse_root_power_sums, is_nonnegative_integer, normalize_constant, poly_divrem,
    poly_gcd, poly_mul, series_inv, series_mul, to_pair, Rational,
};
use crate::Verdict;

/// `N_1, ..., N_m` over `F_q, F_{q^2}, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSequence {
    pub q: u64,
    pub counts: Vec<u64>,
}

impl CountSequence {
    pub fn new(q: u64, counts: Vec<u64>) -> CountSequence {
        CountSequence { q, counts }
    }
}

/// Coefficients of `exp(sum_{a <= m} N_a t^a / a) mod t^{m+1}`.
pub fn zeta_series(counts: &CountSequence, order: usize) -> Result<Vec<Rational>> {
    if order > counts.counts.len() {
        return Err(Error::InsufficientData(format!(
            "order {order} needs {order} counts, got {}",
            counts.counts.len()
        )));
    }
    let sums: Vec<Rational> = counts.counts[..order]
        .iter()
        .map(|&n| Rational::from_integer(n.into()))
        .collect();
    let series = exp_of_power_sums(&sums, order + 1);
    if let Some((k, c)) = series.iter().enumerate().find(|(_, c)| !is_nonnegative_integer(c)) {
        return Err(Error::IntegralityViolation(format!("coefficient of t^{k} is {c}")));
    }
    Ok(series)
}

/// A rational function `numerator / denominator` with constant terms 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaFunction {
    pub numerator: Vec<Rational>,
    pub denominator: Vec<Rational>,
}

fn to_rationals(p: &[BigInt]) -> Vec<Rational> {
    p.iter().cloned().map(Rational::from_integer).collect()
}

impl ZetaFunction {
    pub fn new(numerator: Vec<Rational>, denominator: Vec<Rational>) -> Result<ZetaFunction> {
        if numerator.first().is_none_or(|c| !c.is_one()) || denominator.first().is_none_or(|c| !c.is_one()) {
            return Err(Error::Unnormalized);
        }
        Ok(ZetaFunction { numerator, denominator })
    }

    pub fn from_integer_polys(numerator: &[BigInt], denominator: &[BigInt]) -> Result<ZetaFunction> {
        ZetaFunction::new(to_rationals(numerator), to_rationals(denominator))
    }

    /// Taylor coefficients up to `t^{len-1}`.
    pub fn series(&self, len: usize) -> Vec<Rational> {
        series_mul(&self.numerator, &series_inv(&self.denominator, len), len)
    }

    /// `N_s = sum beta^s - sum alpha^s` over inverse roots of the denominator
    /// and numerator.
    pub fn count(&self, s: usize) -> Result<BigInt> {
        if s == 0 {
            return Err(Error::OutOfDomain("counts are indexed from s = 1".into()));
        }
        let den = inverse_root_power_sums(&self.denominator, s);
        let num = inverse_root_power_sums(&self.numerator, s);
        let n = &den[s - 1] - &num[s - 1];
        rational::to_integer(&n).ok_or_else(|| Error::IntegralityViolation(format!("N_{s} = {n}")))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "num": self.numerator.iter().map(to_pair).collect::<Vec<_>>(),
            "den": self.denominator.iter().map(to_pair).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<ZetaFunction> {
        let list = |key: &str| -> Result<Vec<Rational>> {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::InvalidLiteral(format!("missing \"{key}\"")))?
                .iter()
                .map(rational::from_json)
                .collect()
        };
        ZetaFunction::new(list("num")?, list("den")?)
    }
}

/// Solves `A x = b` over `Q`, setting free variables to zero. `None` when
/// the system is inconsistent.
fn solve_any(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        b.swap(r, pr);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        b[r] *= &inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
                let t = &f * &b[r];
                b[i] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if b[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = b[i].clone();
    }
    Some(x)
}

/// The rational function of degrees at most `(deg_num, deg_den)` matching
/// `series` through `t^{deg_num + deg_den}`, reduced to lowest terms and
/// checked against every further supplied coefficient.
pub fn reconstruct_rational(series: &[Rational], deg_num: usize, deg_den: usize) -> Result<ZetaFunction> {
    let need = deg_num + deg_den + 1;
    if series.len() < need {
        return Err(Error::InsufficientData(format!(
            "degree bounds ({deg_num}, {deg_den}) need {need} series coefficients, got {}",
            series.len()
        )));
    }
    if !series[0].is_one() {
        return Err(Error::Unnormalized);
    }
    let s = |k: isize| -> Rational {
        if k < 0 {
            Rational::zero()
        } else {
            series[k as usize].clone()
        }
    };
    // sum_{j=0}^{D2} q_j s_{k-j} = 0 for D1 < k <= D1 + D2, with q_0 = 1
    let (a, b): (Vec<Vec<Rational>>, Vec<Rational>) = (deg_num + 1..need)
        .map(|k| {
            let row = (1..=deg_den).map(|j| s(k as isize - j as isize)).collect();
            (row, -s(k as isize))
        })
        .unzip();
    let tail = solve_any(a, b).ok_or(Error::NoSolution)?;
    let mut den = vec![Rational::one()];
    den.extend(tail);
    let mut num = series_mul(&den, series, deg_num + 1);

    rational::trim(&mut num);
    rational::trim(&mut den);
    let g = poly_gcd(&num, &den);
    if g.len() > 1 {
        num = poly_divrem(&num, &g).0;
        den = poly_divrem(&den, &g).0;
    }
    let scale = den[0].clone();
    if scale.is_zero() {
        return Err(Error::NoSolution);
    }
    let num: Vec<Rational> = num.iter().map(|x| x / &scale).collect();
    let den = normalize_constant(&den);
    let zeta = ZetaFunction::new(num, den).map_err(|_| Error::NoSolution)?;

    let expanded = zeta.series(series.len());
    if let Some(index) = (0..series.len()).find(|&k| expanded[k] != series[k]) {
        return Err(if index < need {
            Error::NoSolution
        } else {
            Error::NotVerified { index }
        });
    }
    Ok(zeta)
}

/// Numerator `P_1` of a genus-`g` curve over `F_q` from `N_1, ..., N_g`,
/// using `sum alpha^s = q^s + 1 - N_s` and `c_{2g-i} = q^{g-i} c_i`.
pub fn curve_numerator(counts: &[u64], g: usize, q: u64) -> Result<Vec<BigInt>> {
    if counts.len() != g {
        return Err(Error::InsufficientData(format!(
            "genus {g} needs exactly {g} counts, got {}",
            counts.len()
        )));
    }
    let q_big = BigInt::from(q);
    let sums: Vec<Rational> = (1..=g)
        .map(|s| Rational::from_integer(q_big.pow(s as u32) + 1 - BigInt::from(counts[s - 1])))
        .collect();
    // p(s) = -s c_s - sum_{k<s} c_k p(s-k)
    let mut c: Vec<Rational> = vec![Rational::one()];
    for s in 1..=g {
        let mut acc = sums[s - 1].clone();
        for k in 1..s {
            acc += &c[k] * &sums[s - k - 1];
        }
        c.push(-acc / int(s as i64));
    }
    let mut out: Vec<BigInt> = Vec::with_capacity(2 * g + 1);
    for (i, x) in c.iter().enumerate() {
        out.push(rational::to_integer(x).ok_or_else(|| Error::Inconsistent(format!("c_{i} = {x} is not an integer")))?);
    }
    for i in (0..g).rev() {
        let v = &out[i] * q_big.pow((g - i) as u32);
        out.push(v);
    }
    Ok(out)
}

/// The factors `P_0, ..., P_{2d}` of a zeta function, as integer polynomials
/// with constant term 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeilData {
    pub q: u64,
    pub d: usize,
    pub factors: BTreeMap<usize, Vec<BigInt>>,
}

fn lefschetz(q: u64, i: usize) -> Vec<BigInt> {
    vec![BigInt::one(), -BigInt::from(q).pow(i as u32)]
}

impl WeilData {
    pub fn new(q: u64, d: usize, factors: BTreeMap<usize, Vec<BigInt>>) -> Result<WeilData> {
        for (&i, p) in &factors {
            if i > 2 * d {
                return Err(Error::OutOfDomain(format!("factor index {i} exceeds 2d = {}", 2 * d)));
            }
            if p.first().is_none_or(|c| !c.is_one()) {
                return Err(Error::Unnormalized);
            }
        }
        Ok(WeilData { q, d, factors })
    }

    /// `P_{2i} = 1 - q^i t`, odd factors trivial.
    pub fn projective_space(q: u64, d: usize) -> WeilData {
        let factors = (0..=d).map(|i| (2 * i, lefschetz(q, i))).collect();
        WeilData { q, d, factors }
    }

    /// `P_0 = 1 - t`, `P_1`, `P_2 = 1 - q t`.
    pub fn curve(q: u64, p1: Vec<BigInt>) -> Result<WeilData> {
        let mut w = WeilData::projective_space(q, 1);
        w.factors.insert(1, p1);
        WeilData::new(q, 1, w.factors)
    }

    /// Lefschetz factors everywhere except in the middle degree `d`, where
    /// `middle` is the full factor (including the hyperplane class when `d`
    /// is even).
    pub fn with_middle(q: u64, d: usize, middle: Vec<BigInt>) -> Result<WeilData> {
        let mut w = WeilData::projective_space(q, d);
        w.factors.insert(d, middle);
        WeilData::new(q, d, w.factors)
    }

    pub fn factor(&self, i: usize) -> Vec<BigInt> {
        self.factors.get(&i).cloned().unwrap_or_else(|| vec![BigInt::one()])
    }

    /// `prod_{i odd} P_i / prod_{i even} P_i`.
    pub fn zeta(&self) -> ZetaFunction {
        let mut num = vec![Rational::one()];
        let mut den = vec![Rational::one()];
        for (&i, p) in &self.factors {
            let p = to_rationals(p);
            if i % 2 == 1 {
                num = poly_mul(&num, &p);
            } else {
                den = poly_mul(&den, &p);
            }
        }
        ZetaFunction {
            numerator: num,
            denominator: den,
        }
    }

    pub fn to_json(&self) -> Value {
        let factors: serde_json::Map<String, Value> = self
            .factors
            .iter()
            .map(|(i, p)| {
                (
                    i.to_string(),
                    Value::Array(p.iter().map(rational::int_to_json).collect()),
                )
            })
            .collect();
        json!({ "q": self.q, "d": self.d, "factors": factors })
    }

    /// `{"q": 2, "d": 1, "factors": {"0": [1, -1], "1": [1, 0, 2], "2": [1, -2]}}`.
    pub fn from_json(v: &Value) -> Result<WeilData> {
        let bad = |what: &str| Error::InvalidLiteral(format!("weil data: {what}"));
        let q = v.get("q").and_then(Value::as_u64).ok_or_else(|| bad("missing \"q\""))?;
        let d = v.get("d").and_then(Value::as_u64).ok_or_else(|| bad("missing \"d\""))? as usize;
        let raw = v
            .get("factors")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing \"factors\""))?;
        let mut factors = BTreeMap::new();
        for (k, p) in raw {
            let i: usize = k.parse().map_err(|_| bad("factor keys must be integers"))?;
            let coeffs = p
                .as_array()
                .ok_or_else(|| bad("factors must be coefficient lists"))?
                .iter()
                .map(|c| {
                    rational::from_json(c)
                        .ok()
                        .and_then(|x| rational::to_integer(&x))
                        .ok_or_else(|| bad("coefficients must be integers"))
                })
                .collect::<Result<Vec<_>>>()?;
            factors.insert(i, coeffs);
        }
        WeilData::new(q, d, factors)
    }
}

/// Middle factor of degree `b` for a variety whose other factors are
/// `1 - q^i t`, from `N_1, ..., N_b`.
pub fn middle_factor_from_counts(q: u64, d: usize, b: usize, counts: &[u64]) -> Result<Vec<BigInt>> {
    if counts.len() < b {
        return Err(Error::InsufficientData(format!(
            "degree {b} needs {b} counts, got {}",
            counts.len()
        )));
    }
    let q_big = BigInt::from(q);
    let sign = if d.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let sums: Vec<Rational> = (1..=b)
        .map(|s| {
            let lefschetz: BigInt = (0..=d).filter(|&i| 2 * i != d).map(|i| q_big.pow((i * s) as u32)).sum();
            Rational::from_integer(&sign * (BigInt::from(counts[s - 1]) - lefschetz))
        })
        .collect();
    let mut c: Vec<Rational> = vec![Rational::one()];
    for s in 1..=b {
        let mut acc = sums[s - 1].clone();
        for k in 1..s {
            acc += &c[k] * &sums[s - k - 1];
        }
        c.push(-acc / int(s as i64));
    }
    c.iter()
        .enumerate()
        .map(|(i, x)| {
            rational::to_integer(x).ok_or_else(|| Error::Inconsistent(format!("c_{i} = {x} is not an integer")))
        })
        .collect()
}

/// Middle factor of degree `b` from `N_1, ..., N_{b/2 + 1}` using the
/// functional equation `c_{b-j} = eps q^{d(b-2j)/2} c_j`. Both signs are
/// tried; the one reproducing every supplied count is returned.
pub fn middle_factor_symmetric(q: u64, d: usize, b: usize, counts: &[u64]) -> Result<Vec<BigInt>> {
    let h = b / 2;
    if counts.len() < h + 1 {
        return Err(Error::InsufficientData(format!(
            "degree {b} needs {} counts, got {}",
            h + 1,
            counts.len()
        )));
    }
    let (root, exp_scale) = if (d * b).is_multiple_of(2) {
        (BigInt::from(q), 1)
    } else {
        let r = (q as f64).sqrt().round() as u64;
        if r * r != q {
            return Err(Error::Inconsistent(format!(
                "q^{{{d}{b}/2}} is not an integer for q = {q}"
            )));
        }
        (BigInt::from(r), 2)
    };
    let low = middle_factor_from_counts(q, d, h, &counts[..h])?;
    let mut found = Vec::new();
    for eps in [1i64, -1] {
        let mut c = vec![BigInt::zero(); b + 1];
        c[..=h].clone_from_slice(&low);
        let mut ok = true;
        for j in 0..=h {
            let k = b - j;
            // exponent d(b - 2j)/2, measured in powers of `root`
            let e = exp_scale * d * (b - 2 * j) / 2;
            let v = root.pow(e as u32) * &low[j] * eps;
            if k == j {
                ok &= v == low[j];
            } else {
                c[k] = v;
            }
        }
        if !ok {
            continue;
        }
        let weil = WeilData::with_middle(q, d, c.clone())?;
        let mut matches = true;
        for (s, &n) in counts.iter().enumerate() {
            matches &= trace_formula_counts(&weil, s + 1)? == BigInt::from(n);
        }
        if matches && !found.contains(&c) {
            found.push(c);
        }
    }
    match found.len() {
        1 => Ok(found.pop().expect("one candidate")),
        0 => Err(Error::Inconsistent(
            "no sign of the functional equation matches the counts".into(),
        )),
        _ => Err(Error::InsufficientData("both signs match; supply more counts".into())),
    }
}

/// `N_s = sum_i (-1)^i p_i(s)`, with power sums from Newton's identities.
pub fn trace_formula_counts(weil: &WeilData, s: usize) -> Result<BigInt> {
    if s == 0 {
        return Err(Error::OutOfDomain("counts are indexed from s = 1".into()));
    }
    let mut total = Rational::zero();
    for (&i, p) in &weil.factors {
        let ps = inverse_root_power_sums(&to_rationals(p), s);
        if i % 2 == 0 {
            total += &ps[s - 1];
        } else {
            total -= &ps[s - 1];
        }
    }
    rational::to_integer(&total).ok_or_else(|| Error::IntegralityViolation(format!("N_{s} = {total}")))
}

fn log_base(q: u64, p: u64) -> Option<u32> {
    let mut x = q;
    let mut a = 0;
    while x > 1 && x.is_multiple_of(p) {
        x /= p;
        a += 1;
    }
    (x == 1 && a > 0).then_some(a)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSlopes {
    pub index: usize,
    /// Slopes already divided by `a`.
    pub polygon: Polygon,
    pub low: i64,
    pub high: i64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeIntervalReport {
    pub verdict: Verdict,
    pub factors: Vec<FactorSlopes>,
}

impl SlopeIntervalReport {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict,
            "factors": self.factors.iter().map(|f| json!({
                "i": f.index,
                "newton": f.polygon.to_json(),
                "interval": [f.low, f.high],
                "verdict": f.verdict,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Every slope of `P_i` divided by `a` must lie in `[max(0, i-d), min(i, d)]`.
pub fn slope_interval_check(weil: &WeilData, p: u64) -> Result<SlopeIntervalReport> {
    let a = log_base(weil.q, p).ok_or_else(|| Error::Inconsistent(format!("{} is not a power of {p}", weil.q)))?;
    let d = weil.d as i64;
    let mut factors = Vec::new();
    for (&i, coeffs) in &weil.factors {
        if coeffs.len() <= 1 {
            continue;
        }
        let newton = newton_of_polynomial(&to_rationals(coeffs), p)?;
        let polygon = Polygon::from_slopes(newton.segments().iter().map(|&(s, m)| (s / a as i64, m)));
        let (low, high) = ((i as i64 - d).max(0), (i as i64).min(d));
        let ok = polygon
            .segments()
            .iter()
            .all(|&(s, _)| s >= Slope::from_integer(low) && s <= Slope::from_integer(high));
        factors.push(FactorSlopes {
            index: i,
            polygon,
            low,
            high,
            verdict: Verdict::from_bool(ok),
        });
    }
    let verdict = Verdict::from_bool(factors.iter().all(|f| f.verdict.passed()));
    Ok(SlopeIntervalReport { verdict, factors })
}

pub const RH_MAX_DEGREE: usize = 6;
const RH_TOLERANCE: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq)]
pub struct RiemannReport {
    pub verdict: Verdict,
    /// `c_{b-j} = eps q^{i(b/2-j)} c_j` for a common sign `eps`.
    pub symmetric: bool,
    /// `|t| q^{i/2}` for each complex root `t`.
    pub normalized_moduli: Vec<f64>,
}

impl RiemannReport {
    pub fn to_json(&self) -> Value {
        json!({ "verdict": self.verdict, "symmetric": self.symmetric })
    }
}

fn symmetric(p: &[BigInt], i: usize, q: u64) -> bool {
    let b = p.len() - 1;
    if (i * b) % 2 == 1 {
        // q^{i b / 2} is irrational for non-square q; accept only when q is a square
        let r = (q as f64).sqrt().round() as u64;
        if r * r != q {
            return false;
        }
        return symmetric_with_root(p, i, r);
    }
    let q = BigInt::from(q);
    [BigInt::one(), -BigInt::one()].iter().any(|eps| {
        (0..=b).all(|j| {
            // c_{b-j} q^{i j} == eps q^{i b / 2} c_j
            &p[b - j] * q.pow((i * j) as u32) == eps * q.pow((i * b / 2) as u32) * &p[j]
        })
    })
}

fn symmetric_with_root(p: &[BigInt], i: usize, r: u64) -> bool {
    let b = p.len() - 1;
    let r = BigInt::from(r);
    [BigInt::one(), -BigInt::one()]
        .iter()
        .any(|eps| (0..=b).all(|j| &p[b - j] * r.pow((2 * i * j) as u32) == eps * r.pow((i * b) as u32) * &p[j]))
}

/// Complex roots by Durand–Kerner iteration.
fn roots(p: &[f64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let lead = p[n];
    let monic: Vec<f64> = p.iter().map(|c| c / lead).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let bound = 1.0 + monic[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * (bound / 2.0)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for k in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != k {
                    denom *= z[k] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-12, 0.0);
            }
            let step = eval(z[k]) / denom;
            z[k] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    z
}

/// Checks that every root of `P_i` has absolute value `q^{-i/2}`: the
/// coefficient symmetry this forces, then the root moduli numerically.
pub fn riemann_hypothesis_check(p: &[BigInt], i: usize, q: u64) -> Result<RiemannReport> {
    let mut p = p.to_vec();
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    if p.first().is_none_or(|c| !c.is_one()) {
        return Err(Error::Unnormalized);
    }
    let b = p.len() - 1;
    if b > RH_MAX_DEGREE {
        return Err(Error::BudgetExceeded {
            what: "Riemann hypothesis check degree",
            needed: b as u128,
            budget: RH_MAX_DEGREE as u128,
        });
    }
    if b == 0 {
        return Ok(RiemannReport {
            verdict: Verdict::Pass,
            symmetric: true,
            normalized_moduli: Vec::new(),
        });
    }
    let symmetric = symmetric(&p, i, q);
    let coeffs: Vec<f64> = p.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect();
    let scale = (q as f64).powf(i as f64 / 2.0);
    let normalized_moduli: Vec<f64> = roots(&coeffs).iter().map(|z| z.norm() * scale).collect();
    let numeric = normalized_moduli.iter().all(|m| (m - 1.0).abs() <= RH_TOLERANCE);
    Ok(RiemannReport {
        verdict: Verdict::from_bool(symmetric && numeric),
        symmetric,
        normalized_moduli,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rats(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn seq(q: u64, counts: &[u64]) -> CountSequence {
        CountSequence::new(q, counts.to_vec())
    }

    #[test]
    fn series_examples() {
        let line: Vec<u64> = (1..=5).map(|s| 1 << s).collect();
        assert_eq!(zeta_series(&seq(2, &line), 5).unwrap(), rats(&[1, 2, 4, 8, 16, 32]));
        let p1: Vec<u64> = (1..=4).map(|s| (1 << s) + 1).collect();
        assert_eq!(zeta_series(&seq(2, &p1), 4).unwrap(), rats(&[1, 3, 7, 15, 31]));
        assert_eq!(zeta_series(&seq(2, &[0, 0, 0]), 3).unwrap(), rats(&[1, 0, 0, 0]));
        assert!(matches!(
            zeta_series(&seq(2, &[1, 0]), 2),
            Err(Error::IntegralityViolation(_))
        ));
        assert!(matches!(zeta_series(&seq(2, &[1]), 2), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn reconstruction_examples() {
        let z = reconstruct_rational(&rats(&[1, 2, 4]), 0, 1).unwrap();
        assert_eq!(z.denominator, rats(&[1, -2]));
        assert_eq!(z.numerator, rats(&[1]));

        let series = zeta_series(&seq(2, &[3, 5]), 2).unwrap();
        let z = reconstruct_rational(&series, 0, 2).unwrap();
        assert_eq!(z.denominator, rats(&[1, -3, 2]));
        assert_eq!(z.numerator, rats(&[1]));

        // y^2 + xy = x^3 + 1 over F_2: N_s for s = 1..4 from brute force
        let series = zeta_series(&seq(2, &[4, 8, 4, 16]), 4).unwrap();
        let z = reconstruct_rational(&series, 2, 2).unwrap();
        assert_eq!(z.numerator, rats(&[1, 1, 2]));
        assert_eq!(z.denominator, rats(&[1, -3, 2]));
        assert_eq!(
            z.to_json(),
            json!({"num": [[1, 1], [1, 1], [2, 1]], "den": [[1, 1], [-3, 1], [2, 1]]})
        );
        assert_eq!(ZetaFunction::from_json(&z.to_json()).unwrap(), z);

        let short = zeta_series(&seq(2, &[4, 8]), 2).unwrap();
        assert!(matches!(
            reconstruct_rational(&short, 2, 2),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn reconstruction_failures() {
        // 1/(1-t)(1-2t)(1-3t) does not fit in bounds (0, 1)
        let z = ZetaFunction::new(rats(&[1]), rats(&[1, -6, 11, -6])).unwrap();
        let series = z.series(4);
        assert_eq!(
            reconstruct_rational(&series[..2], 0, 1).unwrap().denominator,
            rats(&[1, -6])
        );
        assert_eq!(
            reconstruct_rational(&series, 0, 1).unwrap_err(),
            Error::NotVerified { index: 2 }
        );
        assert_eq!(reconstruct_rational(&series, 0, 3).unwrap(), z);
        // a Hankel system with no solution
        assert_eq!(
            reconstruct_rational(&rats(&[1, 0, 1]), 1, 1).unwrap_err(),
            Error::NoSolution
        );
    }

    #[test]
    fn reconstruction_reduces_common_factors() {
        // (1 - t)/(1 - t)^2 = 1/(1 - t)
        let series = rats(&[1, 1, 1, 1, 1, 1]);
        let z = reconstruct_rational(&series, 2, 2).unwrap();
        assert_eq!(z.numerator, rats(&[1]));
        assert_eq!(z.denominator, rats(&[1, -1]));
    }

    #[test]
    fn curve_numerator_examples() {
        assert_eq!(curve_numerator(&[3], 1, 2).unwrap(), ints(&[1, 0, 2]));
        assert_eq!(curve_numerator(&[4], 1, 2).unwrap(), ints(&[1, 1, 2]));
        assert_eq!(curve_numerator(&[], 0, 2).unwrap(), ints(&[1]));
        assert!(matches!(
            curve_numerator(&[3, 9], 1, 2),
            Err(Error::InsufficientData(_))
        ));
        // genus 2, c_3 = q c_1, c_4 = q^2
        let p = curve_numerator(&[3, 5], 2, 2).unwrap();
        assert_eq!(p.len(), 5);
        assert_eq!(p[3], &p[1] * 2);
        assert_eq!(p[4], BigInt::from(4));
    }

    #[test]
    fn trace_formula_examples() {
        let p1 = WeilData::projective_space(2, 1);
        for s in 1..6 {
            assert_eq!(trace_formula_counts(&p1, s).unwrap(), BigInt::from((1 << s) + 1));
        }
        let ss = WeilData::curve(2, ints(&[1, 0, 2])).unwrap();
        assert_eq!(trace_formula_counts(&ss, 1).unwrap(), BigInt::from(3));
        assert_eq!(trace_formula_counts(&ss, 2).unwrap(), BigInt::from(9));
        let ord = WeilData::curve(2, ints(&[1, 1, 2])).unwrap();
        assert_eq!(trace_formula_counts(&ord, 1).unwrap(), BigInt::from(4));
        assert_eq!(trace_formula_counts(&ord, 2).unwrap(), BigInt::from(8));
        assert_eq!(trace_formula_counts(&ord, 3).unwrap(), BigInt::from(4));
        // agrees with the rational function's own counts
        for s in 1..8 {
            assert_eq!(ord.zeta().count(s).unwrap(), trace_formula_counts(&ord, s).unwrap());
        }
    }

    #[test]
    fn middle_factor_examples() {
        // split quadric surface: P_2 = (1 - q t)^2
        let counts: Vec<u64> = (1..=2)
            .map(|s| {
                let q = 3u64.pow(s);
                q * q + 2 * q + 1
            })
            .collect();
        assert_eq!(middle_factor_from_counts(3, 2, 2, &counts).unwrap(), ints(&[1, -6, 9]));
        // elliptic curve through the same path
        assert_eq!(middle_factor_from_counts(2, 1, 2, &[4, 8]).unwrap(), ints(&[1, 1, 2]));
    }

    #[test]
    fn symmetric_middle_factor() {
        // split quadric surface over F_3
        let counts: Vec<u64> = (1..=2)
            .map(|s| {
                let q = 3u64.pow(s);
                q * q + 2 * q + 1
            })
            .collect();
        assert_eq!(middle_factor_symmetric(3, 2, 2, &counts).unwrap(), ints(&[1, -6, 9]));
        // elliptic curve: N_1 alone leaves the sign open, N_2 fixes it
        assert!(middle_factor_symmetric(2, 1, 2, &[4]).is_err());
        assert_eq!(middle_factor_symmetric(2, 1, 2, &[4, 8]).unwrap(), ints(&[1, 1, 2]));
        // a degree-3 factor (1 - 2t)(1 + 2t)(1 - 2t) on H^2 over F_2
        let p2 = poly_mul(&rats(&[1, -2]), &poly_mul(&rats(&[1, 2]), &rats(&[1, -2])));
        let p2: Vec<BigInt> = p2.iter().map(|x| x.to_integer()).collect();
        let w = WeilData::with_middle(2, 2, p2.clone()).unwrap();
        let counts: Vec<u64> = (1..=3)
            .map(|s| trace_formula_counts(&w, s).unwrap().to_u64().unwrap())
            .collect();
        assert_eq!(middle_factor_symmetric(2, 2, 3, &counts).unwrap(), p2);
    }

    #[test]
    fn slope_interval_examples() {
        let ss = WeilData::curve(2, ints(&[1, 0, 2])).unwrap();
        let r = slope_interval_check(&ss, 2).unwrap();
        assert!(r.verdict.passed());
        let f1 = r.factors.iter().find(|f| f.index == 1).unwrap();
        assert_eq!(f1.polygon.segments(), &[(Slope::new(1, 2), 2)]);

        let p3 = WeilData::projective_space(4, 3);
        let r = slope_interval_check(&p3, 2).unwrap();
        assert!(r.verdict.passed());
        let top = r.factors.iter().find(|f| f.index == 6).unwrap();
        assert_eq!(top.polygon.segments(), &[(Slope::from_integer(3), 1)]);

        // slope 3/2 in degree 1 violates [0, 1]
        let bad = WeilData::curve(2, ints(&[1, 0, 8])).unwrap();
        assert_eq!(slope_interval_check(&bad, 2).unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn riemann_examples() {
        let r = riemann_hypothesis_check(&ints(&[1, 0, 2]), 1, 2).unwrap();
        assert!(r.verdict.passed() && r.symmetric);
        for m in &r.normalized_moduli {
            assert!((m - 1.0).abs() < 1e-9);
        }
        assert!(riemann_hypothesis_check(&ints(&[1, -1]), 0, 7)
            .unwrap()
            .verdict
            .passed());
        assert!(riemann_hypothesis_check(&ints(&[1, 1, 2]), 1, 2)
            .unwrap()
            .verdict
            .passed());
        assert!(riemann_hypothesis_check(&ints(&[1, -2]), 2, 2)
            .unwrap()
            .verdict
            .passed());
        // symmetric coefficients but roots of modulus 1 and 1/2
        let r = riemann_hypothesis_check(&ints(&[1, 3, 2]), 1, 2).unwrap();
        assert!(r.symmetric);
        assert_eq!(r.verdict, Verdict::Fail);
        // not symmetric
        assert!(!riemann_hypothesis_check(&ints(&[1, 1, 3]), 1, 2).unwrap().symmetric);
        assert!(matches!(
            riemann_hypothesis_check(&ints(&[1, 0, 0, 0, 0, 0, 0, 1]), 1, 2),
            Err(Error::BudgetExceeded { .. })
        ));
        // genus 3, q = 2: (1 + 2t^2)^3
        let p = poly_mul(
            &to_rationals(&ints(&[1, 0, 2])),
            &poly_mul(&to_rationals(&ints(&[1, 0, 2])), &to_rationals(&ints(&[1, 0, 2]))),
        );
        let p: Vec<BigInt> = p.iter().map(|x| x.to_integer()).collect();
        assert!(riemann_hypothesis_check(&p, 1, 2).unwrap().verdict.passed());
    }

    #[test]
    fn count_examples() {
        let z = ZetaFunction::new(rats(&[1]), rats(&[1, -3, 2])).unwrap();
        assert_eq!(z.count(3).unwrap(), BigInt::from(9));
        let half = ZetaFunction::new(vec![Rational::one(), rat(1, 2)], rats(&[1])).unwrap();
        assert!(matches!(half.count(1), Err(Error::IntegralityViolation(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn curve_numerator_round_trips(q in prop::sample::select(vec![2u64, 3, 4, 5]), g in 1usize..4, seed in prop::collection::vec(-3i64..4, 3)) {
                // a symmetric P_1 with arbitrary low coefficients
                let mut low = vec![BigInt::one()];
                low.extend(seed.iter().take(g).map(|&x| BigInt::from(x)));
                let mut p1 = low.clone();
                for i in (0..g).rev() {
                    p1.push(&low[i] * BigInt::from(q).pow((g - i) as u32));
                }
                let w = WeilData::curve(q, p1.clone()).unwrap();
                let counts: Vec<i128> = (1..=g).map(|s| trace_formula_counts(&w, s).unwrap().to_i128().unwrap()).collect();
                prop_assume!(counts.iter().all(|&n| n >= 0));
                let counts: Vec<u64> = counts.iter().map(|&n| n as u64).collect();
                prop_assert_eq!(curve_numerator(&counts, g, q).unwrap(), p1);
            }

            #[test]
            fn reconstruction_inverts_expansion(
                num in prop::collection::vec(-4i64..5, 0..3),
                den in prop::collection::vec(-4i64..5, 1..3),
            ) {
                let mut n = vec![int(1)];
                n.extend(num.iter().map(|&x| int(x)));
                let mut d = vec![int(1)];
                d.extend(den.iter().map(|&x| int(x)));
                let z = ZetaFunction::new(n.clone(), d.clone()).unwrap();
                let series = z.series(n.len() + d.len() + 3);
                let r = reconstruct_rational(&series, n.len() - 1, d.len() - 1).unwrap();
                // same rational function, possibly in lower terms
                let mut lhs = poly_mul(&r.numerator, &d);
                let mut rhs = poly_mul(&n, &r.denominator);
                rational::trim(&mut lhs);
                rational::trim(&mut rhs);
                prop_assert_eq!(lhs, rhs);
                prop_assert_eq!(r.series(series.len()), series);
            }
        }
    }
}
