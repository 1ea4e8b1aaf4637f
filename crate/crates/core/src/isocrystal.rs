//! F-isocrystals with rational Frobenius matrices.
//!
//! Entries are restricted to `Q`, which is fixed by every Frobenius lift, so
//! `F^a` is the plain matrix power and slopes come from the Newton polygon
//! of `det(I - t F^a)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::padic;
use crate::polygon::{newton_of_polynomial, Polygon, Slope};
use crate::rational::{self, small_to_compact, to_pair, Rational};

pub type Matrix = Vec<Vec<Rational>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FIsocrystal {
    p: u64,
    a: u32,
    matrix: Matrix,
}

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect()
}

fn mat_mul(x: &Matrix, y: &Matrix) -> Matrix {
    let n = x.len();
    let m = y[0].len();
    let k = y.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = Rational::zero();
                    for t in 0..k {
                        if !x[i][t].is_zero() && !y[t][j].is_zero() {
                            acc += &x[i][t] * &y[t][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn mat_vec(x: &Matrix, v: &[Rational]) -> Vec<Rational> {
    x.iter()
        .map(|row| row.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
        .collect()
}

fn mat_pow(x: &Matrix, mut e: u32) -> Matrix {
    let mut acc = identity(x.len());
    let mut base = x.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(&acc, &base);
        }
        base = mat_mul(&base, &base);
        e >>= 1;
    }
    acc
}

/// Coefficients of `det(I - t A)` in ascending degree, by Faddeev–LeVerrier.
pub fn reversed_charpoly(a: &Matrix) -> Vec<Rational> {
    let n = a.len();
    // c[k] is the coefficient of lambda^k in det(lambda I - A)
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut m = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        let am = mat_mul(a, &m);
        m = am;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        let am = mat_mul(a, &m);
        let trace = (0..n).fold(Rational::zero(), |acc, i| acc + &am[i][i]);
        c[n - k] = -trace / rational::int(k as i64);
    }
    // det(I - tA) = t^n det(t^{-1} I - A)
    c.into_iter().rev().collect()
}

pub fn determinant(a: &Matrix) -> Rational {
    let n = a.len();
    let rc = reversed_charpoly(a);
    // coefficient of t^n in det(I - tA) is (-1)^n det A
    if n.is_multiple_of(2) {
        rc[n].clone()
    } else {
        -rc[n].clone()
    }
}

impl FIsocrystal {
    pub fn new(p: u64, a: u32, matrix: Matrix) -> Result<FIsocrystal> {
        if !crate::ffield::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if a == 0 {
            return Err(Error::InvalidDimensions("a must be at least 1".into()));
        }
        let n = matrix.len();
        if n == 0 || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidDimensions(format!(
                "expected a nonempty square matrix, got {n} rows"
            )));
        }
        if determinant(&matrix).is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(FIsocrystal { p, a, matrix })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// The linear map `F^a`.
    pub fn frobenius_power(&self) -> Matrix {
        mat_pow(&self.matrix, self.a)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .matrix
            .iter()
            .map(|row| Value::Array(row.iter().map(to_pair).collect()))
            .collect();
        json!({ "p": self.p, "a": self.a, "matrix": rows })
    }

    pub fn from_json(v: &Value) -> Result<FIsocrystal> {
        let bad = |what: &str| Error::InvalidLiteral(format!("isocrystal: {what}"));
        let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| bad("missing \"p\""))?;
        let a = match v.get("a") {
            None => 1,
            Some(a) => a
                .as_u64()
                .and_then(|a| u32::try_from(a).ok())
                .ok_or_else(|| bad("bad \"a\""))?,
        };
        let rows = v
            .get("matrix")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"matrix\""))?;
        let matrix = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| bad("matrix rows must be arrays"))?
                    .iter()
                    .map(rational::from_json)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Matrix>>()?;
        FIsocrystal::new(p, a, matrix)
    }
}

/// `M_{r/d}`: `F e_i = e_{i+1}` for `i < d` and `F e_d = p^r e_1`.
pub fn standard(r: i64, d: i64, p: u64) -> Result<FIsocrystal> {
    if d <= 0 || r.gcd(&d) != 1 {
        return Err(Error::NotLowestTerms { num: r, den: d });
    }
    let d = d as usize;
    let mut m = vec![vec![Rational::zero(); d]; d];
    for i in 0..d - 1 {
        m[i + 1][i] = Rational::one();
    }
    let pr = BigInt::from(p).pow(r.unsigned_abs() as u32);
    m[0][d - 1] = if r >= 0 {
        Rational::from_integer(pr)
    } else {
        Rational::new(BigInt::one(), pr)
    };
    FIsocrystal::new(p, 1, m)
}

fn same_base(m: &FIsocrystal, n: &FIsocrystal) -> Result<()> {
    if m.p == n.p && m.a == n.a {
        Ok(())
    } else {
        Err(Error::BaseMismatch)
    }
}

/// Block-diagonal sum.
pub fn direct_sum(m: &FIsocrystal, n: &FIsocrystal) -> Result<FIsocrystal> {
    same_base(m, n)?;
    let (dm, dn) = (m.dim(), n.dim());
    let mut out = vec![vec![Rational::zero(); dm + dn]; dm + dn];
    for i in 0..dm {
        for j in 0..dm {
            out[i][j] = m.matrix[i][j].clone();
        }
    }
    for i in 0..dn {
        for j in 0..dn {
            out[dm + i][dm + j] = n.matrix[i][j].clone();
        }
    }
    Ok(FIsocrystal {
        p: m.p,
        a: m.a,
        matrix: out,
    })
}

/// Kronecker product.
pub fn tensor(m: &FIsocrystal, n: &FIsocrystal) -> Result<FIsocrystal> {
    same_base(m, n)?;
    let (dm, dn) = (m.dim(), n.dim());
    let mut out = vec![vec![Rational::zero(); dm * dn]; dm * dn];
    for i in 0..dm {
        for j in 0..dm {
            if m.matrix[i][j].is_zero() {
                continue;
            }
            for k in 0..dn {
                for l in 0..dn {
                    out[i * dn + k][j * dn + l] = &m.matrix[i][j] * &n.matrix[k][l];
                }
            }
        }
    }
    Ok(FIsocrystal {
        p: m.p,
        a: m.a,
        matrix: out,
    })
}

/// Slopes with multiplicities, in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SlopeMultiset {
    pub entries: Vec<(Slope, u64)>,
}

impl SlopeMultiset {
    pub fn dim(&self) -> u64 {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    /// `sum slope * multiplicity`.
    pub fn weight(&self) -> Slope {
        self.entries
            .iter()
            .fold(Slope::zero(), |acc, &(s, m)| acc + s * m as i64)
    }

    pub fn union(&self, other: &SlopeMultiset) -> SlopeMultiset {
        Polygon::from_slopes(self.entries.iter().chain(&other.entries).copied()).into()
    }

    pub fn to_polygon(&self) -> Polygon {
        Polygon::from_slopes(self.entries.iter().copied())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|(s, m)| json!([small_to_compact(s), m]))
                .collect(),
        )
    }
}

impl From<Polygon> for SlopeMultiset {
    fn from(p: Polygon) -> SlopeMultiset {
        SlopeMultiset {
            entries: p.segments().to_vec(),
        }
    }
}

impl From<&SlopeMultiset> for Polygon {
    fn from(s: &SlopeMultiset) -> Polygon {
        s.to_polygon()
    }
}

/// `ord_p` of the eigenvalues of `F^a`, divided by `a`.
pub fn slopes(m: &FIsocrystal) -> Result<SlopeMultiset> {
    let fa = m.frobenius_power();
    let charpoly = reversed_charpoly(&fa);
    if charpoly.last().is_none_or(Zero::is_zero) {
        return Err(Error::SingularMatrix);
    }
    let newton = newton_of_polynomial(&charpoly, m.p)?;
    let a = m.a as i64;
    Ok(Polygon::from_slopes(newton.segments().iter().map(|&(s, k)| (s / a, k))).into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeVerdict {
    Bounded,
    Unbounded,
    Inconclusive,
}

pub const DEFAULT_PROBE_ITERATIONS: usize = 64;

fn min_valuation(v: &[Rational], p: u64) -> Option<i64> {
    v.iter()
        .filter(|x| !x.is_zero())
        .map(|x| padic::valuation(x, p).expect("nonzero"))
        .min()
}

/// Decides heuristically whether `(|F^n x| p^{alpha n})_n` stays bounded,
/// i.e. whether `x` lies in the part of slope at least `alpha`.
///
/// Tracks `w_n = min_i ord_p((F^n x)_i) - alpha n` for `n <= n_max` and
/// compares the minima of the last three windows of length
/// `dim * den(alpha) * a`.
pub fn filtration_probe(m: &FIsocrystal, x: &[Rational], alpha: Slope, n_max: usize) -> Result<ProbeVerdict> {
    if x.len() != m.dim() {
        return Err(Error::InvalidDimensions(format!(
            "vector of length {} for dimension {}",
            x.len(),
            m.dim()
        )));
    }
    if x.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    let window = m.dim() * *alpha.denom() as usize * m.a as usize;
    let mut w = Vec::with_capacity(n_max + 1);
    let mut y = x.to_vec();
    for n in 0..=n_max {
        let v = min_valuation(&y, m.p).expect("F is injective");
        w.push(Slope::from_integer(v) - alpha * n as i64);
        if n < n_max {
            y = mat_vec(&m.matrix, &y);
        }
    }
    if w.len() < 3 * window {
        return Ok(ProbeVerdict::Inconclusive);
    }
    let min_of = |k: usize| {
        let end = w.len() - k * window;
        *w[end - window..end].iter().min().expect("nonempty window")
    };
    let (last, prev, before) = (min_of(0), min_of(1), min_of(2));
    Ok(if last >= prev {
        ProbeVerdict::Bounded
    } else if prev < before {
        ProbeVerdict::Unbounded
    } else {
        ProbeVerdict::Inconclusive
    })
}

/// `M = sum_alpha n_alpha M_alpha`, recorded as slope multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub slopes: SlopeMultiset,
    /// `(alpha, n_alpha)`: multiplicity of `alpha` divided by its denominator.
    pub components: Vec<(Slope, u64)>,
}

impl Decomposition {
    pub fn to_json(&self) -> Value {
        json!({
            "slopes": self.slopes.to_json(),
            "components": self.components.iter().map(|(s, n)| json!([small_to_compact(s), n])).collect::<Vec<_>>(),
        })
    }
}

pub fn dieudonne_manin(m: &FIsocrystal) -> Result<Decomposition> {
    let s = slopes(m)?;
    let components = s
        .entries
        .iter()
        .map(|&(alpha, mult)| {
            let d = *alpha.denom() as u64;
            if mult % d == 0 {
                Ok((alpha, mult / d))
            } else {
                Err(Error::IndivisibleMultiplicity {
                    slope: alpha.to_string(),
                    multiplicity: mult,
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Decomposition { slopes: s, components })
}

/// `ord_p(det F^a) / a`, which equals the total weight of the slopes.
pub fn determinant_weight(m: &FIsocrystal) -> Result<Slope> {
    let det = determinant(&m.frobenius_power());
    let v = padic::valuation(&det, m.p)?;
    Ok(Slope::new(v, m.a as i64))
}
