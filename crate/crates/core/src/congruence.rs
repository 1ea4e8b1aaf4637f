//! Point-count congruence checks.
//!
//! Every check counts points exhaustively and compares a residue against the
//! residue the corresponding theorem predicts. Geometric hypotheses that
//! cannot be verified here (smoothness, birationality, rational
//! connectedness) are taken from the caller and recorded in the report.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{teichmuller, PadicInt};
use crate::polysys::{count_affine, count_projective, CountOptions, DegreeData, PolySystem, Polynomial};
use crate::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    ChevalleyWarning,
    AxKatz,
    Wan,
    Birational,
    Esnault,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub kind: CheckKind,
    /// The counted quantity: a point count, or a difference of two counts.
    pub count: i128,
    pub modulus: u128,
    pub residue: u128,
    pub expected_residue: u128,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_data: Option<DegreeData>,
    /// Hypotheses asserted by the caller rather than verified.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub assumptions: Vec<&'static str>,
}

impl CongruenceReport {
    fn new(kind: CheckKind, count: i128, modulus: u128, expected: u128) -> CongruenceReport {
        let residue = count.rem_euclid(modulus as i128) as u128;
        let expected_residue = expected % modulus;
        CongruenceReport {
            kind,
            count,
            modulus,
            residue,
            expected_residue,
            verdict: Verdict::from_bool(residue == expected_residue),
            degree_data: None,
            assumptions: Vec::new(),
        }
    }
}

fn checked_pow(base: u64, exp: u32) -> Result<u128> {
    (base as u128)
        .checked_pow(exp)
        .ok_or_else(|| Error::Overflow(format!("{base}^{exp}")))
}

/// `N ≡ 0 (mod p)` when `n > sum d_i`.
pub fn check_chevalley_warning(system: &PolySystem, opts: &CountOptions) -> Result<CongruenceReport> {
    let dd = system.degree_data()?;
    if dd.n as u32 <= dd.degree_sum() {
        return Err(Error::Inapplicable(format!(
            "n = {} is not larger than sum d_i = {}",
            dd.n,
            dd.degree_sum()
        )));
    }
    let n = count_affine(system, 1, opts)?;
    let mut report = CongruenceReport::new(CheckKind::ChevalleyWarning, n as i128, system.field().p() as u128, 0);
    report.degree_data = Some(dd);
    Ok(report)
}

/// `N ≡ 0 (mod q^b)` with `b = max(0, ceil((n - sum d_i) / max d_i))`.
pub fn check_ax_katz(system: &PolySystem, opts: &CountOptions) -> Result<CongruenceReport> {
    let dd = system.degree_data()?;
    let n = count_affine(system, 1, opts)?;
    let modulus = checked_pow(system.field().cardinality(), dd.b)?;
    let mut report = CongruenceReport::new(CheckKind::AxKatz, n as i128, modulus, 0);
    report.degree_data = Some(dd);
    Ok(report)
}

/// Rewrites a system over `F_{p^a}` as `a r` equations in `a n` variables
/// over `F_p` by substituting `x_j = sum_t x_{j,t} u^t` and splitting every
/// equation along the basis `1, u, ..., u^{a-1}`. Variable `x_{j,t}` becomes
/// index `j a + t`; equation `(i, t)` becomes index `i a + t`.
pub fn weil_restriction(system: &PolySystem) -> Result<PolySystem> {
    let field = system.field();
    let a = field.degree();
    if a < 2 {
        return Err(Error::Inapplicable(
            "restriction of scalars needs a proper extension of F_p".into(),
        ));
    }
    let prime = crate::ffield::make_field(field.p(), 1)?;
    let n = system.nvars();
    let na = n * a;

    let mut u_pow = field.one();
    let mut basis = Vec::with_capacity(a);
    for _ in 0..a {
        basis.push(u_pow.clone());
        u_pow = u_pow.mul(&field.generator())?;
    }
    let images = (0..n)
        .map(|j| {
            let mut acc = Polynomial::zero(field, na);
            for (t, ut) in basis.iter().enumerate() {
                acc = acc.add(&Polynomial::var(field, na, j * a + t).scale(ut)?)?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut out = Vec::with_capacity(system.polys().len() * a);
    for f in system.polys() {
        let g = f.substitute(&images)?;
        for t in 0..a {
            let terms = g
                .terms()
                .iter()
                .map(|m| (prime.from_int(m.coeff.coeffs()[t] as i64), m.exps.clone()));
            out.push(Polynomial::new(&prime, na, terms)?);
        }
    }
    let restricted = PolySystem::new(&prime, na, out)?;
    if system.is_homogeneous() {
        let blocks = system.block_ranges().iter().map(|r| r.len() * a).collect::<Vec<_>>();
        restricted.homogeneous(if blocks.len() > 1 { Some(blocks) } else { None })
    } else {
        Ok(restricted)
    }
}

/// The `p` roots of `x^p = x` in `Z/p^M`, ordered by residue.
pub fn teichmuller_set(p: u64, precision: u32) -> Result<Vec<PadicInt>> {
    if precision == 0 {
        return Err(Error::Inapplicable("precision must be at least 1".into()));
    }
    (0..p).map(|r| teichmuller(p, r, precision)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WanReport {
    pub precision: u32,
    /// `sum_{x in S^n} prod_i (1 - F_i(x)^{p^M (p-1)})` reduced mod `p^M`.
    pub sum: u64,
    pub report: CongruenceReport,
}

/// Evaluates the Teichmüller sum that is congruent to the point count
/// modulo `p^M`, and compares it with the exhaustive count.
pub fn wan_sum(system: &PolySystem, precision: u32, opts: &CountOptions) -> Result<WanReport> {
    let field = system.field();
    if !field.is_prime_field() {
        return Err(Error::NotPrimeField);
    }
    let p = field.p();
    let n = system.nvars();
    let work = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if work > opts.budget {
        return Err(Error::BudgetExceeded {
            what: "Teichmüller sum",
            needed: work,
            budget: opts.budget,
        });
    }
    let s = teichmuller_set(p, precision)?;
    let exponent = checked_pow(p, precision)? * (p as u128 - 1);
    let zero = PadicInt::new(p, precision, 0)?;
    let one = PadicInt::new(p, precision, 1)?;

    // coefficients lifted to their Teichmüller representatives
    let lifted: Vec<Vec<(PadicInt, &[u32])>> = system
        .polys()
        .iter()
        .map(|f| {
            f.terms()
                .iter()
                .map(|m| {
                    let c = m.coeff.as_prime_field().expect("prime field coefficient");
                    (s[c as usize], m.exps.as_slice())
                })
                .collect()
        })
        .collect();

    let mut total = zero;
    let mut idx = vec![0usize; n];
    loop {
        let mut prod = one;
        for f in &lifted {
            let mut value = zero;
            for (c, exps) in f {
                let mut t = *c;
                for (j, &e) in exps.iter().enumerate() {
                    if e > 0 {
                        t = t.mul(&s[idx[j]].pow(e as u128))?;
                    }
                }
                value = value.add(&t)?;
            }
            prod = prod.mul(&one.sub(&value.pow(exponent))?)?;
        }
        total = total.add(&prod)?;

        let mut j = 0;
        loop {
            if j == n {
                let count = count_affine(system, 1, opts)?;
                let modulus = total.modulus() as u128;
                let mut report = CongruenceReport::new(CheckKind::Wan, count as i128, modulus, total.value() as u128);
                report.degree_data = system.degree_data().ok();
                return Ok(WanReport {
                    precision,
                    sum: total.value(),
                    report,
                });
            }
            idx[j] += 1;
            if idx[j] < p as usize {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

fn same_base(x: &PolySystem, y: &PolySystem) -> Result<()> {
    if x.field() == y.field() {
        Ok(())
    } else {
        Err(Error::FieldMismatch)
    }
}

/// `#X(F_{q^s}) ≡ #Y(F_{q^s}) (mod q^s)` for birational smooth projective
/// `X`, `Y` (hypotheses asserted by the caller).
pub fn check_birational_pair(
    x: &PolySystem,
    y: &PolySystem,
    s: usize,
    opts: &CountOptions,
) -> Result<CongruenceReport> {
    same_base(x, y)?;
    let nx = count_projective(x, s, opts)? as i128;
    let ny = count_projective(y, s, opts)? as i128;
    let qs = checked_pow(x.field().cardinality(), s as u32)?;
    let mut report = CongruenceReport::new(CheckKind::Birational, nx - ny, qs, 0);
    report.assumptions = vec![
        "X and Y are smooth, proper and geometrically connected",
        "X and Y are birational",
    ];
    Ok(report)
}

/// `#X(F_{q^s}) ≡ 1 (mod q^s)` for smooth Fano (or chain rationally
/// connected) `X`, asserted by the caller.
pub fn check_esnault(x: &PolySystem, s: usize, opts: &CountOptions) -> Result<CongruenceReport> {
    let n = count_projective(x, s, opts)? as i128;
    let qs = checked_pow(x.field().cardinality(), s as u32)?;
    let mut report = CongruenceReport::new(CheckKind::Esnault, n, qs, 1);
    report.assumptions = vec!["X is smooth, projective and Fano (or chain rationally connected)"];
    Ok(report)
}
