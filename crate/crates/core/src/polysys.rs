//! Multivariate polynomial systems over finite fields and exhaustive point
//! counting over extensions `F_{q^s}`.

use std::collections::BTreeMap;
use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::ffield::{embed, make_field, FieldDesc, FieldElement, FieldEmbedding};

/// Default cap on the number of points a single count may visit.
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: FieldElement,
    pub exps: Vec<u32>,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }
}

/// A polynomial in canonical form: exponent vectors strictly increasing, no
/// zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: FieldDesc,
    nvars: usize,
    terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn new<I>(field: &FieldDesc, nvars: usize, terms: I) -> Result<Polynomial>
    where
        I: IntoIterator<Item = (FieldElement, Vec<u32>)>,
    {
        let mut acc: BTreeMap<Vec<u32>, FieldElement> = BTreeMap::new();
        for (c, e) in terms {
            if c.field() != field {
                return Err(Error::FieldMismatch);
            }
            if e.len() != nvars {
                return Err(Error::MalformedSystem(format!(
                    "exponent vector {e:?} has length {}, expected {nvars}",
                    e.len()
                )));
            }
            match acc.get_mut(&e) {
                Some(old) => *old = old.add(&c)?,
                None => {
                    acc.insert(e, c);
                }
            }
        }
        Ok(Self::from_map(field, nvars, acc))
    }

    fn from_map(field: &FieldDesc, nvars: usize, map: BTreeMap<Vec<u32>, FieldElement>) -> Self {
        let terms = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exps, coeff)| Monomial { coeff, exps })
            .collect();
        Polynomial {
            field: field.clone(),
            nvars,
            terms,
        }
    }

    fn to_map(&self) -> BTreeMap<Vec<u32>, FieldElement> {
        self.terms.iter().map(|m| (m.exps.clone(), m.coeff.clone())).collect()
    }

    pub fn zero(field: &FieldDesc, nvars: usize) -> Polynomial {
        Polynomial {
            field: field.clone(),
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(c: FieldElement, nvars: usize) -> Polynomial {
        let field = c.field().clone();
        Self::new(&field, nvars, [(c, vec![0; nvars])]).expect("constant term")
    }

    /// The variable `x_i`.
    pub fn var(field: &FieldDesc, nvars: usize, i: usize) -> Polynomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::new(field, nvars, [(field.one(), e)]).expect("variable")
    }

    /// Parses expressions like `x0*x1 + x2^3 - [0,1]*x0 + 1`.
    ///
    /// Variables are `x0 .. x{n-1}`, `u` is the field generator, integer
    /// constants are reduced mod p and `[c0,...]` is a field literal.
    pub fn parse(field: &FieldDesc, nvars: usize, src: &str) -> Result<Polynomial> {
        parse::expression(field, nvars, src)
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_homogeneous_in(&(0..self.nvars))
    }

    /// Whether every monomial has the same degree in the variables of `block`.
    pub fn is_homogeneous_in(&self, block: &Range<usize>) -> bool {
        let mut degs = self.terms.iter().map(|m| m.exps[block.clone()].iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.nvars {
            return Err(Error::MalformedSystem(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        if point.iter().any(|x| x.field() != &self.field) {
            return Err(Error::FieldMismatch);
        }
        let mut acc = self.field.zero();
        for m in &self.terms {
            let mut t = m.coeff.clone();
            for (x, &e) in point.iter().zip(&m.exps) {
                if e > 0 {
                    t = t.mul(&x.pow(e as u128))?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Evaluates at a point of an extension field, pushing coefficients
    /// through `emb`.
    pub fn evaluate_embedded(&self, emb: &FieldEmbedding, point: &[FieldElement]) -> Result<FieldElement> {
        self.base_change(emb)?.evaluate(point)
    }

    pub fn base_change(&self, emb: &FieldEmbedding) -> Result<Polynomial> {
        if emb.source() != &self.field {
            return Err(Error::FieldMismatch);
        }
        let terms = self
            .terms
            .iter()
            .map(|m| Ok((emb.apply(&m.coeff)?, m.exps.clone())))
            .collect::<Result<Vec<_>>>()?;
        Polynomial::new(emb.target(), self.nvars, terms)
    }

    /// Renames `x_i` to `x_{perm[i]}`.
    pub fn permute_vars(&self, perm: &[usize]) -> Polynomial {
        let terms = self.terms.iter().map(|m| {
            let mut e = vec![0; self.nvars];
            for (i, &k) in m.exps.iter().enumerate() {
                e[perm[i]] = k;
            }
            (m.coeff.clone(), e)
        });
        Polynomial::new(&self.field, self.nvars, terms).expect("permutation")
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.compatible(other)?;
        let mut map = self.to_map();
        for m in &other.terms {
            match map.get_mut(&m.exps) {
                Some(c) => *c = c.add(&m.coeff)?,
                None => {
                    map.insert(m.exps.clone(), m.coeff.clone());
                }
            }
        }
        Ok(Self::from_map(&self.field, self.nvars, map))
    }

    pub fn neg(&self) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|m| Monomial {
                coeff: m.coeff.neg(),
                exps: m.exps.clone(),
            })
            .collect();
        Polynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.compatible(other)?;
        let mut map: BTreeMap<Vec<u32>, FieldElement> = BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let e: Vec<u32> = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
                let c = a.coeff.mul(&b.coeff)?;
                match map.get_mut(&e) {
                    Some(old) => *old = old.add(&c)?,
                    None => {
                        map.insert(e, c);
                    }
                }
            }
        }
        Ok(Self::from_map(&self.field, self.nvars, map))
    }

    pub fn scale(&self, c: &FieldElement) -> Result<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|m| Ok((m.coeff.mul(c)?, m.exps.clone())))
            .collect::<Result<Vec<_>>>()?;
        Polynomial::new(&self.field, self.nvars, terms)
    }

    pub fn pow(&self, e: u32) -> Result<Polynomial> {
        let mut acc = Polynomial::constant(self.field.one(), self.nvars);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Substitutes `x_i -> images[i]`; all images share one variable set.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        let nv = images.first().map_or(0, |p| p.nvars);
        let mut acc = Polynomial::zero(&self.field, nv);
        for m in &self.terms {
            let mut t = Polynomial::constant(m.coeff.clone(), nv);
            for (img, &e) in images.iter().zip(&m.exps) {
                if e > 0 {
                    t = t.mul(&img.pow(e)?)?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    fn compatible(&self, other: &Polynomial) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.nvars != other.nvars {
            return Err(Error::MalformedSystem("variable counts differ".into()));
        }
        Ok(())
    }
}

/// `(n, [d_i], b)` with `b = max(0, ceil((n - sum d_i) / max d_i))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeData {
    pub n: usize,
    pub degrees: Vec<u32>,
    pub b: u32,
}

impl DegreeData {
    pub fn new(n: usize, degrees: Vec<u32>) -> Result<DegreeData> {
        let max = *degrees.iter().max().ok_or(Error::EmptySystem)?;
        if max == 0 {
            return Err(Error::ConstantSystem);
        }
        let sum: i64 = degrees.iter().map(|&d| d as i64).sum();
        let num = n as i64 - sum;
        let b = if num <= 0 {
            0
        } else {
            ((num + max as i64 - 1) / max as i64) as u32
        };
        Ok(DegreeData { n, degrees, b })
    }

    pub fn degree_sum(&self) -> u32 {
        self.degrees.iter().sum()
    }
}

/// `r` polynomials over a common field in a common set of variables.
///
/// `blocks` partitions the variables into consecutive groups for
/// multiprojective spaces; `None` means a single block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    field: FieldDesc,
    nvars: usize,
    polys: Vec<Polynomial>,
    homogeneous: bool,
    blocks: Option<Vec<usize>>,
}

impl PolySystem {
    pub fn new(field: &FieldDesc, nvars: usize, polys: Vec<Polynomial>) -> Result<PolySystem> {
        for f in &polys {
            if f.field() != field {
                return Err(Error::FieldMismatch);
            }
            if f.nvars() != nvars {
                return Err(Error::MalformedSystem("variable counts differ".into()));
            }
        }
        Ok(PolySystem {
            field: field.clone(),
            nvars,
            polys,
            homogeneous: false,
            blocks: None,
        })
    }

    /// Marks the system as (multi)homogeneous, verifying every polynomial.
    pub fn homogeneous(mut self, blocks: Option<Vec<usize>>) -> Result<PolySystem> {
        if let Some(b) = &blocks {
            if b.iter().sum::<usize>() != self.nvars || b.contains(&0) {
                return Err(Error::MalformedSystem(format!(
                    "blocks {b:?} do not partition {} variables",
                    self.nvars
                )));
            }
        }
        self.blocks = blocks;
        for (i, f) in self.polys.iter().enumerate() {
            for r in self.block_ranges() {
                if !f.is_homogeneous_in(&r) {
                    return Err(Error::NotHomogeneous(format!("polynomial {i} in variables {r:?}")));
                }
            }
        }
        self.homogeneous = true;
        Ok(self)
    }

    /// Parses one polynomial per string with [`Polynomial::parse`].
    pub fn parse(field: &FieldDesc, nvars: usize, polys: &[&str]) -> Result<PolySystem> {
        let polys = polys
            .iter()
            .map(|s| Polynomial::parse(field, nvars, s))
            .collect::<Result<Vec<_>>>()?;
        PolySystem::new(field, nvars, polys)
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn blocks(&self) -> Option<&[usize]> {
        self.blocks.as_deref()
    }

    pub fn block_ranges(&self) -> Vec<Range<usize>> {
        match &self.blocks {
            None => vec![0..self.nvars],
            Some(b) => {
                let mut start = 0;
                b.iter()
                    .map(|&k| {
                        let r = start..start + k;
                        start += k;
                        r
                    })
                    .collect()
            }
        }
    }

    pub fn with_poly(&self, f: Polynomial) -> Result<PolySystem> {
        let mut polys = self.polys.clone();
        polys.push(f);
        let sys = PolySystem::new(&self.field, self.nvars, polys)?;
        if self.homogeneous {
            sys.homogeneous(self.blocks.clone())
        } else {
            Ok(sys)
        }
    }

    pub fn permute_vars(&self, perm: &[usize]) -> PolySystem {
        PolySystem {
            polys: self.polys.iter().map(|f| f.permute_vars(perm)).collect(),
            ..self.clone()
        }
    }

    pub fn reorder_polys(&self, order: &[usize]) -> PolySystem {
        PolySystem {
            polys: order.iter().map(|&i| self.polys[i].clone()).collect(),
            ..self.clone()
        }
    }

    pub fn base_change(&self, emb: &FieldEmbedding) -> Result<PolySystem> {
        let polys = self
            .polys
            .iter()
            .map(|f| f.base_change(emb))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolySystem {
            field: emb.target().clone(),
            polys,
            ..self.clone()
        })
    }

    /// Degree data of the nonzero polynomials.
    pub fn degree_data(&self) -> Result<DegreeData> {
        DegreeData::new(self.nvars, self.polys.iter().filter_map(Polynomial::degree).collect())
    }

    pub fn from_json_str(src: &str) -> Result<PolySystem> {
        let raw: SystemJson = serde_json::from_str(src).map_err(|e| Error::MalformedSystem(e.to_string()))?;
        raw.into_system()
    }

    pub fn to_json(&self) -> Value {
        let polys: Vec<Vec<TermJson>> = self
            .polys
            .iter()
            .map(|f| {
                f.terms()
                    .iter()
                    .map(|m| TermJson {
                        c: serde_json::to_value(m.coeff.coeffs()).expect("coefficients"),
                        e: m.exps.clone(),
                    })
                    .collect()
            })
            .collect();
        serde_json::to_value(SystemJson {
            p: self.field.p(),
            a: self.field.degree(),
            nvars: self.nvars,
            homogeneous: self.homogeneous,
            polys,
            blocks: self.blocks.clone(),
        })
        .expect("serializable system")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    c: Value,
    e: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemJson {
    p: u64,
    a: usize,
    nvars: usize,
    #[serde(default)]
    homogeneous: bool,
    polys: Vec<Vec<TermJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    blocks: Option<Vec<usize>>,
}

impl SystemJson {
    fn into_system(self) -> Result<PolySystem> {
        let field = make_field(self.p, self.a)?;
        let polys = self
            .polys
            .iter()
            .map(|terms| {
                let terms = terms
                    .iter()
                    .map(|t| Ok((field.element_from_json(&t.c)?, t.e.clone())))
                    .collect::<Result<Vec<_>>>()?;
                Polynomial::new(&field, self.nvars, terms)
            })
            .collect::<Result<Vec<_>>>()?;
        let sys = PolySystem::new(&field, self.nvars, polys)?;
        if self.homogeneous || self.blocks.is_some() {
            sys.homogeneous(self.blocks)
        } else {
            Ok(sys)
        }
    }
}

// ---------------------------------------------------------------------------
// counting

#[derive(Debug, Clone, Copy)]
pub struct CountOptions {
    /// Maximum number of points visited.
    pub budget: u128,
    /// Worker count; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            budget: DEFAULT_BUDGET,
            threads: None,
        }
    }
}

struct CompiledTerm {
    coeff: Vec<u64>,
    vars: Vec<(usize, u32)>,
}

struct Kernel<'a> {
    field: &'a FieldDesc,
    nvars: usize,
    polys: Vec<Vec<CompiledTerm>>,
    max_exp: Vec<u32>,
    blocks: Option<Vec<Range<usize>>>,
}

impl Kernel<'_> {
    fn new<'a>(
        field: &'a FieldDesc,
        nvars: usize,
        polys: &[Polynomial],
        blocks: Option<Vec<Range<usize>>>,
    ) -> Kernel<'a> {
        let mut max_exp = vec![0u32; nvars];
        let compiled = polys
            .iter()
            .filter(|f| !f.is_zero())
            .map(|f| {
                f.terms()
                    .iter()
                    .map(|m| {
                        let vars: Vec<(usize, u32)> = m
                            .exps
                            .iter()
                            .enumerate()
                            .filter(|(_, &e)| e > 0)
                            .map(|(i, &e)| (i, e))
                            .collect();
                        for &(i, e) in &vars {
                            max_exp[i] = max_exp[i].max(e);
                        }
                        CompiledTerm {
                            coeff: m.coeff.coeffs().to_vec(),
                            vars,
                        }
                    })
                    .collect()
            })
            .collect();
        Kernel {
            field,
            nvars,
            polys: compiled,
            max_exp,
            blocks,
        }
    }

    /// Counts zeros whose last coordinate has enumeration index `outer`.
    fn count_with_outer(&self, outer: Option<u64>) -> u64 {
        let a = self.field.degree();
        let q = self.field.cardinality();
        let n = self.nvars;
        let stride: Vec<usize> = self.max_exp.iter().map(|&e| (e as usize + 1) * a).collect();
        let mut tables: Vec<Vec<u64>> = stride.iter().map(|&s| vec![0u64; s]).collect();
        let mut idx = vec![0u64; n];
        let mut coord = vec![0u64; a];
        let mut t = vec![0u64; a];
        let mut acc = vec![0u64; a];
        let mut tmp = vec![0u64; a];

        let refresh = |j: usize, index: u64, tables: &mut Vec<Vec<u64>>, coord: &mut Vec<u64>| {
            self.field.decode_into(index, coord);
            let tab = &mut tables[j];
            tab[..a].iter_mut().for_each(|c| *c = 0);
            tab[0] = 1;
            for k in 1..=self.max_exp[j] as usize {
                let (prev, cur) = tab.split_at_mut(k * a);
                self.field.mul_into(&prev[(k - 1) * a..], coord, &mut cur[..a]);
            }
        };

        let inner = match outer {
            Some(v) => {
                idx[n - 1] = v;
                n - 1
            }
            None => n,
        };
        for j in 0..n {
            refresh(j, idx[j], &mut tables, &mut coord);
        }

        let mut count = 0u64;
        loop {
            if self.point_in_domain(&idx) && self.is_zero_at(&tables, &mut t, &mut acc, &mut tmp) {
                count += 1;
            }
            // odometer over the inner coordinates, x0 fastest
            let mut j = 0;
            loop {
                if j == inner {
                    return count;
                }
                idx[j] += 1;
                if idx[j] < q {
                    refresh(j, idx[j], &mut tables, &mut coord);
                    break;
                }
                idx[j] = 0;
                refresh(j, 0, &mut tables, &mut coord);
                j += 1;
            }
        }
    }

    fn point_in_domain(&self, idx: &[u64]) -> bool {
        match &self.blocks {
            None => true,
            Some(bs) => bs.iter().all(|r| idx[r.clone()].iter().any(|&i| i != 0)),
        }
    }

    fn is_zero_at(&self, tables: &[Vec<u64>], t: &mut [u64], acc: &mut [u64], tmp: &mut [u64]) -> bool {
        let a = self.field.degree();
        for f in &self.polys {
            acc.iter_mut().for_each(|c| *c = 0);
            for term in f {
                t.copy_from_slice(&term.coeff);
                for &(i, e) in &term.vars {
                    let e = e as usize;
                    self.field.mul_into(t, &tables[i][e * a..(e + 1) * a], tmp);
                    t.copy_from_slice(tmp);
                }
                self.field.add_into(acc, t, tmp);
                acc.copy_from_slice(tmp);
            }
            if acc.iter().any(|&c| c != 0) {
                return false;
            }
        }
        true
    }

    fn count(&self, threads: Option<usize>) -> Result<u64> {
        if self.nvars == 0 {
            return Ok(self.count_with_outer(None));
        }
        let q = self.field.cardinality();
        let run = || (0..q).into_par_iter().map(|v| self.count_with_outer(Some(v))).sum();
        match threads {
            None => Ok(run()),
            Some(t) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(t.max(1))
                    .build()
                    .map_err(|e| Error::Overflow(format!("thread pool: {e}")))?;
                Ok(pool.install(run))
            }
        }
    }
}

/// The field `F_{q^s}` over which a system is counted, with the embedding.
pub fn extension_of(field: &FieldDesc, s: usize) -> Result<FieldEmbedding> {
    if s == 0 {
        return Err(Error::MalformedSystem("extension degree must be >= 1".into()));
    }
    if s == 1 {
        return Ok(FieldEmbedding::identity(field));
    }
    let target = make_field(field.p(), field.degree() * s)?;
    embed(field, &target)
}

fn check_budget(q: u64, nvars: usize, budget: u128) -> Result<()> {
    let needed = (q as u128).checked_pow(nvars as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: "point enumeration",
            needed,
            budget,
        });
    }
    Ok(())
}

/// Number of common zeros in `(F_{q^s})^n`.
pub fn count_affine(system: &PolySystem, s: usize, opts: &CountOptions) -> Result<u64> {
    let emb = extension_of(system.field(), s)?;
    check_budget(emb.target().cardinality(), system.nvars(), opts.budget)?;
    let sys = system.base_change(&emb)?;
    Kernel::new(emb.target(), sys.nvars(), sys.polys(), None).count(opts.threads)
}

/// Number of points in (multi)projective space over `F_{q^s}`: zeros with
/// every block nonzero, divided by `(q^s - 1)` once per block.
pub fn count_projective(system: &PolySystem, s: usize, opts: &CountOptions) -> Result<u64> {
    if !system.is_homogeneous() {
        for (i, f) in system.polys().iter().enumerate() {
            if !f.is_homogeneous() {
                return Err(Error::NotHomogeneous(format!("polynomial {i}")));
            }
        }
    }
    let emb = extension_of(system.field(), s)?;
    let qs = emb.target().cardinality();
    check_budget(qs, system.nvars(), opts.budget)?;
    let sys = system.base_change(&emb)?;
    let blocks = system.block_ranges();
    let nblocks = blocks.len() as u32;
    let cone = Kernel::new(emb.target(), sys.nvars(), sys.polys(), Some(blocks)).count(opts.threads)?;
    let unit = (qs - 1).pow(nblocks);
    if cone % unit != 0 {
        return Err(Error::IntegralityViolation(format!(
            "{cone} cone points not divisible by (q^s - 1)^{nblocks} = {unit}"
        )));
    }
    Ok(cone / unit)
}

mod parse {
    use super::*;

    struct Lexer<'s> {
        src: &'s [u8],
        pos: usize,
    }

    impl Lexer<'_> {
        fn skip_ws(&mut self) {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
        }

        fn peek(&mut self) -> Option<u8> {
            self.skip_ws();
            self.src.get(self.pos).copied()
        }

        fn number(&mut self) -> Result<u64> {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.error("expected a number"))
        }

        fn error(&self, msg: &str) -> Error {
            Error::MalformedSystem(format!(
                "{msg} at offset {} in {:?}",
                self.pos,
                String::from_utf8_lossy(self.src)
            ))
        }
    }

    pub fn expression(field: &FieldDesc, nvars: usize, src: &str) -> Result<Polynomial> {
        let mut lx = Lexer {
            src: src.as_bytes(),
            pos: 0,
        };
        let mut acc = Polynomial::zero(field, nvars);
        let mut sign = match lx.peek() {
            Some(b'-') => {
                lx.pos += 1;
                true
            }
            Some(b'+') => {
                lx.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = term(field, nvars, &mut lx)?;
            acc = acc.add(&if sign { t.neg() } else { t })?;
            match lx.peek() {
                None => return Ok(acc),
                Some(b'+') => sign = false,
                Some(b'-') => sign = true,
                Some(_) => return Err(lx.error("expected '+' or '-'")),
            }
            lx.pos += 1;
        }
    }

    fn term(field: &FieldDesc, nvars: usize, lx: &mut Lexer<'_>) -> Result<Polynomial> {
        let mut acc = Polynomial::constant(field.one(), nvars);
        loop {
            let base = match lx.peek() {
                Some(b'x') => {
                    lx.pos += 1;
                    let i = lx.number()? as usize;
                    if i >= nvars {
                        return Err(lx.error("variable index out of range"));
                    }
                    Polynomial::var(field, nvars, i)
                }
                Some(b'u') => {
                    lx.pos += 1;
                    Polynomial::constant(field.generator(), nvars)
                }
                Some(b'[') => {
                    let start = lx.pos;
                    while lx.pos < lx.src.len() && lx.src[lx.pos] != b']' {
                        lx.pos += 1;
                    }
                    lx.pos += 1;
                    let lit = std::str::from_utf8(&lx.src[start..lx.pos.min(lx.src.len())]).unwrap();
                    Polynomial::constant(field.parse_literal(lit)?, nvars)
                }
                Some(c) if c.is_ascii_digit() => {
                    let n = lx.number()?;
                    Polynomial::constant(field.from_int((n % field.p()) as i64), nvars)
                }
                Some(b'(') => {
                    lx.pos += 1;
                    let start = lx.pos;
                    let mut depth = 1;
                    while lx.pos < lx.src.len() && depth > 0 {
                        match lx.src[lx.pos] {
                            b'(' => depth += 1,
                            b')' => depth -= 1,
                            _ => {}
                        }
                        lx.pos += 1;
                    }
                    if depth != 0 {
                        return Err(lx.error("unbalanced parenthesis"));
                    }
                    let inner = std::str::from_utf8(&lx.src[start..lx.pos - 1]).unwrap();
                    expression(field, nvars, inner)?
                }
                _ => return Err(lx.error("expected a factor")),
            };
            let factor = if lx.peek() == Some(b'^') {
                lx.pos += 1;
                base.pow(lx.number()? as u32)?
            } else {
                base
            };
            acc = acc.mul(&factor)?;
            if lx.peek() == Some(b'*') {
                lx.pos += 1;
            } else {
                return Ok(acc);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64, a: usize) -> FieldDesc {
        make_field(p, a).unwrap()
    }

    /// Independent oracle: evaluate every point with the slow element API.
    fn brute_count(sys: &PolySystem, s: usize) -> u64 {
        let emb = extension_of(sys.field(), s).unwrap();
        let sys = sys.base_change(&emb).unwrap();
        let elems = emb.target().enumerate().unwrap();
        let q = elems.len();
        let n = sys.nvars();
        let total = q.pow(n as u32);
        let mut count = 0;
        for mut i in 0..total {
            let mut pt = Vec::with_capacity(n);
            for _ in 0..n {
                pt.push(elems[i % q].clone());
                i /= q;
            }
            if sys.polys().iter().all(|g| g.evaluate(&pt).unwrap().is_zero()) {
                count += 1;
            }
        }
        count
    }

    fn affine(sys: &PolySystem, s: usize) -> u64 {
        count_affine(sys, s, &CountOptions::default()).unwrap()
    }

    fn proj(sys: &PolySystem, s: usize) -> u64 {
        count_projective(sys, s, &CountOptions::default()).unwrap()
    }

    #[test]
    fn parse_and_canonical_form() {
        let f2 = f(2, 1);
        let p = Polynomial::parse(&f2, 3, "x0*x1 + x2 + x2").unwrap();
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.degree(), Some(2));
        let z = Polynomial::parse(&f2, 2, "x0 - x0").unwrap();
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        let f4 = f(2, 2);
        let p = Polynomial::parse(&f4, 1, "x0 + u").unwrap();
        assert_eq!(p.evaluate(&[f4.generator()]).unwrap(), f4.zero());
        let p = Polynomial::parse(&f4, 2, "(x0 + [1,1]*x1)^2").unwrap();
        assert!(p.is_homogeneous());
        assert!(Polynomial::parse(&f2, 2, "x2").is_err());
        assert!(Polynomial::parse(&f2, 2, "x0 +").is_err());
    }

    #[test]
    fn evaluate_examples() {
        let f2 = f(2, 1);
        let p = Polynomial::parse(&f2, 3, "x0*x1 + x2").unwrap();
        let one = f2.one();
        assert!(p.evaluate(&[one.clone(), one.clone(), one.clone()]).unwrap().is_zero());

        let f4 = f(2, 2);
        let cube = Polynomial::parse(&f4, 1, "x0^3").unwrap();
        assert!(cube.evaluate(&[f4.generator()]).unwrap().is_one());

        let zero = Polynomial::zero(&f4, 2);
        assert!(zero.evaluate(&[f4.one(), f4.generator()]).unwrap().is_zero());

        assert_eq!(
            p.evaluate(&[f4.one(), f4.one(), f4.one()]).unwrap_err(),
            Error::FieldMismatch
        );

        // coefficients pushed through an embedding
        let emb = embed(&f2, &f4).unwrap();
        let v = p
            .evaluate_embedded(&emb, &[f4.generator(), f4.generator(), f4.one()])
            .unwrap();
        // u^2 + 1 = u
        assert_eq!(v, f4.generator());
    }

    #[test]
    fn affine_examples() {
        let f2 = f(2, 1);
        let sys = PolySystem::parse(&f2, 3, &["x0*x1 + x2"]).unwrap();
        assert_eq!(affine(&sys, 1), 4);
        assert_eq!(brute_count(&sys, 1), 4);

        let f5 = f(5, 1);
        let sys = PolySystem::parse(&f5, 1, &["x0"]).unwrap();
        assert_eq!(affine(&sys, 1), 1);

        let f3 = f(3, 1);
        let empty = PolySystem::new(&f3, 2, vec![]).unwrap();
        assert_eq!(affine(&empty, 1), 9);
        assert_eq!(affine(&empty, 2), 81);
    }

    #[test]
    fn projective_examples() {
        let f2 = f(2, 1);
        let plane = PolySystem::new(&f2, 3, vec![]).unwrap().homogeneous(None).unwrap();
        assert_eq!(proj(&plane, 1), 7);
        assert_eq!(proj(&plane, 2), 21);

        let quadric = PolySystem::parse(&f2, 4, &["x0*x3 - x1*x2"])
            .unwrap()
            .homogeneous(None)
            .unwrap();
        assert_eq!(proj(&quadric, 1), 9);
        assert_eq!(brute_count(&quadric, 1) - 1, 9);

        let fermat = PolySystem::parse(&f2, 4, &["x0^3 + x1^3 + x2^3 + x3^3"])
            .unwrap()
            .homogeneous(None)
            .unwrap();
        let oracle = brute_count(&fermat, 1) - 1;
        assert_eq!(proj(&fermat, 1), oracle);

        let bad = PolySystem::parse(&f2, 2, &["x0 + 1"]).unwrap();
        assert!(matches!(
            count_projective(&bad, 1, &CountOptions::default()),
            Err(Error::NotHomogeneous(_))
        ));
        assert!(matches!(bad.clone().homogeneous(None), Err(Error::NotHomogeneous(_))));
    }

    #[test]
    fn biprojective_blow_up() {
        for p in [2u64, 3] {
            let fp = f(p, 1);
            let bl = PolySystem::parse(&fp, 5, &["x0*x4 - x1*x3"])
                .unwrap()
                .homogeneous(Some(vec![3, 2]))
                .unwrap();
            // P^2 with one point replaced by a P^1
            let q = p;
            assert_eq!(proj(&bl, 1), q * q + 2 * q + 1);
        }
        let f2 = f(2, 1);
        let not_bihom = PolySystem::parse(&f2, 5, &["x0*x4 - x1"]).unwrap();
        assert!(not_bihom.homogeneous(Some(vec![3, 2])).is_err());
        let bad_blocks = PolySystem::new(&f2, 5, vec![]).unwrap();
        assert!(bad_blocks.homogeneous(Some(vec![3, 3])).is_err());
    }

    #[test]
    fn degree_data_examples() {
        assert_eq!(DegreeData::new(4, vec![1]).unwrap().b, 3);
        assert_eq!(DegreeData::new(3, vec![2]).unwrap().b, 1);
        assert_eq!(DegreeData::new(2, vec![2, 3]).unwrap().b, 0);
        assert_eq!(DegreeData::new(2, vec![]).unwrap_err(), Error::EmptySystem);
        let f2 = f(2, 1);
        let sys = PolySystem::new(&f2, 2, vec![Polynomial::zero(&f2, 2)]).unwrap();
        assert_eq!(sys.degree_data().unwrap_err(), Error::EmptySystem);
        let sys = PolySystem::parse(&f2, 3, &["x0*x1 + x2", "0"]).unwrap();
        assert_eq!(sys.degree_data().unwrap().degrees, vec![2]);
    }

    #[test]
    fn budget_is_enforced() {
        let f3 = f(3, 1);
        let sys = PolySystem::parse(&f3, 4, &["x0"]).unwrap();
        let opts = CountOptions {
            budget: 80,
            threads: Some(1),
        };
        assert!(matches!(
            count_affine(&sys, 1, &opts),
            Err(Error::BudgetExceeded { .. })
        ));
        let opts = CountOptions {
            budget: 81,
            threads: Some(2),
        };
        assert_eq!(count_affine(&sys, 1, &opts).unwrap(), 27);
    }

    #[test]
    fn extension_counts_agree_with_native_coefficients() {
        let f2 = f(2, 1);
        let f4 = f(2, 2);
        for src in [
            &["x0*x1 + x2"][..],
            &["x0^2 + x0*x1 + 1", "x1^3 + x0"],
            &["x0^3 + x1^3 + x2^3"],
        ] {
            let sys = PolySystem::parse(&f2, 3, src).unwrap();
            let native = PolySystem::parse(&f4, 3, src).unwrap();
            assert_eq!(affine(&sys, 2), affine(&native, 1));
            assert_eq!(affine(&sys, 2), brute_count(&native, 1));
        }
    }

    #[test]
    fn json_round_trip_and_strictness() {
        let src =
            r#"{"p":2,"a":1,"nvars":3,"homogeneous":false,"polys":[[{"c":[1],"e":[1,1,0]},{"c":[1],"e":[0,0,1]}]]}"#;
        let sys = PolySystem::from_json_str(src).unwrap();
        assert_eq!(affine(&sys, 1), 4);
        let again = PolySystem::from_json_str(&sys.to_json().to_string()).unwrap();
        assert_eq!(again, sys);

        let unknown = r#"{"p":2,"a":1,"nvars":1,"polys":[],"extra":1}"#;
        assert!(matches!(
            PolySystem::from_json_str(unknown),
            Err(Error::MalformedSystem(_))
        ));
        let f4 = r#"{"p":2,"a":2,"nvars":1,"polys":[[{"c":[0,1],"e":[1]},{"c":1,"e":[0]}]]}"#;
        let sys = PolySystem::from_json_str(f4).unwrap();
        assert_eq!(affine(&sys, 1), 1);
        let bl = r#"{"p":2,"a":1,"nvars":5,"homogeneous":true,"blocks":[3,2],"polys":[[{"c":1,"e":[1,0,0,0,1]},{"c":1,"e":[0,1,0,1,0]}]]}"#;
        let sys = PolySystem::from_json_str(bl).unwrap();
        assert_eq!(proj(&sys, 1), 9);
    }

    mod props {
        use super::*;
        use crate::corpus::random_system;
        use proptest::prelude::*;
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn counts_invariant_under_permutations(seed in 0u64..10_000, p in prop::sample::select(vec![2u64, 3])) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let field = make_field(p, 1).unwrap();
                let sys = random_system(&mut rng, &field, 3, 3, 3);
                let base = affine(&sys, 1);
                prop_assert_eq!(base, brute_count(&sys, 1));

                let mut perm: Vec<usize> = (0..sys.nvars()).collect();
                perm.shuffle(&mut rng);
                prop_assert_eq!(affine(&sys.permute_vars(&perm), 1), base);

                let mut order: Vec<usize> = (0..sys.polys().len()).collect();
                order.shuffle(&mut rng);
                prop_assert_eq!(affine(&sys.reorder_polys(&order), 1), base);

                let padded = sys.with_poly(Polynomial::zero(&field, sys.nvars())).unwrap();
                prop_assert_eq!(affine(&padded, 1), base);
            }
        }
    }
}
