//! Seeded random polynomial systems for the exhaustive congruence suites.
//!
//! All generators draw from `ChaCha8Rng`, so a `(seed, count)` pair always
//! yields the same corpus.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ffield::{make_field, FieldDesc, FieldElement};
use crate::isocrystal::FIsocrystal;
use crate::polysys::{PolySystem, Polynomial};
use crate::rational::rat;

fn random_nonzero<R: Rng>(rng: &mut R, field: &FieldDesc) -> FieldElement {
    let q = field.cardinality();
    field.element_at(rng.gen_range(1..q))
}

fn random_exponents<R: Rng>(rng: &mut R, nvars: usize, degree: u32) -> Vec<u32> {
    let mut e = vec![0u32; nvars];
    for _ in 0..degree {
        e[rng.gen_range(0..nvars)] += 1;
    }
    e
}

/// A polynomial of total degree exactly `degree` with one to four terms.
pub fn random_polynomial<R: Rng>(rng: &mut R, field: &FieldDesc, nvars: usize, degree: u32) -> Polynomial {
    loop {
        let nterms = rng.gen_range(1..=4);
        let mut terms = vec![(random_nonzero(rng, field), random_exponents(rng, nvars, degree))];
        for _ in 1..nterms {
            let d = rng.gen_range(0..=degree);
            terms.push((random_nonzero(rng, field), random_exponents(rng, nvars, d)));
        }
        let f = Polynomial::new(field, nvars, terms).expect("well-formed terms");
        if f.degree() == Some(degree) {
            return f;
        }
    }
}

/// `1..=max_nvars` variables, `1..=max_polys` polynomials of degree `1..=max_degree`.
pub fn random_system<R: Rng>(
    rng: &mut R,
    field: &FieldDesc,
    max_nvars: usize,
    max_degree: u32,
    max_polys: usize,
) -> PolySystem {
    let nvars = rng.gen_range(1..=max_nvars);
    let r = rng.gen_range(1..=max_polys);
    let polys = (0..r)
        .map(|_| {
            let d = rng.gen_range(1..=max_degree);
            random_polynomial(rng, field, nvars, d)
        })
        .collect();
    PolySystem::new(field, nvars, polys).expect("consistent system")
}

/// A random system with `sum d_i < n`, the Chevalley–Warning hypothesis.
pub fn random_cw_system<R: Rng>(rng: &mut R, field: &FieldDesc, max_nvars: usize, max_degree: u32) -> PolySystem {
    let nvars = rng.gen_range(2..=max_nvars.max(2));
    let mut budget = nvars as u32 - 1;
    let mut polys = Vec::new();
    while budget > 0 && (polys.is_empty() || rng.gen_bool(0.5)) {
        let d = rng.gen_range(1..=budget.min(max_degree));
        polys.push(random_polynomial(rng, field, nvars, d));
        budget -= d;
    }
    PolySystem::new(field, nvars, polys).expect("consistent system")
}

fn fields(specs: &[(u64, usize)]) -> Vec<FieldDesc> {
    specs
        .iter()
        .map(|&(p, a)| make_field(p, a).expect("small field"))
        .collect()
}

/// Systems over `F_2` and `F_3` with `n <= 4`, `d_i <= 3`, at most three equations.
pub fn ax_katz_corpus(seed: u64, count: usize) -> Vec<PolySystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs = fields(&[(2, 1), (3, 1)]);
    (0..count)
        .map(|i| random_system(&mut rng, &fs[i % 2], 4, 3, 3))
        .collect()
}

/// As [`ax_katz_corpus`], restricted to `sum d_i < n`.
pub fn chevalley_warning_corpus(seed: u64, count: usize) -> Vec<PolySystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs = fields(&[(2, 1), (3, 1)]);
    (0..count)
        .map(|i| random_cw_system(&mut rng, &fs[i % 2], 4, 3))
        .collect()
}

/// Systems over `F_2` and `F_3` with `n <= 3`.
pub fn wan_corpus(seed: u64, count: usize) -> Vec<PolySystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs = fields(&[(2, 1), (3, 1)]);
    (0..count)
        .map(|i| random_system(&mut rng, &fs[i % 2], 3, 3, 3))
        .collect()
}

/// Systems over `F_4` and `F_9` with `n <= 2`.
pub fn weil_restriction_corpus(seed: u64, count: usize) -> Vec<PolySystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs = fields(&[(2, 2), (3, 2)]);
    (0..count)
        .map(|i| random_system(&mut rng, &fs[i % 2], 2, 3, 2))
        .collect()
}

/// Invertible rational matrices of size 1 to 4 over `p in {2, 3}`, `a in {1, 2}`,
/// with entries `+-p^k u / v` for small `k`, `u`, `v`.
pub fn isocrystal_corpus(seed: u64, count: usize) -> Vec<FIsocrystal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = [2u64, 3][rng.gen_range(0..2)];
        let a = rng.gen_range(1..=2);
        let n = rng.gen_range(1..=4);
        let matrix = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        if rng.gen_bool(0.3) {
                            return rat(0, 1);
                        }
                        let k = rng.gen_range(-2i32..=3);
                        let u = rng.gen_range(1..=5i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
                        let v = rng.gen_range(1..=5i64);
                        let pk = (p as i64).pow(k.unsigned_abs());
                        if k >= 0 {
                            rat(u * pk, v)
                        } else {
                            rat(u, v * pk)
                        }
                    })
                    .collect()
            })
            .collect();
        if let Ok(m) = FIsocrystal::new(p, a, matrix) {
            out.push(m);
        }
    }
    out
}
