//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;

use fqzeta::congruence::{
    check_ax_katz, check_birational_pair, check_chevalley_warning, check_esnault, wan_sum, weil_restriction,
};
use fqzeta::corpus;
use fqzeta::ffield::make_field;
use fqzeta::isocrystal::{determinant_weight, direct_sum, slopes, standard, tensor};
use fqzeta::polygon::{check_mazur, ci_hodge_numbers, hodge_polygon, newton_of_polynomial, HodgeNumbers, Slope};
use fqzeta::polysys::{count_affine, count_projective, CountOptions, PolySystem};
use fqzeta::rational::Rational;
use fqzeta::zeta::{curve_numerator, middle_factor_symmetric, slope_interval_check, trace_formula_counts, WeilData};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn opts() -> CountOptions {
    CountOptions::default()
}

fn projective(p: u64, n: usize, polys: &[&str]) -> PolySystem {
    PolySystem::parse(&make_field(p, 1).unwrap(), n, polys)
        .unwrap()
        .homogeneous(None)
        .unwrap()
}

fn blow_up(p: u64) -> PolySystem {
    PolySystem::parse(&make_field(p, 1).unwrap(), 5, &["x0*x4 - x1*x3"])
        .unwrap()
        .homogeneous(Some(vec![3, 2]))
        .unwrap()
}

struct Curve {
    name: &'static str,
    p: u64,
    genus: usize,
    system: PolySystem,
}

fn curves() -> Vec<Curve> {
    vec![
        Curve {
            name: "y^2 + y = x^3 over F_2",
            p: 2,
            genus: 1,
            system: projective(2, 3, &["x1^2*x2 + x1*x2^2 + x0^3"]),
        },
        Curve {
            name: "y^2 + xy = x^3 + 1 over F_2",
            p: 2,
            genus: 1,
            system: projective(2, 3, &["x1^2*x2 + x0*x1*x2 + x0^3 + x2^3"]),
        },
        Curve {
            name: "y^2 = x^3 + 2x + 1 over F_3",
            p: 3,
            genus: 1,
            system: projective(3, 3, &["x1^2*x2 - x0^3 - 2*x0*x2^2 - x2^3"]),
        },
        Curve {
            name: "Klein quartic over F_2",
            p: 2,
            genus: 3,
            system: projective(2, 3, &["x0^3*x1 + x1^3*x2 + x2^3*x0"]),
        },
    ]
}

fn counts(system: &PolySystem, upto: usize) -> Vec<u64> {
    (1..=upto)
        .map(|s| count_projective(system, s, &opts()).unwrap())
        .collect()
}

fn chevalley_warning() -> Outcome {
    let corpus = corpus::chevalley_warning_corpus(1, 500);
    let passed = corpus
        .iter()
        .filter(|s| {
            check_chevalley_warning(s, &opts())
                .map(|r| r.verdict.passed())
                .unwrap_or(false)
        })
        .count();
    outcome(passed == corpus.len(), format!("{passed}/{} systems", corpus.len()))
}

fn ax_katz() -> Outcome {
    let corpus = corpus::ax_katz_corpus(2, 500);
    let passed = corpus
        .iter()
        .filter(|s| check_ax_katz(s, &opts()).map(|r| r.verdict.passed()).unwrap_or(false))
        .count();
    outcome(passed == corpus.len(), format!("{passed}/{} systems", corpus.len()))
}

fn moreno_moreno() -> Outcome {
    let corpus = corpus::weil_restriction_corpus(3, 100);
    let mut count_ok = 0;
    let mut b_ok = 0;
    for sys in &corpus {
        let a = sys.field().degree() as u32;
        let restricted = weil_restriction(sys).unwrap();
        if count_affine(sys, 1, &opts()).unwrap() == count_affine(&restricted, 1, &opts()).unwrap() {
            count_ok += 1;
        }
        let b = sys.degree_data().unwrap().b;
        if restricted.degree_data().map(|d| d.b == a * b).unwrap_or(false) {
            b_ok += 1;
        }
    }
    let n = corpus.len();
    outcome(
        count_ok == n && b_ok == n,
        format!("counts preserved {count_ok}/{n}, b' = a b {b_ok}/{n}"),
    )
}

fn wan() -> Outcome {
    let corpus = corpus::wan_corpus(4, 200);
    let mut total = 0;
    let mut passed = 0;
    for sys in &corpus {
        for m in 1..=3 {
            total += 1;
            if wan_sum(sys, m, &opts())
                .map(|w| w.report.verdict.passed())
                .unwrap_or(false)
            {
                passed += 1;
            }
        }
    }
    outcome(passed == total, format!("{passed}/{total} (system, M) pairs"))
}

fn as_rationals(p: &[BigInt]) -> Vec<Rational> {
    p.iter().cloned().map(Rational::from_integer).collect()
}

fn elliptic_dichotomy() -> Outcome {
    let cs = curves();
    let hodge = hodge_polygon(&HodgeNumbers { m: 1, h: vec![1, 1] }).unwrap();
    let expected = [
        (vec![1, 0, 2], vec![(Slope::new(1, 2), 2)], true),
        (
            vec![1, 1, 2],
            vec![(Slope::from_integer(0), 1), (Slope::from_integer(1), 1)],
            false,
        ),
    ];
    let mut notes = Vec::new();
    let mut ok = true;
    for (curve, (p1_expected, newton_expected, strict)) in cs.iter().zip(expected) {
        let n1 = counts(&curve.system, 1);
        let p1 = curve_numerator(&n1, 1, 2).unwrap();
        let newton = newton_of_polynomial(&as_rationals(&p1), 2).unwrap();
        let mazur = check_mazur(&newton, &hodge, true).unwrap();
        let this = p1 == p1_expected.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>()
            && newton.segments() == newton_expected.as_slice()
            && mazur.verdict.passed()
            && mazur.strict == strict;
        ok &= this;
        notes.push(format!(
            "N_1 = {}, P_1 = {:?}",
            n1[0],
            p1.iter().map(|c| c.to_string()).collect::<Vec<_>>()
        ));
    }
    outcome(ok, notes.join("; "))
}

fn trace_round_trip() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for curve in curves() {
        let q = curve.system.field().cardinality();
        let n = counts(&curve.system, curve.genus + 1);
        let p1 = curve_numerator(&n[..curve.genus], curve.genus, q).unwrap();
        let weil = WeilData::curve(q, p1).unwrap();
        let reproduced = (1..=curve.genus).all(|s| trace_formula_counts(&weil, s).unwrap() == BigInt::from(n[s - 1]));
        let predicted = trace_formula_counts(&weil, curve.genus + 1).unwrap();
        let actual = n[curve.genus];
        ok &= reproduced && predicted == BigInt::from(actual);
        notes.push(format!(
            "{}: N_{} predicted {predicted}, counted {actual}",
            curve.name,
            curve.genus + 1
        ));
    }
    outcome(ok, notes.join("; "))
}

fn slope_interval() -> Outcome {
    let mut corpus: Vec<(String, u64, WeilData)> = Vec::new();
    for curve in curves() {
        let q = curve.system.field().cardinality();
        let n = counts(&curve.system, curve.genus);
        let p1 = curve_numerator(&n, curve.genus, q).unwrap();
        corpus.push((curve.name.to_string(), curve.p, WeilData::curve(q, p1).unwrap()));
    }
    for (p, a) in [(2u64, 1u32), (3, 1), (2, 2)] {
        for d in 1..=3 {
            corpus.push((
                format!("P^{d} over F_{}", p.pow(a)),
                p,
                WeilData::projective_space(p.pow(a), d),
            ));
        }
    }
    let surfaces = [
        ("quadric surface over F_2", projective(2, 4, &["x0*x3 + x1*x2"]), 2usize),
        (
            "Fermat cubic surface over F_2",
            projective(2, 4, &["x0^3 + x1^3 + x2^3 + x3^3"]),
            7,
        ),
    ];
    for (name, sys, b) in surfaces {
        let n = counts(&sys, b / 2 + 2);
        let middle = middle_factor_symmetric(2, 2, b, &n).unwrap();
        corpus.push((name.to_string(), 2, WeilData::with_middle(2, 2, middle).unwrap()));
    }
    let mut factors = 0;
    let mut failures = Vec::new();
    for (name, p, weil) in &corpus {
        let report = slope_interval_check(weil, *p).unwrap();
        factors += report.factors.len();
        if !report.verdict.passed() {
            failures.push(name.clone());
        }
    }
    outcome(
        failures.is_empty(),
        format!("{} varieties, {factors} factors, failures: {failures:?}", corpus.len()),
    )
}

fn esnault_ekedahl() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    let fano = [
        ("quadric", projective(2, 4, &["x0*x3 + x1*x2"])),
        ("Fermat cubic", projective(2, 4, &["x0^3 + x1^3 + x2^3 + x3^3"])),
    ];
    for (name, sys) in &fano {
        for s in 1..=2 {
            let r = check_esnault(sys, s, &opts()).unwrap();
            ok &= r.verdict.passed();
            notes.push(format!(
                "{name} over F_{}: {} = {} mod {}",
                1 << s,
                r.count,
                r.residue,
                r.modulus
            ));
        }
    }
    for p in [2u64, 3] {
        let r = check_birational_pair(&projective(p, 3, &[]), &blow_up(p), 1, &opts()).unwrap();
        ok &= r.verdict.passed();
        notes.push(format!("P^2 vs Bl P^2 over F_{p}: difference {}", r.count));
    }
    outcome(ok, notes.join("; "))
}

fn dieudonne_manin() -> Outcome {
    let mut grid = Vec::new();
    for d in 1..=3i64 {
        for r in -3..=3i64 {
            if num_integer::gcd(r, d) == 1 {
                grid.push((r, d));
            }
        }
    }
    let mut checks = 0;
    let mut failures = 0;
    for p in [2u64, 3] {
        for &(r1, d1) in &grid {
            let m = standard(r1, d1, p).unwrap();
            for &(r2, d2) in &grid {
                let n = standard(r2, d2, p).unwrap();
                let (sm, sn) = (slopes(&m).unwrap(), slopes(&n).unwrap());
                let sum = slopes(&direct_sum(&m, &n).unwrap()).unwrap();
                let prod = slopes(&tensor(&m, &n).unwrap()).unwrap();
                let expected_prod = vec![(Slope::new(r1, d1) + Slope::new(r2, d2), (d1 * d2) as u64)];
                checks += 2;
                failures += usize::from(sum != sm.union(&sn));
                failures += usize::from(prod.entries != expected_prod);
            }
        }
    }
    let matrices = corpus::isocrystal_corpus(9, 200);
    for m in &matrices {
        checks += 1;
        failures += usize::from(slopes(m).unwrap().weight() != determinant_weight(m).unwrap());
    }
    outcome(
        failures == 0,
        format!(
            "{} failures in {checks} checks ({} random matrices)",
            failures,
            matrices.len()
        ),
    )
}

fn complete_intersections() -> Outcome {
    let mut total = 0;
    let mut vanishing = 0;
    let mut failures = Vec::new();
    for n in 1..=6usize {
        for r in 1..=2usize {
            if n < r + 1 {
                continue;
            }
            let dim = (n - 1 - r) as u32;
            let mut degs = vec![1u32; r];
            loop {
                if degs.windows(2).all(|w| w[0] <= w[1]) {
                    total += 1;
                    let sum: u32 = degs.iter().sum();
                    let max = *degs.iter().max().unwrap();
                    let formula = (n as u32).saturating_sub(sum).div_ceil(max);
                    let ok = match ci_hodge_numbers(n, &degs) {
                        Ok(ci) => match ci.b {
                            Some(b) => b == formula && ci.formula == formula,
                            None => {
                                vanishing += 1;
                                2 * formula > dim && ci.formula == formula
                            }
                        },
                        Err(_) => false,
                    };
                    if !ok {
                        failures.push((n, degs.clone()));
                    }
                }
                let Some(k) = degs.iter().position(|&d| d < 4) else {
                    break;
                };
                degs[k] += 1;
                for d in &mut degs[..k] {
                    *d = 1;
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{total} signatures ({vanishing} with no primitive middle cohomology), failures: {failures:?}"),
    )
}

fn main() {
    type Criterion = (&'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("Chevalley-Warning exhaustive suite", 60, chevalley_warning),
        ("Ax-Katz exhaustive suite", 120, ax_katz),
        ("Moreno-Moreno restriction of scalars", 60, moreno_moreno),
        ("Wan congruence", 120, wan),
        ("elliptic slope dichotomy over F_2", 5, elliptic_dichotomy),
        ("trace formula round trip", 600, trace_round_trip),
        ("slope interval", 600, slope_interval),
        ("Esnault and Ekedahl congruences", 60, esnault_ekedahl),
        ("Dieudonne-Manin slope algebra", 30, dieudonne_manin),
        ("complete intersection Hodge numbers", 10, complete_intersections),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run);
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(o) => (o.ok && elapsed <= Duration::from_secs(*limit), o.detail),
            Err(_) => (false, "panicked".to_string()),
        };
        failed += usize::from(!ok);
        println!(
            "{} {:>2}. {name}: {detail} [{:.2}s, limit {limit}s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
