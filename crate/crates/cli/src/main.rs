//! `fqzeta`: point counts, zeta functions, polygons, isocrystal slopes and
//! congruence checks from the command line. Every command prints a single
//! JSON document; the exit code is 0 when all requested checks pass, 1 when a
//! check fails, and 2 on bad input.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fqzeta::congruence::{
    check_ax_katz, check_birational_pair, check_chevalley_warning, check_esnault, wan_sum, CongruenceReport,
};
use fqzeta::corpus;
use fqzeta::isocrystal::{dieudonne_manin, filtration_probe, slopes, FIsocrystal, DEFAULT_PROBE_ITERATIONS};
use fqzeta::polygon::{
    check_mazur, ci_hodge_numbers, hodge_polygon, newton_from_valuations, newton_of_polynomial, HodgeNumbers, Polygon,
    Slope, Valuation,
};
use fqzeta::polysys::{count_affine, count_projective, CountOptions, PolySystem, DEFAULT_BUDGET};
use fqzeta::rational::{self, Rational};
use fqzeta::zeta::{
    curve_numerator, reconstruct_rational, riemann_hypothesis_check, slope_interval_check, zeta_series, CountSequence,
    WeilData,
};
use fqzeta::{Error, Verdict};

#[derive(Parser)]
#[command(
    name = "fqzeta",
    version,
    about = "Exact point counts, zeta functions and congruence checks over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Counting {
    /// Worker threads for exhaustive counts.
    #[arg(long)]
    threads: Option<usize>,
    /// Maximum number of points visited by a single count.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
}

impl Counting {
    fn options(self) -> CountOptions {
        CountOptions {
            budget: self.budget,
            threads: self.threads,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Kind {
    Cw,
    AxKatz,
    Wan,
    Esnault,
    Birational,
    Mazur,
    SlopeInterval,
}

#[derive(Subcommand)]
enum Command {
    /// Count points of a system over F_{q^s}.
    Count {
        system: PathBuf,
        /// Extension degree s.
        #[arg(long, default_value_t = 1)]
        ext: usize,
        /// Report N_1, ..., N_m instead of a single count.
        #[arg(long)]
        order: Option<usize>,
        /// Count affine solutions even for homogeneous systems.
        #[arg(long)]
        affine: bool,
        #[command(flatten)]
        counting: Counting,
    },
    /// Build the zeta function from counts, given directly or counted from a system.
    Zeta {
        system: Option<PathBuf>,
        /// N_1, N_2, ... as a comma-separated list.
        #[arg(long, value_delimiter = ',')]
        counts: Vec<u64>,
        /// Number of counts to compute when a system is given.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        deg_num: Option<usize>,
        #[arg(long)]
        deg_den: Option<usize>,
        /// Treat the counts as those of a smooth projective curve of this genus.
        #[arg(long)]
        genus: Option<usize>,
        /// Field size, needed with --genus when counts are given directly.
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        affine: bool,
        #[command(flatten)]
        counting: Counting,
    },
    /// Newton polygon of 1 + c_1 t + ... or of a list of valuations.
    Newton {
        /// Coefficients c_0, c_1, ... (integers or n/d).
        #[arg(long, conflicts_with = "valuations")]
        poly: Option<String>,
        /// Valuations v_0, v_1, ... ("inf" for a zero coefficient).
        #[arg(long)]
        valuations: Option<String>,
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
    /// Hodge polygon from Hodge numbers, or Hodge numbers of a complete intersection.
    Hodge {
        /// Number of homogeneous coordinates of the ambient projective space.
        #[arg(long, requires = "degrees")]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<u32>,
        /// h_0, h_1, ... directly.
        #[arg(long, value_delimiter = ',', conflicts_with = "n")]
        h: Vec<u64>,
    },
    /// Run a theorem check.
    Check {
        #[arg(long, value_enum)]
        kind: Kind,
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = 1)]
        ext: usize,
        /// p-adic precision M for the Teichmüller sum.
        #[arg(long, default_value_t = 2)]
        precision: u32,
        /// Run the check on this many seeded random systems instead of an input file.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// P_i coefficients for mazur.
        #[arg(long)]
        poly: Option<String>,
        /// Hodge numbers for mazur.
        #[arg(long, value_delimiter = ',')]
        hodge: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// q = p^a for mazur.
        #[arg(long, default_value_t = 1)]
        a: i64,
        /// Only require Newton >= Hodge, not equal endpoints.
        #[arg(long)]
        no_endpoints: bool,
        /// Curve genus, to derive P_1 from counts of a curve system.
        #[arg(long)]
        genus: Option<usize>,
        #[command(flatten)]
        counting: Counting,
    },
    /// Slopes and Dieudonné–Manin multiplicities of an F-isocrystal.
    Isocrystal {
        input: PathBuf,
        /// Vector x for the slope filtration probe.
        #[arg(long, requires = "alpha")]
        probe: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = DEFAULT_PROBE_ITERATIONS)]
        iterations: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

impl Failure {
    fn to_json(&self) -> Value {
        let (kind, message) = match self {
            Failure::Core(e) => {
                let debug = format!("{e:?}");
                let kind: String = debug.chars().take_while(|c| c.is_alphanumeric()).collect();
                (kind, e.to_string())
            }
            Failure::Input(m) => ("Input".to_string(), m.clone()),
        };
        json!({ "error": { "kind": kind, "message": message } })
    }
}

type Outcome = std::result::Result<(Value, bool), Failure>;

fn read_json(path: &Path) -> std::result::Result<Value, Failure> {
    let src = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&src).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_system(path: &Path) -> std::result::Result<PolySystem, Failure> {
    let src = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(PolySystem::from_json_str(&src)?)
}

fn parse_rationals(s: &str) -> std::result::Result<Vec<Rational>, Failure> {
    Ok(s.split(',').map(rational::parse).collect::<fqzeta::Result<Vec<_>>>()?)
}

fn parse_slope(s: &str) -> std::result::Result<Slope, Failure> {
    let x = rational::parse(s)?;
    to_slope(&x).ok_or_else(|| Failure::Input(format!("{s} is too large")))
}

fn to_slope(x: &Rational) -> Option<Slope> {
    use num_traits::ToPrimitive;
    Some(Slope::new(x.numer().to_i64()?, x.denom().to_i64()?))
}

fn integer_coeffs(s: &str) -> std::result::Result<Vec<num_bigint::BigInt>, Failure> {
    parse_rationals(s)?
        .iter()
        .map(|x| rational::to_integer(x).ok_or_else(|| Failure::Input(format!("{x} is not an integer"))))
        .collect()
}

fn count(system: &PolySystem, s: usize, affine: bool, opts: &CountOptions) -> fqzeta::Result<u64> {
    if system.is_homogeneous() && !affine {
        count_projective(system, s, opts)
    } else {
        count_affine(system, s, opts)
    }
}

fn counts_up_to(system: &PolySystem, order: usize, affine: bool, opts: &CountOptions) -> fqzeta::Result<Vec<u64>> {
    (1..=order).map(|s| count(system, s, affine, opts)).collect()
}

fn cmd_count(path: &Path, ext: usize, order: Option<usize>, affine: bool, opts: CountOptions) -> Outcome {
    let system = read_system(path)?;
    let projective = system.is_homogeneous() && !affine;
    let mut out = json!({
        "q": system.field().cardinality(),
        "projective": projective,
    });
    match order {
        Some(m) => out["counts"] = json!(counts_up_to(&system, m, affine, &opts)?),
        None => {
            out["ext"] = json!(ext);
            out["count"] = json!(count(&system, ext, affine, &opts)?);
        }
    }
    Ok((out, true))
}

#[allow(clippy::too_many_arguments)]
fn cmd_zeta(
    system: Option<&Path>,
    mut counts: Vec<u64>,
    order: Option<usize>,
    deg_num: Option<usize>,
    deg_den: Option<usize>,
    genus: Option<usize>,
    mut q: Option<u64>,
    affine: bool,
    opts: CountOptions,
) -> Outcome {
    if let Some(path) = system {
        let system = read_system(path)?;
        let m = order
            .or(genus.map(|g| g + 1))
            .or(deg_num.zip(deg_den).map(|(a, b)| a + b))
            .ok_or_else(|| Failure::Input("--order is required with a system".into()))?;
        counts = counts_up_to(&system, m, affine, &opts)?;
        q = Some(system.field().cardinality());
    }
    if counts.is_empty() && genus != Some(0) {
        return Err(Failure::Input("no counts given".into()));
    }

    let (zeta, extra) = match genus {
        Some(g) => {
            let q = q.ok_or_else(|| Failure::Input("--q is required with --genus".into()))?;
            if counts.len() < g {
                return Err(
                    Error::InsufficientData(format!("genus {g} needs {g} counts, got {}", counts.len())).into(),
                );
            }
            let p1 = curve_numerator(&counts[..g], g, q)?;
            let zeta = WeilData::curve(q, p1)?.zeta();
            (zeta, g)
        }
        None => {
            let (dn, dd) = deg_num
                .zip(deg_den)
                .ok_or_else(|| Failure::Input("--deg-num and --deg-den are required without --genus".into()))?;
            let series = zeta_series(&CountSequence::new(q.unwrap_or(0), counts.clone()), counts.len())?;
            (reconstruct_rational(&series, dn, dd)?, dn + dd)
        }
    };

    let mut verified = true;
    for (s, &n) in counts.iter().enumerate().skip(extra) {
        verified &= zeta.count(s + 1)? == num_bigint::BigInt::from(n);
    }
    let out = json!({
        "counts": counts,
        "zeta": zeta.to_json(),
        "verified_counts": counts.len().saturating_sub(extra),
        "verdict": Verdict::from_bool(verified),
    });
    Ok((out, verified))
}

fn cmd_newton(poly: Option<&str>, valuations: Option<&str>, p: u64) -> Outcome {
    let polygon = match (poly, valuations) {
        (Some(poly), _) => newton_of_polynomial(&parse_rationals(poly)?, p)?,
        (None, Some(vals)) => {
            let pts = vals
                .split(',')
                .enumerate()
                .map(|(i, v)| {
                    let v = v.trim();
                    if v == "inf" {
                        Ok((i, Valuation::Infinite))
                    } else {
                        Ok((i, Valuation::Finite(parse_slope(v)?)))
                    }
                })
                .collect::<std::result::Result<Vec<_>, Failure>>()?;
            newton_from_valuations(&pts)?
        }
        (None, None) => return Err(Failure::Input("one of --poly or --valuations is required".into())),
    };
    Ok((polygon.to_json(), true))
}

fn cmd_hodge(n: Option<usize>, degrees: &[u32], h: &[u64]) -> Outcome {
    match n {
        Some(n) => {
            let ci = ci_hodge_numbers(n, degrees)?;
            let mut out = ci.to_json();
            out["polygon"] = hodge_polygon(&ci.hodge).map_or(Value::Null, |p| p.to_json());
            Ok((out, true))
        }
        None => {
            let hn = HodgeNumbers {
                m: h.len().saturating_sub(1) as u32,
                h: h.to_vec(),
            };
            Ok((hodge_polygon(&hn)?.to_json(), true))
        }
    }
}

fn report_json(r: &CongruenceReport) -> Value {
    serde_json::to_value(r).expect("serializable report")
}

fn single(r: CongruenceReport) -> Outcome {
    let ok = r.verdict.passed();
    Ok((report_json(&r), ok))
}

fn random_suite(kind: Kind, n: usize, seed: u64, precision: u32, opts: &CountOptions) -> Outcome {
    let systems = match kind {
        Kind::Cw => corpus::chevalley_warning_corpus(seed, n),
        Kind::AxKatz => corpus::ax_katz_corpus(seed, n),
        Kind::Wan => corpus::wan_corpus(seed, n),
        _ => return Err(Failure::Input("--random supports cw, ax-katz and wan".into())),
    };
    let mut failures = Vec::new();
    for (i, sys) in systems.iter().enumerate() {
        let report = match kind {
            Kind::Cw => check_chevalley_warning(sys, opts)?,
            Kind::AxKatz => check_ax_katz(sys, opts)?,
            _ => wan_sum(sys, precision, opts)?.report,
        };
        if !report.verdict.passed() {
            failures.push(json!({ "index": i, "system": sys.to_json(), "report": report_json(&report) }));
        }
    }
    let ok = failures.is_empty();
    let out = json!({
        "seed": seed,
        "total": systems.len(),
        "passed": systems.len() - failures.len(),
        "failures": failures,
        "verdict": Verdict::from_bool(ok),
    });
    Ok((out, ok))
}

fn curve_p1(
    path: &Path,
    genus: usize,
    opts: &CountOptions,
) -> std::result::Result<(u64, Vec<num_bigint::BigInt>), Failure> {
    let system = read_system(path)?;
    let q = system.field().cardinality();
    let counts = counts_up_to(&system, genus, false, opts)?;
    Ok((q, curve_numerator(&counts, genus, q)?))
}

fn check_kind(c: CheckArgs) -> Outcome {
    let opts = c.counting.options();
    if let Some(n) = c.random {
        return random_suite(c.kind, n, c.seed, c.precision, &opts);
    }
    let input = |k: usize| -> std::result::Result<&Path, Failure> {
        c.inputs
            .get(k)
            .map(PathBuf::as_path)
            .ok_or_else(|| Failure::Input(format!("expected {} input file(s)", k + 1)))
    };
    match c.kind {
        Kind::Cw => single(check_chevalley_warning(&read_system(input(0)?)?, &opts)?),
        Kind::AxKatz => single(check_ax_katz(&read_system(input(0)?)?, &opts)?),
        Kind::Wan => {
            let w = wan_sum(&read_system(input(0)?)?, c.precision, &opts)?;
            let ok = w.report.verdict.passed();
            let mut out = report_json(&w.report);
            out["wan_sum"] = json!(w.sum);
            out["precision"] = json!(w.precision);
            Ok((out, ok))
        }
        Kind::Esnault => single(check_esnault(&read_system(input(0)?)?, c.ext, &opts)?),
        Kind::Birational => {
            let x = read_system(input(0)?)?;
            let y = read_system(input(1)?)?;
            single(check_birational_pair(&x, &y, c.ext, &opts)?)
        }
        Kind::Mazur => {
            let (p1, a, hodge) = match (&c.poly, c.genus) {
                (Some(poly), _) => (integer_coeffs(poly)?, c.a, c.hodge.clone()),
                (None, Some(g)) => {
                    let (q, p1) = curve_p1(input(0)?, g, &opts)?;
                    let a = std::iter::successors(Some(q), |&x| (x % c.p == 0).then(|| x / c.p))
                        .skip(1)
                        .count() as i64;
                    let hodge = if c.hodge.is_empty() {
                        vec![g as u64, g as u64]
                    } else {
                        c.hodge.clone()
                    };
                    (p1, a, hodge)
                }
                (None, None) => {
                    return Err(Failure::Input(
                        "mazur needs --poly or a curve system with --genus".into(),
                    ))
                }
            };
            let newton =
                newton_of_polynomial(&p1.iter().cloned().map(Rational::from_integer).collect::<Vec<_>>(), c.p)?;
            let newton = Polygon::from_slopes(newton.segments().iter().map(|&(s, m)| (s / a, m)));
            let hodge = hodge_polygon(&HodgeNumbers {
                m: hodge.len().saturating_sub(1) as u32,
                h: hodge,
            })?;
            let report = check_mazur(&newton, &hodge, !c.no_endpoints)?;
            let ok = report.verdict.passed();
            let mut out = report.to_json();
            out["newton"] = newton.to_json();
            out["hodge"] = hodge.to_json();
            out["poly"] = json!(p1.iter().map(rational::int_to_json).collect::<Vec<_>>());
            Ok((out, ok))
        }
        Kind::SlopeInterval => {
            let weil = match c.genus {
                Some(g) => {
                    let (q, p1) = curve_p1(input(0)?, g, &opts)?;
                    WeilData::curve(q, p1)?
                }
                None => WeilData::from_json(&read_json(input(0)?)?)?,
            };
            let report = slope_interval_check(&weil, c.p)?;
            let ok = report.verdict.passed();
            let mut out = report.to_json();
            let rh: Vec<Value> = weil
                .factors
                .iter()
                .filter(|(_, f)| f.len() <= 7)
                .map(|(&i, f)| {
                    let r = riemann_hypothesis_check(f, i, weil.q)?;
                    Ok(json!({ "i": i, "riemann": r.to_json() }))
                })
                .collect::<fqzeta::Result<_>>()?;
            out["weil"] = weil.to_json();
            out["riemann"] = Value::Array(rh);
            Ok((out, ok))
        }
    }
}

struct CheckArgs {
    kind: Kind,
    inputs: Vec<PathBuf>,
    ext: usize,
    precision: u32,
    random: Option<usize>,
    seed: u64,
    poly: Option<String>,
    hodge: Vec<u64>,
    p: u64,
    a: i64,
    no_endpoints: bool,
    genus: Option<usize>,
    counting: Counting,
}

fn cmd_isocrystal(path: &Path, probe: Option<&str>, alpha: Option<&str>, iterations: usize) -> Outcome {
    let m = FIsocrystal::from_json(&read_json(path)?)?;
    let s = slopes(&m)?;
    let mut out = json!({
        "dim": m.dim(),
        "slopes": s.to_json(),
        "polygon": s.to_polygon().to_json(),
    });
    out["components"] = dieudonne_manin(&m)?.to_json()["components"].clone();
    if let (Some(x), Some(alpha)) = (probe, alpha) {
        let x = parse_rationals(x)?;
        let verdict = filtration_probe(&m, &x, parse_slope(alpha)?, iterations)?;
        out["probe"] = json!(verdict);
    }
    Ok((out, true))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Count {
            system,
            ext,
            order,
            affine,
            counting,
        } => cmd_count(&system, ext, order, affine, counting.options()),
        Command::Zeta {
            system,
            counts,
            order,
            deg_num,
            deg_den,
            genus,
            q,
            affine,
            counting,
        } => cmd_zeta(
            system.as_deref(),
            counts,
            order,
            deg_num,
            deg_den,
            genus,
            q,
            affine,
            counting.options(),
        ),
        Command::Newton { poly, valuations, p } => cmd_newton(poly.as_deref(), valuations.as_deref(), p),
        Command::Hodge { n, degrees, h } => cmd_hodge(n, &degrees, &h),
        Command::Check {
            kind,
            inputs,
            ext,
            precision,
            random,
            seed,
            poly,
            hodge,
            p,
            a,
            no_endpoints,
            genus,
            counting,
        } => check_kind(CheckArgs {
            kind,
            inputs,
            ext,
            precision,
            random,
            seed,
            poly,
            hodge,
            p,
            a,
            no_endpoints,
            genus,
            counting,
        }),
        Command::Isocrystal {
            input,
            probe,
            alpha,
            iterations,
        } => cmd_isocrystal(&input, probe.as_deref(), alpha.as_deref(), iterations),
    }
}

fn emit(v: &Value) {
    let mut out = std::io::stdout().lock();
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = json!({ "error": { "kind": "Usage", "message": e.to_string() } });
            emit(&err);
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok((out, ok)) => {
            emit(&out);
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            emit(&f.to_json());
            ExitCode::from(2)
        }
    }
}
