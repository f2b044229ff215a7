//! The `ostro` command line.
//!
//! Every verb computes its whole output in memory before anything is
//! written, and files are replaced atomically, so a failing run never leaves
//! a partial file behind. Exit codes: 0 success, 2 parse, 3 precision or
//! budget, 4 domain, 5 I/O.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::confrac::ContinuedFraction;
use crate::construct::{construct_sweep, GammaSpec, SearchCaps};
use crate::error::Error;
use crate::exec::Exec;
use crate::oracle::best_coprime_approx_with;
use crate::ostrowski::{ostrowski_int, ostrowski_real};
use crate::real::{format_sci, parse_decimal, Round, ValidatedReal};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;
pub const EXIT_DOMAIN: i32 = 4;
pub const EXIT_IO: i32 = 5;

pub const CONSTRUCT_HEADER: [&str; 9] = ["i", "a", "b", "m", "n", "err_hi", "quality", "omega_Nia", "A_used"];
pub const ORACLE_HEADER: [&str; 3] = ["n", "m", "err_hi"];

const ERR_DIGITS: usize = 12;
const D_DIGITS: usize = 30;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("I/O error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => core_exit_code(e),
            CliError::Io { .. } => EXIT_IO,
            CliError::Csv(e) if e.is_io_error() => EXIT_IO,
            CliError::Csv(_) => EXIT_PARSE,
        }
    }
}

pub fn core_exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        Error::PrecisionExhausted(_) | Error::FactorBudgetExceeded(_) | Error::SieveBudgetExceeded { .. } => EXIT_PRECISION,
        Error::Domain(_) | Error::RationalInput(_) | Error::IllegalExpansion(_) | Error::SearchCapExhausted(_) => EXIT_DOMAIN,
    }
}

#[derive(Parser, Debug)]
#[command(name = "ostro", version, about = "Coprime inhomogeneous Diophantine approximation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Partial quotients, convergents and D_k = q_k·α − p_k
    Cf {
        /// `quad:d,p,q`, `cf:a0,a1,..[;period]` or `dec:<digits>@<precision>`
        #[arg(long)]
        alpha: String,
        /// last index
        #[arg(short, long, default_value_t = 10)]
        k: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Ostrowski digits of an integer n, or of a real γ to depth k
    Ostrowski {
        #[arg(long)]
        alpha: String,
        #[arg(long, conflicts_with = "gamma", required_unless_present = "gamma")]
        n: Option<BigInt>,
        /// `rat:p/q` or `dec:<digits>@<precision>`
        #[arg(long)]
        gamma: Option<String>,
        #[arg(short, long, default_value_t = 12)]
        k: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Coprime approximation pairs for each index in a range
    Construct {
        #[arg(long)]
        alpha: String,
        /// `lat:l,l'`, `rat:p/q` or `dec:<digits>@<precision>`
        #[arg(long)]
        gamma: String,
        #[arg(short, long, default_value_t = 2.0)]
        c: f64,
        #[arg(long, default_value_t = 5)]
        from: usize,
        #[arg(long, default_value_t = 40)]
        to: usize,
        /// ceiling for the coprimality shift search
        #[arg(long, default_value_t = SearchCaps::default().max_b)]
        max_b: u64,
        #[arg(long)]
        sequential: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive record table of best coprime approximations
    Oracle {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        gamma: String,
        #[arg(long, default_value_t = 1000)]
        n_max: u64,
        #[arg(long)]
        sequential: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// SVG of quality against i on log axes, from a construct CSV
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
}

/// `lat:l,l'` | `rat:p/q` | `rat:k` | `dec:<digits>@<precision>`.
pub fn parse_gamma(spec: &str) -> Result<GammaSpec, Error> {
    let spec = spec.trim();
    let bad = |why: &str| Error::Parse(format!("{why} in γ spec {spec:?}"));
    if let Some(rest) = spec.strip_prefix("lat:") {
        let (l, l2) = rest.split_once(',').ok_or_else(|| bad("lat: expects l,l'"))?;
        let l: BigInt = l.trim().parse().map_err(|_| bad("bad integer"))?;
        let l2: BigInt = l2.trim().parse().map_err(|_| bad("bad integer"))?;
        Ok(GammaSpec::Lattice { l, l2 })
    } else if let Some(rest) = spec.strip_prefix("rat:") {
        let r = match rest.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad("bad numerator"))?;
                let q: BigInt = q.trim().parse().map_err(|_| bad("bad denominator"))?;
                if q.sign() == num_bigint::Sign::NoSign {
                    return Err(bad("zero denominator"));
                }
                BigRational::new(p, q)
            }
            None => BigRational::from_integer(rest.trim().parse().map_err(|_| bad("bad integer"))?),
        };
        Ok(GammaSpec::from_rational(r))
    } else if let Some(rest) = spec.strip_prefix("dec:") {
        let (digits, prec) = rest.split_once('@').ok_or_else(|| bad("dec: expects <digits>@<precision>"))?;
        let prec: usize = prec.trim().parse().map_err(|_| bad("bad precision"))?;
        let given = digits.split_once('.').map_or(0, |(_, f)| f.len());
        if given > prec {
            return Err(bad("more fractional digits than the declared precision"));
        }
        Ok(GammaSpec::from_rational(parse_decimal(digits)?))
    } else {
        Err(bad("unknown prefix"))
    }
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner().map_err(|e| CliError::Io { path: "<buffer>".into(), source: e.into_error() })
}

/// Writes `bytes` to `out`, atomically when it is a file, or to stdout.
fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    fn io(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
        move |source| CliError::Io { path: path.display().to_string(), source }
    }
    match out {
        None => std::io::stdout().lock().write_all(bytes).map_err(io(Path::new("<stdout>"))),
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io(path))?;
            tmp.write_all(bytes).map_err(io(path))?;
            tmp.persist(path).map_err(|e| CliError::Io { path: path.display().to_string(), source: e.error })?;
            Ok(())
        }
    }
}

fn upper(v: &ValidatedReal) -> String {
    format_sci(&v.hi(), ERR_DIGITS, Round::Up)
}

fn cmd_cf(alpha: &str, k: usize) -> Result<Vec<u8>, CliError> {
    let cf = ContinuedFraction::parse(alpha)?;
    let mut rows = Vec::with_capacity(k + 1);
    for conv in cf.convergents(k)? {
        let (_, q1) = cf.pq(conv.k as isize + 1).unwrap_or((BigInt::from(1), BigInt::from(1)));
        // |D_k| ≥ 1/(2q_{k+1}), so this width leaves 30 correct digits
        let width = BigRational::new(BigInt::from(1), q1 * num_traits::pow(BigInt::from(10), D_DIGITS + 2));
        let (lo, hi) = conv.d.enclose(&width).unwrap_or_else(|_| conv.d.bounds());
        rows.push(vec![
            conv.k.to_string(),
            cf.quotient(conv.k)?.to_string(),
            conv.p.to_string(),
            conv.q.to_string(),
            format_sci(&lo, D_DIGITS, Round::Down),
            format_sci(&hi, D_DIGITS, Round::Up),
        ]);
    }
    csv_bytes(&["k", "a_k", "p_k", "q_k", "D_k_lo", "D_k_hi"], &rows)
}

fn cmd_ostrowski(alpha: &str, n: Option<&BigInt>, gamma: Option<&str>, k: usize) -> Result<Vec<u8>, CliError> {
    let cf = ContinuedFraction::parse(alpha)?;
    if let Some(n) = n {
        let e = ostrowski_int(&cf, n)?;
        let rows: Vec<_> = e.coeffs.iter().enumerate().map(|(k, c)| vec![k.to_string(), c.to_string()]).collect();
        return csv_bytes(&["k", "coeff"], &rows);
    }
    let gamma = parse_gamma(gamma.expect("clap requires n or gamma"))?;
    let g = match gamma {
        GammaSpec::Generic(g) => g,
        GammaSpec::Lattice { .. } => {
            return Err(Error::Domain("γ lies in αℤ + ℤ and has no real expansion; use lat: with construct".into()).into())
        }
    };
    let e = ostrowski_real(&cf, &g, k.max(1))?;
    let tail = upper(&cf.d_value(e.depth() as isize - 1)?.abs());
    let rows: Vec<_> =
        e.coeffs.iter().enumerate().map(|(k, c)| vec![k.to_string(), c.to_string(), tail.clone()]).collect();
    csv_bytes(&["k", "coeff", "tail_bound"], &rows)
}

pub struct ConstructConfig<'a> {
    pub alpha: &'a str,
    pub gamma: &'a str,
    pub c: f64,
    pub from: usize,
    pub to: usize,
    pub caps: SearchCaps,
    pub exec: Exec,
}

/// Builds the construct CSV. Rows that fail carry `NA` fields and are
/// reported on stderr.
pub fn construct_csv(cfg: &ConstructConfig) -> Result<Vec<u8>, CliError> {
    let cf = ContinuedFraction::parse(cfg.alpha)?;
    let gamma = parse_gamma(cfg.gamma)?;
    if !(cfg.c > 0.0) {
        return Err(Error::Domain(format!("c must be positive, got {}", cfg.c)).into());
    }
    if cfg.from < crate::construct::MIN_INDEX || cfg.from > cfg.to {
        return Err(Error::Domain(format!("index range {}..={} must satisfy 4 ≤ from ≤ to", cfg.from, cfg.to)).into());
    }
    let threshold = 2.0 * std::f64::consts::LN_2.sqrt();
    if cfg.c <= threshold {
        eprintln!("warning: c = {} ≤ 2√(ln 2) ≈ {threshold:.4}; the approximation guarantee needs a larger c", cfg.c);
    }
    let mut rows = Vec::new();
    for (i, r) in construct_sweep(&cf, &gamma, cfg.from, cfg.to, cfg.c, cfg.caps, cfg.exec) {
        match r {
            Ok(p) => rows.push(vec![
                i.to_string(),
                p.a.to_string(),
                p.b.to_string(),
                p.m.to_string(),
                p.n.to_string(),
                upper(&p.err),
                format!("{:.6e}", p.quality),
                p.omega_cross.to_string(),
                p.a_used.to_string(),
            ]),
            Err(e) => {
                eprintln!("row i = {i}: {e}");
                let mut row = vec![i.to_string()];
                row.extend(std::iter::repeat_n("NA".to_string(), CONSTRUCT_HEADER.len() - 1));
                rows.push(row);
            }
        }
    }
    csv_bytes(&CONSTRUCT_HEADER, &rows)
}

fn cmd_oracle(alpha: &str, gamma: &str, n_max: u64, exec: Exec) -> Result<Vec<u8>, CliError> {
    let cf = ContinuedFraction::parse(alpha)?;
    let g = parse_gamma(gamma)?.value(&cf);
    let recs = best_coprime_approx_with(&cf, &g, n_max, exec)?;
    let rows: Vec<_> = recs.iter().map(|r| vec![r.n.to_string(), r.m.to_string(), upper(&r.err)]).collect();
    csv_bytes(&ORACLE_HEADER, &rows)
}

/// `(i, quality)` pairs with positive finite values from a construct CSV.
fn read_quality(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let file = std::fs::File::open(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let mut r = csv::Reader::from_reader(file);
    let headers = r.headers()?.clone();
    if headers.is_empty() {
        return Ok(Vec::new());
    }
    let col = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| Error::Parse(format!("{} has no {name:?} column", path.display())))
    };
    let (ci, cq) = (col("i")?, col("quality")?);
    let mut pts = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let (Some(i), Some(q)) = (rec.get(ci).and_then(|s| s.parse::<f64>().ok()), rec.get(cq).and_then(|s| s.parse::<f64>().ok()))
        else {
            continue;
        };
        if i > 0.0 && q > 0.0 && q.is_finite() {
            pts.push((i, q));
        }
    }
    Ok(pts)
}

/// Decade range `[floor(log10 min), ceil(log10 max)]`, at least one decade wide.
fn decades(vals: impl Iterator<Item = f64>) -> (i32, i32) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in vals {
        lo = lo.min(v.log10());
        hi = hi.max(v.log10());
    }
    if !lo.is_finite() {
        return (0, 1);
    }
    let (lo, hi) = (lo.floor() as i32, hi.ceil() as i32);
    (lo, hi.max(lo + 1))
}

/// Static log-log SVG of quality against `i`. No points yields axes only.
pub fn render_svg(points: &[(f64, f64)]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const L: f64 = 70.0;
    const R: f64 = 20.0;
    const T: f64 = 20.0;
    const B: f64 = 50.0;
    let (x0, x1) = decades(points.iter().map(|p| p.0));
    let (y0, y1) = decades(points.iter().map(|p| p.1));
    let sx = |v: f64| L + (v.log10() - x0 as f64) / (x1 - x0) as f64 * (W - L - R);
    let sy = |v: f64| H - B - (v.log10() - y0 as f64) / (y1 - y0) as f64 * (H - T - B);
    let mut s = String::new();
    s.push_str(&format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"));
    s.push_str(&format!("<rect x=\"0\" y=\"0\" width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"));
    s.push_str(&format!(
        "<path d=\"M{L} {T} L{L} {:.2} L{:.2} {:.2}\" fill=\"none\" stroke=\"black\"/>\n",
        H - B,
        W - R,
        H - B
    ));
    for e in x0..=x1 {
        let x = sx(10f64.powi(e));
        s.push_str(&format!("<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n", H - B, H - B + 5.0));
        s.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">1e{e}</text>\n",
            H - B + 20.0
        ));
    }
    for e in y0..=y1 {
        let y = sy(10f64.powi(e));
        s.push_str(&format!("<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{L}\" y2=\"{y:.2}\" stroke=\"black\"/>\n", L - 5.0));
        s.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\">1e{e}</text>\n",
            L - 8.0,
            y + 4.0
        ));
    }
    s.push_str(&format!("<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">i</text>\n", (L + W - R) / 2.0, H - 8.0));
    s.push_str(&format!(
        "<text x=\"16\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2})\">quality</text>\n",
        (T + H - B) / 2.0,
        (T + H - B) / 2.0
    ));
    if !points.is_empty() {
        let pts: Vec<String> = points.iter().map(|&(i, q)| format!("{:.2},{:.2}", sx(i), sy(q))).collect();
        s.push_str(&format!("<polyline points=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n", pts.join(" ")));
        for &(i, q) in points {
            s.push_str(&format!("<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"steelblue\"/>\n", sx(i), sy(q)));
        }
    }
    s.push_str("</svg>\n");
    s
}

fn run(cli: Cli) -> Result<(), CliError> {
    let exec = |sequential: bool| if sequential { Exec::Sequential } else { Exec::default() };
    match cli.command {
        Command::Cf { alpha, k, out } => emit(out.as_deref(), &cmd_cf(&alpha, k)?),
        Command::Ostrowski { alpha, n, gamma, k, out } => {
            emit(out.as_deref(), &cmd_ostrowski(&alpha, n.as_ref(), gamma.as_deref(), k)?)
        }
        Command::Construct { alpha, gamma, c, from, to, max_b, sequential, out } => {
            let cfg = ConstructConfig { alpha: &alpha, gamma: &gamma, c, from, to, caps: SearchCaps { max_b }, exec: exec(sequential) };
            emit(out.as_deref(), &construct_csv(&cfg)?)
        }
        Command::Oracle { alpha, gamma, n_max, sequential, out } => {
            emit(out.as_deref(), &cmd_oracle(&alpha, &gamma, n_max, exec(sequential))?)
        }
        Command::Plot { input, out } => {
            let pts = read_quality(&input)?;
            emit(Some(&out), render_svg(&pts).as_bytes())
        }
    }
}

/// Parses `args` (program name first), runs the verb and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
