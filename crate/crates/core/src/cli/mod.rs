//! Command-line front end. `run` parses arguments, sizes the worker pool and
//! dispatches; every subcommand writes its report to stdout and, with
//! `--outdir`, to `<outdir>/<subcommand>/<name>.<ext>`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{arith::necklace_count, enumerate_monic_irreducibles, PolyRing};
use crate::bias::{bias_series_from_table, classify_bias, t_e_series_from_table, BiasKind};
use crate::classic::{chi4_bias_series, pi_weighted_series, tau_bias_series, ClassicSeries};
use crate::curve::{
    check_nonconstant, conductor_degree, field_from_parts, local_data, parse_curve, parse_place,
    CountConfig, CurveSpec, LocalData, LocalTable, Place, EXHAUSTIVE_LIMIT,
};
use crate::drh::{bsd_series_from_table, drh_check_from_table};
use crate::error::{Error, Result};
use crate::lfunc::{
    center_report, default_trunc, delta, l_polynomial_from_table, normalized_root_moduli, LPolynomial,
};

/// Example curve shipped with the tool: the Legendre curve over `F_5(T)`.
pub const LEGENDRE5: &str = include_str!("../../curves/legendre5.curve");

/// Environment variable that overrides `--threads`.
pub const THREADS_ENV: &str = "FFBIAS_THREADS";

/// Automatic truncation is raised at most this far when the degree is not yet certified.
const MAX_AUTO_TRUNC: usize = 14;

#[derive(Parser, Debug)]
#[command(name = "ffbias", version, about = "Chebyshev bias and Euler products for elliptic curves over F_q(T)")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Worker threads (0 = all cores); FFBIAS_THREADS takes precedence
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Also write the report under this directory
    #[arg(long, global = true)]
    pub outdir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for the random points of baby-step/giant-step
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest field counted by a full character sum
    #[arg(long, global = true, default_value_t = EXHAUSTIVE_LIMIT)]
    pub threshold: u64,
    /// Leave the infinite place out of products and sums
    #[arg(long, global = true)]
    pub exclude_infinite: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct CurveArg {
    /// Curve file (`legendre5.curve` falls back to the bundled copy)
    #[arg(long, conflicts_with = "spec")]
    pub curve: Option<PathBuf>,
    /// Inline curve text, lines separated by `;`
    #[arg(long)]
    pub spec: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate or count monic irreducibles of one degree
    Places {
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        modulus: Option<String>,
        #[arg(long)]
        deg: usize,
        /// Print only the number of places
        #[arg(long)]
        count: bool,
    },
    /// Invariants, conductor and bad places
    CurveInfo(CurveArg),
    /// Local data at one place (`inf` for the infinite place)
    Local {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long)]
        place: String,
    },
    /// L-polynomial of E (n = 1) or its symmetric square (n = 2)
    Lpoly {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long)]
        trunc: Option<usize>,
    },
    /// Cumulative bias series of one kind
    Bias {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, default_value = "a_weighted")]
        kind: String,
        #[arg(long, default_value_t = 8)]
        d_max: usize,
    },
    /// Partial Euler products at the centre against the limit
    Drh {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, default_value_t = 8)]
        d_max: usize,
    },
    /// Products of #E(k_v)/q_v over good places
    Bsd {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, default_value_t = 8)]
        d_max: usize,
    },
    /// The normalised sum T_E(d) and its positivity density
    Te {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, default_value_t = 8)]
        d_max: usize,
    },
    /// Prime races over the rationals
    #[command(subcommand)]
    Classic(ClassicCommand),
}

#[derive(Subcommand, Debug)]
pub enum ClassicCommand {
    /// pi_{1/2}(x;4,3) - pi_{1/2}(x;4,1)
    Chi4 {
        #[arg(long, default_value = "1e7")]
        x: String,
        #[arg(long, default_value_t = 1.25)]
        grid: f64,
    },
    /// sum_{p<=x} tau(p)/p^6
    Tau {
        #[arg(long, default_value = "1e5")]
        x: String,
        #[arg(long, default_value_t = 1.25)]
        grid: f64,
    },
    /// pi_s(x; q, a)
    Pis {
        #[arg(long, default_value = "1e7")]
        x: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 1.25)]
        grid: f64,
    },
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => 2,
        Error::HasseViolation { .. }
        | Error::FunctionalEquationViolation { .. }
        | Error::AmbiguousOrder(_)
        | Error::CoefficientOverflow
        | Error::DeltaCrossCheckFailed
        | Error::OrderMismatch(_)
        | Error::ZeroLocalFactor => 4,
        Error::Io(_) => 1,
        _ => 3,
    }
}

/// One emitted report.
struct Report {
    name: String,
    ext: &'static str,
    body: String,
}

impl Report {
    fn json(name: impl Into<String>, v: &Value) -> Self {
        let body = serde_json::to_string_pretty(v).expect("json values serialize") + "\n";
        Report { name: name.into(), ext: "json", body }
    }

    fn csv(name: impl Into<String>, body: String) -> Self {
        Report { name: name.into(), ext: "csv", body }
    }
}

/// Parse, run and report; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(cli.global.threads);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return 1;
        }
    };
    let result = pool.install(|| dispatch(&cli));
    match result.and_then(|r| emit(&cli, &r, out)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Places { .. } => "places",
        Command::CurveInfo(_) => "curve-info",
        Command::Local { .. } => "local",
        Command::Lpoly { .. } => "lpoly",
        Command::Bias { .. } => "bias",
        Command::Drh { .. } => "drh",
        Command::Bsd { .. } => "bsd",
        Command::Te { .. } => "te",
        Command::Classic(_) => "classic",
    }
}

fn emit(cli: &Cli, r: &Report, out: &mut dyn Write) -> Result<()> {
    out.write_all(r.body.as_bytes())?;
    if let Some(dir) = &cli.global.outdir {
        let dir = dir.join(subcommand_name(&cli.command));
        std::fs::create_dir_all(&dir)?;
        std::fs::write(dir.join(format!("{}.{}", r.name, r.ext)), &r.body)?;
    }
    Ok(())
}

fn load_curve(arg: &CurveArg) -> Result<(CurveSpec, String)> {
    let (text, name) = match (&arg.curve, &arg.spec) {
        (Some(path), _) => read_curve_file(path)?,
        (None, Some(s)) => (s.replace(';', "\n"), "inline".to_string()),
        (None, None) => return Err(Error::Parse("give --curve FILE or --spec TEXT".into())),
    };
    let c = parse_curve(&text)?;
    check_nonconstant(&c)?;
    Ok((c, name))
}

fn read_curve_file(path: &Path) -> Result<(String, String)> {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "curve".into());
    match std::fs::read_to_string(path) {
        Ok(t) => Ok((t, stem)),
        Err(_) if stem == "legendre5" => Ok((LEGENDRE5.to_string(), stem)),
        Err(e) => Err(Error::Io(format!("{}: {e}", path.display()))),
    }
}

/// `1e7`, `10000000` or `1_000_000`.
fn parse_limit(s: &str) -> Result<u64> {
    let t = s.trim().replace('_', "");
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    match t.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 => Ok(v as u64),
        _ => Err(Error::Parse(format!("bad limit {s:?}"))),
    }
}

fn format_or(cli: &Cli, default: Format) -> Format {
    cli.global.format.unwrap_or(default)
}

fn ld_json(ld: &LocalData, ring: &PolyRing) -> Value {
    json!({
        "place": ld.place.render(ring),
        "degree": ld.degree(),
        "q_v": ld.q_v,
        "red": ld.red.name(),
        "a": ld.a_v,
        "f": ld.f_v,
        "theta": ld.theta,
        "additive": ld.additive.map(|k| format!("{k:?}")),
    })
}

fn table_for(cli: &Cli, c: &CurveSpec) -> Result<LocalTable> {
    LocalTable::new(c, CountConfig { threshold: cli.global.threshold.max(2), seed: cli.global.seed })
}

fn check_dmax(d_max: usize) -> Result<()> {
    if d_max == 0 {
        return Err(Error::InvalidArgument("--d-max must be at least 1".into()));
    }
    Ok(())
}

/// L-polynomial with automatic truncation raised until the degree is certified.
fn lpoly_auto(table: &mut LocalTable, n: u32, trunc: Option<usize>, inc: bool) -> Result<LPolynomial> {
    match trunc {
        Some(t) => l_polynomial_from_table(table, n, t, inc),
        None => {
            let mut t = default_trunc(table.special(), n, inc);
            loop {
                match l_polynomial_from_table(table, n, t, inc) {
                    Err(Error::TruncationTooSmall { .. }) if t + 2 <= MAX_AUTO_TRUNC => t += 2,
                    other => return other,
                }
            }
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Report> {
    let inc = !cli.global.exclude_infinite;
    match &cli.command {
        Command::Places { q, p, k, modulus, deg, count } => {
            let base = field_from_parts(*q, *p, *k, modulus.as_deref())?;
            if *deg == 0 {
                return Err(Error::InvalidArgument("--deg must be at least 1".into()));
            }
            let name = format!("q{}_d{}", base.q(), deg);
            if *count {
                let n = necklace_count(base.q(), *deg as u32);
                return Ok(Report { name, ext: "txt", body: format!("{n}\n") });
            }
            let ring = PolyRing::new(base.clone());
            let places = enumerate_monic_irreducibles(&base, *deg)?;
            let list: Vec<String> = places.iter().map(|p| ring.render(p)).collect();
            Ok(Report::json(name, &json!({ "q": base.q(), "degree": deg, "count": list.len(), "places": list })))
        }
        Command::CurveInfo(arg) => {
            let (c, name) = load_curve(arg)?;
            let table = table_for(cli, &c)?;
            let ring = c.ring();
            let inv = c.invariants();
            let bad: Vec<Value> = table
                .special()
                .iter()
                .filter(|ld| inc || ld.place != Place::Infinite)
                .map(|ld| ld_json(ld, ring))
                .collect();
            Ok(Report::json(
                name,
                &json!({
                    "q": c.field().q(),
                    "a": c.render(),
                    "c4": ring.render(&inv.c4),
                    "c6": ring.render(&inv.c6),
                    "disc": ring.render(&inv.disc),
                    "j": format!("({}) / ({})", ring.render(&inv.j_num), ring.render(&inv.j_den)),
                    "nonconstant": true,
                    "conductor_degree": conductor_degree(table.special(), inc),
                    "expected_degree": crate::lfunc::expected_degree(table.special(), 1, inc),
                    "places": bad,
                }),
            ))
        }
        Command::Local { curve, place } => {
            let (c, name) = load_curve(curve)?;
            let v = parse_place(c.field(), place)?;
            let cfg = CountConfig { threshold: cli.global.threshold.max(2), seed: cli.global.seed };
            let ld = local_data(&c, &v, &cfg)?;
            let tag: String = place.chars().filter(|ch| ch.is_ascii_alphanumeric()).collect();
            Ok(Report::json(format!("{name}_{tag}"), &ld_json(&ld, c.ring())))
        }
        Command::Lpoly { curve, n, trunc } => {
            let (c, name) = load_curve(curve)?;
            if !(1..=2).contains(n) {
                return Err(Error::InvalidArgument(format!("symmetric power {n} is not supported")));
            }
            let mut table = table_for(cli, &c)?;
            let l = lpoly_auto(&mut table, *n, *trunc, inc)?;
            let mut v = l.to_json(Some(&c.render()));
            let moduli = normalized_root_moduli(&l);
            let worst = moduli.iter().map(|m| (m - 1.0).abs()).fold(0.0, f64::max);
            v["root_modulus_max_error"] = json!(worst);
            if *n == 2 {
                v["delta"] = json!(delta(&l)?);
            } else {
                // the centre report needs the symmetric square; skip it when that is not certifiable
                if let Ok(l2) = lpoly_auto(&mut table, 2, None, inc) {
                    let r = center_report(&l, &l2)?;
                    v["center"] = serde_json::to_value(r).expect("plain data");
                }
            }
            Ok(Report::json(format!("{name}_n{n}"), &v))
        }
        Command::Bias { curve, kind, d_max } => {
            let (c, name) = load_curve(curve)?;
            check_dmax(*d_max)?;
            let kind: BiasKind = kind.parse()?;
            let mut table = table_for(cli, &c)?;
            let s = bias_series_from_table(&mut table, kind, *d_max, inc)?;
            let rname = format!("{name}_{kind}");
            match format_or(cli, Format::Csv) {
                Format::Csv => Ok(Report::csv(rname, s.to_csv())),
                Format::Json => {
                    let fit = classify_bias(&s).ok();
                    Ok(Report::json(
                        rname,
                        &json!({
                            "series": s,
                            "fit": fit.map(|f| f.1),
                            "class": fit.map(|f| f.0),
                            "threshold": crate::bias::UNBIASED_THRESHOLD,
                        }),
                    ))
                }
            }
        }
        Command::Drh { curve, d_max } => {
            let (c, name) = load_curve(curve)?;
            check_dmax(*d_max)?;
            let mut table = table_for(cli, &c)?;
            let r = drh_check_from_table(&mut table, *d_max, inc, None)?;
            match format_or(cli, Format::Csv) {
                Format::Csv => Ok(Report::csv(name, r.to_csv())),
                Format::Json => Ok(Report::json(name, &r.to_json())),
            }
        }
        Command::Bsd { curve, d_max } => {
            let (c, name) = load_curve(curve)?;
            check_dmax(*d_max)?;
            let mut table = table_for(cli, &c)?;
            let s = bsd_series_from_table(&mut table, *d_max, inc)?;
            match format_or(cli, Format::Csv) {
                Format::Csv => Ok(Report::csv(name, s.to_csv())),
                Format::Json => Ok(Report::json(name, &serde_json::to_value(&s).expect("plain data"))),
            }
        }
        Command::Te { curve, d_max } => {
            let (c, name) = load_curve(curve)?;
            check_dmax(*d_max)?;
            let mut table = table_for(cli, &c)?;
            let s = t_e_series_from_table(&mut table, *d_max, inc)?;
            match format_or(cli, Format::Csv) {
                Format::Csv => Ok(Report::csv(name, s.to_csv())),
                Format::Json => Ok(Report::json(name, &serde_json::to_value(&s).expect("plain data"))),
            }
        }
        Command::Classic(cmd) => {
            let s = match cmd {
                ClassicCommand::Chi4 { x, grid } => chi4_bias_series(parse_limit(x)?, *grid)?,
                ClassicCommand::Tau { x, grid } => tau_bias_series(parse_limit(x)?, *grid)?,
                ClassicCommand::Pis { x, q, a, s, grid } => pi_weighted_series(parse_limit(x)?, *q, *a, *s, *grid)?,
            };
            classic_report(cli, s)
        }
    }
}

fn classic_report(cli: &Cli, s: ClassicSeries) -> Result<Report> {
    let name = s.name.clone();
    match format_or(cli, Format::Csv) {
        Format::Csv => Ok(Report::csv(name, s.to_csv())),
        Format::Json => Ok(Report::json(name, &serde_json::to_value(&s).expect("plain data"))),
    }
}
