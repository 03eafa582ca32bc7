use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use monosum_core::monomial::gevrey_fit;
use monosum_core::pde::{formal_solve, singular_directions, PdeProblem};
use monosum_core::scalar::{fmt_f64, parse_q};
use monosum_core::series::{read_series_csv, write_series_csv};
use monosum_core::summation::{monomial_borel_sum, SumOptions, SumResult};
use monosum_core::{Error, ExactComplex, GevreyFit, MonomialOrder, MultiIndex, Scalar, TruncatedSeries, Q};
use num_complex::Complex64;
use rayon::prelude::*;

#[derive(Parser, Debug)]
#[command(name = "monosum", version, about = "Monomial Borel summation of formal PDE solutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Numeric,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Formal solution up to total degree T, written as coefficient CSV.
    Solve {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        order: u32,
        #[arg(long, value_enum, default_value = "numeric")]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Singular directions of the problem, sorted in [0, 2π).
    Directions {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, value_enum, default_value = "numeric")]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Borel sum in direction θ at one or more points, one JSON line each.
    Sum {
        /// Problem JSON; its formal solution is summed.
        #[arg(long, required_unless_present = "series", conflicts_with = "series")]
        problem: Option<PathBuf>,
        /// Coefficient CSV instead of a problem file.
        #[arg(long)]
        series: Option<PathBuf>,
        /// Monomial exponents for --series input; read from the CSV when absent.
        #[arg(long)]
        alpha: Option<String>,
        /// Point such as "x1=1,eps1=-0.1"; complex values as "0.3+0.1i".
        #[arg(long = "at", required = true)]
        at: Vec<String>,
        /// Direction θ in the monomial variable x^α, in radians.
        #[arg(long, allow_negative_numbers = true)]
        direction: f64,
        /// Quadrature and pole-weight tolerance, in (0, 1e-2].
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Truncation order of the formal solution.
        #[arg(long, default_value_t = 60)]
        order: u32,
        /// Weight vector such as "1/3,2/3"; balanced when absent.
        #[arg(long)]
        weights: Option<String>,
        /// Padé denominator degree.
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, value_enum, default_value = "numeric")]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gevrey-order fit of a coefficient CSV with respect to x^α.
    Gevrey {
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, value_enum, default_value = "numeric")]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Singular(_)) => 2,
        Some(Error::SingularDirection(_)) => 3,
        Some(Error::NonConvergence(_)) => 4,
        _ => 1,
    }
}

fn num(x: f64) -> String {
    if x.is_finite() {
        fmt_f64(x)
    } else {
        "null".to_string()
    }
}

fn complex_json(z: &Complex64) -> String {
    format!("[{},{}]", num(z.re), num(z.im))
}

fn sum_json(r: &SumResult) -> String {
    let list = |v: &[Complex64]| v.iter().map(complex_json).collect::<Vec<_>>().join(",");
    format!(
        "{{\"value\":[{}],\"direction\":{},\"err\":{},\"poles\":[{}]}}",
        list(&r.value),
        num(r.direction),
        num(r.err),
        list(&r.poles)
    )
}

fn gevrey_json(g: &GevreyFit) -> String {
    format!("{{\"s\":{},\"C\":{},\"A\":{},\"r2\":{}}}", num(g.s_hat), num(g.c), num(g.a), num(g.r2))
}

fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read_problem<S: Scalar>(path: &Path) -> anyhow::Result<PdeProblem<S>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    PdeProblem::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn variable_names<S>(p: &PdeProblem<S>) -> Vec<String> {
    (1..=p.n).map(|j| format!("x{j}")).chain((1..=p.m).map(|j| format!("eps{j}"))).collect()
}

fn joint_alpha<S>(p: &PdeProblem<S>) -> Vec<u32> {
    p.alpha.iter().chain(&p.alpha_prime).copied().collect()
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn parse_alpha(s: &str) -> anyhow::Result<Vec<u32>> {
    s.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| anyhow!(Error::Parse(format!("bad α entry {t:?}")))))
        .collect()
}

fn solution<S: Scalar>(path: &Path, order: u32) -> anyhow::Result<(TruncatedSeries<S>, Vec<String>, Vec<u32>)> {
    let p: PdeProblem<S> = read_problem(path)?;
    let y = formal_solve(&p, order)?;
    Ok((y.series, variable_names(&p), joint_alpha(&p)))
}

fn solve(problem: &Path, order: u32, mode: Mode, out: &Option<PathBuf>) -> anyhow::Result<()> {
    fn run<S: Scalar>(problem: &Path, order: u32) -> anyhow::Result<Vec<u8>> {
        let (y, names, alpha) = solution::<S>(problem, order)?;
        let mut buf = Vec::new();
        write_series_csv(&y, &names, &[("alpha".to_string(), join(&alpha))], &mut buf)?;
        Ok(buf)
    }
    if order < 1 {
        bail!(Error::InvalidInput("--order must be at least 1".into()));
    }
    let buf = match mode {
        Mode::Exact => run::<ExactComplex>(problem, order)?,
        Mode::Numeric => run::<Complex64>(problem, order)?,
    };
    emit(out, &String::from_utf8(buf)?)
}

fn directions(problem: &Path, mode: Mode, out: &Option<PathBuf>) -> anyhow::Result<()> {
    let set = match mode {
        Mode::Exact => singular_directions(&read_problem::<ExactComplex>(problem)?)?,
        Mode::Numeric => singular_directions(&read_problem::<Complex64>(problem)?)?,
    };
    let list: Vec<String> = set.directions.iter().map(|d| num(*d)).collect();
    emit(out, &format!("[{}]\n", list.join(",")))
}

fn read_series<S: Scalar>(path: &Path) -> anyhow::Result<(TruncatedSeries<S>, Vec<String>, Option<String>)> {
    let file = File::open(path).with_context(|| format!("reading {}", path.display()))?;
    let csv = read_series_csv::<S, _>(BufReader::new(file)).with_context(|| format!("parsing {}", path.display()))?;
    Ok((csv.series, csv.names, csv.meta.get("alpha").cloned()))
}

fn parse_point(spec: &str, names: &[String]) -> anyhow::Result<Vec<Complex64>> {
    let mut x: Vec<Option<Complex64>> = vec![None; names.len()];
    for part in spec.split(',').filter(|s| !s.trim().is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| anyhow!(Error::Parse(format!("expected name=value in {part:?}"))))?;
        let j = names
            .iter()
            .position(|n| n == name.trim())
            .ok_or_else(|| anyhow!(Error::Parse(format!("unknown variable {:?}; expected one of {}", name.trim(), names.join(", ")))))?;
        let v = Complex64::from_str(value.trim())
            .map_err(|_| anyhow!(Error::Parse(format!("bad value {:?} for {}", value.trim(), names[j]))))?;
        x[j] = Some(v);
    }
    x.iter()
        .zip(names)
        .map(|(v, n)| v.ok_or_else(|| anyhow!(Error::Parse(format!("--at {spec:?} misses {n}")))))
        .collect()
}

fn parse_weights(s: &str) -> anyhow::Result<Vec<Q>> {
    Ok(s.split(',').map(parse_q).collect::<monosum_core::Result<Vec<_>>>()?)
}

struct SumArgs {
    problem: Option<PathBuf>,
    series: Option<PathBuf>,
    alpha: Option<String>,
    at: Vec<String>,
    direction: f64,
    tol: f64,
    order: u32,
    weights: Option<String>,
    degree: Option<usize>,
    mode: Mode,
}

fn sum(a: SumArgs, out: &Option<PathBuf>) -> anyhow::Result<()> {
    if !(a.tol > 0.0 && a.tol <= 1e-2) {
        bail!(Error::InvalidInput(format!("--tol must lie in (0, 1e-2], got {}", a.tol)));
    }
    let (y, names, alpha) = match (&a.problem, &a.series) {
        (Some(p), _) => {
            if a.order < 1 {
                bail!(Error::InvalidInput("--order must be at least 1".into()));
            }
            match a.mode {
                Mode::Exact => {
                    let (y, n, al) = solution::<ExactComplex>(p, a.order)?;
                    (y.to_numeric(), n, al)
                }
                Mode::Numeric => solution::<Complex64>(p, a.order)?,
            }
        }
        (None, Some(s)) => {
            let (y, n, meta) = match a.mode {
                Mode::Exact => {
                    let (y, n, m) = read_series::<ExactComplex>(s)?;
                    (y.to_numeric(), n, m)
                }
                Mode::Numeric => read_series::<Complex64>(s)?,
            };
            let spec = a
                .alpha
                .clone()
                .or(meta)
                .ok_or_else(|| anyhow!(Error::InvalidInput("--alpha is required for this series".into())))?;
            (y, n, parse_alpha(&spec)?)
        }
        (None, None) => bail!(Error::InvalidInput("either --problem or --series is required".into())),
    };
    let mo = match &a.weights {
        Some(w) => MonomialOrder::new(alpha, Q::from_integer(1), parse_weights(w)?)?,
        None => MonomialOrder::balanced(alpha, Q::from_integer(1))?,
    };
    let points = a.at.iter().map(|s| parse_point(s, &names)).collect::<anyhow::Result<Vec<_>>>()?;
    let opts = SumOptions { tol: a.tol, degree: a.degree };
    let results: Vec<monosum_core::Result<SumResult>> =
        points.par_iter().map(|x| monomial_borel_sum(&y, &mo, x, a.direction, &opts)).collect();
    let mut text = String::new();
    let mut first_err = None;
    for (spec, r) in a.at.iter().zip(results) {
        match r {
            Ok(r) => {
                text.push_str(&sum_json(&r));
                text.push('\n');
            }
            Err(e) => {
                eprintln!("error at {spec}: {e}");
                first_err.get_or_insert(e);
            }
        }
    }
    emit(out, &text)?;
    match first_err {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn gevrey(series: &Path, alpha: Option<String>, mode: Mode, out: &Option<PathBuf>) -> anyhow::Result<()> {
    fn run<S: Scalar>(series: &Path, alpha: Option<String>) -> anyhow::Result<GevreyFit> {
        let (y, _, meta) = read_series::<S>(series)?;
        let spec = alpha
            .or(meta)
            .ok_or_else(|| anyhow!(Error::InvalidInput("--alpha is required for this series".into())))?;
        Ok(gevrey_fit(&y, &MultiIndex(parse_alpha(&spec)?))?)
    }
    let fit = match mode {
        Mode::Exact => run::<ExactComplex>(series, alpha)?,
        Mode::Numeric => run::<Complex64>(series, alpha)?,
    };
    emit(out, &format!("{}\n", gevrey_json(&fit)))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Solve { problem, order, mode, out } => solve(&problem, order, mode, &out),
        Command::Directions { problem, mode, out } => directions(&problem, mode, &out),
        Command::Sum { problem, series, alpha, at, direction, tol, order, weights, degree, mode, out } => sum(
            SumArgs { problem, series, alpha, at, direction, tol, order, weights, degree, mode },
            &out,
        ),
        Command::Gevrey { series, alpha, mode, out } => gevrey(&series, alpha, mode, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
