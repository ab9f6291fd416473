//! `semialg`: command-line front end.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 verification failure or
//! refuted query, 4 undecided oracle query or exhausted limit, 5 the input
//! has `n = s` and the reduction does not apply.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use semialg_core::construct::{find_m_eps0, reduce_n, reduce_n_plus_1};
use semialg_core::oracle::{certify_enclosure, estimate_n_x, IntervalBox};
use semialg_core::verify::{approx_polynomial, approx_polynomial_vanishing, grid_equivalence, GridSpec};
use semialg_core::{AffineFrame, Dd, System};

use semialg_cli::config::JobConfig;
use semialg_cli::format::*;

#[derive(Parser, Debug)]
#[command(name = "semialg", version, about = "Few-polynomial representations of basic semi-algebraic sets")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// JSON job configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every sampling step; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    #[value(name = "n")]
    N,
    #[value(name = "n+1")]
    NPlus1,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate n and the set X of points where n constraints vanish.
    NOf {
        input: PathBuf,
        /// Half-width of the search cube; certified from the input when absent.
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Reduce a system to n + 1 or n polynomials.
    Reduce {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "n+1")]
        mode: ModeArg,
        /// Points of X (mode n); estimated when absent.
        #[arg(long = "x")]
        x: Option<PathBuf>,
    },
    /// Build one polynomial whose nonnegativity set approximates P.
    Approx {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        eps: f64,
        /// Points where the polynomial must vanish.
        #[arg(long)]
        vanish_at: Option<PathBuf>,
        /// CSV file receiving the values of the polynomial on a grid.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Re-run grid equivalence on a reduction file.
    Verify { reduction: PathBuf },
    /// Decide whether P(M, eps) is bounded; searches M and eps when absent.
    CertifyBounded {
        input: PathBuf,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, requires = "m")]
        eps: Option<f64>,
    },
}

/// Error with a fixed exit code.
#[derive(Debug)]
struct Exit {
    code: u8,
    message: String,
}

impl fmt::Display for Exit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Exit {}

fn exit(code: u8, message: impl Into<String>) -> anyhow::Error {
    Exit { code, message: message.into() }.into()
}

fn core_code(e: &semialg_core::Error) -> u8 {
    use semialg_core::Error::*;
    match e {
        ActiveCountEqualsSize { .. } => 5,
        OracleUnknown(_) | DegreeCapExceeded { .. } => 4,
        CertificationFailed(_) => 3,
        DimensionMismatch { .. } | DuplicateMonomial | EmptyInput(_) | InvalidArgument(_) => 2,
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Exit>() {
            return e.code;
        }
        if let Some(e) = cause.downcast_ref::<semialg_core::Error>() {
            return core_code(e);
        }
    }
    2
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_system(path: &Path) -> Result<System> {
    read_json::<SystemFile>(path)?.to_system().with_context(|| format!("invalid system in {}", path.display()))
}

fn read_points(path: &Path, dim: usize) -> Result<Vec<Vec<f64>>> {
    let pts = read_json::<PointsFile>(path)?.points;
    if pts.iter().any(|p| p.len() != dim || p.iter().any(|c| !c.is_finite())) {
        bail!("points in {} must be finite and of dimension {dim}", path.display());
    }
    Ok(pts)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(std::io::stdout().write_all(text.as_bytes())?),
    }
}

/// Grid over the frame's ball, padded.
fn frame_grid(frame: &AffineFrame, padding: f64, n: usize) -> Result<GridSpec> {
    let r = frame.scale + padding;
    Ok(GridSpec::uniform(frame.center.iter().map(|c| c - r).collect(), frame.center.iter().map(|c| c + r).collect(), n)?)
}

fn cmd_n_of(cfg: &JobConfig, g: &Global, input: &Path, radius: Option<f64>) -> Result<u8> {
    let sys = read_system(input)?;
    let pc = cfg.pipeline(g.seed);
    let radius = match radius {
        Some(r) if r > 0.0 && r.is_finite() => r,
        Some(r) => bail!("--radius must be positive, got {r}"),
        None => find_m_eps0(sys.polys(), &pc)?.radius,
    };
    let est = estimate_n_x(sys.polys(), &IntervalBox::cube(sys.dim(), radius), &pc.oracle)?;
    eprintln!("n = {}, X {} with {} point(s)", est.n, if est.finite { "finite" } else { "not finite" }, est.points.len());
    for p in &est.points {
        eprintln!("  {p:?}");
    }
    let file = NxFile { n: est.n, finite: est.finite, points: est.points.clone(), verdict: (&est.verdict).into(), search_radius: radius };
    emit(g.out.as_deref(), &to_json(&file)?)?;
    // a refutation here only means n was not confirmed, which is undecided
    Ok(if est.verdict.is_proved() { 0 } else { 4 })
}

fn cmd_reduce(cfg: &JobConfig, g: &Global, input: &Path, mode: ModeArg, x: Option<&Path>) -> Result<u8> {
    let sys = read_system(input)?;
    let pc = cfg.pipeline(g.seed);
    let red = match mode {
        ModeArg::NPlus1 => reduce_n_plus_1(&sys, &pc)?,
        ModeArg::N => {
            let points = match x {
                Some(p) => read_points(p, sys.dim())?,
                None => {
                    let r = find_m_eps0(sys.polys(), &pc)?.radius;
                    let est = estimate_n_x(sys.polys(), &IntervalBox::cube(sys.dim(), r), &pc.oracle)?;
                    if !est.finite {
                        return Err(exit(2, "X does not look finite; pass --x or use --mode n+1"));
                    }
                    est.points
                }
            };
            reduce_n(&sys, &points, &pc)?
        }
    };
    let spec = frame_grid(red.output.frame(), cfg.grid.padding, cfg.grid.resolution)?;
    let rep = grid_equivalence(&sys, &red.output, &spec, cfg.grid.tol)?;
    emit(g.out.as_deref(), &to_json(&ReductionFile::new(&red, Some(&rep)))?)?;
    eprintln!(
        "{} output polynomial(s), degrees {:?}; audit {}; grid equivalence {} ({} closed / {} open disagreements, {} band points)",
        red.output.len(),
        red.output.polys().iter().map(|p| p.degree()).collect::<Vec<_>>(),
        if red.audit.all_passed() { "passed" } else { "FAILED" },
        if rep.passed() { "passed" } else { "FAILED" },
        rep.closed_disagree,
        rep.open_disagree,
        rep.band
    );
    for c in red.audit.failures() {
        eprintln!("  audit failure: {}: {}", c.name, c.detail);
    }
    Ok(if red.audit.all_passed() && rep.passed() { 0 } else { 3 })
}

fn cmd_approx(cfg: &JobConfig, g: &Global, input: &Path, eps: f64, vanish: Option<&Path>, plot: Option<&Path>) -> Result<u8> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(exit(2, format!("--eps must be positive, got {eps}")));
    }
    let sys = read_system(input)?;
    let ac = cfg.approx(g.seed);
    let points = vanish.map(|p| read_points(p, sys.dim())).transpose()?;
    let a = match &points {
        Some(x) => approx_polynomial_vanishing(&sys, x, eps, &ac)?,
        None => approx_polynomial(&sys, eps, &ac)?,
    };
    let file = ApproxFile {
        q: PolyFile::from_dd(&a.q),
        frame: (&a.frame).into(),
        eps,
        eps_used: a.eps_used,
        weight: a.weight,
        lambda: a.lambda,
        k: a.k,
        hausdorff: (&a.hausdorff).into(),
        history: a.history.iter().map(|(e, h)| (*e, h.upper)).collect(),
        vanish_at: points.clone().unwrap_or_default(),
    };
    emit(g.out.as_deref(), &to_json(&file)?)?;
    eprintln!(
        "degree {} polynomial, Hausdorff estimate in [{:.4}, {:.4}] (target {eps})",
        a.q.degree(),
        a.hausdorff.lower,
        a.hausdorff.upper
    );
    if let Some(path) = plot {
        write_plot(path, &a.as_system()?, &a.frame, cfg.grid.padding, cfg.grid.resolution)?;
    }
    Ok(0)
}

/// CSV `x1,...,xd,value` of the single polynomial of `sys` on a grid.
fn write_plot(path: &Path, sys: &System<Dd>, frame: &AffineFrame, padding: f64, n: usize) -> Result<()> {
    let spec = frame_grid(frame, padding, n)?;
    let grid = spec.grid();
    let d = spec.dim();
    let mut out = String::new();
    let header: Vec<String> = (1..=d).map(|i| format!("x{i}")).chain(["value".to_string()]).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for j in 0..grid.len() {
        let x = grid.point(j);
        let v = sys.eval(&x)[0];
        let row: Vec<String> = x.iter().chain([&v]).map(|c| c.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

fn cmd_verify(cfg: &JobConfig, g: &Global, path: &Path) -> Result<u8> {
    let file: ReductionFile = read_json(path)?;
    if file.output.polys.is_empty() {
        return Err(exit(2, "reduction file has no output polynomials"));
    }
    let input = file.input.to_system().context("invalid input system")?;
    let output = file.output.to_dd_system().context("invalid output system")?;
    let spec = frame_grid(output.frame(), cfg.grid.padding, cfg.grid.resolution)?;
    let rep = grid_equivalence(&input, &output, &spec, cfg.grid.tol)?;
    emit(g.out.as_deref(), &to_json(&EquivalenceFile::from(&rep))?)?;
    eprintln!(
        "grid equivalence {}: {} points, {} band, {} closed / {} open disagreements",
        if rep.passed() { "passed" } else { "FAILED" },
        rep.points,
        rep.band,
        rep.closed_disagree,
        rep.open_disagree
    );
    Ok(if rep.passed() { 0 } else { 3 })
}

fn cmd_certify_bounded(cfg: &JobConfig, g: &Global, input: &Path, m: Option<u32>, eps: Option<f64>) -> Result<u8> {
    let sys = read_system(input)?;
    let pc = cfg.pipeline(g.seed);
    let file = match m {
        Some(m) => {
            let eps = eps.unwrap_or(1.0);
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(exit(2, format!("--eps must be positive, got {eps}")));
            }
            let c = certify_enclosure(sys.polys(), m, eps, &pc.oracle)?;
            BoundedFile { m, eps, verdict: (&c.verdict).into(), radius: c.radius }
        }
        None => {
            let r = find_m_eps0(sys.polys(), &pc)?;
            BoundedFile { m: r.m.value, eps: r.eps0.value, verdict: VerdictFile::Proved, radius: Some(r.radius) }
        }
    };
    eprintln!("P({}, {}): {:?}", file.m, file.eps, file.verdict);
    emit(g.out.as_deref(), &to_json(&file)?)?;
    Ok(match &file.verdict {
        VerdictFile::Proved => 0,
        VerdictFile::Refuted { .. } => 3,
        VerdictFile::Unknown { .. } => 4,
    })
}

fn run(cli: &Cli) -> Result<u8> {
    let cfg = JobConfig::load(cli.global.config.as_deref())?;
    let g = &cli.global;
    match &cli.command {
        Command::NOf { input, radius } => cmd_n_of(&cfg, g, input, *radius),
        Command::Reduce { input, mode, x } => cmd_reduce(&cfg, g, input, *mode, x.as_deref()),
        Command::Approx { input, eps, vanish_at, plot } => cmd_approx(&cfg, g, input, *eps, vanish_at.as_deref(), plot.as_deref()),
        Command::Verify { reduction } => cmd_verify(&cfg, g, reduction),
        Command::CertifyBounded { input, m, eps } => cmd_certify_bounded(&cfg, g, input, *m, *eps),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
