mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use qscheme::families::{
    appendix1_parameters, appendix2_parameters, cross_polytope, feasibility_scan, icosahedron,
    mub_design_from_bases, real_mub_design, simplex, twenty_four_cell, Appendix1Parameters,
    FeasibilityCandidate, RenderedTables,
};
use qscheme::io::{read_named, read_path, to_csv, to_json, AnyPointSet};
use qscheme::numerics::{Scalar, TolerancePolicy};
use qscheme::pipeline::analyze;
use qscheme::pointset::PointSet;

use report::{flatten, AnalysisReport, InputInfo, Timing};

#[derive(Parser)]
#[command(name = "qscheme", version, about = "Association schemes of antipodal spherical designs")]
struct Cli {
    /// Clustering tolerance for inner products (float inputs).
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,

    /// Zero tolerance for parameter checks (float inputs).
    #[arg(long, global = true, default_value_t = 1e-8)]
    zero: f64,

    /// Output format; csv gives key,value rows, or one row per candidate for scan.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write to this file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Include wall-clock time in analysis reports.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Cross,
    Icosahedron,
    #[value(name = "24cell")]
    TwentyFourCell,
    Mub,
    Simplex,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on a point-set file (.json or .csv).
    Analyze {
        /// Point-set file; `.csv` is read as floats, anything else as JSON.
        input: PathBuf,
    },
    /// Write a point set from one of the built-in families.
    Generate {
        #[arg(long, value_enum)]
        family: Family,
        /// Dimension for cross and simplex.
        #[arg(long)]
        n: Option<usize>,
        /// MUB parameter, n = 4^r.
        #[arg(long)]
        r: Option<u32>,
        /// Basis files for --family mub, validated for mutual unbiasedness.
        #[arg(long, num_args = 1..)]
        bases: Vec<PathBuf>,
    },
    /// Emit the closed-form parameter tables.
    Params {
        /// Which table family: 1 (degree 4, rational or quadratic) or 2 (MUB series).
        #[arg(long)]
        appendix: u8,
        /// Dimension, for appendix 1.
        #[arg(long)]
        n: Option<u64>,
        /// Half the design size, for appendix 1.
        #[arg(long = "N")]
        big_n: Option<u64>,
        /// Series index for appendix 2, n = 4^r.
        #[arg(long)]
        r: Option<u32>,
    },
    /// Search (n, N) with alpha = 1/m for feasible degree-4 parameters.
    Scan {
        /// `a..b` (inclusive) or a single value.
        #[arg(long)]
        m: String,
        /// Largest dimension tried.
        #[arg(long, default_value_t = 64)]
        n_max: u64,
        /// Smallest dimension tried.
        #[arg(long, default_value_t = 3)]
        n_min: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .context("configuring thread pool")?;
    }
    let policy = TolerancePolicy::new(cli.tolerance, cli.zero, TolerancePolicy::default().digits)?;
    match &cli.command {
        Command::Analyze { input } => run_analyze(cli, input, policy),
        Command::Generate { family, n, r, bases } => {
            run_generate(cli, *family, *n, *r, bases, policy)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Params { appendix, n, big_n, r } => {
            run_params(cli, *appendix, *n, *big_n, *r)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan { m, n_max, n_min } => {
            run_scan(cli, m, *n_min, *n_max)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_value<T: Serialize>(cli: &Cli, value: &T) -> anyhow::Result<()> {
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["key", "value"])?;
            for (k, v) in flatten(&serde_json::to_value(value)?) {
                w.write_record([k, v])?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    };
    emit(cli, &text)
}

fn run_analyze(cli: &Cli, input: &Path, policy: TolerancePolicy) -> anyhow::Result<ExitCode> {
    let start = Instant::now();
    let bytes = std::fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let info = |backend| InputInfo {
        path: input.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
        backend,
    };
    let digits = policy.digits;
    let parsed = std::str::from_utf8(&bytes)
        .map_err(|e| qscheme::Error::Parse(format!("input is not UTF-8: {e}")))
        .and_then(|text| read_named(input, text, policy));
    let (mut report, failure) = match parsed {
        Err(e) => {
            let mut r = AnalysisReport::empty(info("unknown"), policy);
            r.set_error(&e);
            (r, Some(e))
        }
        Ok(AnyPointSet::Exact(x)) => analyze_into(info("rational"), &x, policy, digits),
        Ok(AnyPointSet::Float(x)) => analyze_into(info("float"), &x, policy, digits),
    };
    if cli.timing {
        report.timing = Some(Timing {
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    emit_value(cli, &report)?;
    match failure {
        Some(e) => {
            eprintln!("error: {e}");
            Ok(ExitCode::from(1))
        }
        None => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn analyze_into<S: Scalar>(
    info: InputInfo,
    x: &PointSet<S>,
    policy: TolerancePolicy,
    digits: usize,
) -> (AnalysisReport, Option<qscheme::Error>) {
    let mut report = AnalysisReport::empty(info, policy);
    match analyze(x) {
        Ok(a) => {
            report.fill(&a, digits);
            (report, None)
        }
        Err(e) => {
            report.set_error(&e);
            (report, Some(e))
        }
    }
}

fn write_points<S: Scalar>(cli: &Cli, x: &PointSet<S>) -> anyhow::Result<()> {
    let text = match cli.format {
        Format::Json => to_json(x),
        Format::Csv => to_csv(x),
    };
    emit(cli, &text)
}

fn run_generate(
    cli: &Cli,
    family: Family,
    n: Option<usize>,
    r: Option<u32>,
    bases: &[PathBuf],
    policy: TolerancePolicy,
) -> anyhow::Result<()> {
    let need_n = || n.ok_or_else(|| anyhow!("--n is required for this family"));
    match family {
        Family::Cross => write_points(cli, &cross_polytope(need_n()?)?),
        Family::Simplex => write_points(cli, &simplex(need_n()?)?),
        Family::Icosahedron => write_points(cli, &icosahedron()),
        Family::TwentyFourCell => write_points(cli, &twenty_four_cell()),
        Family::Mub if !bases.is_empty() => {
            let sets = bases
                .iter()
                .map(|p| read_path(p, policy).with_context(|| format!("reading {}", p.display())))
                .collect::<anyhow::Result<Vec<_>>>()?;
            match &sets[0] {
                AnyPointSet::Exact(first) => {
                    let dim = first.dim();
                    let vecs = sets
                        .iter()
                        .map(|s| match s {
                            AnyPointSet::Exact(x) => Ok(x.points().to_vec()),
                            AnyPointSet::Float(_) => bail!("basis files mix rational and float"),
                        })
                        .collect::<anyhow::Result<Vec<_>>>()?;
                    write_points(cli, &mub_design_from_bases(dim, &vecs, policy)?)
                }
                AnyPointSet::Float(first) => {
                    let dim = first.dim();
                    let vecs = sets
                        .iter()
                        .map(|s| match s {
                            AnyPointSet::Float(x) => Ok(x.points().to_vec()),
                            AnyPointSet::Exact(x) => Ok(x.to_float()?.points().to_vec()),
                        })
                        .collect::<anyhow::Result<Vec<_>>>()?;
                    write_points(cli, &mub_design_from_bases(dim, &vecs, policy)?)
                }
            }
        }
        Family::Mub => {
            let r = r.ok_or_else(|| anyhow!("--r is required for --family mub"))?;
            write_points(cli, &real_mub_design(r)?)
        }
    }
}

#[derive(Serialize)]
struct Appendix1Output {
    appendix: u8,
    n: u64,
    #[serde(rename = "N")]
    big_n: u64,
    size: u64,
    /// `w² = 1/α²`.
    radicand: String,
    alpha: Option<String>,
    rational: bool,
    tables: RenderedTables,
    duality_holds: bool,
    krein_nonnegative: bool,
}

#[derive(Serialize)]
struct Appendix2Output {
    appendix: u8,
    r: u32,
    n: u64,
    size: u64,
    tables: RenderedTables,
}

fn render_surd_tables(a: &Appendix1Parameters) -> RenderedTables {
    let m = |x: &qscheme::families::SurdMatrix| -> Vec<Vec<String>> {
        x.iter().map(|r| r.iter().map(|v| v.render()).collect()).collect()
    };
    RenderedTables {
        intersection: a.intersection.iter().map(m).collect(),
        p: m(&a.p),
        q: m(&a.q),
        dual: m(&a.dual),
    }
}

fn run_params(cli: &Cli, appendix: u8, n: Option<u64>, big_n: Option<u64>, r: Option<u32>) -> anyhow::Result<()> {
    match appendix {
        1 => {
            let n = n.ok_or_else(|| anyhow!("--n is required for --appendix 1"))?;
            let big_n = big_n.ok_or_else(|| anyhow!("--N is required for --appendix 1"))?;
            let a = appendix1_parameters(n, big_n)?;
            let render = |q: &qscheme::numerics::Rational| q.render(0);
            emit_value(
                cli,
                &Appendix1Output {
                    appendix,
                    n,
                    big_n,
                    size: a.order(),
                    radicand: render(&a.radicand),
                    alpha: a.alpha().as_ref().map(render),
                    rational: a.is_rational(),
                    tables: render_surd_tables(&a),
                    duality_holds: a.duality_holds(),
                    krein_nonnegative: a.krein_nonnegative(),
                },
            )
        }
        2 => {
            let r = r.ok_or_else(|| anyhow!("--r is required for --appendix 2"))?;
            let t = appendix2_parameters(r)?;
            let n = 1u64 << (2 * r);
            emit_value(
                cli,
                &Appendix2Output {
                    appendix,
                    r,
                    n,
                    size: n * n + 2 * n,
                    tables: t.render(0),
                },
            )
        }
        other => bail!("--appendix must be 1 or 2, got {other}"),
    }
}

fn parse_range(s: &str) -> anyhow::Result<(u64, u64)> {
    let parse = |v: &str| v.trim().parse::<u64>().with_context(|| format!("bad range bound {v:?}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if a > b {
        bail!("empty range {s:?}");
    }
    Ok((a, b))
}

#[derive(Serialize)]
struct ScanOutput {
    m_range: (u64, u64),
    n_range: (u64, u64),
    candidates: Vec<FeasibilityCandidate>,
}

fn run_scan(cli: &Cli, m: &str, n_min: u64, n_max: u64) -> anyhow::Result<()> {
    let (m_lo, m_hi) = parse_range(m)?;
    if n_min > n_max {
        bail!("--n-min exceeds --n-max");
    }
    let candidates = feasibility_scan(n_min..=n_max, m_lo..=m_hi);
    match cli.format {
        Format::Json => emit_value(
            cli,
            &ScanOutput {
                m_range: (m_lo, m_hi),
                n_range: (n_min, n_max),
                candidates,
            },
        ),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["m", "n", "N", "multiplicities", "krein_min"])?;
            for c in &candidates {
                let mults: Vec<String> = c.multiplicities.iter().map(u64::to_string).collect();
                w.write_record([
                    c.m.to_string(),
                    c.n.to_string(),
                    c.big_n.to_string(),
                    mults.join(" "),
                    c.krein_min.clone(),
                ])?;
            }
            emit(cli, &String::from_utf8(w.into_inner()?)?)
        }
    }
}
