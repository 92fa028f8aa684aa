use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use deltoid::algebra::{parse_rational, Rational};
use deltoid::error::ReportError;
use deltoid::hypergroup::{
    block_norms, markov_matrix_exact, orthonormal_singular_value, sigma_distance, theta_grid, ThetaSample,
    DEFAULT_THETA_OFFSET,
};
use deltoid::quadrature::TorusGrid;
use deltoid::report::*;
use deltoid::sampling::{sample_omega1, sample_su3_haar, sample_torus, Method};
use deltoid::spectral::EigenTable;

#[derive(Parser)]
#[command(name = "deltoid", version, about = "Verification toolkit for deltoid diffusions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the whole verification suite.
    Verify(VerifyArgs),
    /// Eigenpolynomial coefficient tables as JSON.
    Eigen(EigenArgs),
    /// Quadrature Gram matrix of the Phat, Qhat basis.
    Gram(GramArgs),
    /// Monte Carlo Markov matrices of K_theta.
    Markov(MarkovArgs),
    /// Draw a seeded sample batch.
    Sample(SampleArgs),
    /// SVG plots.
    Plot(PlotArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Flat `key = value` file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Small sample counts and grids.
    #[arg(long)]
    quick: bool,
    /// Extra `key=value` overrides, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Report JSON path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EigenArgs {
    #[arg(long, value_parser = parse_lambda)]
    lambda: Rational,
    #[arg(long, default_value_t = 4)]
    degree_max: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GramArgs {
    #[arg(long, value_parser = parse_lambda)]
    lambda: Rational,
    #[arg(long, default_value_t = 5)]
    degree_max: u32,
    #[arg(long, default_value_t = 96)]
    grid: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MarkovArgs {
    #[arg(long, value_parser = parse_lambda, default_value = "11/2")]
    lambda: Rational,
    /// One block; needs --k. Without it every block up to --degree-max.
    #[arg(long, requires = "k")]
    n: Option<u32>,
    #[arg(long, requires = "n")]
    k: Option<u32>,
    #[arg(long, default_value_t = 4)]
    degree_max: u32,
    #[arg(long, default_value_t = 5)]
    theta_grid: usize,
    #[arg(long, default_value_t = 200_000)]
    samples: usize,
    #[arg(long, default_value_t = 20261016)]
    seed: u64,
    #[arg(long, default_value = "rejection")]
    method: Method,
    #[arg(long, default_value_t = 4.0)]
    sigma: f64,
    /// CSV of matrices; the verdict goes next to it with a `.json` extension.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    Torus,
    Su3,
    Omega1,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_parser = parse_lambda, default_value = "11/2")]
    lambda: Rational,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 20261016)]
    seed: u64,
    #[arg(long, default_value = "rejection")]
    method: Method,
    /// torus and su3 ignore --lambda (they realize lambda 1 and 4).
    #[arg(long, value_enum, default_value = "omega1")]
    space: Space,
    /// `.bin` writes the binary Omega_1 format, anything else CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlotWhat {
    Boundary,
    Eigen,
    Coverage,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(value_enum)]
    what: PlotWhat,
    #[arg(long, value_parser = parse_lambda, default_value = "4")]
    lambda: Rational,
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value_t = 120)]
    cells: usize,
    /// Theta grid side for the coverage map.
    #[arg(long, default_value_t = 60)]
    m: usize,
    #[arg(long)]
    out: PathBuf,
}

fn parse_lambda(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct MarkovVerdict {
    lambda: String,
    samples: usize,
    theta_points: usize,
    sigma: f64,
    max_z_alpha_gamma: f64,
    max_singular_value: f64,
    max_singular_excess_sigma: f64,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE as u8),
            };
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}

fn run(cmd: Cmd) -> Result<i32, ReportError> {
    match cmd {
        Cmd::Verify(a) => verify(a),
        Cmd::Eigen(a) => {
            let table = EigenTable::build(&a.lambda, a.degree_max)?;
            write_json(&eigen_document(&table), &a.out)?;
            Ok(EXIT_OK)
        }
        Cmd::Gram(a) => gram(a),
        Cmd::Markov(a) => markov(a),
        Cmd::Sample(a) => {
            let batch = match a.space {
                Space::Torus => sample_torus(a.n, a.seed)?,
                Space::Su3 => sample_su3_haar(a.n, a.seed)?,
                Space::Omega1 => sample_omega1(&a.lambda, a.n, a.seed, a.method)?,
            };
            if a.out.extension().is_some_and(|e| e == "bin") {
                write_batch_binary(&batch, &a.out)?;
            } else {
                write_batch_csv(&batch, &a.out)?;
            }
            Ok(EXIT_OK)
        }
        Cmd::Plot(a) => {
            let table;
            let kind = match a.what {
                PlotWhat::Boundary => PlotKind::Boundary,
                PlotWhat::Coverage => PlotKind::Coverage { m: a.m },
                PlotWhat::Eigen => {
                    table = EigenTable::build(&a.lambda, a.n + a.k)?;
                    PlotKind::Eigen { table: &table, n: a.n, k: a.k, cells: a.cells }
                }
            };
            std::fs::write(&a.out, plot_svg(kind)?)?;
            Ok(EXIT_OK)
        }
    }
}

fn verify(a: VerifyArgs) -> Result<i32, ReportError> {
    let mut cfg = if a.quick { Config::quick() } else { Config::default() };
    if let Some(p) = &a.config {
        cfg.apply_text(&std::fs::read_to_string(p)?)?;
    }
    for s in &a.sets {
        let (k, v) = s.split_once('=').ok_or_else(|| ReportError::Config(format!("--set {s}: expected KEY=VALUE")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    let report = run_verify(&cfg)?;
    print!("{}", report.summary());
    if let Some(out) = &a.out {
        write_json(&report, out)?;
    }
    Ok(report.exit_code())
}

fn gram(a: GramArgs) -> Result<i32, ReportError> {
    let table = EigenTable::build(&a.lambda, a.degree_max)?;
    let grid = TorusGrid::new(&a.lambda, a.grid)?;
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for b in table.blocks() {
        basis.push(b.p.poly.clone());
        labels.push(format!("P({},{})", b.n, b.k));
        if let Some(q) = &b.q {
            basis.push(q.poly.clone());
            labels.push(format!("Q({},{})", b.n, b.k));
        }
    }
    let doc = gram_document(&a.lambda.to_string(), a.grid, labels, &grid.gram(&basis));
    write_json(&doc, &a.out)?;
    Ok(EXIT_OK)
}

fn verdict_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

fn markov(a: MarkovArgs) -> Result<i32, ReportError> {
    let degree = match (a.n, a.k) {
        (Some(n), Some(k)) => n + k,
        _ => a.degree_max,
    };
    let table = EigenTable::build(&a.lambda, degree)?;
    let grid = TorusGrid::new(&a.lambda, 256)?;
    let norms = block_norms(&table, &grid)?;
    let batch = sample_omega1(&a.lambda, a.samples, a.seed, a.method)?;
    let keep = |n: u32, k: u32| match (a.n, a.k) {
        (Some(bn), Some(bk)) => (n, k) == (bn.max(bk), bn.min(bk)),
        _ => true,
    };
    let thetas = theta_grid(a.theta_grid, DEFAULT_THETA_OFFSET);
    let mut rows = Vec::new();
    let (mut z, mut sv_max, mut excess) = (0f64, 0f64, 0f64);
    for th in &thetas {
        let est = ThetaSample::new(&table, th, &batch)?.markov_matrices(&norms);
        for ((e, b), nm) in est.iter().zip(table.blocks()).zip(&norms) {
            if !keep(b.n, b.k) {
                continue;
            }
            let x = markov_matrix_exact(b, nm, th)?;
            z = z.max(sigma_distance(e.alpha.value, x.alpha.value, e.alpha.stderr()));
            if let (Some(eg), Some(xg)) = (e.gamma, x.gamma) {
                z = z.max(sigma_distance(eg.value, xg.value, eg.stderr()));
            }
            let (sv, se) = orthonormal_singular_value(e, nm);
            sv_max = sv_max.max(sv);
            if sv > 1.0 {
                excess = excess.max(sigma_distance(sv, 1.0, se));
            }
            rows.push(markov_row("estimated", e));
            rows.push(markov_row("exact", &x));
        }
    }
    if rows.is_empty() {
        return Err(ReportError::Config("no block matches --n/--k".into()));
    }
    write_markov_csv(&rows, &a.out)?;
    let pass = z < a.sigma && excess < a.sigma;
    let v = MarkovVerdict {
        lambda: a.lambda.to_string(),
        samples: batch.len(),
        theta_points: thetas.len(),
        sigma: a.sigma,
        max_z_alpha_gamma: z,
        max_singular_value: sv_max,
        max_singular_excess_sigma: excess,
        pass,
    };
    write_json(&v, &verdict_path(&a.out))?;
    println!("max |z| {z:.2}, max singular value {sv_max:.4}: {}", if pass { "pass" } else { "fail" });
    Ok(if pass { EXIT_OK } else { EXIT_NUMERIC })
}
