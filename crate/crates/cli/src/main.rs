use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bpdr::angle_estimation::{estimate_angle_dense, AngleMethod};
use bpdr::harness::{
    random_start, run_experiment, sweep_rates, write_error_curve, ExperimentSpec, Grid, RunStatus,
};
use bpdr::linalg::io::{read_matrix, read_vector, write_vector};
use bpdr::operators::{AffineConstraint, ProxParams};
use bpdr::rate_theory::{
    best_rate_dr, best_rate_pr, optimal_parameters, relaxed_norm, rip_bound, SubspaceGeometry,
};
use bpdr::solvers::{fit_tail, solve_with_reference, SolverConfig, Variant};
use bpdr::{Error, SupportInfo};

const EXIT_INPUT: u8 = 1;
const EXIT_UNCONVERGED: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "bpdr", version, about = "Splitting solvers for basis pursuit and their convergence rates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Altproj,
    Dr,
}

#[derive(Subcommand)]
enum Command {
    /// Run one solver variant and write x, y and the error curve.
    Solve {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[arg(long)]
        variant: String,
        #[arg(long)]
        gamma: f64,
        /// ℓ² weight; omit for plain basis pursuit.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        max_iters: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Principal angle, optimal parameters and predicted rates for a support.
    Analyze {
        #[arg(long)]
        matrix: PathBuf,
        /// Comma-separated 0-based support indices.
        #[arg(long)]
        support: String,
    },
    /// Estimate cos θ₁ from the decay of a projection iteration.
    EstimateAngle {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        support: String,
        #[arg(long, value_enum, default_value = "altproj")]
        method: Method,
        #[arg(long, default_value_t = 2000)]
        iters: usize,
    },
    /// Tabulate closed-form rates over (c, λ) grids.
    Sweep {
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value = "0.05:1:0.05")]
        c_grid: String,
        #[arg(long, default_value = "0.25:2:0.25")]
        lambda_grid: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a JSON experiment spec and print the rate report.
    Experiment {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Brute-force RIP constant and the resulting bound on cos θ₁.
    RipBound {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        sparsity: usize,
    },
}

fn parse_support(n: usize, text: &str) -> bpdr::Result<SupportInfo> {
    let idx = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("bad support index {s:?}")))
        })
        .collect::<bpdr::Result<Vec<usize>>>()?;
    SupportInfo::from_indices(n, &idx)
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    matrix: &Path,
    rhs: &Path,
    variant: &str,
    gamma: f64,
    alpha: Option<f64>,
    lambda: Option<f64>,
    max_iters: usize,
    tol: f64,
    out: &Path,
) -> bpdr::Result<u8> {
    let variant: Variant = variant.parse()?;
    let k = AffineConstraint::new(read_matrix(matrix)?, read_vector(rhs)?)?;
    let prox = ProxParams::new(gamma, alpha.unwrap_or(f64::INFINITY))?;
    let mut cfg = SolverConfig::new(variant, prox)
        .with_max_iters(max_iters)
        .with_stop_tol(tol);
    if let Some(l) = lambda {
        if variant.fixed_lambda().is_some_and(|f| f != l) {
            return Err(Error::InvalidArgument(format!("{variant} requires lambda = {}", variant.fixed_lambda().unwrap())));
        }
        cfg = cfg.with_lambda(l);
    }
    let y0 = bpdr::linalg::Vector::zeros(k.cols());
    let (result, _) = solve_with_reference(&k, &cfg, &y0)?;
    fs::create_dir_all(out)?;
    write_vector(&out.join("x.mtx"), &result.x_final)?;
    write_vector(&out.join("y.mtx"), &result.y_final)?;
    if let Some(t) = &result.t_final {
        write_vector(&out.join("t.mtx"), t)?;
    }
    write_error_curve(&out.join("error_curve.csv"), &result.trace)?;
    println!("variant      {variant}");
    println!("gamma        {gamma}");
    println!("c            {}", prox.c());
    println!("lambda       {}", cfg.lambda);
    println!("iterations   {}", result.iterations);
    println!("converged    {}", result.converged());
    println!("residual     {:.3e}", k.residual(&result.x_final));
    match fit_tail(&result.trace, 0) {
        Ok(f) => println!("fitted rate  {:.6} (k = {}..{})", f.rate, f.k_start, f.k_end),
        Err(e) => println!("fitted rate  n/a ({e})"),
    }
    if result.stalled() {
        println!("stalled      true");
    }
    Ok(if result.converged() { 0 } else { EXIT_UNCONVERGED })
}

fn cmd_analyze(matrix: &Path, support: &str) -> bpdr::Result<u8> {
    let a = read_matrix(matrix)?;
    let s = parse_support(a.ncols(), support)?;
    let g = SubspaceGeometry::new(&a, &s)?;
    let theta = g.theta1();
    println!("theta1       {theta:.10}");
    println!("cos theta1   {:.10}", g.cos_theta1());
    println!("dim R(A^T)∩R(B^T)  {}", g.dim_intersection_ranges);
    println!();
    println!("{:<28} {:>8} {:>8} {:>12}", "iteration", "c", "lambda", "rate");
    println!("{:<28} {:>8} {:>8} {:>12.8}", "dr", 1.0, 1.0, g.cos_theta1());
    for l in [0.5, 1.5, 2.0] {
        println!("{:<28} {:>8} {:>8} {:>12.8}", "gdr", 1.0, l, relaxed_norm(theta, l));
    }
    match optimal_parameters(theta) {
        Ok(p) => {
            println!("{:<28} {:>8.5} {:>8} {:>12.8}", "dr-reg at c*", p.c_star, 1.0, best_rate_dr(theta));
            println!("{:<28} {:>8.5} {:>8} {:>12.8}", "pr-reg at c*", p.c_star, 2.0, best_rate_pr(theta));
            println!();
            println!("c*           {:.10}", p.c_star);
            println!("c_sharp      {:.10}", p.c_sharp);
            println!("c_bar        {:.10}", p.c_bar);
            println!("c_tilde      {:.10}", p.c_tilde);
        }
        Err(_) => {
            println!();
            println!("theta1 > pi/4: regularized optimal parameters are not defined");
        }
    }
    Ok(0)
}

fn cmd_estimate(matrix: &Path, support: &str, method: Method, iters: usize) -> bpdr::Result<u8> {
    let a = read_matrix(matrix)?;
    let s = parse_support(a.ncols(), support)?;
    let method = match method {
        Method::Altproj => AngleMethod::AltProj,
        Method::Dr => AngleMethod::DrFeas,
    };
    let x0 = random_start(a.ncols(), 0, 1.0);
    let est = estimate_angle_dense(&a, &s, &x0, iters, method)?;
    println!("method       {}", est.method);
    println!("cos theta1   {:.10}", est.cos_theta1);
    println!("theta1       {:.10}", est.theta1());
    println!("fit window   {}", est.fit_window);
    println!("residual     {:.3e}", est.residual);
    Ok(0)
}

fn cmd_sweep(theta: f64, c_grid: &str, lambda_grid: &str, out: &Path) -> bpdr::Result<u8> {
    let cg: Grid = c_grid.parse()?;
    let lg: Grid = lambda_grid.parse()?;
    cg.check_within(0.0, 1.0, "c")?;
    lg.check_within(0.0, 2.0, "lambda")?;
    let table = sweep_rates(theta, &cg.values(), &lg.values())?;
    table.write_csv(out)?;
    let p = table.params;
    println!("rows         {}", table.rows.len());
    println!("c*           {:.10}", p.c_star);
    println!("c_sharp      {:.10}", p.c_sharp);
    println!("c_bar        {:.10}", p.c_bar);
    println!("spectral check max gap {:.3e}", table.max_check_gap());
    if table.max_check_gap() > 1e-8 {
        return Ok(EXIT_NUMERICAL);
    }
    Ok(0)
}

fn cmd_experiment(spec: &Path) -> bpdr::Result<u8> {
    let spec = ExperimentSpec::from_path(spec)?;
    let report = run_experiment(&spec)?;
    println!(
        "{:>4} {:<15} {:>9} {:>6} {:>5} {:>10} {:>10} {:>9} {:>9} {:>7}  note",
        "run", "variant", "gamma", "c", "lam", "predicted", "fitted", "gap", "kind", "status"
    );
    let opt = |v: Option<f64>, p: usize| v.map(|x| format!("{x:.p$}")).unwrap_or_else(|| "-".into());
    for r in &report.rows {
        println!(
            "{:>4} {:<15} {:>9.4} {:>6.3} {:>5.2} {:>10} {:>10} {:>9} {:>9} {:>7}  {}",
            r.index,
            r.variant.to_string(),
            r.gamma,
            r.c,
            r.lambda,
            opt(r.predicted, 6),
            opt(r.fitted, 6),
            opt(r.gap, 4),
            r.kind.map(|k| format!("{k:?}").to_lowercase()).unwrap_or_else(|| "-".into()),
            format!("{:?}", r.status).to_lowercase(),
            r.note
        );
    }
    Ok(if report.rows.iter().all(|r| r.status == RunStatus::Pass) { 0 } else { EXIT_UNCONVERGED })
}

fn cmd_rip(matrix: &Path, sparsity: usize) -> bpdr::Result<u8> {
    let a = read_matrix(matrix)?;
    let r = rip_bound(&a, sparsity)?;
    println!("s            {}", r.s);
    println!("delta_s      {:.10}", r.delta_s);
    println!("d            {:.10}", r.d);
    println!("bound        {:.10}", r.bound);
    println!("applicable   {}", r.applicable());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Solve { matrix, rhs, variant, gamma, alpha, lambda, max_iters, tol, out } => {
            cmd_solve(matrix, rhs, variant, *gamma, *alpha, *lambda, *max_iters, *tol, out)
        }
        Command::Analyze { matrix, support } => cmd_analyze(matrix, support),
        Command::EstimateAngle { matrix, support, method, iters } => {
            cmd_estimate(matrix, support, *method, *iters)
        }
        Command::Sweep { theta, c_grid, lambda_grid, out } => cmd_sweep(*theta, c_grid, lambda_grid, out),
        Command::Experiment { spec } => cmd_experiment(spec),
        Command::RipBound { matrix, sparsity } => cmd_rip(matrix, *sparsity),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::UniquenessNotCertified(_) => EXIT_UNCONVERGED,
                e if e.is_input_error() => EXIT_INPUT,
                _ => EXIT_NUMERICAL,
            };
            ExitCode::from(code)
        }
    }
}
