//! Command-line interface for exact p-adic harmonic analysis.
//!
//! Subcommands: `zeta`, `apply`, `solve`, `norm`, `kernel`, `verify`,
//! `oracle-check`. Inputs are JSON files (see the library's `json`
//! module); rationals are exact `"num/den"` strings. Exit codes: 0 pass,
//! 1 check failure, 2 input error, 3 budget exceeded.

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use taibleson_cli::accept;
use taibleson_cli::json::{self, rational_from_decimal};
use taibleson_core::covering::TreeBudget;
use taibleson_core::kernel::{
    elliptic_fundamental_solution, taibleson_fundamental_solution, KernelBase,
};
use taibleson_core::multiplier::{multiplier_apply, SymbolSpec};
use taibleson_core::schwartz::FourierDirection;
use taibleson_core::sobolev::{h_norm, NormKind};
use taibleson_core::solve::Solver;
use taibleson_core::zeta::{zeta_pairing, EllipticSymbol};
use taibleson_core::{oracle, Ctx, Error as CoreError, Point, TestFunction};

#[derive(Parser)]
#[command(
    name = "taibleson",
    about = "Exact harmonic analysis over the p-adic numbers",
    version
)]
struct Cli {
    /// Working precision in mantissa bits for numeric output.
    #[arg(long, global = true, default_value_t = 128)]
    precision_bits: usize,
    /// Residue-tree depth budget for ellipticity certification.
    #[arg(long, global = true, default_value_t = 12)]
    depth_budget: u32,
    /// Residue-tree node budget.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    node_budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum OperatorKind {
    Taibleson,
    Elliptic,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormKindArg {
    H,
    Singular,
    /// `int |F phi|`, the quantity behind the uniform-continuity embedding.
    L1Fourier,
}

#[derive(Subcommand)]
enum Command {
    /// Igusa zeta function of an elliptic polynomial (optionally paired
    /// with a test function) as an exact rational function of t = p^{-s}.
    Zeta {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        phi: Option<PathBuf>,
    },
    /// Apply a pseudo-differential operator pointwise.
    Apply {
        #[arg(long, value_enum)]
        kind: OperatorKind,
        #[arg(long)]
        poly: Option<PathBuf>,
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value = "plus")]
        sign: Sign,
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        points: PathBuf,
    },
    /// Solve f(D, alpha) u = v and report residuals.
    Solve {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        rhs: PathBuf,
        #[arg(long)]
        points: PathBuf,
    },
    /// Sobolev norm of a test function.
    Norm {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        l: String,
        #[arg(long, value_enum, default_value = "h")]
        kind: NormKindArg,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Fundamental-solution kernel (coefficients and sampled values).
    Kernel {
        #[arg(long, value_enum)]
        kind: OperatorKind,
        /// Polynomial file; for the Taibleson kind it only supplies p, n.
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, default_value = "default")]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Restrict the matrix to one prime.
        #[arg(long)]
        p: Option<u64>,
        /// Restrict the matrix to one dimension.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Compare the symbolic transform against the finite-quotient oracle.
    OracleCheck {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value = "1e-18")]
        tolerance: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let msg = format!("{e:#}");
            if msg.contains("budget") {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_symbol(path: &Path, budget: TreeBudget) -> Result<EllipticSymbol> {
    let j: json::PolynomialJson = read_json(path)?;
    let (prime, poly) = json::polynomial_from_json(&j)?;
    EllipticSymbol::new(poly, prime, budget).map_err(|e| match e {
        CoreError::BudgetExceeded { nodes, depth } => {
            anyhow!("residue-tree budget exceeded ({nodes} nodes, depth {depth}); inconclusive")
        }
        other => anyhow!("{other}"),
    })
}

fn load_phi(path: &Path) -> Result<TestFunction> {
    let j: json::TestFunctionJson = read_json(path)?;
    json::test_function_from_json(&j)
}

fn load_points(path: &Path) -> Result<Vec<Point>> {
    let j: json::PointsJson = read_json(path)?;
    let (_, pts) = json::points_from_json(&j)?;
    Ok(pts)
}

fn complex_json(v: &taibleson_core::Complex, precision_bits: usize) -> serde_json::Value {
    serde_json::json!({
        "re": v.re.to_f64(),
        "im": v.im.to_f64(),
        "precision_bits": precision_bits,
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    let ctx = Ctx::new(cli.precision_bits);
    let budget = TreeBudget {
        max_depth: cli.depth_budget,
        max_nodes: cli.node_budget,
    };
    match cli.command {
        Command::Zeta { poly, phi } => {
            let symbol = load_symbol(&poly, budget)?;
            let value = match phi {
                None => symbol.zeta().value().clone(),
                Some(path) => {
                    let phi = load_phi(&path)?;
                    zeta_pairing(symbol.poly(), symbol.covering(), &phi)
                        .map_err(|e| anyhow!("{e}"))?
                }
            };
            let out = json::laurent_rational_to_json(&value)?;
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Apply {
            kind,
            poly,
            alpha,
            sign,
            phi,
            points,
        } => {
            let alpha = rational_from_decimal(&alpha)?;
            let alpha = match sign {
                Sign::Plus => alpha,
                Sign::Minus => -alpha,
            };
            let phi = load_phi(&phi)?;
            let pts = load_points(&points)?;
            let symbol_store;
            let spec = match kind {
                OperatorKind::Taibleson => SymbolSpec::norm_power(alpha.clone()),
                OperatorKind::Elliptic => {
                    let path = poly.ok_or_else(|| anyhow!("--poly required for elliptic"))?;
                    symbol_store = load_symbol(&path, budget)?;
                    SymbolSpec::elliptic(&symbol_store, alpha.clone())
                }
            };
            let mut rows = Vec::new();
            for x in &pts {
                let v = multiplier_apply(&spec, &phi, x, &ctx).map_err(|e| anyhow!("{e}"))?;
                rows.push(serde_json::json!({
                    "point": x.coords().iter().map(json::rational_to_string).collect::<Vec<_>>(),
                    "value": complex_json(&v.value, cli.precision_bits),
                    "error_estimate": v.error_estimate,
                }));
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({ "values": rows }))?
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve {
            poly,
            alpha,
            rhs,
            points,
        } => {
            let symbol = load_symbol(&poly, budget)?;
            let alpha = rational_from_decimal(&alpha)?;
            let v = load_phi(&rhs)?;
            let pts = load_points(&points)?;
            let solver = Solver::new(&symbol, alpha, v, &ctx).map_err(|e| anyhow!("{e}"))?;
            let mut rows = Vec::new();
            let mut worst: f64 = 0.0;
            for x in &pts {
                let u = solver.evaluate(x, &ctx).map_err(|e| anyhow!("{e}"))?;
                let r = solver.residual(x, &ctx).map_err(|e| anyhow!("{e}"))?;
                let res = r.value.abs(&ctx).to_f64();
                worst = worst.max(res);
                rows.push(serde_json::json!({
                    "point": x.coords().iter().map(json::rational_to_string).collect::<Vec<_>>(),
                    "u": complex_json(&u.value, cli.precision_bits),
                    "residual": res,
                }));
            }
            let out = serde_json::json!({
                "outside_theorem_hypotheses": solver.outside_theorem_hypotheses,
                "max_residual": worst,
                "values": rows,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Norm {
            phi,
            l,
            kind,
            format,
        } => {
            let phi = load_phi(&phi)?;
            let l: BigRational = rational_from_decimal(&l)?;
            if matches!(kind, NormKindArg::L1Fourier) {
                let v = taibleson_core::sobolev::fourier_l1_norm(&phi, &ctx)
                    .map_err(|e| anyhow!("{e}"))?;
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "l1_fourier_norm": v.to_f64(),
                        "precision_bits": cli.precision_bits,
                    }))?
                );
                return Ok(ExitCode::SUCCESS);
            }
            let kind = match kind {
                NormKindArg::H => NormKind::H,
                NormKindArg::Singular => NormKind::SingularH,
                NormKindArg::L1Fourier => unreachable!(),
            };
            let rep = h_norm(&phi, &l, kind, &ctx).map_err(|e| anyhow!("{e}"))?;
            match format {
                Format::Json => {
                    let out = serde_json::json!({
                        "squared_norm": rep.squared_norm_f64(),
                        "precision_bits": cli.precision_bits,
                        "shells": rep.shell_breakdown.iter()
                            .map(|(j, m)| serde_json::json!({"shell": j, "mass": m}))
                            .collect::<Vec<_>>(),
                    });
                    println!("{}", serde_json::to_string_pretty(&out)?);
                }
                Format::Csv => {
                    println!("shell,mass");
                    for (j, m) in &rep.shell_breakdown {
                        println!("{j},{m}");
                    }
                    println!("total,{}", rep.squared_norm_f64());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Kernel {
            kind,
            poly,
            alpha,
            points,
        } => {
            let alpha = rational_from_decimal(&alpha)?;
            let symbol = load_symbol(&poly, budget)?;
            let kernel = match kind {
                OperatorKind::Taibleson => {
                    taibleson_fundamental_solution(symbol.prime(), symbol.dim(), &alpha, &ctx)
                        .map_err(|e| anyhow!("{e}"))?
                }
                OperatorKind::Elliptic => elliptic_fundamental_solution(&symbol, &alpha, &ctx)
                    .map_err(|e| anyhow!("{e}"))?,
            };
            let base = match kernel.base() {
                KernelBase::Power { exponent } => serde_json::json!({
                    "kind": "power",
                    "exponent": json::rational_to_string(exponent),
                }),
                KernelBase::Log => serde_json::json!({ "kind": "log" }),
            };
            let mut values = Vec::new();
            if let Some(path) = points {
                for x in load_points(&path)? {
                    if x.is_zero() {
                        continue;
                    }
                    let v = kernel.value_at(&x, &ctx).map_err(|e| anyhow!("{e}"))?;
                    values.push(serde_json::json!({
                        "point": x.coords().iter().map(json::rational_to_string).collect::<Vec<_>>(),
                        "value": v.to_f64(),
                    }));
                }
            }
            let out = serde_json::json!({
                "base": base,
                "coefficient": kernel.coeff().to_f64(),
                "w_only": kernel.is_w_only(),
                "values": values,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, seed, p, n } => {
            if suite != "default" {
                return Err(anyhow!("unknown suite {suite:?} (only \"default\" exists)"));
            }
            let matrix = accept::Matrix::restricted(p, n);
            if matrix.primes.is_empty() || matrix.dims.is_empty() {
                return Err(anyhow!("matrix restriction excludes everything"));
            }
            let results = accept::run_matrix(seed, cli.precision_bits, &matrix);
            let mut all_pass = true;
            println!("criterion  status  ms      description");
            for r in &results {
                all_pass &= r.pass;
                println!(
                    "{:>2}         {}    {:>6}  {} -- {}",
                    r.index,
                    if r.pass { "PASS" } else { "FAIL" },
                    r.millis,
                    r.name,
                    r.details
                );
            }
            if all_pass {
                println!("all {} criteria passed", results.len());
                Ok(ExitCode::SUCCESS)
            } else {
                println!("FAILURES present");
                Ok(ExitCode::from(1))
            }
        }
        Command::OracleCheck { phi, k, tolerance } => {
            let phi = load_phi(&phi)?;
            let g = oracle::project(&phi, k, &ctx).map_err(|e| anyhow!("{e}"))?;
            let hat_grid = oracle::dft(&g, oracle::DftDirection::Forward, &ctx);
            let hat = phi
                .fourier(FourierDirection::Forward)
                .map_err(|e| anyhow!("{e}"))?;
            let dev = oracle::compare_to_function(&hat_grid, &hat, &ctx)
                .map_err(|e| anyhow!("{e}"))?
                .to_f64();
            let pass = dev <= tolerance;
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "k": k,
                    "grid_points": g.grid.points(),
                    "max_deviation": dev,
                    "tolerance": tolerance,
                    "pass": pass,
                }))?
            );
            Ok(if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
