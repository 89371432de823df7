use std::ffi::OsString;
use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;

use cdlst::numeric::{grid_max_abs, make_error_table, surface};
use cdlst::solver::{boundary_mismatch, initial_mismatch, residual, DEFAULT_MAX_TERMS};
use cdlst::{forward, solve, CanonicalExpr, Problem, Status};
use clap::{Parser, Subcommand};

use crate::parse::{parse_expr, render};
use crate::problem::load_problem;
use crate::report::{error_table_csv, surface_csv, SolveReport, TransformReport, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cdlsmd", version, about = "Exact transform-decomposition solver for conformable PDEs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a problem file and print the series as JSON.
    Solve {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_TERMS)]
        max_terms: usize,
    },
    /// Print the transform image of an expression as JSON.
    Transform { expr: String },
    /// Check a candidate (default: the computed solution) against the problem.
    Verify {
        file: PathBuf,
        #[arg(long)]
        solution: Option<String>,
    },
    /// CSV error table against the integer-order solution.
    Table {
        file: PathBuf,
        /// `eta,gamma` pairs separated by `;`.
        #[arg(long, default_value = "0.8,0.8;0.9,0.9")]
        orders: String,
        #[arg(long, default_value = "1")]
        x: String,
        #[arg(long, default_value = "0.1,0.2,0.3")]
        y: String,
        /// Reference solution; defaults to the computed solution at integer order.
        #[arg(long)]
        exact: Option<String>,
    },
    /// CSV grid of the solution values.
    Surface {
        file: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = 21)]
        res: usize,
        #[arg(long, default_value = "0,2")]
        x_range: String,
        #[arg(long, default_value = "0,2")]
        y_range: String,
    },
}

/// A failed command: exit code and message for stderr.
struct Failure(i32, String);

impl Failure {
    fn input(msg: impl ToString) -> Self {
        Failure(EXIT_INPUT, msg.to_string())
    }

    fn solver(msg: impl ToString) -> Self {
        Failure(EXIT_SOLVER, msg.to_string())
    }
}

fn numbers(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| Failure::input(format!("not a number: '{t}'")))).collect()
}

fn pair(s: &str) -> Result<(f64, f64), Failure> {
    match numbers(s)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(Failure::input(format!("expected two numbers, got '{s}'"))),
    }
}

fn solved(p: &Problem, max_terms: usize) -> Result<CanonicalExpr, Failure> {
    let sol = solve(p, max_terms);
    match sol.status {
        Status::Failed(reason) => Err(Failure::solver(format!("{}: {reason}", p.name))),
        _ => Ok(sol.assembled),
    }
}

/// Check grid `(0, 2]` in steps of 0.2.
fn check_grid() -> Vec<f64> {
    (1..=10).map(|i| 0.2 * f64::from(i)).collect()
}

fn json(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure(EXIT_INTERNAL, e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| Failure(EXIT_INTERNAL, e.to_string()))
}

fn text(out: &mut dyn Write, s: &str) -> Result<(), Failure> {
    out.write_all(s.as_bytes()).map_err(|e| Failure(EXIT_INTERNAL, e.to_string()))
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Solve { file, max_terms } => {
            let p = load_problem(&file).map_err(Failure::input)?;
            let sol = solve(&p, max_terms);
            let assembled = sol.components.iter().fold(CanonicalExpr::zero(), |acc, c| acc.add(c));
            if assembled != sol.assembled {
                return Err(Failure(EXIT_INTERNAL, "assembled solution differs from the sum of components".into()));
            }
            let res = residual(&p, &sol.assembled);
            let grid = check_grid();
            let residual_max = grid_max_abs(&res, &grid, &grid, p.eta.to_f64(), p.gamma.to_f64())
                .map_err(|e| Failure(EXIT_INTERNAL, e.to_string()))?;
            json(out, &SolveReport::new(&p.name, &sol, residual_max))?;
            if let Status::Failed(reason) = &sol.status {
                return Err(Failure::solver(format!("{}: {reason}", p.name)));
            }
            Ok(())
        }
        Command::Transform { expr } => {
            let e = parse_expr(&expr).map_err(Failure::input)?;
            json(out, &TransformReport::new(&e, &forward(&e)))
        }
        Command::Verify { file, solution } => {
            let p = load_problem(&file).map_err(Failure::input)?;
            let candidate = match solution {
                Some(s) => parse_expr(&s).map_err(Failure::input)?,
                None => solved(&p, DEFAULT_MAX_TERMS)?,
            };
            let res = residual(&p, &candidate);
            let grid = check_grid();
            let grid_max_abs = [(1.0, 1.0), (0.9, 0.9), (0.8, 0.8)]
                .iter()
                .map(|&(eta, gamma)| grid_max_abs(&res, &grid, &grid, eta, gamma).map(|m| (eta, gamma, m)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure(EXIT_INTERNAL, e.to_string()))?;
            let initial_conditions: Vec<bool> =
                initial_mismatch(&p, &candidate).iter().map(CanonicalExpr::is_zero).collect();
            let boundary_conditions: Vec<bool> =
                boundary_mismatch(&p, &candidate).iter().map(CanonicalExpr::is_zero).collect();
            let certified =
                res.is_zero() && initial_conditions.iter().all(|&b| b) && boundary_conditions.iter().all(|&b| b);
            json(
                out,
                &VerifyReport {
                    name: p.name.clone(),
                    candidate: render(&candidate),
                    residual: render(&res),
                    residual_zero: res.is_zero(),
                    initial_conditions,
                    boundary_conditions,
                    grid_max_abs,
                    certified,
                },
            )?;
            if certified {
                Ok(())
            } else {
                Err(Failure::solver(format!("{}: candidate does not solve the problem", p.name)))
            }
        }
        Command::Table { file, orders, x, y, exact } => {
            let p = load_problem(&file).map_err(Failure::input)?;
            let orders = orders.split(';').map(pair).collect::<Result<Vec<_>, _>>()?;
            let (xs, ys) = (numbers(&x)?, numbers(&y)?);
            let solution = solved(&p, DEFAULT_MAX_TERMS)?;
            let exact = match exact {
                Some(s) => parse_expr(&s).map_err(Failure::input)?,
                None => solution.clone(),
            };
            let rows = make_error_table(&solution, &exact, &xs, &ys, &orders).map_err(Failure::input)?;
            text(out, &error_table_csv(&rows))
        }
        Command::Surface { file, eta, gamma, res, x_range, y_range } => {
            let p = load_problem(&file).map_err(Failure::input)?;
            let solution = solved(&p, DEFAULT_MAX_TERMS)?;
            let grid = surface(&solution, pair(&x_range)?, pair(&y_range)?, res, eta, gamma).map_err(Failure::input)?;
            text(out, &surface_csv(&grid))
        }
    }
}

/// Runs the command line `args` (program name first), writing to the given
/// streams, and returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_INPUT;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match panic::catch_unwind(AssertUnwindSafe(|| execute(cli.command, out))) {
        Ok(Ok(())) => EXIT_OK,
        Ok(Err(Failure(code, msg))) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
        Err(_) => {
            let _ = writeln!(err, "error: internal invariant violated");
            EXIT_INTERNAL
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
