//! Problem files, the expression grammar and the `cdlsmd` command line.

pub mod app;
pub mod parse;
pub mod problem;
pub mod report;

pub use app::{run, run_with};
pub use parse::{parse_expr, render, ParseError};
pub use problem::{load_problem, parse_problem, ProblemError};
