//! Problem files: `key = value` lines with `#` comments.
//!
//! ```text
//! name  = klein-gordon
//! eta   = 1
//! gamma = 1
//! lhs   = Dy^2(psi) - Dx^2(psi) + psi*psi
//! g1    = 2*X^2 - 2*Y^2
//! g2    = X^4*Y^4
//! ic0   = 0
//! ic1   = 0
//! bc0   = 0
//! bc1   = 0
//! ```
//!
//! The left-hand side is a sum of `c*Dx^p(psi)`, `c*Dy^q(psi)` and at most one
//! bilinear term `c*Dx^a(Dy^b(F * G))` where `F` and `G` are derivatives of `psi`.

use std::collections::BTreeMap;
use std::path::Path;

use cdlst::{CanonicalExpr, LinearOperator, NonlinearitySpec, OperatorTerm, Problem, Rational};

use crate::parse::{parse_expr_at, Lexer, ParseError, Tok};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProblemError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("line {line}: expected 'key = value'")]
    MalformedLine { line: usize },
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key '{key}'")]
    DuplicateKey { line: usize, key: String },
    #[error("missing key '{0}'")]
    MissingKey(String),
    #[error("invalid problem: {0}")]
    Validation(String),
}

/// Derivative orders applied to `psi` or to a product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct Orders {
    dx: u32,
    dy: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum OpNode {
    Psi(Orders),
    Product { outer: Orders, left: Orders, right: Orders },
}

fn op_node(lx: &mut Lexer) -> Result<OpNode, ParseError> {
    match lx.peek().clone() {
        Tok::Ident(name) if name == "psi" => {
            lx.bump();
            Ok(OpNode::Psi(Orders::default()))
        }
        Tok::Ident(name) if name == "Dx" || name == "Dy" => {
            lx.bump();
            let k = if lx.eat('^') { lx.uint()? } else { 1 };
            lx.expect('(')?;
            let inner = op_product(lx)?;
            lx.expect(')')?;
            let add =
                |o: Orders| if name == "Dx" { Orders { dx: o.dx + k, ..o } } else { Orders { dy: o.dy + k, ..o } };
            Ok(match inner {
                OpNode::Psi(o) => OpNode::Psi(add(o)),
                OpNode::Product { outer, left, right } => OpNode::Product { outer: add(outer), left, right },
            })
        }
        Tok::Sym('(') => {
            lx.bump();
            let inner = op_product(lx)?;
            lx.expect(')')?;
            Ok(inner)
        }
        _ => Err(lx.error(&["'psi'", "'Dx'", "'Dy'", "'('"])),
    }
}

fn op_product(lx: &mut Lexer) -> Result<OpNode, ParseError> {
    let col = lx.column();
    let left = op_node(lx)?;
    if !lx.eat('*') {
        return Ok(left);
    }
    let right = op_node(lx)?;
    match (left, right) {
        (OpNode::Psi(left), OpNode::Psi(right)) => Ok(OpNode::Product { outer: Orders::default(), left, right }),
        _ => Err(lx.out_of_class(col, "only bilinear nonlinearities are supported")),
    }
}

/// Parses the left-hand side into its linear operator and optional nonlinearity.
fn parse_lhs(
    src: &str,
    line: usize,
    col_offset: usize,
) -> Result<(Vec<OperatorTerm>, Option<NonlinearitySpec>), ParseError> {
    let mut lx = Lexer::new(src, line, col_offset)?;
    let mut linear = Vec::new();
    let mut nonlin: Option<NonlinearitySpec> = None;
    let mut sign = Rational::one();
    if lx.eat('-') {
        sign = Rational::from_int(-1);
    } else {
        lx.eat('+');
    }
    loop {
        let col = lx.column();
        let mut coeff = sign.clone();
        if matches!(lx.peek(), Tok::Int(_)) {
            coeff = &coeff * &lx.rational()?;
            lx.expect('*')?;
        }
        match op_product(&mut lx)? {
            OpNode::Psi(o) => linear.push(OperatorTerm { coeff, dx_order: o.dx, dy_order: o.dy }),
            OpNode::Product { outer, left, right } => {
                if nonlin.is_some() {
                    return Err(lx.out_of_class(col, "at most one nonlinear term is supported"));
                }
                nonlin = Some(NonlinearitySpec {
                    coeff,
                    outer_dx: outer.dx,
                    outer_dy: outer.dy,
                    left_dx: left.dx,
                    left_dy: left.dy,
                    right_dx: right.dx,
                    right_dy: right.dy,
                });
            }
        }
        if lx.eat('+') {
            sign = Rational::one();
        } else if lx.eat('-') {
            sign = Rational::from_int(-1);
        } else {
            lx.expect_end()?;
            return Ok((linear, nonlin));
        }
    }
}

/// Key, value and the 0-based column where the value starts.
fn split_line(raw: &str) -> Option<(&str, &str, usize)> {
    let (key, value) = raw.split_once('=')?;
    let offset = raw.len() - value.len();
    let lead = value.len() - value.trim_start().len();
    Some((key.trim(), value.trim(), offset + lead))
}

fn indexed_key(key: &str, prefix: &str) -> Option<usize> {
    let digits = key.strip_prefix(prefix)?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

/// Parses the text of a problem file.
pub fn parse_problem(text: &str) -> Result<Problem, ProblemError> {
    let mut fields: BTreeMap<String, (String, usize, usize)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let (key, value, col) = split_line(content).ok_or(ProblemError::MalformedLine { line })?;
        let known = matches!(key, "name" | "eta" | "gamma" | "lhs" | "g1" | "g2")
            || indexed_key(key, "ic").is_some()
            || indexed_key(key, "bc").is_some();
        if !known {
            return Err(ProblemError::UnknownKey { line, key: key.into() });
        }
        if fields.insert(key.into(), (value.into(), line, col)).is_some() {
            return Err(ProblemError::DuplicateKey { line, key: key.into() });
        }
    }
    let get = |key: &str| fields.get(key).ok_or_else(|| ProblemError::MissingKey(key.into()));
    let expr_field = |key: &str| -> Result<CanonicalExpr, ProblemError> {
        let (v, line, col) = get(key)?;
        Ok(parse_expr_at(v, *line, *col)?)
    };
    let order_field = |key: &str| -> Result<Rational, ProblemError> {
        let (v, line, _) = get(key)?;
        v.parse()
            .map_err(|_| ProblemError::Validation(format!("line {line}: {key} must be a rational number, got '{v}'")))
    };
    let name = get("name")?.0.clone();
    let eta = order_field("eta")?;
    let gamma = order_field("gamma")?;
    let (lhs, lhs_line, lhs_col) = get("lhs")?;
    let (terms, nonlin) = parse_lhs(lhs, *lhs_line, *lhs_col)?;
    let linear_op = LinearOperator::new(terms).map_err(|e| ProblemError::Validation(e.to_string()))?;
    let g1 = expr_field("g1")?;
    let g2 = expr_field("g2")?;
    let conditions = |prefix: &str, count: usize, what: &str| -> Result<Vec<CanonicalExpr>, ProblemError> {
        let given = fields.keys().filter(|k| indexed_key(k, prefix).is_some()).count();
        let out = (0..count)
            .map(|j| {
                let key = format!("{prefix}{j}");
                match fields.get(&key) {
                    Some((v, line, col)) => Ok(parse_expr_at(v, *line, *col)?),
                    None => {
                        Err(ProblemError::Validation(format!("{what} needs {count} conditions but '{key}' is missing")))
                    }
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        if given != count {
            return Err(ProblemError::Validation(format!("{what} needs {count} conditions, found {given}")));
        }
        Ok(out)
    };
    let ics = conditions("ic", linear_op.max_dy() as usize, "the τ-order of the operator")?;
    let bcs = conditions("bc", linear_op.max_dx() as usize, "the ξ-order of the operator")?;
    let p = Problem { name, linear_op, nonlin, g1, g2, ics, bcs, eta, gamma };
    p.validate().map_err(|e| ProblemError::Validation(e.to_string()))?;
    Ok(p)
}

pub fn load_problem(path: &Path) -> Result<Problem, ProblemError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ProblemError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_problem(&text)
}
