//! Text form of canonical expressions.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' uint)?
//! atom     := rational | 'X' | 'Y' | func '(' expr ')' | '(' expr ')' | '-' factor
//! func     := 'exp' | 'sin' | 'cos'
//! rational := int ('/' uint)?
//! ```
//!
//! `X` stands for ξ and `Y` for τ. Unary minus covers the whole factor, so
//! `-X^2` is `-(X^2)`.

use std::fmt::Write as _;

use cdlst::{CanonicalExpr, Rational, Trig, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: expected {}, found {found}", expected.join(" or "))]
    Syntax { line: usize, column: usize, expected: Vec<String>, found: String },
    #[error("line {line}, column {column}: {message}")]
    OutOfClass { line: usize, column: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Int(String),
    Ident(String),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("'{n}'"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::End => "end of input".into(),
        }
    }
}

/// Token stream over one line of text; columns are 1-based.
pub(crate) struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
}

impl Lexer {
    pub(crate) fn new(src: &str, line: usize, col_offset: usize) -> Result<Self, ParseError> {
        let mut toks = Vec::new();
        let chars: Vec<char> = src.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1 + col_offset;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                toks.push((Tok::Int(digits), col));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
            } else if "+-*/^()".contains(c) {
                toks.push((Tok::Sym(c), col));
                i += 1;
            } else {
                return Err(ParseError::Syntax {
                    line,
                    column: col,
                    expected: vec!["an expression token".into()],
                    found: format!("'{c}'"),
                });
            }
        }
        toks.push((Tok::End, chars.len() + 1 + col_offset));
        Ok(Self { toks, pos: 0, line })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    pub(crate) fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn error(&self, expected: &[&str]) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            column: self.column(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    pub(crate) fn out_of_class(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::OutOfClass { line: self.line, column, message: message.into() }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&[&format!("'{c}'")]))
        }
    }

    pub(crate) fn expect_end(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.error(&["'+'", "'-'", "'*'", "end of input"]))
        }
    }

    pub(crate) fn uint(&mut self) -> Result<u32, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                let col = self.column();
                self.bump();
                n.parse().map_err(|_| self.out_of_class(col, "exponent too large"))
            }
            _ => Err(self.error(&["an unsigned integer"])),
        }
    }

    /// `int ('/' uint)?` with the integer already at the cursor.
    pub(crate) fn rational(&mut self) -> Result<Rational, ParseError> {
        let num = match self.bump() {
            Tok::Int(n) => n,
            _ => unreachable!("caller checked for an integer"),
        };
        if !self.eat('/') {
            return Ok(num.parse().expect("digits form an integer"));
        }
        let col = self.column();
        match self.peek().clone() {
            Tok::Int(d) => {
                self.bump();
                if d.bytes().all(|b| b == b'0') {
                    return Err(self.out_of_class(col, "zero denominator"));
                }
                Ok(format!("{num}/{d}").parse().expect("digits form a fraction"))
            }
            _ => Err(self.error(&["an unsigned integer"])),
        }
    }
}

pub(crate) fn expr(lx: &mut Lexer) -> Result<CanonicalExpr, ParseError> {
    let mut acc = term(lx)?;
    loop {
        if lx.eat('+') {
            acc = acc.add(&term(lx)?);
        } else if lx.eat('-') {
            acc = acc.sub(&term(lx)?);
        } else {
            return Ok(acc);
        }
    }
}

fn term(lx: &mut Lexer) -> Result<CanonicalExpr, ParseError> {
    let mut acc = factor(lx)?;
    while lx.eat('*') {
        acc = acc.mul(&factor(lx)?);
    }
    Ok(acc)
}

fn factor(lx: &mut Lexer) -> Result<CanonicalExpr, ParseError> {
    let base = atom(lx)?;
    if lx.eat('^') {
        let k = lx.uint()?;
        return Ok(base.pow(k));
    }
    Ok(base)
}

fn atom(lx: &mut Lexer) -> Result<CanonicalExpr, ParseError> {
    let col = lx.column();
    match lx.peek().clone() {
        Tok::Int(_) => Ok(CanonicalExpr::constant(lx.rational()?)),
        Tok::Sym('-') => {
            lx.bump();
            Ok(factor(lx)?.scale(&Rational::from_int(-1)))
        }
        Tok::Sym('(') => {
            lx.bump();
            let e = expr(lx)?;
            lx.expect(')')?;
            Ok(e)
        }
        Tok::Ident(name) => {
            lx.bump();
            match name.as_str() {
                "X" => Ok(CanonicalExpr::xi()),
                "Y" => Ok(CanonicalExpr::tau()),
                "exp" | "sin" | "cos" => {
                    lx.expect('(')?;
                    let arg = expr(lx)?;
                    lx.expect(')')?;
                    apply_function(&name, &arg).map_err(|m| lx.out_of_class(col, m))
                }
                _ => Err(ParseError::Syntax {
                    line: lx.line,
                    column: col,
                    expected: vec!["'X'".into(), "'Y'".into(), "'exp'".into(), "'sin'".into(), "'cos'".into()],
                    found: format!("'{name}'"),
                }),
            }
        }
        _ => Err(lx.error(&["a number", "'X'", "'Y'", "a function", "'('", "'-'"])),
    }
}

/// `(a, b)` when `e = aξ + bτ` exactly.
fn linear_form(e: &CanonicalExpr) -> Option<(Rational, Rational)> {
    let (mut a, mut b) = (Rational::zero(), Rational::zero());
    for (basis, c) in e.iter() {
        let plain = |f: &cdlst::Factor| f.rate.is_zero() && f.trig == Trig::None;
        if !plain(&basis.xi) || !plain(&basis.tau) {
            return None;
        }
        match (basis.xi.power, basis.tau.power) {
            (1, 0) => a = c.clone(),
            (0, 1) => b = c.clone(),
            _ => return None,
        }
    }
    Some((a, b))
}

fn apply_function(name: &str, arg: &CanonicalExpr) -> Result<CanonicalExpr, String> {
    let (a, b) =
        linear_form(arg).ok_or_else(|| format!("{name} needs an argument of the form a*X + b*Y with rational a, b"))?;
    let (sx, cx) = (CanonicalExpr::sin(Var::Xi, a.clone()), CanonicalExpr::cos(Var::Xi, a.clone()));
    let (sy, cy) = (CanonicalExpr::sin(Var::Tau, b.clone()), CanonicalExpr::cos(Var::Tau, b.clone()));
    Ok(match name {
        "exp" => CanonicalExpr::exp(a, b),
        // angle addition keeps every factor in one variable
        "sin" => sx.mul(&cy).add(&cx.mul(&sy)),
        _ => cx.mul(&cy).sub(&sx.mul(&sy)),
    })
}

/// Parses one expression; positions are reported on line 1.
pub fn parse_expr(src: &str) -> Result<CanonicalExpr, ParseError> {
    parse_expr_at(src, 1, 0)
}

/// Parses an expression found at `line`, starting after `col_offset` characters.
pub fn parse_expr_at(src: &str, line: usize, col_offset: usize) -> Result<CanonicalExpr, ParseError> {
    let mut lx = Lexer::new(src, line, col_offset)?;
    let e = expr(&mut lx)?;
    lx.expect_end()?;
    Ok(e)
}

/// `coeff*var` with a unit coefficient left out, and an explicit sign.
fn linear_text(out: &mut String, terms: &[(&Rational, &str)]) {
    let mut first = true;
    for (c, var) in terms {
        if c.is_zero() {
            continue;
        }
        let a = c.abs();
        match (first, c.is_negative()) {
            (true, true) => out.push('-'),
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
            (true, false) => {}
        }
        first = false;
        if !a.is_one() {
            let _ = write!(out, "{a}*");
        }
        out.push_str(var);
    }
}

fn trig_text(trig: &Trig, var: &str) -> Option<String> {
    let (name, f) = match trig {
        Trig::None => return None,
        Trig::Sin(f) => ("sin", f),
        Trig::Cos(f) => ("cos", f),
    };
    let mut s = format!("{name}(");
    linear_text(&mut s, &[(f, var)]);
    s.push(')');
    Some(s)
}

/// Canonical text of an expression; [`parse_expr`] reads it back exactly.
pub fn render(e: &CanonicalExpr) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (basis, c)) in e.iter().enumerate() {
        let mut parts: Vec<String> = Vec::new();
        for (f, var) in [(&basis.xi, "X"), (&basis.tau, "Y")] {
            match f.power {
                0 => {}
                1 => parts.push(var.into()),
                p => parts.push(format!("{var}^{p}")),
            }
        }
        if !basis.xi.rate.is_zero() || !basis.tau.rate.is_zero() {
            let mut s = String::from("exp(");
            linear_text(&mut s, &[(&basis.xi.rate, "X"), (&basis.tau.rate, "Y")]);
            s.push(')');
            parts.push(s);
        }
        parts.extend(trig_text(&basis.xi.trig, "X"));
        parts.extend(trig_text(&basis.tau.trig, "Y"));
        let a = c.abs();
        match (k == 0, c.is_negative()) {
            (true, true) => out.push('-'),
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
            (true, false) => {}
        }
        if parts.is_empty() {
            let _ = write!(out, "{a}");
        } else {
            if !a.is_one() {
                let _ = write!(out, "{a}*");
            }
            out.push_str(&parts.join("*"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn example_forms() {
        let e = parse_expr("exp(-Y)*sin(X)").unwrap();
        assert_eq!(e, CanonicalExpr::exp(r(0), r(-1)).mul(&CanonicalExpr::sin(Var::Xi, r(1))));
        assert_eq!(render(&e), "exp(-Y)*sin(X)");
        let e = parse_expr("Y^2 + X*Y").unwrap();
        assert_eq!(render(&e), "Y^2 + X*Y");
        assert_eq!(render(&parse_expr("1 - Y*exp(X)").unwrap()), "1 - Y*exp(X)");
    }

    #[test]
    fn sine_squared_reduces() {
        let e = parse_expr("sin(X)^2").unwrap();
        let half = Rational::new(1, 2);
        let expected = CanonicalExpr::constant(half.clone()).sub(&CanonicalExpr::cos(Var::Xi, r(2)).scale(&half));
        assert_eq!(e, expected);
        for t in [0.1, 0.7, 2.3] {
            assert!((e.eval_canonical(t, 0.0) - t.sin().powi(2)).abs() < 1e-14);
        }
    }

    #[test]
    fn unary_minus_and_rationals() {
        assert_eq!(parse_expr("-X^2").unwrap(), CanonicalExpr::monomial(-1, 2, 0, r(0), r(0)));
        assert_eq!(parse_expr("3/2*X").unwrap(), CanonicalExpr::xi().scale(&Rational::new(3, 2)));
        assert_eq!(parse_expr("-(1 - X)").unwrap(), CanonicalExpr::xi().sub(&CanonicalExpr::constant(1)));
        assert_eq!(render(&parse_expr("exp(1/2*X - 2*Y)*cos(3*Y)").unwrap()), "exp(1/2*X - 2*Y)*cos(3*Y)");
    }

    #[test]
    fn angle_addition() {
        let e = parse_expr("sin(X + 2*Y)").unwrap();
        assert_eq!(e.len(), 2);
        assert!((e.eval_canonical(0.3, 0.4) - (0.3f64 + 0.8).sin()).abs() < 1e-14);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_expr("sin(X*Y)"), Err(ParseError::OutOfClass { column: 1, .. })));
        assert!(matches!(parse_expr("exp(1)"), Err(ParseError::OutOfClass { .. })));
        assert!(matches!(parse_expr("X +"), Err(ParseError::Syntax { column: 4, .. })));
        assert!(matches!(parse_expr("X $ Y"), Err(ParseError::Syntax { column: 3, .. })));
        assert!(matches!(parse_expr("Z"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("1/0"), Err(ParseError::OutOfClass { .. })));
        assert!(matches!(parse_expr("(X"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn zero_renders() {
        assert_eq!(render(&CanonicalExpr::zero()), "0");
        assert!(parse_expr("X - X").unwrap().is_zero());
    }
}
