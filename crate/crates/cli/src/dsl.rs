//! Surface syntax for domains and figures.
//!
//! ```text
//! expr    := hartogs | domain
//! domain  := atom ('x' atom)*
//! atom    := 'disc' '(' num ')' | 'annulus' '(' num ',' num ')'
//! hartogs := 'hartogs' '(' 'X=' domain ',' 'X0=' domain ',' 'Y=' domain ',' 'Y0=' domain ')'
//! num     := digits ['/' digits] | digits '.' digits
//! ```

use std::fmt;

use hartogs::domains::DomainError;
use hartogs::{Factor1D, HartogsFigure, Radius, Rational, ReinhardtBoxDomain};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("expected a {expected}, found a {found}")]
    Kind { expected: &'static str, found: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("semantic error: {0}")]
    Semantic(#[from] SemanticError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Disc(Rational),
    Annulus(Rational, Rational),
}

/// A product of one or more atoms; products never nest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainExpr(pub Vec<Atom>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Domain(DomainExpr),
    Hartogs { x: DomainExpr, x0: DomainExpr, y: DomainExpr, y0: DomainExpr },
}

fn radius(r: Rational) -> Result<Radius, DomainError> {
    Radius::new(r)
}

impl Atom {
    fn to_factor(&self) -> Result<Factor1D, DomainError> {
        match *self {
            Atom::Disc(r) => Ok(Factor1D::disc(radius(r)?)),
            Atom::Annulus(r, big) => Factor1D::annulus(radius(r)?, radius(big)?),
        }
    }
}

impl DomainExpr {
    pub fn to_domain(&self) -> Result<ReinhardtBoxDomain, SemanticError> {
        let factors = self.0.iter().map(Atom::to_factor).collect::<Result<Vec<_>, _>>()?;
        Ok(ReinhardtBoxDomain::new(factors)?)
    }
}

impl Expr {
    pub fn kind(&self) -> &'static str {
        match self {
            Expr::Domain(_) => "domain",
            Expr::Hartogs { .. } => "hartogs figure",
        }
    }

    pub fn to_figure(&self) -> Result<HartogsFigure, SemanticError> {
        match self {
            Expr::Hartogs { x, x0, y, y0 } => {
                Ok(HartogsFigure::new(x.to_domain()?, x0.to_domain()?, y.to_domain()?, y0.to_domain()?)?)
            }
            Expr::Domain(_) => Err(SemanticError::Kind { expected: "hartogs figure", found: "domain" }),
        }
    }

    pub fn to_domain(&self) -> Result<ReinhardtBoxDomain, SemanticError> {
        match self {
            Expr::Domain(d) => d.to_domain(),
            Expr::Hartogs { .. } => Err(SemanticError::Kind { expected: "domain", found: "hartogs figure" }),
        }
    }
}

fn write_num(f: &mut fmt::Formatter<'_>, r: Rational) -> fmt::Result {
    if *r.denom() == 1 {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Atom::Disc(r) => {
                f.write_str("disc(")?;
                write_num(f, r)?;
                f.write_str(")")
            }
            Atom::Annulus(r, big) => {
                f.write_str("annulus(")?;
                write_num(f, r)?;
                f.write_str(",")?;
                write_num(f, big)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for DomainExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Domain(d) => write!(f, "{d}"),
            Expr::Hartogs { x, x0, y, y0 } => write!(f, "hartogs(X={x}, X0={x0}, Y={y}, Y0={y0})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(Rational),
    LParen,
    RParen,
    Comma,
    Eq,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Num(_) => "a number".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Eq => "'='".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    let mut out = Vec::new();
    let err = |line, column, message: String| SyntaxError { line, column, message };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, column);
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, line: l0, column: c0 });
            i += 1;
            column += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
        } else if c.is_ascii_digit() {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.' || chars[i] == '/') {
                i += 1;
            }
        } else {
            return Err(err(l0, c0, format!("unexpected character '{c}'")));
        }
        let text: String = chars[start..i].iter().collect();
        column += i - start;
        let tok = if c.is_ascii_digit() {
            Tok::Num(parse_num(&text).map_err(|m| err(l0, c0, m))?)
        } else {
            Tok::Ident(text)
        };
        out.push(Spanned { tok, line: l0, column: c0 });
    }
    out.push(Spanned { tok: Tok::End, line, column });
    Ok(out)
}

fn digits(s: &str, whole: &str) -> Result<i64, String> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("malformed number '{whole}'"));
    }
    s.parse::<i64>().map_err(|_| format!("number '{whole}' is out of range"))
}

/// Exact value of a fraction or decimal literal.
fn parse_num(text: &str) -> Result<Rational, String> {
    if let Some((n, d)) = text.split_once('/') {
        let (n, d) = (digits(n, text)?, digits(d, text)?);
        if d == 0 {
            return Err(format!("zero denominator in '{text}'"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let scale = u32::try_from(frac.len()).ok().and_then(|k| 10i64.checked_pow(k));
        let scale = scale.ok_or_else(|| format!("number '{text}' has too many decimals"))?;
        let (int, frac) = (digits(int, text)?, digits(frac, text)?);
        let n = int
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(|| format!("number '{text}' is out of range"))?;
        return Ok(Rational::new(n, scale));
    }
    Ok(Rational::from(digits(text, text)?))
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, SyntaxError> {
        let t = self.peek();
        Err(SyntaxError { line: t.line, column: t.column, message: format!("expected {expected}, found {}", t.tok.describe()) })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), SyntaxError> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(what)
        }
    }

    fn ident_is(&self, name: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == name)
    }

    fn num(&mut self) -> Result<Rational, SyntaxError> {
        match self.peek().tok {
            Tok::Num(r) => {
                self.bump();
                Ok(r)
            }
            _ => self.fail("a number"),
        }
    }

    fn atom(&mut self) -> Result<Atom, SyntaxError> {
        if self.ident_is("disc") {
            self.bump();
            self.expect(Tok::LParen, "'('")?;
            let r = self.num()?;
            self.expect(Tok::RParen, "')'")?;
            Ok(Atom::Disc(r))
        } else if self.ident_is("annulus") {
            self.bump();
            self.expect(Tok::LParen, "'('")?;
            let r = self.num()?;
            self.expect(Tok::Comma, "','")?;
            let big = self.num()?;
            self.expect(Tok::RParen, "')'")?;
            Ok(Atom::Annulus(r, big))
        } else {
            self.fail("'disc' or 'annulus'")
        }
    }

    fn domain(&mut self) -> Result<DomainExpr, SyntaxError> {
        let mut atoms = vec![self.atom()?];
        while self.ident_is("x") {
            self.bump();
            atoms.push(self.atom()?);
        }
        Ok(DomainExpr(atoms))
    }

    fn keyed(&mut self, key: &str) -> Result<DomainExpr, SyntaxError> {
        if !self.ident_is(key) {
            return self.fail(&format!("'{key}='"));
        }
        self.bump();
        self.expect(Tok::Eq, "'='")?;
        self.domain()
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let e = if self.ident_is("hartogs") {
            self.bump();
            self.expect(Tok::LParen, "'('")?;
            let x = self.keyed("X")?;
            self.expect(Tok::Comma, "','")?;
            let x0 = self.keyed("X0")?;
            self.expect(Tok::Comma, "','")?;
            let y = self.keyed("Y")?;
            self.expect(Tok::Comma, "','")?;
            let y0 = self.keyed("Y0")?;
            self.expect(Tok::RParen, "')'")?;
            Expr::Hartogs { x, x0, y, y0 }
        } else {
            Expr::Domain(self.domain()?)
        };
        if self.peek().tok != Tok::End {
            return self.fail("end of input");
        }
        Ok(e)
    }
}

pub fn parse(src: &str) -> Result<Expr, SyntaxError> {
    Parser { toks: lex(src)?, pos: 0 }.expr()
}

/// Parse and check that every radius is positive and every annulus has `r < R`.
pub fn parse_checked(src: &str) -> Result<Expr, DslError> {
    let e = parse(src)?;
    let check = |d: &DomainExpr| d.to_domain().map(|_| ());
    match &e {
        Expr::Domain(d) => check(d)?,
        Expr::Hartogs { .. } => {
            e.to_figure()?;
        }
    }
    Ok(e)
}
