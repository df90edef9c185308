//! Text syntax for operators and differential polynomials.
//!
//! ```text
//! expression := term (('+' | '-') term)*
//! term       := factor ('*'? factor)*
//! factor     := '-' factor | atom ['^' uint]
//! atom       := rational | 'Dx' | 'Dy' | ident ['[' int ']'] ['_' [xy]+] | '(' expression ')'
//! rational   := uint ['/' uint]
//! ```
//!
//! Products are noncommutative and read left to right, so `Dx*a` elaborates
//! to `a*Dx + a_x`. Derivative suffixes commute: `a_yx` is `a_xy`.
//! Files hold one expression per line; blank lines and lines starting with
//! `#` are skipped.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::operators::LinearDiffOperator;
use crate::ring::{DiffPolynomial, JetVariable, Monomial, Rational, Symbol};

/// Parsed syntax tree. Numeric literals are non-negative; signs are
/// explicit `Neg`/`Sub` nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperatorExpr {
    Num(Rational),
    Jet(JetVariable),
    Dx,
    Dy,
    Add(Box<OperatorExpr>, Box<OperatorExpr>),
    Sub(Box<OperatorExpr>, Box<OperatorExpr>),
    Mul(Box<OperatorExpr>, Box<OperatorExpr>),
    Neg(Box<OperatorExpr>),
    Pow(Box<OperatorExpr>, u32),
}

impl OperatorExpr {
    /// Normal form in `K[Dx, Dy]`.
    pub fn elaborate(&self) -> LinearDiffOperator {
        match self {
            OperatorExpr::Num(r) => {
                LinearDiffOperator::multiplication(DiffPolynomial::constant(r.clone()))
            }
            OperatorExpr::Jet(v) => {
                LinearDiffOperator::multiplication(DiffPolynomial::var(v.clone()))
            }
            OperatorExpr::Dx => LinearDiffOperator::dx(),
            OperatorExpr::Dy => LinearDiffOperator::dy(),
            OperatorExpr::Add(l, r) => &l.elaborate() + &r.elaborate(),
            OperatorExpr::Sub(l, r) => &l.elaborate() - &r.elaborate(),
            OperatorExpr::Mul(l, r) => l.elaborate().compose(&r.elaborate()),
            OperatorExpr::Neg(e) => -&e.elaborate(),
            OperatorExpr::Pow(e, n) => e.elaborate().pow(*n),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            OperatorExpr::Add(..) | OperatorExpr::Sub(..) => 0,
            OperatorExpr::Mul(..) => 1,
            OperatorExpr::Neg(..) | OperatorExpr::Pow(..) => 2,
            _ => 3,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            OperatorExpr::Num(r) => write!(f, "{r}"),
            OperatorExpr::Jet(v) => write!(f, "{v}"),
            OperatorExpr::Dx => f.write_str("Dx"),
            OperatorExpr::Dy => f.write_str("Dy"),
            OperatorExpr::Add(l, r) | OperatorExpr::Sub(l, r) => {
                l.write_at(f, 0)?;
                f.write_str(if matches!(self, OperatorExpr::Add(..)) {
                    " + "
                } else {
                    " - "
                })?;
                r.write_at(f, 1)
            }
            OperatorExpr::Mul(l, r) => {
                l.write_at(f, 1)?;
                f.write_str("*")?;
                r.write_at(f, 2)
            }
            OperatorExpr::Neg(e) => {
                f.write_str("-")?;
                e.write_at(f, 2)
            }
            OperatorExpr::Pow(e, n) => {
                e.write_at(f, 3)?;
                write!(f, "^{n}")
            }
        }
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Underscore,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let ch = chars[i];
        let (start_line, start_col) = (line, column);
        if ch == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if ch.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let tok = if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            column += i - start;
            out.push(Token {
                tok: Tok::Num(digits.parse().expect("ascii digits")),
                line: start_line,
                column: start_col,
            });
            continue;
        } else if ch.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            column += i - start;
            out.push(Token {
                tok: Tok::Ident(word),
                line: start_line,
                column: start_col,
            });
            continue;
        } else {
            match ch {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                '_' => Tok::Underscore,
                other => {
                    return Err(Error::Syntax {
                        line,
                        column,
                        message: format!("unexpected character {other:?}"),
                    })
                }
            }
        };
        out.push(Token {
            tok,
            line: start_line,
            column: start_col,
        });
        i += 1;
        column += 1;
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, t: &Token, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Token> {
        let t = self.next();
        if t.tok == want {
            Ok(t)
        } else {
            self.error(&t, format!("expected {what}"))
        }
    }

    fn expression(&mut self) -> Result<OperatorExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    lhs = OperatorExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.next();
                    lhs = OperatorExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<OperatorExpr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.next();
                }
                // juxtaposition
                Tok::Ident(_) | Tok::LParen => {}
                _ => return Ok(lhs),
            }
            lhs = OperatorExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
    }

    fn factor(&mut self) -> Result<OperatorExpr> {
        if self.peek().tok == Tok::Minus {
            self.next();
            return Ok(OperatorExpr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.next();
        let t = self.next();
        match t.tok {
            Tok::Num(ref n) => match u32::try_from(n) {
                Ok(e) => Ok(OperatorExpr::Pow(Box::new(base), e)),
                Err(_) => self.error(&t, "exponent too large"),
            },
            Tok::Minus => Err(Error::NegativePower {
                line: t.line,
                column: t.column,
            }),
            _ => self.error(&t, "expected exponent"),
        }
    }

    fn atom(&mut self) -> Result<OperatorExpr> {
        let t = self.next();
        match t.tok.clone() {
            Tok::Num(n) => {
                if self.peek().tok == Tok::Slash {
                    self.next();
                    let d = self.next();
                    match d.tok {
                        Tok::Num(den) if !den.is_zero() => {
                            Ok(OperatorExpr::Num(Rational::new(n, den)))
                        }
                        Tok::Num(_) => self.error(&d, "zero denominator"),
                        _ => self.error(&d, "expected denominator"),
                    }
                } else {
                    Ok(OperatorExpr::Num(Rational::from_integer(n)))
                }
            }
            Tok::Ident(word) if word == "Dx" => Ok(OperatorExpr::Dx),
            Tok::Ident(word) if word == "Dy" => Ok(OperatorExpr::Dy),
            Tok::Ident(word) => self.jet(word),
            Tok::LParen => {
                let inner = self.expression()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::End => self.error(&t, "unexpected end of input"),
            _ => self.error(&t, "expected a number, jet, Dx, Dy or '('"),
        }
    }

    fn jet(&mut self, name: String) -> Result<OperatorExpr> {
        let symbol = if self.peek().tok == Tok::LBracket {
            self.next();
            let negative = if self.peek().tok == Tok::Minus {
                self.next();
                true
            } else {
                false
            };
            let t = self.next();
            let index = match t.tok {
                Tok::Num(ref n) => match i64::try_from(n) {
                    Ok(i) => i,
                    Err(_) => return self.error(&t, "index too large"),
                },
                _ => return self.error(&t, "expected an integer index"),
            };
            self.expect(Tok::RBracket, "']'")?;
            Symbol::indexed(&name, if negative { -index } else { index })
        } else {
            Symbol::new(&name)
        };
        let (mut nx, mut ny) = (0, 0);
        if self.peek().tok == Tok::Underscore {
            self.next();
            let t = self.next();
            let letters = match &t.tok {
                Tok::Ident(w) if w.chars().all(|c| c == 'x' || c == 'y') => w.clone(),
                _ => return self.error(&t, "derivative suffix must be made of x and y"),
            };
            for c in letters.chars() {
                if c == 'x' {
                    nx += 1;
                } else {
                    ny += 1;
                }
            }
        }
        Ok(OperatorExpr::Jet(JetVariable::new(symbol, nx, ny)))
    }
}

/// Parses one expression into its syntax tree.
pub fn parse_expr(text: &str) -> Result<OperatorExpr> {
    let mut parser = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    let expr = parser.expression()?;
    let t = parser.next();
    if t.tok != Tok::End {
        return parser.error(&t, "unexpected trailing input");
    }
    Ok(expr)
}

pub fn parse_operator(text: &str) -> Result<LinearDiffOperator> {
    Ok(parse_expr(text)?.elaborate())
}

/// Parses an expression that must not contain derivative operators.
pub fn parse_polynomial(text: &str) -> Result<DiffPolynomial> {
    let op = parse_operator(text)?;
    if op.terms().any(|(&k, _)| k != (0, 0)) {
        return Err(Error::NotAPolynomial);
    }
    Ok(op.coefficient(0, 0))
}

/// Non-comment, non-blank lines of a file in this syntax.
pub fn expression_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn monomial_body(m: &Monomial) -> String {
    m.factors()
        .iter()
        .map(|(v, e)| {
            if *e == 1 {
                v.to_string()
            } else {
                format!("{v}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// A signed term `(is_negative, body)`, body being `|c|*m` with unit
/// factors omitted and `suffix` appended with `*`.
fn term_body(c: &Rational, m: &Monomial, suffix: &str) -> (bool, String) {
    let mag = c.abs();
    let mut parts = Vec::new();
    if !mag.is_one() || (m.is_one() && suffix.is_empty()) {
        parts.push(mag.to_string());
    }
    if !m.is_one() {
        parts.push(monomial_body(m));
    }
    if !suffix.is_empty() {
        parts.push(suffix.to_string());
    }
    (c.is_negative(), parts.join("*"))
}

fn join_signed(terms: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (i, (neg, body)) in terms.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Canonical text of a polynomial, terms in canonical monomial order.
pub fn format_polynomial(p: &DiffPolynomial) -> String {
    join_signed(p.terms().map(|(m, c)| term_body(c, m, "")))
}

fn derivative_word(i: u32, j: u32) -> String {
    let mut parts = Vec::new();
    for (name, e) in [("Dx", i), ("Dy", j)] {
        match e {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

/// Canonical text of an operator: decreasing total order, ties by
/// decreasing `Dx` power.
pub fn format_operator(op: &LinearDiffOperator) -> String {
    let mut keys: Vec<_> = op.terms().collect();
    keys.sort_by_key(|(&(i, j), _)| (std::cmp::Reverse(i + j), std::cmp::Reverse(i)));
    let mut terms = Vec::new();
    for (&(i, j), c) in keys {
        let word = derivative_word(i, j);
        if word.is_empty() {
            terms.extend(c.terms().map(|(m, k)| term_body(k, m, "")));
        } else if c.len() == 1 {
            let (m, k) = c.terms().next().expect("one term");
            terms.push(term_body(k, m, &word));
        } else {
            terms.push((false, format!("({})*{word}", format_polynomial(c))));
        }
    }
    join_signed(terms)
}

impl fmt::Display for DiffPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_polynomial(self))
    }
}

impl fmt::Display for LinearDiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_operator(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::LaplaceOperator;

    #[test]
    fn laplace_round_trip() {
        let op = parse_operator("Dx*Dy + a*Dx + b*Dy + c").unwrap();
        assert_eq!(op, LaplaceOperator::generic().to_operator());
        assert_eq!(format_operator(&op), "Dx*Dy + a*Dx + b*Dy + c");
    }

    #[test]
    fn out_of_order_factor_applies_leibniz() {
        let op = parse_operator("Dx*a").unwrap();
        assert_eq!(format_operator(&op), "a*Dx + a_x");
    }

    #[test]
    fn indexed_symbols() {
        let op = parse_operator("m[5]*Dx^5 + m[-5]*Dy^5").unwrap();
        assert_eq!(op.coefficient(5, 0), DiffPolynomial::symbol("m[5]"));
        assert_eq!(op.coefficient(0, 5), DiffPolynomial::symbol("m[-5]"));
        assert_eq!(format_operator(&op), "m[5]*Dx^5 + m[-5]*Dy^5");
    }

    #[test]
    fn zero_prints_as_zero() {
        assert_eq!(format_operator(&LinearDiffOperator::zero()), "0");
        assert_eq!(format_polynomial(&DiffPolynomial::zero()), "0");
    }

    #[test]
    fn polynomial_printing() {
        let p = parse_polynomial("m[4] - 5*m[5]*b").unwrap();
        assert_eq!(p.to_string(), "m[4] - 5*m[5]*b");
        let p = parse_polynomial("x3 + 3*x2*x1 + x1^3").unwrap();
        assert_eq!(p.to_string(), "x1^3 + 3*x1*x2 + x3");
        let p = parse_polynomial("-1/2*a_yx + 7").unwrap();
        assert_eq!(p.to_string(), "-1/2*a_xy + 7");
    }

    #[test]
    fn grouped_coefficient_round_trips() {
        let op = parse_operator("(a + b)*Dx - c*Dx^2*Dy - Dy").unwrap();
        let text = format_operator(&op);
        assert_eq!(text, "-c*Dx^2*Dy + (a + b)*Dx - Dy");
        assert_eq!(parse_operator(&text).unwrap(), op);
    }

    #[test]
    fn juxtaposition_multiplies() {
        assert_eq!(
            parse_operator("2a b").unwrap(),
            parse_operator("2*a*b").unwrap()
        );
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_operator("a +\n  * b") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_operator("a $ b"),
            Err(Error::Syntax {
                line: 1,
                column: 3,
                ..
            })
        ));
        assert!(matches!(
            parse_operator("(a + b"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(parse_operator("a_xz"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn negative_power_is_rejected() {
        assert_eq!(
            parse_operator("Dx^-1"),
            Err(Error::NegativePower { line: 1, column: 4 })
        );
    }

    #[test]
    fn polynomial_rejects_derivatives() {
        assert_eq!(parse_polynomial("a*Dx"), Err(Error::NotAPolynomial));
        // a derivative that cancels is fine
        assert_eq!(
            parse_polynomial("Dx*a - a*Dx").unwrap(),
            DiffPolynomial::jet("a", 1, 0)
        );
    }

    #[test]
    fn comment_lines_are_skipped() {
        let text = "# header\n\na + b\n  # indented comment\nc\n";
        assert_eq!(expression_lines(text).collect::<Vec<_>>(), ["a + b", "c"]);
    }

    #[test]
    fn tree_display_round_trips() {
        for text in [
            "a - (b - c)",
            "-(a*b)",
            "(a^2)^3",
            "(-a)^2",
            "Dx*(Dy*a)",
            "1/2*x - -y",
        ] {
            let e = parse_expr(text).unwrap();
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e, "{text}");
        }
    }
}
