//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | base ('^' ['-'] integer)?
//! base   := integer | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//! Rational constants are written as integer quotients, e.g. `1/2`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::chart::Chart;
use super::expr::{Expr, Func};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
    chart: &'a Chart,
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = text[start..i].parse().expect("digits");
            out.push((start, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(syntax(i, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(o, _)| *o)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(self.offset(), format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.factor()?;
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let at = self.offset();
                self.pos += 1;
                let rhs = self.factor()?;
                if rhs.is_const_zero() {
                    return Err(syntax(at, "division by literal zero"));
                }
                acc = &acc / &rhs;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(-self.factor()?);
        }
        let base = self.base()?;
        if self.eat('^') {
            let negative = self.eat('-');
            let at = self.offset();
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let k: i32 = n
                        .try_into()
                        .map_err(|_| syntax(at, "exponent out of range"))?;
                    if k == 0 {
                        return Err(syntax(at, "zero exponent"));
                    }
                    Ok(Expr::pow(&base, if negative { -k } else { k }))
                }
                _ => Err(syntax(at, "expected integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::num(BigRational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let f = Func::from_name(&name).ok_or(Error::UnknownFunction(name))?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    Ok(Expr::call(f, &arg))
                } else if let Some(i) = self.chart.index_of(&name) {
                    Ok(Expr::coord(i))
                } else if name == "pi" {
                    Ok(Expr::pi())
                } else {
                    Err(Error::UnknownIdentifier(name))
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Sym(c)) => Err(syntax(at, format!("unexpected `{c}`"))),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }
}

/// Parses `text` over `chart`.
pub fn parse(text: &str, chart: &Chart) -> Result<Expr> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        len: text.len(),
        chart,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(syntax(p.offset(), "trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> Chart {
        Chart::uniform(vec!["x", "y", "z"], -1.0, 1.0).unwrap()
    }

    #[test]
    fn parses_difference_with_rational_coefficient() {
        let c = chart();
        let e = parse("x - (1/2)*y", &c).unwrap();
        let expected = Expr::add([
            c.coord("x"),
            Expr::mul([Expr::rational(-1, 2), c.coord("y")]),
        ]);
        assert_eq!(e, expected);
    }

    #[test]
    fn does_not_auto_simplify_pythagoras() {
        let c = chart();
        let e = parse("sin(z)^2 + cos(z)^2", &c).unwrap();
        let z = c.coord("z");
        assert_eq!(
            e,
            Expr::pow(&Expr::sin(&z), 2) + Expr::pow(&Expr::cos(&z), 2)
        );
    }

    #[test]
    fn syntax_error_offset() {
        match parse("x + * y", &chart()) {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_names() {
        assert!(matches!(parse("w + 1", &chart()), Err(Error::UnknownIdentifier(n)) if n == "w"));
        assert!(matches!(parse("tan(x)", &chart()), Err(Error::UnknownFunction(n)) if n == "tan"));
    }

    #[test]
    fn precedence() {
        let c = chart();
        let x = c.coord("x");
        assert_eq!(parse("-x^2", &c).unwrap(), -Expr::pow(&x, 2));
        assert_eq!(
            parse("2*x^-1", &c).unwrap(),
            Expr::mul([Expr::int(2), Expr::pow(&x, -1)])
        );
        let e = parse("x - y - z", &c).unwrap();
        assert_eq!(e.eval(&[1.0, 2.0, 3.0]).unwrap(), -4.0);
        let q = parse("x / y / z", &c).unwrap();
        assert_eq!(q.eval(&[12.0, 2.0, 3.0]).unwrap(), 2.0);
    }

    #[test]
    fn literal_zero_division_rejected() {
        assert!(matches!(
            parse("x/0", &chart()),
            Err(Error::Syntax { offset: 1, .. })
        ));
    }
}
