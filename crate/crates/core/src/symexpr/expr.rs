//! Expression trees over a coordinate chart.
//!
//! Coordinates are stored by index into the owning [`Chart`](super::Chart);
//! printing therefore needs the chart's names.  All constructors in this file
//! perform only light rewriting (constant folding, flattening, 0/1 absorption).
//! Canonical forms come from [`Expr::simplify`].

use std::fmt;
use std::ops;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::chart::Chart;

/// Elementary functions understood by the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
        Func::Exp,
        Func::Ln,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Immutable, cheaply clonable expression.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr(Arc<Node>);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Num(BigRational),
    Coord(usize),
    /// The circle constant; only used for exact trigonometric parameters.
    Pi,
    Neg(Expr),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Div(Expr, Expr),
    /// Integer power, exponent never zero.
    Pow(Expr, i32),
    Call(Func, Expr),
}

/// Evaluation failure, carrying the offending subexpression.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub subexpr: Expr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalErrorKind {
    DivisionByZero,
    LogOfNonPositive,
    SqrtOfNegative,
    NonFinite,
    PointDimension,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            EvalErrorKind::DivisionByZero => "division by zero",
            EvalErrorKind::LogOfNonPositive => "logarithm of a non-positive value",
            EvalErrorKind::SqrtOfNegative => "square root of a negative value",
            EvalErrorKind::NonFinite => "non-finite value",
            EvalErrorKind::PointDimension => "point has wrong dimension",
        };
        write!(f, "{what} in {:?}", self.subexpr)
    }
}

impl std::error::Error for EvalError {}

/// Below this magnitude a denominator is treated as zero during evaluation.
const DIV_EPS: f64 = 1e-300;

pub(crate) fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Expr {
    fn wrap(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn num(r: BigRational) -> Expr {
        Expr::wrap(Node::Num(r))
    }

    pub fn int(n: i64) -> Expr {
        Expr::num(big(n))
    }

    pub fn rational(n: i64, d: i64) -> Expr {
        assert!(d != 0, "zero denominator in rational constant");
        Expr::num(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn coord(index: usize) -> Expr {
        Expr::wrap(Node::Coord(index))
    }

    pub fn pi() -> Expr {
        Expr::wrap(Node::Pi)
    }

    pub fn as_num(&self) -> Option<&BigRational> {
        match self.node() {
            Node::Num(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_const_zero(&self) -> bool {
        self.as_num().is_some_and(|r| r.is_zero())
    }

    pub fn is_const_one(&self) -> bool {
        self.as_num().is_some_and(|r| r.is_one())
    }

    pub fn neg(e: &Expr) -> Expr {
        match e.node() {
            Node::Num(r) => Expr::num(-r),
            Node::Neg(inner) => inner.clone(),
            Node::Mul(items) => {
                if let Some(r) = items[0].as_num() {
                    let mut rest = items.clone();
                    rest[0] = Expr::num(-r);
                    Expr::mul(rest)
                } else {
                    Expr::wrap(Node::Neg(e.clone()))
                }
            }
            _ => Expr::wrap(Node::Neg(e.clone())),
        }
    }

    pub fn add(items: impl IntoIterator<Item = Expr>) -> Expr {
        let mut constant = BigRational::zero();
        let mut out = Vec::new();
        for item in items {
            match item.node() {
                Node::Num(r) => constant += r,
                Node::Add(inner) => {
                    for sub in inner {
                        match sub.node() {
                            Node::Num(r) => constant += r,
                            _ => out.push(sub.clone()),
                        }
                    }
                }
                _ => out.push(item),
            }
        }
        if !constant.is_zero() {
            out.push(Expr::num(constant));
        }
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => Expr::wrap(Node::Add(out)),
        }
    }

    pub fn mul(items: impl IntoIterator<Item = Expr>) -> Expr {
        let mut constant = BigRational::one();
        let mut out = Vec::new();
        for item in items {
            match item.node() {
                Node::Num(r) => constant *= r,
                Node::Mul(inner) => {
                    for sub in inner {
                        match sub.node() {
                            Node::Num(r) => constant *= r,
                            _ => out.push(sub.clone()),
                        }
                    }
                }
                _ => out.push(item),
            }
        }
        if constant.is_zero() {
            return Expr::zero();
        }
        if out.is_empty() {
            return Expr::num(constant);
        }
        if !constant.is_one() {
            out.insert(0, Expr::num(constant));
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Expr::wrap(Node::Mul(out))
        }
    }

    pub fn div(a: &Expr, b: &Expr) -> Expr {
        if let Some(rb) = b.as_num() {
            if rb.is_one() {
                return a.clone();
            }
            if !rb.is_zero() {
                return Expr::mul([Expr::num(rb.recip()), a.clone()]);
            }
        }
        if a.is_const_zero() {
            return Expr::zero();
        }
        Expr::wrap(Node::Div(a.clone(), b.clone()))
    }

    pub fn pow(a: &Expr, k: i32) -> Expr {
        if k == 0 {
            return Expr::one();
        }
        if k == 1 {
            return a.clone();
        }
        if let Some(r) = a.as_num() {
            if !(r.is_zero() && k < 0) {
                return Expr::num(pow_rational(r, k));
            }
        }
        if let Node::Pow(base, j) = a.node() {
            if let Some(jk) = j.checked_mul(k) {
                return Expr::pow(base, jk);
            }
        }
        Expr::wrap(Node::Pow(a.clone(), k))
    }

    pub fn call(f: Func, a: &Expr) -> Expr {
        Expr::wrap(Node::Call(f, a.clone()))
    }

    pub fn sin(a: &Expr) -> Expr {
        Expr::call(Func::Sin, a)
    }
    pub fn cos(a: &Expr) -> Expr {
        Expr::call(Func::Cos, a)
    }
    pub fn sinh(a: &Expr) -> Expr {
        Expr::call(Func::Sinh, a)
    }
    pub fn cosh(a: &Expr) -> Expr {
        Expr::call(Func::Cosh, a)
    }
    pub fn exp(a: &Expr) -> Expr {
        Expr::call(Func::Exp, a)
    }
    pub fn ln(a: &Expr) -> Expr {
        Expr::call(Func::Ln, a)
    }
    pub fn sqrt(a: &Expr) -> Expr {
        Expr::call(Func::Sqrt, a)
    }

    /// Partial derivative with respect to coordinate `index`.
    pub fn diff(&self, index: usize) -> Expr {
        match self.node() {
            Node::Num(_) | Node::Pi => Expr::zero(),
            Node::Coord(i) => {
                if *i == index {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Neg(a) => Expr::neg(&a.diff(index)),
            Node::Add(items) => Expr::add(items.iter().map(|t| t.diff(index))),
            Node::Mul(items) => {
                let mut terms = Vec::new();
                for (k, item) in items.iter().enumerate() {
                    let d = item.diff(index);
                    if d.is_const_zero() {
                        continue;
                    }
                    let mut factors: Vec<Expr> = items
                        .iter()
                        .enumerate()
                        .filter(|(l, _)| *l != k)
                        .map(|(_, f)| f.clone())
                        .collect();
                    factors.push(d);
                    terms.push(Expr::mul(factors));
                }
                Expr::add(terms)
            }
            Node::Div(a, b) => {
                let da = a.diff(index);
                let db = b.diff(index);
                if db.is_const_zero() {
                    return Expr::div(&da, b);
                }
                let numer = &(&da * b) - &(a * &db);
                Expr::div(&numer, &Expr::pow(b, 2))
            }
            Node::Pow(a, k) => {
                let da = a.diff(index);
                if da.is_const_zero() {
                    return Expr::zero();
                }
                Expr::mul([Expr::int(*k as i64), Expr::pow(a, k - 1), da])
            }
            Node::Call(f, a) => {
                let da = a.diff(index);
                if da.is_const_zero() {
                    return Expr::zero();
                }
                let outer = match f {
                    Func::Sin => Expr::cos(a),
                    Func::Cos => Expr::neg(&Expr::sin(a)),
                    Func::Sinh => Expr::cosh(a),
                    Func::Cosh => Expr::sinh(a),
                    Func::Exp => self.clone(),
                    Func::Ln => Expr::div(&Expr::one(), a),
                    Func::Sqrt => Expr::div(&Expr::one(), &Expr::mul([Expr::int(2), self.clone()])),
                };
                Expr::mul([outer, da])
            }
        }
    }

    /// Replaces every coordinate `i` by `values[i]`.
    pub fn substitute(&self, values: &[Expr]) -> Expr {
        match self.node() {
            Node::Num(_) | Node::Pi => self.clone(),
            Node::Coord(i) => values[*i].clone(),
            Node::Neg(a) => Expr::neg(&a.substitute(values)),
            Node::Add(items) => Expr::add(items.iter().map(|t| t.substitute(values))),
            Node::Mul(items) => Expr::mul(items.iter().map(|t| t.substitute(values))),
            Node::Div(a, b) => Expr::div(&a.substitute(values), &b.substitute(values)),
            Node::Pow(a, k) => Expr::pow(&a.substitute(values), *k),
            Node::Call(f, a) => Expr::call(*f, &a.substitute(values)),
        }
    }

    /// Whether coordinate `index` occurs syntactically.
    pub fn mentions(&self, index: usize) -> bool {
        match self.node() {
            Node::Num(_) | Node::Pi => false,
            Node::Coord(i) => *i == index,
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.mentions(index),
            Node::Add(items) | Node::Mul(items) => items.iter().any(|t| t.mentions(index)),
            Node::Div(a, b) => a.mentions(index) || b.mentions(index),
        }
    }

    /// Largest coordinate index used, if any.
    pub fn max_coord(&self) -> Option<usize> {
        match self.node() {
            Node::Num(_) | Node::Pi => None,
            Node::Coord(i) => Some(*i),
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.max_coord(),
            Node::Add(items) | Node::Mul(items) => items.iter().filter_map(|t| t.max_coord()).max(),
            Node::Div(a, b) => a.max_coord().max(b.max_coord()),
        }
    }

    /// IEEE double evaluation at `point`.
    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        let err = |kind| EvalError {
            kind,
            subexpr: self.clone(),
        };
        let value = match self.node() {
            Node::Num(r) => rational_to_f64(r),
            Node::Pi => std::f64::consts::PI,
            Node::Coord(i) => *point
                .get(*i)
                .ok_or_else(|| err(EvalErrorKind::PointDimension))?,
            Node::Neg(a) => -a.eval(point)?,
            Node::Add(items) => {
                let mut s = 0.0;
                for t in items {
                    s += t.eval(point)?;
                }
                s
            }
            Node::Mul(items) => {
                let mut p = 1.0;
                for t in items {
                    p *= t.eval(point)?;
                }
                p
            }
            Node::Div(a, b) => {
                let d = b.eval(point)?;
                if d.abs() < DIV_EPS {
                    return Err(EvalError {
                        kind: EvalErrorKind::DivisionByZero,
                        subexpr: b.clone(),
                    });
                }
                a.eval(point)? / d
            }
            Node::Pow(a, k) => {
                let v = a.eval(point)?;
                if *k < 0 && v.abs() < DIV_EPS {
                    return Err(err(EvalErrorKind::DivisionByZero));
                }
                v.powi(*k)
            }
            Node::Call(f, a) => {
                let v = a.eval(point)?;
                match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Sinh => v.sinh(),
                    Func::Cosh => v.cosh(),
                    Func::Exp => v.exp(),
                    Func::Ln => {
                        if v <= 0.0 {
                            return Err(err(EvalErrorKind::LogOfNonPositive));
                        }
                        v.ln()
                    }
                    Func::Sqrt => {
                        if v < 0.0 {
                            return Err(err(EvalErrorKind::SqrtOfNegative));
                        }
                        v.sqrt()
                    }
                }
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(err(EvalErrorKind::NonFinite))
        }
    }

    /// Text in the parser's grammar using the chart's coordinate names, with
    /// only the parentheses precedence requires.
    pub fn to_text(&self, chart: &Chart) -> String {
        let mut out = String::new();
        self.write_text(&mut out, &|i| chart.name(i).to_string());
        out
    }

    /// Binding strength as printed: sums 1, products and quotients 2,
    /// prefix minus 3, powers 4, atoms 5.
    fn precedence(&self) -> u8 {
        match self.node() {
            Node::Add(_) => 1,
            Node::Mul(_) | Node::Div(..) => 2,
            Node::Num(r) if !r.is_integer() => 2,
            Node::Num(r) if r.is_negative() => 3,
            Node::Neg(_) => 3,
            Node::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write_at(&self, out: &mut String, name: &dyn Fn(usize) -> String, min: u8) {
        if self.precedence() < min {
            out.push('(');
            self.write_text(out, name);
            out.push(')');
        } else {
            self.write_text(out, name);
        }
    }

    /// `Some(t)` when the term prints as `−t`.
    fn negated_term(&self) -> Option<Expr> {
        match self.node() {
            Node::Neg(a) => Some(a.clone()),
            Node::Num(r) if r.is_negative() => Some(Expr::num(-r)),
            Node::Mul(items) => match items.first().map(|f| f.node()) {
                Some(Node::Num(r)) if r.is_negative() => {
                    let c = -r;
                    let rest = items[1..].iter().cloned();
                    Some(if c.is_one() {
                        Expr(Arc::new(Node::Mul(rest.collect())))
                    } else {
                        Expr(Arc::new(Node::Mul(
                            std::iter::once(Expr::num(c)).chain(rest).collect(),
                        )))
                    })
                }
                _ => None,
            },
            _ => None,
        }
    }

    fn write_text(&self, out: &mut String, name: &dyn Fn(usize) -> String) {
        match self.node() {
            Node::Num(r) => {
                if r.is_integer() {
                    out.push_str(&r.numer().to_string());
                } else {
                    out.push_str(&format!("{}/{}", r.numer(), r.denom()));
                }
            }
            Node::Coord(i) => out.push_str(&name(*i)),
            Node::Pi => out.push_str("pi"),
            Node::Neg(a) => {
                out.push('-');
                if matches!(a.node(), Node::Neg(_)) || a.precedence() < 2 {
                    out.push('(');
                    a.write_text(out, name);
                    out.push(')');
                } else if matches!(a.node(), Node::Num(r) if r.is_negative()) {
                    a.write_at(out, name, 4);
                } else {
                    a.write_text(out, name);
                }
            }
            Node::Add(items) => {
                for (k, t) in items.iter().enumerate() {
                    if k == 0 {
                        t.write_at(out, name, 1);
                    } else if let Some(pos) = t.negated_term() {
                        out.push_str(" - ");
                        pos.write_at(out, name, 2);
                    } else {
                        out.push_str(" + ");
                        t.write_at(out, name, 2);
                    }
                }
            }
            Node::Mul(items) => {
                let mut rest = &items[..];
                if let Some(Node::Num(r)) = items.first().map(|f| f.node()) {
                    if (-r).is_one() && items.len() > 1 {
                        out.push('-');
                        rest = &items[1..];
                        if rest.len() == 1 && rest[0].precedence() < 4 {
                            rest[0].write_at(out, name, 4);
                            return;
                        }
                    }
                }
                for (k, t) in rest.iter().enumerate() {
                    if k == 0 {
                        t.write_at(out, name, 2);
                    } else {
                        out.push('*');
                        t.write_at(out, name, 4);
                    }
                }
            }
            Node::Div(a, b) => {
                a.write_at(out, name, 2);
                out.push('/');
                b.write_at(out, name, 4);
            }
            Node::Pow(a, k) => {
                a.write_at(out, name, 5);
                out.push_str(&format!("^{k}"));
            }
            Node::Call(f, a) => {
                out.push_str(f.name());
                out.push('(');
                a.write_text(out, name);
                out.push(')');
            }
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.write_text(&mut out, &|i| format!("u{i}"));
        f.write_str(&out)
    }
}

pub(crate) fn pow_rational(r: &BigRational, k: i32) -> BigRational {
    let base = if k < 0 { r.recip() } else { r.clone() };
    num_traits::pow(base, k.unsigned_abs() as usize)
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // huge numerators/denominators: scale down by the common bit length
            let shift = r.denom().bits().max(r.numer().bits()).saturating_sub(60);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let f: fn(&Expr, &Expr) -> Expr = $body;
                f(self, rhs)
            }
        }
        impl ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                ops::$tr::$method(&self, &rhs)
            }
        }
        impl ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                ops::$tr::$method(&self, rhs)
            }
        }
        impl ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                ops::$tr::$method(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| Expr::add([a.clone(), b.clone()]));
binop!(Sub, sub, |a, b| Expr::add([a.clone(), Expr::neg(b)]));
binop!(Mul, mul, |a, b| Expr::mul([a.clone(), b.clone()]));
binop!(Div, div, |a, b| Expr::div(a, b));

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(&self)
    }
}

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl From<BigRational> for Expr {
    fn from(r: BigRational) -> Expr {
        Expr::num(r)
    }
}
