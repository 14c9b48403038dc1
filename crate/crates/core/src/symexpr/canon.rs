//! Canonical rational-function form.
//!
//! An expression is normalised to `num / Π fᵢ^eᵢ` where `num` is a Laurent
//! polynomial with rational coefficients over *atoms* (coordinates, `pi`, and
//! elementary-function applications whose arguments are themselves canonical)
//! and each `fᵢ` is a polynomial with no monomial content and leading
//! coefficient one in lexicographic order.  Denominator factors are kept
//! factored; numerator terms are cancelled against them by exact multivariate
//! division.  For polynomial inputs the form is unique; for rational inputs it
//! is unique whenever the denominator factors that arise are pairwise coprime.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::expr::{pow_rational, Expr, Func, Node};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Atom {
    Coord(usize),
    Pi,
    Call(Func, Expr),
}

impl Atom {
    fn to_expr(&self) -> Expr {
        match self {
            Atom::Coord(i) => Expr::coord(*i),
            Atom::Pi => Expr::pi(),
            Atom::Call(f, a) => Expr::call(*f, a),
        }
    }

    fn is_const_sqrt(&self) -> bool {
        matches!(self, Atom::Call(Func::Sqrt, a) if a.as_num().is_some())
    }

    fn sqrt_arg(&self) -> Option<&Expr> {
        match self {
            Atom::Call(Func::Sqrt, a) => Some(a),
            _ => None,
        }
    }
}

pub(crate) type Mono = Vec<(Atom, i32)>;

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                let e = a[i].1 + b[j].1;
                if e != 0 {
                    out.push((a[i].0.clone(), e));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn mono_inv(a: &Mono) -> Mono {
    a.iter().map(|(x, e)| (x.clone(), -e)).collect()
}

/// `a / b` when every resulting exponent is non-negative.
fn mono_div_nonneg(a: &Mono, b: &Mono) -> Option<Mono> {
    let q = mono_mul(a, &mono_inv(b));
    q.iter().all(|(_, e)| *e > 0).then_some(q)
}

/// Lexicographic monomial order, atoms ordered by `Ord`.
fn lex_cmp(a: &Mono, b: &Mono) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some((_, ea)), None) => return 0.cmp(ea).reverse(),
            (None, Some((_, eb))) => return 0.cmp(eb),
            (Some((xa, ea)), Some((xb, eb))) => match xa.cmp(xb) {
                Ordering::Less => return 0.cmp(ea).reverse(),
                Ordering::Greater => return 0.cmp(eb),
                Ordering::Equal => {
                    if ea != eb {
                        return ea.cmp(eb);
                    }
                    i += 1;
                    j += 1;
                }
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub(crate) struct Poly(BTreeMap<Mono, BigRational>);

impl Poly {
    fn zero() -> Poly {
        Poly(BTreeMap::new())
    }

    fn constant(r: BigRational) -> Poly {
        Poly::monomial(Vec::new(), r)
    }

    fn monomial(m: Mono, c: BigRational) -> Poly {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn as_constant(&self) -> Option<BigRational> {
        match self.0.len() {
            0 => Some(BigRational::zero()),
            1 => self.0.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.0.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), -c);
        }
        out
    }

    fn scale(&self, r: &BigRational) -> Poly {
        if r.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(m, c)| (m.clone(), c * r)).collect())
    }

    fn mul_mono(&self, m: &Mono) -> Poly {
        Poly(
            self.0
                .iter()
                .map(|(k, c)| (mono_mul(k, m), c.clone()))
                .collect(),
        )
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &other.0 {
                out.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }

    fn pow(&self, k: u32) -> Poly {
        let mut result = Poly::constant(BigRational::one());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    fn leading(&self) -> (&Mono, &BigRational) {
        self.0
            .iter()
            .max_by(|a, b| lex_cmp(a.0, b.0))
            .expect("leading term of zero polynomial")
    }

    /// Per-atom minimum exponent (absent atoms count as zero).
    fn content_mono(&self) -> Mono {
        let mut mins: BTreeMap<Atom, i32> = BTreeMap::new();
        let mut first = true;
        for m in self.0.keys() {
            if first {
                for (a, e) in m {
                    mins.insert(a.clone(), *e);
                }
                first = false;
                continue;
            }
            for (a, e) in mins.iter_mut() {
                let here = m.iter().find(|(b, _)| b == a).map_or(0, |(_, f)| *f);
                *e = (*e).min(here);
            }
            for (a, e) in m {
                if !mins.contains_key(a) && *e < 0 {
                    mins.insert(a.clone(), *e);
                }
            }
        }
        // atoms missing from some term can only contribute negative minima
        let mut out = Vec::new();
        for (a, e) in mins {
            let everywhere = self.0.keys().all(|m| m.iter().any(|(b, _)| *b == a));
            let e = if everywhere { e } else { e.min(0) };
            if e != 0 {
                out.push((a, e));
            }
        }
        out
    }

    /// Exact division for polynomials with non-negative exponents.
    fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (lm_d, lc_d) = d.leading();
        let (lm_d, lc_d) = (lm_d.clone(), lc_d.clone());
        let mut r = self.clone();
        let mut q = Poly::zero();
        let mut guard = 0usize;
        while !r.is_zero() {
            guard += 1;
            if guard > 100_000 {
                return None;
            }
            let (lm_r, lc_r) = r.leading();
            let m = mono_div_nonneg(lm_r, &lm_d).or_else(|| (lm_r == &lm_d).then(Vec::new))?;
            let c = lc_r / &lc_d;
            let step = d.mul_mono(&m).scale(&c);
            q.add_term(m, c);
            r = r.sub(&step);
        }
        Some(q)
    }

    /// Exact division where `self` may carry negative exponents.
    fn exact_div_laurent(&self, d: &Poly) -> Option<Poly> {
        let shift: Mono = self
            .content_mono()
            .into_iter()
            .filter(|(_, e)| *e < 0)
            .map(|(a, e)| (a, -e))
            .collect();
        let q = self.mul_mono(&shift).exact_div(d)?;
        Some(q.mul_mono(&mono_inv(&shift)))
    }

    /// Splits `self = c · m · g` with `g` content-free and monic.
    fn normalize(&self) -> (BigRational, Mono, Poly) {
        let m = self.content_mono();
        let g0 = self.mul_mono(&mono_inv(&m));
        let c = g0.leading().1.clone();
        let g = g0.scale(&c.recip());
        (c, m, g)
    }

    fn to_expr(&self) -> Expr {
        let terms = self.0.iter().map(|(m, c)| {
            let mut factors = vec![Expr::num(c.clone())];
            for (a, e) in m {
                factors.push(Expr::pow(&a.to_expr(), *e));
            }
            Expr::mul(factors)
        });
        Expr::add(terms)
    }

    fn leading_negative(&self) -> bool {
        !self.is_zero() && self.leading().1.is_negative()
    }
}

/// `num / Π den_i^e_i` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RatFn {
    num: Poly,
    den: Vec<(Poly, u32)>,
}

impl RatFn {
    fn from_poly(p: Poly) -> RatFn {
        RatFn {
            num: p,
            den: Vec::new(),
        }
    }

    fn constant(r: BigRational) -> RatFn {
        RatFn::from_poly(Poly::constant(r))
    }

    fn atom(a: Atom) -> RatFn {
        RatFn::from_poly(Poly::monomial(vec![(a, 1)], BigRational::one()))
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    fn is_negative(&self) -> bool {
        self.num.leading_negative()
    }

    fn neg(&self) -> RatFn {
        RatFn {
            num: self.num.scale(&-BigRational::one()),
            den: self.den.clone(),
        }
    }

    /// Adds a denominator factor `f^e`, splitting against existing factors.
    fn push_den(&mut self, f: Poly, e: u32) {
        if e == 0 {
            return;
        }
        let (c, m, mut g) = f.normalize();
        let ei = e as i32;
        self.num = self
            .num
            .scale(&pow_rational(&c, -ei))
            .mul_mono(&m.iter().map(|(a, k)| (a.clone(), -k * ei)).collect());
        if g.as_constant().is_some() {
            return;
        }
        let mut k = 0;
        while k < self.den.len() {
            if g.as_constant().is_some() {
                return;
            }
            if self.den[k].0 == g {
                self.den[k].1 += e;
                return;
            }
            if let Some(q) = g.exact_div(&self.den[k].0) {
                self.den[k].1 += e;
                let (c2, m2, g2) = q.normalize();
                self.num = self
                    .num
                    .scale(&pow_rational(&c2, -ei))
                    .mul_mono(&m2.iter().map(|(a, j)| (a.clone(), -j * ei)).collect());
                g = g2;
                continue;
            }
            if let Some(q) = self.den[k].0.exact_div(&g) {
                if q.as_constant().is_none() {
                    let (_, eh) = self.den.remove(k);
                    self.push_den(g.clone(), eh);
                    self.push_den(q, eh);
                    self.push_den(g, e);
                    return;
                }
            }
            k += 1;
        }
        if g.as_constant().is_none() {
            self.den.push((g, e));
            self.den.sort();
        }
    }

    fn cancel(mut self) -> RatFn {
        for (f, e) in self.den.iter_mut() {
            while *e > 0 {
                match self.num.exact_div_laurent(f) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, e)| *e > 0);
        if self.num.is_zero() {
            self.den.clear();
        }
        self
    }

    fn den_product(factors: &[(Poly, u32)]) -> Poly {
        factors
            .iter()
            .fold(Poly::constant(BigRational::one()), |acc, (f, e)| {
                acc.mul(&f.pow(*e))
            })
    }

    fn add(&self, other: &RatFn) -> RatFn {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        if self.den == other.den {
            return RatFn {
                num: self.num.add(&other.num),
                den: self.den.clone(),
            }
            .cancel();
        }
        let mut common: Vec<(Poly, u32)> = self.den.clone();
        for (f, e) in &other.den {
            match common.iter_mut().find(|(g, _)| g == f) {
                Some((_, eg)) => *eg = (*eg).max(*e),
                None => common.push((f.clone(), *e)),
            }
        }
        let missing = |own: &[(Poly, u32)]| -> Vec<(Poly, u32)> {
            common
                .iter()
                .map(|(f, e)| {
                    let have = own.iter().find(|(g, _)| g == f).map_or(0, |(_, k)| *k);
                    (f.clone(), e - have)
                })
                .collect()
        };
        let a = self.num.mul(&RatFn::den_product(&missing(&self.den)));
        let b = other.num.mul(&RatFn::den_product(&missing(&other.den)));
        common.sort();
        RatFn {
            num: a.add(&b),
            den: common,
        }
        .cancel()
    }

    fn mul(&self, other: &RatFn) -> RatFn {
        if self.is_zero() || other.is_zero() {
            return RatFn::constant(BigRational::zero());
        }
        let mut out = RatFn {
            num: self.num.mul(&other.num),
            den: self.den.clone(),
        };
        for (f, e) in &other.den {
            out.push_den(f.clone(), *e);
        }
        out.cancel().reduce_radicals()
    }

    fn inv(&self) -> Option<RatFn> {
        if self.is_zero() {
            return None;
        }
        let (c, m, g) = self.num.normalize();
        let mut out = RatFn::from_poly(
            RatFn::den_product(&self.den)
                .scale(&c.recip())
                .mul_mono(&mono_inv(&m)),
        );
        out.push_den(g, 1);
        Some(out.cancel().reduce_radicals())
    }

    fn powi(&self, k: i32) -> Option<RatFn> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut result = RatFn::constant(BigRational::one());
        for _ in 0..k.unsigned_abs() {
            result = result.mul(&base);
        }
        Some(result)
    }

    /// Rewrites `sqrt(u)^k` so only exponents 1 (and -1 for non-constant `u`) remain.
    fn reduce_radicals(self) -> RatFn {
        let needs = |m: &Mono| {
            m.iter().any(|(a, e)| match a.sqrt_arg() {
                Some(_) if a.is_const_sqrt() => *e != 1,
                Some(_) => *e >= 2 || *e <= -2,
                None => false,
            })
        };
        if !self.num.0.keys().any(needs) {
            return self;
        }
        let mut total = RatFn::constant(BigRational::zero());
        for (m, c) in &self.num.0 {
            let mut rest = Vec::new();
            let mut extra = RatFn::constant(c.clone());
            for (a, e) in m {
                let Some(arg) = a.sqrt_arg() else {
                    rest.push((a.clone(), *e));
                    continue;
                };
                let keep_neg = !a.is_const_sqrt();
                if *e == 1 || (keep_neg && *e == -1) {
                    rest.push((a.clone(), *e));
                    continue;
                }
                let (q, r) = (e.div_euclid(2), e.rem_euclid(2));
                if r == 1 {
                    rest.push((a.clone(), 1));
                }
                let u = to_ratfn(arg).and_then(|u| u.powi(q));
                match u {
                    Some(u) => extra = extra.mul(&u),
                    None => rest.push((a.clone(), e - r)),
                }
            }
            rest.sort_by(|x, y| x.0.cmp(&y.0));
            let term = RatFn::from_poly(Poly::monomial(rest, BigRational::one())).mul(&extra);
            total = total.add(&term);
        }
        let mut out = RatFn {
            num: total.num,
            den: self.den.clone(),
        };
        for (f, e) in total.den {
            out.push_den(f, e);
        }
        out.cancel()
    }

    pub(crate) fn to_expr(&self) -> Expr {
        let num = self.num.to_expr();
        if self.den.is_empty() {
            return num;
        }
        let den = Expr::mul(
            self.den
                .iter()
                .map(|(f, e)| Expr::pow(&f.to_expr(), *e as i32)),
        );
        Expr::div(&num, &den)
    }

    fn is_pi_multiple(&self) -> Option<BigRational> {
        if !self.den.is_empty() {
            return None;
        }
        if self.num.is_zero() {
            return Some(BigRational::zero());
        }
        if self.num.0.len() != 1 {
            return None;
        }
        let (m, c) = self.num.0.iter().next().unwrap();
        (m.len() == 1 && m[0] == (Atom::Pi, 1)).then(|| c.clone())
    }
}

/// Largest `a` with `a^2 | n`, returning `(a, n / a^2)`.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let root = n.sqrt();
    if &root * &root == *n {
        return (root, BigInt::one());
    }
    let mut rest = n.clone();
    let mut outside = BigInt::one();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(100_000);
    while &p * &p <= rest && p < limit {
        let sq = &p * &p;
        while (&rest % &sq).is_zero() {
            rest /= &sq;
            outside *= &p;
        }
        p += 1;
    }
    (outside, rest)
}

fn exact_trig(f: Func, quarter_turns: &BigInt) -> Option<BigRational> {
    let k = quarter_turns.mod_floor(&BigInt::from(4));
    let k: i64 = k.try_into().ok()?;
    let v = match (f, k) {
        (Func::Sin, 0) | (Func::Sin, 2) | (Func::Cos, 1) | (Func::Cos, 3) => 0,
        (Func::Sin, 1) | (Func::Cos, 0) => 1,
        (Func::Sin, 3) | (Func::Cos, 2) => -1,
        _ => return None,
    };
    Some(BigRational::from_integer(BigInt::from(v)))
}

fn make_call(f: Func, arg: RatFn) -> Option<RatFn> {
    let one = BigRational::one;
    if let Some(c) = arg.as_constant() {
        if c.is_zero() {
            return Some(match f {
                Func::Sin | Func::Sinh | Func::Sqrt => RatFn::constant(BigRational::zero()),
                Func::Cos | Func::Cosh | Func::Exp => RatFn::constant(one()),
                Func::Ln => return None,
            });
        }
        if f == Func::Ln && c.is_one() {
            return Some(RatFn::constant(BigRational::zero()));
        }
        if f == Func::Sqrt && c.is_positive() {
            let prod = c.numer() * c.denom();
            let (outside, inside) = split_square(&prod);
            let coeff = BigRational::new(outside, c.denom().clone());
            if inside.is_one() {
                return Some(RatFn::constant(coeff));
            }
            let atom = Atom::Call(Func::Sqrt, Expr::num(BigRational::from_integer(inside)));
            return Some(RatFn::atom(atom).mul(&RatFn::constant(coeff)));
        }
    }
    if matches!(f, Func::Sin | Func::Cos) {
        if let Some(q) = arg.is_pi_multiple() {
            let twice = q * BigRational::from_integer(BigInt::from(2));
            if twice.is_integer() {
                if let Some(v) = exact_trig(f, twice.numer()) {
                    return Some(RatFn::constant(v));
                }
            }
        }
    }
    if arg.is_negative() {
        match f {
            Func::Sin | Func::Sinh => return Some(make_call(f, arg.neg())?.neg()),
            Func::Cos | Func::Cosh => return make_call(f, arg.neg()),
            _ => {}
        }
    }
    if f == Func::Exp && arg.den.is_empty() {
        // exp(Σ (p/q)·m) = Π exp(m/q)^p
        let mut out = RatFn::constant(one());
        for (m, c) in &arg.num.0 {
            let unit = BigRational::new(BigInt::one(), c.denom().clone());
            let exponent: i32 = c.numer().try_into().ok()?;
            let inner = Poly::monomial(m.clone(), unit).to_expr();
            let atom = RatFn::from_poly(Poly::monomial(
                vec![(Atom::Call(Func::Exp, inner), exponent)],
                one(),
            ));
            out = out.mul(&atom);
        }
        return Some(out);
    }
    Some(RatFn::atom(Atom::Call(f, arg.to_expr())))
}

/// Multiplicative inverse, keeping product/power structure in denominators.
fn inv_structured(e: &Expr) -> Option<RatFn> {
    match e.node() {
        Node::Mul(items) => {
            let mut acc = RatFn::constant(BigRational::one());
            for item in items {
                acc = acc.mul(&inv_structured(item)?);
            }
            Some(acc)
        }
        Node::Pow(a, k) if *k > 0 => inv_structured(a)?.powi(*k),
        _ => to_ratfn(e)?.inv(),
    }
}

pub(crate) fn to_ratfn(e: &Expr) -> Option<RatFn> {
    Some(match e.node() {
        Node::Num(r) => RatFn::constant(r.clone()),
        Node::Coord(i) => RatFn::atom(Atom::Coord(*i)),
        Node::Pi => RatFn::atom(Atom::Pi),
        Node::Neg(a) => to_ratfn(a)?.neg(),
        Node::Add(items) => {
            let mut acc = RatFn::constant(BigRational::zero());
            for t in items {
                acc = acc.add(&to_ratfn(t)?);
            }
            acc
        }
        Node::Mul(items) => {
            let mut acc = RatFn::constant(BigRational::one());
            for t in items {
                acc = acc.mul(&to_ratfn(t)?);
                if acc.is_zero() {
                    break;
                }
            }
            acc
        }
        Node::Div(a, b) => to_ratfn(a)?.mul(&inv_structured(b)?),
        Node::Pow(a, k) => {
            if *k > 0 {
                to_ratfn(a)?.powi(*k)?
            } else {
                inv_structured(a)?.powi(-*k)?
            }
        }
        Node::Call(f, a) => make_call(*f, to_ratfn(a)?)?,
    })
}

impl Expr {
    /// Canonical simplification.  Falls back to the input when a
    /// denominator simplifies to zero.
    pub fn simplify(&self) -> Expr {
        match to_ratfn(self) {
            Some(r) => r.to_expr(),
            None => self.clone(),
        }
    }

    /// True when the canonical form is the zero polynomial.
    pub fn is_symbolic_zero(&self) -> bool {
        to_ratfn(self).is_some_and(|r| r.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{parse, Chart};

    fn chart() -> Chart {
        Chart::uniform(vec!["x", "y", "z"], -1.0, 1.0).unwrap()
    }

    fn s(text: &str) -> Expr {
        parse(text, &chart()).unwrap().simplify()
    }

    #[test]
    fn binomial_cancels() {
        assert_eq!(s("(x+y)^2 - x^2 - 2*x*y - y^2"), Expr::zero());
        assert_eq!(s("(y/2) - (y/2)"), Expr::zero());
    }

    #[test]
    fn equal_rationals_share_canonical_form() {
        assert_eq!(s("(x^2 - 1)/(x - 1)"), s("x + 1"));
        assert_eq!(s("x/(x^2-1) + 1/(x+1)"), s("(2*x - 1)/(x^2 - 1)"));
        assert_eq!(s("1/(x*y) * y"), s("x^-1"));
        assert_eq!(s("(1+x^2+y^2)^2/(2*(1+x^2+y^2))"), s("(1+x^2+y^2)/2"));
        assert_eq!(s("1/(2*x+2) - 1/(2+2*x)"), Expr::zero());
    }

    #[test]
    fn radicals_and_exponentials() {
        assert_eq!(s("sqrt(2)*sqrt(2)"), Expr::int(2));
        assert_eq!(s("sqrt(8)"), s("2*sqrt(2)"));
        assert_eq!(s("sqrt(1/2)"), s("sqrt(2)/2"));
        assert_eq!(s("1/sqrt(2)"), s("sqrt(2)/2"));
        assert_eq!(s("sqrt(x)^2"), s("x"));
        assert_eq!(s("exp(z)*exp(-z)"), Expr::one());
        assert_eq!(s("exp(2*z)"), s("exp(z)^2"));
        assert_eq!(s("exp(z/2)*exp(-z/2)"), Expr::one());
        assert_eq!(s("exp(0)"), Expr::one());
    }

    #[test]
    fn parity_and_exact_trig() {
        assert_eq!(s("sin(-x) + sin(x)"), Expr::zero());
        assert_eq!(s("cos(-x) - cos(x)"), Expr::zero());
        assert_eq!(s("cos(pi/2)"), Expr::zero());
        assert_eq!(s("sin(pi/2)"), Expr::one());
        assert_eq!(s("cos(3*pi)"), Expr::int(-1));
        assert_eq!(s("sinh(0) + cosh(0)"), Expr::one());
    }

    #[test]
    fn pythagoras_is_not_required_canonical() {
        let e = s("sin(z)^2 + cos(z)^2");
        assert!(e == Expr::one() || e.eval(&[0.0, 0.0, 0.3]).unwrap() - 1.0 < 1e-12);
    }

    #[test]
    fn idempotent_on_samples() {
        for t in [
            "(x+1)/(x^2-y) + y/(x^2-y)^2",
            "exp(z)*(x - y/2) / (1 + x^2)",
            "sqrt(x^2+1)^3 - x",
            "sin(x)^2/(cos(y)+2)",
        ] {
            let a = s(t);
            assert_eq!(a.simplify(), a, "{t}");
        }
    }

    #[test]
    fn zero_denominator_falls_back() {
        let e = parse("1/(x - x)", &chart()).unwrap();
        assert_eq!(e.simplify(), e);
    }
}
