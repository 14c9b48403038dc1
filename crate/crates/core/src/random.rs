//! Seeded generators of random expressions, fields and forms for
//! property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{KForm, VectorField};
use crate::symexpr::{Expr, Func};

pub struct Generator {
    rng: ChaCha8Rng,
    dim: usize,
}

impl Generator {
    pub fn new(dim: usize, seed: u64) -> Generator {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rational(&mut self) -> Expr {
        let n = self.rng.gen_range(-9i64..=9);
        let d = self.rng.gen_range(1i64..=5);
        Expr::rational(n, d)
    }

    fn nonzero_rational(&mut self) -> Expr {
        loop {
            let r = self.rational();
            if !r.is_const_zero() {
                return r;
            }
        }
    }

    fn monomial(&mut self, degree: usize) -> Expr {
        let mut factors = vec![self.nonzero_rational()];
        for _ in 0..self.rng.gen_range(0..=degree) {
            factors.push(Expr::coord(self.rng.gen_range(0..self.dim)));
        }
        Expr::mul(factors)
    }

    /// Rational-coefficient polynomial with up to `terms` monomials of degree ≤ `degree`.
    pub fn polynomial(&mut self, terms: usize, degree: usize) -> Expr {
        let k = self.rng.gen_range(1..=terms);
        Expr::add((0..k).map(|_| self.monomial(degree)))
    }

    /// A positive expression, safe as a denominator or under `ln`/`sqrt`.
    pub fn positive(&mut self) -> Expr {
        let p = self.polynomial(2, 1);
        match self.rng.gen_range(0..3) {
            0 => Expr::add([Expr::int(1 + self.rng.gen_range(0..3)), Expr::pow(&p, 2)]),
            1 => Expr::exp(&p),
            _ => Expr::add([Expr::rational(1, 2), Expr::pow(&Expr::sin(&p), 2)]),
        }
    }

    /// Random expression tree of the given depth over the full grammar,
    /// defined on all of `R^dim`.
    pub fn expr(&mut self, depth: usize) -> Expr {
        if depth == 0 {
            return match self.rng.gen_range(0..3) {
                0 => self.rational(),
                _ => Expr::coord(self.rng.gen_range(0..self.dim)),
            };
        }
        match self.rng.gen_range(0..10) {
            0 | 1 => Expr::add([self.expr(depth - 1), self.expr(depth - 1)]),
            2 => &self.expr(depth - 1) - &self.expr(depth - 1),
            3 | 4 => Expr::mul([self.expr(depth - 1), self.expr(depth - 1)]),
            5 => Expr::div(&self.expr(depth - 1), &self.positive()),
            6 => match self.rng.gen_range(-2i32..=3) {
                0 => self.expr(depth - 1),
                k if k < 0 => Expr::pow(&self.positive(), k),
                k => Expr::pow(&self.expr(depth - 1), k),
            },
            7 => {
                // growth functions get polynomial arguments to stay finite on the chart
                let f = [Func::Sin, Func::Cos, Func::Exp, Func::Sinh, Func::Cosh]
                    [self.rng.gen_range(0..5)];
                let arg = match f {
                    Func::Sin | Func::Cos => self.expr(depth - 1),
                    _ => self.polynomial(2, 2),
                };
                Expr::call(f, &arg)
            }
            8 => {
                let inner = self.positive();
                if self.rng.gen_bool(0.5) {
                    Expr::ln(&inner)
                } else {
                    Expr::sqrt(&inner)
                }
            }
            _ => -&self.expr(depth - 1),
        }
    }

    pub fn field(&mut self, terms: usize, degree: usize) -> VectorField {
        VectorField::new(
            (0..self.dim)
                .map(|_| self.polynomial(terms, degree))
                .collect(),
        )
    }

    pub fn one_form(&mut self, depth: usize) -> KForm {
        KForm::one_form((0..self.dim).map(|_| self.expr(depth)).collect())
    }

    pub fn sign(&mut self) -> i32 {
        if self.rng.gen_bool(0.5) {
            1
        } else {
            -1
        }
    }

    pub fn gen_range(&mut self, range: std::ops::Range<usize>) -> usize {
        self.rng.gen_range(range)
    }
}
