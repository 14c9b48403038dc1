//! Fraction-free elimination over the expression field.
//!
//! Pivots are the first candidate whose zero verdict is nonzero, so an
//! identically vanishing expression is never used as a divisor.

use crate::error::{Error, Result};
use crate::symexpr::{Context, Expr};

/// Row-major square or rectangular matrix of expressions.
pub type Matrix = Vec<Vec<Expr>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Expr::one() } else { Expr::zero() })
                .collect()
        })
        .collect()
}

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Expr::zero(); cols]; rows]
}

pub fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    a.iter()
        .map(|row| {
            (0..b.first().map_or(0, Vec::len))
                .map(|j| Expr::add((0..inner).map(|k| &row[k] * &b[k][j])).simplify())
                .collect()
        })
        .collect()
}

pub fn matvec(a: &Matrix, v: &[Expr]) -> Vec<Expr> {
    a.iter()
        .map(|row| Expr::add(row.iter().zip(v).map(|(x, y)| x * y)).simplify())
        .collect()
}

pub fn simplify_all(m: &Matrix) -> Matrix {
    m.iter()
        .map(|row| row.iter().map(Expr::simplify).collect())
        .collect()
}

/// Bareiss forward elimination on `[a | rhs]`; returns the eliminated
/// augmented matrix and the sign of the row permutation.
fn bareiss(aug: &mut Matrix, n: usize, ctx: &Context) -> Result<i32> {
    let cols = aug.first().map_or(0, Vec::len);
    let mut sign = 1;
    let mut prev = Expr::one();
    for k in 0..n {
        let mut pivot = None;
        for r in k..n {
            if ctx.is_nonzero(&aug[r][k])? {
                pivot = Some(r);
                break;
            }
        }
        let p = pivot.ok_or_else(|| Error::Singular(format!("no nonzero pivot in column {k}")))?;
        if p != k {
            aug.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..cols {
                let num = &(&aug[k][k] * &aug[i][j]) - &(&aug[i][k] * &aug[k][j]);
                aug[i][j] = Expr::div(&num, &prev).simplify();
            }
            aug[i][k] = Expr::zero();
        }
        prev = aug[k][k].clone();
    }
    Ok(sign)
}

/// Determinant; `Ok(0)` when the matrix is singular on the sample set.
pub fn det(m: &Matrix, ctx: &Context) -> Result<Expr> {
    let n = m.len();
    if n == 0 {
        return Ok(Expr::one());
    }
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension(
            "determinant of a non-square matrix".into(),
        ));
    }
    let mut a = simplify_all(m);
    match bareiss(&mut a, n, ctx) {
        Ok(sign) => Ok((Expr::int(sign as i64) * &a[n - 1][n - 1]).simplify()),
        Err(Error::Singular(_)) => Ok(Expr::zero()),
        Err(e) => Err(e),
    }
}

/// Solves `a · X = b` for a matrix right-hand side.
pub fn solve_many(a: &Matrix, b: &Matrix, ctx: &Context) -> Result<Matrix> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) || b.len() != n {
        return Err(Error::Dimension("linear system shape".into()));
    }
    let m = b.first().map_or(0, Vec::len);
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().chain(rb.iter()).map(Expr::simplify).collect())
        .collect();
    bareiss(&mut aug, n, ctx)?;
    let mut x = zeros(n, m);
    for c in 0..m {
        for i in (0..n).rev() {
            let mut acc = aug[i][n + c].clone();
            for j in i + 1..n {
                acc = &acc - &(&aug[i][j] * &x[j][c]);
            }
            x[i][c] = Expr::div(&acc, &aug[i][i]).simplify();
        }
    }
    Ok(x)
}

pub fn solve(a: &Matrix, b: &[Expr], ctx: &Context) -> Result<Vec<Expr>> {
    let col: Matrix = b.iter().map(|e| vec![e.clone()]).collect();
    Ok(solve_many(a, &col, ctx)?
        .into_iter()
        .map(|mut r| r.remove(0))
        .collect())
}

pub fn inverse(a: &Matrix, ctx: &Context) -> Result<Matrix> {
    solve_many(a, &identity(a.len()), ctx)
}

/// Pfaffian of a skew-symmetric matrix of even size, by expansion along the first row.
pub fn pfaffian(m: &Matrix) -> Expr {
    let n = m.len();
    if n == 0 {
        return Expr::one();
    }
    if n % 2 == 1 {
        return Expr::zero();
    }
    let mut terms = Vec::new();
    for j in 1..n {
        if m[0][j].is_const_zero() {
            continue;
        }
        let keep: Vec<usize> = (1..n).filter(|&k| k != j).collect();
        let minor: Matrix = keep
            .iter()
            .map(|&a| keep.iter().map(|&b| m[a][b].clone()).collect())
            .collect();
        let sign = if j % 2 == 1 {
            Expr::one()
        } else {
            Expr::int(-1)
        };
        terms.push(Expr::mul([sign, m[0][j].clone(), pfaffian(&minor)]));
    }
    Expr::add(terms).simplify()
}

/// Numeric evaluation of a matrix at a point.
pub fn eval_matrix(m: &Matrix, p: &[f64]) -> Result<Vec<Vec<f64>>> {
    m.iter()
        .map(|row| row.iter().map(|e| e.eval(p).map_err(Error::from)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{parse, Chart, SamplingPlan};

    fn ctx() -> Context {
        Context::new(
            Chart::uniform(vec!["x", "y", "z"], 0.5, 2.0).unwrap(),
            SamplingPlan::default(),
        )
    }

    fn m(c: &Context, rows: &[&[&str]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|t| parse(t, c.chart()).unwrap()).collect())
            .collect()
    }

    #[test]
    fn determinant_with_zero_leading_entry() {
        let c = ctx();
        let a = m(&c, &[&["0", "x"], &["y", "1"]]);
        assert_eq!(
            det(&a, &c).unwrap(),
            parse("-x*y", c.chart()).unwrap().simplify()
        );
    }

    #[test]
    fn inverse_round_trip() {
        let c = ctx();
        let a = m(
            &c,
            &[&["x", "1", "0"], &["0", "y", "z"], &["1", "0", "exp(z)"]],
        );
        let inv = inverse(&a, &c).unwrap();
        let prod = matmul(&a, &inv);
        for (i, row) in prod.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let target = if i == j { Expr::one() } else { Expr::zero() };
                assert!(c.equal(e, &target).unwrap().is_zero(), "{i}{j}: {e:?}");
            }
        }
    }

    #[test]
    fn singular_systems_are_reported() {
        let c = ctx();
        let a = m(&c, &[&["x", "y"], &["2*x", "2*y"]]);
        assert!(matches!(inverse(&a, &c), Err(Error::Singular(_))));
        assert_eq!(det(&a, &c).unwrap(), Expr::zero());
    }
}
