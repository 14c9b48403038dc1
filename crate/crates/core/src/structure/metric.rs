use crate::calculus::{linalg, Frame, Matrix};
use crate::error::{Error, Result};
use crate::symexpr::{Context, Expr};

use super::SubPRStructure;

/// A metric written in a frame, rows and columns in frame index order
/// (`X_0` first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameMetric {
    m: Matrix,
}

impl FrameMetric {
    pub fn new(m: Matrix) -> FrameMetric {
        FrameMetric {
            m: linalg::simplify_all(&m),
        }
    }

    /// The extension `G^c = diag(c, s_1, …, s_2n)`.
    pub fn extension(s: &SubPRStructure, c: &Expr) -> Result<FrameMetric> {
        if !s.context().is_nonzero(c)? {
            return Err(Error::ZeroScale("c"));
        }
        let d = s.dim();
        let mut m = linalg::zeros(d, d);
        m[0][0] = c.simplify();
        for i in 1..d {
            m[i][i] = Expr::int(s.s(i) as i64);
        }
        Ok(FrameMetric { m })
    }

    /// `Fᵀ g F`, with `F` the frame matrix (fields as columns).
    pub fn from_coordinates(g: &Matrix, frame: &Frame) -> FrameMetric {
        let d = frame.len();
        let f: Matrix = (0..d)
            .map(|a| (0..d).map(|i| frame.field(i).coeff(a).clone()).collect())
            .collect();
        FrameMetric::new(linalg::matmul(
            &linalg::transpose(&f),
            &linalg::matmul(g, &f),
        ))
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &Expr {
        &self.m[i][j]
    }

    /// Rows/columns ordered `(X_1, …, X_2n, X_0)`.
    pub fn paper_order(&self) -> Matrix {
        let d = self.dim();
        let order: Vec<usize> = (1..d).chain(std::iter::once(0)).collect();
        order
            .iter()
            .map(|&i| order.iter().map(|&j| self.m[i][j].clone()).collect())
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim()).all(|i| (0..self.dim()).all(|j| i == j || self.m[i][j].is_const_zero()))
    }

    /// Inverse matrix; errors on degeneracy.
    pub fn inverse(&self, ctx: &Context) -> Result<Matrix> {
        if self.is_diagonal() {
            let d = self.dim();
            let mut out = linalg::zeros(d, d);
            for i in 0..d {
                if !ctx.is_nonzero(&self.m[i][i])? {
                    return Err(Error::DegenerateMetric(format!(
                        "diagonal entry {i} vanishes"
                    )));
                }
                out[i][i] = Expr::div(&Expr::one(), &self.m[i][i]).simplify();
            }
            return Ok(out);
        }
        linalg::inverse(&self.m, ctx).map_err(|e| match e {
            Error::Singular(_) => Error::DegenerateMetric("singular frame matrix".into()),
            e => e,
        })
    }

    /// Coordinate-basis matrix `Θᵀ G Θ`.
    pub fn coordinate_matrix(&self, frame: &Frame) -> Matrix {
        frame.to_coordinates(&self.m)
    }

    pub fn scale(&self, f: &Expr) -> FrameMetric {
        FrameMetric::new(
            self.m
                .iter()
                .map(|r| r.iter().map(|e| f * e).collect())
                .collect(),
        )
    }
}
