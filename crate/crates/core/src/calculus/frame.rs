use super::field::VectorField;
use super::linalg::{self, Matrix};
use crate::error::{Error, Result};
use crate::symexpr::{Context, Expr};

/// A pointwise basis of vector fields with its coframe and structure
/// constants `[E_i, E_j] = Σ_k C_ij^k E_k`.
#[derive(Debug, Clone)]
pub struct Frame {
    fields: Vec<VectorField>,
    /// `coframe[k][a]`: coefficient of `du_a` in the dual form `E^k`.
    coframe: Matrix,
    constants: Vec<Vec<Vec<Expr>>>,
}

/// Coefficients `a_k` with `V = Σ a_k E_k`, by fraction-free elimination.
pub fn expand_in_frame(v: &VectorField, frame: &[VectorField], ctx: &Context) -> Result<Vec<Expr>> {
    let a = frame_matrix(frame);
    linalg::solve(&a, v.coeffs(), ctx).map_err(|e| match e {
        Error::Singular(_) => Error::Singular("frame matrix".into()),
        e => e,
    })
}

/// Columns are the frame fields.
fn frame_matrix(frame: &[VectorField]) -> Matrix {
    let dim = frame.first().map_or(0, VectorField::dim);
    (0..dim)
        .map(|a| frame.iter().map(|f| f.coeff(a).clone()).collect())
        .collect()
}

impl Frame {
    pub fn new(fields: Vec<VectorField>, ctx: &Context) -> Result<Frame> {
        let n = fields.len();
        if n != ctx.dim() || fields.iter().any(|f| f.dim() != n) {
            return Err(Error::Dimension(format!(
                "{n} frame fields on a {}-dimensional chart",
                ctx.dim()
            )));
        }
        let coframe = linalg::inverse(&frame_matrix(&fields), ctx).map_err(|e| match e {
            Error::Singular(_) => Error::Singular("frame fields are linearly dependent".into()),
            e => e,
        })?;
        let mut constants = vec![vec![vec![Expr::zero(); n]; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let br = fields[i].lie_bracket(&fields[j]);
                let c = linalg::matvec(&coframe, br.coeffs());
                for k in 0..n {
                    constants[j][i][k] = (-&c[k]).simplify();
                    constants[i][j][k] = c[k].clone();
                }
            }
        }
        Ok(Frame {
            fields,
            coframe,
            constants,
        })
    }

    /// Coordinate frame `∂/∂u_k`.
    pub fn coordinate(ctx: &Context) -> Result<Frame> {
        let n = ctx.dim();
        Frame::new((0..n).map(|k| VectorField::coordinate(n, k)).collect(), ctx)
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    pub fn field(&self, i: usize) -> &VectorField {
        &self.fields[i]
    }

    pub fn coframe(&self) -> &Matrix {
        &self.coframe
    }

    /// `C_ij^k`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Expr {
        &self.constants[i][j][k]
    }

    pub fn constants(&self) -> &Vec<Vec<Vec<Expr>>> {
        &self.constants
    }

    /// `E_i(f)`.
    pub fn apply(&self, i: usize, f: &Expr) -> Expr {
        self.fields[i].apply(f)
    }

    /// Frame components of `V`.
    pub fn expand(&self, v: &VectorField) -> Vec<Expr> {
        linalg::matvec(&self.coframe, v.coeffs())
    }

    /// `Σ_k a_k E_k`.
    pub fn combine(&self, coeffs: &[Expr]) -> VectorField {
        VectorField::combination(coeffs, &self.fields)
    }

    /// Coordinate-basis matrix of a bilinear form with frame matrix `m`:
    /// `Θᵀ m Θ` with `Θ` the coframe.
    pub fn to_coordinates(&self, m: &Matrix) -> Matrix {
        linalg::matmul(
            &linalg::transpose(&self.coframe),
            &linalg::matmul(m, &self.coframe),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{Chart, SamplingPlan};

    #[test]
    fn expansion_and_constants() {
        let chart = Chart::new(
            vec!["x", "y", "z"],
            vec![(-1.0, 1.0), (0.5, 2.0), (-1.0, 1.0)],
        )
        .unwrap()
        .with_excluded(vec![Expr::coord(1)])
        .unwrap();
        let ctx = Context::new(chart, SamplingPlan::default());
        let x1 = VectorField::parse(&["y", "0", "1"], ctx.chart()).unwrap();
        let x2 = VectorField::parse(&["0", "y", "0"], ctx.chart()).unwrap();
        let x0 = VectorField::coordinate(3, 2);
        let frame = Frame::new(vec![x0.clone(), x1.clone(), x2.clone()], &ctx).unwrap();
        let br = x1.lie_bracket(&x2);
        let coeffs = expand_in_frame(&br, &[x1, x2, x0], &ctx).unwrap();
        assert_eq!(coeffs, vec![Expr::int(-1), Expr::zero(), Expr::one()]);
        assert_eq!(frame.c(1, 2, 1), &Expr::int(-1));
        assert_eq!(frame.c(1, 2, 0), &Expr::one());
        assert_eq!(frame.c(2, 1, 0), &Expr::int(-1));
        let recombined = frame.combine(&frame.expand(&br));
        assert_eq!(recombined, br);
    }
}
