//! Canonical contact data of a sub-pseudo-Riemannian structure.
//!
//! Frame indices follow one convention throughout the crate: index `0` is
//! the Reeb field `X_0`, indices `1..=2n` are the distribution frame
//! `X_1,…,X_{2n}`.  Matrices living on the distribution (`ω`, `h`, `h♯`) are
//! `2n × 2n` with row/column `k` standing for `X_{k+1}`.

mod invariants;
mod metric;

pub use invariants::{exterior_power_metric, HData};
pub use metric::FrameMetric;

use num_traits::Signed;

use crate::calculus::{linalg, Frame, KForm, Matrix, VectorField};
use crate::error::{Error, Result};
use crate::symexpr::{Context, Expr, Witness};

/// An oriented orthonormal frame of a contact distribution together with
/// its normalized contact form, Reeb field and structural functions.
#[derive(Debug, Clone)]
pub struct SubPRStructure {
    ctx: Context,
    signature: Vec<i32>,
    alpha: KForm,
    frame: Frame,
    omega: Matrix,
}

/// Real `n`-th root of `w` (`w` of constant sign; even `n` needs `w > 0`).
fn real_root(w: &Expr, n: usize, positive: bool) -> Expr {
    let w = w.simplify();
    match n {
        1 => w,
        2 => Expr::sqrt(&w).simplify(),
        _ => {
            let k = Expr::rational(1, n as i64);
            if positive {
                Expr::exp(&(&k * &Expr::ln(&w))).simplify()
            } else {
                (-Expr::exp(&(&k * &Expr::ln(&-&w)))).simplify()
            }
        }
    }
}

/// Sign of `e` over the sample points, requiring it to be constant.
fn constant_sign(e: &Expr, ctx: &Context) -> Result<bool> {
    if let Some(r) = e.as_num() {
        return Ok(r.is_positive());
    }
    let values = ctx.sample(e)?;
    let positive = values[0].1 > 0.0;
    for (p, v) in &values {
        if (*v > 0.0) != positive || *v == 0.0 {
            return Err(Error::SignChange(Witness {
                point: p.clone(),
                value: *v,
            }));
        }
    }
    Ok(positive)
}

/// Cofactor vector of the `(m+1) × m` matrix whose columns are `fields`:
/// the coefficients of a one-form annihilating every field.
fn annihilator(fields: &[VectorField], ctx: &Context) -> Result<Vec<Expr>> {
    let dim = ctx.dim();
    let mut out = Vec::with_capacity(dim);
    for a in 0..dim {
        let minor: Matrix = (0..dim)
            .filter(|&r| r != a)
            .map(|r| fields.iter().map(|f| f.coeff(r).clone()).collect())
            .collect();
        let d = linalg::det(&minor, ctx)?;
        out.push(if a % 2 == 0 { d } else { (-d).simplify() });
    }
    Ok(out)
}

impl SubPRStructure {
    /// Normalizes the contact form, finds the Reeb field and expands all
    /// frame brackets.
    pub fn build(
        ctx: Context,
        frame: Vec<VectorField>,
        signature: Vec<i32>,
    ) -> Result<SubPRStructure> {
        let dim = ctx.dim();
        if dim < 3 || dim.is_multiple_of(2) {
            return Err(Error::Dimension(format!(
                "a contact structure needs an odd dimension ≥ 3, chart has {dim}"
            )));
        }
        let n2 = dim - 1;
        let n = n2 / 2;
        if frame.len() != n2 || frame.iter().any(|f| f.dim() != dim) {
            return Err(Error::Dimension(format!(
                "expected {n2} frame fields with {dim} components"
            )));
        }
        if signature.len() != n2 || signature.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::Dimension(format!(
                "signature must be {n2} entries of ±1"
            )));
        }
        let frame: Vec<VectorField> = frame.iter().map(VectorField::simplify).collect();

        let alpha0 = KForm::one_form(annihilator(&frame, &ctx)?);
        if alpha0.is_structurally_zero() {
            return Err(Error::Singular(
                "frame fields are linearly dependent".into(),
            ));
        }
        let d_alpha0 = alpha0.exterior_derivative();
        let w0 = pairing_matrix(&d_alpha0, &frame, &ctx)?;
        // (dα0|D)^{∧n}(X_1,…,X_2n) = n!·Pf; the normalization divides by n!
        let v = linalg::pfaffian(&w0);
        if !ctx.is_nonzero(&v)? {
            return Err(Error::NotContact);
        }
        let sign_n = if n.is_multiple_of(2) { 1 } else { -1 };
        let w = Expr::div(&Expr::int(sign_n), &v).simplify();
        let positive = constant_sign(&w, &ctx)?;
        if n.is_multiple_of(2) && !positive {
            return Err(Error::SignObstruction);
        }
        let f = real_root(&w, n, positive);
        let alpha = alpha0.scale(&f);
        let d_alpha = alpha.exterior_derivative();

        // Reeb field: α(X0) = 1, dα(X0, X_i) = 0.
        let alpha_coeffs = alpha.dense_one_form();
        let mut rows: Matrix = vec![alpha_coeffs];
        let mut rhs = vec![Expr::one()];
        for x in &frame {
            let row = (0..dim)
                .map(|a| {
                    Expr::add((0..dim).map(|b| &d_alpha.component(&[a, b]) * x.coeff(b))).simplify()
                })
                .collect();
            rows.push(row);
            rhs.push(Expr::zero());
        }
        let x0 = VectorField::new(linalg::solve(&rows, &rhs, &ctx).map_err(|e| match e {
            Error::Singular(_) => Error::NotContact,
            e => e,
        })?);

        let mut fields = vec![x0];
        fields.extend(frame.iter().cloned());
        let full = Frame::new(fields, &ctx)?;

        let omega = (1..=n2)
            .map(|i| (1..=n2).map(|j| full.c(i, j, 0).clone()).collect())
            .collect();
        let s = SubPRStructure {
            ctx,
            signature,
            alpha,
            frame: full,
            omega,
        };
        for i in 1..=n2 {
            let v = s.ctx.is_zero(s.c(0, i, 0))?;
            if !v.is_zero() {
                return Err(Error::EngineDefect(format!(
                    "[X0, X{i}] leaves the distribution"
                )));
            }
        }
        Ok(s)
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    /// Half the dimension of the distribution.
    pub fn n(&self) -> usize {
        self.signature.len() / 2
    }

    /// Dimension of the manifold, `2n + 1`.
    pub fn dim(&self) -> usize {
        self.signature.len() + 1
    }

    pub fn signature(&self) -> &[i32] {
        &self.signature
    }

    /// `s_i = g(X_i, X_i)` for `i ∈ 1..=2n`.
    pub fn s(&self, i: usize) -> i32 {
        self.signature[i - 1]
    }

    pub fn is_riemannian(&self) -> bool {
        self.signature.iter().all(|&s| s == 1)
    }

    pub fn is_lorentzian(&self) -> bool {
        self.signature.iter().filter(|&&s| s == -1).count() == 1
    }

    pub fn alpha(&self) -> &KForm {
        &self.alpha
    }

    pub fn reeb(&self) -> &VectorField {
        self.frame.field(0)
    }

    /// Full frame `(X_0, X_1, …, X_2n)`.
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Distribution frame `(X_1, …, X_2n)`.
    pub fn distribution_frame(&self) -> &[VectorField] {
        &self.frame.fields()[1..]
    }

    /// Structural function `c_ij^k`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Expr {
        self.frame.c(i, j, k)
    }

    /// `ω(X_i, X_j) = −dα(X_i, X_j) = c_ij^0` on the distribution.
    pub fn omega(&self) -> &Matrix {
        &self.omega
    }

    /// `ω(X_i, X_j)` in frame indices `1..=2n`.
    pub fn omega_ij(&self, i: usize, j: usize) -> &Expr {
        &self.omega[i - 1][j - 1]
    }

    /// `X_i(f)` in frame indices.
    pub fn apply(&self, i: usize, f: &Expr) -> Expr {
        self.frame.apply(i, f)
    }

    /// `g = diag(s_i)` on the distribution.
    pub fn g_matrix(&self) -> Matrix {
        let n2 = self.signature.len();
        (0..n2)
            .map(|i| {
                (0..n2)
                    .map(|j| {
                        if i == j {
                            Expr::int(self.signature[i] as i64)
                        } else {
                            Expr::zero()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// The structure with the distribution frame replaced, same chart.
    pub fn with_frame(&self, frame: Vec<VectorField>) -> Result<SubPRStructure> {
        SubPRStructure::build(self.ctx.clone(), frame, self.signature.clone())
    }

    /// Reverses the orientation by `X_1 ↦ −X_1` and rebuilds.
    ///
    /// For even `n` the top power of `dα` is insensitive to the sign of `α`,
    /// so the reversed frame cannot be normalized and this reports
    /// [`Error::SignObstruction`].
    pub fn orientation_flip(&self) -> Result<SubPRStructure> {
        let mut frame = self.distribution_frame().to_vec();
        frame[0] = frame[0].neg();
        self.with_frame(frame)
    }

    /// Checks `c_ij^0 = −dα(X_i, X_j)` for all pairs.
    pub fn check_omega_identity(&self) -> Result<bool> {
        let d_alpha = self.alpha.exterior_derivative();
        let w = pairing_matrix(&d_alpha, self.distribution_frame(), &self.ctx)?;
        for i in 0..w.len() {
            for j in 0..w.len() {
                if !self.ctx.equal(&self.omega[i][j], &(-&w[i][j]))?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `[β(V_i, V_j)]` for a 2-form `β`.
pub(crate) fn pairing_matrix(
    beta: &KForm,
    fields: &[VectorField],
    ctx: &Context,
) -> Result<Matrix> {
    let m = fields.len();
    let mut out = linalg::zeros(m, m);
    for i in 0..m {
        for j in i + 1..m {
            let v = beta.evaluate(&[fields[i].clone(), fields[j].clone()], ctx)?;
            out[j][i] = (-&v).simplify();
            out[i][j] = v;
        }
    }
    Ok(out)
}
