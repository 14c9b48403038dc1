//! Linear connections written in a frame: `∇_{E_i} E_j = Σ_k Γ_ij^k E_k`.

use serde::Serialize;

use crate::calculus::{Frame, KForm, Matrix};
use crate::error::{Error, Result};
use crate::structure::{FrameMetric, SubPRStructure};
use crate::symexpr::{Context, Expr, ZeroVerdict};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    LeviCivita,
    ClosedForm,
    Weyl,
    Custom,
}

/// Frame Christoffel table.
#[derive(Debug, Clone)]
pub struct ConnectionCoeffs {
    gamma: Vec<Vec<Vec<Expr>>>,
    provenance: Provenance,
}

type Table3 = Vec<Vec<Vec<Expr>>>;

fn table3(d: usize) -> Table3 {
    vec![vec![vec![Expr::zero(); d]; d]; d]
}

impl ConnectionCoeffs {
    pub fn new(gamma: Table3, provenance: Provenance) -> ConnectionCoeffs {
        ConnectionCoeffs { gamma, provenance }
    }

    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    /// `Γ_ij^k`.
    pub fn get(&self, i: usize, j: usize, k: usize) -> &Expr {
        &self.gamma[i][j][k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, e: Expr) {
        self.gamma[i][j][k] = e.simplify();
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Components of `∇_{E_i} E_j`.
    pub fn derivative(&self, i: usize, j: usize) -> &[Expr] {
        &self.gamma[i][j]
    }

    pub fn table(&self) -> &Table3 {
        &self.gamma
    }
}

/// Levi-Civita connection of a frame metric by the Koszul formula.
pub fn levi_civita(g: &FrameMetric, frame: &Frame, ctx: &Context) -> Result<ConnectionCoeffs> {
    let d = frame.len();
    if g.dim() != d {
        return Err(Error::Dimension("metric and frame sizes differ".into()));
    }
    let ginv = g.inverse(ctx)?;
    let gm = g.matrix();
    // G([E_a, E_b], E_c)
    let gb = |a: usize, b: usize, c: usize| -> Expr {
        Expr::add((0..d).map(|m| frame.c(a, b, m) * &gm[m][c]))
    };
    let mut lower = table3(d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let e = Expr::add([
                    frame.apply(i, &gm[j][k]),
                    frame.apply(j, &gm[i][k]),
                    -frame.apply(k, &gm[i][j]),
                    gb(i, j, k),
                    -gb(i, k, j),
                    -gb(j, k, i),
                ]);
                lower[i][j][k] = (&Expr::rational(1, 2) * &e).simplify();
            }
        }
    }
    let mut gamma = table3(d);
    for i in 0..d {
        for j in 0..d {
            for l in 0..d {
                gamma[i][j][l] =
                    Expr::add((0..d).map(|k| &lower[i][j][k] * &ginv[k][l])).simplify();
            }
        }
    }
    Ok(ConnectionCoeffs::new(gamma, Provenance::LeviCivita))
}

/// The structure-function formulas for the Levi-Civita connection of `G^c`.
///
/// For non-constant `c` the entries `∇_{X_i}X_0`, `∇_{X_0}X_i` gain
/// `X_i(c)/(2c)·X_0` and `∇_{X_0}X_0 = Σ_k −X_k(c)/(2s_k)·X_k + X_0(c)/(2c)·X_0`.
pub fn closed_form_connection(s: &SubPRStructure, c: &Expr) -> Result<ConnectionCoeffs> {
    if !s.context().is_nonzero(c)? {
        return Err(Error::ZeroScale("c"));
    }
    let d = s.dim();
    let n2 = d - 1;
    let sg = |k: usize| Expr::int(s.s(k) as i64);
    let cc = |i, j, k| s.c(i, j, k).clone();
    let half_c = |e: Expr| Expr::div(&e, &(&Expr::int(2) * c));
    let mut gamma = table3(d);
    for i in 1..=n2 {
        for j in 1..=n2 {
            gamma[i][j][0] = half_c(Expr::add([
                &cc(i, j, 0) * c,
                &cc(0, j, i) * &sg(i),
                &cc(0, i, j) * &sg(j),
            ]))
            .simplify();
            for k in 1..=n2 {
                let e = Expr::add([
                    &cc(i, j, k) * &sg(k),
                    -(&cc(j, k, i) * &sg(i)),
                    -(&cc(i, k, j) * &sg(j)),
                ]);
                gamma[i][j][k] = (&e * &Expr::rational(s.s(k) as i64, 2)).simplify();
            }
        }
        for k in 1..=n2 {
            let e = Expr::add([
                &cc(0, i, k) * &sg(k),
                &cc(0, k, i) * &sg(i),
                &cc(i, k, 0) * c,
            ]);
            gamma[i][0][k] = (&e * &Expr::rational(-(s.s(k) as i64), 2)).simplify();
        }
        gamma[i][0][0] = half_c(s.apply(i, c)).simplify();
        // ∇_0 X_i = ∇_i X_0 + [X_0, X_i]
        for k in 0..d {
            gamma[0][i][k] = (&gamma[i][0][k] + &cc(0, i, k)).simplify();
        }
    }
    for k in 1..=n2 {
        gamma[0][0][k] = (&s.apply(k, c) * &Expr::rational(-(s.s(k) as i64), 2)).simplify();
    }
    gamma[0][0][0] = half_c(s.apply(0, c)).simplify();
    Ok(ConnectionCoeffs::new(gamma, Provenance::ClosedForm))
}

/// Frame components `η(E_i)` of a one-form.
pub fn frame_components(eta: &KForm, frame: &Frame, ctx: &Context) -> Result<Vec<Expr>> {
    frame
        .fields()
        .iter()
        .map(|f| eta.evaluate(std::slice::from_ref(f), ctx))
        .collect()
}

/// `∇_X Y = ∇^{LC}_X Y − ½ (η(X) Y + η(Y) X − G(X,Y) η♯)`, so that `∇G = η ⊗ G`.
pub fn weyl_connection(
    g: &FrameMetric,
    eta: &[Expr],
    frame: &Frame,
    ctx: &Context,
) -> Result<ConnectionCoeffs> {
    let d = frame.len();
    let lc = levi_civita(g, frame, ctx)?;
    let ginv = g.inverse(ctx)?;
    let sharp: Vec<Expr> = (0..d)
        .map(|k| Expr::add((0..d).map(|m| &ginv[k][m] * &eta[m])).simplify())
        .collect();
    let mut gamma = lc.gamma;
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let mut corr = vec![-(&g.matrix()[i][j] * &sharp[k])];
                if j == k {
                    corr.push(eta[i].clone());
                }
                if i == k {
                    corr.push(eta[j].clone());
                }
                let e = &gamma[i][j][k] - &(&Expr::rational(1, 2) * &Expr::add(corr));
                gamma[i][j][k] = e.simplify();
            }
        }
    }
    Ok(ConnectionCoeffs::new(gamma, Provenance::Weyl))
}

/// Tensors accepted by [`covariant_derivative`], in frame components.
#[derive(Debug, Clone, PartialEq)]
pub enum Tensor {
    /// `a_j = a(E_j)`.
    Covector(Vec<Expr>),
    /// `T_jk = T(E_j, E_k)`.
    Bilinear(Matrix),
    /// `T[k][j]`: component along `E_k` of `T(E_j)`.
    Endomorphism(Matrix),
}

/// `∇_{E_i} T` in frame components.
pub fn covariant_derivative(
    conn: &ConnectionCoeffs,
    frame: &Frame,
    t: &Tensor,
    i: usize,
) -> Tensor {
    let d = frame.len();
    let gm = |a: usize, b: usize, k: usize| conn.get(a, b, k);
    match t {
        Tensor::Covector(a) => Tensor::Covector(
            (0..d)
                .map(|j| {
                    let mut terms = vec![frame.apply(i, &a[j])];
                    terms.extend((0..d).map(|m| -(gm(i, j, m) * &a[m])));
                    Expr::add(terms).simplify()
                })
                .collect(),
        ),
        Tensor::Bilinear(m) => Tensor::Bilinear(
            (0..d)
                .map(|j| {
                    (0..d)
                        .map(|k| {
                            let mut terms = vec![frame.apply(i, &m[j][k])];
                            for r in 0..d {
                                terms.push(-(gm(i, j, r) * &m[r][k]));
                                terms.push(-(gm(i, k, r) * &m[j][r]));
                            }
                            Expr::add(terms).simplify()
                        })
                        .collect()
                })
                .collect(),
        ),
        Tensor::Endomorphism(m) => Tensor::Endomorphism(
            (0..d)
                .map(|k| {
                    (0..d)
                        .map(|j| {
                            let mut terms = vec![frame.apply(i, &m[k][j])];
                            for r in 0..d {
                                terms.push(&m[r][j] * gm(i, r, k));
                                terms.push(-(gm(i, j, r) * &m[k][r]));
                            }
                            Expr::add(terms).simplify()
                        })
                        .collect()
                })
                .collect(),
        ),
    }
}

/// One checked component of a connection report.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentCheck {
    pub index: Vec<usize>,
    pub verdict: ZeroVerdict,
}

/// Compatibility `(∇_i G)_jk − η_i G_jk` and torsion
/// `Γ_ij^k − Γ_ji^k − C_ij^k` verdicts.
#[derive(Debug, Clone, Serialize)]
pub struct ConnectionReport {
    pub compatibility: Vec<ComponentCheck>,
    pub torsion: Vec<ComponentCheck>,
}

impl ConnectionReport {
    pub fn passed(&self) -> bool {
        self.compatibility
            .iter()
            .chain(&self.torsion)
            .all(|c| c.verdict.is_zero())
    }

    pub fn worst(&self) -> ZeroVerdict {
        ZeroVerdict::combine(
            self.compatibility
                .iter()
                .chain(&self.torsion)
                .map(|c| &c.verdict),
        )
    }
}

pub fn verify_connection(
    conn: &ConnectionCoeffs,
    g: &FrameMetric,
    eta: Option<&[Expr]>,
    frame: &Frame,
    ctx: &Context,
) -> Result<ConnectionReport> {
    let d = frame.len();
    let mut compatibility = Vec::new();
    let mut torsion = Vec::new();
    for i in 0..d {
        let Tensor::Bilinear(dg) =
            covariant_derivative(conn, frame, &Tensor::Bilinear(g.matrix().clone()), i)
        else {
            unreachable!()
        };
        for j in 0..d {
            for k in j..d {
                let mut e = dg[j][k].clone();
                if let Some(eta) = eta {
                    e = &e - &(&eta[i] * g.get(j, k));
                }
                compatibility.push(ComponentCheck {
                    index: vec![i, j, k],
                    verdict: ctx.is_zero(&e)?,
                });
            }
        }
        for j in i + 1..d {
            for k in 0..d {
                let e = Expr::add([
                    conn.get(i, j, k).clone(),
                    -conn.get(j, i, k),
                    -frame.c(i, j, k),
                ]);
                torsion.push(ComponentCheck {
                    index: vec![i, j, k],
                    verdict: ctx.is_zero(&e)?,
                });
            }
        }
    }
    Ok(ConnectionReport {
        compatibility,
        torsion,
    })
}

/// Entrywise verdicts of `a − b`.
pub fn compare(
    a: &ConnectionCoeffs,
    b: &ConnectionCoeffs,
    ctx: &Context,
) -> Result<Vec<ComponentCheck>> {
    let d = a.dim();
    let mut out = Vec::with_capacity(d * d * d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                out.push(ComponentCheck {
                    index: vec![i, j, k],
                    verdict: ctx.equal(a.get(i, j, k), b.get(i, j, k))?,
                });
            }
        }
    }
    Ok(out)
}
