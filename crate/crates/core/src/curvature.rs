//! Curvature of frame connections, the sectional-curvature decomposition on
//! the distribution and recovery of `R_D` by polarization.

use serde::Serialize;

use crate::calculus::{Frame, Matrix};
use crate::connection::{closed_form_connection, ConnectionCoeffs};
use crate::error::{Error, Result};
use crate::structure::{FrameMetric, SubPRStructure};
use crate::symexpr::{Context, Expr, ZeroVerdict};

/// Dense four-index table.
pub type Table4 = Vec<Vec<Vec<Vec<Expr>>>>;

fn table4(d: usize) -> Table4 {
    vec![vec![vec![vec![Expr::zero(); d]; d]; d]; d]
}

/// `R(E_i,E_j)E_k = Σ_l R_ijk^l E_l` and `R_ijkl = G(R(E_i,E_j)E_k, E_l)`.
#[derive(Debug, Clone)]
pub struct CurvatureData {
    riemann: Table4,
    lowered: Table4,
    metric: FrameMetric,
}

impl CurvatureData {
    pub fn dim(&self) -> usize {
        self.riemann.len()
    }

    pub fn r(&self, i: usize, j: usize, k: usize, l: usize) -> &Expr {
        &self.riemann[i][j][k][l]
    }

    pub fn lowered(&self, i: usize, j: usize, k: usize, l: usize) -> &Expr {
        &self.lowered[i][j][k][l]
    }

    pub fn lowered_table(&self) -> &Table4 {
        &self.lowered
    }

    pub fn metric(&self) -> &FrameMetric {
        &self.metric
    }
}

/// `R_ijk^l = E_i Γ_jk^l − E_j Γ_ik^l + Σ_m (Γ_jk^m Γ_im^l − Γ_ik^m Γ_jm^l) − Σ_m C_ij^m Γ_mk^l`,
/// for `R(X,Y) = [∇_X, ∇_Y] − ∇_{[X,Y]}`.
pub fn riemann(conn: &ConnectionCoeffs, frame: &Frame, g: &FrameMetric) -> CurvatureData {
    let d = frame.len();
    let gm = |a: usize, b: usize, c: usize| conn.get(a, b, c);
    let mut r = table4(d);
    for i in 0..d {
        for j in i + 1..d {
            for k in 0..d {
                for l in 0..d {
                    let mut terms = vec![frame.apply(i, gm(j, k, l)), -frame.apply(j, gm(i, k, l))];
                    for m in 0..d {
                        terms.push(gm(j, k, m) * gm(i, m, l));
                        terms.push(-(gm(i, k, m) * gm(j, m, l)));
                        terms.push(-(frame.c(i, j, m) * gm(m, k, l)));
                    }
                    let e = Expr::add(terms).simplify();
                    r[j][i][k][l] = (-&e).simplify();
                    r[i][j][k][l] = e;
                }
            }
        }
    }
    let mut lowered = table4(d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    lowered[i][j][k][l] =
                        Expr::add((0..d).map(|m| &r[i][j][k][m] * g.get(m, l))).simplify();
                }
            }
        }
    }
    CurvatureData {
        riemann: r,
        lowered,
        metric: g.clone(),
    }
}

/// `G(R(u,v)v,u)` for frame-component vectors.
pub fn curvature_form(curv: &CurvatureData, u: &[Expr], v: &[Expr]) -> Expr {
    quartic(&curv.lowered, u, v, v, u)
}

fn quartic(t: &Table4, a: &[Expr], b: &[Expr], c: &[Expr], d: &[Expr]) -> Expr {
    let nz =
        |v: &[Expr]| -> Vec<usize> { (0..v.len()).filter(|&i| !v[i].is_const_zero()).collect() };
    let (ia, ib, ic, id) = (nz(a), nz(b), nz(c), nz(d));
    let mut terms = Vec::new();
    for &p in &ia {
        for &q in &ib {
            for &r in &ic {
                for &s in &id {
                    if !t[p][q][r][s].is_const_zero() {
                        terms.push(Expr::mul([
                            a[p].clone(),
                            b[q].clone(),
                            c[r].clone(),
                            d[s].clone(),
                            t[p][q][r][s].clone(),
                        ]));
                    }
                }
            }
        }
    }
    Expr::add(terms).simplify()
}

fn bilinear(m: &Matrix, u: &[Expr], v: &[Expr]) -> Expr {
    let mut terms = Vec::new();
    for (a, ua) in u.iter().enumerate() {
        for (b, vb) in v.iter().enumerate() {
            if !ua.is_const_zero() && !vb.is_const_zero() && !m[a][b].is_const_zero() {
                terms.push(Expr::mul([ua.clone(), m[a][b].clone(), vb.clone()]));
            }
        }
    }
    Expr::add(terms).simplify()
}

fn unit(d: usize, i: usize) -> Vec<Expr> {
    (0..d)
        .map(|k| if k == i { Expr::one() } else { Expr::zero() })
        .collect()
}

/// Sectional curvature of the plane spanned by two frame-component vectors.
pub fn plane_sectional(
    curv: &CurvatureData,
    u: &[Expr],
    v: &[Expr],
    ctx: &Context,
) -> Result<Expr> {
    let g = curv.metric.matrix();
    let den =
        (&(&bilinear(g, u, u) * &bilinear(g, v, v)) - &Expr::pow(&bilinear(g, u, v), 2)).simplify();
    if !ctx.is_nonzero(&den)? {
        let i = u.iter().position(|e| !e.is_const_zero()).unwrap_or(0);
        let j = v.iter().position(|e| !e.is_const_zero()).unwrap_or(0);
        return Err(Error::DegeneratePlane(i, j));
    }
    Ok(Expr::div(&curvature_form(curv, u, v), &den).simplify())
}

/// `G(R(E_i,E_j)E_j,E_i) / (G_ii G_jj − G_ij²)`.
pub fn sectional(curv: &CurvatureData, i: usize, j: usize, ctx: &Context) -> Result<Expr> {
    let d = curv.dim();
    plane_sectional(curv, &unit(d, i), &unit(d, j), ctx).map_err(|e| match e {
        Error::DegeneratePlane(..) => Error::DegeneratePlane(i, j),
        e => e,
    })
}

#[derive(Debug, Clone)]
pub struct RicciData {
    /// `Ric_jk = Σ_a R_ajk^a`.
    pub ricci: Matrix,
    pub symmetric: Matrix,
    /// `Σ G^{jk} Ric_sym,jk`.
    pub scalar: Expr,
}

pub fn ricci(curv: &CurvatureData, ctx: &Context) -> Result<RicciData> {
    let d = curv.dim();
    let ricci: Matrix = (0..d)
        .map(|j| {
            (0..d)
                .map(|k| Expr::add((0..d).map(|a| curv.riemann[a][j][k][a].clone())).simplify())
                .collect()
        })
        .collect();
    let symmetric: Matrix = (0..d)
        .map(|j| {
            (0..d)
                .map(|k| (&Expr::rational(1, 2) * &(&ricci[j][k] + &ricci[k][j])).simplify())
                .collect()
        })
        .collect();
    let ginv = curv.metric.inverse(ctx)?;
    let mut terms = Vec::new();
    for j in 0..d {
        for k in 0..d {
            if !ginv[j][k].is_const_zero() {
                terms.push(&ginv[j][k] * &symmetric[j][k]);
            }
        }
    }
    Ok(RicciData {
        ricci,
        symmetric,
        scalar: Expr::add(terms).simplify(),
    })
}

/// Verdicts of the algebraic curvature identities.
#[derive(Debug, Clone, Serialize)]
pub struct SymmetryReport {
    pub antisymmetry: ZeroVerdict,
    pub first_bianchi: ZeroVerdict,
    /// `R_ijkl − R_klij`; meaningful for metric connections.
    pub pair_symmetry: ZeroVerdict,
}

pub fn symmetry_report(curv: &CurvatureData, ctx: &Context) -> Result<SymmetryReport> {
    let d = curv.dim();
    let mut anti = Vec::new();
    let mut bianchi = Vec::new();
    let mut pair = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    anti.push(
                        ctx.is_zero(&(&curv.riemann[i][j][k][l] + &curv.riemann[j][i][k][l]))?,
                    );
                    pair.push(ctx.equal(&curv.lowered[i][j][k][l], &curv.lowered[k][l][i][j])?);
                    if i < j && j < k {
                        let e = Expr::add([
                            curv.riemann[i][j][k][l].clone(),
                            curv.riemann[j][k][i][l].clone(),
                            curv.riemann[k][i][j][l].clone(),
                        ]);
                        bianchi.push(ctx.is_zero(&e)?);
                    }
                }
            }
        }
    }
    Ok(SymmetryReport {
        antisymmetry: ZeroVerdict::combine(&anti),
        first_bianchi: ZeroVerdict::combine(&bianchi),
        pair_symmetry: ZeroVerdict::combine(&pair),
    })
}

/// One distribution pair of the decomposition
/// `κ^c_D = κ_D − (1/c) g(X_i∧X_j, h♯X_i∧h♯X_j) − (3c/4) ω(X_i,X_j)²`.
#[derive(Debug, Clone)]
pub struct PairDecomposition {
    pub pair: (usize, usize),
    pub kappa_c: Expr,
    pub kappa_d: Expr,
    pub h_term: Expr,
    pub omega_sq: Expr,
    pub verdict: ZeroVerdict,
}

/// The connection and curvature of `G^c` from the closed-form tables.
pub fn extended_curvature(
    s: &SubPRStructure,
    c: &Expr,
) -> Result<(ConnectionCoeffs, CurvatureData)> {
    let g = FrameMetric::extension(s, c)?;
    let conn = closed_form_connection(s, c)?;
    let curv = riemann(&conn, s.frame(), &g);
    Ok((conn, curv))
}

/// `κ^c_D(X_i,X_j)` is taken as `G^c(R(X_i,X_j)X_j,X_i)`, the numerator of
/// the sectional curvature on the orthonormal pair.
pub fn decomposition_residual(s: &SubPRStructure, c: &Expr) -> Result<Vec<PairDecomposition>> {
    let (_, curv) = extended_curvature(s, c)?;
    decomposition_from(s, c, &curv)
}

pub fn decomposition_from(
    s: &SubPRStructure,
    c: &Expr,
    curv: &CurvatureData,
) -> Result<Vec<PairDecomposition>> {
    let hd = s.h_invariant()?;
    let n2 = s.dim() - 1;
    let mut out = Vec::new();
    for i in 1..=n2 {
        for j in i + 1..=n2 {
            let kappa_c = curv.lowered(i, j, j, i).clone();
            let kappa_d = s.kappa_general(i, j)?;
            let h_term = s.h_wedge_term(&hd, i, j);
            let omega_sq = Expr::pow(s.omega_ij(i, j), 2).simplify();
            let residual = Expr::add([
                kappa_c.clone(),
                -&kappa_d,
                Expr::div(&h_term, c),
                Expr::mul([Expr::rational(3, 4), c.clone(), omega_sq.clone()]),
            ]);
            out.push(PairDecomposition {
                pair: (i, j),
                verdict: s.context().is_zero(&residual)?,
                kappa_c,
                kappa_d,
                h_term,
                omega_sq,
            });
        }
    }
    Ok(out)
}

/// A form quadratic in each of two vector arguments, given on frame-component vectors.
pub trait Biquadratic {
    fn dim(&self) -> usize;
    fn eval(&self, u: &[Expr], v: &[Expr]) -> Expr;
}

/// `B(u,v) = T(u,v,v,u)` for a stored four-tensor.
pub struct TensorDiagonal<'a>(pub &'a Table4);

impl Biquadratic for TensorDiagonal<'_> {
    fn dim(&self) -> usize {
        self.0.len()
    }

    fn eval(&self, u: &[Expr], v: &[Expr]) -> Expr {
        quartic(self.0, u, v, v, u)
    }
}

/// Closure-backed biquadratic form.
pub struct FnBiquadratic<F: Fn(&[Expr], &[Expr]) -> Expr> {
    pub dim: usize,
    pub f: F,
}

impl<F: Fn(&[Expr], &[Expr]) -> Expr> Biquadratic for FnBiquadratic<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, u: &[Expr], v: &[Expr]) -> Expr {
        (self.f)(u, v)
    }
}

fn lin(a: &[Expr], t: i64, b: &[Expr]) -> Vec<Expr> {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x + &(&Expr::int(t) * y)).simplify())
        .collect()
}

/// `∂_s∂_t B(X+sZ, Y+tW)` at zero: exact because `B` is at most quadratic in `s` and `t`.
fn mixed(b: &dyn Biquadratic, x: &[Expr], y: &[Expr], z: &[Expr], w: &[Expr]) -> Expr {
    let f = |s: i64, t: i64| b.eval(&lin(x, s, z), &lin(y, t, w));
    let e = Expr::add([f(1, 1), -f(1, -1), -f(-1, 1), f(-1, -1)]);
    (&Expr::rational(1, 4) * &e).simplify()
}

/// Curvature-type tensor with `R(X,Y,Y,X) = B(X,Y)`:
/// `6 R(X,Y,Z,W) = −∂_s∂_t [B(X+sZ, Y+tW) − B(X+sW, Y+tZ)]`.
pub fn polarize_biquadratic(b: &dyn Biquadratic) -> Table4 {
    let d = b.dim();
    let e: Vec<Vec<Expr>> = (0..d).map(|i| unit(d, i)).collect();
    let mut out = table4(d);
    for x in 0..d {
        for y in 0..d {
            if x == y {
                continue;
            }
            for z in 0..d {
                for w in 0..d {
                    if z == w {
                        continue;
                    }
                    let m = &mixed(b, &e[x], &e[y], &e[z], &e[w])
                        - &mixed(b, &e[x], &e[y], &e[w], &e[z]);
                    out[x][y][z][w] = (&Expr::rational(-1, 6) * &m).simplify();
                }
            }
        }
    }
    out
}

/// `R_D` from `B(X,Y) = G^c(R^c(X,Y)Y,X) + (1/c) g(X∧Y, h♯X∧h♯Y) + (3c/4) ω(X,Y)²`
/// on the distribution; indices `0..2n` stand for `X_1..X_2n`.
pub fn r_d_tensor(s: &SubPRStructure, c: &Expr) -> Result<Table4> {
    let (_, curv) = extended_curvature(s, c)?;
    let hd = s.h_invariant()?;
    let n2 = s.dim() - 1;
    let mut rd = table4(n2);
    for a in 0..n2 {
        for b in 0..n2 {
            for p in 0..n2 {
                for q in 0..n2 {
                    rd[a][b][p][q] = curv.lowered(a + 1, b + 1, p + 1, q + 1).clone();
                }
            }
        }
    }
    let omega: Matrix = (1..=n2)
        .map(|i| (1..=n2).map(|j| s.omega_ij(i, j).clone()).collect())
        .collect();
    let h = hd.h.clone();
    let form = FnBiquadratic {
        dim: n2,
        f: |u: &[Expr], v: &[Expr]| {
            let hw =
                &(&bilinear(&h, u, u) * &bilinear(&h, v, v)) - &Expr::pow(&bilinear(&h, u, v), 2);
            Expr::add([
                quartic(&rd, u, v, v, u),
                Expr::div(&hw, c),
                Expr::mul([
                    Expr::rational(3, 4),
                    c.clone(),
                    Expr::pow(&bilinear(&omega, u, v), 2),
                ]),
            ])
            .simplify()
        },
    };
    Ok(polarize_biquadratic(&form))
}

/// Entrywise verdicts of `a − b`.
pub fn compare_tables(a: &Table4, b: &Table4, ctx: &Context) -> Result<ZeroVerdict> {
    let mut v = Vec::new();
    for (x, y) in a
        .iter()
        .flatten()
        .flatten()
        .flatten()
        .zip(b.iter().flatten().flatten().flatten())
    {
        v.push(ctx.equal(x, y)?);
    }
    Ok(ZeroVerdict::combine(&v))
}
