//! Finite and infinitesimal isometries, the Heisenberg translations and
//! rotation/boost families in dimension five, algebra ranks and the
//! fundamental frequencies of `g` against `ω`.

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::calculus::{linalg, Matrix, PointMap, VectorField};
use crate::error::{Error, Result};
use crate::structure::{FrameMetric, SubPRStructure};
use crate::symexpr::{Expr, ZeroVerdict};

#[derive(Debug, Clone)]
pub struct IsometryVerdict {
    /// `α(f_* X_i)` for the distribution fields.
    pub preserves_d: ZeroVerdict,
    /// `A[i][j]`: component of `f_* X_{i+1}` along `X_{j+1}`.
    pub frame_transition: Matrix,
    /// `A S Aᵀ − S`.
    pub metric_preserved: Vec<Vec<ZeroVerdict>>,
    /// `λ` with `f^*α = λα`.
    pub lambda: Expr,
    /// `f^*α − λα`.
    pub conformal_alpha: ZeroVerdict,
    pub reeb_preserved: ZeroVerdict,
    /// `|det A| = 1` at every sample point.
    pub unimodular: bool,
}

impl IsometryVerdict {
    pub fn passed(&self) -> bool {
        self.preserves_d.is_zero()
            && self
                .metric_preserved
                .iter()
                .flatten()
                .all(ZeroVerdict::is_zero)
            && self.conformal_alpha.is_zero()
    }

    pub fn worst_metric(&self) -> ZeroVerdict {
        ZeroVerdict::combine(self.metric_preserved.iter().flatten())
    }
}

fn field_zero(v: &VectorField, s: &SubPRStructure) -> Result<ZeroVerdict> {
    let mut out = Vec::new();
    for c in v.coeffs() {
        out.push(s.context().is_zero(c)?);
    }
    Ok(ZeroVerdict::combine(&out))
}

/// Checks `f` with its inverse against the structure: `D` is preserved,
/// `d f` is a linear isometry of `g`, and reports `λ` and `f_* X_0`.
pub fn is_isometry(f: &PointMap, f_inv: &PointMap, s: &SubPRStructure) -> Result<IsometryVerdict> {
    let ctx = s.context();
    if f.dim() != s.dim() || f_inv.dim() != s.dim() {
        return Err(Error::Dimension(
            "map and structure dimensions differ".into(),
        ));
    }
    if !f.is_left_inverse_of(f_inv, ctx)? || !f_inv.is_left_inverse_of(f, ctx)? {
        return Err(Error::Precondition(
            "supplied inverse does not invert the map".into(),
        ));
    }
    let n2 = s.dim() - 1;
    let frame = s.frame();
    let mut alpha_parts = Vec::new();
    let mut a = linalg::zeros(n2, n2);
    for i in 1..=n2 {
        let pushed = f.pushforward(frame.field(i), f_inv);
        let comps = frame.expand(&pushed);
        alpha_parts.push(ctx.is_zero(&comps[0])?);
        a[i - 1].clone_from_slice(&comps[1..=n2]);
    }
    let sig = s.g_matrix();
    let asat = linalg::matmul(&a, &linalg::matmul(&sig, &linalg::transpose(&a)));
    let metric_preserved = asat
        .iter()
        .zip(&sig)
        .map(|(r, t)| {
            r.iter()
                .zip(t)
                .map(|(x, y)| ctx.equal(x, y))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let pulled = f.pullback_form(s.alpha(), ctx)?;
    let lambda = pulled
        .evaluate(std::slice::from_ref(s.reeb()), ctx)?
        .simplify();
    let diff = pulled.sub(&s.alpha().scale(&lambda));
    let mut parts = Vec::new();
    for (_, e) in diff.components() {
        parts.push(ctx.is_zero(e)?);
    }
    let conformal_alpha = ZeroVerdict::combine(&parts);
    let reeb_pushed = f.pushforward(s.reeb(), f_inv).sub(s.reeb());
    let reeb_preserved = field_zero(&reeb_pushed, s)?;
    let det = linalg::det(&a, ctx)?;
    let tol = ctx.plan().tolerance;
    let unimodular = ctx
        .sample(&det)?
        .iter()
        .all(|(_, v)| (v.abs() - 1.0).abs() <= tol.max(1e-9));
    Ok(IsometryVerdict {
        preserves_d: ZeroVerdict::combine(&alpha_parts),
        frame_transition: a,
        metric_preserved,
        lambda,
        conformal_alpha,
        reeb_preserved,
        unimodular,
    })
}

#[derive(Debug, Clone)]
pub struct Consequences {
    /// `λ − 1`.
    pub lambda_one: ZeroVerdict,
    /// `f_* X_0 − X_0`.
    pub reeb: ZeroVerdict,
    /// `f^* G^1 − G^1` in coordinates.
    pub extended_metric: ZeroVerdict,
}

impl Consequences {
    pub fn passed(&self) -> bool {
        self.lambda_one.is_zero() && self.reeb.is_zero() && self.extended_metric.is_zero()
    }
}

/// `λ = 1`, `f_* X_0 = X_0` and `f^* G^1 = G^1` for a map passing [`is_isometry`].
pub fn alpha_reeb_consequence(
    f: &PointMap,
    f_inv: &PointMap,
    s: &SubPRStructure,
) -> Result<Consequences> {
    let v = is_isometry(f, f_inv, s)?;
    let ctx = s.context();
    let lambda_one = ctx.equal(&v.lambda, &Expr::one())?;
    let g1 = FrameMetric::extension(s, &Expr::one())?.coordinate_matrix(s.frame());
    let pulled = f.pullback_metric(&g1);
    let mut parts = Vec::new();
    for (x, y) in pulled.iter().flatten().zip(g1.iter().flatten()) {
        parts.push(ctx.equal(x, y)?);
    }
    Ok(Consequences {
        lambda_one,
        reeb: v.reeb_preserved,
        extended_metric: ZeroVerdict::combine(&parts),
    })
}

#[derive(Debug, Clone)]
pub struct InfinitesimalVerdict {
    /// `α([V, X_i])`.
    pub preserves_d: ZeroVerdict,
    /// `(L_V g)(X_i, X_j)`.
    pub lie_metric: ZeroVerdict,
}

impl InfinitesimalVerdict {
    pub fn passed(&self) -> bool {
        self.preserves_d.is_zero() && self.lie_metric.is_zero()
    }
}

/// `α([V,X_i]) = 0` and `(L_V g)(X_i,X_j) = −g([V,X_i]_D, X_j) − g(X_i, [V,X_j]_D) = 0`.
pub fn is_infinitesimal_isometry(
    v: &VectorField,
    s: &SubPRStructure,
) -> Result<InfinitesimalVerdict> {
    let ctx = s.context();
    let n2 = s.dim() - 1;
    let brackets: Vec<Vec<Expr>> = (1..=n2)
        .map(|i| s.frame().expand(&v.lie_bracket(s.frame().field(i))))
        .collect();
    let mut d_parts = Vec::new();
    for b in &brackets {
        d_parts.push(ctx.is_zero(&b[0])?);
    }
    let mut g_parts = Vec::new();
    for i in 1..=n2 {
        for j in i..=n2 {
            let e = Expr::add([
                &brackets[i - 1][j] * &Expr::int(s.s(j) as i64),
                &brackets[j - 1][i] * &Expr::int(s.s(i) as i64),
            ]);
            g_parts.push(ctx.is_zero(&e)?);
        }
    }
    Ok(InfinitesimalVerdict {
        preserves_d: ZeroVerdict::combine(&d_parts),
        lie_metric: ZeroVerdict::combine(&g_parts),
    })
}

/// Group law in exponential coordinates `(x_1, y_1, x_2, y_2, z)`:
/// `z + z' + ½(x_1 y_1' − y_1 x_1' + x_2 y_2' − y_2 x_2')`.
pub fn bch_product(a: &[Expr], b: &[Expr]) -> Vec<Expr> {
    let mut out: Vec<Expr> = (0..4).map(|k| (&a[k] + &b[k]).simplify()).collect();
    let twist = Expr::add([
        &a[0] * &b[1],
        -(&a[1] * &b[0]),
        &a[2] * &b[3],
        -(&a[3] * &b[2]),
    ]);
    out.push(Expr::add([a[4].clone(), b[4].clone(), &Expr::rational(1, 2) * &twist]).simplify());
    out
}

fn coords5() -> Vec<Expr> {
    (0..5).map(Expr::coord).collect()
}

/// Left translation `p ↦ t·p` and its inverse `p ↦ (−t)·p`.
pub fn bch_left_translation(t: &[Expr]) -> Result<(PointMap, PointMap)> {
    if t.len() != 5 {
        return Err(Error::Dimension(
            "translations act on the five-dimensional model".into(),
        ));
    }
    let neg: Vec<Expr> = t.iter().map(|e| (-e).simplify()).collect();
    Ok((
        PointMap::new(bch_product(t, &coords5())),
        PointMap::new(bch_product(&neg, &coords5())),
    ))
}

/// The coordinate formula `p ↦ p·t` as printed for translations (a right
/// multiplication), with inverse `p ↦ p·(−t)`.
pub fn printed_translation(t: &[Expr]) -> Result<(PointMap, PointMap)> {
    if t.len() != 5 {
        return Err(Error::Dimension(
            "translations act on the five-dimensional model".into(),
        ));
    }
    let neg: Vec<Expr> = t.iter().map(|e| (-e).simplify()).collect();
    Ok((
        PointMap::new(bch_product(&coords5(), t)),
        PointMap::new(bch_product(&coords5(), &neg)),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reading {
    Literal,
    Corrected,
}

/// Number of one-parameter families listed for each signature case.
pub fn family_count(case: u8) -> usize {
    match case {
        1 | 3 => 4,
        2 => 2,
        _ => 0,
    }
}

/// Whether the printed line differs from its corrected reading.
pub fn has_correction(case: u8, index: usize) -> bool {
    case == 1 && index == 4
}

/// Member `index` (1-based) of the family for signature case 1, 2 or 3 at parameter `θ`.
pub fn appendix_family(case: u8, index: usize, theta: &Expr, reading: Reading) -> Result<PointMap> {
    let x = coords5();
    let (x1, y1, x2, y2, z) = (&x[0], &x[1], &x[2], &x[3], &x[4]);
    let (c, s) = match case {
        1 => (Expr::cos(theta), Expr::sin(theta)),
        2 if index == 2 => (Expr::cos(theta), Expr::sin(theta)),
        2 | 3 => (Expr::cosh(theta), Expr::sinh(theta)),
        _ => return Err(Error::Index(format!("family case {case}"))),
    };
    let rot = |a: &Expr, b: &Expr| [&(&c * a) - &(&s * b), &(&s * a) + &(&c * b)];
    let boost = |a: &Expr, b: &Expr| [&(&c * a) + &(&s * b), &(&s * a) + &(&c * b)];
    let comps: Vec<Expr> = match (case, index) {
        (1, 1) => {
            let [a, b] = rot(x2, y2);
            vec![a, b, x1.clone(), y1.clone(), z.clone()]
        }
        (1, 2) => {
            let [a, b] = rot(x1, y1);
            vec![a, b, x2.clone(), y2.clone(), z.clone()]
        }
        (1, 3) | (2, 2) => {
            let [a, b] = rot(x2, y2);
            vec![x1.clone(), y1.clone(), a, b, z.clone()]
        }
        (1, 4) => match reading {
            Reading::Literal => {
                let a = &(&c * x1) - &(&s * y1);
                let b = &(&s * x2) + &(&c * y2);
                vec![x2.clone(), y2.clone(), a, b, z.clone()]
            }
            Reading::Corrected => {
                let [a, b] = rot(x1, y1);
                vec![x2.clone(), y2.clone(), a, b, z.clone()]
            }
        },
        (2, 1) | (3, 1) => {
            let [a, b] = boost(x1, y1);
            vec![a, b, x2.clone(), y2.clone(), z.clone()]
        }
        (3, 2) => {
            let [a, b] = boost(x2, y2);
            vec![x1.clone(), y1.clone(), a, b, z.clone()]
        }
        (3, 3) => {
            let [a, b] = boost(x2, y2);
            vec![a, b, x1.clone(), y1.clone(), z.clone()]
        }
        (3, 4) => {
            let [a, b] = boost(x1, y1);
            vec![x2.clone(), y2.clone(), a, b, z.clone()]
        }
        _ => {
            return Err(Error::Index(format!(
                "family case {case} has no member {index}"
            )))
        }
    };
    Ok(PointMap::new(
        comps.into_iter().map(|e| e.simplify()).collect(),
    ))
}

/// Signature of the distribution frame `(X_1, Y_1, X_2, Y_2)` in each case.
pub fn case_signature(case: u8) -> Result<Vec<i32>> {
    match case {
        1 => Ok(vec![1, 1, 1, 1]),
        2 => Ok(vec![-1, 1, 1, 1]),
        3 => Ok(vec![-1, 1, -1, 1]),
        _ => Err(Error::Index(format!("family case {case}"))),
    }
}

/// `∂/∂u_param` at `u_param = 0` of map components that depend on extra
/// parameter coordinates (indices `≥ dim`), as a vector field on the chart.
pub fn tangent_at_zero(comps: &[Expr], param: usize, dim: usize, params: usize) -> VectorField {
    let values: Vec<Expr> = (0..dim + params)
        .map(|k| {
            if k < dim {
                Expr::coord(k)
            } else {
                Expr::zero()
            }
        })
        .collect();
    VectorField::new(
        comps
            .iter()
            .map(|c| c.diff(param).substitute(&values).simplify())
            .collect(),
    )
}

/// Generators `∂/∂t_k` of the left translations.
pub fn translation_generators() -> Vec<VectorField> {
    let t: Vec<Expr> = (5..10).map(Expr::coord).collect();
    let comps = bch_product(&t, &coords5());
    (5..10).map(|k| tangent_at_zero(&comps, k, 5, 5)).collect()
}

/// `d/dθ (f_θ ∘ f_0⁻¹)` at `θ = 0`; equals `d/dθ f_θ` when `f_0` is the identity.
pub fn family_generator(
    case: u8,
    index: usize,
    reading: Reading,
    s: &SubPRStructure,
) -> Result<VectorField> {
    let theta = Expr::coord(5);
    let f = appendix_family(case, index, &theta, reading)?;
    let f0 = appendix_family(case, index, &Expr::zero(), reading)?;
    let f0_inv = f0.affine_inverse(s.context())?;
    let mut inner = f0_inv.comps().to_vec();
    inner.push(theta);
    let comps: Vec<Expr> = f
        .comps()
        .iter()
        .map(|c| c.substitute(&inner).simplify())
        .collect();
    Ok(tangent_at_zero(&comps, 5, 5, 1))
}

fn as_rational(e: &Expr) -> Result<BigRational> {
    e.simplify().as_num().cloned().ok_or_else(|| {
        Error::Precondition("constant rational metric and symplectic form expected".into())
    })
}

/// Null space of an integer/rational matrix by exact row reduction.
fn null_space(mut m: Vec<Vec<BigRational>>, cols: usize) -> Vec<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = BigRational::one() / &m[row][col];
        for v in m[row].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let k = m[r][col].clone();
                for c in 0..cols {
                    let t = &m[row][c] * &k;
                    m[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Basis of `sp(ω) ∩ so(g)` acting linearly on the horizontal coordinates.
///
/// Needs the standard model: frame fields whose horizontal coordinate parts
/// are the coordinate basis, with `z` last, and constant rational `ω`.
pub fn structure_algebra(s: &SubPRStructure) -> Result<Vec<VectorField>> {
    let n2 = s.dim() - 1;
    for i in 1..=n2 {
        for a in 0..n2 {
            let want = if a + 1 == i {
                Expr::one()
            } else {
                Expr::zero()
            };
            if s.frame().field(i).coeff(a).simplify() != want {
                return Err(Error::Precondition(
                    "structure algebra needs the standard exponential-coordinate model".into(),
                ));
            }
        }
    }
    let omega: Vec<Vec<BigRational>> = s
        .omega()
        .iter()
        .map(|r| r.iter().map(as_rational).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let sig: Vec<BigRational> = (1..=n2)
        .map(|i| BigRational::from_integer(s.s(i).into()))
        .collect();
    let unknowns = n2 * n2;
    let idx = |a: usize, b: usize| a * n2 + b;
    let mut rows = Vec::new();
    for i in 0..n2 {
        for j in 0..n2 {
            // (Bᵀ S + S B)_ij = B_ji s_j + s_i B_ij
            let mut r = vec![BigRational::zero(); unknowns];
            r[idx(j, i)] += &sig[j];
            r[idx(i, j)] += &sig[i];
            rows.push(r);
            // (Bᵀ Ω + Ω B)_ij
            let mut r = vec![BigRational::zero(); unknowns];
            for a in 0..n2 {
                r[idx(a, i)] += &omega[a][j];
                r[idx(a, j)] += &omega[i][a];
            }
            rows.push(r);
        }
    }
    Ok(null_space(rows, unknowns)
        .into_iter()
        .map(|b| {
            let mut coeffs: Vec<Expr> = (0..n2)
                .map(|a| {
                    Expr::add((0..n2).map(|c| &Expr::num(b[idx(a, c)].clone()) * &Expr::coord(c)))
                        .simplify()
                })
                .collect();
            coeffs.push(Expr::zero());
            VectorField::new(coeffs)
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct AlgebraRank {
    pub rank: usize,
    pub bound: usize,
    pub within_bound: bool,
}

/// Rank at `p` of the 1-jets `(V(p), DV(p))` of verified infinitesimal isometries.
pub fn algebra_dimension(
    generators: &[VectorField],
    s: &SubPRStructure,
    p: &[f64],
) -> Result<AlgebraRank> {
    let d = s.dim();
    let cols = d + d * d;
    let mut data = Vec::with_capacity(generators.len() * cols);
    for (k, v) in generators.iter().enumerate() {
        if !is_infinitesimal_isometry(v, s)?.passed() {
            return Err(Error::Precondition(format!(
                "generator {k} is not an infinitesimal isometry"
            )));
        }
        data.extend(v.eval(p)?);
        for a in 0..d {
            for b in 0..d {
                data.push(v.coeff(a).diff(b).eval(p).map_err(Error::from)?);
            }
        }
    }
    let m = DMatrix::from_row_slice(generators.len(), cols, &data);
    let rank = if generators.is_empty() {
        0
    } else {
        m.rank(1e-9)
    };
    let n = s.n();
    let bound = (n + 1) * (n + 1);
    Ok(AlgebraRank {
        rank,
        bound,
        within_bound: rank <= bound,
    })
}

#[derive(Debug, Clone)]
pub struct FrequencyData {
    /// `J = g⁻¹ ω` on the distribution frame.
    pub j: Matrix,
    /// `J² + Id` vanishes.
    pub compatible: ZeroVerdict,
    /// Positive imaginary parts of the eigenvalues of `J(p)`, ascending.
    pub frequencies: Option<Vec<f64>>,
    pub constant: Option<bool>,
    pub block_sizes: Option<Vec<usize>>,
    pub predicted_dim: Option<usize>,
    pub bound: usize,
}

fn frequencies_at(j: &Matrix, p: &[f64]) -> Result<Vec<f64>> {
    let m = j.len();
    let vals = linalg::eval_matrix(j, p)?;
    let flat: Vec<f64> = vals.into_iter().flatten().collect();
    let jm = DMatrix::from_row_slice(m, m, &flat);
    let mut b: Vec<f64> = jm
        .complex_eigenvalues()
        .iter()
        .map(|z| z.im)
        .filter(|v| *v > 0.0)
        .collect();
    b.sort_by(f64::total_cmp);
    Ok(b)
}

const FREQ_TOL: f64 = 1e-8;

/// `J = g⁻¹ω`, the compatibility flag, and for Riemannian `g` the
/// fundamental frequencies with the count `2n + 1 + Σ n_j²`.
pub fn compatibility_and_frequencies(s: &SubPRStructure, p: &[f64]) -> Result<FrequencyData> {
    let ctx = s.context();
    let n2 = s.dim() - 1;
    let ginv: Matrix = (0..n2)
        .map(|i| {
            (0..n2)
                .map(|k| {
                    if i == k {
                        Expr::int(s.s(i + 1) as i64)
                    } else {
                        Expr::zero()
                    }
                })
                .collect()
        })
        .collect();
    let j = linalg::matmul(&ginv, s.omega());
    let j2 = linalg::matmul(&j, &j);
    let mut parts = Vec::new();
    for (a, row) in j2.iter().enumerate() {
        for (b, e) in row.iter().enumerate() {
            let target = if a == b { Expr::int(-1) } else { Expr::zero() };
            parts.push(ctx.equal(e, &target)?);
        }
    }
    let compatible = ZeroVerdict::combine(&parts);
    let n = s.n();
    let bound = (n + 1) * (n + 1);
    if !s.is_riemannian() {
        return Ok(FrequencyData {
            j,
            compatible,
            frequencies: None,
            constant: None,
            block_sizes: None,
            predicted_dim: None,
            bound,
        });
    }
    let b = frequencies_at(&j, p)?;
    let mut constant = b.len() == n;
    for q in ctx.points() {
        let bq = frequencies_at(&j, q)?;
        constant &= bq.len() == b.len()
            && bq
                .iter()
                .zip(&b)
                .all(|(x, y)| (x - y).abs() <= FREQ_TOL * (1.0 + y.abs()));
    }
    let mut blocks: Vec<usize> = Vec::new();
    let mut last: Option<f64> = None;
    for v in &b {
        match last {
            Some(l) if (v - l).abs() <= FREQ_TOL * (1.0 + l.abs()) => {
                *blocks.last_mut().unwrap() += 1
            }
            _ => blocks.push(1),
        }
        last = Some(*v);
    }
    let predicted_dim = constant.then(|| 2 * n + 1 + blocks.iter().map(|k| k * k).sum::<usize>());
    Ok(FrequencyData {
        j,
        compatible,
        frequencies: Some(b),
        constant: Some(constant),
        block_sizes: Some(blocks),
        predicted_dim,
        bound,
    })
}
