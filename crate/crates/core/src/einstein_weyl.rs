//! Einstein-Weyl residuals, the deformation pairs `(G^c, 2εcα)`, the
//! coordinate family and the symmetric-case lift.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::calculus::{linalg, Frame, KForm, Matrix, VectorField};
use crate::connection::{frame_components, weyl_connection};
use crate::curvature::{ricci, riemann};
use crate::error::{Error, Result};
use crate::structure::{FrameMetric, SubPRStructure};
use crate::symexpr::{Chart, Context, Expr, SamplingPlan, ZeroVerdict};

#[derive(Debug, Clone, PartialEq)]
pub enum PairProvenance {
    Canonical { c: Expr, epsilon: BigRational },
    CoordinateFamily { epsilon: BigRational },
    Custom,
}

/// A metric with a one-form, both written in `frame`.
#[derive(Debug, Clone)]
pub struct WeylPair {
    pub metric: FrameMetric,
    /// `η(E_i)`.
    pub eta: Vec<Expr>,
    pub eta_form: KForm,
    pub frame: Frame,
    pub provenance: PairProvenance,
}

#[derive(Debug, Clone)]
pub struct EWVerdict {
    /// `Ric_sym − (1/dim) R_G G`, frame order.
    pub residual: Vec<Vec<ZeroVerdict>>,
    pub ricci_sym: Matrix,
    pub scalar: Expr,
    pub is_einstein_weyl: bool,
    pub predicted_c: Option<Expr>,
}

impl EWVerdict {
    pub fn worst(&self) -> ZeroVerdict {
        ZeroVerdict::combine(self.residual.iter().flatten())
    }
}

fn num(r: &BigRational) -> Expr {
    Expr::num(r.clone())
}

/// `(G^c, 2εc·α)`.
pub fn canonical_pair(s: &SubPRStructure, c: &Expr, epsilon: &BigRational) -> Result<WeylPair> {
    let metric = FrameMetric::extension(s, c)?;
    let factor = Expr::mul([Expr::int(2), num(epsilon), c.clone()]).simplify();
    let eta_form = s.alpha().scale(&factor);
    let eta = frame_components(&eta_form, s.frame(), s.context())?;
    Ok(WeylPair {
        metric,
        eta,
        eta_form,
        frame: s.frame().clone(),
        provenance: PairProvenance::Canonical {
            c: c.clone(),
            epsilon: epsilon.clone(),
        },
    })
}

/// Verdicts of the conformal Einstein equation `Ric(∇)_sym = (1/m) R_G G`
/// (`m` the dimension, 3 for the equation as usually stated).
pub fn ew_residual(pair: &WeylPair, ctx: &Context) -> Result<EWVerdict> {
    let conn = weyl_connection(&pair.metric, &pair.eta, &pair.frame, ctx)?;
    let curv = riemann(&conn, &pair.frame, &pair.metric);
    let rd = ricci(&curv, ctx)?;
    let d = pair.frame.len();
    let third = Expr::rational(1, d as i64);
    let mut residual = Vec::with_capacity(d);
    for j in 0..d {
        let mut row = Vec::with_capacity(d);
        for k in 0..d {
            let e = &rd.symmetric[j][k]
                - &Expr::mul([
                    third.clone(),
                    rd.scalar.clone(),
                    pair.metric.get(j, k).clone(),
                ]);
            row.push(ctx.is_zero(&e)?);
        }
        residual.push(row);
    }
    let is_einstein_weyl = residual.iter().flatten().all(ZeroVerdict::is_zero);
    let predicted_c = match &pair.provenance {
        PairProvenance::Canonical { c, .. } => Some(c.clone()),
        _ => None,
    };
    Ok(EWVerdict {
        residual,
        ricci_sym: rd.symmetric,
        scalar: rd.scalar,
        is_einstein_weyl,
        predicted_c,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum PredictedC {
    Value(Expr),
    /// Sub-Lorentzian, κ = 0, ε² = 1: every nonzero c.
    AnyNonzero,
    NoSolution(&'static str),
}

/// Verdict that every entry of `m` vanishes.
pub fn all_zero(m: &Matrix, ctx: &Context) -> Result<ZeroVerdict> {
    let mut v = Vec::new();
    for e in m.iter().flatten() {
        v.push(ctx.is_zero(e)?);
    }
    Ok(ZeroVerdict::combine(&v))
}

fn require_symmetric_constant(s: &SubPRStructure) -> Result<Expr> {
    let hd = s.h_invariant()?;
    if !all_zero(&hd.h, s.context())?.is_zero() {
        return Err(Error::Precondition("h does not vanish".into()));
    }
    let kappa = s.kappa_dim3()?;
    for k in 0..s.dim() {
        if !s.context().is_zero(&kappa.diff(k))?.is_zero() {
            return Err(Error::Precondition("κ is not constant".into()));
        }
    }
    Ok(kappa)
}

/// The value of `c` for which `(G^c, 2εcα)` is Einstein-Weyl, when `h = 0` and `κ` is constant.
pub fn thm_ew2_predicted_c(s: &SubPRStructure, epsilon: &BigRational) -> Result<PredictedC> {
    let kappa = require_symmetric_constant(s)?;
    let kappa_zero = s.context().is_zero(&kappa)?.is_zero();
    let e2 = epsilon * epsilon;
    if s.is_riemannian() {
        if kappa_zero {
            return Ok(PredictedC::NoSolution("κ = 0 in the sub-Riemannian case"));
        }
        return Ok(PredictedC::Value(
            Expr::div(&kappa, &num(&(BigRational::one() + e2))).simplify(),
        ));
    }
    if e2.is_one() {
        return Ok(if kappa_zero {
            PredictedC::AnyNonzero
        } else {
            PredictedC::NoSolution("ε² = 1 with κ ≠ 0")
        });
    }
    if kappa_zero {
        return Ok(PredictedC::NoSolution("κ = 0 with ε² ≠ 1"));
    }
    Ok(PredictedC::Value(
        Expr::div(&kappa, &num(&(BigRational::one() - e2))).simplify(),
    ))
}

/// The printed symmetric-Ricci matrix, order `(X_1, X_2, X_0)`.
pub fn prop_ew2_expected(
    s: &SubPRStructure,
    kappa: &Expr,
    c: &Expr,
    epsilon: &BigRational,
) -> Matrix {
    let e2c = Expr::mul([num(&(epsilon * epsilon)), c.clone()]);
    let half_c = &Expr::rational(1, 2) * c;
    let c2 = &Expr::rational(1, 2) * &Expr::pow(c, 2);
    let diag = if s.is_riemannian() {
        let a = Expr::add([kappa.clone(), -&half_c, -&e2c]);
        [a.clone(), a, c2]
    } else {
        let a = Expr::add([kappa.clone(), -&half_c, e2c]);
        [a.clone(), -&a, -&c2]
    };
    let mut m = linalg::zeros(3, 3);
    for (i, d) in diag.into_iter().enumerate() {
        m[i][i] = d.simplify();
    }
    m
}

fn paper_order(m: &Matrix) -> Matrix {
    let d = m.len();
    let order: Vec<usize> = (1..d).chain(std::iter::once(0)).collect();
    order
        .iter()
        .map(|&i| order.iter().map(|&j| m[i][j].clone()).collect())
        .collect()
}

/// Entrywise verdicts of computed `Ric(∇^{εc}_α)_sym` against the printed
/// matrix, in the order `(X_1, X_2, X_0)`.
pub fn prop_ew2_matrix_check(
    s: &SubPRStructure,
    c: &Expr,
    epsilon: &BigRational,
) -> Result<Vec<Vec<ZeroVerdict>>> {
    let hd = s.h_invariant()?;
    if !all_zero(&hd.h, s.context())?.is_zero() {
        return Err(Error::Precondition("h does not vanish".into()));
    }
    let kappa = s.kappa_dim3()?;
    let pair = canonical_pair(s, c, epsilon)?;
    let v = ew_residual(&pair, s.context())?;
    let got = paper_order(&v.ricci_sym);
    let want = prop_ew2_expected(s, &kappa, c, epsilon);
    let ctx = s.context();
    got.iter()
        .zip(&want)
        .map(|(g, w)| g.iter().zip(w).map(|(a, b)| ctx.equal(a, b)).collect())
        .collect()
}

/// The coordinate Weyl pair
/// `G_ε = −(dx − x dy)² + dy² + (1/(1−ε²))(dz − x dy)²`, `η_ε = (2ε/(1−ε²))(dz − x dy)`.
pub fn coordinate_family(epsilon: &BigRational, plan: SamplingPlan) -> Result<(WeylPair, Context)> {
    let one_minus = BigRational::one() - epsilon * epsilon;
    if one_minus.is_zero() {
        return Err(Error::Precondition("ε² = 1 is excluded".into()));
    }
    let ctx = Context::new(Chart::uniform(vec!["x", "y", "z"], -1.0, 1.0)?, plan);
    let x = Expr::coord(0);
    let a = [Expr::one(), -&x, Expr::zero()];
    let b = [Expr::zero(), Expr::one(), Expr::zero()];
    let e = [Expr::zero(), -&x, Expr::one()];
    let k = num(&(BigRational::one() / &one_minus));
    let g: Matrix = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| {
                    Expr::add([
                        -(&a[i] * &a[j]),
                        &b[i] * &b[j],
                        Expr::mul([k.clone(), e[i].clone(), e[j].clone()]),
                    ])
                    .simplify()
                })
                .collect()
        })
        .collect();
    let eta_coef = num(&(BigRational::from_integer(2.into()) * epsilon / &one_minus));
    let eta: Vec<Expr> = e.iter().map(|v| (&eta_coef * v).simplify()).collect();
    let frame = Frame::coordinate(&ctx)?;
    let pair = WeylPair {
        metric: FrameMetric::new(g),
        eta_form: KForm::one_form(eta.clone()),
        eta,
        frame,
        provenance: PairProvenance::CoordinateFamily {
            epsilon: epsilon.clone(),
        },
    };
    Ok((pair, ctx))
}

/// Base data of a symmetric structure: `(N, g̃)` with an orthonormal frame
/// and a potential `θ` of `ω̃`.
#[derive(Debug, Clone)]
pub struct QuotientData {
    pub chart: Chart,
    pub metric: Matrix,
    pub frame: Vec<VectorField>,
    pub signature: Vec<i32>,
    pub theta: KForm,
    pub omega: KForm,
}

/// Constant-curvature model bases with their curvature: `"euclidean"` (0),
/// `"hyperbolic"` (−1, upper half plane) and `"spherical"` (+1, stereographic).
pub fn model_base(name: &str) -> Result<(QuotientData, Expr)> {
    let unit = || Chart::uniform(vec!["x", "y"], -1.0, 1.0);
    let (chart, conformal, frame, theta, k): (Chart, &str, [[&str; 2]; 2], [&str; 2], i64) =
        match name {
            "euclidean" => (unit()?, "1", [["1", "0"], ["0", "1"]], ["-y/2", "x/2"], 0),
            "hyperbolic" => (
                Chart::new(vec!["x", "y"], vec![(-1.0, 1.0), (0.5, 2.0)])?,
                "1/y^2",
                [["y", "0"], ["0", "y"]],
                ["1/y", "0"],
                -1,
            ),
            "spherical" => (
                unit()?,
                "4/(1 + x^2 + y^2)^2",
                [["(1 + x^2 + y^2)/2", "0"], ["0", "(1 + x^2 + y^2)/2"]],
                ["-2*y/(1 + x^2 + y^2)", "2*x/(1 + x^2 + y^2)"],
                1,
            ),
            _ => return Err(Error::Precondition(format!("unknown model base '{name}'"))),
        };
    let e = crate::symexpr::parse(conformal, &chart)?;
    let mut omega = KForm::zero(2, 2);
    // the area form of g̃
    omega.set(&[0, 1], e.clone());
    let data = QuotientData {
        metric: vec![vec![e.clone(), Expr::zero()], vec![Expr::zero(), e]],
        frame: frame
            .iter()
            .map(|f| VectorField::parse(f, &chart))
            .collect::<Result<_>>()?,
        signature: vec![1, 1],
        theta: KForm::parse_one_form(&theta, &chart)?,
        omega,
        chart,
    };
    Ok((data, Expr::int(k)))
}

/// Lifts the base to `N × ℝ_z` with `α = dz − θ` and `X_i = X̃_i + θ(X̃_i) ∂_z`.
pub fn lift_structure(q: &QuotientData, plan: SamplingPlan) -> Result<SubPRStructure> {
    let base = Context::new(q.chart.clone(), plan);
    let m = q.chart.dim();
    if q.frame.len() != m || q.signature.len() != m || q.metric.len() != m {
        return Err(Error::Dimension(
            "base frame, signature and metric must match the chart".into(),
        ));
    }
    let dtheta = q.theta.exterior_derivative().sub(&q.omega);
    for (_, e) in dtheta.components() {
        if !base.is_zero(e)?.is_zero() {
            return Err(Error::Precondition("dθ differs from ω̃".into()));
        }
    }
    let om = crate::structure::pairing_matrix(&q.omega, &q.frame, &base)?;
    if !base.is_nonzero(&linalg::pfaffian(&om))? {
        return Err(Error::Precondition("ω̃ is degenerate".into()));
    }
    for (i, fi) in q.frame.iter().enumerate() {
        for (j, fj) in q.frame.iter().enumerate() {
            let gij = linalg::matvec(&q.metric, fj.coeffs());
            let v = Expr::add(fi.coeffs().iter().zip(&gij).map(|(a, b)| a * b));
            let want = if i == j {
                Expr::int(q.signature[i] as i64)
            } else {
                Expr::zero()
            };
            if !base.equal(&v, &want)?.is_zero() {
                return Err(Error::Precondition(format!(
                    "base frame is not orthonormal at ({i},{j})"
                )));
            }
        }
    }
    let chart = q.chart.extended("z", (-1.0, 1.0))?;
    let ctx = Context::new(chart, plan);
    let theta = q.theta.dense_one_form();
    let frame = q
        .frame
        .iter()
        .map(|f| {
            let mut coeffs = f.coeffs().to_vec();
            coeffs.push(Expr::add(f.coeffs().iter().zip(&theta).map(|(a, b)| a * b)).simplify());
            VectorField::new(coeffs)
        })
        .collect();
    SubPRStructure::build(ctx, frame, q.signature.clone())
}

/// Gauss curvature of a two-dimensional metric from an orthonormal frame
/// built by Gram-Schmidt from `∂_u, ∂_v`.
pub fn gauss_curvature(metric: &Matrix, ctx: &Context) -> Result<Expr> {
    if ctx.dim() != 2 || metric.len() != 2 {
        return Err(Error::Dimension(
            "Gauss curvature needs a two-dimensional chart".into(),
        ));
    }
    let det = linalg::det(metric, ctx)?;
    if !ctx.is_nonzero(&det)? {
        return Err(Error::DegenerateMetric("base metric".into()));
    }
    let (p, q) = if ctx.is_nonzero(&metric[0][0])? {
        (0, 1)
    } else {
        (1, 0)
    };
    let e = metric[p][p].clone();
    let f = metric[p][q].clone();
    if !ctx.is_nonzero(&e)? {
        return Err(Error::DegenerateMetric(
            "both coordinate fields are null".into(),
        ));
    }
    let sign = |x: &Expr| -> Result<i64> {
        Ok(if ctx.sample(x)?.first().is_some_and(|(_, v)| *v < 0.0) {
            -1
        } else {
            1
        })
    };
    let s1 = sign(&e)?;
    let ed = (&e * &det).simplify();
    let s2 = sign(&ed)?;
    let mut e1 = vec![Expr::zero(), Expr::zero()];
    e1[p] = Expr::div(&Expr::one(), &Expr::sqrt(&(&Expr::int(s1) * &e))).simplify();
    // g(E∂_q − F∂_p, E∂_q − F∂_p) = E·det
    let norm = Expr::sqrt(&(&Expr::int(s2) * &ed));
    let mut e2 = vec![Expr::zero(), Expr::zero()];
    e2[q] = Expr::div(&e, &norm).simplify();
    e2[p] = Expr::div(&(-&f), &norm).simplify();
    let lorentzian = s1 * s2 < 0;
    let fields = if s2 < 0 {
        vec![VectorField::new(e2), VectorField::new(e1)]
    } else {
        vec![VectorField::new(e1), VectorField::new(e2)]
    };
    let frame = Frame::new(fields, ctx)?;
    let a = frame.c(0, 1, 0).clone();
    let b = frame.c(0, 1, 1).clone();
    let k = if lorentzian {
        Expr::add([
            frame.apply(0, &b),
            frame.apply(1, &a),
            Expr::pow(&a, 2),
            -Expr::pow(&b, 2),
        ])
    } else {
        Expr::add([
            frame.apply(0, &b),
            -frame.apply(1, &a),
            -Expr::pow(&a, 2),
            -Expr::pow(&b, 2),
        ])
    };
    Ok(k.simplify())
}

#[derive(Debug, Clone)]
pub struct SymmetricFlags {
    pub h_zero: ZeroVerdict,
    pub lie_reeb_omega_zero: ZeroVerdict,
    /// Dimension 3 only: `h = 0` and `κ = 0`.
    pub flat: Option<bool>,
}

pub fn symmetric_case_check(s: &SubPRStructure) -> Result<SymmetricFlags> {
    let ctx = s.context();
    let hd = s.h_invariant()?;
    let h_zero = all_zero(&hd.h, ctx)?;
    let lie_reeb_omega_zero = all_zero(&s.lie_reeb_omega(), ctx)?;
    let flat = if s.dim() == 3 {
        let k = s.kappa_dim3()?;
        Some(h_zero.is_zero() && ctx.is_zero(&k)?.is_zero())
    } else {
        None
    };
    Ok(SymmetricFlags {
        h_zero,
        lie_reeb_omega_zero,
        flat,
    })
}

/// Parses a rational like `1/2`, `-3` or `0.25`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Precondition(format!("'{t}' is not a rational number"));
    if let Some((n, d)) = t.split_once('/') {
        let n: num_bigint::BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: num_bigint::BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches('-'), fp);
        let n: num_bigint::BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(num_bigint::BigInt::from(10), fp.len());
        let r = BigRational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: num_bigint::BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}
