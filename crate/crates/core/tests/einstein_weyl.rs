use num_rational::BigRational;
use subriem::builtins::builtin;
use subriem::calculus::{KForm, VectorField};
use subriem::einstein_weyl::{
    canonical_pair, coordinate_family, ew_residual, gauss_curvature, lift_structure, model_base,
    parse_rational, prop_ew2_matrix_check, symmetric_case_check, thm_ew2_predicted_c, PredictedC,
    QuotientData,
};
use subriem::structure::SubPRStructure;
use subriem::symexpr::{parse, Chart, Context, Expr, SamplingPlan};
use subriem::Error;

fn s(name: &str) -> SubPRStructure {
    builtin(name, SamplingPlan::default()).unwrap()
}

fn q(t: &str) -> BigRational {
    parse_rational(t).unwrap()
}

fn ew(st: &SubPRStructure, c: &Expr, eps: &str) -> bool {
    let pair = canonical_pair(st, c, &q(eps)).unwrap();
    ew_residual(&pair, st.context()).unwrap().is_einstein_weyl
}

#[test]
fn flat_lorentzian_any_c_at_unit_epsilon() {
    let st = s("heisenberg3-lor");
    assert_eq!(
        thm_ew2_predicted_c(&st, &q("1")).unwrap(),
        PredictedC::AnyNonzero
    );
    for c in [Expr::rational(1, 2), Expr::int(2), Expr::int(-3)] {
        assert!(ew(&st, &c, "1"));
        assert!(ew(&st, &c, "-1"));
        assert!(!ew(&st, &c, "1/2"));
    }
    let pair = canonical_pair(&st, &Expr::int(2), &q("1")).unwrap();
    assert_eq!(pair.eta[0], Expr::int(4));
}

#[test]
fn hyperbolic_lift_family() {
    let st = s("hyperbolic-lift");
    assert_eq!(
        thm_ew2_predicted_c(&st, &q("1")).unwrap(),
        PredictedC::Value(Expr::rational(-1, 2))
    );
    for eps in ["0", "1/2", "1", "2"] {
        let PredictedC::Value(c) = thm_ew2_predicted_c(&st, &q(eps)).unwrap() else {
            panic!()
        };
        assert!(ew(&st, &c, eps), "ε = {eps}");
        assert!(!ew(&st, &(&c + &Expr::rational(1, 10)), eps));
    }
    let pair = canonical_pair(&st, &Expr::rational(-4, 5), &q("1/2")).unwrap();
    assert_eq!(pair.eta[0], Expr::rational(-4, 5));
}

#[test]
fn lorentzian_curved_family() {
    let st = s("berger-lorentz");
    assert_eq!(st.kappa_dim3().unwrap(), Expr::one());
    assert_eq!(
        thm_ew2_predicted_c(&st, &q("0")).unwrap(),
        PredictedC::Value(Expr::one())
    );
    assert!(matches!(
        thm_ew2_predicted_c(&st, &q("1")).unwrap(),
        PredictedC::NoSolution(_)
    ));
    for eps in ["0", "1/2", "2"] {
        let PredictedC::Value(c) = thm_ew2_predicted_c(&st, &q(eps)).unwrap() else {
            panic!()
        };
        assert!(ew(&st, &c, eps), "ε = {eps}");
    }
}

#[test]
fn flat_riemannian_has_no_solution() {
    let st = s("heisenberg3-riem");
    assert!(matches!(
        thm_ew2_predicted_c(&st, &q("0")).unwrap(),
        PredictedC::NoSolution(_)
    ));
    assert!(!ew(&st, &Expr::one(), "0"));
    let twisted = s("twisted-heisenberg");
    assert!(matches!(
        thm_ew2_predicted_c(&twisted, &q("0")),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn printed_ricci_matrices() {
    for name in [
        "heisenberg3-riem",
        "heisenberg3-lor",
        "hyperbolic-lift",
        "hyperbolic-lift-lor",
        "sphere-lift",
    ] {
        let st = s(name);
        for eps in ["0", "1", "1/3"] {
            for c in [Expr::one(), Expr::int(-2)] {
                let m = prop_ew2_matrix_check(&st, &c, &q(eps)).unwrap();
                assert!(
                    m.iter().flatten().all(|v| v.is_zero()),
                    "{name} ε={eps} c={c:?}"
                );
            }
        }
    }
    assert!(prop_ew2_matrix_check(&s("twisted-heisenberg"), &Expr::one(), &q("0")).is_err());
}

#[test]
fn coordinate_family_as_printed() {
    let (pair, ctx) = coordinate_family(&q("1/2"), SamplingPlan::default()).unwrap();
    assert_eq!(pair.metric.get(2, 2), &Expr::rational(4, 3));
    assert_eq!(pair.eta[2], Expr::rational(4, 3));
    let v = ew_residual(&pair, &ctx).unwrap();
    // the printed family is the canonical pair of berger-lorentz with c = 1/(1−ε²)
    assert!(v.is_einstein_weyl);
    let (zero, _) = coordinate_family(&q("0"), SamplingPlan::default()).unwrap();
    assert!(zero.eta.iter().all(Expr::is_const_zero));
    assert!(coordinate_family(&q("-1"), SamplingPlan::default()).is_err());
}

fn base(name: &str) -> (QuotientData, Expr) {
    let (chart, g, frame, theta, omega, k) = match name {
        "euclid" => (
            Chart::uniform(vec!["x", "y"], -1.0, 1.0).unwrap(),
            "1",
            [["1", "0"], ["0", "1"]],
            ["-y/2", "x/2"],
            "1",
            "0",
        ),
        "hyperbolic" => (
            Chart::new(vec!["x", "y"], vec![(-1.0, 1.0), (0.5, 2.0)]).unwrap(),
            "1/y^2",
            [["y", "0"], ["0", "y"]],
            ["1/y", "0"],
            "1/y^2",
            "-1",
        ),
        _ => (
            Chart::uniform(vec!["x", "y"], -1.0, 1.0).unwrap(),
            "4/(1 + x^2 + y^2)^2",
            [["(1 + x^2 + y^2)/2", "0"], ["0", "(1 + x^2 + y^2)/2"]],
            ["-2*y/(1 + x^2 + y^2)", "2*x/(1 + x^2 + y^2)"],
            "4/(1 + x^2 + y^2)^2",
            "1",
        ),
    };
    let p = |t: &str| parse(t, &chart).unwrap();
    let conf = p(g);
    let metric = vec![vec![conf.clone(), Expr::zero()], vec![Expr::zero(), conf]];
    let mut omega_form = KForm::zero(2, 2);
    omega_form.set(&[0, 1], p(omega));
    let data = QuotientData {
        metric,
        frame: frame
            .iter()
            .map(|f| VectorField::parse(f, &chart).unwrap())
            .collect(),
        signature: vec![1, 1],
        theta: KForm::parse_one_form(&theta, &chart).unwrap(),
        omega: omega_form,
        chart: chart.clone(),
    };
    (data, p(k))
}

/// Brioschi formula for `E(du² + dv²)`: `K = −Δ(ln E) / (2E)`.
fn conformal_gauss(e: &Expr) -> Expr {
    let l = Expr::ln(e);
    let lap = &l.diff(0).diff(0) + &l.diff(1).diff(1);
    Expr::div(&(-&lap), &(&Expr::int(2) * e)).simplify()
}

#[test]
fn lift_matches_base_curvature() {
    for name in ["euclid", "hyperbolic", "sphere"] {
        let (data, k) = base(name);
        let ctx = Context::new(data.chart.clone(), SamplingPlan::default());
        let kg = gauss_curvature(&data.metric, &ctx).unwrap();
        assert!(ctx.equal(&kg, &k).unwrap().is_zero(), "{name}: {kg:?}");
        assert!(ctx
            .equal(&kg, &conformal_gauss(&data.metric[0][0]))
            .unwrap()
            .is_zero());
        let lift = lift_structure(&data, SamplingPlan::default()).unwrap();
        let kappa = lift.kappa_dim3().unwrap();
        assert!(
            lift.context().equal(&kappa, &k).unwrap().is_zero(),
            "{name}: κ = {kappa:?}"
        );
        let flags = symmetric_case_check(&lift).unwrap();
        assert!(flags.h_zero.is_zero() && flags.lie_reeb_omega_zero.is_zero());
        assert_eq!(flags.flat, Some(name == "euclid"));
        for i in 1..3 {
            for k in 0..3 {
                assert!(lift.context().is_zero(lift.c(0, i, k)).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn lift_rejects_wrong_potential() {
    let (mut data, _) = base("hyperbolic");
    data.theta = KForm::parse_one_form(&["0", "x"], &data.chart).unwrap();
    assert!(matches!(
        lift_structure(&data, SamplingPlan::default()),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn lorentzian_base_curvature() {
    // −y^{-2} dx² + y^{-2} dy²: Lorentzian constant curvature
    let chart = Chart::new(vec!["x", "y"], vec![(-1.0, 1.0), (0.5, 2.0)]).unwrap();
    let ctx = Context::new(chart, SamplingPlan::default());
    let p = |t: &str| parse(t, ctx.chart()).unwrap();
    let g = vec![
        vec![p("-1/y^2"), Expr::zero()],
        vec![Expr::zero(), p("1/y^2")],
    ];
    let k = gauss_curvature(&g, &ctx).unwrap();
    let hyp = s("hyperbolic-lift-lor");
    let kappa = hyp.kappa_dim3().unwrap();
    assert!(
        ctx.equal(&k, &kappa).unwrap().is_zero(),
        "{k:?} vs {kappa:?}"
    );
}

#[test]
fn symmetric_flags() {
    let flat = symmetric_case_check(&s("heisenberg3-riem")).unwrap();
    assert_eq!(flat.flat, Some(true));
    let tw = symmetric_case_check(&s("twisted-heisenberg")).unwrap();
    assert!(!tw.h_zero.is_zero());
    let hyp = symmetric_case_check(&s("hyperbolic-lift")).unwrap();
    assert!(hyp.h_zero.is_zero());
    assert_eq!(hyp.flat, Some(false));
}

#[test]
fn model_bases_agree_with_hand_built_ones() {
    for (model, local) in [
        ("euclidean", "euclid"),
        ("hyperbolic", "hyperbolic"),
        ("spherical", "sphere"),
    ] {
        let (a, ka) = model_base(model).unwrap();
        let (b, kb) = base(local);
        assert_eq!(ka, kb);
        assert_eq!(a.metric, b.metric);
        let lift = lift_structure(&a, SamplingPlan::default()).unwrap();
        assert!(lift
            .context()
            .equal(&lift.kappa_dim3().unwrap(), &ka)
            .unwrap()
            .is_zero());
    }
    assert!(model_base("torus").is_err());
}
