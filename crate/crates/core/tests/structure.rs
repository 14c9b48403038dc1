#![allow(clippy::needless_range_loop)]

use subriem::builtins::{builtin, NAMES};
use subriem::calculus::{KForm, VectorField};
use subriem::structure::{exterior_power_metric, FrameMetric, SubPRStructure};
use subriem::symexpr::{parse, Chart, Context, Expr, SamplingPlan};
use subriem::Error;

fn s(name: &str) -> SubPRStructure {
    builtin(name, SamplingPlan::default()).unwrap()
}

fn build(
    names: Vec<&str>,
    dom: Vec<(f64, f64)>,
    frame: &[&[&str]],
    sig: Vec<i32>,
) -> Result<SubPRStructure, Error> {
    let chart = Chart::new(names, dom)?;
    let fields = frame
        .iter()
        .map(|f| VectorField::parse(f, &chart))
        .collect::<Result<Vec<_>, _>>()?;
    SubPRStructure::build(Context::new(chart, SamplingPlan::default()), fields, sig)
}

fn eq(st: &SubPRStructure, a: &Expr, b: &Expr) -> bool {
    st.context().equal(a, b).unwrap().is_zero()
}

fn ex(st: &SubPRStructure, t: &str) -> Expr {
    parse(t, st.context().chart()).unwrap()
}

#[test]
fn heisenberg_normal_form() {
    let st = s("heisenberg3-riem");
    let want = KForm::parse_one_form(&["y/2", "-x/2", "1"], st.context().chart()).unwrap();
    for k in 0..3 {
        assert!(eq(&st, &st.alpha().component(&[k]), &want.component(&[k])));
    }
    assert_eq!(
        st.reeb().coeffs(),
        &[Expr::zero(), Expr::zero(), Expr::one()]
    );
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let want = if (i, j, k) == (1, 2, 0) {
                    Expr::one()
                } else if (i, j, k) == (2, 1, 0) {
                    Expr::int(-1)
                } else {
                    Expr::zero()
                };
                assert!(eq(&st, st.c(i, j, k), &want), "c_{i}{j}^{k}");
            }
        }
    }
    // d(dz + (y/2)dx − (x/2)dy) = −dx∧dy
    assert!(eq(
        &st,
        &st.alpha().exterior_derivative().component(&[0, 1]),
        &Expr::int(-1)
    ));
}

#[test]
fn hyperbolic_lift_normal_form() {
    let st = s("hyperbolic-lift");
    assert!(eq(&st, &st.alpha().component(&[0]), &ex(&st, "-1/y")));
    assert!(eq(&st, &st.alpha().component(&[2]), &Expr::one()));
    assert!(eq(&st, st.c(1, 2, 1), &Expr::int(-1)));
    assert!(eq(&st, st.c(1, 2, 0), &Expr::one()));
    for i in 1..3 {
        for k in 0..3 {
            assert!(eq(&st, st.c(0, i, k), &Expr::zero()));
        }
    }
    assert!(eq(&st, &st.kappa_dim3().unwrap(), &Expr::int(-1)));
    assert!(eq(&st, &st.kappa_general(1, 2).unwrap(), &Expr::int(-1)));
}

#[test]
fn non_contact_frame_is_rejected() {
    let r = build(
        vec!["x", "y", "z"],
        vec![(-1.0, 1.0); 3],
        &[&["1", "0", "0"], &["0", "1", "0"]],
        vec![1, 1],
    );
    assert!(matches!(r, Err(Error::NotContact)));
}

#[test]
fn sign_change_is_rejected() {
    // dα0 vanishes along x = 0 and changes sign across it
    let r = build(
        vec!["x", "y", "z"],
        vec![(-1.0, 1.0); 3],
        &[&["1", "0", "0"], &["0", "1", "x^2/2"]],
        vec![1, 1],
    );
    assert!(matches!(r, Err(Error::SignChange(_))));
}

#[test]
fn constant_c122_gives_minus_a_squared() {
    // [X1, X2] = X0 + 2 X2
    let st = build(
        vec!["x", "y", "z"],
        vec![(-1.0, 1.0); 3],
        &[&["1", "-2*y", "-y"], &["0", "1", "0"]],
        vec![1, 1],
    )
    .unwrap();
    assert!(eq(&st, st.c(1, 2, 2), &Expr::int(2)));
    assert!(eq(&st, &st.kappa_dim3().unwrap(), &Expr::int(-4)));
}

#[test]
fn h_matrix_dim3() {
    for name in ["twisted-heisenberg", "heisenberg3-riem", "sphere-lift"] {
        let st = s(name);
        let hd = st.h_invariant().unwrap();
        let gamma = st.c(0, 1, 2) + st.c(0, 2, 1);
        let want = [
            [-st.c(0, 1, 1), &Expr::rational(-1, 2) * &gamma],
            [&Expr::rational(-1, 2) * &gamma, -st.c(0, 2, 2)],
        ];
        for i in 0..2 {
            for j in 0..2 {
                assert!(eq(&st, &hd.h[i][j], &want[i][j]), "{name} h[{i}][{j}]");
                assert!(eq(
                    &st,
                    &hd.h_sharp[i][j],
                    &(&hd.h[i][j] * &Expr::int(st.s(i + 1) as i64))
                ));
            }
        }
    }
    let tw = s("twisted-heisenberg").h_invariant().unwrap();
    assert!(tw.h.iter().flatten().any(|e| !e.simplify().is_const_zero()));
}

#[test]
fn corpus_identities() {
    for name in NAMES {
        let st = s(name);
        assert!(st.check_omega_identity().unwrap(), "{name}");
        for i in 1..st.dim() {
            assert!(eq(
                &st,
                &st.alpha()
                    .evaluate(&[st.frame().field(i).clone()], st.context())
                    .unwrap(),
                &Expr::zero()
            ));
            assert!(eq(&st, st.c(0, i, 0), &Expr::zero()));
            for j in 1..st.dim() {
                if i != j {
                    let a = st.kappa_general(i, j).unwrap();
                    let b = st.kappa_general(j, i).unwrap();
                    assert!(eq(&st, &a, &b), "{name} κ({i},{j})");
                }
            }
        }
        assert!(eq(
            &st,
            &st.alpha()
                .evaluate(&[st.reeb().clone()], st.context())
                .unwrap(),
            &Expr::one()
        ));
        if st.dim() == 3 {
            assert!(eq(&st, st.c(1, 2, 0), &Expr::one()), "{name}");
            assert!(
                eq(
                    &st,
                    &st.kappa_general(1, 2).unwrap(),
                    &st.kappa_dim3().unwrap()
                ),
                "{name}"
            );
        }
    }
}

#[test]
fn flat_dim5_kappa_vanishes() {
    let st = s("heisenberg5-case1");
    for i in 1..5 {
        for j in i + 1..5 {
            assert!(st.kappa_general(i, j).unwrap().simplify().is_const_zero());
        }
    }
    assert!(st.kappa_dim3().is_err());
}

#[test]
fn extended_metrics() {
    let st = s("heisenberg3-lor");
    let g = FrameMetric::extension(&st, &Expr::int(-2)).unwrap();
    assert_eq!(g.get(0, 0), &Expr::int(-2));
    assert_eq!(g.get(1, 1), &Expr::int(-1));
    assert_eq!(g.get(2, 2), &Expr::one());
    assert!(FrameMetric::extension(&st, &Expr::zero()).is_err());
    assert!(FrameMetric::extension(&st, &ex(&st, "exp(z)")).is_ok());
    let (idx, m) = exterior_power_metric(&[1, 1, 1, 1], 2);
    assert_eq!(idx.len(), 6);
    assert!((0..6).all(|a| m[a][a] == Expr::one()));
    let (_, m) = exterior_power_metric(&[-1, 1], 2);
    assert_eq!(m[0][0], Expr::int(-1));
}

#[test]
fn orientation_flip() {
    for name in [
        "heisenberg3-riem",
        "heisenberg3-lor",
        "twisted-heisenberg",
        "hyperbolic-lift",
    ] {
        let st = s(name);
        let fl = st.orientation_flip().unwrap();
        for k in 0..3 {
            assert!(
                eq(&st, fl.reeb().coeff(k), &(-st.reeb().coeff(k))),
                "{name}"
            );
        }
        for c in [Expr::one(), Expr::int(3)] {
            let a = FrameMetric::extension(&st, &c)
                .unwrap()
                .coordinate_matrix(st.frame());
            let b = FrameMetric::extension(&fl, &c)
                .unwrap()
                .coordinate_matrix(fl.frame());
            for (x, y) in a.iter().flatten().zip(b.iter().flatten()) {
                assert!(eq(&st, x, y), "{name}: G^c depends on orientation");
            }
        }
        let h0 = st.h_invariant().unwrap().h;
        let h1 = fl.h_invariant().unwrap().h;
        let zero0 = h0.iter().flatten().all(|e| eq(&st, e, &Expr::zero()));
        let zero1 = h1.iter().flatten().all(|e| eq(&st, e, &Expr::zero()));
        assert_eq!(zero0, zero1);
    }
    assert!(matches!(
        s("heisenberg5-case1").orientation_flip(),
        Err(Error::SignObstruction)
    ));
}
