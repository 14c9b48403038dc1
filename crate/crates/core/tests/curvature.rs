#![allow(clippy::needless_range_loop)]

use subriem::builtins::builtin;
use subriem::curvature::{
    compare_tables, decomposition_residual, extended_curvature, plane_sectional,
    polarize_biquadratic, r_d_tensor, ricci, sectional, symmetry_report, FnBiquadratic,
    TensorDiagonal,
};
use subriem::structure::SubPRStructure;
use subriem::symexpr::{parse, Expr, SamplingPlan};
use subriem::Error;

fn s(name: &str) -> SubPRStructure {
    builtin(name, SamplingPlan::default()).unwrap()
}

fn ex(st: &SubPRStructure, t: &str) -> Expr {
    parse(t, st.context().chart()).unwrap().simplify()
}

#[test]
fn flat_heisenberg_sectional_values() {
    let st = s("heisenberg3-riem");
    let (_, curv) = extended_curvature(&st, &Expr::one()).unwrap();
    assert_eq!(curv.lowered(1, 2, 2, 1), &Expr::rational(-3, 4));
    assert_eq!(curv.lowered(0, 1, 1, 0), &Expr::rational(1, 4));
    assert_eq!(
        sectional(&curv, 1, 2, st.context()).unwrap(),
        Expr::rational(-3, 4)
    );
    let rep = symmetry_report(&curv, st.context()).unwrap();
    assert!(
        rep.antisymmetry.is_zero() && rep.first_bianchi.is_zero() && rep.pair_symmetry.is_zero()
    );
}

#[test]
fn hyperbolic_lift_sectional() {
    let st = s("hyperbolic-lift");
    let (_, curv) = extended_curvature(&st, &Expr::one()).unwrap();
    let k = sectional(&curv, 1, 2, st.context()).unwrap();
    assert!(st
        .context()
        .equal(&k, &Expr::rational(-7, 4))
        .unwrap()
        .is_zero());
}

#[test]
fn null_plane_is_rejected() {
    let st = s("heisenberg3-lor");
    let (_, curv) = extended_curvature(&st, &Expr::one()).unwrap();
    let u = vec![Expr::zero(), Expr::one(), Expr::one()];
    let v = vec![Expr::one(), Expr::zero(), Expr::zero()];
    // X_1 + X_2 is null and orthogonal to X_0
    assert!(matches!(
        plane_sectional(&curv, &u, &v, st.context()),
        Err(Error::DegeneratePlane(..))
    ));
    let w = vec![Expr::zero(), Expr::one(), Expr::zero()];
    assert!(plane_sectional(&curv, &u, &w, st.context()).is_ok());
}

#[test]
fn decomposition_on_corpus() {
    let names = [
        "heisenberg3-riem",
        "heisenberg3-lor",
        "hyperbolic-lift",
        "hyperbolic-lift-lor",
        "sphere-lift",
        "twisted-heisenberg",
        "twisted-heisenberg-lor",
        "heisenberg5-case3",
    ];
    for name in names {
        let st = s(name);
        for c in ["1", "2", "-1", "exp(z)"] {
            let c = ex(&st, c);
            for p in decomposition_residual(&st, &c).unwrap() {
                assert!(
                    p.verdict.is_zero(),
                    "{name} c={c:?} pair {:?}: {:?}",
                    p.pair,
                    p.verdict
                );
            }
        }
    }
}

#[test]
fn flat_dim5_pairs() {
    let st = s("heisenberg5-case1");
    let res = decomposition_residual(&st, &Expr::one()).unwrap();
    let find = |i, j| res.iter().find(|p| p.pair == (i, j)).unwrap();
    assert_eq!(find(1, 2).kappa_c, Expr::rational(-3, 4));
    assert_eq!(find(1, 3).kappa_c, Expr::zero());
}

#[test]
fn special_c_removes_correction() {
    let st = s("twisted-heisenberg");
    let hd = st.h_invariant().unwrap();
    let ctx = st.context();
    let d = &hd.det_h_sharp;
    let neg = ctx.sample(d).unwrap();
    assert!(
        neg.iter().all(|(_, v)| *v < 0.0),
        "det h♯ should be negative"
    );
    let c = Expr::sqrt(&(&Expr::rational(-4, 3) * d)).simplify();
    let (_, curv) = extended_curvature(&st, &c).unwrap();
    let kappa = st.kappa_dim3().unwrap();
    assert!(ctx
        .equal(curv.lowered(1, 2, 2, 1), &kappa)
        .unwrap()
        .is_zero());
}

#[test]
fn ricci_flat_heisenberg() {
    let st = s("heisenberg3-riem");
    let (_, curv) = extended_curvature(&st, &Expr::one()).unwrap();
    let rd = ricci(&curv, st.context()).unwrap();
    let want = [
        [Expr::rational(1, 2), Expr::zero(), Expr::zero()],
        [Expr::zero(), Expr::rational(-1, 2), Expr::zero()],
        [Expr::zero(), Expr::zero(), Expr::rational(-1, 2)],
    ];
    for j in 0..3 {
        for k in 0..3 {
            assert_eq!(rd.ricci[j][k], want[j][k], "{j}{k}");
        }
    }
}

#[test]
fn polarization_recovers_curvature() {
    let st = s("heisenberg3-riem");
    let (_, curv) = extended_curvature(&st, &Expr::one()).unwrap();
    let back = polarize_biquadratic(&TensorDiagonal(curv.lowered_table()));
    assert!(compare_tables(&back, curv.lowered_table(), st.context())
        .unwrap()
        .is_zero());

    let zero = polarize_biquadratic(&FnBiquadratic {
        dim: 4,
        f: |_: &[Expr], _: &[Expr]| Expr::zero(),
    });
    assert!(zero
        .iter()
        .flatten()
        .flatten()
        .flatten()
        .all(Expr::is_const_zero));

    // B = ω(X,Y)² on a standard symplectic plane pair
    let om = |u: &[Expr], v: &[Expr]| -> Expr {
        Expr::pow(&(&(&u[0] * &v[1]) - &(&u[1] * &v[0])), 2).simplify()
    };
    let t = polarize_biquadratic(&FnBiquadratic { dim: 2, f: om });
    assert_eq!(t[0][1][1][0], Expr::one());
}

#[test]
fn r_d_is_c_independent() {
    let st = s("twisted-heisenberg");
    let a = r_d_tensor(&st, &Expr::one()).unwrap();
    let b = r_d_tensor(&st, &Expr::int(2)).unwrap();
    assert!(compare_tables(&a, &b, st.context()).unwrap().is_zero());

    let flat = r_d_tensor(&s("heisenberg3-lor"), &Expr::one()).unwrap();
    assert!(flat
        .iter()
        .flatten()
        .flatten()
        .flatten()
        .all(Expr::is_const_zero));

    let hyp = s("hyperbolic-lift");
    let rd = r_d_tensor(&hyp, &Expr::one()).unwrap();
    assert!(hyp
        .context()
        .equal(&rd[0][1][1][0], &Expr::int(-1))
        .unwrap()
        .is_zero());
}

#[test]
fn lorentzian_h_term_enters_through_the_wedge_metric() {
    let st = s("twisted-heisenberg-lor");
    let ctx = st.context();
    let c = Expr::int(2);
    let (_, curv) = extended_curvature(&st, &c).unwrap();
    let kappa = st.kappa_dim3().unwrap();
    let det = st.h_invariant().unwrap().det_h_sharp;
    assert!(ctx.is_nonzero(&det).unwrap());
    let with = |sign: i64| {
        Expr::add([
            kappa.clone(),
            &Expr::rational(sign, 2) * &det,
            Expr::rational(-3, 2),
        ])
    };
    // g(X_1∧X_2, X_1∧X_2) = −1 flips the sign of the determinant term
    assert!(ctx
        .equal(curv.lowered(1, 2, 2, 1), &with(1))
        .unwrap()
        .is_zero());
    assert!(!ctx
        .equal(curv.lowered(1, 2, 2, 1), &with(-1))
        .unwrap()
        .is_zero());
}
