use subriem::builtins::builtin;
use subriem::calculus::PointMap;
use subriem::isometry::{
    algebra_dimension, alpha_reeb_consequence, appendix_family, bch_left_translation, bch_product,
    compatibility_and_frequencies, family_count, family_generator, has_correction,
    is_infinitesimal_isometry, is_isometry, printed_translation, structure_algebra,
    translation_generators, Reading,
};
use subriem::structure::SubPRStructure;
use subriem::symexpr::{Expr, SamplingPlan};

fn s(name: &str) -> SubPRStructure {
    builtin(name, SamplingPlan::default()).unwrap()
}

fn case(k: u8) -> SubPRStructure {
    s(&format!("heisenberg5-case{k}"))
}

fn t(v: [i64; 5]) -> Vec<Expr> {
    v.iter().map(|&x| Expr::int(x)).collect()
}

const P: [f64; 5] = [0.3, -0.2, 0.7, 0.1, -0.4];

#[test]
fn left_translations_are_isometries() {
    for k in 1..=3 {
        let st = case(k);
        for v in [[1, 2, 0, 0, 3], [0, -1, 2, 1, 0], [1, 1, 1, 1, 1]] {
            let (f, finv) = bch_left_translation(&t(v)).unwrap();
            let verdict = is_isometry(&f, &finv, &st).unwrap();
            assert!(verdict.passed(), "case {k} t={v:?}");
            assert!(verdict.unimodular);
            assert!(alpha_reeb_consequence(&f, &finv, &st).unwrap().passed());
        }
    }
}

#[test]
fn printed_translation_is_a_right_multiplication() {
    let st = case(1);
    let (f, finv) = printed_translation(&t([1, 2, 0, 0, 3])).unwrap();
    let v = is_isometry(&f, &finv, &st).unwrap();
    assert!(!v.passed());
    // f_* X_1 = X_1 + t_2 X_0
    assert!(!v.preserves_d.is_zero());
    // with t_1 = … = t_4 = 0 both readings coincide
    let (f, finv) = printed_translation(&t([0, 0, 0, 0, 3])).unwrap();
    assert!(is_isometry(&f, &finv, &st).unwrap().passed());
}

#[test]
fn families_on_their_own_case() {
    let theta = Expr::rational(2, 7);
    for k in 1..=3u8 {
        let st = case(k);
        for i in 1..=family_count(k) {
            let f = appendix_family(k, i, &theta, Reading::Corrected).unwrap();
            let finv = f.affine_inverse(st.context()).unwrap();
            let v = is_isometry(&f, &finv, &st).unwrap();
            assert!(v.passed(), "case {k} family {i}");
            assert!(alpha_reeb_consequence(&f, &finv, &st).unwrap().passed());
            if !has_correction(k, i) {
                let lit = appendix_family(k, i, &theta, Reading::Literal).unwrap();
                assert_eq!(lit.comps(), f.comps());
            }
        }
    }
}

#[test]
fn literal_case1_line4_is_not_invertible() {
    let st = case(1);
    let f = appendix_family(1, 4, &Expr::rational(2, 7), Reading::Literal).unwrap();
    assert!(f.affine_inverse(st.context()).is_err());
}

#[test]
fn boosts_fail_outside_their_signature() {
    let theta = Expr::rational(1, 3);
    let boost = appendix_family(2, 1, &theta, Reading::Literal).unwrap();
    let inv = boost.affine_inverse(case(1).context()).unwrap();
    assert!(is_isometry(&boost, &inv, &case(2)).unwrap().passed());
    assert!(!is_isometry(&boost, &inv, &case(1)).unwrap().passed());
    let swap = appendix_family(1, 1, &theta, Reading::Literal).unwrap();
    let inv = swap.affine_inverse(case(1).context()).unwrap();
    assert!(!is_isometry(&swap, &inv, &case(2)).unwrap().passed());
}

#[test]
fn identity_and_bad_inverse() {
    let st = case(1);
    let id = PointMap::identity(5);
    assert!(is_isometry(&id, &id, &st).unwrap().passed());
    let (f, _) = bch_left_translation(&t([1, 0, 0, 0, 0])).unwrap();
    assert!(is_isometry(&f, &id, &st).is_err());
}

#[test]
fn generators_are_killing() {
    for k in 1..=3u8 {
        let st = case(k);
        for v in translation_generators() {
            assert!(is_infinitesimal_isometry(&v, &st).unwrap().passed());
        }
        for i in 1..=family_count(k) {
            let v = family_generator(k, i, Reading::Corrected, &st).unwrap();
            assert!(
                is_infinitesimal_isometry(&v, &st).unwrap().passed(),
                "case {k} family {i}"
            );
        }
        for v in structure_algebra(&st).unwrap() {
            assert!(is_infinitesimal_isometry(&v, &st).unwrap().passed());
        }
    }
    // ∂x1 alone is not: it does not commute with the left-invariant frame
    let st = case(1);
    let dx =
        subriem::calculus::VectorField::parse(&["1", "0", "0", "0", "0"], st.context().chart())
            .unwrap();
    assert!(!is_infinitesimal_isometry(&dx, &st).unwrap().passed());
}

fn rank(k: u8, with_algebra: bool) -> usize {
    let st = case(k);
    let mut gens = translation_generators();
    for i in 1..=family_count(k) {
        gens.push(family_generator(k, i, Reading::Corrected, &st).unwrap());
    }
    if with_algebra {
        gens.extend(structure_algebra(&st).unwrap());
    }
    let r = algebra_dimension(&gens, &st, &P).unwrap();
    assert!(r.within_bound);
    assert_eq!(r.bound, 9);
    r.rank
}

#[test]
fn algebra_ranks() {
    assert_eq!([rank(1, false), rank(2, false), rank(3, false)], [7, 7, 7]);
    assert_eq!([rank(1, true), rank(2, true), rank(3, true)], [9, 7, 9]);
    assert_eq!(structure_algebra(&case(1)).unwrap().len(), 4);
    assert_eq!(structure_algebra(&case(2)).unwrap().len(), 2);
    assert_eq!(structure_algebra(&case(3)).unwrap().len(), 4);
}

#[test]
fn frequencies() {
    let d = compatibility_and_frequencies(&case(1), &P).unwrap();
    assert!(d.compatible.is_zero());
    let b = d.frequencies.unwrap();
    assert!(b.iter().all(|x| (x - 1.0).abs() < 1e-9));
    assert_eq!(d.block_sizes, Some(vec![2]));
    assert_eq!(d.predicted_dim, Some(9));

    let d = compatibility_and_frequencies(&s("heisenberg5-scaled"), &P).unwrap();
    assert!(!d.compatible.is_zero());
    let b = d.frequencies.unwrap();
    assert!(
        (b[0] - 0.5f64.sqrt()).abs() < 1e-9 && (b[1] - 2f64.sqrt()).abs() < 1e-9,
        "{b:?}"
    );
    assert_eq!(d.block_sizes, Some(vec![1, 1]));
    assert_eq!(d.predicted_dim, Some(7));
    assert!(d.predicted_dim.unwrap() <= d.bound);

    let lor = compatibility_and_frequencies(&case(2), &P).unwrap();
    assert!(lor.frequencies.is_none());

    let d3 = compatibility_and_frequencies(&s("heisenberg3-riem"), &[0.1, 0.2, 0.3]).unwrap();
    assert!(d3.compatible.is_zero());
    assert_eq!(d3.predicted_dim, Some(4));
}

#[test]
fn translations_compose_by_the_group_law() {
    let st = case(1);
    let a = t([1, 2, -1, 0, 3]);
    let b = t([0, -2, 3, 1, 1]);
    let (fa, fa_inv) = bch_left_translation(&a).unwrap();
    let (fb, _) = bch_left_translation(&b).unwrap();
    let (fab, _) = bch_left_translation(&bch_product(&a, &b)).unwrap();
    let composed = fa.compose(&fb);
    for (x, y) in composed.comps().iter().zip(fab.comps()) {
        assert!(st.context().equal(x, y).unwrap().is_zero());
    }
    let round = fa.compose(&fa_inv);
    for (k, x) in round.comps().iter().enumerate() {
        assert!(st.context().equal(x, &Expr::coord(k)).unwrap().is_zero());
    }
    let (zero, _) = bch_left_translation(&t([0; 5])).unwrap();
    assert_eq!(zero.comps(), PointMap::identity(5).comps());
}

#[test]
fn printed_examples() {
    let half_pi = Expr::div(&Expr::pi(), &Expr::int(2));
    let f = appendix_family(1, 2, &half_pi, Reading::Literal).unwrap();
    let want: Vec<Expr> = ["-y1", "x1", "x2", "y2", "z"]
        .iter()
        .map(|s| {
            subriem::symexpr::parse(s, case(1).context().chart())
                .unwrap()
                .simplify()
        })
        .collect();
    assert_eq!(f.comps(), &want[..]);
    let st = case(1);
    let rot = appendix_family(
        1,
        2,
        &Expr::div(&Expr::pi(), &Expr::int(3)),
        Reading::Literal,
    )
    .unwrap();
    let inv = rot.affine_inverse(st.context()).unwrap();
    assert!(alpha_reeb_consequence(&rot, &inv, &st).unwrap().passed());
    let boost = appendix_family(3, 1, &Expr::one(), Reading::Literal).unwrap();
    let inv = boost.affine_inverse(st.context()).unwrap();
    assert!(is_isometry(&boost, &inv, &case(3)).unwrap().passed());
    let v = is_isometry(&boost, &inv, &case(1)).unwrap();
    assert!(!v.worst_metric().is_zero());
}

#[test]
fn shear_and_reeb_field() {
    let st = s("heisenberg3-riem");
    let chart = st.context().chart();
    let p = |v: [&str; 3]| PointMap::parse(&v, chart).unwrap();
    let shear = p(["x + y", "y", "z"]);
    let inv = p(["x - y", "y", "z"]);
    assert!(!is_isometry(&shear, &inv, &st).unwrap().passed());
    assert!(is_infinitesimal_isometry(st.reeb(), &st).unwrap().passed());
    let tw = s("twisted-heisenberg");
    assert!(!is_infinitesimal_isometry(tw.reeb(), &tw).unwrap().passed());
}
