//! The analyses behind each subcommand.

use serde_json::{json, Value};
use subriem::acceptance;
use subriem::calculus::PointMap;
use subriem::connection::{closed_form_connection, compare, levi_civita, verify_connection};
use subriem::curvature::{decomposition_from, ricci, riemann, sectional, symmetry_report};
use subriem::einstein_weyl::{
    all_zero, canonical_pair, coordinate_family, ew_residual, gauss_curvature, lift_structure,
    model_base, parse_rational, prop_ew2_matrix_check, symmetric_case_check, thm_ew2_predicted_c,
    PredictedC,
};
use subriem::isometry::{
    algebra_dimension, alpha_reeb_consequence, appendix_family, bch_left_translation,
    case_signature, compatibility_and_frequencies, family_count, family_generator, has_correction,
    is_infinitesimal_isometry, is_isometry, printed_translation, structure_algebra,
    translation_generators, IsometryVerdict, Reading,
};
use subriem::structure::{FrameMetric, SubPRStructure};
use subriem::symexpr::{parse, Context, Expr, SamplingPlan, ZeroVerdict};
use subriem::Error;

use crate::doc::Params;
use crate::report::{matrix, text, verdict, verdict_summary, Outcome};

type Result<T> = std::result::Result<T, Error>;

fn usage(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

fn expr(s: &SubPRStructure, t: &str) -> Result<Expr> {
    Ok(parse(t, s.context().chart())?.simplify())
}

fn texts(v: &[Expr], s: &SubPRStructure) -> Vec<Value> {
    v.iter().map(|e| text(e, s.context().chart())).collect()
}

/// Splits `a; b; c` (commas also accepted; the grammar has none).
pub fn split_list(t: &str) -> Vec<String> {
    t.split([';', ','])
        .map(|p| p.trim().to_string())
        .filter(|p| !p.is_empty())
        .collect()
}

fn pair_summary(m: &[Vec<ZeroVerdict>]) -> Value {
    verdict_summary(
        m.iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, v)| (vec![i, j], v))),
    )
}

pub fn invariants(s: &SubPRStructure) -> Result<Outcome> {
    let ctx = s.context();
    let ch = ctx.chart();
    let d = s.dim();
    let mut c_table = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            for k in 0..d {
                let e = s.c(i, j, k).simplify();
                if !e.is_const_zero() {
                    c_table.push(json!({"index": [i, j, k], "value": text(&e, ch)}));
                }
            }
        }
    }
    let hd = s.h_invariant()?;
    let formula = s.h_frame_formula();
    let mut h_parts = Vec::new();
    for (i, (a, b)) in hd.h.iter().zip(&formula).enumerate() {
        for (j, (x, y)) in a.iter().zip(b).enumerate() {
            h_parts.push((vec![i + 1, j + 1], ctx.equal(x, y)?));
        }
    }
    let h_check = verdict_summary(h_parts.iter().map(|(i, v)| (i.clone(), v)));
    let mut kappa = Vec::new();
    for i in 1..d {
        for j in i + 1..d {
            kappa.push(json!({"pair": [i, j], "value": text(&s.kappa_general(i, j)?, ch)}));
        }
    }
    let flags = symmetric_case_check(s)?;
    let omega_identity = s.check_omega_identity()?;
    let passed = omega_identity && h_parts.iter().all(|(_, v)| v.is_zero());
    let results = json!({
        "frame_order": "index 0 is the Reeb field X0, then the distribution frame",
        "signature": s.signature(),
        "alpha": texts(&s.alpha().dense_one_form(), s),
        "reeb": texts(s.reeb().coeffs(), s),
        "structure_functions": c_table,
        "omega": matrix(s.omega(), ch),
        "h": matrix(&hd.h, ch),
        "h_sharp": matrix(&hd.h_sharp, ch),
        "det_h_sharp": text(&hd.det_h_sharp, ch),
        "kappa": kappa,
        "kappa_dim3": if d == 3 { text(&s.kappa_dim3()?, ch) } else { Value::Null },
        "symmetric_case": {
            "h_zero": verdict(&flags.h_zero),
            "lie_reeb_omega_zero": verdict(&flags.lie_reeb_omega_zero),
            "flat": flags.flat,
        },
        "checks": {
            "omega_identity": omega_identity,
            "h_lie_derivative_vs_formula": h_check,
        },
    });
    Ok(Outcome { passed, results })
}

fn table3_entries(t: &[Vec<Vec<Expr>>], s: &SubPRStructure) -> Vec<Value> {
    let ch = s.context().chart();
    let mut out = Vec::new();
    for (i, a) in t.iter().enumerate() {
        for (j, b) in a.iter().enumerate() {
            for (k, e) in b.iter().enumerate() {
                let e = e.simplify();
                if !e.is_const_zero() {
                    out.push(json!({"index": [i, j, k], "value": text(&e, ch)}));
                }
            }
        }
    }
    out
}

pub fn curvature(s: &SubPRStructure, c_text: &str) -> Result<Outcome> {
    let ctx = s.context();
    let ch = ctx.chart();
    let d = s.dim();
    let c = expr(s, c_text)?;
    let g = FrameMetric::extension(s, &c)?;
    let cf = closed_form_connection(s, &c)?;
    let lc = levi_civita(&g, s.frame(), ctx)?;
    let agreement = compare(&cf, &lc, ctx)?;
    let conn_report = verify_connection(&cf, &g, None, s.frame(), ctx)?;
    let curv = riemann(&cf, s.frame(), &g);
    let symmetries = symmetry_report(&curv, ctx)?;
    let ric = ricci(&curv, ctx)?;
    let decomposition = decomposition_from(s, &c, &curv)?;

    let mut lowered = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            for k in 0..d {
                for l in k + 1..d {
                    if (k, l) < (i, j) {
                        continue;
                    }
                    let e = curv.lowered(i, j, k, l).simplify();
                    if !e.is_const_zero() {
                        lowered.push(json!({"index": [i, j, k, l], "value": text(&e, ch)}));
                    }
                }
            }
        }
    }
    let mut sec = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            sec.push(json!({"pair": [i, j], "value": text(&sectional(&curv, i, j, ctx)?, ch)}));
        }
    }
    let decomp: Vec<Value> = decomposition
        .iter()
        .map(|p| {
            json!({
                "pair": [p.pair.0, p.pair.1],
                "kappa_c": text(&p.kappa_c, ch),
                "kappa_d": text(&p.kappa_d, ch),
                "h_term": text(&p.h_term, ch),
                "omega_sq": text(&p.omega_sq, ch),
                "residual": verdict(&p.verdict),
            })
        })
        .collect();
    let sym_ok = symmetries.antisymmetry.is_zero()
        && symmetries.first_bianchi.is_zero()
        && symmetries.pair_symmetry.is_zero();
    let passed = agreement.iter().all(|c| c.verdict.is_zero())
        && conn_report.passed()
        && sym_ok
        && decomposition.iter().all(|p| p.verdict.is_zero());
    let results = json!({
        "c": text(&c, ch),
        "connection": {
            "closed_form": table3_entries(cf.table(), s),
            "koszul": table3_entries(lc.table(), s),
            "agreement": verdict_summary(agreement.iter().map(|c| (c.index.clone(), &c.verdict))),
            "metric_compatibility": verdict_summary(
                conn_report.compatibility.iter().map(|c| (c.index.clone(), &c.verdict))
            ),
            "torsion_free": verdict_summary(
                conn_report.torsion.iter().map(|c| (c.index.clone(), &c.verdict))
            ),
        },
        "riemann_lowered": lowered,
        "curvature_identities": serde_json::to_value(&symmetries).expect("serializable"),
        "sectional": sec,
        "ricci": matrix(&ric.symmetric, ch),
        "scalar": text(&ric.scalar, ch),
        "decomposition": decomp,
    });
    Ok(Outcome { passed, results })
}

pub fn ew(
    s: &SubPRStructure,
    epsilon: &str,
    c_text: Option<&str>,
    with_family: bool,
    plan: SamplingPlan,
) -> Result<Outcome> {
    let ctx = s.context();
    let ch = ctx.chart();
    let eps = parse_rational(epsilon)?;
    let mut out = serde_json::Map::new();
    out.insert("epsilon".into(), json!(eps.to_string()));
    let predicted = match thm_ew2_predicted_c(s, &eps) {
        Ok(p) => Some(p),
        Err(Error::Precondition(m) | Error::Dimension(m)) => {
            out.insert(
                "predicted_c".into(),
                json!({"status": "not_applicable", "reason": m}),
            );
            None
        }
        Err(e) => return Err(e),
    };
    let mut note = None;
    let c = match (&predicted, c_text) {
        (_, Some(t)) => Some(expr(s, t)?),
        (Some(PredictedC::Value(v)), None) => Some(v.clone()),
        (Some(PredictedC::AnyNonzero), None) => {
            note = Some("every nonzero c is predicted; checked c = 1");
            Some(Expr::one())
        }
        _ => None,
    };
    match &predicted {
        Some(PredictedC::Value(v)) => {
            out.insert(
                "predicted_c".into(),
                json!({"status": "value", "value": text(v, ch)}),
            );
        }
        Some(PredictedC::AnyNonzero) => {
            out.insert("predicted_c".into(), json!({"status": "any_nonzero"}));
        }
        Some(PredictedC::NoSolution(why)) => {
            out.insert(
                "predicted_c".into(),
                json!({"status": "no_solution", "reason": why}),
            );
        }
        None => {}
    }
    if let Some(n) = note {
        out.insert("note".into(), json!(n));
    }
    let mut passed = false;
    if let Some(c) = &c {
        out.insert("c".into(), text(c, ch));
        let pair = canonical_pair(s, c, &eps)?;
        let v = ew_residual(&pair, ctx)?;
        passed = v.worst().is_zero();
        out.insert(
            "residual".into(),
            json!({
                "entries": pair_summary(&v.residual),
                "ricci_sym": matrix(&v.ricci_sym, ch),
                "scalar": text(&v.scalar, ch),
                "einstein_weyl": v.is_einstein_weyl,
            }),
        );
        let h_zero = all_zero(&s.h_invariant()?.h, ctx)?.is_zero();
        if s.dim() == 3 && h_zero {
            let m = prop_ew2_matrix_check(s, c, &eps)?;
            passed &= m.iter().flatten().all(ZeroVerdict::is_zero);
            out.insert("printed_ricci_matrix".into(), pair_summary(&m));
        }
    }
    if with_family {
        // informational: the printed coordinate pair is reported, never asserted
        let value = match coordinate_family(&eps, plan) {
            Ok((pair, fctx)) => {
                let v = ew_residual(&pair, &fctx)?;
                json!({"residual": pair_summary(&v.residual), "einstein_weyl": v.is_einstein_weyl})
            }
            Err(Error::Precondition(m)) => json!({"status": "not_applicable", "reason": m}),
            Err(e) => return Err(e),
        };
        out.insert("coordinate_family".into(), value);
    }
    Ok(Outcome {
        passed,
        results: Value::Object(out),
    })
}

pub fn lift(base: &str, plan: SamplingPlan) -> Result<Outcome> {
    let (q, k) = model_base(base)?;
    let base_ctx = Context::new(q.chart.clone(), plan);
    let gauss = gauss_curvature(&q.metric, &base_ctx)?;
    let lifted = lift_structure(&q, plan)?;
    let kappa = lifted.kappa_dim3()?;
    let gauss_ok = base_ctx.equal(&gauss, &k)?;
    let lift_ok = lifted.context().equal(&gauss, &kappa)?;
    let ch = lifted.context().chart();
    let frame: Vec<Value> = lifted
        .distribution_frame()
        .iter()
        .map(|f| json!(f.to_text(ch)))
        .collect();
    Ok(Outcome {
        passed: gauss_ok.is_zero() && lift_ok.is_zero(),
        results: json!({
            "base": base,
            "expected_curvature": text(&k, &q.chart),
            "gauss_curvature": text(&gauss, &q.chart),
            "kappa_of_lift": text(&kappa, ch),
            "lift_frame": frame,
            "gauss_matches_expected": verdict(&gauss_ok),
            "kappa_matches_gauss": verdict(&lift_ok),
        }),
    })
}

fn isometry_json(v: &IsometryVerdict, s: &SubPRStructure) -> Value {
    let ch = s.context().chart();
    json!({
        "passed": v.passed(),
        "preserves_distribution": verdict(&v.preserves_d),
        "metric_preserved": pair_summary(&v.metric_preserved),
        "lambda": text(&v.lambda, ch),
        "conformal_alpha": verdict(&v.conformal_alpha),
        "reeb_preserved": verdict(&v.reeb_preserved),
        "unimodular": v.unimodular,
        "frame_transition": matrix(&v.frame_transition, ch),
    })
}

/// Verdict plus, on success, the λ = 1 / Reeb / `G^1` consequences.
fn check_map(f: &PointMap, inv: &PointMap, s: &SubPRStructure) -> Result<(bool, Value)> {
    let v = is_isometry(f, inv, s)?;
    let mut j = isometry_json(&v, s);
    if v.passed() {
        let cons = alpha_reeb_consequence(f, inv, s)?;
        j["consequences"] = json!({
            "lambda_one": verdict(&cons.lambda_one),
            "reeb": verdict(&cons.reeb),
            "extended_metric": verdict(&cons.extended_metric),
        });
        return Ok((cons.passed(), j));
    }
    Ok((false, j))
}

fn reading_name(r: Reading) -> &'static str {
    match r {
        Reading::Literal => "literal",
        Reading::Corrected => "corrected",
    }
}

fn parse_reading(t: &str) -> Result<Reading> {
    match t {
        "literal" => Ok(Reading::Literal),
        "corrected" => Ok(Reading::Corrected),
        _ => Err(usage(format!(
            "reading must be 'literal' or 'corrected', got '{t}'"
        ))),
    }
}

fn parse_family(t: &str) -> Result<(u8, usize)> {
    let bad = || usage(format!("family selector must be CASE:INDEX, got '{t}'"));
    let (a, b) = t.split_once(':').ok_or_else(bad)?;
    let case: u8 = a.trim().parse().map_err(|_| bad())?;
    let index: usize = b.trim().parse().map_err(|_| bad())?;
    case_signature(case)?;
    if index == 0 || index > family_count(case) {
        return Err(Error::Index(format!(
            "case {case} lists {} families",
            family_count(case)
        )));
    }
    Ok((case, index))
}

/// One listed family member. Without an explicit reading, the printed formula
/// is checked first and the corrected one only when it fails.
fn family_entry(
    case: u8,
    index: usize,
    theta: &Expr,
    reading: Option<Reading>,
    s: &SubPRStructure,
) -> Result<(bool, Option<Reading>, Value)> {
    let readings = match reading {
        Some(r) => vec![r],
        None if has_correction(case, index) => vec![Reading::Literal, Reading::Corrected],
        None => vec![Reading::Literal],
    };
    let mut entry = json!({"case": case, "index": index});
    let mut used = None;
    for r in readings {
        let f = appendix_family(case, index, theta, r)?;
        let value = match f.affine_inverse(s.context()) {
            Ok(inv) => {
                let (ok, j) = check_map(&f, &inv, s)?;
                if ok {
                    used = Some(r);
                }
                j
            }
            Err(Error::Singular(m)) => {
                json!({"passed": false, "error": format!("no inverse: {m}")})
            }
            Err(e) => return Err(e),
        };
        entry[reading_name(r)] = value;
        if used.is_some() {
            break;
        }
    }
    entry["passed"] = json!(used.is_some());
    Ok((used.is_some(), used, entry))
}

fn frequencies_json(s: &SubPRStructure) -> Result<Value> {
    let p = s
        .context()
        .points()
        .first()
        .cloned()
        .ok_or(Error::NoAdmissibleSample { attempts: 0 })?;
    let d = compatibility_and_frequencies(s, &p)?;
    Ok(json!({
        "point": p,
        "j": matrix(&d.j, s.context().chart()),
        "j_squared_is_minus_identity": verdict(&d.compatible),
        "frequencies": d.frequencies,
        "constant": d.constant,
        "block_sizes": d.block_sizes,
        "predicted_dim": d.predicted_dim,
        "bound": d.bound,
    }))
}

fn detect_case(s: &SubPRStructure) -> Option<u8> {
    if s.dim() != 5 {
        return None;
    }
    (1..=3u8).find(|&c| case_signature(c).is_ok_and(|sig| sig == s.signature()))
}

fn suite(s: &SubPRStructure, theta: &Expr) -> Result<Outcome> {
    let mut out = serde_json::Map::new();
    let mut passed = true;
    let Some(case) = detect_case(s) else {
        let reeb = is_infinitesimal_isometry(s.reeb(), s)?;
        out.insert(
            "reeb_is_killing".into(),
            json!({
                "passed": reeb.passed(),
                "preserves_distribution": verdict(&reeb.preserves_d),
                "lie_metric": verdict(&reeb.lie_metric),
            }),
        );
        out.insert("frequencies".into(), frequencies_json(s)?);
        // informational for structures outside the five-dimensional model
        return Ok(Outcome {
            passed,
            results: Value::Object(out),
        });
    };
    out.insert("case".into(), json!(case));
    let t = [1, 2, 0, 0, 3].map(Expr::int);
    let (f, inv) = bch_left_translation(&t)?;
    let (ok, j) = check_map(&f, &inv, s)?;
    passed &= ok;
    out.insert(
        "left_translation".into(),
        json!({"t": [1, 2, 0, 0, 3], "verdict": j}),
    );

    let mut families = Vec::new();
    let mut gens = translation_generators();
    for i in 1..=family_count(case) {
        let (ok, used, entry) = family_entry(case, i, theta, None, s)?;
        passed &= ok;
        families.push(entry);
        if let Some(r) = used {
            gens.push(family_generator(case, i, r, s)?);
        }
    }
    out.insert("theta".into(), text(theta, s.context().chart()));
    out.insert("families".into(), Value::Array(families));
    match structure_algebra(s) {
        Ok(extra) => gens.extend(extra),
        Err(Error::Precondition(m)) => {
            out.insert(
                "structure_algebra".into(),
                json!({"status": "skipped", "reason": m}),
            );
        }
        Err(e) => return Err(e),
    }
    let mut verified = Vec::new();
    for g in gens {
        if is_infinitesimal_isometry(&g, s)?.passed() {
            verified.push(g);
        }
    }
    let origin = vec![0.0; s.dim()];
    let p = if s.context().chart().admissible(&origin) {
        origin
    } else {
        s.context().points()[0].clone()
    };
    let r = algebra_dimension(&verified, s, &p)?;
    passed &= r.within_bound;
    out.insert(
        "algebra".into(),
        json!({"generators": verified.len(), "rank": r.rank, "bound": r.bound, "within_bound": r.within_bound, "point": p}),
    );
    out.insert("frequencies".into(), frequencies_json(s)?);
    Ok(Outcome {
        passed,
        results: Value::Object(out),
    })
}

pub fn isometry(s: &SubPRStructure, p: &Params) -> Result<Outcome> {
    let ch = s.context().chart();
    let theta = expr(s, p.theta.as_deref().unwrap_or("2/7"))?;
    if let Some(t) = &p.translation {
        let t: Vec<Expr> = t.iter().map(|x| expr(s, x)).collect::<Result<_>>()?;
        let (f, inv) = bch_left_translation(&t)?;
        let (ok, left) = check_map(&f, &inv, s)?;
        let (f, inv) = printed_translation(&t)?;
        let (_, right) = check_map(&f, &inv, s)?;
        return Ok(Outcome {
            passed: ok,
            results: json!({
                "t": texts(&t, s),
                "left_translation": left,
                "right_translation": right,
            }),
        });
    }
    if let Some(m) = &p.map {
        let comps: Vec<&str> = m.iter().map(String::as_str).collect();
        let f = PointMap::parse(&comps, ch)?;
        let (inv, inverse_source) = match &p.inverse {
            Some(i) => {
                let comps: Vec<&str> = i.iter().map(String::as_str).collect();
                (PointMap::parse(&comps, ch)?, "given")
            }
            None => (f.affine_inverse(s.context())?, "affine"),
        };
        let (ok, j) = check_map(&f, &inv, s)?;
        return Ok(Outcome {
            passed: ok,
            results: json!({
                "map": texts(f.comps(), s),
                "inverse": texts(inv.comps(), s),
                "inverse_source": inverse_source,
                "verdict": j,
            }),
        });
    }
    if let Some(sel) = &p.family {
        let (case, index) = parse_family(sel)?;
        let reading = p.reading.as_deref().map(parse_reading).transpose()?;
        let (ok, _, mut entry) = family_entry(case, index, &theta, reading, s)?;
        entry["theta"] = text(&theta, ch);
        return Ok(Outcome {
            passed: ok,
            results: entry,
        });
    }
    suite(s, &theta)
}

pub fn selftest(plan: SamplingPlan) -> Outcome {
    let results = acceptance::run_all(plan);
    Outcome {
        passed: results.iter().all(|r| r.passed),
        results: json!({"criteria": results}),
    }
}
