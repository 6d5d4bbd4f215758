use std::sync::OnceLock;

use lfun_twists::characters::enumerate_characters;
use lfun_twists::forms::{delta_coefficients, fricke_eigenvalue, newform_from_curve, CuspForm, EllipticCurveModel};
use lfun_twists::identities::*;
use lfun_twists::ltwist::{build_unfolding_matrix, CuspPoint, ModularMatrix, TwistEvaluator};
use lfun_twists::Error;
use num_complex::Complex64;

fn delta() -> &'static CuspForm {
    static F: OnceLock<CuspForm> = OnceLock::new();
    F.get_or_init(|| delta_coefficients(4000).unwrap())
}

fn eleven() -> &'static CuspForm {
    static F: OnceLock<CuspForm> = OnceLock::new();
    F.get_or_init(|| {
        let mut f = newform_from_curve(EllipticCurveModel::x0_11(), 4000).unwrap();
        fricke_eigenvalue(&mut f).unwrap();
        f
    })
}

fn cusp(s: &str) -> CuspPoint {
    s.parse().unwrap()
}

fn gamma(a: i64, b: i64, c: i64, d: i64, n: u64) -> ModularMatrix {
    ModularMatrix::new(a, b, c, d, n).unwrap()
}

#[test]
fn report_json_round_trip() {
    let ev = TwistEvaluator::new(delta(), 1e-12).unwrap();
    let r = verify_qmf(&ev, &gamma(0, -1, 1, 0, 1), &cusp("2/7"), 1e-6).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["identity", "inputs", "lhs", "rhs", "residual", "tolerance", "pass", "notes"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["identity"], "QMF_GAMMA");
    let back: VerificationReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    back.validate().unwrap();
    let mut bad = back.clone();
    bad.pass = !bad.pass;
    assert!(bad.validate().is_err());
}

#[test]
fn tags_serialize_in_upper_snake_case() {
    let names: Vec<String> = [
        IdentityTag::Fe,
        IdentityTag::QmfGamma,
        IdentityTag::QmfFricke,
        IdentityTag::BirchStevens,
        IdentityTag::AdditiveFromMoment,
        IdentityTag::Reciprocity,
        IdentityTag::Cor1,
        IdentityTag::QmfInfinity,
        IdentityTag::InfinityExperiment,
    ]
    .iter()
    .map(|t| serde_json::to_value(t).unwrap().as_str().unwrap().to_string())
    .collect();
    assert_eq!(
        names,
        [
            "FE",
            "QMF_GAMMA",
            "QMF_FRICKE",
            "BIRCH_STEVENS",
            "ADDITIVE_FROM_MOMENT",
            "RECIPROCITY",
            "COR1",
            "QMF_INFINITY",
            "INFINITY_EXPERIMENT"
        ]
    );
}

#[test]
fn qmf_for_delta() {
    let ev = TwistEvaluator::new(delta(), 1e-12).unwrap();
    let r = verify_qmf(&ev, &gamma(0, -1, 1, 0, 1), &cusp("2/7"), 1e-6).unwrap();
    assert!(r.pass, "{r:?}");
    let r = verify_qmf(&ev, &gamma(2, 1, 5, 3, 1), &cusp("-4/9"), 1e-6).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn translations_give_exact_zero() {
    let ev = TwistEvaluator::new(delta(), 1e-12).unwrap();
    for t in [1, -3, 7] {
        let r = verify_qmf(&ev, &gamma(1, t, 0, 1, 1), &cusp("3/8"), 1e-12).unwrap();
        assert_eq!(r.lhs(), Complex64::new(0.0, 0.0));
        assert!(r.pass);
    }
}

#[test]
fn pole_at_gamma_inverse_infinity() {
    let ev = TwistEvaluator::new(delta(), 1e-12).unwrap();
    let g = gamma(2, 1, 5, 3, 1);
    let target = g.inverse().act(&CuspPoint::infinity());
    assert_eq!(verify_qmf(&ev, &g, &target, 1e-6).unwrap_err(), Error::Pole);
}

#[test]
fn weight_two_discrepancy_is_constant() {
    let ev = TwistEvaluator::new(eleven(), 1e-13).unwrap();
    let g = gamma(4, 1, 11, 3, 11);
    let reference = qmf_discrepancy(&ev, &g, &cusp("1/11")).unwrap();
    for r in ["2/11", "5/22", "-7/33", "13/44"] {
        let v = qmf_discrepancy(&ev, &g, &cusp(r)).unwrap();
        assert!((v - reference).norm() < 1e-7, "{r}: {v} vs {reference}");
        let rep = verify_qmf(&ev, &g, &cusp(r), 1e-6).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.rhs(), ev.twist(&g.act(&CuspPoint::infinity()), 1.0).unwrap().value);
    }
}

#[test]
fn fe_in_both_cosets() {
    for (f, cusps) in [(delta(), ["1/3", "-2/5", "3/7"]), (eleven(), ["1/11", "1/3", "-2/5"])] {
        let ev = TwistEvaluator::new(f, 1e-13).unwrap();
        let h = f.weight() as f64 / 2.0;
        for c in cusps {
            let m = build_unfolding_matrix(&cusp(c), f.level()).unwrap();
            for s in [h - 0.5, h, h + 0.5] {
                let r = verify_fe(&ev, &m, s, 1e-8).unwrap();
                assert!(r.pass, "{c} s={s}: {r:?}");
            }
        }
    }
}

#[test]
fn fricke_relation() {
    let ev = TwistEvaluator::new(eleven(), 1e-13).unwrap();
    for r in ["1/3", "2/5", "-3/7"] {
        let rep = verify_fricke_qmf(&ev, &cusp(r), 1e-6).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.rhs(), ev.twist(&CuspPoint::integer(0), 1.0).unwrap().value);
    }
    let ev = TwistEvaluator::new(delta(), 1e-13).unwrap();
    for (q, l) in [(7, 3), (11, 5), (13, 2)] {
        let rep = verify_fricke_qmf(&ev, &CuspPoint::new(-q, l).unwrap(), 1e-6).unwrap();
        assert!(rep.pass, "{rep:?}");
    }
    assert!(verify_fricke_qmf(&ev, &CuspPoint::integer(0), 1e-6).is_err());
}

#[test]
fn fricke_correction_decays_like_one_over_r() {
    let ev = TwistEvaluator::new(delta(), 1e-13).unwrap();
    let central = ev.twist(&CuspPoint::integer(0), 6.0).unwrap().value;
    let dev = |r: i64| (verify_fricke_qmf(&ev, &CuspPoint::integer(r), 1e-6).unwrap().rhs() - central).norm();
    for r in [8, 10, 12, 16] {
        let ratio = dev(2 * r) / dev(r);
        assert!(ratio <= 0.6, "r = {r}: ratio {ratio}");
    }
}

#[test]
fn infinity_antisymmetry() {
    let ev = TwistEvaluator::new(eleven(), 1e-13).unwrap();
    for g in [gamma(1, 0, 11, 1, 11), gamma(2, 1, 11, 6, 11), gamma(3, -1, 22, -7, 11), gamma(5, -2, 33, -13, 11)] {
        let r = verify_infinity(&ev, &g, 1e-8).unwrap();
        assert!(r.pass, "{r:?}");
    }
    let r = verify_infinity(&ev, &gamma(1, 4, 0, 1, 11), 1e-8).unwrap();
    assert_eq!((r.lhs(), r.rhs()), (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
    let dv = TwistEvaluator::new(delta(), 1e-12).unwrap();
    assert!(verify_infinity(&dv, &gamma(0, -1, 1, 0, 1), 1e-8).is_err());
}

#[test]
fn experiment_in_weight_two_vanishes() {
    let ev = TwistEvaluator::new(eleven(), 1e-13).unwrap();
    let g = gamma(1, 0, 11, 1, 11);
    let approach: Vec<CuspPoint> = [11i64, 23, 47].iter().map(|&q| CuspPoint::new(1 - q, 11 * q).unwrap()).collect();
    let t = infinity_experiment(&ev, &g, &approach, Complex64::new(0.0, 0.0)).unwrap();
    assert_eq!(t.identity, IdentityTag::InfinityExperiment);
    for row in &t.rows {
        assert!(row.residual_abs < 1e-8, "{row:?}");
    }
}

#[test]
fn experiment_is_shift_invariant() {
    let ev = TwistEvaluator::new(delta(), 1e-12).unwrap();
    let g = gamma(0, -1, 1, 0, 1);
    let approach: Vec<CuspPoint> = [11i64, 23].iter().map(|&q| CuspPoint::new(1, q).unwrap()).collect();
    let shifted: Vec<CuspPoint> = approach.iter().map(|r| r.shift(1)).collect();
    // r -> r + 1 together with gamma -> gamma T^(-1)
    let g_shift = gamma(0, -1, 1, -1, 1);
    let a = infinity_experiment(&ev, &g, &approach, Complex64::new(0.0, 0.0)).unwrap();
    let b = infinity_experiment(&ev, &g_shift, &shifted, Complex64::new(0.0, 0.0)).unwrap();
    for (x, y) in a.rows.iter().zip(&b.rows) {
        assert_eq!(x.residual, y.residual);
        assert_eq!(x.lhs, y.lhs);
    }
}

#[test]
fn birch_stevens_trivial_character_at_prime_modulus() {
    let ev = TwistEvaluator::new(delta(), 1e-13).unwrap();
    let central = ev.twist(&CuspPoint::integer(0), 6.0).unwrap().value;
    for q in [5u64, 7, 11, 13] {
        let chi = enumerate_characters(q).unwrap().remove(0);
        let o = verify_birch_stevens(&ev, &chi, 1e-7).unwrap();
        assert!(o.pass(), "{o:?}");
        let tau = delta().coefficient(q as usize).unwrap() as f64;
        let factor = tau * (q as f64).powf(-5.0) - 2.0;
        assert!((o.report.rhs() - central * factor).norm() < 1e-7);
    }
}

#[test]
fn birch_stevens_imprimitive_modulus_nine() {
    let ev = TwistEvaluator::new(delta(), 1e-13).unwrap();
    for chi in enumerate_characters(9).unwrap().into_iter().filter(|c| c.conductor() == 3) {
        let o = verify_birch_stevens(&ev, &chi, 1e-7).unwrap();
        assert!(o.pass(), "{o:?}");
        assert_eq!(o.reconstructions.len(), 3);
    }
}

#[test]
fn modulus_reading_of_nu_breaks_the_identity() {
    let ev = TwistEvaluator::new(delta(), 1e-13).unwrap();
    let chi = enumerate_characters(7).unwrap().remove(0);
    let o = verify_birch_stevens_with(&ev, &chi, NuReading::CharacterModulus, 1e-7).unwrap();
    assert!(!o.report.pass);
    let o = verify_birch_stevens_with(&ev, &chi, NuReading::Level, 1e-7).unwrap();
    assert!(o.report.pass);
}

#[test]
fn moments_invert_to_additive_twists() {
    let ev = TwistEvaluator::new(eleven(), 1e-13).unwrap();
    let q = 12;
    let m = character_moments(&ev, q, NuReading::Level).unwrap();
    let chars = enumerate_characters(q).unwrap();
    for a in [1i64, 5, 7, 11] {
        let s: Complex64 = m.iter().zip(&chars).map(|(m, c)| c.value(a) * m.moment).sum::<Complex64>() / 4.0;
        let direct = ev.twist(&CuspPoint::new(a, q as i64).unwrap(), 1.0).unwrap().value;
        assert!((s - direct).norm() < 1e-7);
    }
}

#[test]
fn reciprocity_smallest_instance() {
    let ev = TwistEvaluator::new(delta(), 1e-13).unwrap();
    let cfg = ReciprocityConfig { tol: 1e-7, ..Default::default() };
    let o = verify_reciprocity(&ev, 1, 2, &cfg).unwrap();
    assert!(o.t1.pass && o.t2.pass, "{o:?}");
    assert!(o.main.residual > 0.0);
}

#[test]
fn reciprocity_at_level_eleven() {
    let ev = TwistEvaluator::new(eleven(), 1e-13).unwrap();
    let cfg = ReciprocityConfig { tol: 1e-7, ..Default::default() };
    let o = verify_reciprocity(&ev, 2, 7, &cfg).unwrap();
    assert!(o.pass(), "{o:?}");
    assert_eq!(reciprocity_constant(&ev).unwrap(), 0.0);
}

#[test]
fn reciprocity_arguments() {
    let ev = TwistEvaluator::new(delta(), 1e-12).unwrap();
    let cfg = ReciprocityConfig { max_modulus: 50, ..Default::default() };
    assert!(matches!(verify_reciprocity(&ev, 3, 101, &cfg), Err(Error::BudgetExceeded(_))));
    assert!(verify_reciprocity(&ev, 3, 3, &cfg).is_err());
    assert!(verify_reciprocity(&ev, 2, 4, &cfg).is_err());
    let cor = ReciprocityConfig { corollary_one: true, ..Default::default() };
    assert!(verify_reciprocity(&ev, 2, 11, &cor).is_err());
    assert!(verify_reciprocity(&ev, 3, 11, &cor).unwrap().cor1.is_some());
}

#[test]
fn apriori_constant_covers_observed_residuals() {
    let ev = TwistEvaluator::new(delta(), 1e-13).unwrap();
    let k = reciprocity_constant(&ev).unwrap();
    for (l, q) in [(1u64, 11u64), (2, 13), (3, 29)] {
        let o = verify_reciprocity(&ev, l, q, &ReciprocityConfig::default()).unwrap();
        assert!(o.main.residual <= k * l as f64 / q as f64, "{l} {q}");
    }
}

#[test]
fn discrepancy_is_smoother_than_raw_values() {
    // neighbours of 2/5 approaching it; gamma^(-1) oo = 0 is far away
    let ev = TwistEvaluator::new(delta(), 1e-12).unwrap();
    let g = gamma(0, -1, 1, 0, 1);
    let near = |m: i64| CuspPoint::new(2 * m + 5, 5 * m).unwrap();
    let mut raw = Vec::new();
    let mut disc = Vec::new();
    for m in [20i64, 40, 80] {
        let (r1, r2) = (near(m), near(m + 1));
        raw.push((ev.twist(&r1, 6.0).unwrap().value - ev.twist(&r2, 6.0).unwrap().value).norm());
        disc.push((qmf_discrepancy(&ev, &g, &r1).unwrap() - qmf_discrepancy(&ev, &g, &r2).unwrap()).norm());
    }
    assert!(disc[2] < disc[0], "{disc:?}");
    for (d, r) in disc.iter().zip(&raw) {
        assert!(d < r, "{disc:?} {raw:?}");
    }
}
