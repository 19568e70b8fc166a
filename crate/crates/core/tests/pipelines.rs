mod common;

use num_bigint::BigInt;
use orbitrace::chaincx::{contraction_squares, torsion_rep, BasedComplex};
use orbitrace::groupring::{GroupRingElement, GroupRingMatrix};
use orbitrace::groups::{ClassId, Collapsed, GroupOracle, Word};
use orbitrace::hochschild::{dennis_trace, reduce_class};
use orbitrace::report::{self, level_from_file, level_to_file, Input, Report};
use orbitrace::s1cw::{chi1_closed_form, chi_s1, pd_euler, to_chain_data};
use orbitrace::seifert::{components_closed_form, h1, SeifertData};

use common::corpus;

#[test]
fn corpus_has_required_inputs() {
    let names: Vec<String> = corpus().into_iter().map(|(n, _)| n).collect();
    assert!(names.len() >= 12, "{names:?}");
    let closed = corpus().iter().filter(|(_, i)| matches!(i, Input::Seifert(SeifertData::Closed { .. }))).count();
    let bounded = corpus().iter().filter(|(_, i)| matches!(i, Input::Seifert(SeifertData::Bounded { .. }))).count();
    assert!(closed >= 5 && bounded >= 2);
}

#[test]
fn every_corpus_report_agrees() {
    for (name, input) in corpus() {
        let r = report::report(&input).unwrap_or_else(|e| panic!("{name}: {e}"));
        let failed: Vec<_> = r.checks().iter().filter(|c| !c.passed).collect();
        assert!(r.agreement(), "{name}: {failed:?}");
    }
}

#[test]
fn reports_round_trip_through_json() {
    for (name, input) in corpus() {
        let r = report::report(&input).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r, "{name}");
    }
}

#[test]
fn levels_round_trip_through_files() {
    for (name, input) in corpus() {
        let Input::S1cw(f) = input else { continue };
        let x = report::s1cw_complex(&f).unwrap();
        for (c, h) in to_chain_data(&x).unwrap() {
            let file = level_to_file(&c, &h).unwrap();
            let (c2, h2) = level_from_file(&x.oracle, &file).unwrap();
            assert_eq!((c2, h2), (c, h), "{name}");
        }
    }
}

#[test]
fn fixed_points_kill_chi1() {
    for (name, input) in corpus() {
        let Input::S1cw(f) = input else { continue };
        let x = report::s1cw_complex(&f).unwrap();
        let v = chi1_closed_form(&x).unwrap();
        if x.has_fixed_points() {
            assert!(v.is_zero(), "{name}");
            assert!(pd_euler(&x).is_err());
        } else {
            let g = x.oracle.abelianize(&x.gamma0).unwrap();
            assert_eq!(v, g.scale(&BigInt::from(-x.orbit_euler_char())), "{name}");
        }
    }
}

#[test]
fn chi_s1_of_seifert_build_lists_expected_terms() {
    let d = SeifertData::Closed { genus: 0, b: 1, fibers: vec![(2, 1), (3, 1), (5, 1)] };
    let x = orbitrace::s1cw::from_seifert(&d).unwrap();
    let c = chi_s1(&x).unwrap().chain;
    // central: (r - χ) γ0 (x) γ0^-2 with r - χ = 1
    let g0 = Word::gen(0);
    let central: BigInt = c.terms().filter(|(u, _, _)| *u == &g0).map(|(_, _, n)| n.clone()).sum();
    assert_eq!(central, BigInt::from(1));
    assert_eq!(c.len(), 1 + 2 + 3 + 5);
}

#[test]
fn genus_two_has_central_part_only() {
    let d = SeifertData::Closed { genus: 2, b: 0, fibers: vec![] };
    let cf = components_closed_form(&d).unwrap();
    let h = h1(&d).unwrap();
    let nz = cf.nonzero();
    assert_eq!(nz.len(), 1);
    assert_eq!(nz[&ClassId::Central(-1)], Collapsed::Abelian(h.gamma0.scale(&BigInt::from(2))));
}

#[test]
fn unit_complex_torsion() {
    let o = GroupOracle::free_abelian(1);
    let g = Word::gen(0);
    let gi = g.inverse();
    let d = GroupRingMatrix::diagonal(
        &o,
        vec![
            GroupRingElement::word(&o, &g).unwrap(),
            GroupRingElement::word(&o, &gi).unwrap().scale(&BigInt::from(-1)),
        ],
    )
    .unwrap();
    let delta = GroupRingMatrix::diagonal(
        &o,
        vec![
            GroupRingElement::word(&o, &gi).unwrap(),
            GroupRingElement::word(&o, &g).unwrap().scale(&BigInt::from(-1)),
        ],
    )
    .unwrap();
    let c = BasedComplex::new(&o, 0, vec![2, 2], vec![d.clone()]).unwrap();
    let (v, vinv) = torsion_rep(&c, std::slice::from_ref(&delta)).unwrap();
    assert_eq!(v, d);
    let (sq, dsq) = contraction_squares(&c, &[delta]).unwrap();
    assert_eq!(sq, GroupRingMatrix::identity(&o, 4));
    assert!(dsq.is_zero());
    let dt = dennis_trace(&v, &vinv).unwrap();
    let r = reduce_class(&dt.chain).unwrap();
    // g (x) g^-1 + g^-1 (x) g: both in C(1), values {g} + {g^-1} = 0
    assert!(r.is_zero());
}
