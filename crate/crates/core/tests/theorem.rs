//! Verification reports on real censuses.

use rpg_core::graph::Analysis;
use rpg_core::pgl::GraphKind;
use rpg_core::theorem::{unipotent_component_count, verify, ComponentFamily, Verdict};

#[test]
fn reports_for_small_q() {
    let expected = [(2, Verdict::Discrepancy), (3, Verdict::Discrepancy), (4, Verdict::Discrepancy)];
    for (q, verdict) in expected {
        let an = Analysis::build(q, GraphKind::Pgl).unwrap();
        let r = verify(q as u64, &an.census).unwrap();
        assert_eq!(r.verdict, verdict, "q = {q}: {:?}", r.notes);
        assert_eq!(r.observed_components, an.census.components);
    }
}

#[test]
fn three_matches_except_irreducible_record() {
    let an = Analysis::build(3, GraphKind::Pgl).unwrap();
    let r = verify(3, &an.census).unwrap();
    assert!(r.entry(ComponentFamily::Pivot).unwrap().matches);
    assert!(r.entry(ComponentFamily::Unipotent).unwrap().matches);
    let irr = r.entry(ComponentFamily::Irreducible).unwrap();
    assert!(!irr.matches);
    assert_eq!(irr.observed, vec![(1, 144)]);
}

#[test]
fn four_mismatch_is_the_diagonalizable_count() {
    let an = Analysis::build(4, GraphKind::Pgl).unwrap();
    let r = verify(4, &an.census).unwrap();
    assert!(r.entry(ComponentFamily::Pivot).unwrap().matches);
    assert!(r.entry(ComponentFamily::Irreducible).unwrap().matches);
    let diag = r.entry(ComponentFamily::Diagonalizable).unwrap();
    assert!(!diag.matches);
    assert_eq!((diag.record.count, diag.observed.clone()), (20160, vec![(1, 1120)]));
}

#[test]
fn unipotent_count_times_size_is_npj_total() {
    for q in [3u32, 5] {
        let an = Analysis::build(q, GraphKind::Pgl).unwrap();
        let p = an.graph.field().p() as u64;
        let npj = an.census.type_totals[&rpg_core::mat::JordanType::NPJ];
        assert_eq!(unipotent_component_count(q as u64, p) * (p - 1), npj, "q = {q}");
    }
}

#[test]
fn report_serialises_with_case_number() {
    let an = Analysis::build(2, GraphKind::Pgl).unwrap();
    let r = verify(2, &an.census).unwrap();
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    assert_eq!(v["case"], 1);
    assert_eq!(v["verdict"], "discrepancy");
    assert_eq!(v["observed_components"], 57);
}
