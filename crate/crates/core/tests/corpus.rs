mod common;

use std::collections::BTreeSet;

use bolforge_core::groups::{cyclic, nonabelian21};
use bolforge_core::harness::{self, ClaimId, ClaimStatus, CorpusManifest, StandardChecker};
use bolforge_core::props::{self, names};
use bolforge_core::search::{construct_bruck_from_group, enumerate, ClassConstraint, SearchSpec};
use bolforge_core::{Element, LoopTable};

fn reps(n: usize, class: ClassConstraint) -> Vec<LoopTable> {
    enumerate(&SearchSpec::enumerate(n, class)).unwrap().representatives
}

fn left_bol_upto(n: usize) -> Vec<LoopTable> {
    (1..=n).flat_map(|k| reps(k, ClassConstraint::LeftBol)).collect()
}

fn all_loops(n: usize) -> Vec<LoopTable> {
    common::all_loops(n).iter().map(common::loop_of).collect()
}

#[test]
fn order_eight_bol_catalogue() {
    let left = reps(8, ClassConstraint::LeftBol);
    let right = reps(8, ClassConstraint::RightBol);
    let groups = reps(8, ClassConstraint::Associative);
    assert_eq!(groups.len(), 5);
    assert_eq!(left.len(), 11);
    assert_eq!(right.len(), 11);
    // no nonassociative Moufang loops below order 12
    assert_eq!(reps(8, ClassConstraint::Moufang), groups);
    let nonassoc = enumerate(&SearchSpec::enumerate(8, ClassConstraint::LeftBol).nonassociative()).unwrap();
    assert_eq!(nonassoc.representatives.len(), 6);
    for l in &nonassoc.representatives {
        assert!(props::is_left_bol(l).holds());
        assert!(!props::is_right_bol(l).holds());
    }
    let distinct: BTreeSet<&LoopTable> = left.iter().collect();
    assert_eq!(distinct.len(), left.len());
}

#[test]
fn transposes_of_left_bol_only_loops_are_right_bol() {
    let right: BTreeSet<LoopTable> = reps(8, ClassConstraint::RightBol).into_iter().collect();
    for l in reps(8, ClassConstraint::LeftBol) {
        let t = l.transpose();
        assert!(props::is_right_bol(&t).holds());
        if !props::is_moufang(&l).holds() {
            assert!(!props::is_right_bol(&l).holds());
            assert!(!props::is_left_bol(&t).holds());
        }
        let canon = bolforge_core::search::canonical_form(&t).unwrap();
        assert!(right.contains(&canon));
    }
}

#[test]
fn left_bol_loops_have_the_expected_structure() {
    for l in left_bol_upto(8) {
        for check in [props::has_lip, props::has_lap, props::is_power_associative, props::has_two_sided_inverses] {
            assert!(check(&l).holds(), "{l}");
        }
        assert_eq!(props::bol_elements(&l).len(), l.order());
        let comm = props::commutant(&l);
        let z = props::center(&l);
        assert!(z.is_subset_of(&comm));
        assert!(props::is_normal(&l, &z).unwrap().holds());
        assert!(props::is_subloop(&l, &comm).holds(), "{l}");
        assert!(props::is_twisted_closed(&l, &comm).holds());
        if l.order() % 2 == 1 {
            assert!(props::is_uniquely_2_divisible(&l).holds());
        }
    }
}

#[test]
fn first_order_five_loop_without_two_sided_inverses() {
    let l = all_loops(5)
        .into_iter()
        .find(|l| !props::has_two_sided_inverses(l).holds())
        .expect("order 5 has loops without two-sided inverses");
    let w = props::has_two_sided_inverses(&l).first_witness().cloned().unwrap();
    assert!(props::recheck(names::TWO_SIDED_INVERSES, &l, &w));
    let x = Element::new(w.indices()[0]);
    let left = (0..5).find(|&y| l.cell(y, x.index()) == 0).unwrap();
    let right = (0..5).find(|&y| l.cell(x.index(), y) == 0).unwrap();
    assert_ne!(left, right);
    assert!(l.inverse(x).is_err());
}

#[test]
fn non_bol_order_five_loop_failing_lip() {
    let l = all_loops(5)
        .into_iter()
        .find(|l| !props::is_left_bol(l).holds() && !props::has_lip(l).holds())
        .unwrap();
    let v = props::has_lip(&l);
    for w in v.witnesses() {
        assert!(props::recheck(names::LIP, &l, w));
    }
    let b = props::bol_elements(&l);
    assert!(b.len() < 5 && b.contains(l.identity()));
    // brute force per element
    for a in l.elements() {
        let bol = l.elements().all(|x| {
            l.elements().all(|y| l.mul(a, l.mul(x, l.mul(a, y))) == l.mul(l.mul(a, l.mul(x, a)), y))
        });
        assert_eq!(bol, b.contains(a));
    }
}

/// Every value of `x^k` over all bracketings.
fn bracketings(l: &LoopTable, x: Element, k: usize) -> BTreeSet<Element> {
    let mut memo: Vec<BTreeSet<Element>> = vec![BTreeSet::new(); k + 1];
    memo[1].insert(x);
    for m in 2..=k {
        let mut out = BTreeSet::new();
        for i in 1..m {
            for &a in &memo[i] {
                for &b in &memo[m - i] {
                    out.insert(l.mul(a, b));
                }
            }
        }
        memo[m] = out;
    }
    memo[k].clone()
}

#[test]
fn first_order_six_loop_with_ambiguous_fourth_powers() {
    let l = all_loops(6)
        .into_iter()
        .find(|l| l.elements().any(|x| bracketings(l, x, 4).len() > 1))
        .expect("some order-6 loop is not power-associative");
    let v = props::is_power_associative(&l);
    assert!(!v.holds());
    assert!(props::recheck(names::POWER_ASSOCIATIVE, &l, v.first_witness().unwrap()));
    // agreement with the bracketing oracle on a sample
    for l in all_loops(5) {
        let oracle = l.elements().all(|x| (1..=6).all(|k| bracketings(&l, x, k).len() == 1));
        assert_eq!(props::is_power_associative(&l).holds(), oracle);
    }
}

#[test]
fn harness_on_left_bol_corpus() {
    for l in left_bol_upto(8) {
        assert!(harness::check_lemma1(&l).is_verified(), "{l}");
        assert!(harness::check_lemma2(&l).is_verified(), "{l}");
        assert!(harness::check_glauberman_parity(&l).is_verified());
        assert!(harness::check_corollary(&l).is_verified());
        assert!(!harness::check_theorem1(&l).is_refuted());
        assert!(harness::check_center_normal(&l).is_verified());
    }
    let even_comm = reps(8, ClassConstraint::LeftBol)
        .into_iter()
        .find(|l| props::commutant(l).iter().any(|a| l.element_order(a) == 2))
        .unwrap();
    assert_eq!(
        harness::check_theorem1(&even_comm),
        ClaimStatus::HypothesisNotMet {
            hypothesis: "even-order commutant element".into()
        }
    );
    for l in reps(8, ClassConstraint::RightBol).iter().filter(|l| !props::is_left_bol(l).holds()) {
        assert_eq!(
            harness::check_lemma1(l),
            ClaimStatus::HypothesisNotMet {
                hypothesis: "not left Bol".into()
            }
        );
    }
}

#[test]
fn left_bol_only_loops_meet_only_the_center_claim() {
    let l = enumerate(&SearchSpec::enumerate(8, ClassConstraint::LeftBol).nonassociative())
        .unwrap()
        .representatives
        .remove(0);
    let statuses = harness::check_static_claims("l", &l);
    assert!(statuses[0].status.is_verified());
    assert!(statuses[1..].iter().all(|v| matches!(v.status, ClaimStatus::HypothesisNotMet { .. })));
}

#[test]
fn bruck_loop_of_order_21() {
    let l = construct_bruck_from_group(&nonabelian21()).unwrap();
    assert!(props::is_left_bol(&l).holds());
    assert!(!props::is_associative(&l).holds());
    for claim in [ClaimId::Theorem1, ClaimId::Corollary, ClaimId::Lemma1, ClaimId::Lemma2, ClaimId::GlaubermanParity] {
        assert!(harness::check_claim(claim, &l).is_verified(), "{claim}");
    }
    assert_eq!(construct_bruck_from_group(&cyclic(9)).unwrap(), cyclic(9));
}

#[test]
fn remark_two_sweep_up_to_six() {
    for n in 1..=6 {
        for l in all_loops(n) {
            let status = harness::check_remark2_extension(&l);
            assert!(!status.is_refuted(), "{l}");
            let s = props::bol_elements(&l).intersection(&props::commutant(&l));
            let all_odd = s.iter().all(|a| l.element_order(a) % 2 == 1);
            assert_eq!(status.is_verified(), all_odd);
        }
    }
}

#[test]
fn corpus_run_with_a_corrupted_file() {
    let dir = tempfile::tempdir().unwrap();
    let mut manifest = String::from("# small corpus\n");
    for (i, l) in reps(4, ClassConstraint::None).iter().enumerate() {
        let name = format!("l{i}.loop");
        std::fs::write(dir.path().join(&name), l.to_text()).unwrap();
        manifest.push_str(&format!("{name} THEOREM1=hypothesis-not-met\n"));
    }
    std::fs::write(dir.path().join("bad.loop"), "3\n0 1 2\n1 1 0\n2 0 1\n").unwrap();
    manifest.push_str("bad.loop\nmissing.loop\n");
    std::fs::write(dir.path().join("manifest.txt"), &manifest).unwrap();

    let m = CorpusManifest::load(&dir.path().join("manifest.txt")).unwrap();
    let report = harness::run_corpus(&m, &ClaimId::ALL, &StandardChecker);
    assert_eq!(report.loops.len(), 2);
    assert_eq!(report.counts.parse_errors, 2);
    assert!(report.errors["bad.loop"].contains("parse error"));
    assert_eq!(report.exit_code(), 0);
    // Z4 and the Klein group both have even-order commutant elements
    assert!(report.mismatches.is_empty(), "{:?}", report.mismatches);
}

#[test]
fn every_small_loop_passes_the_harness() {
    let loops: Vec<(String, LoopTable)> = (1..=6)
        .flat_map(|n| reps(n, ClassConstraint::None))
        .enumerate()
        .map(|(i, l)| (format!("{i:03}"), l))
        .collect();
    let report = harness::run_loops(&loops, &ClaimId::ALL, &StandardChecker);
    assert_eq!(report.counts.refuted, 0);
    assert_eq!(report.loops.len(), 1 + 1 + 1 + 2 + 6 + 109);
    assert!(report.counts.verified > 0 && report.counts.hypothesis_not_met > 0);
}
