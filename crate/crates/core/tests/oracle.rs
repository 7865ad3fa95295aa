use cycgroups::classifier::{are_isomorphic, count_cyclic, paper_predicate, ClassLabel};
use cycgroups::constructions::{build_expr, catalog};
use cycgroups::oracle::{
    check_families_by_construction, enumerate_groups, enumerate_groups_with, lemma_sweep, verify_theorem,
    verify_theorem_with, EnumConfig, Mismatch,
};
use cycgroups::subgroups::check_counting_identities;
use cycgroups::Group;

#[test]
fn enumerated_groups_are_valid_and_pairwise_distinct() {
    for n in 1..=12 {
        let groups = enumerate_groups(n).unwrap();
        for (i, g) in groups.iter().enumerate() {
            assert_eq!(Group::validate_cayley(&g.rows()).unwrap(), *g);
            assert!(check_counting_identities(g).holds());
            for h in &groups[i + 1..] {
                assert!(!are_isomorphic(g, h), "order {n}");
            }
        }
        assert!(groups.windows(2).all(|w| w[0].rows() < w[1].rows()));
    }
}

#[test]
fn constructions_and_enumeration_agree() {
    let by_order: Vec<Vec<Group>> = (1..=12).map(|n| enumerate_groups(n).unwrap()).collect();
    for expr in catalog(12) {
        let g = expr.build().unwrap();
        let matches = by_order[g.order() - 1].iter().filter(|e| are_isomorphic(e, &g)).count();
        assert_eq!(matches, 1, "{expr}");
    }
}

#[test]
fn serial_and_parallel_runs_match() {
    let parallel = EnumConfig { jobs: 4, ..EnumConfig::default() };
    for n in [8, 12] {
        let a = enumerate_groups(n).unwrap();
        let b = enumerate_groups_with(n, &parallel).unwrap();
        assert_eq!(a, b);
    }
    assert_eq!(verify_theorem(10).unwrap().to_json(), verify_theorem_with(10, &parallel).unwrap().to_json());
}

#[test]
fn lemma_sweeps_up_to_twelve() {
    let three = lemma_sweep(3, 12).unwrap();
    assert_eq!(three.len(), 2);
    assert!(three.iter().all(|(_, l)| matches!(l, ClassLabel::CyclicPSquared(_))));
    assert_eq!(three.iter().map(|(g, _)| g.order()).collect::<Vec<_>>(), vec![4, 9]);

    let five = lemma_sweep(5, 12).unwrap();
    let labels: Vec<ClassLabel> = five.iter().map(|(_, l)| *l).collect();
    assert_eq!(labels, vec![ClassLabel::Sym3, ClassLabel::Quaternion8, ClassLabel::ElemAbelian3x3]);

    let four = lemma_sweep(4, 12).unwrap();
    let labels: Vec<ClassLabel> = four.iter().map(|(_, l)| *l).collect();
    assert_eq!(
        labels,
        vec![
            ClassLabel::PaperGap(4),
            ClassLabel::CyclicPQ(2, 3),
            ClassLabel::CyclicPCubed(2),
            ClassLabel::CyclicPQ(2, 5),
        ]
    );
}

#[test]
fn only_the_klein_group_falls_outside_the_list() {
    let report = verify_theorem(12).unwrap();
    let mismatches: Vec<_> = report.mismatches().collect();
    assert_eq!(mismatches.len(), 1);
    let (n, m) = mismatches[0];
    assert_eq!(n, 4);
    match m {
        Mismatch::PaperGap { cayley, count_cyclic, .. } => {
            assert_eq!(*count_cyclic, 4);
            let g = Group::validate_cayley(cayley).unwrap();
            assert!(are_isomorphic(&g, &build_expr("C2 x C2").unwrap()));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn families_beyond_the_enumeration_cap() {
    let labels = [
        ClassLabel::CyclicPFourth(2),
        ClassLabel::CyclicPFourth(3),
        ClassLabel::CyclicPCubed(5),
        ClassLabel::CyclicPQ(7, 11),
        ClassLabel::CyclicPQ(13, 17),
        ClassLabel::CyclicPSquared(13),
    ];
    for (label, count, recovered) in check_families_by_construction(&labels) {
        assert_eq!(Some(count), label.predicted_count(), "{label}");
        assert_eq!(recovered, label);
    }
}

#[test]
fn near_misses_have_more_than_five_cyclic_subgroups() {
    for t in ["C2 x C4", "D4", "C12", "C2 x C6", "D5", "S4", "Q16", "C3 x C6", "C2 x C2 x C2", "C5 x C5"] {
        let g = build_expr(t).unwrap();
        assert!(count_cyclic(&g) > 5, "{t}");
        assert!(matches!(paper_predicate(&g), ClassLabel::Outside(_)));
    }
}

#[test]
fn fourteen_groups_of_order_sixteen() {
    let cfg = EnumConfig { cap: 16, jobs: 4 };
    assert_eq!(enumerate_groups_with(16, &cfg).unwrap().len(), 14);
    assert_eq!(enumerate_groups_with(14, &cfg).unwrap().len(), 2);
    assert_eq!(enumerate_groups_with(15, &cfg).unwrap().len(), 1);
}
