mod common;

use common::{all_graphs, gnp};
use eqtree::exact::{cross_check_naive, exact_equitable_tree_k, va_eq, va_eq_star, SearchBudget, Verdict};
use eqtree::generators::{treewidth_gadget, SplitMix64};
use eqtree::verify;

fn pruned(g: &eqtree::Graph, k: usize) -> bool {
    match exact_equitable_tree_k(g, k, &SearchBudget::default()).unwrap().verdict {
        Verdict::Sat(c) => {
            assert!(verify(g, &c).unwrap().passed());
            true
        }
        Verdict::Unsat => false,
        Verdict::Indeterminate => panic!("budget exhausted on a tiny graph"),
    }
}

#[test]
fn agrees_with_enumeration_up_to_five_vertices() {
    for n in 1..=5 {
        for g in all_graphs(n) {
            for k in 1..=3 {
                assert_eq!(
                    pruned(&g, k),
                    cross_check_naive(&g, k).unwrap(),
                    "n={n} k={k} edges={:?}",
                    g.edges().collect::<Vec<_>>()
                );
            }
        }
    }
}

#[test]
fn agrees_with_enumeration_on_sampled_graphs() {
    let mut rng = SplitMix64::new(99);
    for _ in 0..40 {
        let n = 7 + rng.below(2) as usize;
        let g = gnp(n, 4 + rng.below(10), &mut rng);
        for k in 1..=3 {
            assert_eq!(pruned(&g, k), cross_check_naive(&g, k).unwrap());
        }
    }
}

#[test]
fn thresholds_are_consistent() {
    let mut rng = SplitMix64::new(3);
    for _ in 0..30 {
        let g = gnp(9, 8, &mut rng);
        let budget = SearchBudget::default();
        let low = va_eq(&g, &budget).unwrap();
        let high = va_eq_star(&g, &budget).unwrap();
        assert!(low <= high);
        assert!(pruned(&g, low));
        for k in high..=9 {
            assert!(pruned(&g, k));
        }
        if high > 1 {
            assert!(!pruned(&g, high - 1));
        }
    }
}

#[test]
fn small_gadget() {
    let g = treewidth_gadget(3, 3).unwrap();
    assert!(!pruned(&g, 2));
    assert!(pruned(&g, 3));
}
