mod common;

use kacmoody::cartan::{connected_simply_laced_diagrams, diagrams, CartanType, GeneralizedCartanMatrix};
use kacmoody::extweyl::{act_on_root_lattice, kp_relation_schemas};
use kacmoody::roots::{
    commutation_interval, enumerate_real_roots, is_prenilpotent, prenilpotent_by_interval, simple_reflection, Root,
};
use proptest::prelude::*;

fn permuted(g: &GeneralizedCartanMatrix, p: &[usize]) -> GeneralizedCartanMatrix {
    let n = g.rank();
    let e: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| g.entry(p[i], p[j])).collect()).collect();
    GeneralizedCartanMatrix::simply_laced(e).unwrap()
}

#[test]
fn classification_matches_eigenvalues() {
    for n in 1..=5 {
        for g in connected_simply_laced_diagrams(n) {
            assert_eq!(g.classify().unwrap(), common::eigen_type(g.entries()), "{:?}", g.entries());
        }
    }
}

#[test]
fn hyperbolic_rank4_matches_subset_oracle() {
    let all = connected_simply_laced_diagrams(4);
    let ours: Vec<_> = all.iter().filter(|g| g.is_hyperbolic().unwrap()).collect();
    let oracle: Vec<_> = all.iter().filter(|g| common::hyperbolic_by_subsets(g.entries())).collect();
    assert_eq!(ours, oracle);
    assert!(!ours.is_empty());
    for g in &ours {
        assert_eq!(g.classify().unwrap(), CartanType::Indefinite);
    }
    assert!(diagrams::triangle_with_pendant().is_hyperbolic().unwrap());
    assert!(common::hyperbolic_by_subsets(diagrams::e10().entries()));
}

#[test]
fn classify_is_permutation_invariant() {
    let g = diagrams::triangle_with_pendant();
    for p in [[1, 0, 2, 3], [3, 2, 1, 0], [2, 3, 0, 1]] {
        let h = permuted(&g, &p);
        assert_eq!(h.classify().unwrap(), g.classify().unwrap());
        assert_eq!(h.is_hyperbolic().unwrap(), g.is_hyperbolic().unwrap());
    }
}

#[test]
fn enumerated_roots_match_norm_scan() {
    for (g, bound) in [
        (diagrams::a(2), 3),
        (diagrams::a(4), 5),
        (diagrams::triangle_with_pendant(), 3),
        (diagrams::triangle_with_pendant(), 5),
        (diagrams::square_with_diagonal(), 4),
    ] {
        let set = enumerate_real_roots(&g, bound).unwrap();
        let ours: std::collections::BTreeSet<Vec<i64>> = set.roots().iter().map(|r| r.0.clone()).collect();
        assert_eq!(ours, common::real_roots_by_scan(g.entries(), bound));
        for r in set.roots() {
            assert_eq!(r.norm(&g), 2);
            assert!(set.contains(&-r));
        }
    }
}

#[test]
fn interval_matches_brute_force() {
    for g in [diagrams::triangle_with_pendant(), diagrams::a(3)] {
        let set = enumerate_real_roots(&g, 3).unwrap();
        let roots: Vec<&Root> = set.roots().iter().collect();
        for a in &roots {
            for b in &roots {
                if **a == -*b {
                    assert!(!is_prenilpotent(&set, a, b).unwrap());
                    continue;
                }
                let p = g.bilinear_form(&a.0, &b.0).unwrap();
                let fast = is_prenilpotent(&set, a, b).unwrap();
                assert_eq!(fast, prenilpotent_by_interval(&g, a, b).unwrap());
                if !fast || p <= -2 {
                    continue;
                }
                let mut brute = Vec::new();
                for m in 1..=10 {
                    for n in 1..=10 {
                        let v = a.scaled_sum(m, b, n);
                        if v.is_positive() && common::norm(g.entries(), &v.0) == 2 && common::is_real(g.entries(), &v.0) {
                            brute.push((m, n, v));
                        }
                    }
                }
                let ours: Vec<_> =
                    commutation_interval(&set, a, b).unwrap().into_iter().map(|t| (t.m, t.n, t.root)).collect();
                assert_eq!(ours, brute, "{a} {b}");
            }
        }
    }
}

#[test]
fn weyl_schemas_agree_on_lattice() {
    for g in [diagrams::triangle_with_pendant(), diagrams::e10()] {
        let n = g.rank();
        for rel in kp_relation_schemas(&g) {
            for i in 0..n {
                let a = Root::simple(n, i);
                assert_eq!(act_on_root_lattice(&g, &rel.lhs, &a), act_on_root_lattice(&g, &rel.rhs, &a));
            }
        }
    }
}

proptest! {
    #[test]
    fn reflections_preserve_form(x in prop::collection::vec(-4i64..5, 4), y in prop::collection::vec(-4i64..5, 4), i in 0usize..4) {
        let g = diagrams::triangle_with_pendant();
        let (rx, ry) = (Root(x.clone()), Root(y.clone()));
        let (wx, wy) = (simple_reflection(&g, i, &rx), simple_reflection(&g, i, &ry));
        prop_assert_eq!(g.bilinear_form(&wx.0, &wy.0).unwrap(), g.bilinear_form(&x, &y).unwrap());
        prop_assert_eq!(simple_reflection(&g, i, &wx), rx);
        prop_assert_eq!(g.bilinear_form(&x, &y).unwrap(), g.bilinear_form(&y, &x).unwrap());
    }

    #[test]
    fn words_preserve_form(letters in prop::collection::vec((0usize..4, any::<bool>()), 0..8), x in prop::collection::vec(-3i64..4, 4), y in prop::collection::vec(-3i64..4, 4)) {
        use kacmoody::extweyl::{ExtWeylWord, WeylLetter};
        let g = diagrams::triangle_with_pendant();
        let w = ExtWeylWord::from_letters(letters.into_iter().map(|(node, inverse)| WeylLetter { node, inverse }));
        let (wx, wy) = (act_on_root_lattice(&g, &w, &Root(x.clone())), act_on_root_lattice(&g, &w, &Root(y.clone())));
        prop_assert_eq!(g.bilinear_form(&wx.0, &wy.0).unwrap(), g.bilinear_form(&x, &y).unwrap());
    }
}
