use proptest::prelude::*;

use wildmcg::braid::{augmentation, cable, handle_reduce, word_equal, BraidWord};
use wildmcg::fission::{
    aut_expr, aut_perm_leaves, build_tree, canonical_form, extended_aut_expr,
    extended_aut_perm_ambient,
};
use wildmcg::linalg::Rational;
use wildmcg::permgroup::{
    block_permutation, gamma_s, juxtapose, BruteForceBound, GroupExpr, Notation, Permutation,
};
use wildmcg::rootsys::{
    fission_filtration, kernel_flag, setwise_stabilizer_bruteforce, IrregularType,
};
use wildmcg::wmcg::{analyze, AnalysisReport, AnalyzeOptions};

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn word(strands: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    let gens = if strands < 2 { 0 } else { strands as i32 - 1 };
    prop::collection::vec(
        (1..=gens.max(1), any::<bool>()),
        0..=if gens == 0 { 0 } else { max_len },
    )
    .prop_map(move |ls| {
        BraidWord::new(
            strands,
            ls.into_iter()
                .map(|(g, s)| if s { g } else { -g })
                .collect(),
        )
        .unwrap()
    })
}

fn type_a(max_n: usize, max_p: usize) -> impl Strategy<Value = IrregularType> {
    (1..=max_n, 1..=max_p)
        .prop_flat_map(|(n, p)| prop::collection::vec(prop::collection::vec(0i64..3, n), p))
        .prop_map(|c| {
            IrregularType::gl(
                c.into_iter()
                    .map(|row| row.into_iter().map(Rational::from_integer).collect())
                    .collect(),
            )
            .unwrap()
        })
}

fn group_expr() -> impl Strategy<Value = GroupExpr> {
    let leaf = prop_oneof![
        Just(GroupExpr::Trivial),
        (1usize..4).prop_map(GroupExpr::Symmetric)
    ];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..3).prop_map(GroupExpr::Product),
            ((1usize..4), inner).prop_map(|(k, b)| GroupExpr::wreath(GroupExpr::Symmetric(k), b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative_with_inverses(a in permutation(6), b in permutation(6), c in permutation(6)) {
        let ab_c = a.compose(&b).unwrap().compose(&c).unwrap();
        let a_bc = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(&ab_c, &a_bc);
        prop_assert!(a.compose(&a.inverse()).unwrap().is_identity());
    }

    #[test]
    fn cycle_notation_round_trips(a in permutation(7)) {
        prop_assert_eq!(Permutation::parse_cycles(&a.to_string(), 7).unwrap(), a);
    }

    #[test]
    fn block_permutation_is_a_homomorphism(a in permutation(3), b in permutation(3), widths in prop::collection::vec(1usize..4, 3)) {
        // Widths travel with the blocks, so the second factor sees them permuted.
        let moved: Vec<usize> = (0..3).map(|slot| widths[b.inverse().apply(slot)]).collect();
        let lhs = block_permutation(&a.compose(&b).unwrap(), &widths).unwrap();
        let rhs = block_permutation(&a, &moved).unwrap().compose(&block_permutation(&b, &widths).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gamma_with_identity_top_is_juxtaposition(t1 in permutation(2), t2 in permutation(3)) {
        let inner = vec![t1, t2];
        prop_assert_eq!(gamma_s(&Permutation::identity(2), &inner).unwrap(), juxtapose(&inner).unwrap());
    }

    #[test]
    fn cabling_commutes_with_augmentation(
        base in word(3, 6),
        i1 in word(2, 6), i2 in word(1, 0), i3 in word(3, 6),
    ) {
        let inner = vec![i1, i2, i3];
        let widths = [2, 1, 3];
        let lhs = augmentation(&cable(&base, &widths, &inner).unwrap());
        let rhs = gamma_s(&augmentation(&base), &inner.iter().map(augmentation).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn word_times_inverse_reduces_to_identity(w in word(4, 10)) {
        prop_assert!(handle_reduce(&w.concat(&w.inverse()).unwrap()).is_empty());
    }

    #[test]
    fn equal_braids_have_equal_permutations(a in word(4, 6), b in word(4, 6)) {
        if word_equal(&a, &b).unwrap() {
            prop_assert_eq!(augmentation(&a), augmentation(&b));
        }
        let reduced = handle_reduce(&a);
        prop_assert!(word_equal(&reduced, &a).unwrap());
        prop_assert_eq!(augmentation(&reduced), augmentation(&a));
    }

    #[test]
    fn canonical_expressions_are_stable(e in group_expr()) {
        let c = e.canonical();
        prop_assert_eq!(c.canonical(), c.clone());
        prop_assert_eq!(c.order(), e.order());
        for notation in [Notation::Ascii, Notation::Unicode] {
            let parsed = GroupExpr::parse(&c.render(notation)).unwrap();
            prop_assert!(parsed.canonically_equal(&c), "{} reparsed as {}", c.render(notation), parsed);
        }
    }

    #[test]
    fn tree_ranks_are_conserved(q in type_a(8, 4)) {
        let t = build_tree(&q).unwrap();
        let n = q.root_system().dim();
        for l in 1..=t.height() + 1 {
            prop_assert_eq!(t.level_ranks(l).iter().sum::<usize>(), n);
            for &v in t.level(l) {
                if l > 1 {
                    prop_assert_eq!(t.children(v).iter().map(|&c| t.rank(c)).sum::<usize>(), t.rank(v));
                }
            }
        }
    }

    #[test]
    fn relabeling_preserves_tree_invariants(q in type_a(7, 3), w in permutation(7)) {
        let n = q.root_system().dim();
        let w = Permutation::from_images(w.images().iter().copied().filter(|&x| x < n).collect()).unwrap();
        let moved = q.act(&w);
        let (t, u) = (build_tree(&q).unwrap(), build_tree(&moved).unwrap());
        prop_assert_eq!(canonical_form(&t), canonical_form(&u));
        prop_assert_eq!(aut_expr(&t), aut_expr(&u));
        prop_assert_eq!(extended_aut_expr(&t), extended_aut_expr(&u));
    }

    #[test]
    fn leaf_group_order_matches_expression(q in type_a(7, 3)) {
        let t = build_tree(&q).unwrap();
        let order = aut_perm_leaves(&t).unwrap().order(BruteForceBound::default()).unwrap();
        prop_assert_eq!(order as u128, aut_expr(&t).order());
    }

    #[test]
    fn extended_automorphisms_are_the_flag_stabilizer(q in type_a(6, 3)) {
        let b = BruteForceBound::default();
        let rs = q.root_system();
        let f = fission_filtration(&q).unwrap();
        let stab = setwise_stabilizer_bruteforce(rs, &kernel_flag(rs, &f), b).unwrap();
        let ext = extended_aut_perm_ambient(&build_tree(&q).unwrap()).unwrap();
        prop_assert!(stab.same_elements(&ext, b).unwrap());
    }

    #[test]
    fn reports_round_trip_through_json(q in type_a(5, 3)) {
        let r = analyze(&q, &AnalyzeOptions::default()).unwrap();
        let back: AnalysisReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(back, r);
        let doc = q.to_doc();
        let again = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        prop_assert_eq!(doc, again);
    }
}
