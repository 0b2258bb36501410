//! Property tests for the algebraic invariants of the public API.

use proptest::prelude::*;

use foldings::freegroup::{Endo, Letter, Sign, Word};
use foldings::graph_pair::{FoldClass, LabeledGraphPair};
use foldings::labeled_graph::{expand_symbols, LabeledGraph, SubgroupGraph};
use foldings::mapping_torus::{MappingTorus, TorusLetter, TorusWord};

fn letter(rank: usize) -> impl Strategy<Value = Letter> {
    (0..rank, prop::bool::ANY)
        .prop_map(|(g, pos)| Letter::new(g, if pos { Sign::Plus } else { Sign::Minus }))
}

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(rank), 0..=max_len).prop_map(Word::reduce)
}

fn nonempty_word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    word(rank, max_len).prop_filter("nonempty", |w| !w.is_empty())
}

/// Elementary Nielsen automorphisms plus the injective squaring map.
#[derive(Clone, Copy, Debug)]
enum Elem {
    Swap(usize, usize),
    Invert(usize),
    Multiply(usize, usize, bool),
    Square(usize),
}

fn elem(rank: usize) -> impl Strategy<Value = Elem> {
    prop_oneof![
        (0..rank, 0..rank).prop_map(|(i, j)| Elem::Swap(i, j)),
        (0..rank).prop_map(Elem::Invert),
        (0..rank, 0..rank, prop::bool::ANY).prop_map(|(i, j, s)| Elem::Multiply(i, j, s)),
        (0..rank).prop_map(Elem::Square),
    ]
}

fn apply_elem(rank: usize, e: Elem) -> Endo {
    let mut images: Vec<Word> = (0..rank).map(Word::generator).collect();
    match e {
        Elem::Swap(i, j) => images.swap(i, j),
        Elem::Invert(i) => images[i] = images[i].inverse(),
        Elem::Multiply(i, j, positive) if i != j => {
            let factor =
                if positive { Word::generator(j) } else { Word::generator(j).inverse() };
            images[i] = images[i].concat(&factor);
        }
        Elem::Multiply(..) => {}
        Elem::Square(i) => images[i] = images[i].concat(&images[i].clone()),
    }
    Endo::new(images).unwrap()
}

/// Composition of at most `max` elementary maps; injective by construction.
fn injective_endo(rank: usize, max: usize) -> impl Strategy<Value = Endo> {
    prop::collection::vec(elem(rank), 0..=max).prop_map(move |es| {
        es.into_iter().fold(Endo::identity(rank), |acc, e| apply_elem(rank, e).compose(&acc))
    })
}

proptest! {
    #[test]
    fn reduce_is_idempotent_and_subadditive(u in word(3, 12), v in word(3, 12)) {
        let product = u.concat(&v);
        prop_assert_eq!(Word::reduce(product.letters().iter().copied()), product.clone());
        prop_assert!(product.len() <= u.len() + v.len());
    }

    #[test]
    fn apply_is_a_homomorphism(phi in injective_endo(3, 5), u in word(3, 8), v in word(3, 8)) {
        prop_assert_eq!(phi.apply(&u.concat(&v)), phi.apply(&u).concat(&phi.apply(&v)));
    }

    #[test]
    fn power_is_additive(phi in injective_endo(3, 3), a in 0usize..3, b in 0usize..3) {
        prop_assert_eq!(phi.power(a + b), phi.power(a).compose(&phi.power(b)));
    }

    #[test]
    fn elementary_compositions_are_injective(phi in injective_endo(4, 6)) {
        prop_assert!(phi.is_injective());
    }

    #[test]
    fn coincident_images_are_never_injective(
        w in nonempty_word(3, 5),
        filler in nonempty_word(3, 5),
    ) {
        let phi = Endo::new(vec![w.clone(), w, filler]).unwrap();
        prop_assert!(!phi.is_injective());
    }

    #[test]
    fn tighten_yields_tight_graph_of_bounded_rank(
        ws in prop::collection::vec(nonempty_word(3, 6), 0..5),
    ) {
        let g = LabeledGraph::bouquet(3, &ws).unwrap();
        let (tight, trace) = g.tighten();
        prop_assert!(tight.is_tight());
        prop_assert!(tight.rank() <= ws.len());
        prop_assert_eq!(trace.len(), g.num_edges() - tight.num_edges());
        // determinism: a second run is byte-identical
        let (tight2, trace2) = g.tighten();
        prop_assert_eq!(tight, tight2);
        prop_assert_eq!(trace, trace2);
    }

    #[test]
    fn folding_preserves_the_subgroup(
        ws in prop::collection::vec(nonempty_word(3, 6), 1..5),
    ) {
        let g = LabeledGraph::bouquet(3, &ws).unwrap();
        if let Some((e1, e2)) = g.find_violation() {
            let (folded, _) = g.fold(e1, e2).unwrap();
            let (t1, _) = folded.tighten();
            let (t2, _) = g.tighten();
            prop_assert!(t1.is_isomorphic_based(&t2));
        }
    }

    #[test]
    fn express_in_basis_round_trips(
        ws in prop::collection::vec(nonempty_word(3, 5), 1..4),
        symbols in prop::collection::vec((0usize..8, prop::bool::ANY), 0..5),
    ) {
        let (tight, _) = LabeledGraph::bouquet(3, &ws).unwrap().tighten();
        let tree = tight.spanning_tree();
        let basis = tight.basis_from_tree(&tree);
        prop_assert_eq!(basis.len(), tight.rank());
        if basis.is_empty() {
            return Ok(());
        }
        let member = expand_symbols(
            &Word::reduce(symbols.into_iter().map(|(g, pos)| {
                Letter::new(g % basis.len(), if pos { Sign::Plus } else { Sign::Minus })
            })),
            &basis,
        );
        let expr = tight.express_in_basis(&tree, &member).unwrap();
        prop_assert_eq!(expand_symbols(&expr, &basis), member);
    }

    #[test]
    fn subgroup_graph_expression_round_trips(
        ws in prop::collection::vec(nonempty_word(3, 5), 1..4),
        symbols in prop::collection::vec((0usize..8, prop::bool::ANY), 0..5),
    ) {
        let sg = SubgroupGraph::new(3, &ws).unwrap();
        let member = expand_symbols(
            &Word::reduce(symbols.into_iter().map(|(g, pos)| {
                Letter::new(g % ws.len(), if pos { Sign::Plus } else { Sign::Minus })
            })),
            &ws,
        );
        let expr = sg.express(&member).unwrap();
        prop_assert_eq!(expand_symbols(&expr, &ws), member);
    }

    #[test]
    fn pair_tightening_invariants(
        phi in injective_endo(3, 4),
        gens in prop::collection::vec(nonempty_word(3, 5), 1..4),
    ) {
        let pair = LabeledGraphPair::initial(&phi, &gens).unwrap();
        prop_assert!(pair.is_invariant(&phi));
        let (tight, trace) = pair.tighten(&phi);
        prop_assert!(tight.is_tight());
        prop_assert!(tight.relative_rank() <= pair.relative_rank());
        prop_assert!(tight.is_invariant(&phi));

        // step-by-step: monotone relative rank, strict drops where promised,
        // invariance everywhere
        let chain = trace.replay(&pair, &phi);
        for (k, rec) in trace.records.iter().enumerate() {
            let before = &chain[k];
            let after = &chain[k + 1];
            prop_assert!(after.relative_rank() <= before.relative_rank());
            let e1 = before.z().edge(rec.record.kept);
            let e2 = before.z().edge(rec.record.removed);
            let bigon = e1.origin == e2.origin && e1.terminus == e2.terminus;
            let in_x = before.x_marker().contains_edge(rec.record.kept)
                && before.x_marker().contains_edge(rec.record.removed);
            if bigon && !in_x {
                prop_assert!(after.relative_rank() < before.relative_rank());
            }
            if matches!(rec.class, FoldClass::Exceptional { .. }) && rec.added_loop.is_none() {
                prop_assert!(after.relative_rank() < before.relative_rank());
            }
            prop_assert!(after.is_invariant(&phi));
        }

        // old X-members stay members of the image subgraph
        let (xg, _, _) = pair.x_graph();
        let (x_tight, _) = xg.tighten();
        let x_basis = x_tight.basis_from_tree(&x_tight.spanning_tree());
        let (final_x, _, _) = tight.x_graph();
        let (final_x_tight, _) = final_x.tighten();
        for b in &x_basis {
            prop_assert!(final_x_tight.is_member(b));
        }
    }

    #[test]
    fn normalize_matches_stable_exponent(
        phi in injective_endo(3, 4),
        letters in prop::collection::vec(
            prop_oneof![
                (0usize..3, prop::bool::ANY).prop_map(|(g, pos)| TorusLetter::Free(
                    Letter::new(g, if pos { Sign::Plus } else { Sign::Minus })
                )),
                prop::bool::ANY.prop_map(|pos| TorusLetter::Stable(
                    if pos { Sign::Plus } else { Sign::Minus }
                )),
            ],
            0..10,
        ),
    ) {
        let torus = MappingTorus::new(phi).unwrap();
        let w = TorusWord::new(letters);
        let nf = torus.normalize(&w);
        prop_assert_eq!(nf.r as i64 - nf.q as i64, w.p_hom());
        // canonicity: no Britton reduction left
        if nf.q > 0 && nf.r > 0 {
            prop_assert!(torus.phi_preimage(&nf.x).is_none());
        }
        // the normal form represents the same element
        prop_assert!(torus.equal(&w, &nf.as_torus_word()));
        // equality is reflexive and symmetric on this sample
        prop_assert!(torus.equal(&w, &w));
    }
}
