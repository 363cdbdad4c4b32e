//! Property tests for the invariants that tie the modules together.

use num_rational::BigRational;
use proptest::prelude::*;

use word_measures::characters::{stable_inner, Basis};
use word_measures::morphisms::{enumerate_valid_partitions, PartitionSearch};
use word_measures::oracle::{evaluate_word, exact_expectation, ExactBudget};
use word_measures::schreier::build_schreier;
use word_measures::wordstats::{decide_conjugate, expectation};
use word_measures::{ClassFunction, CyclicWord, GraphMorphism, Letter, MultiCoreGraph, OracleValue, Perm, Word};

fn word_strategy(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..2 * rank, 0..=max_len)
        .prop_map(move |keys| Word::new(rank, keys.into_iter().map(Letter::from_key)).unwrap())
}

fn nontrivial_word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    word_strategy(rank, max_len).prop_filter("non-trivial", |w| !w.is_identity())
}

fn perm_strategy(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|image| Perm::from_images(image).unwrap())
}

/// Polynomials in `ξ₁, ξ₂, ξ₃` with small integer coefficients.
fn class_function_strategy() -> impl Strategy<Value = ClassFunction> {
    prop::collection::vec((prop::collection::vec(0u32..3, 0..=3), -3i64..=3), 0..4).prop_map(|terms| {
        ClassFunction::from_terms(
            Basis::Xi,
            terms.into_iter().map(|(m, c)| (m, BigRational::from_integer(c.into()))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn words_form_a_group(u in word_strategy(2, 8), v in word_strategy(2, 8)) {
        let uv = u.multiply(&v).unwrap();
        prop_assert!(uv.multiply(&v.inverse()).unwrap() == u);
        prop_assert!(u.multiply(&u.inverse()).unwrap().is_identity());
        prop_assert_eq!(uv.inverse(), v.inverse().multiply(&u.inverse()).unwrap());
    }

    #[test]
    fn printed_words_parse_back(w in nontrivial_word(3, 10)) {
        prop_assert_eq!(Word::parse(&w.to_string(), 3).unwrap(), w);
    }

    #[test]
    fn cyclic_reduction_is_conjugation_invariant(w in nontrivial_word(2, 8), g in word_strategy(2, 4)) {
        let conj = g.multiply(&w).unwrap().multiply(&g.inverse()).unwrap();
        let a = CyclicWord::from_word(&w).unwrap();
        let b = CyclicWord::from_word(&conj).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn words_evaluate_as_homomorphisms(
        u in word_strategy(2, 6),
        v in word_strategy(2, 6),
        s in perm_strategy(6),
        t in perm_strategy(6),
    ) {
        let perms = [s, t];
        let uv = evaluate_word(&u.multiply(&v).unwrap(), &perms).unwrap();
        let separately = evaluate_word(&u, &perms).unwrap().then(&evaluate_word(&v, &perms).unwrap());
        prop_assert_eq!(uv, separately);
    }

    #[test]
    fn cycle_counts_partition_the_points(s in perm_strategy(9)) {
        let counts = s.cycle_counts();
        let total: usize = counts.iter().enumerate().map(|(i, c)| (i + 1) * c).sum();
        prop_assert_eq!(total, 9);
        prop_assert_eq!(s.inverse().cycle_counts(), counts);
        prop_assert_eq!(s.then(&s.inverse()), Perm::identity(9));
    }

    #[test]
    fn basis_change_round_trips(f in class_function_strategy()) {
        prop_assert_eq!(f.to_basis(Basis::A).to_basis(Basis::Xi), f);
    }

    #[test]
    fn class_functions_evaluate_consistently(f in class_function_strategy(), s in perm_strategy(7)) {
        let a = f.to_basis(Basis::A);
        prop_assert_eq!(f.evaluate(&s.cycle_counts()), a.evaluate(&s.cycle_counts()));
    }

    #[test]
    fn stable_inner_is_symmetric_and_bilinear(
        f in class_function_strategy(),
        g in class_function_strategy(),
        h in class_function_strategy(),
    ) {
        prop_assert_eq!(stable_inner(&f, &g), stable_inner(&g, &f));
        let sum = &g + &h;
        prop_assert_eq!(stable_inner(&f, &sum), stable_inner(&f, &g) + stable_inner(&f, &h));
        prop_assert!(stable_inner(&f, &f) >= BigRational::from_integer(0.into()));
    }

    #[test]
    fn quotients_of_cycles_are_folded(w in nontrivial_word(2, 6)) {
        let g = MultiCoreGraph::cycle(&CyclicWord::from_word(&w).unwrap());
        for p in enumerate_valid_partitions(&g, None, &PartitionSearch::default()).unwrap() {
            let q = GraphMorphism::quotient(&g, &p.partition).unwrap();
            prop_assert!(q.is_surjective());
            prop_assert_eq!(q.codomain().chi(), p.chi());
            prop_assert!(q.codomain().chi() >= g.chi() - (g.num_vertices() as i64 - 1));
        }
    }

    #[test]
    fn conjugates_are_recognised(w in nontrivial_word(2, 6), g in word_strategy(2, 3)) {
        let conj = g.multiply(&w).unwrap().multiply(&g.inverse()).unwrap();
        let (decided, evidence) = decide_conjugate(&w, &conj).unwrap();
        prop_assert!(decided);
        prop_assert!(evidence.one_component_aligned > 0);
    }

    #[test]
    fn schreier_graphs_are_regular(s in perm_strategy(5), t in perm_strategy(5), tuple in 1usize..=2) {
        let g = build_schreier(tuple, vec![s, t], 1000).unwrap();
        let a = g.adjacency();
        for i in 0..g.num_vertices() {
            let row: f64 = (0..g.num_vertices()).map(|j| a[(i, j)]).sum();
            prop_assert_eq!(row, 4.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The lift-term sum is the expectation at every `N`, including those
    /// below the threshold of the closed form.
    #[test]
    fn expectations_match_brute_force(
        w in nontrivial_word(2, 4),
        alpha in prop::sample::select(vec![vec![1usize], vec![2], vec![0, 1], vec![1, 1]]),
        n in 1usize..=4,
    ) {
        let report = expectation(&w, &alpha, &PartitionSearch::default()).unwrap();
        let f = ClassFunction::xi_monomial(&alpha);
        let oracle = exact_expectation(&w, &f, n, &ExactBudget::default()).unwrap();
        let OracleValue::Exact(truth) = oracle.value else { unreachable!() };
        prop_assert_eq!(report.terms.value(n as u64), truth.clone());
        if n as u64 >= report.rational.n_min() {
            prop_assert_eq!(report.rational.eval(n as u64), Some(truth));
        }
    }
}
