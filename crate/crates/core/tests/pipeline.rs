//! End-to-end runs: words to graphs to rational functions, checked against
//! the brute-force and sampling oracles.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use word_measures::morphisms::PartitionSearch;
use word_measures::oracle::{exact_common_fixed_points, exact_expectation, lift_count_expectation, mc_expectation, ExactBudget};
use word_measures::phi::phi;
use word_measures::wordstats::expectation_of;
use word_measures::{ClassFunction, CyclicWord, GraphMorphism, MultiCoreGraph, OracleValue, Word};

fn exact(v: &OracleValue) -> BigRational {
    match v {
        OracleValue::Exact(x) => x.clone(),
        OracleValue::Estimate { .. } => panic!("expected an exact value"),
    }
}

#[test]
fn cycle_statistics_match_brute_force() {
    let opts = PartitionSearch::default();
    for (w, stat) in [("xxyy", "a2"), ("xyXY", "(a1 - 1)*(a1 - 2)/2 - a2"), ("xxy", "xi1^2 - xi2"), ("xyxY", "a1*a2")] {
        let w = Word::parse(w, 2).unwrap();
        let f = ClassFunction::parse(stat).unwrap();
        let e = expectation_of(&w, &f, &opts).unwrap();
        for n in 1..=5 {
            let oracle = exact_expectation(&w, &f, n, &ExactBudget::default()).unwrap();
            assert_eq!(e.value(n as u64), exact(&oracle.value), "{w} {stat} N={n}");
        }
    }
}

#[test]
fn sampling_agrees_with_the_closed_form() {
    let w = Word::parse("xyXY", 2).unwrap();
    let f = ClassFunction::xi(1);
    let e = expectation_of(&w, &f, &PartitionSearch::default()).unwrap();
    let truth = e.value(8).to_f64().unwrap();
    let est = mc_expectation(&w, &f, 8, 20_000, 3).unwrap();
    assert!((est.value.as_f64() - truth).abs() < 5.0 * est.value.std_error(), "{} vs {truth}", est.value);
    // Same seed, same estimate.
    assert_eq!(mc_expectation(&w, &f, 8, 20_000, 3).unwrap().value, est.value);
}

#[test]
fn lift_counts_average_to_phi() {
    let g = MultiCoreGraph::cycle(&CyclicWord::parse("xyXY", 2).unwrap());
    let eta = GraphMorphism::to_bouquet(&g);
    let truth = phi(&eta, &PartitionSearch::default()).unwrap().eval(7).unwrap().to_f64().unwrap();
    let est = lift_count_expectation(&eta, 7, 20_000, 11).unwrap();
    assert!((est.value.as_f64() - truth).abs() < 5.0 * est.value.std_error(), "{} vs {truth}", est.value);
}

#[test]
fn subgroup_fixed_points_match_phi() {
    let gens = vec![Word::parse("x", 2).unwrap(), Word::parse("yxY", 2).unwrap()];
    let (core, _) = MultiCoreGraph::subgroup(&gens).unwrap();
    let f = phi(&GraphMorphism::to_bouquet(&core), &PartitionSearch::default()).unwrap();
    for n in (f.n_min().max(1) as usize)..=5 {
        let oracle = exact_common_fixed_points(&[gens.clone()], n, &ExactBudget::default()).unwrap();
        assert_eq!(f.eval(n as u64).unwrap(), exact(&oracle.value), "N={n}");
    }
}
