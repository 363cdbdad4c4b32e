//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the verdicts are always printed; the
//! process exits non-zero when any criterion fails. The Schreier bound smoke
//! test is a statement about large random graphs and is flagged rather than
//! failed when too few trials land below the bound.

use std::collections::{BTreeSet, HashSet};
use std::panic;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use word_measures::characters::{
    dimension_poly, fixed_tuples_character, stable_inner, stable_irreducible, Basis,
};
use word_measures::combinatorics::{divisors, integer_partitions};
use word_measures::graphs::CanonicalForm;
use word_measures::morphisms::{
    b_norm, enumerate_valid_partitions, immediate_morphism_norm_oracle, is_free, norm, OracleBudget, PartitionSearch,
    QuotientLattice,
};
use word_measures::oracle::{exact_expectation, ExactBudget};
use word_measures::phi::{phi, LiftSum, MoebiusTables};
use word_measures::schreier::{
    bound_experiment, build_random_schreier, hashimoto_spectrum, ramanujan_bound, trace_identity_check,
};
use word_measures::words::{cyclically_reduced_count, enumerate_cyclically_reduced};
use word_measures::wordstats::{chi_ak_max, decide_conjugate, e_unif_monomial, expectation, primitivity};
use word_measures::{RationalFnOfN, ClassFunction, CyclicWord, GraphMorphism, IntPartition, MultiCoreGraph, OracleValue, Perm, Word};

/// Outcome of one criterion: details on success, the first discrepancy on
/// failure.
type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn opts() -> PartitionSearch {
    PartitionSearch::default()
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn word(s: &str) -> Word {
    Word::parse(s, 2).unwrap()
}

fn cycle(s: &str, r: usize) -> MultiCoreGraph {
    MultiCoreGraph::cycle(&CyclicWord::parse(s, r).unwrap())
}

fn exact(v: &OracleValue) -> BigRational {
    match v {
        OracleValue::Exact(x) => x.clone(),
        OracleValue::Estimate { .. } => panic!("exact oracle returned an estimate"),
    }
}

fn xi1_minus_one() -> ClassFunction {
    ClassFunction::parse("xi1 - 1").unwrap()
}

/// 1. The commutator formula for `ξ₁ξ₂`, and its value at `N = 6` against
/// all of `S₆²`.
fn criterion_1() -> Outcome {
    let w = word("xyXY");
    let report = expectation(&w, &[1, 1], &opts()).map_err(|e| e.to_string())?;
    let f = &report.rational;
    let expected = "3 + 4*(N^4 - 9*N^3 + 23*N^2 - 13*N - 1)/(N*(N-1)*(N-2)*(N-3)*(N-5))";
    ensure!(f.to_string() == expected, "got {f}");
    // Coefficient-exact check of the reduced fraction, up to a common unit.
    let (num, den) = (f.numerator().clone(), f.denominator());
    let mul = |p: &[i64], root: i64| -> Vec<i64> {
        let mut out = vec![0; p.len() + 1];
        for (i, &c) in p.iter().enumerate() {
            out[i + 1] += c;
            out[i] -= root * c;
        }
        out
    };
    let den_expected = [0, 1, 2, 3, 5].iter().fold(vec![1i64], |p, &k| mul(&p, k));
    let mut num_expected: Vec<i64> = den_expected.iter().map(|c| 3 * c).collect();
    for (i, c) in [-1i64, -13, 23, -9, 1].iter().enumerate() {
        num_expected[i] += 4 * c;
    }
    let normalise = |p: &[BigInt], lead: &BigInt| -> Vec<BigRational> {
        p.iter().map(|c| BigRational::new(c.clone(), lead.clone())).collect()
    };
    let big = |p: &[i64]| p.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
    let lead = den.coeffs().last().unwrap().clone();
    ensure!(
        normalise(num.coeffs(), &lead) == normalise(&big(&num_expected), &BigInt::one())
            && normalise(den.coeffs(), &lead) == normalise(&big(&den_expected), &BigInt::one()),
        "coefficients differ: {:?} / {:?}",
        num.coeffs(),
        den.coeffs()
    );
    ensure!(f.n_min() == 6, "n_min = {}", f.n_min());
    let at_six = f.eval(6).ok_or("no value at N = 6")?;
    let start = Instant::now();
    let oracle = exact_expectation(&w, &ClassFunction::xi_monomial(&[1, 1]), 6, &ExactBudget::default())
        .map_err(|e| e.to_string())?;
    ensure!(oracle.samples == 518_400, "visited {} tuples", oracle.samples);
    ensure!(exact(&oracle.value) == at_six, "oracle {} vs {}", oracle.value, at_six);
    Ok(format!(
        "value at N=6 is {at_six} on all 518400 tuples of S6^2 ({:.1}s)",
        start.elapsed().as_secs_f64()
    ))
}

/// 2. Closed forms against brute force for every cyclically reduced word of
/// length at most four.
fn criterion_2() -> Outcome {
    let monomials: [&[usize]; 4] = [&[1], &[2], &[0, 1], &[1, 1]];
    let mut words = Vec::new();
    for t in 1..=4 {
        words.extend(enumerate_cyclically_reduced(2, t, 1000).map_err(|e| e.to_string())?);
    }
    let (mut closed, mut all_n) = (0, 0);
    for w in &words {
        for alpha in monomials {
            let report = expectation(w, alpha, &opts()).map_err(|e| format!("{w} {alpha:?}: {e}"))?;
            let f = ClassFunction::xi_monomial(alpha);
            let n_min = report.rational.n_min();
            for n in 1..=5u64 {
                let oracle = exact_expectation(w, &f, n as usize, &ExactBudget::default()).map_err(|e| e.to_string())?;
                let truth = exact(&oracle.value);
                ensure!(report.terms.value(n) == truth, "{w} {alpha:?} N={n}: lift terms disagree");
                all_n += 1;
                if n >= n_min.max(3) {
                    let v = report.rational.eval(n).ok_or(format!("{w} {alpha:?}: pole at {n}"))?;
                    ensure!(v == truth, "{w} {alpha:?} N={n}: {v} vs {truth}");
                    closed += 1;
                }
            }
        }
    }
    Ok(format!(
        "{} words x 4 monomials: {closed} closed-form values and {all_n} lift-term values match",
        words.len()
    ))
}

/// 3. Primitivity ranks and critical subgroups.
fn criterion_3() -> Outcome {
    let x = primitivity(&word("x"), &opts()).map_err(|e| e.to_string())?;
    ensure!(x.pi.is_none() && x.crit.is_empty(), "pi(x) = {:?}", x.pi);
    for m in 2..=6usize {
        let report = primitivity(&word(&format!("x^{m}")), &opts()).map_err(|e| e.to_string())?;
        ensure!(report.pi == Some(1), "pi(x^{m}) = {:?}", report.pi);
        let mut found = BTreeSet::new();
        for d in &report.crit {
            let h = d.middle();
            ensure!(h.num_components() == 1, "x^{m}: disconnected critical graph");
            ensure!(h.edges().iter().all(|e| e.label == 0), "x^{m}: critical graph uses y");
            ensure!(h == &cycle(&format!("x^{}", h.num_vertices()), 2), "x^{m}: not a cycle of x");
            found.insert(h.num_vertices() as u64);
        }
        let expected: BTreeSet<u64> = divisors(m as u64).into_iter().filter(|&d| d < m as u64).collect();
        ensure!(found == expected && report.crit.len() == expected.len(), "Crit(x^{m}) = {found:?}");
    }
    let c = primitivity(&word("xyXY"), &opts()).map_err(|e| e.to_string())?;
    ensure!(c.pi == Some(2) && c.crit.len() == 1, "pi(xyXY) = {:?}, |Crit| = {}", c.pi, c.crit.len());
    ensure!(c.crit[0].middle() == &MultiCoreGraph::bouquet(2), "Crit(xyXY) is not the whole group");
    Ok("pi(x)=inf; Crit(x^m) = {<x^d> : d|m, d<m} for m<=6, |Crit(x^6)|=3; pi(xyXY)=2, |Crit|=1".into())
}

/// 4. First correction `c·N⁻¹` for `ξ₂` and `ξ₁ξ₂` on the commutator.
fn criterion_4() -> Outcome {
    let w = word("xyXY");
    let mut details = Vec::new();
    for (alpha, expected) in [(&[0usize, 1][..], 1i64), (&[1, 1][..], 4)] {
        let report = expectation(&w, alpha, &opts()).map_err(|e| e.to_string())?;
        let series = report.rational.laurent(5);
        ensure!(series.coefficient(0) == Some(report.e_unif.clone()), "{alpha:?}: constant term");
        let c = stable_inner(&ClassFunction::xi_monomial(alpha), &xi1_minus_one());
        ensure!(c == q(expected), "{alpha:?}: inner product {c}");
        ensure!(series.coefficient(-1) == Some(c.clone()), "{alpha:?}: N^-1 coefficient {:?}", series.coefficient(-1));
        ensure!(report.predicted_correction() == Some((-1, c.clone())), "{alpha:?}: predicted correction");
        details.push(format!("{alpha:?}: {c}/N"));
    }
    Ok(details.join(", "))
}

/// 5. `χ^max` and the size of `Crit_α` for the commutator.
fn criterion_5() -> Outcome {
    let w = word("xyXY");
    let crit = primitivity(&w, &opts()).map_err(|e| e.to_string())?.crit.len();
    let mut details = Vec::new();
    for alpha in [&[1usize][..], &[2], &[0, 1], &[1, 1]] {
        let report = chi_ak_max(&w, alpha, &opts()).map_err(|e| e.to_string())?;
        let c = stable_inner(&ClassFunction::xi_monomial(alpha), &xi1_minus_one());
        let expected = c * BigRational::from_integer(crit.into());
        ensure!(report.chi_max == Some(-1), "{alpha:?}: chi_max {:?}", report.chi_max);
        ensure!(q(report.critical.len() as i64) == expected, "{alpha:?}: |Crit| {} vs {expected}", report.critical.len());
        let distinct: HashSet<_> = report.critical.iter().map(|d| d.partition.clone()).collect();
        ensure!(distinct.len() == report.critical.len(), "{alpha:?}: repeated critical morphisms");
        details.push(format!("{alpha:?}: {}", report.critical.len()));
    }
    Ok(format!("chi_max = -1 and |Crit| = {}", details.join(", ")))
}

/// 6. Small irreducibles, orthonormality, tuple characters and three
/// independent values of `E_unif`.
fn criterion_6() -> Outcome {
    let table = [
        (vec![1], "xi1 - 1", "a1 - 1"),
        (vec![2], "(xi1^2 + xi2)/2 - 2*xi1", "a1*(a1 - 3)/2 + a2"),
        (vec![1, 1], "(xi1^2 - xi2)/2 - xi1 + 1", "(a1 - 1)*(a1 - 2)/2 - a2"),
    ];
    let dims: [fn(i64) -> BigRational; 3] = [
        |n| q(n - 1),
        |n| BigRational::new((n * (n - 3)).into(), 2.into()),
        |n| BigRational::new(((n - 1) * (n - 2)).into(), 2.into()),
    ];
    for ((parts, xi, a), dim) in table.iter().zip(dims) {
        let lambda = IntPartition::new(parts.clone());
        let chi = stable_irreducible(&lambda);
        ensure!(chi == ClassFunction::parse(xi).unwrap(), "{lambda}: {chi}");
        ensure!(chi.to_basis(Basis::A) == ClassFunction::parse(a).unwrap(), "{lambda}: a basis");
        let poly = dimension_poly(&lambda);
        ensure!((0..12).all(|n| poly.eval(n) == dim(n)), "{lambda}: dimension {poly}");
    }
    let irreps: Vec<ClassFunction> = (0..=4)
        .flat_map(integer_partitions)
        .map(|p| stable_irreducible(&IntPartition::new(p)))
        .collect();
    for (i, f) in irreps.iter().enumerate() {
        for (j, g) in irreps.iter().enumerate() {
            let expected = if i == j { q(1) } else { q(0) };
            ensure!(stable_inner(f, g) == expected, "<chi_{i}, chi_{j}> != {expected}");
        }
    }
    for s in 1..=4 {
        let v = stable_inner(&fixed_tuples_character(s), &xi1_minus_one());
        ensure!(v == q(s as i64), "<chi_{s}, xi1 - 1> = {v}");
    }
    let mut monomials = 0;
    for weight in 1..=6usize {
        let perms = Perm::all(weight);
        for parts in integer_partitions(weight) {
            let mut alpha = vec![0usize; weight];
            for p in parts {
                alpha[p - 1] += 1;
            }
            while alpha.last() == Some(&0) {
                alpha.pop();
            }
            let by_partitions = e_unif_monomial(&alpha);
            let poisson = stable_inner(&ClassFunction::xi_monomial(&alpha), &ClassFunction::one());
            let total: BigInt = perms
                .iter()
                .map(|s| {
                    alpha
                        .iter()
                        .enumerate()
                        .map(|(i, &e)| BigInt::from(s.xi(i + 1)).pow(e as u32))
                        .product::<BigInt>()
                })
                .sum();
            let brute = BigRational::new(total, BigInt::from(perms.len()));
            ensure!(by_partitions == poisson && poisson == brute, "{alpha:?}: {by_partitions}, {poisson}, {brute}");
            monomials += 1;
        }
    }
    Ok(format!(
        "small irreducibles in both bases, {} irreducibles orthonormal, tuple characters s<=4, E_unif agrees three ways on {monomials} monomials",
        irreps.len()
    ))
}

/// The morphism `C_{x^m} → C_{x^d}` sending vertex 0 to vertex `shift`.
fn power_map(m: usize, d: usize, shift: usize) -> GraphMorphism {
    let target = cycle(&format!("x^{d}"), 1);
    let source = cycle(&format!("x^{m}"), 1);
    let step = |g: &MultiCoreGraph, v: usize| g.edges()[g.out_edge(v, 0).unwrap()].head;
    let mut v = 0;
    for _ in 0..shift {
        v = step(&target, v);
    }
    let mut map = vec![0; m];
    let mut u = 0;
    for _ in 0..m {
        map[u] = v;
        u = step(&source, u);
        v = step(&target, v);
    }
    GraphMorphism::new(source, target, map).unwrap()
}

/// 7. The Möbius tables satisfy their defining sums, `R` vanishes off
/// algebraic intervals, and the rank-one values hold.
fn criterion_7() -> Outcome {
    let (pair, _) = MultiCoreGraph::disjoint_union(&[cycle("xyXY", 2), cycle("xY", 2)]);
    let mut family = vec![
        GraphMorphism::to_bouquet(&cycle("xyXY", 2)),
        GraphMorphism::to_bouquet(&cycle("xxyy", 2)),
        GraphMorphism::to_bouquet(&cycle("xyxY", 2)),
        GraphMorphism::to_bouquet(&pair),
    ];
    for m in 1..=6 {
        family.push(power_map(m, 1, 0));
    }
    family.push(power_map(6, 2, 0));
    family.push(power_map(6, 3, 1));
    let (mut intervals, mut non_algebraic) = (0, 0);
    for eta in &family {
        let lattice = QuotientLattice::new(eta, &opts()).map_err(|e| e.to_string())?;
        let t = MoebiusTables::new(&lattice);
        let below = lattice.below_sets();
        let alg = lattice.algebraic_intervals();
        for b in 0..lattice.len() {
            for a in below[b].ones() {
                let inner: Vec<usize> = below[b].ones().filter(|&x| below[x].contains(a)).collect();
                let (mut by_l, mut by_r, mut by_c) = (LiftSum::zero(), LiftSum::zero(), LiftSum::zero());
                for &q1 in &inner {
                    by_l.add(t.l(q1, b));
                    by_r.add(t.r(a, q1));
                    for &q2 in inner.iter().filter(|&&q2| below[q2].contains(q1)) {
                        by_c.add(t.c(q1, q2));
                    }
                }
                let target = t.phi(a, b).rational();
                ensure!(
                    by_l.rational() == target && by_r.rational() == target && by_c.rational() == target,
                    "sums differ on [{a}, {b}]"
                );
                if !alg[b].contains(a) {
                    ensure!(t.r(a, b).rational().is_zero(), "R does not vanish on [{a}, {b}]");
                    non_algebraic += 1;
                }
                intervals += 1;
            }
        }
        let whole = phi(eta, &opts()).map_err(|e| e.to_string())?;
        ensure!(t.phi(lattice.bottom(), lattice.top()).rational() == whole, "table and phi() disagree");
    }
    let mut rank_one = 0;
    for m in 1..=6usize {
        for d in (1..=m).filter(|d| m % d == 0) {
            for shift in 0..d {
                let eta = power_map(m, d, shift);
                let lattice = QuotientLattice::new(&eta, &opts()).map_err(|e| e.to_string())?;
                let t = MoebiusTables::new(&lattice);
                let (bottom, top) = (lattice.bottom(), lattice.top());
                let l = t.l(bottom, top).rational();
                ensure!(l.is_polynomial() && l.numerator() == RationalFnOfN::one().numerator(), "L != 1 for x^{m} -> x^{d}");
                let whole = phi(&eta, &opts()).map_err(|e| e.to_string())?;
                let count = RationalFnOfN::constant(lattice.len() as i64);
                ensure!(whole.is_polynomial() && whole.numerator() == count.numerator(), "Phi != |Decomp| for x^{m} -> x^{d}");
                rank_one += 1;
            }
        }
    }
    Ok(format!(
        "{intervals} intervals over {} morphisms ({non_algebraic} non-algebraic with R = 0); rank-one values on {rank_one} maps",
        family.len()
    ))
}

/// Connected and two-component multi core graphs on at most five vertices,
/// closed under quotients, up to isomorphism.
fn small_graphs() -> Vec<MultiCoreGraph> {
    let mut cycles = Vec::new();
    for t in 1..=5 {
        for w in enumerate_cyclically_reduced(2, t, 10_000).unwrap() {
            cycles.push(MultiCoreGraph::cycle(&CyclicWord::from_word(&w).unwrap()));
        }
    }
    let mut seen: HashSet<CanonicalForm> = HashSet::new();
    let mut base = Vec::new();
    for g in cycles.iter() {
        if seen.insert(g.canonical_form()) {
            base.push(g.clone());
        }
    }
    let singles = base.clone();
    for (i, g) in singles.iter().enumerate() {
        for h in &singles[i..] {
            if g.num_vertices() + h.num_vertices() <= 5 {
                let (u, _) = MultiCoreGraph::disjoint_union(&[g.clone(), h.clone()]);
                if seen.insert(u.canonical_form()) {
                    base.push(u);
                }
            }
        }
    }
    let mut all = base.clone();
    for g in &base {
        for p in enumerate_valid_partitions(g, None, &opts()).unwrap() {
            let h = GraphMorphism::quotient(g, &p.partition).unwrap().codomain().clone();
            if seen.insert(h.canonical_form()) {
                all.push(h);
            }
        }
    }
    all
}

/// 8. Norms against the immediate-morphism search, the freeness criterion and
/// the B-norm bound.
fn criterion_8() -> Outcome {
    let graphs = small_graphs();
    let budget = OracleBudget::default();
    let (mut morphisms, mut compared, mut skipped, mut bounded) = (0, 0, 0, 0);
    for g in &graphs {
        let mut etas = vec![GraphMorphism::to_bouquet(g)];
        for p in enumerate_valid_partitions(g, None, &opts()).map_err(|e| e.to_string())? {
            etas.push(GraphMorphism::quotient(g, &p.partition).map_err(|e| e.to_string())?);
        }
        for eta in &etas {
            morphisms += 1;
            let (chi_g, delta) = (eta.domain().chi(), eta.codomain());
            let nrm = norm(eta, &opts()).map_err(|e| e.to_string())? as i64;
            let lower = chi_g - delta.chi();
            ensure!(nrm >= lower, "norm {nrm} below chi difference {lower}");
            let free = is_free(eta, &opts()).map_err(|e| e.to_string())?;
            ensure!(free == (nrm == lower), "is_free = {free} but norm {nrm}, chi difference {lower}");
            match immediate_morphism_norm_oracle(eta, &budget) {
                Some(found) => {
                    ensure!(found as i64 == nrm, "norm {nrm} but immediate search finds {found}");
                    compared += 1;
                }
                None => skipped += 1,
            }
            if eta.is_surjective() {
                let bn = b_norm(eta, &opts()).map_err(|e| e.to_string())? as i64;
                let bound = eta.domain().num_components() as i64 - delta.chi();
                ensure!(bn <= bound, "B-norm {bn} exceeds c - chi = {bound}");
                bounded += 1;
            }
        }
    }
    Ok(format!(
        "{morphisms} morphisms from {} graphs: oracle agrees on {compared}, skipped {skipped} (budget exhausted); freeness criterion on all; B-norm bound on {bounded} surjective",
        graphs.len()
    ))
}

/// Cyclically reduced words of length `t` over `r` generators, counted by
/// walking every reduced word.
fn count_cyclically_reduced(r: usize, t: usize) -> u128 {
    fn go(r: usize, left: usize, first: usize, last: usize) -> u128 {
        if left == 0 {
            return u128::from(first != (last ^ 1));
        }
        (0..2 * r).filter(|&k| k != (last ^ 1)).map(|k| go(r, left - 1, first, k)).sum()
    }
    (0..2 * r).map(|k| go(r, t - 1, k, k)).sum()
}

/// 9. Counts of cyclically reduced words and the trace identity.
fn criterion_9() -> Outcome {
    for r in 1..=3 {
        for t in 1..=10 {
            let counted = count_cyclically_reduced(r, t);
            ensure!(cyclically_reduced_count(r, t) == counted, "r={r} t={t}: formula vs {counted}");
            if counted <= 20_000 {
                let listed = enumerate_cyclically_reduced(r, t, 20_000).map_err(|e| e.to_string())?;
                let distinct: HashSet<_> = listed.iter().collect();
                ensure!(listed.len() as u128 == counted && distinct.len() == listed.len(), "r={r} t={t}: listing");
            }
        }
    }
    let mut checks = 0;
    for seed in 0..20u64 {
        for s in 1..=2 {
            for n in s.max(2)..=6 {
                let g = build_random_schreier(2, s, n, seed, 10_000).map_err(|e| e.to_string())?;
                for t in 1..=5 {
                    let c = trace_identity_check(&g, t, 1_000_000).map_err(|e| e.to_string())?;
                    ensure!(c.equal, "seed {seed} s={s} N={n} t={t}: {} vs {}", c.lhs, c.rhs);
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("|CR_t| formula for r<=3, t<=10; trace identity in {checks} cases over 20 seeds"))
}

/// 10. Non-backtracking spectra against the Ihara–Bass prediction.
fn criterion_10() -> Outcome {
    let cases = [(2, 1, 100), (2, 2, 20), (3, 1, 150), (3, 2, 12), (4, 1, 250), (4, 2, 10)];
    let mut graphs = 0;
    for (r, s, n) in cases {
        for seed in 0..3u64 {
            let g = build_random_schreier(r, s, n, seed, 10_000).map_err(|e| e.to_string())?;
            ensure!(g.num_directed_edges() <= 2000, "case too large");
            let d = 2 * r;
            let report = hashimoto_spectrum(&g, 2000, 1e-6).map_err(|e| e.to_string())?;
            ensure!(report.ihara_bass, "r={r} s={s} N={n} seed={seed}: deviation {}", report.max_deviation);
            let near = |z: f64| report.eigenvalues.iter().any(|e| (e.re - z).abs() < 1e-6 && e.im.abs() < 1e-6);
            ensure!(near(1.0) && near((d - 1) as f64), "trivial pair missing");
            let vertices = g.num_vertices();
            ensure!(report.plus_minus_one >= (d - 2) * vertices, "only {} eigenvalues at ±1", report.plus_minus_one);
            graphs += 1;
        }
    }
    Ok(format!("{graphs} graphs (d = 4, 6, 8; s = 1, 2) match within 1e-6"))
}

/// 11. Smoke test of the bound for `d = 8`, `s = 1`.
fn criterion_11() -> Outcome {
    let bound = ramanujan_bound(8, 1);
    ensure!((bound - 5.500).abs() < 5e-4, "bound {bound}");
    let trials = bound_experiment(4, 1, &[200, 500, 1000], 20, 2026, 1000).map_err(|e| e.to_string())?;
    let mut summary = Vec::new();
    for n in [200, 500, 1000] {
        let of_n: Vec<_> = trials.iter().filter(|t| t.n == n).collect();
        let max = of_n.iter().map(|t| t.mu).fold(f64::MIN, f64::max);
        summary.push(format!("N={n}: {}/20 below, max mu {max:.3}", of_n.iter().filter(|t| t.below).count()));
    }
    let below = trials.iter().filter(|t| t.below).count();
    let share = below as f64 / trials.len() as f64;
    let flag = if share >= 0.95 { "" } else { " [FLAGGED: fewer than 95% below]" };
    Ok(format!("bound {bound:.3}; {}; {below}/{} below{flag}", summary.join("; "), trials.len()))
}

/// Free and cyclic reduction followed by a rotation search, on letters
/// written `x, X, y, Y`.
fn rotation_oracle(u: &str, v: &str) -> bool {
    fn inverse(c: char) -> char {
        if c.is_lowercase() {
            c.to_ascii_uppercase()
        } else {
            c.to_ascii_lowercase()
        }
    }
    fn cyclic(s: &str) -> Vec<char> {
        let mut out: Vec<char> = Vec::new();
        for c in s.chars() {
            if out.last() == Some(&inverse(c)) {
                out.pop();
            } else {
                out.push(c);
            }
        }
        let (mut i, mut j) = (0, out.len());
        while j - i >= 2 && out[i] == inverse(out[j - 1]) {
            i += 1;
            j -= 1;
        }
        out[i..j].to_vec()
    }
    let (a, b) = (cyclic(u), cyclic(v));
    a.len() == b.len() && (a.is_empty() || (0..a.len()).any(|k| a[k..].iter().chain(&a[..k]).eq(b.iter())))
}

fn random_letters(rng: &mut ChaCha20Rng, len: usize) -> String {
    (0..len).map(|_| ['x', 'X', 'y', 'Y'][rng.random_range(0..4)]).collect()
}

/// 12. Conjugacy decisions against the rotation oracle.
fn criterion_12() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(12);
    let (mut pairs, mut conjugate) = (0, 0);
    while pairs < 10_000 {
        let len = rng.random_range(1..=8);
        let u = random_letters(&mut rng, len);
        let v = match pairs % 4 {
            0 => {
                let len = rng.random_range(1..=8);
                random_letters(&mut rng, len)
            }
            // A rotation of u.
            1 => {
                let k = rng.random_range(0..u.len());
                format!("{}{}", &u[k..], &u[..k])
            }
            // A rotation of u⁻¹.
            2 => {
                let inv: String = u
                    .chars()
                    .rev()
                    .map(|c| if c.is_lowercase() { c.to_ascii_uppercase() } else { c.to_ascii_lowercase() })
                    .collect();
                let k = rng.random_range(0..inv.len());
                format!("{}{}", &inv[k..], &inv[..k])
            }
            // g u g⁻¹ for a random letter g.
            _ => {
                let short: String = u.chars().take(6).collect();
                let g = random_letters(&mut rng, 1);
                let g_inv = if g == g.to_lowercase() { g.to_uppercase() } else { g.to_lowercase() };
                format!("{g}{short}{g_inv}")
            }
        };
        let (wu, wv) = (word(&u), word(&v));
        if wu.is_identity() || wv.is_identity() {
            continue;
        }
        let (decided, _) = decide_conjugate(&wu, &wv).map_err(|e| format!("{u} {v}: {e}"))?;
        let expected = rotation_oracle(&u, &v);
        ensure!(decided == expected, "{u} ~ {v}: decided {decided}, oracle {expected}");
        conjugate += usize::from(expected);
        pairs += 1;
    }
    Ok(format!("{pairs} pairs agree ({conjugate} conjugate)"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("commutator formula and S6^2 oracle", criterion_1),
        ("oracle equivalence sweep", criterion_2),
        ("primitivity suite", criterion_3),
        ("leading correction terms", criterion_4),
        ("joint critical sets", criterion_5),
        ("character ring", criterion_6),
        ("Moebius consistency", criterion_7),
        ("norm machinery", criterion_8),
        ("word counts and trace identity", criterion_9),
        ("Ihara-Bass dictionary", criterion_10),
        ("Schreier bound smoke test", criterion_11),
        ("conjugacy decisions", criterion_12),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(check).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
